import pytest
from hypothesis import given
from hypothesis import strategies as st

from semlab.emulation import (
    CandidateBudgetError,
    InconsistentTablesError,
    RelationTable,
    all_strings,
    binary_search_emulator,
    delta_eq,
    delta_rel,
    emulate_eq,
    emulate_rel,
    linear_scan_emulator,
    string_at,
    string_index,
)
from semlab.languages import ARITH_ALPHABET
from semlab.oracle import ENTAILMENT, EQUALITY, AssertionOracle
from semlab.semantics import Alphabet, compare, iter_strings


@given(st.integers(min_value=0, max_value=10**6))
def test_string_at_inverts_string_index(index):
    """Test unranking then ranking is the identity."""
    assert string_index(ARITH_ALPHABET, string_at(ARITH_ALPHABET, index)) == index


def test_string_index_matches_enumeration():
    """Test ranks agree with the lazy enumerator."""
    alphabet = Alphabet.of("abc")
    enumerator = all_strings(alphabet)

    for expected_index in range(200):
        text = next(enumerator)
        assert string_index(alphabet, text) == expected_index
        assert enumerator.index(text) == expected_index
        assert string_at(alphabet, expected_index) == text


def test_enumerator_tracks_length():
    """Test the enumerator exposes the length it is currently generating."""
    enumerator = all_strings(Alphabet.of("ab"))
    for _ in range(4):
        next(enumerator)

    assert enumerator.length == 2
    assert enumerator.position == 0


def test_string_index_rejects_foreign_symbols():
    """Test ranking a string outside the alphabet fails."""
    with pytest.raises(ValueError):
        string_index(ARITH_ALPHABET, "x")


def test_string_at_rejects_negative_index():
    """Test negative ranks are invalid."""
    with pytest.raises(ValueError):
        string_at(ARITH_ALPHABET, -1)


def test_emulate_eq_sum_maps_to_numeral(arith):
    """Test 2+2 is represented by the index of 4."""
    oracle = AssertionOracle(arith)
    representation = emulate_eq("2+2", oracle)

    assert representation.index == 5
    assert representation.canonical == "4"
    assert representation.queries_used == 6
    assert oracle.query_count == 6


def test_emulate_eq_zero(arith):
    """Test 0 is its own canonical form, just after the empty string."""
    representation = emulate_eq("0", AssertionOracle(arith))

    assert representation.index == 1
    assert representation.canonical == "0"


def test_emulate_eq_invalid_expressions_share_the_empty_string(arith):
    """Test every invalid expression maps to the invalid empty string."""
    assert emulate_eq("+", AssertionOracle(arith)).index == 0
    assert emulate_eq("1++", AssertionOracle(arith)).index == 0


def test_emulate_eq_accepts_symbols_outside_the_alphabet(arith):
    """Test an expression over foreign symbols is NULL and lands on the empty string."""
    oracle = AssertionOracle(arith, budget=10)
    representation = emulate_eq("2*2", oracle)

    assert representation.index == 0
    assert representation.canonical == ""
    assert oracle.query_count == 1
    with pytest.raises(CandidateBudgetError):
        emulate_eq("2*2", AssertionOracle(arith), max_candidates=0)


def test_emulate_rel_rejects_symbols_outside_the_alphabet(arith):
    """Test a relation table is refused for a string the enumeration never reaches."""
    oracle = AssertionOracle(arith, ENTAILMENT)

    with pytest.raises(ValueError):
        emulate_rel("2*2", oracle)
    assert oracle.query_count == 0


def test_emulate_eq_is_deterministic(arith):
    """Test two runs give the same representation and transcript."""
    first, second = AssertionOracle(arith), AssertionOracle(arith)

    assert emulate_eq("1+1+1", first) == emulate_eq("1+1+1", second)
    assert first.read_transcript() == second.read_transcript()


def test_emulate_eq_respects_candidate_limit(arith):
    """Test a too-small candidate allowance raises."""
    with pytest.raises(CandidateBudgetError):
        emulate_eq("9", AssertionOracle(arith), max_candidates=3)


def test_emulate_eq_needs_equality(arith):
    """Test emulate_eq refuses other relations."""
    with pytest.raises(ValueError):
        emulate_eq("1", AssertionOracle(arith, ENTAILMENT))


def test_emulate_eq_isomorphism_on_arith(arith):
    """Test delta_eq on representations agrees with ground truth for all short sums."""
    expressions = [text for text in iter_strings(arith.alphabet, 3) if arith.may_denote(text)][:60]
    oracle = AssertionOracle(arith, record=False)
    representations = {expression: emulate_eq(expression, oracle) for expression in expressions}

    for expression in expressions:
        for other in expressions:
            truth = int(compare(arith, EQUALITY, expression, other))
            assert delta_eq(representations[expression], representations[other]) == truth


def test_emulate_rel_table_size(arith):
    """Test a table holds both directions for every candidate up to the subject."""
    table = emulate_rel("2", AssertionOracle(arith, ENTAILMENT))

    # candidates "", "0", "1", "2"; (2, 2) is stored once
    assert table.size == 2 * 4 - 1
    assert table.lookup("2", "1") == 0
    assert table.lookup("1", "2") == 1
    assert table.lookup("2", "2") == 1


def test_delta_rel_uses_either_table(arith):
    """Test the decider reads the pair from whichever table enumerated it."""
    oracle = AssertionOracle(arith, ENTAILMENT)
    small, large = emulate_rel("1", oracle), emulate_rel("3", oracle)

    assert delta_rel(small, large) == 1
    assert delta_rel(large, small) == 0
    assert delta_rel(small, small) == 1


def test_delta_rel_matches_ground_truth(arith):
    """Test table-based decisions agree with the relation on short sums."""
    oracle = AssertionOracle(arith, ENTAILMENT, record=False)
    expressions = ["", "0", "3", "7", "12", "1+2"]
    tables = {expression: emulate_rel(expression, oracle) for expression in expressions}

    for expression in expressions:
        for other in expressions:
            truth = int(compare(arith, ENTAILMENT, expression, other))
            assert delta_rel(tables[expression], tables[other]) == truth


def test_delta_rel_inconsistent_tables():
    """Test tables that never met raise InconsistentTablesError."""
    left = RelationTable(subject="a", entries={("a", "a"): 1})
    right = RelationTable(subject="b", entries={("b", "b"): 1})

    with pytest.raises(InconsistentTablesError):
        delta_rel(left, right)


def test_relation_table_serializes_sorted_pairs():
    """Test table entries dump as a sorted list of pair/answer objects."""
    table = RelationTable(subject="1", entries={("1", "0"): 0, ("0", "1"): 1})
    dumped = table.model_dump(mode="json")

    assert dumped["entries"] == [{"pair": ["0", "1"], "answer": 1}, {"pair": ["1", "0"], "answer": 0}]
    assert dumped["size"] == 2


@pytest.mark.parametrize("m", [1, 2, 37, 99, 100])
def test_binary_search_recovers_m(leq_language, m):
    """Test binary search finds m exactly within its range."""
    result = binary_search_emulator(AssertionOracle(leq_language(m)), 100)

    assert result.m_estimate == m
    assert not result.above_n
    assert result.queries <= 8


def test_binary_search_reports_m_above_range(leq_language):
    """Test m > N is reported rather than guessed."""
    result = binary_search_emulator(AssertionOracle(leq_language()), 100)

    assert result.m_estimate is None
    assert result.above_n


def test_binary_search_on_smallest_range(leq_language):
    """Test N=1 needs at most two queries."""
    result = binary_search_emulator(AssertionOracle(leq_language(1)), 1)

    assert result.m_estimate == 1
    assert result.queries <= 2


def test_search_rejects_empty_range(leq_language):
    """Test N must be at least 1."""
    with pytest.raises(ValueError):
        binary_search_emulator(AssertionOracle(leq_language(1)), 0)
    with pytest.raises(ValueError):
        linear_scan_emulator(AssertionOracle(leq_language(1)), 0)


@pytest.mark.parametrize("m", [1, 5, 50])
def test_linear_scan_uses_m_plus_one_queries(leq_language, m):
    """Test the baseline asks 0..m before stopping."""
    result = linear_scan_emulator(AssertionOracle(leq_language(m)), 100)

    assert result.m_estimate == m
    assert result.queries == m + 1


def test_linear_scan_above_range(leq_language):
    """Test the baseline scans the whole range when m > N."""
    result = linear_scan_emulator(AssertionOracle(leq_language()), 10)

    assert result.m_estimate is None
    assert result.queries == 11
