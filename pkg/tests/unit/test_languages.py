import pytest
from hypothesis import given
from hypothesis import strategies as st

from semlab.languages import (
    INFINITY,
    LEQ_ALPHABET,
    LanguageSpecError,
    LeqVariant,
    bound_context,
    comparison_context,
    definition_context,
    format_bound,
    leq_context,
    leq_program,
    make_language,
    make_leq,
    make_leq_in,
    numeral_context,
    parse_bound,
    parse_members,
    print_slot_numeral,
)
from semlab.semantics import EMPTY_CONTEXT, FALSE, INF, NULL, TRUE, Context, Referent


def test_arith_denotes_sums(arith):
    """Test arith evaluates sums of numerals."""
    assert arith.denote("2+2") == Referent.nat(4)
    assert arith.denote("007") == Referent.nat(7)
    assert arith.denote("10+20+30") == Referent.nat(60)


@pytest.mark.parametrize("expression", ["", "+", "1+", "+1", "1++2"])
def test_arith_rejects_malformed_expressions(arith, expression):
    """Test malformed sums denote NULL."""
    assert arith.denote(expression) == NULL


@pytest.mark.parametrize(
    "context,valid",
    [
        (Context(left="1+"), True),
        (Context(right="+1"), True),
        (Context(left="3+4+", right="+5"), True),
        (Context(left="1"), False),
        (Context(right="1"), False),
        (Context(left="+"), False),
    ],
)
def test_arith_context_validity(arith, context, valid):
    """Test an expression is valid only where its surroundings stay a sum."""
    value = arith.denote("2", context)

    assert (value == Referent.nat(2)) is valid
    assert value.is_null is not valid


def test_arith_denotes_numerals_of_any_length(arith):
    """Test a 5000-digit numeral denotes its value rather than failing to convert."""
    repunit = "1" * 5000
    value = (10**5000 - 1) // 9

    assert arith.denote(repunit) == Referent.nat(value)
    assert arith.denote(f"{repunit}+{repunit}", Context(left="1+")) == Referent.nat(2 * value)


def test_leq_print_slot_with_a_huge_numeral():
    """Test the print slot reads a numeral far past the usual digit limit."""
    n = 10**5000
    context = leq_context(LeqVariant.LEQ_CALL, n)

    assert print_slot_numeral(context) == n
    assert make_leq(5).denote(LeqVariant.LEQ_CALL.value, context) == FALSE
    assert make_leq(INFINITY).denote(LeqVariant.LEQ_CALL.value, context) == TRUE


@given(st.lists(st.integers(min_value=0, max_value=999), min_size=1, max_size=5))
def test_arith_value_is_context_free(numbers):
    """Test a valid sum denotes the same value in any valid context."""
    language = make_language("arith")
    expression = "+".join(str(n) for n in numbers)

    assert language.denote(expression) == Referent.nat(sum(numbers))
    assert language.denote(expression, Context(left="1+", right="+2")) == Referent.nat(sum(numbers))


def test_arith_prefilter(arith):
    """Test may_denote accepts exactly the sums."""
    assert arith.may_denote("1+2")
    assert not arith.may_denote("1+")
    assert not arith.may_denote("")


def test_leq_program_rendering():
    """Test the rendered program matches the template exactly."""
    assert leq_program(LeqVariant.LEQ_CALL, 7) == "def leq() -> bool:\n    return 7 < M\nprint(leq())"
    assert leq_program(LeqVariant.TRUE_LITERAL, 0) == "def leq() -> bool:\n    return 0 < M\nprint(True)"
    assert leq_program(LeqVariant.LEQ_CALL, 3, "in") == "def leq() -> bool:\n    return 3 in M\nprint(leq())"


def test_leq_program_has_no_trailing_newline():
    """Test template lines are LF-joined without a final newline."""
    program = leq_program(LeqVariant.LEQ_CALL, 1)

    assert not program.endswith("\n")
    assert "\r" not in program
    assert program.count("\n") == 2


def test_leq_context_rejects_negative_numerals():
    """Test template numerals are natural numbers."""
    with pytest.raises(ValueError):
        leq_context(LeqVariant.LEQ_CALL, -1)


def test_leq_alphabet_covers_templates():
    """Test every rendered program uses only alphabet symbols."""
    for variant in LeqVariant:
        for operator in ("<", "in"):
            assert LEQ_ALPHABET.covers(leq_program(variant, 1234567890, operator))


@given(st.integers(min_value=0, max_value=10**9))
def test_print_slot_numeral_reads_back(n):
    """Test the numeral of a print slot context is recoverable."""
    assert print_slot_numeral(leq_context(LeqVariant.LEQ_CALL, n)) == n


def test_print_slot_numeral_ignores_other_contexts():
    """Test non print-slot contexts have no numeral."""
    assert print_slot_numeral(EMPTY_CONTEXT) is None
    assert print_slot_numeral(bound_context(LeqVariant.LEQ_CALL, 4)) is None
    assert print_slot_numeral(leq_context(LeqVariant.LEQ_CALL, 4, "in")) is None
    assert print_slot_numeral(leq_context(LeqVariant.LEQ_CALL, 4, "in"), "in") == 4


@pytest.mark.parametrize("n,expected", [(0, True), (4, True), (5, False), (99, False)])
def test_leq_call_in_print_slot(leq_language, n, expected):
    """Test den(leq() | print slot n) is BOOL(n < m)."""
    language = leq_language(5)

    assert language.denote("leq()", leq_context(LeqVariant.LEQ_CALL, n)) == Referent.boolean(expected)


def test_true_literal_in_print_slot(leq_language):
    """Test True is BOOL(true) in every print slot."""
    language = leq_language(0)

    assert language.denote("True", leq_context(LeqVariant.TRUE_LITERAL, 3)) == TRUE


def test_leq_inf_is_always_true(leq_language):
    """Test L_inf answers true at every numeral."""
    language = leq_language()

    for n in (0, 1, 10**12):
        assert language.denote("leq()", leq_context(LeqVariant.LEQ_CALL, n)) == TRUE


def test_leq_call_and_true_separate_exactly_from_m(leq_language):
    """Test leq() and True differ at numeral n iff n >= m, for every m <= 32 and n <= 64."""
    for m in range(33):
        language = leq_language(m)
        for n in range(65):
            context = leq_context(LeqVariant.LEQ_CALL, n)
            separated = language.denote("leq()", context) != language.denote("True", context)
            assert separated == (n >= m), (m, n)

    unbounded = leq_language()
    assert all(
        unbounded.denote("leq()", leq_context(LeqVariant.LEQ_CALL, n))
        == unbounded.denote("True", leq_context(LeqVariant.LEQ_CALL, n))
        for n in range(65)
    )


def test_leq_is_null_outside_designated_slots(leq_language):
    """Test leq() is invalid in the empty context and after def."""
    language = leq_language(5)

    assert language.denote("leq()") == NULL
    assert language.denote("True") == NULL
    assert language.denote("leq()", definition_context(LeqVariant.LEQ_CALL, 2)) == NULL
    assert language.denote("garbage", leq_context(LeqVariant.LEQ_CALL, 2)) == NULL


def test_leq_numeral_slot(leq_language):
    """Test the numeral slot accepts canonical numerals only."""
    language = leq_language(5)
    context = numeral_context(LeqVariant.LEQ_CALL)

    assert language.denote("12", context) == Referent.nat(12)
    assert language.denote("012", context) == NULL
    assert language.denote("x", context) == NULL


def test_leq_comparison_slot(leq_language):
    """Test the whole comparison denotes its truth value."""
    language = leq_language(5)
    context = comparison_context(LeqVariant.TRUE_LITERAL)

    assert language.denote("4 < M", context) == TRUE
    assert language.denote("5 < M", context) == Referent.boolean(False)


def test_leq_bound_slot(leq_language):
    """Test M denotes the bound, INF for L_inf."""
    assert leq_language(5).denote("M", bound_context(LeqVariant.LEQ_CALL, 2)) == Referent.nat(5)
    assert leq_language().denote("M", bound_context(LeqVariant.LEQ_CALL, 2)) == INF
    assert leq_language(5).denote("7", bound_context(LeqVariant.LEQ_CALL, 2)) == NULL


def test_leq_validation():
    """Test m must be a natural or infinity."""
    with pytest.raises(LanguageSpecError):
        make_leq(-1)
    with pytest.raises(LanguageSpecError):
        make_leq(2.5)
    assert make_leq(0).name == "leq(m=0)"
    assert make_leq(INFINITY).name == "leq(m=inf)"


def test_leq_template_numerals_include_boundary(leq_language):
    """Test the designated pool covers both sides of m."""
    numerals = leq_language(1000).template_numerals()

    assert {0, 1, 2, 3, 999, 1000, 1001} <= set(numerals)
    assert leq_language().template_numerals() == (0, 1, 2, 3)


def test_leq_in_membership(leq_in_language):
    """Test the membership variant answers n in S."""
    language = leq_in_language({2, 3})

    assert language.name == "leq-in(S={2,3})"
    assert language.denote("leq()", leq_context(LeqVariant.LEQ_CALL, 2, "in")) == TRUE
    assert language.denote("leq()", leq_context(LeqVariant.LEQ_CALL, 4, "in")) == Referent.boolean(False)
    assert language.denote("M", bound_context(LeqVariant.LEQ_CALL, 2, "in")) == NULL


def test_leq_in_validation():
    """Test members must be naturals."""
    with pytest.raises(LanguageSpecError):
        make_leq_in([1, -2])


def test_leq_in_empty_set(leq_in_language):
    """Test the empty set makes every membership false."""
    language = leq_in_language(())

    assert language.name == "leq-in(S={})"
    assert language.denote("leq()", leq_context(LeqVariant.LEQ_CALL, 0, "in")) == Referent.boolean(False)


@pytest.mark.parametrize("text,expected", [("5", 5), ("0", 0), ("inf", INFINITY), ("INF", INFINITY), (" 7 ", 7)])
def test_parse_bound(text, expected):
    """Test --m accepts naturals and inf."""
    assert parse_bound(text) == expected


@pytest.mark.parametrize("text", ["-1", "x", "1.5", ""])
def test_parse_bound_rejects_garbage(text):
    """Test malformed bounds raise LanguageSpecError."""
    with pytest.raises(LanguageSpecError):
        parse_bound(text)


def test_format_bound():
    """Test bounds print as decimal or inf."""
    assert format_bound(INFINITY) == "inf"
    assert format_bound(12) == "12"


def test_parse_members():
    """Test --set parsing."""
    assert parse_members("2,3, 5") == frozenset({2, 3, 5})
    assert parse_members("") == frozenset()
    with pytest.raises(LanguageSpecError):
        parse_members("1,a")


def test_make_language():
    """Test CLI spellings build the right languages."""
    assert make_language("arith").name == "arith"
    assert make_language("leq", m="inf").name == "leq(m=inf)"
    assert make_language("leq-in", members="1,2").name == "leq-in(S={1,2})"


@pytest.mark.parametrize("name,kwargs", [("leq", {}), ("leq-in", {}), ("cobol", {})])
def test_make_language_errors(name, kwargs):
    """Test missing parameters and unknown names are LanguageSpecErrors (and ValueErrors)."""
    with pytest.raises(ValueError):
        make_language(name, **kwargs)
