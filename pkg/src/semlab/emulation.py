"""Constructive emulators.

Strings are enumerated shortest first, then in alphabet order. ``emulate_eq``
maps an expression to the index of the first enumerated string the oracle
deems equal to it; ``emulate_rel`` memoizes the relation against every string
up to and including the expression. Both query only the empty context.
"""

from itertools import count, product
from typing import Dict, Iterator, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, computed_field, field_serializer

from semlab.languages import LeqVariant, leq_context
from semlab.logging_config import get_logger
from semlab.oracle import EQUALITY, AssertionOracle
from semlab.semantics import EMPTY_CONTEXT, Alphabet, Context, ResourceLimitError, SemlabError

logger = get_logger(__name__)


class CandidateBudgetError(ResourceLimitError):
    """Raised when emulate_eq scans more candidates than it was allowed."""

    pass


class InconsistentTablesError(SemlabError):
    """Raised when neither relation table holds the pair being decided."""

    pass


def string_index(alphabet: Alphabet, text: str) -> int:
    """Position of ``text`` in the shortest-first enumeration over ``alphabet``."""
    base = len(alphabet)
    positions = {symbol: position for position, symbol in enumerate(alphabet.symbols)}
    offset = sum(base**length for length in range(len(text)))
    value = 0
    for symbol in text:
        if symbol not in positions:
            raise ValueError(f"symbol {symbol!r} is not in the alphabet")
        value = value * base + positions[symbol]
    return offset + value


def string_at(alphabet: Alphabet, index: int) -> str:
    """Inverse of ``string_index``."""
    if index < 0:
        raise ValueError("index must be >= 0")
    base = len(alphabet)
    length = 0
    while index >= base**length:
        index -= base**length
        length += 1
    symbols = []
    for _ in range(length):
        index, digit = divmod(index, base)
        symbols.append(alphabet.symbols[digit])
    return "".join(reversed(symbols))


class StringEnumerator:
    """Lazy enumeration of every string over an alphabet: the empty string, then length 1, 2, ..."""

    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet
        self.length = 0
        self.position = 0
        self._strings = self._generate()

    def _generate(self) -> Iterator[str]:
        for length in count():
            self.length = length
            for position, symbols in enumerate(product(self.alphabet.symbols, repeat=length)):
                self.position = position
                yield "".join(symbols)

    def __iter__(self) -> "StringEnumerator":
        return self

    def __next__(self) -> str:
        return next(self._strings)

    def index(self, text: str) -> int:
        return string_index(self.alphabet, text)


def all_strings(alphabet: Alphabet) -> StringEnumerator:
    return StringEnumerator(alphabet)


class CanonicalRepresentation(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int
    canonical: str
    queries_used: int


def emulate_eq(
    expression: str, oracle: AssertionOracle, max_candidates: Optional[int] = None
) -> CanonicalRepresentation:
    """Index of the first enumerated string the oracle says equals ``expression``.

    ``expression`` itself is reached at its own index, so the default allowance
    of ``index(expression) + 1`` candidates always suffices on a transparent
    language. An expression with symbols outside the alphabet is never reached;
    its scan is bounded only by ``max_candidates`` and the oracle's budget.

    Raises:
        CandidateBudgetError: If no match is found within ``max_candidates``
    """
    if oracle.relation.name != EQUALITY.name:
        raise ValueError(f"emulate_eq needs an equality oracle, got {oracle.relation.name!r}")

    candidates = all_strings(oracle.language.alphabet)
    limit = max_candidates
    if limit is None and candidates.alphabet.covers(expression):
        limit = candidates.index(expression) + 1
    start = oracle.query_count

    for index, candidate in enumerate(candidates):
        if limit is not None and index >= limit:
            raise CandidateBudgetError(
                f"no candidate equal to {expression!r} among the first {limit} (length {candidates.length})"
            )
        if oracle.assert_query(expression, candidate, EMPTY_CONTEXT):
            logger.debug(f"emulate_eq({expression!r}) -> {index} ({candidate!r})")
            return CanonicalRepresentation(index=index, canonical=candidate, queries_used=oracle.query_count - start)

    raise AssertionError("unreachable: the enumeration is infinite")


def delta_eq(rep: CanonicalRepresentation, other: CanonicalRepresentation, context: Context = EMPTY_CONTEXT) -> int:
    """Equality decider for canonical indices; the context plays no part."""
    return int(rep.index == other.index)


class RelationTable(BaseModel):
    """The relation between ``subject`` and every string enumerated up to it, in both directions."""

    model_config = ConfigDict(frozen=True)

    subject: str
    entries: Dict[Tuple[str, str], int]

    @field_serializer("entries")
    def _serialize_entries(self, entries: Dict[Tuple[str, str], int]) -> List[dict]:
        return [{"pair": list(pair), "answer": answer} for pair, answer in sorted(entries.items())]

    @computed_field
    @property
    def size(self) -> int:
        return len(self.entries)

    def lookup(self, expression: str, other: str) -> Optional[int]:
        return self.entries.get((expression, other))


def emulate_rel(expression: str, oracle: AssertionOracle) -> RelationTable:
    """Memoize the oracle's relation against every candidate up to and including ``expression``."""
    if not oracle.language.alphabet.covers(expression):
        raise ValueError(f"{expression!r} is not a string over the language's alphabet; its table is unbounded")
    entries: Dict[Tuple[str, str], int] = {}
    for candidate in all_strings(oracle.language.alphabet):
        entries[expression, candidate] = oracle.assert_query(expression, candidate, EMPTY_CONTEXT)
        entries[candidate, expression] = oracle.assert_query(candidate, expression, EMPTY_CONTEXT)
        if candidate == expression:
            break

    logger.debug(f"emulate_rel({expression!r}) -> {len(entries)} entries")
    return RelationTable(subject=expression, entries=entries)


def delta_rel(rep: RelationTable, other: RelationTable, context: Context = EMPTY_CONTEXT) -> int:
    """Decide the relation for (rep.subject, other.subject) from whichever table enumerated the pair.

    Raises:
        InconsistentTablesError: If neither table contains the pair
    """
    key = (rep.subject, other.subject)
    answer = rep.lookup(*key)
    if answer is None:
        answer = other.lookup(*key)
    if answer is None:
        raise InconsistentTablesError(f"neither table holds {key!r}; were they built over the same alphabet?")
    return answer


class SearchResult(BaseModel):
    """Estimate of the LEQ bound. ``m_estimate`` is None when m exceeds the search range."""

    model_config = ConfigDict(frozen=True)

    n_max: int
    m_estimate: Optional[int]
    queries: int

    @computed_field
    @property
    def above_n(self) -> bool:
        return self.m_estimate is None


def _leq_answer(oracle: AssertionOracle, n: int) -> int:
    context = leq_context(LeqVariant.LEQ_CALL, n)
    return oracle.assert_query(LeqVariant.LEQ_CALL.value, LeqVariant.TRUE_LITERAL.value, context)


def binary_search_emulator(oracle: AssertionOracle, n_max: int) -> SearchResult:
    """Recover m from an L_m oracle, exactly when m <= n_max.

    The answer at context n is 1 iff n < m, so m is the first n in [0, n_max]
    answering 0; no such n means m > n_max.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")

    start = oracle.query_count
    low, high = 0, n_max + 1
    while low < high:
        middle = (low + high) // 2
        if _leq_answer(oracle, middle):
            low = middle + 1
        else:
            high = middle

    estimate = low if low <= n_max else None
    return SearchResult(n_max=n_max, m_estimate=estimate, queries=oracle.query_count - start)


def linear_scan_emulator(oracle: AssertionOracle, n_max: int) -> SearchResult:
    """Baseline: ask n = 0, 1, ... until the first 0 answer."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")

    start = oracle.query_count
    for n in range(n_max + 1):
        if not _leq_answer(oracle, n):
            return SearchResult(n_max=n_max, m_estimate=n, queries=oracle.query_count - start)
    return SearchResult(n_max=n_max, m_estimate=None, queries=oracle.query_count - start)
