"""Assertion oracles.

An oracle answers whether a relation holds between the denotations of two
expressions in a shared context. Every answered query is appended to the
oracle's transcript, which is the only thing the adversary gets to see.
"""

from typing import Callable, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, computed_field

from semlab.logging_config import get_logger
from semlab.semantics import EMPTY_CONTEXT, Context, Language, Referent, ReferentTag, ResourceLimitError

logger = get_logger(__name__)


class Relation(BaseModel):
    """A total, decidable predicate over pairs of referents."""

    model_config = ConfigDict(frozen=True)

    name: str
    symbol: str
    holds: Callable[[Referent, Referent], bool]

    def __call__(self, left: Referent, right: Referent) -> bool:
        return self.holds(left, right)


def _equal(left: Referent, right: Referent) -> bool:
    return left == right


def _entails(left: Referent, right: Referent) -> bool:
    """a <= b on naturals (INF on top); any other pair only when structurally equal."""
    numeric = (ReferentTag.NAT, ReferentTag.INF)
    if left.tag in numeric and right.tag in numeric:
        if right.tag is ReferentTag.INF:
            return True
        if left.tag is ReferentTag.INF:
            return False
        return left.value <= right.value
    return left == right


def _contrary(left: Referent, right: Referent) -> bool:
    """Two booleans that cannot both be true."""
    if left.tag is not ReferentTag.BOOL or right.tag is not ReferentTag.BOOL:
        return False
    return not (left.value and right.value)


EQUALITY = Relation(name="eq", symbol="=", holds=_equal)
ENTAILMENT = Relation(name="leq", symbol="≤", holds=_entails)
CONTRARY = Relation(name="contrary", symbol="⌣", holds=_contrary)


def relation_library() -> Dict[str, Relation]:
    """Shipped relations keyed by name."""
    return {relation.name: relation for relation in (EQUALITY, ENTAILMENT, CONTRARY)}


def get_relation(name: str) -> Relation:
    """Look a relation up by name or symbol."""
    for relation in relation_library().values():
        if name in (relation.name, relation.symbol):
            return relation
    raise KeyError(f"unknown relation {name!r}")


class QueryRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    expression: str
    other: str
    context: Context
    answer: int


class QueryTranscript(BaseModel):
    """Immutable, ordered log of answered queries."""

    model_config = ConfigDict(frozen=True)

    entries: Tuple[QueryRecord, ...] = ()

    @computed_field
    @property
    def count(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


class BudgetExhaustedError(ResourceLimitError):
    """Raised when an emulator asks more queries than its oracle allows."""

    def __init__(self, budget: int, transcript: QueryTranscript):
        super().__init__(f"oracle query budget of {budget} exhausted")
        self.budget = budget
        self.transcript = transcript


class AssertionOracle:
    """Answers ``rel(den(e|k), den(e'|k))`` for one language.

    ``record=False`` keeps only the query counter, for scans that would
    otherwise hold millions of transcript entries.
    """

    def __init__(
        self,
        language: Language,
        relation: Relation = EQUALITY,
        budget: Optional[int] = None,
        record: bool = True,
    ):
        self.language = language
        self.relation = relation
        self.budget = budget
        self.record = record
        self.query_count = 0
        self._entries: List[QueryRecord] = []
        logger.debug(f"AssertionOracle for {language.name} ({relation.symbol}), budget {budget}")

    def assert_query(self, expression: str, other: str, context: Context = EMPTY_CONTEXT) -> int:
        """Answer one query: 1 if the relation holds, else 0.

        Raises:
            BudgetExhaustedError: If the budget is already spent
        """
        if self.budget is not None and self.query_count >= self.budget:
            raise BudgetExhaustedError(self.budget, self.read_transcript())

        answer = int(
            self.relation.holds(self.language.denote(expression, context), self.language.denote(other, context))
        )
        self.query_count += 1
        if self.record:
            self._entries.append(QueryRecord(expression=expression, other=other, context=context, answer=answer))
        return answer

    __call__ = assert_query

    def read_transcript(self) -> QueryTranscript:
        return QueryTranscript(entries=tuple(self._entries))


def replay(transcript: QueryTranscript, language: Language, relation: Relation = EQUALITY) -> List[QueryRecord]:
    """Re-answer every recorded query against ``language``; return the records that now differ."""
    oracle = AssertionOracle(language, relation, record=False)
    return [
        record
        for record in transcript.entries
        if oracle.assert_query(record.expression, record.other, record.context) != record.answer
    ]
