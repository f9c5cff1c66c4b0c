"""Foundational types for contextual denotation.

Alphabets, contexts, referents and the ``Language`` interface every concrete
language implements, plus the bounded-exhaustive support and strong
transparency checks that classify languages.
"""

from abc import ABC, abstractmethod
from enum import Enum
from itertools import product
from typing import TYPE_CHECKING, Iterator, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, computed_field, model_validator

from semlab.logging_config import get_logger

if TYPE_CHECKING:
    from semlab.oracle import Relation

logger = get_logger(__name__)


class SemlabError(Exception):
    """Base exception for semlab errors."""

    pass


class ResourceLimitError(SemlabError):
    """Raised when an exhaustive enumeration exceeds its configured budget."""

    pass


class Alphabet(BaseModel):
    """Ordered set of symbols. The order is the enumeration order."""

    model_config = ConfigDict(frozen=True)

    symbols: Tuple[str, ...]

    @model_validator(mode="after")
    def _check_symbols(self) -> "Alphabet":
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError(f"Alphabet symbols must be distinct: {self.symbols}")
        if any(len(symbol) != 1 for symbol in self.symbols):
            raise ValueError("Alphabet symbols must be single characters")
        return self

    @classmethod
    def of(cls, symbols: str) -> "Alphabet":
        """Build an alphabet from a string whose characters are the symbols, in order."""
        return cls(symbols=tuple(symbols))

    def __len__(self) -> int:
        return len(self.symbols)

    def covers(self, text: str) -> bool:
        """True if every character of ``text`` is a symbol of this alphabet."""
        return set(text) <= set(self.symbols)


class Context(BaseModel):
    """A syntactic context: the strings to the left and right of an expression."""

    model_config = ConfigDict(frozen=True)

    left: str = ""
    right: str = ""

    @property
    def size(self) -> int:
        return len(self.left) + len(self.right)

    def surround(self, expression: str) -> str:
        return self.left + expression + self.right

    def __str__(self) -> str:
        return f"<{self.left!r}, {self.right!r}>"


EMPTY_CONTEXT = Context()


class ReferentTag(str, Enum):
    NAT = "NAT"
    BOOL = "BOOL"
    INF = "INF"
    NULL = "NULL"


class Referent(BaseModel):
    """A semantic value. NULL marks an expression that is invalid in its context."""

    model_config = ConfigDict(frozen=True)

    tag: ReferentTag
    value: Optional[Union[bool, int]] = None

    @model_validator(mode="after")
    def _check_payload(self) -> "Referent":
        if self.tag is ReferentTag.NAT:
            if isinstance(self.value, bool) or not isinstance(self.value, int) or self.value < 0:
                raise ValueError(f"NAT referents carry a natural number, got {self.value!r}")
        elif self.tag is ReferentTag.BOOL:
            if not isinstance(self.value, bool):
                raise ValueError(f"BOOL referents carry a boolean, got {self.value!r}")
        elif self.value is not None:
            raise ValueError(f"{self.tag.value} referents carry no payload")
        return self

    @classmethod
    def nat(cls, value: int) -> "Referent":
        return cls(tag=ReferentTag.NAT, value=value)

    @classmethod
    def boolean(cls, value: bool) -> "Referent":
        return cls(tag=ReferentTag.BOOL, value=value)

    @property
    def is_null(self) -> bool:
        return self.tag is ReferentTag.NULL

    def __str__(self) -> str:
        if self.tag is ReferentTag.NAT:
            return f"NAT({self.value})"
        if self.tag is ReferentTag.BOOL:
            return f"BOOL({str(self.value).lower()})"
        return self.tag.value


NULL = Referent(tag=ReferentTag.NULL)
INF = Referent(tag=ReferentTag.INF)
TRUE = Referent.boolean(True)
FALSE = Referent.boolean(False)


class Language(ABC):
    """A closed, hand-implemented semantics object.

    Subclasses define ``denote`` as a total, deterministic function. The two
    ``may_*`` hooks are syntactic prefilters used by the exhaustive checks; they
    must be sound, i.e. only reject pairs whose denotation is NULL.
    """

    name: str = "language"
    alphabet: Alphabet
    transparent_by_construction: bool = False

    @abstractmethod
    def denote(self, expression: str, context: Context = EMPTY_CONTEXT) -> Referent:
        """Return den(expression | context); NULL exactly when the expression is invalid there."""
        ...

    def template_contexts(self) -> Tuple[Context, ...]:
        """Designated contexts added to every enumerated context pool."""
        return ()

    def template_expressions(self) -> Tuple[str, ...]:
        """Designated expressions added to every enumerated expression pool."""
        return ()

    def may_denote(self, expression: str) -> bool:
        return True

    def may_surround(self, context: Context) -> bool:
        return True

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r})"


def iter_strings(alphabet: Alphabet, max_len: int) -> Iterator[str]:
    """Yield every string over ``alphabet`` of length at most ``max_len``, shortest first."""
    for length in range(max_len + 1):
        for symbols in product(alphabet.symbols, repeat=length):
            yield "".join(symbols)


def iter_contexts(alphabet: Alphabet, max_size: int) -> Iterator[Context]:
    """Yield every context with ``|left| + |right| <= max_size`` exactly once."""
    for text in iter_strings(alphabet, max_size):
        for split in range(len(text) + 1):
            yield Context(left=text[:split], right=text[split:])


def denote(lang: Language, expression: str, context: Context = EMPTY_CONTEXT) -> Referent:
    return lang.denote(expression, context)


def _count_strings(alphabet: Alphabet, max_len: int) -> int:
    return sum(len(alphabet) ** length for length in range(max_len + 1))


def _check_budget(what: str, nodes: int, budget: Optional[int]) -> None:
    if budget is not None and nodes > budget:
        raise ResourceLimitError(f"{what} needs {nodes} evaluations, budget is {budget}")


def support_of_context(
    lang: Language, context: Context, max_len: int, budget: Optional[int] = None
) -> frozenset:
    """All expressions of length <= max_len that are valid in ``context``."""
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    _check_budget("support enumeration", _count_strings(lang.alphabet, max_len), budget)

    return frozenset(
        expression
        for expression in iter_strings(lang.alphabet, max_len)
        if lang.may_denote(expression) and not lang.denote(expression, context).is_null
    )


def contexts_of_expression(
    lang: Language, expression: str, ctx_max_len: int, budget: Optional[int] = None
) -> frozenset:
    """All contexts, small or designated, in which ``expression`` is valid."""
    if ctx_max_len < 0:
        raise ValueError("ctx_max_len must be >= 0")
    pool = _context_pool(lang, ctx_max_len)
    _check_budget("context enumeration", len(pool), budget)

    return frozenset(context for context in pool if not lang.denote(expression, context).is_null)


def _context_pool(lang: Language, ctx_max_len: int) -> List[Context]:
    pool = [context for context in iter_contexts(lang.alphabet, ctx_max_len) if lang.may_surround(context)]
    seen = set(pool)
    for context in lang.template_contexts():
        if context not in seen:
            seen.add(context)
            pool.append(context)
    return pool


def _expression_pool(lang: Language, expr_max_len: int) -> List[str]:
    pool = [expression for expression in iter_strings(lang.alphabet, expr_max_len) if lang.may_denote(expression)]
    seen = set(pool)
    for expression in lang.template_expressions():
        if expression not in seen:
            seen.add(expression)
            pool.append(expression)
    return pool


class TransparencyWitness(BaseModel):
    """An expression whose denotation in some context differs from its context-free one."""

    model_config = ConfigDict(frozen=True)

    expression: str
    context: Context
    in_context: Referent
    empty_context: Referent


class TransparencyReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    language: str
    expr_max_len: int
    ctx_max_len: int
    expressions_checked: int
    contexts_checked: int
    pairs_checked: int
    witnesses: Tuple[TransparencyWitness, ...] = ()

    @computed_field
    @property
    def passed(self) -> bool:
        return not self.witnesses

    def witness_expressions(self) -> frozenset:
        return frozenset(witness.expression for witness in self.witnesses)


def check_strong_transparency(
    lang: Language, expr_max_len: int, ctx_max_len: int, budget: Optional[int] = None
) -> TransparencyReport:
    """Exhaustively test that den(e|k) is NULL or equals den(e|empty) within the bounds.

    The pools are every expression up to ``expr_max_len`` and every context up to
    ``ctx_max_len`` that pass the language's prefilters, plus its designated
    expressions and contexts.
    """
    if expr_max_len < 0 or ctx_max_len < 0:
        raise ValueError("bounds must be >= 0")

    expressions = _expression_pool(lang, expr_max_len)
    contexts = _context_pool(lang, ctx_max_len)
    pairs = len(expressions) * len(contexts)
    _check_budget("transparency check", pairs, budget)

    logger.info(
        f"Transparency check on {lang.name}: {len(expressions)} expressions x {len(contexts)} contexts"
    )

    witnesses = []
    for expression in expressions:
        base = lang.denote(expression, EMPTY_CONTEXT)
        for context in contexts:
            value = lang.denote(expression, context)
            if value is base or value.is_null:
                continue
            if value != base:
                witnesses.append(
                    TransparencyWitness(expression=expression, context=context, in_context=value, empty_context=base)
                )

    logger.info(f"Transparency check on {lang.name} found {len(witnesses)} witnesses")
    return TransparencyReport(
        language=lang.name,
        expr_max_len=expr_max_len,
        ctx_max_len=ctx_max_len,
        expressions_checked=len(expressions),
        contexts_checked=len(contexts),
        pairs_checked=pairs,
        witnesses=tuple(witnesses),
    )


def compare(
    lang: Language, rel: "Relation", expression: str, other: str, context: Context = EMPTY_CONTEXT
) -> bool:
    """Ground truth: does ``rel`` hold between the two denotations in ``context``?"""
    return rel.holds(lang.denote(expression, context), lang.denote(other, context))
