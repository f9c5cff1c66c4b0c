"""Concrete languages.

``arith`` is the transparent example language of sums over decimal numerals.
The LEQ family renders two fixed program skeletons whose truth depends on a
hidden bound ``m`` (possibly infinite); the ``in`` variant replaces the bound
with a finite set of naturals.
"""

import math
import re
from abc import abstractmethod
from enum import Enum
from functools import lru_cache
from typing import FrozenSet, Iterable, Optional, Tuple, Union

from semlab.semantics import (
    EMPTY_CONTEXT,
    INF,
    NULL,
    Alphabet,
    Context,
    Language,
    Referent,
    SemlabError,
)

Bound = Union[int, float]

INFINITY: float = math.inf

DIGITS = "0123456789"


class LanguageSpecError(SemlabError, ValueError):
    """Raised for unknown language names or malformed language parameters."""

    pass


# --- arith ---

ARITH_ALPHABET = Alphabet.of(DIGITS + "+")

_ARITH_EXPRESSION = re.compile(r"[0-9]+(?:\+[0-9]+)*")
_ARITH_LEFT = re.compile(r"(?:[0-9]+\+)*")
_ARITH_RIGHT = re.compile(r"(?:\+[0-9]+)*")


@lru_cache(maxsize=1 << 16)
def _arith_value(expression: str) -> Optional[int]:
    if _ARITH_EXPRESSION.fullmatch(expression) is None:
        return None
    return sum(int(numeral) for numeral in expression.split("+"))


@lru_cache(maxsize=1 << 16)
def _arith_referent(expression: str) -> Referent:
    value = _arith_value(expression)
    return NULL if value is None else Referent.nat(value)


@lru_cache(maxsize=1 << 16)
def _arith_left(left: str) -> bool:
    return _ARITH_LEFT.fullmatch(left) is not None


@lru_cache(maxsize=1 << 16)
def _arith_right(right: str) -> bool:
    return _ARITH_RIGHT.fullmatch(right) is not None


class ArithLanguage(Language):
    """Sums of decimal numerals: numeral ("+" numeral)*.

    An expression is valid in ``<l, r>`` when it is itself a sum, ``l`` is empty
    or ends with "+", ``r`` is empty or starts with "+", and ``l + e + r`` is a
    member. Under those conditions the first two grammar checks imply the third.
    """

    name = "arith"
    alphabet = ARITH_ALPHABET
    transparent_by_construction = True

    def denote(self, expression: str, context: Context = EMPTY_CONTEXT) -> Referent:
        if not _arith_left(context.left) or not _arith_right(context.right):
            return NULL
        return _arith_referent(expression)

    def may_denote(self, expression: str) -> bool:
        return _arith_value(expression) is not None

    def may_surround(self, context: Context) -> bool:
        return _arith_left(context.left) and _arith_right(context.right)


def make_arith() -> ArithLanguage:
    return ArithLanguage()


# --- LEQ templates ---


class LeqVariant(str, Enum):
    """Which expression fills the print(...) slot of a template."""

    LEQ_CALL = "leq()"
    TRUE_LITERAL = "True"

    @property
    def expression(self) -> str:
        return self.value


LESS_THAN = "<"
MEMBER_OF = "in"

PROGRAM_HEAD = "def leq() -> bool:\n    return "
_PRINT_OPEN = "\nprint("
_PRINT_CLOSE = ")"
_NUMERAL = r"(0|[1-9][0-9]*)"
_PRINTED = r"(?:leq\(\)|True)"


def _numeral(n: int) -> str:
    if n < 0:
        raise ValueError(f"template numerals are natural numbers, got {n}")
    return str(n)


def leq_context(variant: LeqVariant, n: int, operator: str = LESS_THAN) -> Context:
    """Context around the print(...) slot of the template with numeral ``n``.

    Both variants share this context; ``variant`` names the expression that
    completes it into a member string.
    """
    LeqVariant(variant)
    return Context(left=f"{PROGRAM_HEAD}{_numeral(n)} {operator} M{_PRINT_OPEN}", right=_PRINT_CLOSE)


def print_slot_numeral(context: Context, operator: str = LESS_THAN) -> Optional[int]:
    """The numeral n of a print(...) slot context, or None for any other context."""
    if context.right != _PRINT_CLOSE:
        return None
    match = _print_slot_pattern(operator).fullmatch(context.left)
    return int(match.group(1)) if match else None


@lru_cache(maxsize=None)
def _print_slot_pattern(operator: str) -> "re.Pattern[str]":
    return re.compile(rf"{re.escape(PROGRAM_HEAD)}{_NUMERAL} {re.escape(operator)} M{re.escape(_PRINT_OPEN)}")


def leq_program(variant: LeqVariant, n: int, operator: str = LESS_THAN) -> str:
    """The member string for ``variant`` and numeral ``n``."""
    return leq_context(variant, n, operator).surround(LeqVariant(variant).expression)


def numeral_context(n_printed: LeqVariant, operator: str = LESS_THAN) -> Context:
    """Context around the numeral slot of the return line."""
    return Context(left=PROGRAM_HEAD, right=f" {operator} M{_PRINT_OPEN}{LeqVariant(n_printed).expression})")


def bound_context(variant: LeqVariant, n: int, operator: str = LESS_THAN) -> Context:
    """Context around the ``M`` slot of the return line."""
    return Context(
        left=f"{PROGRAM_HEAD}{_numeral(n)} {operator} ",
        right=f"{_PRINT_OPEN}{LeqVariant(variant).expression})",
    )


def comparison_context(variant: LeqVariant) -> Context:
    """Context around the whole ``n < M`` (or ``n in M``) slot."""
    return Context(left=PROGRAM_HEAD, right=f"{_PRINT_OPEN}{LeqVariant(variant).expression})")


def definition_context(variant: LeqVariant, n: int, operator: str = LESS_THAN) -> Context:
    """Context around ``leq()`` where it follows ``def``; always NULL."""
    return Context(
        left="def ",
        right=f" -> bool:\n    return {_numeral(n)} {operator} M{_PRINT_OPEN}{LeqVariant(variant).expression})",
    )


def _template_symbols() -> str:
    rendered = "".join(
        leq_program(variant, 0, operator) for variant in LeqVariant for operator in (LESS_THAN, MEMBER_OF)
    )
    return DIGITS + "".join(sorted(set(rendered) - set(DIGITS)))


LEQ_ALPHABET = Alphabet.of(_template_symbols())


class _TemplateLanguage(Language):
    """Designated-slot semantics shared by the LEQ family.

    Valid (expression, context) pairs:
      - "leq()" or "True" in the print(...) slot of template n
      - numeral n in the numeral slot
      - "n OP M" in the comparison slot
      - "M" in the bound slot
    Everything else, including "leq()" after ``def``, is NULL.
    """

    alphabet = LEQ_ALPHABET
    operator: str = LESS_THAN
    template_span: int = 4

    def __init__(self) -> None:
        op = re.escape(self.operator)
        head = re.escape(PROGRAM_HEAD)
        self._print_left = _print_slot_pattern(self.operator)
        self._numeral_right = re.compile(rf" {op} M{re.escape(_PRINT_OPEN)}{_PRINTED}\)")
        self._slot_right = re.compile(rf"{re.escape(_PRINT_OPEN)}{_PRINTED}\)")
        self._comparison = re.compile(rf"{_NUMERAL} {op} M")
        self._bound_left = re.compile(rf"{head}{_NUMERAL} {op} ")
        self._canonical = re.compile(_NUMERAL)

    @abstractmethod
    def holds(self, n: int) -> bool:
        """Truth value of ``n OP M`` in this language."""
        ...

    def bound_referent(self) -> Referent:
        return NULL

    def boundary_numerals(self) -> Tuple[int, ...]:
        """Numerals where ``holds`` changes value, added to the template pool."""
        return ()

    def template_numerals(self) -> Tuple[int, ...]:
        numerals = set(range(self.template_span)) | {n for n in self.boundary_numerals() if n >= 0}
        return tuple(sorted(numerals))

    def denote(self, expression: str, context: Context = EMPTY_CONTEXT) -> Referent:
        left, right = context.left, context.right
        if not left.startswith("def "):
            return NULL

        if right == _PRINT_CLOSE:
            match = self._print_left.fullmatch(left)
            if match is None:
                return NULL
            if expression == LeqVariant.LEQ_CALL:
                return Referent.boolean(self.holds(int(match.group(1))))
            if expression == LeqVariant.TRUE_LITERAL:
                return Referent.boolean(True)
            return NULL

        if left == PROGRAM_HEAD:
            if self._numeral_right.fullmatch(right) and self._canonical.fullmatch(expression):
                return Referent.nat(int(expression))
            if self._slot_right.fullmatch(right):
                match = self._comparison.fullmatch(expression)
                if match is not None:
                    return Referent.boolean(self.holds(int(match.group(1))))
            return NULL

        if expression == "M" and self._slot_right.fullmatch(right) and self._bound_left.fullmatch(left):
            return self.bound_referent()

        return NULL

    def may_surround(self, context: Context) -> bool:
        return context.left.startswith("def ")

    def template_contexts(self) -> Tuple[Context, ...]:
        contexts = []
        for n in self.template_numerals():
            contexts.append(leq_context(LeqVariant.LEQ_CALL, n, self.operator))
            for variant in LeqVariant:
                contexts.append(bound_context(variant, n, self.operator))
                contexts.append(definition_context(variant, n, self.operator))
        for variant in LeqVariant:
            contexts.append(numeral_context(variant, self.operator))
            contexts.append(comparison_context(variant))
        return tuple(contexts)

    def template_expressions(self) -> Tuple[str, ...]:
        expressions = [LeqVariant.LEQ_CALL.value, LeqVariant.TRUE_LITERAL.value, "M"]
        for n in self.template_numerals():
            expressions.append(_numeral(n))
            expressions.append(f"{n} {self.operator} M")
        return tuple(expressions)


class LeqLanguage(_TemplateLanguage):
    """L_m: ``return n < M`` with M bound to ``m`` (a natural or infinity)."""

    operator = LESS_THAN

    def __init__(self, m: Bound) -> None:
        if m != INFINITY and (isinstance(m, bool) or not isinstance(m, int) or m < 0):
            raise LanguageSpecError(f"m must be a natural number or infinity, got {m!r}")
        super().__init__()
        self.m = m
        self.name = f"leq(m={format_bound(m)})"

    def holds(self, n: int) -> bool:
        return n < self.m

    def bound_referent(self) -> Referent:
        return INF if self.m == INFINITY else Referent.nat(int(self.m))

    def boundary_numerals(self) -> Tuple[int, ...]:
        if self.m == INFINITY:
            return ()
        m = int(self.m)
        return (m - 1, m, m + 1)


class LeqInLanguage(_TemplateLanguage):
    """``return n in M`` with M a finite set of naturals.

    The bound slot denotes NULL: a finite list is not a referent here.
    """

    operator = MEMBER_OF

    def __init__(self, members: Iterable[int]) -> None:
        members = frozenset(members)
        if any(isinstance(n, bool) or not isinstance(n, int) or n < 0 for n in members):
            raise LanguageSpecError(f"set members must be natural numbers, got {sorted(members)!r}")
        super().__init__()
        self.members: FrozenSet[int] = members
        self.name = f"leq-in(S={{{','.join(str(n) for n in sorted(members))}}})"

    def holds(self, n: int) -> bool:
        return n in self.members

    def boundary_numerals(self) -> Tuple[int, ...]:
        return tuple(n + offset for n in self.members for offset in (-1, 0, 1))


def make_leq(m: Bound) -> LeqLanguage:
    return LeqLanguage(m)


def make_leq_in(members: Iterable[int]) -> LeqInLanguage:
    return LeqInLanguage(members)


def format_bound(m: Bound) -> str:
    return "inf" if m == INFINITY else str(int(m))


def parse_bound(text: str) -> Bound:
    """Parse ``--m``: a decimal natural or the token ``inf``."""
    text = text.strip()
    if text.lower() == "inf":
        return INFINITY
    if not text.isdigit():
        raise LanguageSpecError(f"m must be a decimal natural or 'inf', got {text!r}")
    return int(text)


def parse_members(text: str) -> FrozenSet[int]:
    """Parse ``--set``: comma-separated decimal naturals; empty text is the empty set."""
    items = [item.strip() for item in text.split(",") if item.strip()]
    if any(not item.isdigit() for item in items):
        raise LanguageSpecError(f"set must be comma-separated naturals, got {text!r}")
    return frozenset(int(item) for item in items)


LANGUAGE_NAMES = ("arith", "leq", "leq-in")


def make_language(name: str, m: Optional[str] = None, members: Optional[str] = None) -> Language:
    """Build a language from its CLI spelling."""
    if name == "arith":
        return make_arith()
    if name == "leq":
        if m is None:
            raise LanguageSpecError("language 'leq' needs --m")
        return make_leq(parse_bound(m))
    if name == "leq-in":
        if members is None:
            raise LanguageSpecError("language 'leq-in' needs --set")
        return make_leq_in(parse_members(members))
    raise LanguageSpecError(f"unknown language {name!r}, expected one of {', '.join(LANGUAGE_NAMES)}")
