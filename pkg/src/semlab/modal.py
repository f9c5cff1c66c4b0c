"""Possible-worlds semantics over explicit world tables.

Cells hold 0, 1 or None (the invalid referent). Modal assertions fold the
per-world assertion bits with conjunction (BOX) or disjunction (DIAMOND).
Modal denotations are None whenever some world's cell is None. Otherwise
DIAMOND takes the disjunction and BOX takes the value shared by every world,
or None when the worlds disagree.
"""

from enum import Enum
from itertools import combinations_with_replacement, product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, computed_field, field_serializer, model_validator

from semlab.logging_config import get_logger
from semlab.semantics import ResourceLimitError, SemlabError

logger = get_logger(__name__)

Cell = Optional[int]
CellKey = Tuple[str, str, str]

MAX_SAMPLES = 10


class ModalDomainError(SemlabError, KeyError):
    """Raised for an (expression, context) pair outside a table's domain."""

    pass


class ModalQuantifier(str, Enum):
    BOX = "box"
    DIAMOND = "diamond"

    def fold(self, bits: Iterable[int]) -> int:
        """Conjunction for BOX, disjunction for DIAMOND."""
        if self is ModalQuantifier.BOX:
            return int(all(bits))
        return int(any(bits))


class WorldTable(BaseModel):
    """A finite intensional assignment: (world, expression, context) -> 0, 1 or None."""

    model_config = ConfigDict(frozen=True)

    worlds: Tuple[str, ...]
    expressions: Tuple[str, ...]
    contexts: Tuple[str, ...]
    cells: Dict[CellKey, Cell]

    @model_validator(mode="after")
    def _check_cells(self) -> "WorldTable":
        for key in product(self.worlds, self.expressions, self.contexts):
            if key not in self.cells:
                raise ValueError(f"missing cell for world {key[0]!r}, expression {key[1]!r}, context {key[2]!r}")
            if self.cells[key] not in (0, 1, None):
                raise ValueError(f"cells hold 0, 1 or None, got {self.cells[key]!r}")
        return self

    @field_serializer("cells")
    def _serialize_cells(self, cells: Dict[CellKey, Cell]) -> List[dict]:
        return [
            {"world": world, "expression": expression, "context": context, "value": cells[world, expression, context]}
            for world, expression, context in product(self.worlds, self.expressions, self.contexts)
        ]

    @classmethod
    def from_rows(
        cls, rows: Dict[str, Dict[str, Sequence[Cell]]], contexts: Sequence[str] = ("k",)
    ) -> "WorldTable":
        """Build from ``{world: {expression: [cell per context]}}``."""
        worlds = tuple(rows)
        expressions = tuple(next(iter(rows.values()))) if rows else ()
        cells = {
            (world, expression, context): values[position]
            for world, by_expression in rows.items()
            for expression, values in by_expression.items()
            for position, context in enumerate(contexts)
        }
        return cls(worlds=worlds, expressions=expressions, contexts=tuple(contexts), cells=cells)

    @classmethod
    def from_grid(
        cls, worlds: Tuple[str, ...], expressions: Tuple[str, ...], contexts: Tuple[str, ...], grid: Sequence[Cell]
    ) -> "WorldTable":
        """Build from a flat grid in world, expression, context order, skipping validation."""
        keys = product(worlds, expressions, contexts)
        cells = dict(zip(keys, grid))
        return cls.model_construct(worlds=worlds, expressions=expressions, contexts=contexts, cells=cells)

    def cell(self, world: str, expression: str, context: str) -> Cell:
        try:
            return self.cells[world, expression, context]
        except KeyError:
            raise ModalDomainError(f"({expression!r}, {context!r}) is not in the table for world {world!r}")

    def column(self, expression: str, context: str) -> Tuple[Cell, ...]:
        """The cells of ``expression`` in ``context`` across all worlds."""
        if expression not in self.expressions or context not in self.contexts:
            raise ModalDomainError(f"({expression!r}, {context!r}) is not in the table's domain")
        return tuple(self.cells[world, expression, context] for world in self.worlds)


def fold_denote(table: WorldTable, quantifier: ModalQuantifier, expression: str, context: str) -> Cell:
    """Plain None-absorbing fold of the cells: conjunction or disjunction."""
    column = table.column(expression, context)
    if any(value is None for value in column):
        return None
    return quantifier.fold(column)


def modal_denote(table: WorldTable, quantifier: ModalQuantifier, expression: str, context: str) -> Cell:
    """Modal denotation of one cell column; None absorbs.

    BOX is the value every world agrees on, or None when they disagree, so
    (0, 1) under BOX is None. DIAMOND is the disjunction. ``fold_denote`` keeps
    the plain conjunctive fold for BOX, under which the BOX sweep fails.
    """
    column = table.column(expression, context)
    if any(value is None for value in column):
        return None
    if quantifier is ModalQuantifier.BOX:
        return column[0] if len(set(column)) == 1 else None
    return quantifier.fold(column)


def world_assert(table: WorldTable, world: str, expression: str, other: str, context: str) -> int:
    """The single-world assertion bit; None equals None."""
    return int(table.cell(world, expression, context) == table.cell(world, other, context))


def modal_assert(table: WorldTable, quantifier: ModalQuantifier, expression: str, other: str, context: str) -> int:
    table.column(expression, context)
    table.column(other, context)
    return quantifier.fold(world_assert(table, world, expression, other, context) for world in table.worlds)


def emulate_modal_eq(table: WorldTable, quantifier: ModalQuantifier, expression: str, context: str) -> int:
    """Index of the first table expression the modal oracle deems equal to ``expression``."""
    for index, candidate in enumerate(table.expressions):
        if modal_assert(table, quantifier, expression, candidate, context):
            return index
    raise ModalDomainError(f"{expression!r} is not in the table's domain")


def modal_partition_consistent(table: WorldTable, quantifier: ModalQuantifier, context: str) -> bool:
    """True when the modal assertion relation is an equivalence on the table's expressions."""
    expressions = table.expressions
    related = {
        (left, right): modal_assert(table, quantifier, left, right, context)
        for left in expressions
        for right in expressions
    }
    reflexive = all(related[e, e] for e in expressions)
    symmetric = all(related[a, b] == related[b, a] for a in expressions for b in expressions)
    transitive = all(
        related[a, c] or not (related[a, b] and related[b, c])
        for a in expressions
        for b in expressions
        for c in expressions
    )
    return reflexive and symmetric and transitive


class ModalCounterexample(BaseModel):
    model_config = ConfigDict(frozen=True)

    table: WorldTable
    expression: str
    other: str
    context: str
    denotation: Cell
    other_denotation: Cell
    assertion: int


class VerificationReport(BaseModel):
    """Outcome of checking ``den(e) == den(e') <=> assert(e, e')`` over every enumerated table."""

    model_config = ConfigDict(frozen=True)

    quantifier: ModalQuantifier
    max_worlds: int
    expr_count: int
    ctx_count: int
    include_null: bool
    tables_checked: int
    pairs_checked: int
    pairs_skipped: int
    counterexample_count: int
    samples: Tuple[ModalCounterexample, ...] = ()
    literal_fold_counterexamples: Optional[int] = None


def _count_tables(max_worlds: int, cells_per_world: int, values: int) -> int:
    return sum(values ** (worlds * cells_per_world) for worlds in range(1, max_worlds + 1))


def _iter_tables(
    max_worlds: int, expressions: Tuple[str, ...], contexts: Tuple[str, ...], values: Tuple[Cell, ...]
) -> Iterable[WorldTable]:
    for world_count in range(1, max_worlds + 1):
        worlds = tuple(f"w{index + 1}" for index in range(world_count))
        for grid in product(values, repeat=world_count * len(expressions) * len(contexts)):
            yield WorldTable.from_grid(worlds, expressions, contexts, grid)


def sweep_modal_theorem(
    quantifier: ModalQuantifier,
    max_worlds: int,
    expr_count: int,
    ctx_count: int,
    include_null: bool = True,
    budget: Optional[int] = None,
) -> VerificationReport:
    """Check modal denotation equality against the modal assertion on every table within the bounds.

    The first pass uses cells in {0, 1}; with ``include_null`` a second pass
    admits None cells and skips pairs whose modal denotation is None, which the
    theorem excludes by hypothesis.

    Raises:
        ResourceLimitError: If the number of tables exceeds ``budget``
    """
    if max_worlds < 1 or expr_count < 1 or ctx_count < 1:
        raise ValueError("bounds must be >= 1")

    expressions = tuple(f"e{index + 1}" for index in range(expr_count))
    contexts = tuple(f"k{index + 1}" for index in range(ctx_count))
    passes: List[Tuple[Cell, ...]] = [(0, 1)]
    if include_null:
        passes.append((0, 1, None))

    total = sum(_count_tables(max_worlds, expr_count * ctx_count, len(values)) for values in passes)
    if budget is not None and total > budget:
        raise ResourceLimitError(f"modal sweep needs {total} tables, budget is {budget}")
    logger.info(f"Modal sweep ({quantifier.value}): {total} tables, worlds <= {max_worlds}")

    tables = pairs = skipped = failures = literal_failures = 0
    samples: List[ModalCounterexample] = []
    for values in passes:
        for table in _iter_tables(max_worlds, expressions, contexts, values):
            tables += 1
            for context in contexts:
                for expression, other in combinations_with_replacement(expressions, 2):
                    denotation = modal_denote(table, quantifier, expression, context)
                    other_denotation = modal_denote(table, quantifier, other, context)
                    assertion = modal_assert(table, quantifier, expression, other, context)

                    literal = (
                        fold_denote(table, quantifier, expression, context),
                        fold_denote(table, quantifier, other, context),
                    )
                    if None not in literal and (literal[0] == literal[1]) != bool(assertion):
                        literal_failures += 1

                    if denotation is None or other_denotation is None:
                        skipped += 1
                        continue
                    pairs += 1
                    if (denotation == other_denotation) != bool(assertion):
                        failures += 1
                        if len(samples) < MAX_SAMPLES:
                            samples.append(
                                ModalCounterexample(
                                    table=table,
                                    expression=expression,
                                    other=other,
                                    context=context,
                                    denotation=denotation,
                                    other_denotation=other_denotation,
                                    assertion=assertion,
                                )
                            )

    logger.info(f"Modal sweep ({quantifier.value}): {pairs} pairs checked, {failures} counterexamples")
    return VerificationReport(
        quantifier=quantifier,
        max_worlds=max_worlds,
        expr_count=expr_count,
        ctx_count=ctx_count,
        include_null=include_null,
        tables_checked=tables,
        pairs_checked=pairs,
        pairs_skipped=skipped,
        counterexample_count=failures,
        samples=tuple(samples),
        literal_fold_counterexamples=literal_failures if quantifier is ModalQuantifier.BOX else None,
    )


def verify_box_theorem(
    max_worlds: int, expr_count: int, ctx_count: int, include_null: bool = True, budget: Optional[int] = None
) -> VerificationReport:
    return sweep_modal_theorem(ModalQuantifier.BOX, max_worlds, expr_count, ctx_count, include_null, budget)


def sweep_diamond(
    max_worlds: int, expr_count: int, ctx_count: int, include_null: bool = True, budget: Optional[int] = None
) -> VerificationReport:
    return sweep_modal_theorem(ModalQuantifier.DIAMOND, max_worlds, expr_count, ctx_count, include_null, budget)


class UniverseCheck(BaseModel):
    model_config = ConfigDict(frozen=True)

    world_assertions: Tuple[int, ...]
    modal_assertion: int
    denotation: Cell
    other_denotation: Cell

    @computed_field
    @property
    def equal(self) -> bool:
        return self.denotation == self.other_denotation


class DiamondCheck(BaseModel):
    """The same DIAMOND assertion answer paired with opposite DIAMOND equality verdicts."""

    model_config = ConfigDict(frozen=True)

    left: UniverseCheck
    right: UniverseCheck

    @computed_field
    @property
    def reproduces_ambiguity(self) -> bool:
        return (
            self.left.modal_assertion == self.right.modal_assertion == 1
            and self.left.equal
            and not self.right.equal
        )


def _check_universe(table: WorldTable, context: str) -> UniverseCheck:
    diamond = ModalQuantifier.DIAMOND
    return UniverseCheck(
        world_assertions=tuple(world_assert(table, world, "e1", "e2", context) for world in table.worlds),
        modal_assertion=modal_assert(table, diamond, "e1", "e2", context),
        denotation=modal_denote(table, diamond, "e1", context),
        other_denotation=modal_denote(table, diamond, "e2", context),
    )


def diamond_counterexample() -> Tuple[WorldTable, WorldTable, DiamondCheck]:
    """Two two-world universes with DIAMOND-assertion 1 but opposite DIAMOND-equality verdicts."""
    left = WorldTable.from_rows({"w1": {"e1": [0], "e2": [0]}, "w2": {"e1": [0], "e2": [0]}})
    right = WorldTable.from_rows({"w1": {"e1": [0], "e2": [0]}, "w2": {"e1": [0], "e2": [1]}})
    check = DiamondCheck(left=_check_universe(left, "k"), right=_check_universe(right, "k"))
    return left, right, check
