"""Adversarial refutation of emulators on the LEQ family.

Any emulator that finishes against L_inf has asked finitely many queries. The
adversary reads the transcript, picks m' above every numeral it mentions, and
checks that L_m' answers every one of those queries identically. The
emulator's decider then has to be wrong about ``leq()`` versus ``True`` at
context n = m' in exactly one of the two languages.
"""

import random
import re
from enum import Enum
from typing import Dict, Hashable, Iterable, List, Optional, Protocol, Tuple

from pydantic import BaseModel, ConfigDict, computed_field, model_validator

from semlab.emulation import binary_search_emulator, emulate_eq, linear_scan_emulator
from semlab.languages import (
    INFINITY,
    LeqVariant,
    bound_context,
    leq_context,
    make_leq,
    print_slot_numeral,
)
from semlab.logging_config import get_logger
from semlab.oracle import EQUALITY, AssertionOracle, QueryRecord, QueryTranscript, replay
from semlab.semantics import EMPTY_CONTEXT, Context, SemlabError, compare

logger = get_logger(__name__)

_NUMERALS = re.compile(r"[0-9]+")


class ReplayMismatchError(SemlabError):
    """Raised when L_m' answers a transcript query differently from L_inf."""

    def __init__(self, m_prime: int, record: QueryRecord):
        super().__init__(
            f"L_{m_prime} answers {record.expression!r} vs {record.other!r} in {record.context} differently"
        )
        self.m_prime = m_prime
        self.record = record


class EmulatorUnderTest(Protocol):
    """A black-box (mu, delta) pair. mu only sees the language through ``oracle``."""

    name: str

    def represent(self, expression: str, oracle: AssertionOracle) -> Hashable:
        ...

    def decide(self, rep: Hashable, other: Hashable, context: Context) -> int:
        ...


class NaiveEmulator:
    """emulate_eq + delta_eq, unchanged from the transparent case."""

    name = "naive"

    def represent(self, expression: str, oracle: AssertionOracle) -> Hashable:
        return emulate_eq(expression, oracle).index

    def decide(self, rep: Hashable, other: Hashable, context: Context) -> int:
        return int(rep == other)


class BinarySearchEmulator:
    """Estimates m by binary search over contexts 0..n_max, then predicts leq() from the estimate."""

    name = "binary-search"

    def __init__(self, n_max: int = 100):
        self.n_max = n_max

    def represent(self, expression: str, oracle: AssertionOracle) -> Hashable:
        if expression == LeqVariant.LEQ_CALL:
            return ("leq", binary_search_emulator(oracle, self.n_max).m_estimate)
        return ("expr", expression)

    @staticmethod
    def _predict(rep: Hashable, n: int) -> Optional[bool]:
        kind, value = rep
        if kind == "leq":
            return value is None or n < value
        if value == LeqVariant.TRUE_LITERAL:
            return True
        return None

    def decide(self, rep: Hashable, other: Hashable, context: Context) -> int:
        n = print_slot_numeral(context)
        if n is None:
            return int(rep == other)
        left, right = self._predict(rep, n), self._predict(other, n)
        if left is None or right is None:
            return int(rep == other)
        return int(left == right)


class ConstantEmulator:
    """Asks nothing and always answers ``bit``."""

    name = "constant"

    def __init__(self, bit: int = 0):
        self.bit = bit

    def represent(self, expression: str, oracle: AssertionOracle) -> Hashable:
        return expression

    def decide(self, rep: Hashable, other: Hashable, context: Context) -> int:
        return self.bit


class RandomEmulator:
    """Seeded emulator asking a random mix of print-slot, bound-slot and empty-context queries.

    The decider extrapolates from the print-slot answers it saw (leq() is
    monotone in n) and falls back to a seeded coin.
    """

    name = "random"

    def __init__(self, seed: int, max_queries: int = 8, n_range: int = 1000):
        self.seed = seed
        self.max_queries = max_queries
        self.n_range = n_range

    def represent(self, expression: str, oracle: AssertionOracle) -> Hashable:
        rng = random.Random(f"{self.seed}:{expression}")
        observations = []
        for _ in range(rng.randint(1, self.max_queries)):
            shape = rng.choice(("print", "print", "bound", "empty"))
            n = rng.randint(0, self.n_range)
            if shape == "print":
                context = leq_context(LeqVariant.LEQ_CALL, n)
                answer = oracle.assert_query(expression, LeqVariant.TRUE_LITERAL.value, context)
            elif shape == "bound":
                guess = str(rng.randint(0, self.n_range))
                answer = oracle.assert_query("M", guess, bound_context(LeqVariant.LEQ_CALL, n))
            else:
                answer = oracle.assert_query(expression, LeqVariant.TRUE_LITERAL.value, EMPTY_CONTEXT)
            observations.append((shape, n, answer))
        return (expression, tuple(observations))

    def decide(self, rep: Hashable, other: Hashable, context: Context) -> int:
        n = print_slot_numeral(context)
        if n is None:
            return int(rep == other)
        seen = [
            (at, answer)
            for expression, observations in (rep, other)
            if expression == LeqVariant.LEQ_CALL
            for shape, at, answer in observations
            if shape == "print"
        ]
        if any(at >= n and answer for at, answer in seen):
            return 1
        if any(at <= n and not answer for at, answer in seen):
            return 0
        return random.Random(f"{self.seed}:decide:{n}").randint(0, 1)


EMULATOR_NAMES = ("naive", "binary-search", "constant", "random")


def make_emulator(name: str, n_max: int = 100, seed: int = 0, bit: int = 0) -> EmulatorUnderTest:
    if name == "naive":
        return NaiveEmulator()
    if name == "binary-search":
        return BinarySearchEmulator(n_max)
    if name == "constant":
        return ConstantEmulator(bit)
    if name == "random":
        return RandomEmulator(seed)
    raise ValueError(f"unknown emulator {name!r}, expected one of {', '.join(EMULATOR_NAMES)}")


def extract_max_numeral(transcript: QueryTranscript) -> int:
    """Largest decimal numeral in any queried expression or context, 0 if there is none."""
    largest = 0
    for record in transcript.entries:
        for text in (record.expression, record.other, record.context.left, record.context.right):
            for numeral in _NUMERALS.findall(text):
                largest = max(largest, int(numeral))
    return largest


class RefutedLanguage(str, Enum):
    L_INF = "L_INF"
    L_MPRIME = "L_MPRIME"


class AdversaryReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    emulator: str
    expression: str
    other: str
    transcript_inf: QueryTranscript
    max_numeral: int
    m_prime: int
    replay_identical: bool
    representations_identical: bool
    representations: Dict[str, str]
    disagreement_context: int
    delta_output: int
    truth_inf: int
    truth_mprime: int
    refuted_language: RefutedLanguage

    @model_validator(mode="after")
    def _check_m_prime(self) -> "AdversaryReport":
        if self.m_prime <= self.max_numeral:
            raise ValueError("m_prime must exceed every numeral in the transcript")
        return self

    @computed_field
    @property
    def refuted_count(self) -> int:
        return int(self.delta_output != self.truth_inf) + int(self.delta_output != self.truth_mprime)


def _represent_both(
    emulator: EmulatorUnderTest, expression: str, other: str, oracle: AssertionOracle
) -> Tuple[Hashable, Hashable]:
    return emulator.represent(expression, oracle), emulator.represent(other, oracle)


def run_adversary(
    emulator: EmulatorUnderTest,
    expression: str = LeqVariant.LEQ_CALL.value,
    other: str = LeqVariant.TRUE_LITERAL.value,
    budget: Optional[int] = None,
) -> AdversaryReport:
    """Refute ``emulator`` on one of L_inf and L_m'.

    Raises:
        BudgetExhaustedError: If the emulator outruns ``budget`` on L_inf
        ReplayMismatchError: If L_m' answers some transcript query differently
    """
    language_inf = make_leq(INFINITY)
    oracle_inf = AssertionOracle(language_inf, EQUALITY, budget=budget)
    reps_inf = _represent_both(emulator, expression, other, oracle_inf)
    transcript = oracle_inf.read_transcript()

    max_numeral = extract_max_numeral(transcript)
    m_prime = max_numeral + 1
    language_m = make_leq(m_prime)
    logger.info(f"Adversary vs {emulator.name}: {transcript.count} queries, max numeral {max_numeral}, m'={m_prime}")

    mismatches = replay(transcript, language_m, EQUALITY)
    if mismatches:
        raise ReplayMismatchError(m_prime, mismatches[0])

    reps_m = _represent_both(emulator, expression, other, AssertionOracle(language_m, EQUALITY, budget=budget))

    context = leq_context(LeqVariant.LEQ_CALL, m_prime)
    delta = emulator.decide(reps_inf[0], reps_inf[1], context)
    truth_inf = int(compare(language_inf, EQUALITY, expression, other, context))
    truth_m = int(compare(language_m, EQUALITY, expression, other, context))
    refuted = RefutedLanguage.L_INF if delta != truth_inf else RefutedLanguage.L_MPRIME

    logger.info(f"Adversary vs {emulator.name}: delta={delta} at n={m_prime}, refuted {refuted.value}")
    return AdversaryReport(
        emulator=emulator.name,
        expression=expression,
        other=other,
        transcript_inf=transcript,
        max_numeral=max_numeral,
        m_prime=m_prime,
        replay_identical=True,
        representations_identical=reps_inf == reps_m,
        representations={expression: repr(reps_inf[0]), other: repr(reps_inf[1])},
        disagreement_context=m_prime,
        delta_output=delta,
        truth_inf=truth_inf,
        truth_mprime=truth_m,
        refuted_language=refuted,
    )


def refutation_trials(count: int, seed: int = 0, budget: Optional[int] = None) -> List[AdversaryReport]:
    """Run the adversary against ``count`` random emulators seeded seed, seed+1, ..."""
    return [run_adversary(RandomEmulator(seed + trial), budget=budget) for trial in range(count)]


class ComplexityRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    N: int
    m: int
    binary: int
    linear: int
    recovered: bool


class ComplexitySummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    N: int
    bound: int
    max_binary: int


class ComplexityTable(BaseModel):
    model_config = ConfigDict(frozen=True)

    rows: Tuple[ComplexityRow, ...]
    summaries: Tuple[ComplexitySummary, ...]

    def to_csv(self) -> str:
        lines = ["N,m,binary,linear"]
        lines.extend(f"{row.N},{row.m},{row.binary},{row.linear}" for row in self.rows)
        return "\n".join(lines) + "\n"

    @property
    def within_bounds(self) -> bool:
        return all(summary.max_binary <= summary.bound for summary in self.summaries) and all(
            row.recovered for row in self.rows
        )


def query_bound(n_max: int) -> int:
    """ceil(log2(N + 1)) + 1."""
    return n_max.bit_length() + 1


def sample_bounds(n_max: int, samples: int, rng: random.Random) -> List[int]:
    """1, N and ``samples - 2`` seeded draws from [1, N], sorted and distinct."""
    chosen = {1, n_max}
    while len(chosen) < min(samples, n_max):
        chosen.add(rng.randint(1, n_max))
    return sorted(chosen)


def query_complexity_experiment(
    ns: Iterable[int], samples: int = 3, seed: int = 0, ms: Optional[Iterable[int]] = None
) -> ComplexityTable:
    """Compare binary search with a linear scan for each N and sampled (or given) m <= N."""
    rng = random.Random(seed)
    explicit = sorted(set(ms)) if ms is not None else None
    rows = []
    summaries = []
    for n_max in ns:
        if n_max < 1:
            raise ValueError("every N must be >= 1")
        if explicit is not None:
            bounds = [m for m in explicit if 1 <= m <= n_max]
        else:
            bounds = sample_bounds(n_max, samples, rng)
        max_binary = 0
        for m in bounds:
            language = make_leq(m)
            binary = binary_search_emulator(AssertionOracle(language), n_max)
            linear = linear_scan_emulator(AssertionOracle(language, record=False), n_max)
            max_binary = max(max_binary, binary.queries)
            rows.append(
                ComplexityRow(
                    N=n_max,
                    m=m,
                    binary=binary.queries,
                    linear=linear.queries,
                    recovered=binary.m_estimate == m and linear.m_estimate == m,
                )
            )
        summaries.append(ComplexitySummary(N=n_max, bound=query_bound(n_max), max_binary=max_binary))
        logger.info(f"Complexity N={n_max}: {len(bounds)} bounds, max binary queries {max_binary}")
    return ComplexityTable(rows=tuple(rows), summaries=tuple(summaries))
