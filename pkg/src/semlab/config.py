"""Experiment configuration.

An ``ExperimentConfig`` fully determines a run. Budgets come from the
command line, then the ``SEMLAB_BUDGET`` environment variable, then
``DEFAULT_BUDGET``.
"""

import os
from typing import Any, Dict, Mapping, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from semlab.languages import LanguageSpecError, make_language
from semlab.semantics import Language

BUDGET_ENV = "SEMLAB_BUDGET"
DEFAULT_BUDGET = 50_000_000


def default_budget(environ: Optional[Mapping[str, str]] = None) -> int:
    """Budget from ``SEMLAB_BUDGET`` if set, else ``DEFAULT_BUDGET``."""
    environ = os.environ if environ is None else environ
    raw = environ.get(BUDGET_ENV)
    if raw is None or not raw.strip():
        return DEFAULT_BUDGET
    if not raw.strip().isdigit():
        raise LanguageSpecError(f"{BUDGET_ENV} must be a decimal integer, got {raw!r}")
    return int(raw.strip())


class LanguageSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str = "arith"
    m: Optional[str] = None
    members: Optional[str] = None

    def build(self) -> Language:
        return make_language(self.name, m=self.m, members=self.members)


class ExperimentConfig(BaseModel):
    """Everything a command needs; output location and logging are deliberately absent."""

    model_config = ConfigDict(frozen=True)

    command: str
    language: Optional[LanguageSpec] = None
    expression: Optional[str] = None
    relation: Optional[str] = None
    expr_len: int = 2
    ctx_len: int = 2
    emulator: Optional[str] = None
    n_max: int = 100
    ns: Tuple[int, ...] = ()
    m_values: Optional[Tuple[int, ...]] = None
    samples: int = 3
    trials: int = 1
    bit: int = 0
    seed: int = 0
    modal_command: Optional[str] = None
    worlds: int = 3
    exprs: int = 2
    ctxs: int = 2
    include_null: bool = True
    budget: int = DEFAULT_BUDGET
    output_format: str = "json"

    def echo(self) -> Dict[str, Any]:
        """The config as it appears in reports: only fields that apply to the command."""
        relevant = COMMAND_FIELDS.get(self.command, ())
        data = self.model_dump(mode="json")
        return {key: data[key] for key in ("command", *relevant)}


COMMAND_FIELDS: Dict[str, Tuple[str, ...]] = {
    "emulate": ("language", "expression", "relation", "budget"),
    "transparency": ("language", "expr_len", "ctx_len", "budget"),
    "adversary": ("emulator", "n_max", "seed", "trials", "bit", "budget"),
    "modal": ("modal_command", "worlds", "exprs", "ctxs", "include_null", "budget"),
    "complexity": ("ns", "m_values", "samples", "seed"),
}
