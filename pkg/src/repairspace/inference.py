"""Query answering over selected repairs.

Three inconsistency-tolerant semantics, each evaluated against a scope
(a nonempty collection of repair indices):

- AR:  the query follows from every scoped repair's ground closure.
- IAR: the query follows from the closure of the facts common to all
       scoped repairs.
- ICR: the query follows from the atoms common to all scoped closures.

IAR entailment implies ICR entailment implies AR entailment. On a
singleton scope all three coincide.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

from .chase import DEFAULT_MAX_ROUNDS, entails, ground_closure
from .clustering import Partition
from .model import Query, Rule
from .repairs import RepairSet


class Semantics(enum.Enum):
    AR = "AR"
    IAR = "IAR"
    ICR = "ICR"

    @staticmethod
    def parse(text: str) -> "Semantics":
        try:
            return Semantics(text.strip().upper())
        except ValueError:
            raise ValueError(
                f"unknown semantics {text!r}; expected one of AR, IAR, ICR"
            ) from None


@dataclass(frozen=True)
class DifResult:
    """Per-block answers for one query under one semantics."""

    query: Query
    semantics: Semantics
    partition: Partition
    answers: Tuple[bool, ...]

    def __post_init__(self) -> None:
        if len(self.answers) != len(self.partition.blocks):
            raise ValueError("one answer per partition block required")

    def to_dict(self) -> dict:
        return {
            "query": ", ".join(str(a) for a in self.query.atoms),
            "semantics": self.semantics.value,
            "blocks": [[f"r{i}" for i in block] for block in self.partition.blocks],
            "answers": list(self.answers),
        }


def _scope_indices(scope: Iterable[int], n: int) -> Tuple[int, ...]:
    indices = tuple(sorted(set(scope)))
    if not indices:
        raise ValueError("scope must contain at least one repair")
    for i in indices:
        if not 0 <= i < n:
            raise ValueError(f"repair index {i} out of range 0..{n - 1}")
    return indices


def entails_scoped(
    repairs: RepairSet,
    scope: Iterable[int],
    query: Query,
    rules: Sequence[Rule],
    semantics: Semantics,
    max_rounds: int = DEFAULT_MAX_ROUNDS,
) -> bool:
    """Whether the scoped repairs entail the query under the semantics."""
    indices = _scope_indices(scope, len(repairs))
    scoped = [repairs[i] for i in indices]

    if semantics is Semantics.AR:
        return all(
            entails(r.ground_closure(rules, max_rounds), query) for r in scoped
        )

    if semantics is Semantics.IAR:
        common = set(scoped[0].facts)
        for r in scoped[1:]:
            common &= set(r.facts)
        return entails(ground_closure(common, rules, max_rounds), query)

    closures = [r.ground_closure(rules, max_rounds) for r in scoped]
    core = set(closures[0])
    for c in closures[1:]:
        core &= c
    return entails(frozenset(core), query)


def ics_core(
    repairs: RepairSet,
    scope: Iterable[int],
    rules: Sequence[Rule],
    max_rounds: int = DEFAULT_MAX_ROUNDS,
) -> frozenset:
    """Atoms common to every scoped repair's ground closure."""
    indices = _scope_indices(scope, len(repairs))
    core = set(repairs[indices[0]].ground_closure(rules, max_rounds))
    for i in indices[1:]:
        core &= repairs[i].ground_closure(rules, max_rounds)
    return frozenset(core)


def dif_answer(
    repairs: RepairSet,
    partition: Partition,
    query: Query,
    rules: Sequence[Rule],
    semantics: Semantics,
    max_rounds: int = DEFAULT_MAX_ROUNDS,
) -> DifResult:
    """Answer the query once per partition block."""
    if partition.size != len(repairs):
        raise ValueError(
            f"partition covers {partition.size} repairs but the set has {len(repairs)}"
        )
    answers = tuple(
        entails_scoped(repairs, block, query, rules, semantics, max_rounds)
        for block in partition.blocks
    )
    return DifResult(query=query, semantics=semantics, partition=partition, answers=answers)
