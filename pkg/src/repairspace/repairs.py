"""Repair enumeration via minimal conflicts and minimal hitting sets.

A conflict is an inclusion-minimal inconsistent subset of the fact base;
repairs are exactly the complements of the minimal hitting sets of the
conflicts. ``brute_force_repairs`` is the independent subset-enumeration
oracle used to cross-check the construction.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .chase import (
    DEFAULT_MAX_ROUNDS,
    apply_substitution,
    find_homomorphisms,
    ground_closure,
    is_consistent,
    saturate,
    skolemized_rules,
)
from .model import Atom, KnowledgeBase, Rule

BRUTE_FORCE_FACT_LIMIT = 20


@dataclass(frozen=True)
class Conflict:
    """Inclusion-minimal inconsistent set of fact indices."""

    fact_indices: FrozenSet[int]

    def __post_init__(self) -> None:
        if not self.fact_indices:
            raise ValueError("a conflict cannot be empty")


@dataclass(frozen=True)
class Repair:
    """A maximal consistent subset of the fact base.

    ``fact_indices`` refer to positions in ``KnowledgeBase.facts``; the
    ground closure is computed lazily and cached per rule set.
    """

    fact_indices: Tuple[int, ...]
    facts: Tuple[Atom, ...]
    _closure_cache: dict = field(
        default_factory=dict, compare=False, repr=False, hash=False
    )

    @staticmethod
    def from_indices(kb: KnowledgeBase, indices: Iterable[int]) -> "Repair":
        idx = tuple(sorted(indices))
        return Repair(fact_indices=idx, facts=tuple(kb.facts[i] for i in idx))

    def ground_closure(
        self, rules: Sequence[Rule], max_rounds: int = DEFAULT_MAX_ROUNDS
    ) -> FrozenSet[Atom]:
        """Ground closure of this repair's facts (rules must be skolemized)."""
        key = (tuple(rules), max_rounds)
        cached = self._closure_cache.get(key)
        if cached is None:
            cached = ground_closure(self.facts, rules, max_rounds)
            self._closure_cache[key] = cached
        return cached


@dataclass(frozen=True)
class RepairSet:
    """All repairs, in canonical order (sorted by sorted index sequence)."""

    repairs: Tuple[Repair, ...]

    def __len__(self) -> int:
        return len(self.repairs)

    def __iter__(self):
        return iter(self.repairs)

    def __getitem__(self, i: int) -> Repair:
        return self.repairs[i]

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(f"r{i}" for i in range(len(self.repairs)))

    def index_of_content(self, facts: Iterable[Atom]) -> Optional[int]:
        """Position of the repair with exactly these facts, if any."""
        want = frozenset(facts)
        for i, r in enumerate(self.repairs):
            if frozenset(r.facts) == want:
                return i
        return None


def _canonical(kb: KnowledgeBase, index_sets: Iterable[FrozenSet[int]]) -> RepairSet:
    ordered = sorted(index_sets, key=lambda s: tuple(sorted(s)))
    return RepairSet(repairs=tuple(Repair.from_indices(kb, s) for s in ordered))


def _minimize(family: Iterable[FrozenSet[int]]) -> Set[FrozenSet[int]]:
    """Inclusion-minimal members of a family of sets."""
    unique = set(family)
    return {s for s in unique if not any(t < s for t in unique)}


def compute_conflicts(
    kb: KnowledgeBase, max_rounds: int = DEFAULT_MAX_ROUNDS
) -> FrozenSet[Conflict]:
    """Exactly the minimal inconsistent subsets of the fact base.

    For every homomorphism of a constraint body into the saturation of F,
    union one minimal support per matched body atom; then minimize the
    whole family by inclusion.
    """
    rules = skolemized_rules(kb)
    sat = saturate(kb.facts, rules, max_rounds)
    candidates: List[FrozenSet[int]] = []
    target = sorted(sat.atoms, key=lambda a: (a.predicate, str(a)))
    for nc in kb.constraints:
        for h in find_homomorphisms(nc.body, target):
            matched = [apply_substitution(b, h) for b in nc.body]
            for combo in product(*(sat.provenance[m] for m in matched)):
                candidates.append(frozenset().union(*combo))
    return frozenset(Conflict(s) for s in _minimize(candidates) if s)


def minimal_hitting_sets(
    conflicts: Iterable[FrozenSet[int]], universe: Iterable[int]
) -> Set[FrozenSet[int]]:
    """All inclusion-minimal H within the universe hitting every conflict.

    Depth-first branching on the elements of the first unhit conflict,
    followed by a subset-minimality post-filter. No conflicts means the
    empty set is the single (trivial) hitting set; an empty conflict is
    unhittable, so the result is empty.
    """
    universe_set = set(universe)
    conflict_list = sorted({frozenset(c) for c in conflicts}, key=lambda s: (len(s), tuple(sorted(s))))
    for c in conflict_list:
        if not c <= universe_set:
            raise ValueError(f"conflict {sorted(c)} is not contained in the universe")
    if any(not c for c in conflict_list):
        return set()

    found: Set[FrozenSet[int]] = set()

    def dfs(hit: FrozenSet[int]) -> None:
        for c in conflict_list:
            if not (c & hit):
                for element in sorted(c):
                    dfs(hit | {element})
                return
        found.add(hit)

    dfs(frozenset())
    return _minimize(found)


def compute_repairs(kb: KnowledgeBase, max_rounds: int = DEFAULT_MAX_ROUNDS) -> RepairSet:
    """All maximal consistent subsets of F, canonically ordered.

    Computed as complements of the minimal hitting sets of the minimal
    conflicts, which coincide with the maximal consistent subsets.
    """
    universe = frozenset(range(len(kb.facts)))
    conflicts = compute_conflicts(kb, max_rounds)
    hitting = minimal_hitting_sets((c.fact_indices for c in conflicts), universe)
    return _canonical(kb, (universe - h for h in hitting))


def brute_force_repairs(kb: KnowledgeBase, max_rounds: int = DEFAULT_MAX_ROUNDS) -> RepairSet:
    """Oracle: enumerate all subsets, keep the maximal consistent ones.

    Guarded to small fact bases; subsets are visited largest-first so that
    subsets of already-found repairs can be skipped without a consistency
    check.
    """
    n = len(kb.facts)
    if n > BRUTE_FORCE_FACT_LIMIT:
        raise ValueError(f"brute force is limited to {BRUTE_FORCE_FACT_LIMIT} facts, got {n}")
    rules = skolemized_rules(kb)
    maximal: List[FrozenSet[int]] = []
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            s = frozenset(subset)
            if any(s <= m for m in maximal):
                continue
            if is_consistent((kb.facts[i] for i in subset), rules, kb.constraints, max_rounds):
                maximal.append(s)
    return _canonical(kb, maximal)
