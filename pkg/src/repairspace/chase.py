"""Skolemized chase: homomorphisms, saturation with provenance, consistency.

The chase uses set semantics (an atom already present is never re-added,
but new minimal support sets for an existing atom still propagate) and a
round cap instead of a termination-class recognizer: exceeding the cap is
an error, never silent truncation.
"""
from __future__ import annotations

import functools
from itertools import product
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .model import (
    Atom,
    KnowledgeBase,
    NegativeConstraint,
    Query,
    Rule,
    SaturatedSet,
    SkolemTerm,
    Substitution,
    Term,
    Variable,
    atom_sort_key,
)

DEFAULT_MAX_ROUNDS = 64


class RoundCapExceeded(Exception):
    """Saturation did not reach a confirmed fixpoint within max_rounds."""

    def __init__(self, max_rounds: int):
        super().__init__(
            f"saturation still changing after {max_rounds} rounds; "
            "the chase does not terminate for this input (or raise max_rounds)"
        )
        self.max_rounds = max_rounds


# --- substitution & skolemization -------------------------------------------


def apply_substitution(atom: Atom, subst: Substitution) -> Atom:
    return Atom(atom.predicate, tuple(_subst_term(t, subst) for t in atom.args))


def _subst_term(t: Term, subst: Substitution) -> Term:
    if isinstance(t, Variable):
        return subst.get(t, t)
    if isinstance(t, SkolemTerm):
        return SkolemTerm(t.functor, tuple(_subst_term(a, subst) for a in t.args))
    return t


def skolemize_rule(rule: Rule) -> Rule:
    """Replace each existential head variable by a fresh skolem function term.

    The functor is unique to (rule id, variable); it is applied to the
    rule's frontier variables. Rules without existential variables are
    returned unchanged.
    """
    existential = rule.existential_vars
    if not existential:
        return rule
    # frontier order: first occurrence in the body, argument-position order
    frontier: List[Variable] = []
    seen: Set[Variable] = set()
    head_vars = rule.head_variables
    for atom in rule.body:
        for t in atom.args:
            if isinstance(t, Variable) and t in head_vars and t not in seen:
                seen.add(t)
                frontier.append(t)
    subst: Substitution = {
        v: SkolemTerm(f"sk_{rule.id}_{v.name}", tuple(frontier)) for v in existential
    }
    return Rule(
        id=rule.id,
        body=rule.body,
        head=tuple(apply_substitution(a, subst) for a in rule.head),
    )


@functools.lru_cache(maxsize=256)
def skolemized_rules(kb: KnowledgeBase) -> Tuple[Rule, ...]:
    return tuple(skolemize_rule(r) for r in kb.rules)


# --- homomorphism search -----------------------------------------------------


def _match_term(pattern: Term, target: Term, subst: Substitution) -> Optional[Substitution]:
    if isinstance(pattern, Variable):
        bound = subst.get(pattern)
        if bound is None:
            out = dict(subst)
            out[pattern] = target
            return out
        return subst if bound == target else None
    if isinstance(pattern, SkolemTerm):
        if not isinstance(target, SkolemTerm) or pattern.functor != target.functor:
            return None
        if len(pattern.args) != len(target.args):
            return None
        for p, t in zip(pattern.args, target.args):
            nxt = _match_term(p, t, subst)
            if nxt is None:
                return None
            subst = nxt
        return subst
    return subst if pattern == target else None


def _match_atom(pattern: Atom, target: Atom, subst: Substitution) -> Optional[Substitution]:
    if pattern.predicate != target.predicate or pattern.arity != target.arity:
        return None
    for p, t in zip(pattern.args, target.args):
        nxt = _match_term(p, t, subst)
        if nxt is None:
            return None
        subst = nxt
    return subst


def find_homomorphisms(pattern: Sequence[Atom], target: Iterable[Atom]) -> List[Substitution]:
    """All substitutions h with h(pattern) a subset of target.

    Complete backtracking search over a per-predicate index of the target;
    results come in a deterministic order (lexicographic over the indices
    of the canonically sorted target atoms chosen per pattern atom).
    """
    target_list = sorted(set(target), key=atom_sort_key)
    index: Dict[Tuple[str, int], List[Atom]] = {}
    for atom in target_list:
        index.setdefault((atom.predicate, atom.arity), []).append(atom)

    pattern = list(pattern)
    results: List[Substitution] = []

    def extend(i: int, subst: Substitution) -> None:
        if i == len(pattern):
            results.append(subst)
            return
        for candidate in index.get((pattern[i].predicate, pattern[i].arity), ()):
            nxt = _match_atom(pattern[i], candidate, subst)
            if nxt is not None:
                extend(i + 1, nxt)

    extend(0, {})
    return results


def entails(atom_set: Iterable[Atom], q: Query) -> bool:
    """True iff the query has a homomorphism into the (ground) atom set."""
    return bool(find_homomorphisms(q.atoms, atom_set))


# --- saturation --------------------------------------------------------------


def _check_skolemized(rules: Iterable[Rule]) -> None:
    for r in rules:
        if r.existential_vars:
            raise ValueError(f"rule {r.id} has existential variables; skolemize it first")


def _dedupe(facts: Iterable[Atom]) -> List[Atom]:
    out: List[Atom] = []
    seen: Set[Atom] = set()
    for f in facts:
        if f not in seen:
            seen.add(f)
            out.append(f)
    return out


def chase_atoms(
    facts: Iterable[Atom], rules: Sequence[Rule], max_rounds: int = DEFAULT_MAX_ROUNDS
) -> Set[Atom]:
    """Atoms of the least fixpoint, without provenance bookkeeping."""
    _check_skolemized(rules)
    atoms: Set[Atom] = set(facts)
    for _ in range(max_rounds):
        new: Set[Atom] = set()
        snapshot = sorted(atoms, key=atom_sort_key)
        for rule in rules:
            for h in find_homomorphisms(rule.body, snapshot):
                for head_atom in rule.head:
                    derived = apply_substitution(head_atom, h)
                    if derived not in atoms:
                        new.add(derived)
        if not new:
            return atoms
        atoms |= new
    raise RoundCapExceeded(max_rounds)


def saturate(
    facts: Sequence[Atom], rules: Sequence[Rule], max_rounds: int = DEFAULT_MAX_ROUNDS
) -> SaturatedSet:
    """Least fixpoint of rule application, tracking minimal supports.

    Fact indices in the provenance are positions in the (deduplicated)
    input sequence. Applying a rule under a homomorphism adds the grounded
    head atoms with supports formed by unioning one minimal support per
    matched body atom; support families are re-minimized on every merge.
    The fixpoint must be confirmed by a change-free round within
    ``max_rounds``, otherwise :class:`RoundCapExceeded` is raised.
    """
    _check_skolemized(rules)
    fact_list = _dedupe(facts)
    supports: Dict[Atom, Set[FrozenSet[int]]] = {
        f: {frozenset([i])} for i, f in enumerate(fact_list)
    }

    def add_support(atom: Atom, s: FrozenSet[int]) -> bool:
        family = supports.setdefault(atom, set())
        if any(existing <= s for existing in family):
            return False
        for dominated in [t for t in family if s < t]:
            family.remove(dominated)
        family.add(s)
        return True

    for _ in range(max_rounds):
        changed = False
        snapshot_atoms = sorted(supports, key=atom_sort_key)
        snapshot_supports = {a: tuple(sorted(f, key=sorted)) for a, f in supports.items()}
        for rule in rules:
            for h in find_homomorphisms(rule.body, snapshot_atoms):
                matched = [apply_substitution(b, h) for b in rule.body]
                for combo in product(*(snapshot_supports[m] for m in matched)):
                    support = frozenset().union(*combo)
                    for head_atom in rule.head:
                        derived = apply_substitution(head_atom, h)
                        if add_support(derived, support):
                            changed = True
        if not changed:
            return SaturatedSet(
                atoms=frozenset(supports),
                provenance={a: frozenset(f) for a, f in supports.items()},
            )
    raise RoundCapExceeded(max_rounds)


def ground_closure(
    facts: Iterable[Atom], rules: Sequence[Rule], max_rounds: int = DEFAULT_MAX_ROUNDS
) -> FrozenSet[Atom]:
    """Saturation atoms containing no skolem term anywhere."""
    return frozenset(a for a in chase_atoms(facts, rules, max_rounds) if not a.has_skolem())


def is_consistent(
    facts: Iterable[Atom],
    rules: Sequence[Rule],
    constraints: Sequence[NegativeConstraint],
    max_rounds: int = DEFAULT_MAX_ROUNDS,
) -> bool:
    """True iff no constraint body maps homomorphically into the saturation.

    Constraint bodies are checked after every round so that inconsistent
    inputs fail fast; violations are stable under further saturation.
    """
    _check_skolemized(rules)
    atoms: Set[Atom] = set(facts)

    def violated() -> bool:
        snapshot = sorted(atoms, key=atom_sort_key)
        return any(find_homomorphisms(nc.body, snapshot) for nc in constraints)

    if violated():
        return False
    for _ in range(max_rounds):
        new: Set[Atom] = set()
        snapshot = sorted(atoms, key=atom_sort_key)
        for rule in rules:
            for h in find_homomorphisms(rule.body, snapshot):
                for head_atom in rule.head:
                    derived = apply_substitution(head_atom, h)
                    if derived not in atoms:
                        new.add(derived)
        if not new:
            return True
        atoms |= new
        if violated():
            return False
    raise RoundCapExceeded(max_rounds)
