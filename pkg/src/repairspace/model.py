"""Value types for existential-rule knowledge bases.

Everything here is an immutable, hashable value object. Fact identity is
structural equality on ground atoms; the position of a fact in
``KnowledgeBase.facts`` is the canonical identifier used by every
downstream module (conflicts, repairs, provenance).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, Tuple, Union


@dataclass(frozen=True)
class Constant:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Variable:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class SkolemTerm:
    """Function term standing for an existentially quantified individual."""

    functor: str
    args: Tuple["Term", ...] = ()

    def __str__(self) -> str:
        return f"{self.functor}({', '.join(str(a) for a in self.args)})"


Term = Union[Constant, Variable, SkolemTerm]

#: A homomorphism / grounding assignment.
Substitution = Dict[Variable, Term]


def term_is_ground(t: Term) -> bool:
    if isinstance(t, Variable):
        return False
    if isinstance(t, SkolemTerm):
        return all(term_is_ground(a) for a in t.args)
    return True


def term_sort_key(t: Term):
    """Total, deterministic order over terms (constants < variables < skolems)."""
    if isinstance(t, Constant):
        return (0, t.name)
    if isinstance(t, Variable):
        return (1, t.name)
    return (2, t.functor, tuple(term_sort_key(a) for a in t.args))


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: Tuple[Term, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({', '.join(str(a) for a in self.args)})"

    @staticmethod
    def of(predicate: str, *names: str) -> "Atom":
        """Build an atom from bare names; uppercase initials are variables."""
        terms: Tuple[Term, ...] = tuple(
            Variable(n) if n[:1].isupper() else Constant(n) for n in names
        )
        return Atom(predicate=predicate, args=terms)

    @property
    def arity(self) -> int:
        return len(self.args)

    def is_ground(self) -> bool:
        return all(term_is_ground(a) for a in self.args)

    def has_skolem(self) -> bool:
        return any(_term_has_skolem(a) for a in self.args)

    def variables(self) -> FrozenSet[Variable]:
        out = set()

        def walk(t: Term) -> None:
            if isinstance(t, Variable):
                out.add(t)
            elif isinstance(t, SkolemTerm):
                for a in t.args:
                    walk(a)

        for a in self.args:
            walk(a)
        return frozenset(out)


def _term_has_skolem(t: Term) -> bool:
    if isinstance(t, SkolemTerm):
        return True
    return False


def atom_sort_key(a: Atom):
    return (a.predicate, len(a.args), tuple(term_sort_key(t) for t in a.args))


@dataclass(frozen=True)
class Rule:
    """``head :- body`` with implicit universal quantification.

    Head variables absent from the body are existentially quantified;
    skolemization (chase module) eliminates them.
    """

    id: str
    body: Tuple[Atom, ...]
    head: Tuple[Atom, ...]

    def __post_init__(self) -> None:
        if not self.body or not self.head:
            raise ValueError(f"rule {self.id}: body and head must be nonempty")

    @property
    def body_variables(self) -> FrozenSet[Variable]:
        return frozenset().union(*(a.variables() for a in self.body))

    @property
    def head_variables(self) -> FrozenSet[Variable]:
        return frozenset().union(*(a.variables() for a in self.head))

    @property
    def existential_vars(self) -> FrozenSet[Variable]:
        return self.head_variables - self.body_variables

    @property
    def frontier(self) -> FrozenSet[Variable]:
        """Body variables that also occur in the head."""
        return self.head_variables & self.body_variables

    def __str__(self) -> str:
        head = ", ".join(str(a) for a in self.head)
        body = ", ".join(str(a) for a in self.body)
        return f"{head} :- {body}."


@dataclass(frozen=True)
class NegativeConstraint:
    """A rule body whose conclusion is absurdum."""

    id: str
    body: Tuple[Atom, ...]

    def __post_init__(self) -> None:
        if not self.body:
            raise ValueError(f"constraint {self.id}: body must be nonempty")

    def __str__(self) -> str:
        return "! :- " + ", ".join(str(a) for a in self.body) + "."


@dataclass(frozen=True)
class KnowledgeBase:
    """Facts, rules and negative constraints.

    Facts are ground and duplicate-free; their list order defines the fact
    indices used everywhere downstream. The joint satisfiability of
    rules + constraints is assumed, not checked.
    """

    facts: Tuple[Atom, ...] = ()
    rules: Tuple[Rule, ...] = ()
    constraints: Tuple[NegativeConstraint, ...] = ()

    def __post_init__(self) -> None:
        seen = set()
        for f in self.facts:
            if not f.is_ground():
                raise ValueError(f"non-ground fact: {f}")
            if f in seen:
                raise ValueError(f"duplicate fact: {f}")
            seen.add(f)

    @property
    def predicates(self) -> Dict[str, int]:
        """Predicate name -> arity, over facts, rules and constraints."""
        out: Dict[str, int] = {}
        for a in self._all_atoms():
            out.setdefault(a.predicate, a.arity)
        return out

    def _all_atoms(self) -> Iterator[Atom]:
        yield from self.facts
        for r in self.rules:
            yield from r.body
            yield from r.head
        for n in self.constraints:
            yield from n.body

    def fact_index(self, atom: Atom) -> int:
        return self.facts.index(atom)


@dataclass(frozen=True)
class Query:
    """Boolean conjunctive query; variables are implicitly existential."""

    atoms: Tuple[Atom, ...]

    def __post_init__(self) -> None:
        if not self.atoms:
            raise ValueError("query must have at least one atom")
        for a in self.atoms:
            for t in a.args:
                if _term_has_skolem(t):
                    raise ValueError(f"skolem term not allowed in query atom {a}")

    def variables(self) -> FrozenSet[Variable]:
        return frozenset().union(*(a.variables() for a in self.atoms))

    def __str__(self) -> str:
        return ", ".join(str(a) for a in self.atoms)


@dataclass(frozen=True)
class SaturatedSet:
    """Chase output: derived atoms plus minimal-support provenance.

    ``provenance[a]`` is the family of inclusion-minimal index sets S such
    that ``a`` is derivable from the facts at positions S alone.
    """

    atoms: FrozenSet[Atom]
    provenance: Dict[Atom, FrozenSet[FrozenSet[int]]] = field(hash=False)

    def supports(self, atom: Atom) -> FrozenSet[FrozenSet[int]]:
        return self.provenance[atom]
