"""Syntactic distance between repairs.

Atoms get a weighted size; the distance between two atoms is the size they
jointly lose when generalised to their least general generalisation (with
an absurd-top fallback when none exists); the distance between two repairs
is the cost of an optimal partial injective matching between their atoms,
with a flat penalty per unmatched atom.

The default weights (predicate 1, constant 1, variable 0, penalty 5) are
calibrated so that the worked-example distance matrix comes out in exact
integers; all four are configuration knobs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import linear_sum_assignment

from .model import Atom, SkolemTerm, Term, Variable, atom_sort_key
from .repairs import Repair, RepairSet


class Top:
    """The absurd generalisation: carries no content, size 0."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "TOP"


TOP = Top()

Generalisation = Union[Atom, Top]


@dataclass(frozen=True)
class WeightScheme:
    predicate_weight: float = 1.0
    constant_weight: float = 1.0
    variable_weight: float = 0.0
    unmatched_penalty: float = 5.0

    def __post_init__(self) -> None:
        for name in ("predicate_weight", "constant_weight", "variable_weight", "unmatched_penalty"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if not self.constant_weight > self.variable_weight:
            raise ValueError("constant_weight must exceed variable_weight")
        if not self.unmatched_penalty > 0:
            raise ValueError("unmatched_penalty must be positive")


DEFAULT_WEIGHTS = WeightScheme()


def atom_size(a: Generalisation, w: WeightScheme = DEFAULT_WEIGHTS) -> float:
    """Weighted size: predicate weight plus a per-argument-occurrence term.

    Variables weigh ``variable_weight`` per occurrence; constants and
    skolem terms weigh ``constant_weight``. TOP has size 0.
    """
    if isinstance(a, Top):
        return 0.0
    total = w.predicate_weight
    for t in a.args:
        total += w.variable_weight if isinstance(t, Variable) else w.constant_weight
    return total


def lgg(a: Atom, b: Atom) -> Generalisation:
    """Least general generalisation of two atoms, TOP when none exists.

    Plotkin anti-unification, position-wise: equal terms are kept, each
    distinct pair of terms maps to a variable, the same pair always to the
    same variable.
    """
    if a.predicate != b.predicate or a.arity != b.arity:
        return TOP
    pair_vars: dict = {}
    out: List[Term] = []
    for ta, tb in zip(a.args, b.args):
        if ta == tb:
            out.append(ta)
        else:
            key = (ta, tb)
            if key not in pair_vars:
                pair_vars[key] = Variable(f"G{len(pair_vars)}")
            out.append(pair_vars[key])
    return Atom(a.predicate, tuple(out))


def atom_distance(a: Atom, b: Atom, w: WeightScheme = DEFAULT_WEIGHTS) -> float:
    """Size lost by a, plus size lost by b, when generalised to lgg(a, b)."""
    g = lgg(a, b)
    gs = atom_size(g, w)
    return (atom_size(a, w) - gs) + (atom_size(b, w) - gs)


AtomSet = Union[Repair, Iterable[Atom]]


def _atoms_of(x: AtomSet) -> Tuple[Atom, ...]:
    if isinstance(x, Repair):
        return x.facts
    return tuple(sorted(set(x), key=atom_sort_key))


def repair_distance(a: AtomSet, b: AtomSet, w: WeightScheme = DEFAULT_WEIGHTS) -> float:
    """Least total cost over all partial injective matchings of the atoms.

    Matched pairs cost their atom distance; every unmatched atom on either
    side costs the flat ``unmatched_penalty``. Solved exactly as an
    (n+m) x (n+m) assignment problem: pairing costs in the top-left block,
    the penalty on the diagonals of the unmatched blocks, zero in the
    dummy-dummy block.
    """
    atoms_a = _atoms_of(a)
    atoms_b = _atoms_of(b)
    n, m = len(atoms_a), len(atoms_b)
    if n == 0 and m == 0:
        return 0.0
    lam = w.unmatched_penalty
    pair = np.zeros((n, m))
    for i, xa in enumerate(atoms_a):
        for j, xb in enumerate(atoms_b):
            pair[i, j] = atom_distance(xa, xb, w)
    big = lam * (n + m) + float(pair.sum()) + 1.0
    cost = np.full((n + m, n + m), big)
    cost[:n, :m] = pair
    for i in range(n):
        cost[i, m + i] = lam
    for j in range(m):
        cost[n + j, j] = lam
    cost[n:, m:] = 0.0
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].sum())


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric nonnegative matrix over a labelled repair set."""

    labels: Tuple[str, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError("distance matrix must be square")
        if v.shape[0] != len(self.labels):
            raise ValueError("label count must match matrix dimension")
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return len(self.labels)

    def to_lists(self) -> List[List[float]]:
        return [[float(x) for x in row] for row in self.values]


def distance_matrix(rs: RepairSet, w: WeightScheme = DEFAULT_WEIGHTS) -> DistanceMatrix:
    """Pairwise repair distances; each unordered pair computed once."""
    n = len(rs)
    values = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d = repair_distance(rs[i], rs[j], w)
            values[i, j] = d
            values[j, i] = d
    return DistanceMatrix(labels=rs.labels, values=values)


@dataclass(frozen=True)
class MetricViolation:
    kind: str  # symmetry | diagonal | negativity | triangle
    indices: Tuple[int, ...]
    amount: float

    def __str__(self) -> str:
        return f"{self.kind} violated at {self.indices} by {self.amount:g}"


def check_metric_axioms(m: DistanceMatrix, tol: float = 1e-9) -> List[MetricViolation]:
    """Report symmetry, zero-diagonal/positivity and triangle violations.

    An empty report means the matrix is a metric up to the tolerance.
    """
    v = m.values
    n = len(m)
    out: List[MetricViolation] = []
    for i in range(n):
        if abs(v[i, i]) > tol:
            out.append(MetricViolation("diagonal", (i,), float(abs(v[i, i]))))
    for i in range(n):
        for j in range(i + 1, n):
            if abs(v[i, j] - v[j, i]) > tol:
                out.append(MetricViolation("symmetry", (i, j), float(abs(v[i, j] - v[j, i]))))
            if v[i, j] < -tol:
                out.append(MetricViolation("negativity", (i, j), float(-v[i, j])))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if i in (j, k) or j == k:
                    continue
                gap = v[i, k] - (v[i, j] + v[j, k])
                if gap > tol:
                    out.append(MetricViolation("triangle", (i, j, k), float(gap)))
    return out
