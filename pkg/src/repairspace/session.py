"""Analysis sessions tying the pipeline together.

A session parses a knowledge base once and eagerly computes the repair
set, the distance matrix and the planar embedding. Partition requests
are cached per parameter set, and the most recently requested partition
becomes the session's current one, against which cluster-indexed query
scopes are resolved.

Sessions serialize to a single self-describing JSON document carrying
the source text, the configuration and every computed artifact, so a
load reconstructs the session bit-exactly without recomputation.
"""
from __future__ import annotations

import dataclasses
import json
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from .chase import DEFAULT_MAX_ROUNDS, skolemized_rules
from .clustering import (
    Partition,
    default_sigma,
    eigenvalue_report,
    spectral_partition,
    threshold_partition,
)
from .geometry import DEFAULT_MAX_ITERS, DEFAULT_TOL, Embedding, mds_embed
from .inference import Semantics, entails_scoped, ics_core
from .metric import DEFAULT_WEIGHTS, DistanceMatrix, WeightScheme, distance_matrix
from .model import KnowledgeBase, Query
from .parser import parse_kb, parse_query
from .repairs import Repair, RepairSet, compute_repairs

SESSION_FORMAT_VERSION = 1


class SessionFormatError(ValueError):
    """A session document is unreadable or has an unsupported version."""


def to_json(doc) -> str:
    """Canonical serialization used by both the CLI and the HTTP service."""
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


@dataclass(frozen=True)
class SessionConfig:
    weights: WeightScheme = DEFAULT_WEIGHTS
    max_rounds: int = DEFAULT_MAX_ROUNDS
    mds_seed: int = 0
    mds_max_iters: int = DEFAULT_MAX_ITERS
    mds_tol: float = DEFAULT_TOL

    def to_dict(self) -> dict:
        return {
            "weights": {
                "predicate": self.weights.predicate_weight,
                "constant": self.weights.constant_weight,
                "variable": self.weights.variable_weight,
                "unmatched_penalty": self.weights.unmatched_penalty,
            },
            "max_rounds": self.max_rounds,
            "mds": {
                "seed": self.mds_seed,
                "max_iters": self.mds_max_iters,
                "tol": self.mds_tol,
            },
        }

    @staticmethod
    def from_dict(doc: Optional[dict]) -> "SessionConfig":
        if doc is None:
            return SessionConfig()
        if not isinstance(doc, dict):
            raise ValueError("config must be an object")
        unknown = set(doc) - {"weights", "max_rounds", "mds"}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        weights = DEFAULT_WEIGHTS
        if "weights" in doc:
            w = dict(doc["weights"])
            unknown = set(w) - {"predicate", "constant", "variable", "unmatched_penalty"}
            if unknown:
                raise ValueError(f"unknown weight keys: {sorted(unknown)}")
            weights = WeightScheme(
                predicate_weight=float(w.get("predicate", 1.0)),
                constant_weight=float(w.get("constant", 1.0)),
                variable_weight=float(w.get("variable", 0.0)),
                unmatched_penalty=float(w.get("unmatched_penalty", 5.0)),
            )
        mds = dict(doc.get("mds", {}))
        unknown = set(mds) - {"seed", "max_iters", "tol"}
        if unknown:
            raise ValueError(f"unknown mds keys: {sorted(unknown)}")
        return SessionConfig(
            weights=weights,
            max_rounds=int(doc.get("max_rounds", DEFAULT_MAX_ROUNDS)),
            mds_seed=int(mds.get("seed", 0)),
            mds_max_iters=int(mds.get("max_iters", DEFAULT_MAX_ITERS)),
            mds_tol=float(mds.get("tol", DEFAULT_TOL)),
        )


@dataclass(frozen=True)
class ClusteringSpec:
    """Parameters naming one partition of the repair set."""

    method: str
    k: Optional[int] = None
    sigma: Optional[float] = None
    seed: int = 0
    tau: Optional[float] = None

    def __post_init__(self) -> None:
        if self.method == "spectral":
            if self.k is None:
                raise ValueError("spectral clustering requires k")
            if self.tau is not None:
                raise ValueError("tau applies to threshold clustering only")
        elif self.method == "threshold":
            if self.tau is None:
                raise ValueError("threshold clustering requires tau")
            if self.k is not None or self.sigma is not None:
                raise ValueError("k and sigma apply to spectral clustering only")
        else:
            raise ValueError(f"unknown clustering method {self.method!r}")

    def key(self) -> tuple:
        if self.method == "spectral":
            return ("spectral", self.k, self.sigma, self.seed)
        return ("threshold", self.tau)

    def to_dict(self) -> dict:
        if self.method == "spectral":
            return {
                "method": "spectral",
                "k": self.k,
                "sigma": self.sigma,
                "seed": self.seed,
            }
        return {"method": "threshold", "tau": self.tau}

    @staticmethod
    def from_dict(doc: dict) -> "ClusteringSpec":
        if not isinstance(doc, dict) or "method" not in doc:
            raise ValueError("clustering spec must be an object with a method")
        unknown = set(doc) - {"method", "k", "sigma", "seed", "tau"}
        if unknown:
            raise ValueError(f"unknown clustering keys: {sorted(unknown)}")
        method = doc["method"]
        return ClusteringSpec(
            method=method,
            k=None if doc.get("k") is None else int(doc["k"]),
            sigma=None if doc.get("sigma") is None else float(doc["sigma"]),
            seed=int(doc.get("seed", 0)),
            tau=None if doc.get("tau") is None else float(doc["tau"]),
        )


@dataclass(frozen=True)
class Scope:
    """Which repairs a query runs against."""

    kind: str  # all | cluster | repairs | partition
    cluster: Optional[int] = None
    repair_labels: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in ("all", "cluster", "repairs", "partition"):
            raise ValueError(f"unknown scope kind {self.kind!r}")
        if self.kind == "cluster" and self.cluster is None:
            raise ValueError("cluster scope requires a cluster index")
        if self.kind == "repairs" and not self.repair_labels:
            raise ValueError("explicit scope must name at least one repair")


def parse_scope(value: Union[str, dict]) -> Scope:
    """Read a scope from its CLI string or HTTP object form.

    Accepted forms: "all", "partition", "cluster:<i>" / {"cluster": i},
    "repairs:<label,...>" / {"repairs": [labels]}.
    """
    if isinstance(value, str):
        text = value.strip()
        if text == "all":
            return Scope(kind="all")
        if text == "partition":
            return Scope(kind="partition")
        if text.startswith("cluster:"):
            raw = text[len("cluster:"):]
            try:
                return Scope(kind="cluster", cluster=int(raw))
            except ValueError:
                raise ValueError(f"bad cluster index {raw!r}") from None
        if text.startswith("repairs:"):
            labels = tuple(p.strip() for p in text[len("repairs:"):].split(",") if p.strip())
            return Scope(kind="repairs", repair_labels=labels)
        raise ValueError(
            f"bad scope {value!r}; expected all, partition, cluster:<i> or repairs:<labels>"
        )
    if isinstance(value, dict):
        if set(value) == {"cluster"}:
            return Scope(kind="cluster", cluster=int(value["cluster"]))
        if set(value) == {"repairs"}:
            labels = value["repairs"]
            if not isinstance(labels, list):
                raise ValueError("repairs scope must list repair labels")
            return Scope(kind="repairs", repair_labels=tuple(str(x) for x in labels))
        raise ValueError('bad scope object; expected {"cluster": i} or {"repairs": [...]}')
    raise ValueError(f"bad scope of type {type(value).__name__}")


class Session:
    """One knowledge base with its eagerly computed analysis artifacts."""

    def __init__(
        self,
        id: str,
        created_at: str,
        kb_text: str,
        kb: KnowledgeBase,
        config: SessionConfig,
        repairs: RepairSet,
        matrix: DistanceMatrix,
        embedding: Embedding,
        current_spec: ClusteringSpec,
        partitions: Optional[Dict[tuple, Tuple[ClusteringSpec, Partition]]] = None,
    ) -> None:
        self.id = id
        self.created_at = created_at
        self.kb_text = kb_text
        self.kb = kb
        self.config = config
        self.repairs = repairs
        self.matrix = matrix
        self.embedding = embedding
        self.current_spec = current_spec
        self._partitions = dict(partitions or {})
        self._rules = skolemized_rules(kb)
        self._lock = threading.Lock()

    def resolve_spec(self, spec: ClusteringSpec) -> ClusteringSpec:
        """Fill in the calibrated sigma so equal parameters share a cache key."""
        if spec.method == "spectral" and spec.sigma is None:
            return dataclasses.replace(spec, sigma=default_sigma(self.matrix))
        return spec

    def partition_for(self, spec: ClusteringSpec) -> Tuple[ClusteringSpec, Partition]:
        spec = self.resolve_spec(spec)
        with self._lock:
            hit = self._partitions.get(spec.key())
            if hit is not None:
                return hit
        if spec.method == "spectral":
            part = spectral_partition(self.matrix, spec.k, sigma=spec.sigma, seed=spec.seed)
        else:
            part = threshold_partition(self.matrix, spec.tau)
        with self._lock:
            self._partitions.setdefault(spec.key(), (spec, part))
            return self._partitions[spec.key()]

    def current_partition(self) -> Tuple[ClusteringSpec, Partition]:
        return self.partition_for(self.current_spec)

    def set_current(self, spec: ClusteringSpec) -> None:
        with self._lock:
            self.current_spec = spec

    def scope_indices(self, scope: Scope) -> Tuple[int, ...]:
        """Resolve a non-partition scope to repair indices."""
        n = len(self.repairs)
        if scope.kind == "all":
            return tuple(range(n))
        if scope.kind == "cluster":
            _, part = self.current_partition()
            if not 0 <= scope.cluster < len(part.blocks):
                raise ValueError(
                    f"cluster index {scope.cluster} out of range; the current "
                    f"partition has {len(part.blocks)} blocks"
                )
            return part.blocks[scope.cluster]
        if scope.kind == "repairs":
            labels = list(self.repairs.labels)
            indices = []
            for lab in scope.repair_labels:
                if lab not in labels:
                    raise ValueError(f"unknown repair label {lab!r}")
                indices.append(labels.index(lab))
            return tuple(sorted(set(indices)))
        raise ValueError("a partition scope spans all blocks; resolve per block")


def create_session(
    kb_text: str, config: Optional[SessionConfig] = None, id: Optional[str] = None
) -> Session:
    """Parse the knowledge base and compute every analysis artifact."""
    config = config or SessionConfig()
    kb = parse_kb(kb_text)
    repairs = compute_repairs(kb, max_rounds=config.max_rounds)
    matrix = distance_matrix(repairs, config.weights)
    embedding = mds_embed(
        matrix, max_iters=config.mds_max_iters, tol=config.mds_tol, seed=config.mds_seed
    )
    default_spec = ClusteringSpec(method="spectral", k=min(3, len(repairs)), seed=0)
    return Session(
        id=id or uuid.uuid4().hex,
        created_at=datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"),
        kb_text=kb_text,
        kb=kb,
        config=config,
        repairs=repairs,
        matrix=matrix,
        embedding=embedding,
        current_spec=default_spec,
    )


# --- documents ----------------------------------------------------------------


def summary_document(session: Session) -> dict:
    return {
        "id": session.id,
        "repair_count": len(session.repairs),
        "labels": list(session.repairs.labels),
    }


def _repair_records(repairs: RepairSet) -> List[dict]:
    return [
        {
            "label": lab,
            "fact_indices": list(r.fact_indices),
            "facts": [str(a) for a in r.facts],
        }
        for lab, r in zip(repairs.labels, repairs)
    ]


def _partition_labels(partition: Partition, repairs: RepairSet) -> List[List[str]]:
    labels = repairs.labels
    return [[labels[i] for i in block] for block in partition.blocks]


def analysis_document(session: Session, spec: Optional[ClusteringSpec] = None) -> dict:
    """Everything a client needs to draw and interrogate the repair map.

    Requesting an analysis makes its partition the session's current one.
    """
    spec, partition = session.partition_for(spec or session.current_spec)
    session.set_current(spec)
    sigma = spec.sigma if spec.method == "spectral" else default_sigma(session.matrix)
    return {
        "repairs": _repair_records(session.repairs),
        "matrix": {
            "labels": list(session.matrix.labels),
            "values": session.matrix.to_lists(),
        },
        "embedding": {
            "points": session.embedding.to_records(),
            "achieved_stress": float(session.embedding.achieved_stress),
            "iterations_used": session.embedding.iterations_used,
        },
        "clustering": spec.to_dict(),
        "partition": {"blocks": _partition_labels(partition, session.repairs)},
        "eigenvalues": eigenvalue_report(session.matrix, sigma),
    }


def answer_document(
    session: Session,
    query_text: str,
    semantics: Union[str, Semantics],
    scope: Union[str, dict, Scope],
) -> dict:
    """Answer one query against one scope (or against every block)."""
    if not isinstance(scope, Scope):
        scope = parse_scope(scope)
    if isinstance(semantics, str):
        semantics = Semantics.parse(semantics)
    query = parse_query(query_text, known_predicates=session.kb.predicates)
    rendered = ", ".join(str(a) for a in query.atoms)
    rules = session._rules
    labels = session.repairs.labels

    def block_answer(indices: Tuple[int, ...]) -> dict:
        return {
            "repairs": [labels[i] for i in indices],
            "answer": entails_scoped(
                session.repairs, indices, query, rules, semantics, session.config.max_rounds
            ),
            "consensus_atoms": len(
                ics_core(session.repairs, indices, rules, session.config.max_rounds)
            ),
        }

    if scope.kind == "partition":
        spec, partition = session.current_partition()
        return {
            "query": rendered,
            "semantics": semantics.value,
            "scope": {"kind": "partition", "clustering": spec.to_dict()},
            "blocks": [block_answer(block) for block in partition.blocks],
        }

    indices = session.scope_indices(scope)
    echo: dict = {"kind": scope.kind}
    if scope.kind == "cluster":
        echo["cluster"] = scope.cluster
    echo["repairs"] = [labels[i] for i in indices]
    result = block_answer(indices)
    return {
        "query": rendered,
        "semantics": semantics.value,
        "scope": echo,
        "answer": result["answer"],
        "consensus_atoms": result["consensus_atoms"],
    }


def matrix_csv(session: Session) -> str:
    """CSV rendering of the distance matrix, labels on both axes."""

    def fmt(x: float) -> str:
        return str(int(x)) if float(x).is_integer() else repr(float(x))

    labels = session.matrix.labels
    lines = ["label," + ",".join(labels)]
    for lab, row in zip(labels, session.matrix.values):
        lines.append(lab + "," + ",".join(fmt(x) for x in row))
    return "\n".join(lines) + "\n"


# --- persistence ----------------------------------------------------------------


def session_document(session: Session) -> dict:
    with session._lock:
        partitions = sorted(session._partitions.values(), key=lambda sp: repr(sp[0].key()))
        current = session.current_spec
    return {
        "version": SESSION_FORMAT_VERSION,
        "id": session.id,
        "created_at": session.created_at,
        "kb_text": session.kb_text,
        "config": session.config.to_dict(),
        "repairs": [list(r.fact_indices) for r in session.repairs],
        "matrix": session.matrix.to_lists(),
        "embedding": {
            "points": [[float(x), float(y)] for x, y in session.embedding.points],
            "achieved_stress": float(session.embedding.achieved_stress),
            "iterations_used": session.embedding.iterations_used,
            "stress_history": [float(s) for s in session.embedding.stress_history],
        },
        "current_clustering": session.resolve_spec(current).to_dict(),
        "partitions": [
            {"clustering": spec.to_dict(), "blocks": [list(b) for b in part.blocks]}
            for spec, part in partitions
        ],
    }


def save_session(session: Session, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(to_json(session_document(session)))


def load_session(path: str) -> Session:
    """Rebuild a session from its saved document without recomputation."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = fh.read()
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as e:
        raise SessionFormatError(f"not a session document: {e}") from None
    if not isinstance(doc, dict) or "version" not in doc:
        raise SessionFormatError("not a session document: missing version")
    if doc["version"] != SESSION_FORMAT_VERSION:
        raise SessionFormatError(
            f"unsupported session format version {doc['version']!r}; "
            f"this build reads version {SESSION_FORMAT_VERSION}"
        )
    try:
        config = SessionConfig.from_dict(doc.get("config"))
        kb = parse_kb(doc["kb_text"])
        repairs = RepairSet(
            repairs=tuple(Repair.from_indices(kb, idx) for idx in doc["repairs"])
        )
        matrix = DistanceMatrix(labels=repairs.labels, values=np.array(doc["matrix"]))
        emb = doc["embedding"]
        embedding = Embedding(
            labels=repairs.labels,
            points=np.array(emb["points"], dtype=float).reshape(len(repairs), 2),
            achieved_stress=float(emb["achieved_stress"]),
            iterations_used=int(emb["iterations_used"]),
            stress_history=tuple(float(s) for s in emb["stress_history"]),
        )
        partitions: Dict[tuple, Tuple[ClusteringSpec, Partition]] = {}
        for entry in doc.get("partitions", []):
            spec = ClusteringSpec.from_dict(entry["clustering"])
            part = Partition.from_blocks(entry["blocks"])
            partitions[spec.key()] = (spec, part)
        current = ClusteringSpec.from_dict(doc["current_clustering"])
    except SessionFormatError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise SessionFormatError(f"bad session document: {e}") from None
    return Session(
        id=str(doc["id"]),
        created_at=str(doc["created_at"]),
        kb_text=doc["kb_text"],
        kb=kb,
        config=config,
        repairs=repairs,
        matrix=matrix,
        embedding=embedding,
        current_spec=current,
        partitions=partitions,
    )
