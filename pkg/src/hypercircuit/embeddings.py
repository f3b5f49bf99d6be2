"""Block-matrix embeddings between scalar domains and the circuit compiler.

Three embeddings are provided, each described by a grid of real-linear
functionals applied entrywise to a matrix:

``H``     complex -> real,        [[re, im], [-im, re]]
``HHAT``  quaternion -> complex,  [[co, we], [-conj(we), conj(co)]]
``SHAT``  quaternion -> real,     4x4 grid of re/im/jm/km functionals

``embed(A @ B) == embed(A) @ embed(B)`` and ``embed(adjoint(A)) ==
adjoint(embed(A))``, so a circuit can be compiled gate by gate: each gate
gains the extra top wire(s) and keeps its position otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .circuit import Circuit, Gate, OrderedCircuit, circuit_to_json, ordered_operator
from .linalg import (Matrix, StateVector, adjoint, identity,
                     matmul, max_abs_diff, random_group_element)
from .scalars import SCALAR_TOL, ScalarDomain
from .simulator import distance, marginal, measure_all, mix, run

Functional = Callable[[np.ndarray], np.ndarray]


# entrywise functionals; real/complex sources are lifted before use
def _re(a):
    return a[..., 0]


def _im(a):
    return a[..., 1]


def _jm(a):
    return a[..., 2]


def _km(a):
    return a[..., 3]


def _co(a):
    return a[..., 0] + 1j * a[..., 1]


def _we(a):
    return a[..., 2] + 1j * a[..., 3]


def _neg(f: Functional) -> Functional:
    return lambda a: -f(a)


def _cj(f: Functional) -> Functional:
    return lambda a: np.conj(f(a))


@dataclass(frozen=True)
class EmbeddingTensor:
    name: str
    source: ScalarDomain
    target: ScalarDomain
    grid: tuple[tuple[Functional, ...], ...] = field(repr=False)

    @property
    def factor(self) -> int:
        return len(self.grid)

    @property
    def top_wires(self) -> int:
        return self.factor.bit_length() - 1

    def lift(self, data: np.ndarray, domain: ScalarDomain) -> np.ndarray:
        """Source-domain data as a (..., 4) component array."""
        if domain.rank > self.source.rank:
            raise TypeError(f"{self.name} cannot embed {domain.value} data")
        if domain is ScalarDomain.QUATERNION:
            return np.asarray(data, dtype=float)
        z = np.asarray(data, dtype=complex)
        zeros = np.zeros(z.shape)
        return np.stack([z.real, z.imag, zeros, zeros], axis=-1)


H = EmbeddingTensor("h", ScalarDomain.COMPLEX, ScalarDomain.REAL, (
    (_re, _im),
    (_neg(_im), _re),
))

HHAT = EmbeddingTensor("hhat", ScalarDomain.QUATERNION, ScalarDomain.COMPLEX, (
    (_co, _we),
    (_neg(_cj(_we)), _cj(_co)),
))

SHAT = EmbeddingTensor("shat", ScalarDomain.QUATERNION, ScalarDomain.REAL, (
    (_re, _im, _neg(_km), _neg(_jm)),
    (_neg(_im), _re, _neg(_jm), _km),
    (_km, _jm, _re, _im),
    (_jm, _neg(_km), _neg(_im), _re),
))

TENSORS = {t.name: t for t in (H, HHAT, SHAT)}


def tensor_by_name(name: str) -> EmbeddingTensor:
    try:
        return TENSORS[name.lower()]
    except KeyError:
        raise ValueError(f"unknown embedding {name!r}; choose from {sorted(TENSORS)}") from None


def default_tensor(domain) -> EmbeddingTensor:
    domain = ScalarDomain.parse(domain)
    if domain is ScalarDomain.QUATERNION:
        return HHAT
    return H


def _target_cast(t: EmbeddingTensor, arr: np.ndarray) -> np.ndarray:
    if t.target is ScalarDomain.REAL:
        return np.real(arr).astype(float)
    return arr.astype(complex)


def embed_matrix(t: EmbeddingTensor, m: Matrix) -> Matrix:
    if not m.is_square:
        raise ValueError(f"embed_matrix needs a square matrix, got {m.shape}")
    a = t.lift(m.data, m.domain)
    blocks = [[_target_cast(t, f(a)) for f in row] for row in t.grid]
    return Matrix(t.target, np.block(blocks))


def embed_vector(t: EmbeddingTensor, column: int, v: StateVector) -> StateVector:
    """Image of ``v`` under one column of the tensor: top wire(s) = ``column``
    for basis inputs."""
    if not 0 <= column < t.factor:
        raise ValueError(f"column must be in 0..{t.factor - 1} for {t.name}")
    a = t.lift(v.data, v.domain)
    return StateVector(t.target, np.concatenate([_target_cast(t, row[column](a)) for row in t.grid]))


# --- compiler ---------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CompiledCircuit:
    target: OrderedCircuit
    tensor: EmbeddingTensor
    source_width: int
    wire_map: dict[int, int]
    top_wires: tuple[int, ...]
    provenance: dict[int, dict]

    @property
    def width(self) -> int:
        return self.target.width

    def to_json(self) -> dict:
        doc = circuit_to_json(self.target.circuit, self.target.sigma, self.provenance)
        doc["embedding"] = self.tensor.name
        doc["source_width"] = self.source_width
        doc["top_wires"] = [w + 1 for w in self.top_wires]
        return doc


def compile_circuit(oc: OrderedCircuit, t: EmbeddingTensor, optimize: bool = True) -> CompiledCircuit:
    """Emit one lower-domain gate per source gate, in sigma order.

    Gates whose entries are all real embed as ``I (x) U``; with ``optimize``
    they are emitted unchanged on their shifted wires, skipping the top wire.
    """
    if oc.domain.rank > t.source.rank:
        raise TypeError(f"embedding {t.name} cannot compile a {oc.domain.value} circuit")
    k = t.top_wires
    tops = tuple(range(k))
    wire_map = {w: w + k for w in range(oc.width)}
    gates = []
    provenance = {}
    for g in oc.ordered_gates():
        shifted = tuple(wire_map[w] for w in g.wires)
        real = optimize and g.domain.is_real_valued(g.matrix.data, SCALAR_TOL)
        if real:
            m = Matrix(t.target, g.domain.real_part(g.matrix.data))
            gates.append(Gate(g.id, shifted, m, g.name, check=False))
        else:
            gates.append(Gate(g.id, tops + shifted, embed_matrix(t, g.matrix), g.name, check=False))
        provenance[g.id] = {"source_gate": g.id, "embedding": t.name, "top_wire_used": not real}
    circuit = Circuit(oc.width + k, tuple(gates), t.target)
    return CompiledCircuit(OrderedCircuit(circuit, oc.sigma), t, oc.width, wire_map, tops, provenance)


# --- verification -------------------------------------------------------------------

def verify_circularity(oc: OrderedCircuit, cc: CompiledCircuit) -> float:
    """Max-norm gap between the compiled operator and the embedded source operator."""
    return max_abs_diff(ordered_operator(cc.target), embed_matrix(cc.tensor, ordered_operator(oc)))


def homomorphism_deviations(t: EmbeddingTensor, trials: int, dim: int, seed=0) -> dict[str, float]:
    rng = np.random.default_rng(seed)
    worst = {"product": 0.0, "adjoint": 0.0, "group": 0.0}
    eye = identity(t.target, t.factor * dim)
    for _ in range(trials):
        a = random_group_element(t.source, dim, rng.integers(2 ** 63))
        b = random_group_element(t.source, dim, rng.integers(2 ** 63))
        ea, eb = embed_matrix(t, a), embed_matrix(t, b)
        worst["product"] = max(worst["product"], max_abs_diff(embed_matrix(t, matmul(a, b)), matmul(ea, eb)))
        worst["adjoint"] = max(worst["adjoint"], max_abs_diff(embed_matrix(t, adjoint(a)), adjoint(ea)))
        worst["group"] = max(worst["group"], max_abs_diff(matmul(adjoint(ea), ea), eye))
    return worst


def verify_homomorphism(t: EmbeddingTensor, trials: int, dim: int, seed=0) -> float:
    """Worst deviation of the product, adjoint and group-membership identities."""
    return max(homomorphism_deviations(t, trials, dim, seed).values())


TOP_INIT = ("zero", "one", "mixed")


def top_columns(t: EmbeddingTensor, top_init: str) -> list[int]:
    if top_init == "zero":
        return [0]
    if top_init == "one":
        return [t.factor - 1]
    if top_init == "mixed":
        return list(range(t.factor))
    raise ValueError(f"top_init must be one of {TOP_INIT}")


@dataclass(frozen=True)
class StatisticsCheck:
    distance: float
    state_deviation: float

    @property
    def worst(self) -> float:
        return max(self.distance, self.state_deviation)


def verify_statistics(oc: OrderedCircuit, cc: CompiledCircuit, state: StateVector,
                      top_init: str = "zero") -> StatisticsCheck:
    """Compare bottom-wire statistics of the compiled run with the source run.

    ``mixed`` averages the distributions over every tensor column with equal
    weight.  ``state_deviation`` checks run(cc, embed(col, v)) against
    embed(col, run(oc, v)) for each column used.
    """
    t = cc.tensor
    final = run(oc, state)
    expected = measure_all(final)
    keep = [cc.wire_map[w] for w in range(oc.width)]
    dists = []
    state_dev = 0.0
    for col in top_columns(t, top_init):
        out = run(cc.target, embed_vector(t, col, state))
        state_dev = max(state_dev, max_abs_diff(out, embed_vector(t, col, final)))
        dists.append(measure_all(out))
    bottom = marginal(mix(dists), keep)
    return StatisticsCheck(distance(bottom, expected), state_dev)


def embedded_identity_check(t: EmbeddingTensor, dim: int) -> float:
    return max_abs_diff(embed_matrix(t, identity(t.source, dim)), identity(t.target, t.factor * dim))


__all__ = [
    "EmbeddingTensor", "H", "HHAT", "SHAT", "TENSORS", "tensor_by_name", "default_tensor",
    "embed_matrix", "embed_vector", "CompiledCircuit", "compile_circuit",
    "verify_circularity", "verify_homomorphism", "homomorphism_deviations",
    "verify_statistics", "StatisticsCheck", "TOP_INIT", "top_columns",
]
