"""State-vector evolution and the measurement rule over any scalar domain."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .circuit import OrderedCircuit
from .linalg import DensityOperator, DimensionError, StateVector
from .scalars import ScalarDomain

STATE_TOL = 1e-10
MAX_WIDTH = {ScalarDomain.REAL: 20, ScalarDomain.COMPLEX: 20, ScalarDomain.QUATERNION: 18}


class NormError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class MeasurementDistribution:
    probabilities: np.ndarray

    def __post_init__(self):
        p = np.array(self.probabilities, dtype=float)
        p.setflags(write=False)
        object.__setattr__(self, "probabilities", p)

    @property
    def num_wires(self) -> int:
        return len(self.probabilities).bit_length() - 1

    def as_dict(self, cutoff: float = 1e-15) -> dict[str, float]:
        m = self.num_wires
        return {format(i, f"0{m}b"): float(p)
                for i, p in enumerate(self.probabilities) if p >= cutoff}

    def to_json(self) -> dict:
        return {"n": self.num_wires, "probs": self.as_dict()}


@dataclass(frozen=True, eq=False)
class Marginal(MeasurementDistribution):
    kept: tuple[int, ...] = ()


def distance(p, q) -> float:
    """L-infinity distance between two distributions."""
    a = p.probabilities if isinstance(p, MeasurementDistribution) else np.asarray(p)
    b = q.probabilities if isinstance(q, MeasurementDistribution) else np.asarray(q)
    if a.shape != b.shape:
        raise DimensionError(f"distribution sizes differ: {a.shape} vs {b.shape}")
    return float(np.max(np.abs(a - b))) if a.size else 0.0


def apply_gate(domain: ScalarDomain, data: np.ndarray, n: int, wires, matrix: np.ndarray) -> np.ndarray:
    """Apply a gate matrix to the given wires of a 2^n amplitude array.

    new[i] = sum_k U[i, k] * old[k], gate entries multiplying from the left.
    """
    wires = list(wires)
    d = len(wires)
    extra = domain.entry_shape
    t = data.reshape((2,) * n + extra)
    t = np.moveaxis(t, wires, list(range(d)))
    moved_shape = t.shape
    flat = t.reshape((2 ** d, -1) + extra)
    out = domain.matmul(matrix, flat).reshape(moved_shape)
    return np.moveaxis(out, list(range(d)), wires).reshape(data.shape)


def run(oc: OrderedCircuit, state: StateVector, check_norm: bool = True) -> StateVector:
    """Evolve ``state`` gate by gate in sigma order."""
    n = oc.width
    if state.domain is not oc.domain:
        raise TypeError(f"{state.domain.value} state for a {oc.domain.value} circuit")
    if state.dim != 2 ** n:
        raise DimensionError(f"state dim {state.dim} does not match width {n}")
    if n > MAX_WIDTH[oc.domain]:
        raise DimensionError(f"width {n} exceeds the {oc.domain.value} kernel cap")
    if check_norm and not state.is_unit(STATE_TOL):
        raise NormError(f"input state has norm {state.norm():.3e}, expected 1")
    data = np.array(state.data)
    for g in oc.ordered_gates():
        data = apply_gate(oc.domain, data, n, g.wires, g.matrix.data)
    return StateVector(oc.domain, data)


def measure_all(state: StateVector) -> MeasurementDistribution:
    return MeasurementDistribution(state.domain.abs2(state.data))


def marginal(dist: MeasurementDistribution, keep: Iterable[int]) -> Marginal:
    """Sum out every wire not in ``keep`` (0-based wire indices)."""
    m = dist.num_wires
    keep = tuple(sorted(set(int(w) for w in keep)))
    if not keep:
        raise ValueError("keep set is empty")
    if keep[0] < 0 or keep[-1] >= m:
        raise ValueError(f"keep {keep} outside wires 0..{m - 1}")
    drop = tuple(w for w in range(m) if w not in keep)
    p = dist.probabilities.reshape((2,) * m).sum(axis=drop) if drop else dist.probabilities
    return Marginal(np.asarray(p).reshape(-1), kept=keep)


def density(state: StateVector) -> DensityOperator:
    """Outer product with entry (i, k) = amp_i * conj(amp_k)."""
    d = state.domain
    a = state.data
    return DensityOperator(d, d.mul(a[:, None], d.conj(a)[None, :]))


def mix(dists: Iterable[MeasurementDistribution], weights=None) -> MeasurementDistribution:
    dists = list(dists)
    w = np.full(len(dists), 1 / len(dists)) if weights is None else np.asarray(weights, dtype=float)
    return MeasurementDistribution(sum(wi * d.probabilities for wi, d in zip(w, dists)))
