"""Order dependence of quaternionic circuits, and a toy bit commitment built on it.

The shipped witness is two single-quaterbit gates on separate wires,
``ROTQ_I`` on wire 0 and ``ROTQ_J`` on wire 1, followed by an opening
layer ``CNOT(0, 1)`` then ``ROTQ_K`` on wire 0.  Only the relative order of
the first two gates is free.  The two orders leave amplitudes that differ
by the sign of a k component; a real opening layer cannot see that sign
(Re(xy) = Re(yx) for quaternions), so the opening includes a quaternionic
gate.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, Gate, OrderedCircuit, all_sorts, builtin
from .linalg import Matrix, StateVector, basis_state
from .scalars import ScalarDomain
from .simulator import MeasurementDistribution, distance, marginal, measure_all, run

ALICE, BOB = 0, 1

# Pinned outcome distributions of the witness from |00>, indexed by basis
# string 00, 01, 10, 11.  Computed by hand-expanded quaternion amplitudes
# and cross-checked by the brute-force oracle in the test suite.
WITNESS_FIXTURES = {
    (0, 1, 2, 3): (0.5, 0.5, 0.0, 0.0),
    (1, 0, 2, 3): (0.0, 0.5, 0.5, 0.0),
}


def witness_circuit(alice: str = "ROTQ_I", bob: str = "ROTQ_J", opening: bool = True) -> Circuit:
    gates = [
        Gate(0, (ALICE,), builtin(alice), alice),
        Gate(1, (BOB,), builtin(bob), bob),
    ]
    if opening:
        gates += [
            Gate(2, (ALICE, BOB), builtin("CNOT"), "CNOT"),
            Gate(3, (ALICE,), builtin("ROTQ_K"), "ROTQ_K"),
        ]
    return Circuit(2, tuple(gates), ScalarDomain.QUATERNION)


def _complex_shadow_entry(q: np.ndarray) -> np.ndarray:
    imag = q[1:]
    mag = float(np.linalg.norm(imag))
    nz = np.flatnonzero(np.abs(imag) > 0)
    sign = float(np.sign(imag[nz[0]])) if nz.size else 1.0
    return np.array([q[0], sign * mag, 0.0, 0.0])


def complex_shadow(circuit: Circuit) -> Circuit:
    """Same circuit with every entry's imaginary part rotated onto ``i``.

    Keeps the modulus of each entry and leaves no j or k components, so the
    result is a complex circuit written in quaternion form.  Raises if a
    gate stops being norm-preserving.
    """
    gates = []
    for g in circuit.gates:
        data = np.apply_along_axis(_complex_shadow_entry, -1, g.matrix.data)
        gates.append(Gate(g.id, g.wires, Matrix(ScalarDomain.QUATERNION, data), g.name))
    return Circuit(circuit.width, tuple(gates), ScalarDomain.QUATERNION)


@dataclass(frozen=True, eq=False)
class OrderingReport:
    sigmas: tuple[tuple[int, ...], ...]
    distributions: tuple[MeasurementDistribution, ...]
    distances: np.ndarray

    @property
    def max_distance(self) -> float:
        return float(self.distances.max()) if self.distances.size else 0.0

    def to_json(self) -> dict:
        return {
            "sigmas": [list(s) for s in self.sigmas],
            "distributions": [d.to_json() for d in self.distributions],
            "distances": self.distances.tolist(),
            "max_distance": self.max_distance,
        }


def ordering_spread(circuit: Circuit, state: StateVector | None = None, cap: int = 1000) -> OrderingReport:
    """Output distribution under every topological sort, with pairwise L-inf gaps."""
    if state is None:
        state = basis_state(circuit.domain, circuit.width)
    sigmas = tuple(all_sorts(circuit, cap))
    dists = tuple(measure_all(run(OrderedCircuit(circuit, s), state)) for s in sigmas)
    k = len(dists)
    dmat = np.zeros((k, k))
    for a, b in itertools.combinations(range(k), 2):
        dmat[a, b] = dmat[b, a] = distance(dists[a], dists[b])
    return OrderingReport(sigmas, dists, dmat)


def witness_report() -> dict:
    report = ordering_spread(witness_circuit())
    doc = report.to_json()
    doc["fixtures"] = {",".join(map(str, s)): list(p) for s, p in WITNESS_FIXTURES.items()}
    doc["fixture_deviation"] = max(
        distance(d, np.array(WITNESS_FIXTURES[s])) for s, d in zip(report.sigmas, report.distributions))
    return doc


# --- bit commitment -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CommitmentTranscript:
    commit_bit: int
    sigma: tuple[int, ...]
    pre_opening: MeasurementDistribution
    alice_marginal: MeasurementDistribution
    bob_marginal: MeasurementDistribution
    opening: MeasurementDistribution

    def to_json(self) -> dict:
        return {
            "commit_bit": self.commit_bit,
            "sigma": list(self.sigma),
            "pre_opening": self.pre_opening.to_json(),
            "alice_marginal": self.alice_marginal.to_json(),
            "bob_marginal": self.bob_marginal.to_json(),
            "opening": self.opening.to_json(),
        }


def bit_commitment_demo(commit_bit: int, alice: str = "ROTQ_I", bob: str = "ROTQ_J",
                        shadow: bool = False) -> CommitmentTranscript:
    """Alice applies her gate before (bit 0) or after (bit 1) Bob's.

    The opening is the fixed witness layer: CNOT(Alice, Bob) then ROTQ_K on
    Alice's quaterbit, measured in the computational basis.  ``shadow``
    swaps in the commuting complex version of every gate.
    """
    if commit_bit not in (0, 1):
        raise ValueError("commit_bit must be 0 or 1")
    full = witness_circuit(alice, bob)
    pre = witness_circuit(alice, bob, opening=False)
    if shadow:
        full, pre = complex_shadow(full), complex_shadow(pre)
    first = (0, 1) if commit_bit == 0 else (1, 0)
    state = basis_state(ScalarDomain.QUATERNION, 2)
    pre_dist = measure_all(run(OrderedCircuit(pre, first), state))
    opening = measure_all(run(OrderedCircuit(full, first + (2, 3)), state))
    return CommitmentTranscript(
        commit_bit, first + (2, 3), pre_dist,
        marginal(pre_dist, [ALICE]), marginal(pre_dist, [BOB]), opening)


@dataclass(frozen=True, eq=False)
class CommitmentReport:
    commit0: CommitmentTranscript
    commit1: CommitmentTranscript

    @property
    def gap(self) -> float:
        return distance(self.commit0.opening, self.commit1.opening)

    @property
    def concealment_gap(self) -> float:
        """L-inf gap between the pre-opening distributions (both marginals and joint)."""
        return max(distance(self.commit0.pre_opening, self.commit1.pre_opening),
                   distance(self.commit0.alice_marginal, self.commit1.alice_marginal),
                   distance(self.commit0.bob_marginal, self.commit1.bob_marginal))

    def to_json(self) -> dict:
        return {
            "transcripts": [self.commit0.to_json(), self.commit1.to_json()],
            "gap": self.gap,
            "concealment_gap": self.concealment_gap,
            "opening": "CNOT(1,2) then ROTQ_K on wire 1, computational basis",
        }


def commitment_report(shadow: bool = False) -> CommitmentReport:
    return CommitmentReport(bit_commitment_demo(0, shadow=shadow), bit_commitment_demo(1, shadow=shadow))
