"""Desk-scale verification suite: one named check per acceptance criterion.

Every check is seeded and returns a :class:`CriterionResult`.  JSON output
carries no timings so repeated runs are byte-identical; timings go to the
human-readable log.
"""
from __future__ import annotations

import dataclasses
import logging
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import demos
from .circuit import BUILTINS, Circuit, Gate, OrderedCircuit, builtin, default_sort
from .embeddings import (H, HHAT, SHAT, EmbeddingTensor, compile_circuit, homomorphism_deviations,
                         verify_circularity, verify_statistics, _neg)
from .linalg import Matrix, StateVector, kron, matmul, max_abs_diff, random_group_element
from .scalars import ScalarDomain

log = logging.getLogger(__name__)

DEFAULT_SEED = 20040101
DEFAULT_TRIALS = 100

HOMOMORPHISM_TOL = 1e-11
COMPILED_TOL = 1e-10
EQUAL_TOL = 1e-12
GAP_MIN = 0.05
KRON_WITNESS_MIN = 0.5


@dataclass
class CriterionResult:
    name: str
    passed: bool
    value: float
    threshold: float
    detail: str = ""
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "value": self.value,
                "threshold": self.threshold, "detail": self.detail}

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.name}: value={self.value:.3e} threshold={self.threshold:.1e} " \
               f"({self.seconds:.2f}s) {self.detail}".rstrip()


def corrupted(t: EmbeddingTensor) -> EmbeddingTensor:
    """Negative control: flip the sign of the bottom-left functional."""
    grid = [list(row) for row in t.grid]
    grid[-1][0] = _neg(grid[-1][0])
    return dataclasses.replace(t, name=t.name, grid=tuple(tuple(r) for r in grid))


# --- random corpus ------------------------------------------------------------

def random_special_unitary(dim: int, rng: np.random.Generator) -> Matrix:
    u = random_group_element(ScalarDomain.COMPLEX, dim, rng.integers(2 ** 63))
    phase = np.linalg.det(u.data) ** (1 / dim)
    return Matrix(ScalarDomain.COMPLEX, u.data / phase)


def random_complex_circuit(rng: np.random.Generator, n: int, s: int) -> Circuit:
    """Gates drawn from {H, S, T, CNOT} plus random SU(2)."""
    gates = []
    for gid in range(s):
        kind = rng.choice(["H", "S", "T", "CNOT", "SU2"] if n > 1 else ["H", "S", "T", "SU2"])
        if kind == "CNOT":
            wires = tuple(int(w) for w in rng.choice(n, size=2, replace=False))
            gates.append(Gate(gid, wires, builtin("CNOT"), "CNOT"))
        elif kind == "SU2":
            gates.append(Gate(gid, (int(rng.integers(n)),), random_special_unitary(2, rng), "SU2"))
        else:
            gates.append(Gate(gid, (int(rng.integers(n)),), builtin(kind), str(kind)))
    return Circuit(n, tuple(gates), ScalarDomain.COMPLEX)


def random_quaternion_circuit(rng: np.random.Generator, n: int, s: int) -> Circuit:
    """Random Sp(2) single-quaterbit gates, with an occasional CNOT."""
    gates = []
    for gid in range(s):
        if n > 1 and rng.random() < 0.2:
            wires = tuple(int(w) for w in rng.choice(n, size=2, replace=False))
            gates.append(Gate(gid, wires, builtin("CNOT"), "CNOT"))
        else:
            m = random_group_element(ScalarDomain.QUATERNION, 2, rng.integers(2 ** 63))
            gates.append(Gate(gid, (int(rng.integers(n)),), m, "Sp2"))
    return Circuit(n, tuple(gates), ScalarDomain.QUATERNION)


def random_sigma(circuit: Circuit, rng: np.random.Generator) -> tuple[int, ...]:
    """A random linear extension: Kahn's algorithm with a uniform pick."""
    succ = circuit.precedence()
    indeg = {k: 0 for k in succ}
    for targets in succ.values():
        for t in targets:
            indeg[t] += 1
    ready = sorted(k for k, d in indeg.items() if d == 0)
    out = []
    while ready:
        k = ready.pop(int(rng.integers(len(ready))))
        out.append(k)
        for t in sorted(succ[k]):
            indeg[t] -= 1
            if indeg[t] == 0:
                ready.append(t)
        ready.sort()
    return tuple(out)


def random_state(domain, n: int, rng: np.random.Generator) -> StateVector:
    domain = ScalarDomain.parse(domain)
    return StateVector(domain, domain.random(rng, (2 ** n,))).normalized()


@dataclass
class CorpusItem:
    circuit: OrderedCircuit
    state: StateVector


def build_corpus(seed: int, count: int = 20) -> dict[str, list[CorpusItem]]:
    rng = np.random.default_rng(seed)
    complex_items, quat_items = [], []
    for _ in range(count):
        n = int(rng.integers(1, 6))
        c = random_complex_circuit(rng, n, int(rng.integers(1, 16)))
        complex_items.append(CorpusItem(OrderedCircuit(c, default_sort(c)), random_state("complex", n, rng)))
    for _ in range(count):
        n = int(rng.integers(1, 4))
        c = random_quaternion_circuit(rng, n, int(rng.integers(1, 11)))
        quat_items.append(CorpusItem(OrderedCircuit(c, random_sigma(c, rng)), random_state("quaternion", n, rng)))
    return {"complex": complex_items, "quaternion": quat_items}


def _pairs(corpus, tensors):
    for t in tensors:
        items = corpus["complex"] if t.source is ScalarDomain.COMPLEX else corpus["quaternion"]
        for item in items:
            yield t, item


# --- criteria ----------------------------------------------------------------------

def check_homomorphism(tensors, trials: int, seed: int) -> CriterionResult:
    worst, where = 0.0, ""
    for t in tensors:
        for dim in (2, 4, 8):
            dev = homomorphism_deviations(t, trials, dim, seed=(seed, dim))
            for key, v in dev.items():
                if v > worst:
                    worst, where = v, f"{t.name} dim={dim} {key}"
    return CriterionResult("homomorphism", worst <= HOMOMORPHISM_TOL, worst, HOMOMORPHISM_TOL,
                           f"worst at {where}" if where else "")


def check_circularity(corpus, tensors, tol: float = COMPILED_TOL) -> CriterionResult:
    worst, where = 0.0, ""
    for t, item in _pairs(corpus, tensors):
        cc = compile_circuit(item.circuit, t)
        dev = verify_circularity(item.circuit, cc)
        if dev > worst:
            worst, where = dev, f"{t.name} n={item.circuit.width} s={item.circuit.circuit.size}"
    return CriterionResult("circularity", worst <= tol, worst, tol,
                           f"worst at {where}" if where else "")


def check_statistics(corpus, tensors, tol: float = COMPILED_TOL) -> CriterionResult:
    worst, spread, where = 0.0, 0.0, ""
    for t, item in _pairs(corpus, tensors):
        cc = compile_circuit(item.circuit, t)
        checks = [verify_statistics(item.circuit, cc, item.state, mode) for mode in ("zero", "one", "mixed")]
        dists = [c.distance for c in checks]
        spread = max(spread, max(dists) - min(dists))
        dev = max(c.worst for c in checks)
        if dev > worst:
            worst, where = dev, f"{t.name} n={item.circuit.width}"
    ok = worst <= tol and spread <= EQUAL_TOL
    return CriterionResult("statistics", ok, worst, tol,
                           f"top-init spread={spread:.1e}" + (f"; worst at {where}" if where else ""))


def check_accounting(corpus, tensors) -> CriterionResult:
    bad = []
    for t, item in _pairs(corpus, tensors):
        src = item.circuit.circuit
        cc = compile_circuit(item.circuit, t)
        tgt = cc.target.circuit
        k = t.top_wires
        if tgt.width != src.width + k:
            bad.append(f"{t.name}: width {tgt.width} != {src.width}+{k}")
        if tgt.size != src.size:
            bad.append(f"{t.name}: size {tgt.size} != {src.size}")
        if tgt.max_arity > src.max_arity + k:
            bad.append(f"{t.name}: arity {tgt.max_arity} > {src.max_arity}+{k}")
    return CriterionResult("width_size_accounting", not bad, float(len(bad)), 0.0, "; ".join(bad[:3]))


def kron_witness_violation() -> float:
    """max|(A(x)B)(C(x)D) - (AC)(x)(BD)| for A=C=diag(i,i), B=D=diag(j,j)."""
    q = ScalarDomain.QUATERNION
    a = Matrix(q, np.array([[[0, 1, 0, 0], [0, 0, 0, 0]], [[0, 0, 0, 0], [0, 1, 0, 0]]], dtype=float))
    b = Matrix(q, np.array([[[0, 0, 1, 0], [0, 0, 0, 0]], [[0, 0, 0, 0], [0, 0, 1, 0]]], dtype=float))
    return max_abs_diff(matmul(kron(a, b), kron(a, b)), kron(matmul(a, a), matmul(b, b)))


def check_order_dependence(tol: float = COMPILED_TOL) -> CriterionResult:
    report = demos.ordering_spread(demos.witness_circuit())
    fixture_dev = max(float(np.max(np.abs(d.probabilities - np.array(demos.WITNESS_FIXTURES[s]))))
                      for s, d in zip(report.sigmas, report.distributions))
    shadow = demos.ordering_spread(demos.complex_shadow(demos.witness_circuit())).max_distance
    kw = kron_witness_violation()
    ok = (report.max_distance >= GAP_MIN and fixture_dev <= tol
          and shadow <= tol and kw >= KRON_WITNESS_MIN)
    return CriterionResult("order_dependence", ok, report.max_distance, GAP_MIN,
                           f"fixture_dev={fixture_dev:.1e} complex_shadow={shadow:.1e} kron_witness={kw:.2f}")


def check_commitment(tol: float = COMPILED_TOL) -> CriterionResult:
    rep = demos.commitment_report()
    ok = rep.gap >= GAP_MIN and rep.concealment_gap <= tol
    return CriterionResult("commitment", ok, rep.gap, GAP_MIN, f"pre-opening gap={rep.concealment_gap:.1e}")


def real_only_circuit(rng: np.random.Generator, n: int = 3) -> Circuit:
    names = ["H", "X", "Z", "CNOT", "SWAP", "TOFFOLI"]
    gates = []
    for gid in range(12):
        name = names[gid % len(names)]
        arity = BUILTINS[name].rows.bit_length() - 1
        wires = tuple(int(w) for w in rng.choice(n, size=arity, replace=False))
        gates.append(Gate(gid, wires, builtin(name, "complex"), name))
    o = random_group_element(ScalarDomain.REAL, 4, rng.integers(2 ** 63))
    gates.append(Gate(len(gates), (0, 2), o, "O4"))
    return Circuit(n, tuple(gates), ScalarDomain.COMPLEX)


def check_real_gate_optimization(seed: int) -> CriterionResult:
    rng = np.random.default_rng(seed)
    src = real_only_circuit(rng)
    bad = []
    for t, circ in ((H, src), (HHAT, _as_quaternion_circuit(src)), (SHAT, _as_quaternion_circuit(src))):
        oc = OrderedCircuit.default(circ)
        cc = compile_circuit(oc, t)
        for g_src, g_out in zip(oc.ordered_gates(), cc.target.ordered_gates()):
            expected = circ.domain.real_part(g_src.matrix.data)
            if not np.array_equal(g_out.matrix.data, expected):
                bad.append(f"{t.name}: gate {g_src.id} matrix changed")
            if set(g_out.wires) & set(cc.top_wires):
                bad.append(f"{t.name}: gate {g_src.id} touches a top wire")
            if g_out.wires != tuple(cc.wire_map[w] for w in g_src.wires):
                bad.append(f"{t.name}: gate {g_src.id} misplaced")
    return CriterionResult("real_gate_optimization", not bad, float(len(bad)), 0.0, "; ".join(bad[:3]))


def _as_quaternion_circuit(c: Circuit) -> Circuit:
    return Circuit(c.width, c.gates, ScalarDomain.QUATERNION)


# --- driver --------------------------------------------------------------------------

SuiteFn = Callable[[], CriterionResult]


def run_suite(seed: int = DEFAULT_SEED, trials: int = DEFAULT_TRIALS, corrupt: bool = False,
              tol: float = COMPILED_TOL) -> list[CriterionResult]:
    """Run every criterion; ``corrupt`` swaps in a broken h as a negative control."""
    trials = max(1, int(trials))
    tensors = (corrupted(H) if corrupt else H, HHAT, SHAT)
    corpus = build_corpus(seed, count=max(1, trials // 5))
    steps: list[tuple[str, SuiteFn]] = [
        ("homomorphism", lambda: check_homomorphism(tensors, trials, seed)),
        ("circularity", lambda: check_circularity(corpus, tensors, tol)),
        ("statistics", lambda: check_statistics(corpus, tensors, tol)),
        ("accounting", lambda: check_accounting(corpus, tensors)),
        ("order", lambda: check_order_dependence(tol)),
        ("commitment", lambda: check_commitment(tol)),
        ("real_gates", lambda: check_real_gate_optimization(seed)),
    ]
    results = []
    for _, fn in steps:
        t0 = time.perf_counter()
        res = fn()
        res.seconds = time.perf_counter() - t0
        log.info(res.line())
        results.append(res)
    return results


def suite_to_json(results: list[CriterionResult], seed: int, trials: int) -> dict:
    return {"seed": seed, "trials": trials, "passed": all(r.passed for r in results),
            "criteria": [r.to_json() for r in results]}
