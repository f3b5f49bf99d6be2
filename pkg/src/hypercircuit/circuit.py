"""Circuit IR: gates on wires, the precedence DAG, and evaluation orders.

Wires are 0-based in the Python API with wire 0 the most significant bit
of a basis index.  The JSON format uses 1-based wire numbers.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .linalg import Matrix, as_domain, identity, is_group_member, kron, matmul, matrix_from_json, matrix_to_json
from .scalars import ScalarDomain

GATE_TOL = 1e-9
DEFAULT_SORT_CAP = 10_000
MAX_OPERATOR_WIDTH = 10


class CircuitError(ValueError):
    pass


class NonUnitaryGateError(CircuitError):
    pass


class InvalidSigmaError(CircuitError):
    pass


class CycleError(CircuitError):
    pass


class SortCapExceeded(CircuitError):
    pass


class WidthCapError(CircuitError):
    pass


# --- builtin gates ---------------------------------------------------------

_R2 = 1 / math.sqrt(2)


def _q(*rows):
    return np.array(rows, dtype=float)


_Q0, _Q1 = [0, 0, 0, 0], [1, 0, 0, 0]
_QI, _QJ, _QK = [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]

BUILTINS: dict[str, Matrix] = {
    "H": Matrix("real", np.array([[1, 1], [1, -1]]) * _R2),
    "X": Matrix("real", [[0, 1], [1, 0]]),
    "Y": Matrix("complex", [[0, -1j], [1j, 0]]),
    "Z": Matrix("real", [[1, 0], [0, -1]]),
    "S": Matrix("complex", [[1, 0], [0, 1j]]),
    "T": Matrix("complex", [[1, 0], [0, np.exp(1j * np.pi / 4)]]),
    "CNOT": Matrix("real", [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]),
    "SWAP": Matrix("real", [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]),
    "TOFFOLI": Matrix("real", np.eye(8)[[0, 1, 2, 3, 4, 5, 7, 6]]),
    "PHASE_J": Matrix("quaternion", _q([_Q1, _Q0], [_Q0, _QJ])),
    "ROTQ_I": Matrix("quaternion", _q([_Q1, _QI], [_QI, _Q1]) * _R2),
    "ROTQ_J": Matrix("quaternion", _q([_Q1, _QJ], [_QJ, _Q1]) * _R2),
    "ROTQ_K": Matrix("quaternion", _q([_Q1, _QK], [_QK, _Q1]) * _R2),
}


def builtin(name: str, domain=None) -> Matrix:
    try:
        m = BUILTINS[name.upper()]
    except KeyError:
        raise CircuitError(f"unknown builtin gate {name!r}") from None
    if domain is None:
        return m
    domain = ScalarDomain.parse(domain)
    if m.domain.rank > domain.rank:
        raise CircuitError(f"builtin {name} needs a {m.domain.value} circuit")
    return as_domain(m, domain)


# --- gates and circuits ----------------------------------------------------

def _reorder_qubits(m: Matrix, perm: Sequence[int]) -> Matrix:
    """Matrix acting on qubits ``perm[0], perm[1], ...`` of ``m`` in that order."""
    d = len(perm)
    extra = m.domain.entry_shape
    t = m.data.reshape((2,) * (2 * d) + extra)
    axes = list(perm) + [d + p for p in perm] + list(range(2 * d, 2 * d + len(extra)))
    return Matrix(m.domain, np.transpose(t, axes).reshape((2 ** d, 2 ** d) + extra))


@dataclass(frozen=True, eq=False)
class Gate:
    """A small unitary bound to wires.

    ``wires`` may be given in any order; the i-th qubit of ``matrix`` acts
    on ``wires[i]``.  They are normalised to ascending order on construction.
    """

    id: int
    wires: tuple[int, ...]
    matrix: Matrix
    name: str | None = None
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        wires = tuple(int(w) for w in self.wires)
        if not wires:
            raise CircuitError(f"gate {self.id} has no wires")
        if len(set(wires)) != len(wires):
            raise CircuitError(f"gate {self.id} repeats a wire: {wires}")
        if any(w < 0 for w in wires):
            raise CircuitError(f"gate {self.id} has a negative wire index")
        m = self.matrix
        if m.shape != (2 ** len(wires),) * 2:
            raise CircuitError(
                f"gate {self.id}: {m.rows}x{m.cols} matrix on {len(wires)} wires")
        if self.check and not is_group_member(m, GATE_TOL):
            raise NonUnitaryGateError(f"gate {self.id} ({self.name or 'matrix'}) is not norm-preserving")
        order = sorted(range(len(wires)), key=wires.__getitem__)
        if order != list(range(len(wires))):
            m = _reorder_qubits(m, order)
            wires = tuple(wires[i] for i in order)
        object.__setattr__(self, "wires", wires)
        object.__setattr__(self, "matrix", m)

    @property
    def arity(self) -> int:
        return len(self.wires)

    @property
    def domain(self) -> ScalarDomain:
        return self.matrix.domain


@dataclass(frozen=True, eq=False)
class Circuit:
    width: int
    gates: tuple[Gate, ...]
    domain: ScalarDomain

    def __post_init__(self):
        domain = ScalarDomain.parse(self.domain)
        if self.width < 1:
            raise CircuitError("circuit width must be positive")
        gates = []
        seen = set()
        for g in self.gates:
            if g.id in seen:
                raise CircuitError(f"duplicate gate id {g.id}")
            seen.add(g.id)
            if max(g.wires) >= self.width:
                raise CircuitError(f"gate {g.id} uses wire {max(g.wires)} >= width {self.width}")
            if g.domain.rank > domain.rank:
                raise CircuitError(f"gate {g.id} is {g.domain.value} in a {domain.value} circuit")
            if g.domain is not domain:
                g = Gate(g.id, g.wires, as_domain(g.matrix, domain), g.name, check=False)
            gates.append(g)
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "gates", tuple(gates))

    @property
    def size(self) -> int:
        return len(self.gates)

    @property
    def max_arity(self) -> int:
        return max((g.arity for g in self.gates), default=0)

    def gate(self, gid: int) -> Gate:
        for g in self.gates:
            if g.id == gid:
                return g
        raise KeyError(gid)

    def precedence(self) -> dict[int, set[int]]:
        """Successor sets: each gate points at the next gate on each of its wires."""
        succ: dict[int, set[int]] = {g.id: set() for g in self.gates}
        last: dict[int, int] = {}
        for g in self.gates:
            for w in g.wires:
                if w in last:
                    succ[last[w]].add(g.id)
                last[w] = g.id
        return succ

    def program_order(self) -> tuple[int, ...]:
        return tuple(g.id for g in self.gates)


@dataclass(frozen=True, eq=False)
class OrderedCircuit:
    circuit: Circuit
    sigma: tuple[int, ...]

    def __post_init__(self):
        sigma = tuple(int(x) for x in self.sigma)
        validate_sigma(self.circuit, sigma)
        object.__setattr__(self, "sigma", sigma)

    @classmethod
    def default(cls, circuit: Circuit) -> "OrderedCircuit":
        return cls(circuit, default_sort(circuit))

    @property
    def domain(self) -> ScalarDomain:
        return self.circuit.domain

    @property
    def width(self) -> int:
        return self.circuit.width

    def ordered_gates(self) -> list[Gate]:
        by_id = {g.id: g for g in self.circuit.gates}
        return [by_id[i] for i in self.sigma]


# --- topological sorts -------------------------------------------------------

def _indegrees(succ: dict[int, set[int]]) -> dict[int, int]:
    indeg = {k: 0 for k in succ}
    for targets in succ.values():
        for t in targets:
            indeg[t] += 1
    return indeg


def default_sort(circuit: Circuit) -> tuple[int, ...]:
    """Kahn's algorithm, always releasing the smallest available gate id."""
    succ = circuit.precedence()
    indeg = _indegrees(succ)
    heap = [k for k, d in indeg.items() if d == 0]
    heapq.heapify(heap)
    out = []
    while heap:
        k = heapq.heappop(heap)
        out.append(k)
        for t in succ[k]:
            indeg[t] -= 1
            if indeg[t] == 0:
                heapq.heappush(heap, t)
    if len(out) != len(succ):
        raise CycleError("precedence graph has a cycle")
    return tuple(out)


def all_sorts(circuit: Circuit, cap: int = DEFAULT_SORT_CAP) -> list[tuple[int, ...]]:
    """Every linear extension of the precedence DAG, in lexicographic order."""
    default_sort(circuit)  # cycle check
    succ = circuit.precedence()
    indeg = _indegrees(succ)
    out: list[tuple[int, ...]] = []
    prefix: list[int] = []
    n = len(succ)

    def extend():
        if len(prefix) == n:
            if len(out) >= cap:
                raise SortCapExceeded(f"more than {cap} topological sorts")
            out.append(tuple(prefix))
            return
        for k in sorted(k for k, d in indeg.items() if d == 0):
            indeg[k] = -1
            for t in succ[k]:
                indeg[t] -= 1
            prefix.append(k)
            extend()
            prefix.pop()
            for t in succ[k]:
                indeg[t] += 1
            indeg[k] = 0

    extend()
    return out


def validate_sigma(circuit: Circuit, sigma: Sequence[int]) -> None:
    ids = circuit.program_order()
    if sorted(sigma) != sorted(ids):
        raise InvalidSigmaError(f"sigma {list(sigma)} is not a permutation of gate ids {sorted(ids)}")
    pos = {k: i for i, k in enumerate(sigma)}
    for a, targets in circuit.precedence().items():
        for b in targets:
            if pos[a] > pos[b]:
                raise InvalidSigmaError(f"sigma places gate {b} before its predecessor {a}")


def topological_sorts(circuit: Circuit, mode="default", cap: int = DEFAULT_SORT_CAP) -> list[tuple[int, ...]]:
    """``mode`` is ``"default"``, ``"all"`` or an explicit gate-id sequence."""
    if isinstance(mode, str):
        if mode == "default":
            return [default_sort(circuit)]
        if mode == "all":
            return all_sorts(circuit, cap)
        raise ValueError(f"unknown sort mode {mode!r}")
    sigma = tuple(int(x) for x in mode)
    validate_sigma(circuit, sigma)
    return [sigma]


# --- operators ---------------------------------------------------------------

def in_context_operator(gate: Gate, n: int) -> Matrix:
    """Full 2^n operator of ``gate``: swap-conjugated ``U (x) I``.

    The swaps are realised as an axis permutation, never as matrices.
    """
    if max(gate.wires) >= n:
        raise CircuitError(f"gate {gate.id} uses wire {max(gate.wires)} >= width {n}")
    d = gate.arity
    m = gate.matrix
    padded = kron(m, identity(m.domain, 2 ** (n - d))) if n > d else m
    extra = m.domain.entry_shape
    t = padded.data.reshape((2,) * (2 * n) + extra)
    order = list(gate.wires) + [w for w in range(n) if w not in gate.wires]
    t = np.moveaxis(t, list(range(2 * n)), order + [n + w for w in order])
    return Matrix(m.domain, t.reshape((2 ** n, 2 ** n) + extra))


def ordered_operator(oc: OrderedCircuit, max_width: int = MAX_OPERATOR_WIDTH) -> Matrix:
    """Product Q(s) ... Q(2) Q(1) of in-context operators along sigma."""
    n = oc.width
    if n > max_width:
        raise WidthCapError(f"width {n} exceeds operator cap {max_width}")
    op = identity(oc.domain, 2 ** n)
    for g in oc.ordered_gates():
        op = matmul(in_context_operator(g, n), op)
    return op


# --- JSON ----------------------------------------------------------------------

def _gate_from_json(obj: dict, index: int, domain: ScalarDomain) -> Gate:
    if not isinstance(obj, dict):
        raise CircuitError(f"gate #{index} is not an object")
    gid = obj.get("id", index)
    wires = obj.get("wires")
    if not isinstance(gid, int) or not isinstance(wires, list) or not all(isinstance(w, int) for w in wires):
        raise CircuitError(f"gate #{index}: needs integer id and integer wires")
    if any(w < 1 for w in wires):
        raise CircuitError(f"gate {gid}: wires are 1-based")
    if "builtin" in obj:
        name = str(obj["builtin"])
        m = builtin(name, domain)
    elif "matrix" in obj:
        name = obj.get("name")
        try:
            m = matrix_from_json(obj["matrix"], domain)
        except (ValueError, TypeError) as exc:
            raise CircuitError(f"gate {gid}: {exc}") from None
        if m.domain.rank > domain.rank:
            raise CircuitError(f"gate {gid} is {m.domain.value} in a {domain.value} circuit")
        m = as_domain(m, domain)
    else:
        raise CircuitError(f"gate {gid}: needs 'matrix' or 'builtin'")
    try:
        return Gate(gid, tuple(w - 1 for w in wires), m, name)
    except NonUnitaryGateError:
        raise
    except ValueError as exc:
        raise CircuitError(str(exc)) from None


def circuit_from_json(obj: dict) -> tuple[Circuit, tuple[int, ...] | None]:
    """Parse a circuit document; returns the circuit and its optional sigma."""
    if not isinstance(obj, dict):
        raise CircuitError("circuit document must be a JSON object")
    try:
        domain = ScalarDomain.parse(obj.get("domain", "complex"))
    except ValueError as exc:
        raise CircuitError(str(exc)) from None
    width = obj.get("width")
    gates = obj.get("gates", [])
    if not isinstance(width, int) or not isinstance(gates, list):
        raise CircuitError("circuit needs integer 'width' and a 'gates' list")
    circuit = Circuit(width, tuple(_gate_from_json(g, i, domain) for i, g in enumerate(gates)), domain)
    sigma = obj.get("sigma")
    if sigma is not None:
        if not isinstance(sigma, list) or not all(isinstance(x, int) for x in sigma):
            raise CircuitError("'sigma' must be a list of gate ids")
        sigma = tuple(sigma)
    return circuit, sigma


def circuit_to_json(circuit: Circuit, sigma: Iterable[int] | None = None,
                    annotations: dict[int, dict] | None = None) -> dict:
    gates = []
    for g in circuit.gates:
        entry = {"id": g.id, "wires": [w + 1 for w in g.wires]}
        if g.name:
            entry["name"] = g.name
        entry["matrix"] = matrix_to_json(g.matrix)
        if annotations and g.id in annotations:
            entry.update(annotations[g.id])
        gates.append(entry)
    doc = {"domain": circuit.domain.value, "width": circuit.width, "gates": gates}
    if sigma is not None:
        doc["sigma"] = list(sigma)
    return doc
