"""Dense matrices and state vectors over real, complex or quaternion scalars.

Everything here is a thin immutable wrapper around a numpy array plus a
:class:`~hypercircuit.scalars.ScalarDomain` tag.  Products always keep the
left operand on the left, which is what makes the quaternion case work.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scalars import SCALAR_TOL, ScalarDomain, scalar_from_json, scalar_to_json


class DimensionError(ValueError):
    pass


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


def _is_pow2(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


@dataclass(frozen=True, eq=False)
class Matrix:
    domain: ScalarDomain
    data: np.ndarray

    def __post_init__(self):
        domain = ScalarDomain.parse(self.domain)
        data = domain.coerce(self.data)
        if data.ndim != 2 + len(domain.entry_shape):
            raise DimensionError(f"matrix data has shape {data.shape}")
        if data.shape[0] < 1 or data.shape[1] < 1:
            raise DimensionError("matrix dimensions must be positive")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "data", _freeze(data))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __matmul__(self, other):
        if isinstance(other, StateVector):
            return apply_matrix(self, other)
        return matmul(self, other)

    def __repr__(self):
        return f"Matrix({self.domain.value}, {self.rows}x{self.cols})"


@dataclass(frozen=True, eq=False)
class StateVector:
    domain: ScalarDomain
    data: np.ndarray

    def __post_init__(self):
        domain = ScalarDomain.parse(self.domain)
        data = domain.coerce(self.data)
        if data.ndim != 1 + len(domain.entry_shape):
            raise DimensionError(f"vector data has shape {data.shape}")
        if not _is_pow2(data.shape[0]):
            raise DimensionError(f"vector length {data.shape[0]} is not a power of two")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "data", _freeze(data))

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @property
    def num_wires(self) -> int:
        return self.dim.bit_length() - 1

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.domain.abs2(self.data))))

    def is_unit(self, tol: float = 1e-10) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def normalized(self) -> "StateVector":
        return StateVector(self.domain, self.data / self.norm())

    def as_column(self) -> Matrix:
        return Matrix(self.domain, self.data[:, None])

    def __repr__(self):
        return f"StateVector({self.domain.value}, dim={self.dim})"


class DensityOperator(Matrix):
    """Square matrix of dimension 2^m."""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_square or not _is_pow2(self.rows):
            raise DimensionError(f"density operator must be 2^m square, got {self.shape}")

    @classmethod
    def from_matrix(cls, m: Matrix) -> "DensityOperator":
        return cls(m.domain, m.data)

    def trace(self):
        idx = np.arange(self.rows)
        return self.data[idx, idx].sum(axis=0)

    def diagonal(self) -> np.ndarray:
        """Real parts of the diagonal entries."""
        idx = np.arange(self.rows)
        return self.domain.real_part(self.data[idx, idx])


# --- constructors ---------------------------------------------------------

def identity(domain, n: int) -> Matrix:
    domain = ScalarDomain.parse(domain)
    return Matrix(domain, domain.eye(n))


def basis_state(domain, num_wires: int, index: int = 0) -> StateVector:
    domain = ScalarDomain.parse(domain)
    data = domain.zeros((2 ** num_wires,))
    data[index] = domain.one()
    return StateVector(domain, data)


def as_domain(m: Matrix, domain) -> Matrix:
    """Lift ``m`` into a wider domain (real -> complex -> quaternion)."""
    domain = ScalarDomain.parse(domain)
    if domain.rank < m.domain.rank:
        raise ValueError(f"cannot narrow {m.domain.value} to {domain.value}")
    if domain is m.domain:
        return m
    return Matrix(domain, m.data.astype(complex) if domain is ScalarDomain.QUATERNION else m.data)


# --- core operations -----------------------------------------------------

def _check_same_domain(a, b):
    if a.domain is not b.domain:
        raise TypeError(f"domain mismatch: {a.domain.value} vs {b.domain.value}")


def matmul(a: Matrix, b: Matrix) -> Matrix:
    _check_same_domain(a, b)
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return Matrix(a.domain, a.domain.matmul(a.data, b.data))


def apply_matrix(m: Matrix, v: StateVector) -> StateVector:
    _check_same_domain(m, v)
    if m.cols != v.dim:
        raise DimensionError(f"cannot apply {m.shape} matrix to dim {v.dim}")
    out = m.domain.matmul(m.data, v.data[:, None])[:, 0]
    return StateVector(m.domain, out)


def adjoint(m: Matrix) -> Matrix:
    """Transpose plus domain conjugation of every entry."""
    return Matrix(m.domain, m.domain.conj(np.swapaxes(m.data, 0, 1)))


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product with entries ``a[i, j] * b[k, l]`` in that order."""
    _check_same_domain(a, b)
    d = a.domain
    m, n = a.shape
    p, q = b.shape
    if d is ScalarDomain.QUATERNION:
        out = d.mul(a.data[:, None, :, None, :], b.data[None, :, None, :, :])
        return Matrix(d, out.reshape(m * p, n * q, 4))
    return Matrix(d, np.kron(a.data, b.data))


def add(a: Matrix, b: Matrix) -> Matrix:
    _check_same_domain(a, b)
    if a.shape != b.shape:
        raise DimensionError(f"cannot add {a.shape} and {b.shape}")
    return Matrix(a.domain, a.data + b.data)


def max_abs_diff(a, b) -> float:
    """Max-norm distance between two matrices or vectors of one domain."""
    _check_same_domain(a, b)
    if a.data.shape != b.data.shape:
        raise DimensionError(f"shape mismatch {a.data.shape} vs {b.data.shape}")
    return a.domain.entry_abs_max(a.data - b.data)


def partial_trace_first(rho: DensityOperator) -> DensityOperator:
    """Trace out the most significant wire: [[A, B], [C, D]] -> A + D."""
    n = rho.rows
    if n < 4 or not _is_pow2(n) or not rho.is_square:
        raise DimensionError(f"partial trace needs a 2^m square operator with m >= 2, got {rho.shape}")
    h = n // 2
    return DensityOperator(rho.domain, rho.data[:h, :h] + rho.data[h:, h:])


def is_group_member(m: Matrix, tol: float = 1e-10) -> bool:
    """True iff adjoint(m) @ m is the identity within ``tol`` (max-norm).

    Covers the orthogonal, unitary and symplectic groups at once since the
    adjoint is domain-aware.
    """
    if not m.is_square:
        return False
    gram = matmul(adjoint(m), m)
    return max_abs_diff(gram, identity(m.domain, m.rows)) <= tol


def random_group_element(domain, dim: int, seed, max_retries: int = 10) -> Matrix:
    """Gram-Schmidt orthonormalised Gaussian matrix, deterministic per seed.

    Projection coefficients ``<q, v> = sum(conj(q) * v)`` are applied by
    right scalar multiplication ``v - q c``, which keeps the result inside
    the group for quaternions too.
    """
    domain = ScalarDomain.parse(domain)
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = np.random.default_rng(seed)
    for _ in range(max_retries):
        cols = domain.random(rng, (dim, dim))
        q = _gram_schmidt(domain, cols)
        if q is not None:
            return Matrix(domain, q)
    raise np.linalg.LinAlgError(f"singular draws after {max_retries} retries")


def _gram_schmidt(domain: ScalarDomain, a: np.ndarray):
    dim = a.shape[0]
    q = np.array(a, copy=True)
    for k in range(dim):
        v = q[:, k:k + 1]
        basis = q[:, :k]
        if k:
            # coefficients = basis^adj v, then v - basis @ coefficients (right scalars)
            adj = domain.conj(np.swapaxes(basis, 0, 1))
            for _ in range(2):  # second pass restores orthogonality lost to rounding
                v = v - domain.matmul(basis, domain.matmul(adj, v))
        norm = float(np.sqrt(np.sum(domain.abs2(v))))
        if norm < 1e-8:
            return None
        q[:, k:k + 1] = v / norm
    return q


# --- JSON ----------------------------------------------------------------

def matrix_to_json(m: Matrix) -> dict:
    entries = [scalar_to_json(m.domain, m.data[i, j])
               for i in range(m.rows) for j in range(m.cols)]
    return {"domain": m.domain.value, "rows": m.rows, "cols": m.cols, "entries": entries}


def matrix_from_json(obj: dict, default_domain=None) -> Matrix:
    if isinstance(obj, list):
        # bare nested rows, e.g. [[1, 0], [0, 1]]
        if default_domain is None:
            raise ValueError("nested-list matrix needs a domain")
        domain = ScalarDomain.parse(default_domain)
        rows = len(obj)
        if rows == 0 or not all(isinstance(r, list) and len(r) == len(obj[0]) for r in obj):
            raise ValueError("ragged matrix rows")
        flat = [x for r in obj for x in r]
        obj = {"domain": domain.value, "rows": rows, "cols": len(obj[0]), "entries": flat}
    if not isinstance(obj, dict):
        raise ValueError("matrix must be a JSON object")
    domain = ScalarDomain.parse(obj.get("domain", default_domain))
    rows, cols, entries = obj.get("rows"), obj.get("cols"), obj.get("entries")
    if not isinstance(rows, int) or not isinstance(cols, int) or not isinstance(entries, list):
        raise ValueError("matrix needs integer rows/cols and an entries list")
    if len(entries) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
    data = domain.zeros((rows, cols))
    for t, e in enumerate(entries):
        data[t // cols, t % cols] = scalar_from_json(domain, e)
    return Matrix(domain, data)


def hermitian_defect(m: Matrix) -> float:
    return max_abs_diff(m, adjoint(m))


__all__ = [
    "DimensionError", "Matrix", "StateVector", "DensityOperator", "identity",
    "basis_state", "as_domain", "matmul", "apply_matrix", "adjoint", "kron", "add",
    "max_abs_diff", "partial_trace_first", "is_group_member",
    "random_group_element", "matrix_to_json", "matrix_from_json",
    "hermitian_defect", "SCALAR_TOL",
]
