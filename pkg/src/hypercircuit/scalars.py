"""Quaternion arithmetic and the real/complex/quaternion scalar domains.

Quaternion-valued arrays carry their four real components on a trailing
axis of length 4, ordered (a0, a1, a2, a3) for a0 + a1 i + a2 j + a3 k.
Real and complex arrays are plain numpy arrays.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

SCALAR_TOL = 1e-12
COMPILED_TOL = 1e-10


@dataclass(frozen=True)
class Quaternion:
    a0: float = 0.0
    a1: float = 0.0
    a2: float = 0.0
    a3: float = 0.0

    @classmethod
    def from_array(cls, arr) -> "Quaternion":
        a = np.asarray(arr, dtype=float)
        return cls(float(a[0]), float(a[1]), float(a[2]), float(a[3]))

    @classmethod
    def from_complex(cls, z: complex) -> "Quaternion":
        z = complex(z)
        return cls(z.real, z.imag, 0.0, 0.0)

    def as_array(self) -> np.ndarray:
        return np.array([self.a0, self.a1, self.a2, self.a3])

    def __iter__(self):
        return iter((self.a0, self.a1, self.a2, self.a3))

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(*(x + y for x, y in zip(self, _as_quaternion(other))))

    __radd__ = __add__

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(*(x - y for x, y in zip(self, _as_quaternion(other))))

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.a0, -self.a1, -self.a2, -self.a3)

    def __mul__(self, other) -> "Quaternion":
        return qmul(self, _as_quaternion(other))

    def __rmul__(self, other) -> "Quaternion":
        return qmul(_as_quaternion(other), self)

    def conj(self) -> "Quaternion":
        return qconj(self)

    def __abs__(self) -> float:
        return qmodulus(self)

    def isclose(self, other, tol: float = SCALAR_TOL) -> bool:
        o = _as_quaternion(other)
        return all(abs(x - y) <= tol for x, y in zip(self, o))


def _as_quaternion(x) -> Quaternion:
    if isinstance(x, Quaternion):
        return x
    if isinstance(x, (int, float, complex, np.number)):
        return Quaternion.from_complex(complex(x))
    return Quaternion.from_array(x)


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


@dataclass(frozen=True)
class ComplexPair:
    """A quaternion written as ``co + we * j`` with complex ``co`` and ``we``."""

    co: complex
    we: complex

    def join(self) -> Quaternion:
        return Quaternion(self.co.real, self.co.imag, self.we.real, self.we.imag)


def qmul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product ``a * b`` (operand order matters)."""
    return Quaternion.from_array(hamilton(a.as_array(), b.as_array()))


def qconj(a: Quaternion) -> Quaternion:
    return Quaternion(a.a0, -a.a1, -a.a2, -a.a3)


def qmodulus(a: Quaternion) -> float:
    return math.hypot(a.a0, a.a1, a.a2, a.a3)


def split(a: Quaternion) -> ComplexPair:
    return ComplexPair(complex(a.a0, a.a1), complex(a.a2, a.a3))


def split_mul_rule(a: Quaternion, b: Quaternion) -> ComplexPair:
    """Complex and weird parts of ``a * b`` computed from those of ``a`` and ``b``."""
    pa, pb = split(a), split(b)
    co = pa.co * pb.co - pa.we * pb.we.conjugate()
    we = pa.co * pb.we + pa.we * pb.co.conjugate()
    return ComplexPair(co, we)


def cowe_identities(a: Quaternion) -> tuple[complex, complex]:
    """Return ``(co(conj a), we(conj a))``; equals ``(conj(co a), -we a)``."""
    p = split(qconj(a))
    return p.co, p.we


# --- array-level quaternion kernels -------------------------------------

def hamilton(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise Hamilton product of broadcastable (..., 4) arrays."""
    a0, a1, a2, a3 = np.moveaxis(np.asarray(a, dtype=float), -1, 0)
    b0, b1, b2, b3 = np.moveaxis(np.asarray(b, dtype=float), -1, 0)
    return np.stack([
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ], axis=-1)


def qmatmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product of quaternion arrays, left factor always on the left.

    ``a`` has shape (m, n, 4) and ``b`` (n, p, 4); returns (m, p, 4).
    """
    a0, a1, a2, a3 = (a[..., t] for t in range(4))
    b0, b1, b2, b3 = (b[..., t] for t in range(4))
    return np.stack([
        a0 @ b0 - a1 @ b1 - a2 @ b2 - a3 @ b3,
        a0 @ b1 + a1 @ b0 + a2 @ b3 - a3 @ b2,
        a0 @ b2 - a1 @ b3 + a2 @ b0 + a3 @ b1,
        a0 @ b3 + a1 @ b2 - a2 @ b1 + a3 @ b0,
    ], axis=-1)


def qconj_array(a: np.ndarray) -> np.ndarray:
    return a * np.array([1.0, -1.0, -1.0, -1.0])


class ScalarDomain(enum.Enum):
    """Tag-dispatched scalar operations shared by matrices and vectors."""

    REAL = "real"
    COMPLEX = "complex"
    QUATERNION = "quaternion"

    @classmethod
    def parse(cls, value: "str | ScalarDomain") -> "ScalarDomain":
        if isinstance(value, ScalarDomain):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown scalar domain {value!r}") from None

    @property
    def entry_shape(self) -> tuple[int, ...]:
        return (4,) if self is ScalarDomain.QUATERNION else ()

    @property
    def dtype(self):
        return complex if self is ScalarDomain.COMPLEX else float

    @property
    def rank(self) -> int:
        return {"real": 0, "complex": 1, "quaternion": 2}[self.value]

    def zeros(self, shape: tuple[int, ...]) -> np.ndarray:
        return np.zeros(tuple(shape) + self.entry_shape, dtype=self.dtype)

    def zero(self):
        return self.zeros(())

    def one(self):
        z = self.zeros(())
        if self is ScalarDomain.QUATERNION:
            z[0] = 1.0
            return z
        return z + 1

    def eye(self, n: int) -> np.ndarray:
        if self is ScalarDomain.QUATERNION:
            out = self.zeros((n, n))
            out[..., 0] = np.eye(n)
            return out
        return np.eye(n, dtype=self.dtype)

    def coerce(self, data) -> np.ndarray:
        """Convert raw numeric data into this domain's array layout."""
        arr = np.asarray(data)
        if self is ScalarDomain.QUATERNION:
            if arr.dtype.kind == "c":
                return np.stack([arr.real, arr.imag, np.zeros_like(arr.real),
                                 np.zeros_like(arr.real)], axis=-1)
            arr = arr.astype(float)
            if arr.ndim == 0 or arr.shape[-1] != 4:
                raise ValueError("quaternion data needs a trailing axis of length 4")
            return arr
        if self is ScalarDomain.REAL:
            if arr.dtype.kind == "c":
                if np.any(arr.imag != 0):
                    raise ValueError("complex entries in real domain")
                arr = arr.real
            return arr.astype(float)
        return arr.astype(complex)

    def mul(self, a, b):
        """Elementwise product ``a * b`` with broadcasting."""
        if self is ScalarDomain.QUATERNION:
            return hamilton(a, b)
        return a * b

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self is ScalarDomain.QUATERNION:
            return qmatmul(a, b)
        return a @ b

    def conj(self, a):
        if self is ScalarDomain.QUATERNION:
            return qconj_array(a)
        if self is ScalarDomain.COMPLEX:
            return np.conj(a)
        return a

    def abs2(self, a) -> np.ndarray:
        """Squared modulus, elementwise."""
        if self is ScalarDomain.QUATERNION:
            return np.sum(np.square(a), axis=-1)
        return np.abs(a) ** 2

    def modulus(self, a) -> np.ndarray:
        return np.sqrt(self.abs2(a))

    def entry_abs_max(self, a) -> float:
        """Max modulus over all entries (0.0 for empty arrays)."""
        if np.size(a) == 0:
            return 0.0
        return float(np.max(self.modulus(a)))

    def is_real_valued(self, a, tol: float = SCALAR_TOL) -> bool:
        if self is ScalarDomain.REAL:
            return True
        if self is ScalarDomain.COMPLEX:
            return bool(np.all(np.abs(np.imag(a)) <= tol))
        return bool(np.all(np.abs(a[..., 1:]) <= tol))

    def real_part(self, a) -> np.ndarray:
        if self is ScalarDomain.QUATERNION:
            return np.array(a[..., 0], dtype=float)
        return np.array(np.real(a), dtype=float)

    def random(self, rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
        """Independent standard-normal component per scalar slot."""
        if self is ScalarDomain.COMPLEX:
            return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        return rng.standard_normal(tuple(shape) + self.entry_shape)


# --- JSON scalars --------------------------------------------------------

def scalar_to_json(domain: ScalarDomain, value) -> Any:
    """Real -> number, complex -> [re, im], quaternion -> [a0, a1, a2, a3]."""
    # "+ 0.0" folds -0.0 into 0.0 so output is stable
    if domain is ScalarDomain.REAL:
        return float(value) + 0.0
    if domain is ScalarDomain.COMPLEX:
        z = complex(value)
        return [z.real + 0.0, z.imag + 0.0]
    return [float(x) + 0.0 for x in np.asarray(value).reshape(4)]


def scalar_from_json(domain: ScalarDomain, value) -> Any:
    if domain is ScalarDomain.REAL:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ValueError(f"expected a real number, got {value!r}")
        return float(value)
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        value = [value, 0.0]
    if not isinstance(value, list) or not all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in value):
        raise ValueError(f"malformed scalar {value!r}")
    if domain is ScalarDomain.COMPLEX:
        if len(value) != 2:
            raise ValueError(f"complex scalar needs [re, im], got {value!r}")
        return complex(value[0], value[1])
    if len(value) == 2:
        value = [value[0], value[1], 0.0, 0.0]
    if len(value) != 4:
        raise ValueError(f"quaternion scalar needs 4 components, got {value!r}")
    return np.array(value, dtype=float)
