"""Independent reference computations used as test oracles.

Nothing here imports the package's arithmetic: quaternions are multiplied
through their 4x4 real left-multiplication matrices and circuits are
simulated by explicit loops over basis indices.
"""
import itertools

import numpy as np


def left_matrix(q):
    """Real 4x4 matrix L with L @ b == a * b for quaternion a = q."""
    a0, a1, a2, a3 = q
    return np.array([
        [a0, -a1, -a2, -a3],
        [a1, a0, -a3, a2],
        [a2, a3, a0, -a1],
        [a3, -a2, a1, a0],
    ], dtype=float)


def qprod(a, b):
    return left_matrix(a) @ np.asarray(b, dtype=float)


def qmatmul(a, b):
    """Triple-loop quaternion matrix product on (m, n, 4) x (n, p, 4)."""
    m, n, _ = a.shape
    p = b.shape[1]
    out = np.zeros((m, p, 4))
    for i in range(m):
        for k in range(p):
            for j in range(n):
                out[i, k] += qprod(a[i, j], b[j, k])
    return out


def to_quaternion_array(data, domain):
    arr = np.asarray(data)
    if domain == "quaternion":
        return np.asarray(arr, dtype=float)
    z = arr.astype(complex)
    return np.stack([z.real, z.imag, np.zeros(z.shape), np.zeros(z.shape)], axis=-1)


def bits(index, n):
    return tuple((index >> (n - 1 - w)) & 1 for w in range(n))


def unbits(b):
    out = 0
    for x in b:
        out = 2 * out + x
    return out


def brute_apply(amps, n, wires, gate):
    """Apply a quaternion gate (2^d, 2^d, 4) to wires of an (2^n, 4) array by
    enumerating basis indices; wire 0 is the most significant bit."""
    new = np.zeros_like(amps)
    d = len(wires)
    for i in range(2 ** n):
        bi = bits(i, n)
        row = unbits([bi[w] for w in wires])
        for col_bits in itertools.product((0, 1), repeat=d):
            bk = list(bi)
            for w, v in zip(wires, col_bits):
                bk[w] = v
            k = unbits(bk)
            new[i] += qprod(gate[row, unbits(col_bits)], amps[k])
    return new


def brute_run(n, ordered_gates, amps):
    """``ordered_gates`` is a list of (wires, quaternion matrix array)."""
    amps = np.array(amps, dtype=float)
    for wires, gate in ordered_gates:
        amps = brute_apply(amps, n, wires, gate)
    return amps


def brute_probs(amps):
    return np.array([float(a @ a) for a in amps])


def brute_in_context(n, wires, gate):
    """Full operator by columns: image of each basis vector."""
    dim = 2 ** n
    out = np.zeros((dim, dim, 4))
    for k in range(dim):
        e = np.zeros((dim, 4))
        e[k, 0] = 1.0
        out[:, k] = brute_apply(e, n, wires, gate)
    return out


def partial_trace_by_sum(rho, m):
    """sum_t (<t| x I) rho (|t> x I) for a 2^m complex density matrix."""
    half = 2 ** (m - 1)
    out = np.zeros((half, half), dtype=rho.dtype)
    for t in (0, 1):
        proj = np.zeros((half, 2 * half))
        for r in range(half):
            proj[r, t * half + r] = 1.0
        out += proj @ rho @ proj.T
    return out
