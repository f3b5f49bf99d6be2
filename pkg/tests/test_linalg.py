import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypercircuit.linalg import (DensityOperator, DimensionError, Matrix, StateVector, adjoint,
                                 basis_state, identity, is_group_member, kron, matmul, matrix_from_json,
                                 matrix_to_json, max_abs_diff, partial_trace_first, random_group_element)
from hypercircuit.scalars import ScalarDomain
from hypercircuit.simulator import density
from hypercircuit.verify import kron_witness_violation

from .oracles import partial_trace_by_sum
from .oracles import qmatmul as oracle_qmatmul

DOMAINS = list(ScalarDomain)
Q = ScalarDomain.QUATERNION


def qdiag(*entries):
    n = len(entries)
    data = np.zeros((n, n, 4))
    for t, e in enumerate(entries):
        data[t, t] = e
    return Matrix(Q, data)


def rand_matrix(domain, rng, shape):
    return Matrix(domain, domain.random(rng, shape))


@pytest.mark.parametrize("domain", DOMAINS)
def test_identity_is_neutral(domain):
    m = rand_matrix(domain, np.random.default_rng(0), (4, 4))
    assert max_abs_diff(matmul(identity(domain, 4), m), m) == 0.0
    assert max_abs_diff(matmul(m, identity(domain, 4)), m) == 0.0


def test_quaternion_matmul_order():
    i_, j_, k_ = [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]
    neg_k = [0, 0, 0, -1]
    assert max_abs_diff(matmul(qdiag(i_, i_), qdiag(j_, j_)), qdiag(k_, k_)) == 0.0
    assert max_abs_diff(matmul(qdiag(j_, j_), qdiag(i_, i_)), qdiag(neg_k, neg_k)) == 0.0


def test_quaternion_matmul_matches_loop_oracle():
    rng = np.random.default_rng(1)
    a, b = rand_matrix(Q, rng, (3, 5)), rand_matrix(Q, rng, (5, 2))
    assert np.allclose(matmul(a, b).data, oracle_qmatmul(a.data, b.data), atol=1e-12)


def test_complex_matmul_obeys_re_im_block_rule():
    rng = np.random.default_rng(2)
    a = rand_matrix(ScalarDomain.COMPLEX, rng, (4, 4))
    b = rand_matrix(ScalarDomain.COMPLEX, rng, (4, 4))
    ab = matmul(a, b).data
    ra, ia, rb, ib = a.data.real, a.data.imag, b.data.real, b.data.imag
    assert np.allclose(ab.real, ra @ rb - ia @ ib, atol=1e-12)
    assert np.allclose(ab.imag, ra @ ib + ia @ rb, atol=1e-12)


def test_matmul_dimension_mismatch():
    with pytest.raises(DimensionError):
        matmul(identity("real", 2), identity("real", 4))
    with pytest.raises(TypeError):
        matmul(identity("real", 2), identity("complex", 2))


def test_adjoint_examples():
    m = Matrix("real", [[1, 2], [3, 4]])
    assert np.array_equal(adjoint(m).data, [[1, 3], [2, 4]])
    assert np.array_equal(adjoint(Matrix("complex", np.diag([1, 1j]))).data, np.diag([1, -1j]))
    assert np.array_equal(adjoint(Matrix(Q, [[[0, 0, 1, 0]]])).data, [[[0, 0, -1, 0]]])


@pytest.mark.parametrize("domain", DOMAINS)
def test_adjoint_involution_and_product_rule(domain):
    rng = np.random.default_rng(4)
    for _ in range(20):
        a, b = rand_matrix(domain, rng, (3, 4)), rand_matrix(domain, rng, (4, 2))
        assert max_abs_diff(adjoint(adjoint(a)), a) == 0.0
        lhs = adjoint(matmul(a, b))
        rhs = matmul(adjoint(b), adjoint(a))
        assert max_abs_diff(lhs, rhs) <= 1e-12


def test_kron_identity():
    for d in DOMAINS:
        assert max_abs_diff(kron(identity(d, 2), identity(d, 2)), identity(d, 4)) == 0.0


def test_kron_block_layout():
    a = Matrix("real", [[1, 2], [3, 4]])
    b = Matrix("real", [[0, 5], [6, 7]])
    assert np.array_equal(kron(a, b).data, np.kron(a.data, b.data))
    qa = Matrix(Q, [[[0, 1, 0, 0]]])
    qb = Matrix(Q, [[[0, 0, 1, 0]]])
    assert np.array_equal(kron(qa, qb).data, [[[0, 0, 0, 1]]])  # i * j = k
    assert np.array_equal(kron(qb, qa).data, [[[0, 0, 0, -1]]])


@pytest.mark.parametrize("domain", [ScalarDomain.REAL, ScalarDomain.COMPLEX])
def test_mixed_product_holds_in_commutative_domains(domain):
    rng = np.random.default_rng(5)
    for _ in range(50):
        a, b, c, d = (rand_matrix(domain, rng, (2, 2)) for _ in range(4))
        lhs = matmul(kron(a, b), kron(c, d))
        rhs = kron(matmul(a, c), matmul(b, d))
        assert max_abs_diff(lhs, rhs) <= 1e-12


def test_mixed_product_fails_for_quaternions():
    assert kron_witness_violation() >= 0.5
    assert kron_witness_violation() == pytest.approx(2.0)


def test_mixed_product_holds_when_right_factors_are_zero_one():
    rng = np.random.default_rng(6)
    a, b = rand_matrix(Q, rng, (2, 2)), rand_matrix(Q, rng, (2, 2))
    c = Matrix(Q, np.array([[0, 1], [1, 0]], dtype=complex))
    d = identity(Q, 2)
    assert max_abs_diff(matmul(kron(a, b), kron(c, d)), kron(matmul(a, c), matmul(b, d))) <= 1e-12


def test_partial_trace_examples():
    rho = density(basis_state("complex", 2, 0))
    out = partial_trace_first(rho)
    assert np.array_equal(out.data, [[1, 0], [0, 0]])
    bell = StateVector("complex", np.array([1, 0, 0, 1]) / np.sqrt(2))
    assert np.allclose(partial_trace_first(density(bell)).data, np.eye(2) / 2, atol=1e-15)


def test_partial_trace_matches_index_sum_oracle():
    rng = np.random.default_rng(8)
    v = StateVector("complex", ScalarDomain.COMPLEX.random(rng, (8,))).normalized()
    rho = density(v)
    out = partial_trace_first(rho)
    assert np.allclose(out.data, partial_trace_by_sum(np.array(rho.data), 3), atol=1e-14)
    assert abs(out.trace() - rho.trace()) <= 1e-12


@pytest.mark.parametrize("domain", DOMAINS)
def test_partial_trace_preserves_trace(domain):
    rng = np.random.default_rng(9)
    v = StateVector(domain, domain.random(rng, (16,))).normalized()
    rho = density(v)
    diff = np.asarray(partial_trace_first(rho).trace() - rho.trace())
    assert np.max(np.abs(diff)) <= 1e-12


def test_partial_trace_rejects_small_or_odd():
    with pytest.raises(DimensionError):
        partial_trace_first(DensityOperator("real", np.eye(2)))
    with pytest.raises(DimensionError):
        DensityOperator("real", np.eye(6))


def test_group_membership_examples():
    h = Matrix("real", np.array([[1, 1], [1, -1]]) / np.sqrt(2))
    assert is_group_member(h)
    assert not is_group_member(Matrix("complex", np.diag([1, 1 + 1j])))
    assert is_group_member(qdiag([1, 0, 0, 0], [0, 0, 1, 0]))
    assert not is_group_member(Matrix("real", np.ones((2, 3))))


def test_random_group_element_dim_one_real():
    for seed in range(10):
        m = random_group_element("real", 1, seed)
        assert abs(m.data[0, 0]) == pytest.approx(1.0)


@pytest.mark.parametrize("domain", DOMAINS)
@pytest.mark.parametrize("dim", [1, 2, 3, 8, 16])
def test_random_group_element_is_member(domain, dim):
    m = random_group_element(domain, dim, seed=dim)
    assert is_group_member(m, 1e-10)
    # both sides: Q Q^adj = I too
    assert max_abs_diff(matmul(m, adjoint(m)), identity(domain, dim)) <= 1e-10


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32), st.sampled_from(DOMAINS))
def test_random_group_element_deterministic_and_member(seed, domain):
    a = random_group_element(domain, 2, seed)
    b = random_group_element(domain, 2, seed)
    assert np.array_equal(a.data, b.data)
    assert is_group_member(a, 1e-10)


@pytest.mark.parametrize("domain", DOMAINS)
def test_matrix_json_round_trip(domain):
    m = rand_matrix(domain, np.random.default_rng(10), (2, 3))
    doc = json.loads(json.dumps(matrix_to_json(m)))
    assert doc["domain"] == domain.value and doc["rows"] == 2 and doc["cols"] == 3
    assert len(doc["entries"]) == 6
    assert np.array_equal(matrix_from_json(doc).data, m.data)


def test_matrix_json_nested_rows_and_errors():
    m = matrix_from_json([[1, 0], [0, [0, 1]]], "complex")
    assert np.array_equal(m.data, np.diag([1, 1j]))
    with pytest.raises(ValueError):
        matrix_from_json({"domain": "real", "rows": 2, "cols": 2, "entries": [1, 2, 3]})
    with pytest.raises(ValueError):
        matrix_from_json([[1, 0], [0]], "real")


def test_matrices_are_immutable():
    m = identity("complex", 2)
    with pytest.raises(ValueError):
        m.data[0, 0] = 5
    with pytest.raises(AttributeError):
        m.domain = ScalarDomain.REAL


def test_state_vector_checks():
    with pytest.raises(DimensionError):
        StateVector("real", [1, 0, 0])
    v = basis_state(Q, 2, 3)
    assert v.num_wires == 2 and v.is_unit()
    assert np.array_equal(v.data[3], [1, 0, 0, 0])
