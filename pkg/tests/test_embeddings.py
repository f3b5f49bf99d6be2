import numpy as np
import pytest

from hypercircuit.circuit import Circuit, Gate, OrderedCircuit, builtin
from hypercircuit.embeddings import (H, HHAT, SHAT, compile_circuit, default_tensor, embed_matrix, embed_vector,
                                     embedded_identity_check, homomorphism_deviations, tensor_by_name, top_columns,
                                     verify_circularity, verify_homomorphism, verify_statistics)
from hypercircuit.linalg import (Matrix, StateVector, basis_state, identity, kron, max_abs_diff,
                                 random_group_element)
from hypercircuit.scalars import ScalarDomain
from hypercircuit.verify import (build_corpus, check_accounting, corrupted, random_complex_circuit,
                                 random_quaternion_circuit, random_sigma, random_state)

Q = ScalarDomain.QUATERNION
C = ScalarDomain.COMPLEX
R = ScalarDomain.REAL
TENSORS = [H, HHAT, SHAT]


def source_circuit(t, rng, n=3, s=6):
    if t.source is C:
        return random_complex_circuit(rng, n, s)
    return random_quaternion_circuit(rng, n, s)


def test_tensor_shapes():
    assert (H.factor, H.top_wires) == (2, 1)
    assert (HHAT.factor, HHAT.top_wires) == (2, 1)
    assert (SHAT.factor, SHAT.top_wires) == (4, 2)
    assert tensor_by_name("SHAT") is SHAT
    assert default_tensor("quaternion") is HHAT and default_tensor("complex") is H
    with pytest.raises(ValueError):
        tensor_by_name("x")


@pytest.mark.parametrize("t", TENSORS)
def test_identity_maps_to_identity(t):
    for dim in (1, 2, 4):
        assert embedded_identity_check(t, dim) == 0.0


def test_h_examples():
    got = embed_matrix(H, Matrix(C, np.diag([1, 1j])))
    expected = [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0]]
    assert got.domain is R and np.array_equal(got.data, expected)
    hd = builtin("H", C)
    assert max_abs_diff(embed_matrix(H, hd), kron(identity(R, 2), builtin("H"))) == 0.0


def test_hhat_example():
    m = Matrix(Q, np.array([[[1, 0, 0, 0], [0, 0, 0, 0]], [[0, 0, 0, 0], [0, 0, 1, 0]]], dtype=float))
    got = embed_matrix(HHAT, m)
    expected = [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0]]
    assert got.domain is C and np.array_equal(got.data, np.array(expected, dtype=complex))


def test_hhat_of_complex_matrix_is_block_diagonal():
    u = random_group_element(C, 2, seed=1)
    got = embed_matrix(HHAT, Matrix(Q, Q.coerce(u.data)))
    expected = np.block([[u.data, np.zeros((2, 2))], [np.zeros((2, 2)), np.conj(u.data)]])
    assert np.allclose(got.data, expected, atol=0)


def test_shat_factors_through_hhat_then_h():
    # the two routes agree up to a fixed permutation of the top-two-wire basis
    perm = (3, 1, 0, 2)
    p = np.zeros((4, 4))
    for r, c in enumerate(perm):
        p[r, c] = 1.0
    for seed in range(5):
        q = random_group_element(Q, 2, seed)
        pp = kron(Matrix(R, p), identity(R, 2))
        two_step = embed_matrix(H, embed_matrix(HHAT, q))
        assert max_abs_diff(embed_matrix(SHAT, q), pp @ two_step @ Matrix(R, pp.data.T)) <= 1e-15


def test_vector_columns_on_basis_states():
    for b in range(4):
        v = basis_state(C, 2, b)
        assert np.array_equal(embed_vector(H, 0, v).data, basis_state(R, 3, b).data)
        assert np.array_equal(embed_vector(H, 1, v).data, basis_state(R, 3, 4 + b).data)
        vq = basis_state(Q, 2, b)
        assert np.array_equal(embed_vector(SHAT, 3, vq).data, basis_state(R, 4, 12 + b).data)


def test_h_column_zero_of_complex_state():
    v = StateVector(C, np.array([1, 1j]) / np.sqrt(2))
    assert np.allclose(embed_vector(H, 0, v).data, np.array([1, 0, 0, -1]) / np.sqrt(2), atol=1e-16)


def test_hhat_column_zero_of_complex_state():
    v = random_state(C, 2, np.random.default_rng(2))
    got = embed_vector(HHAT, 0, StateVector(Q, Q.coerce(v.data)))
    assert np.allclose(got.data, np.concatenate([v.data, np.zeros(4)]), atol=0)


@pytest.mark.parametrize("t", TENSORS)
def test_column_images_are_orthonormal(t):
    v = random_state(t.source, 2, np.random.default_rng(3))
    cols = [embed_vector(t, c, v).data for c in range(t.factor)]
    gram = np.array([[np.vdot(a, b) for b in cols] for a in cols])
    assert np.allclose(gram, np.eye(t.factor), atol=1e-14)
    with pytest.raises(ValueError):
        embed_vector(t, t.factor, v)


@pytest.mark.parametrize("t", TENSORS)
def test_homomorphism(t):
    dev = homomorphism_deviations(t, 30, 4, seed=5)
    assert set(dev) == {"product", "adjoint", "group"}
    assert max(dev.values()) <= 1e-11


def test_corrupted_tensor_breaks_homomorphism():
    assert verify_homomorphism(corrupted(H), 5, 2, seed=0) > 0.1


def test_embedding_refuses_higher_domain():
    q = random_group_element(Q, 2, seed=0)
    with pytest.raises(TypeError):
        embed_matrix(H, q)
    c = random_quaternion_circuit(np.random.default_rng(0), 2, 3)
    with pytest.raises(TypeError):
        compile_circuit(OrderedCircuit.default(c), H)


def test_compile_real_gate_skips_top_wire():
    c = Circuit(2, (Gate(0, (1,), builtin("H")),), C)
    cc = compile_circuit(OrderedCircuit.default(c), H)
    g = cc.target.circuit.gates[0]
    assert cc.width == 3 and cc.top_wires == (0,)
    assert g.wires == (2,) and np.array_equal(g.matrix.data, builtin("H").data)
    assert cc.provenance[0] == {"source_gate": 0, "embedding": "h", "top_wire_used": False}


def test_compile_complex_gate_uses_top_wire():
    c = Circuit(2, (Gate(0, (0,), builtin("S")),), C)
    cc = compile_circuit(OrderedCircuit.default(c), H)
    g = cc.target.circuit.gates[0]
    assert g.wires == (0, 1)
    assert np.array_equal(g.matrix.data, embed_matrix(H, builtin("S")).data)
    assert cc.provenance[0]["top_wire_used"]


def test_compile_quaternion_gate_to_shat():
    c = Circuit(1, (Gate(0, (0,), builtin("PHASE_J")),), Q)
    cc = compile_circuit(OrderedCircuit.default(c), SHAT)
    g = cc.target.circuit.gates[0]
    assert cc.width == 3 and g.wires == (0, 1, 2) and g.domain is R
    doc = cc.to_json()
    assert doc["top_wires"] == [1, 2] and doc["embedding"] == "shat" and doc["source_width"] == 1
    assert doc["gates"][0]["wires"] == [1, 2, 3]


def test_no_optimize_routes_every_gate_through_top():
    c = Circuit(2, (Gate(0, (1,), builtin("H")), Gate(1, (0, 1), builtin("CNOT"))), C)
    cc = compile_circuit(OrderedCircuit.default(c), H, optimize=False)
    assert all(0 in g.wires for g in cc.target.circuit.gates)
    assert verify_circularity(OrderedCircuit.default(c), cc) == 0.0


def test_compile_preserves_sigma_and_ids():
    rng = np.random.default_rng(6)
    c = random_quaternion_circuit(rng, 3, 8)
    oc = OrderedCircuit(c, random_sigma(c, rng))
    cc = compile_circuit(oc, HHAT)
    assert cc.target.sigma == oc.sigma
    assert [g.id for g in cc.target.ordered_gates()] == list(oc.sigma)


@pytest.mark.parametrize("t", TENSORS)
def test_circularity_and_statistics(t):
    rng = np.random.default_rng(7)
    for _ in range(4):
        c = source_circuit(t, rng)
        oc = OrderedCircuit.default(c)
        cc = compile_circuit(oc, t)
        assert verify_circularity(oc, cc) <= 1e-10
        v = random_state(t.source, c.width, rng)
        checks = [verify_statistics(oc, cc, v, mode) for mode in ("zero", "one", "mixed")]
        assert max(ch.worst for ch in checks) <= 1e-10


def test_top_columns():
    assert top_columns(SHAT, "one") == [3]
    assert top_columns(H, "mixed") == [0, 1]
    with pytest.raises(ValueError):
        top_columns(H, "half")


def test_accounting_on_corpus():
    res = check_accounting(build_corpus(8, count=5), TENSORS)
    assert res.passed, res.detail
