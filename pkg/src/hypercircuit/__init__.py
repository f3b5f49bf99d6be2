"""Circuit simulation over real, complex and quaternion amplitudes, with
compilers embedding complex circuits into real ones and quaternionic
circuits into complex or real ones."""

from .scalars import (ComplexPair, Quaternion, ScalarDomain, cowe_identities, qconj, qmodulus,
                      qmul, split, split_mul_rule)
from .linalg import (DensityOperator, Matrix, StateVector, adjoint, basis_state, identity,
                     is_group_member, kron, matmul, partial_trace_first, random_group_element)
from .circuit import (Circuit, Gate, OrderedCircuit, builtin, in_context_operator,
                      ordered_operator, topological_sorts)
from .simulator import density, marginal, measure_all, run
from .embeddings import (H, HHAT, SHAT, compile_circuit, embed_matrix, embed_vector,
                         verify_circularity, verify_homomorphism, verify_statistics)

__version__ = "0.1.0"
