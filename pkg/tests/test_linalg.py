import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qreset.errors import DimensionError
from qreset.linalg import (
    apply_operator,
    dagger,
    density_matrix,
    is_density_matrix,
    is_hermitian,
    is_unitary,
    matmul,
    partial_trace,
    su2_exponential,
    tensor,
)
from qreset.quantum import hadamard, named_state, pauli, q_basis

from oracles import kron_loops, partial_trace_loops, random_density, random_unit_vector

SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)

seeds = st.integers(min_value=0, max_value=2**32 - 1)
angles = st.floats(min_value=-20, max_value=20, allow_nan=False)


class TestTensor:
    def test_identity(self):
        np.testing.assert_array_equal(tensor(np.eye(2), np.eye(2)), np.eye(4))

    def test_basis_bookkeeping(self):
        v = tensor([1, 0], [0, 1])
        np.testing.assert_array_equal(v, np.eye(4)[1])

    def test_psi_plus_pair_is_m3(self):
        # (|01>+|10>)(|01>+|10>)/2 = (|0101>+|0110>+|1001>+|1010>)/2
        expected = np.zeros(16)
        expected[[0b0101, 0b0110, 0b1001, 0b1010]] = 0.5
        got = tensor(named_state("PsiPlus"), named_state("PsiPlus"))
        np.testing.assert_allclose(got, expected, atol=1e-15)
        np.testing.assert_allclose(got, q_basis()[2], atol=1e-15)

    def test_needs_operand(self):
        with pytest.raises(ValueError):
            tensor()

    @settings(max_examples=50, deadline=None)
    @given(seeds)
    def test_associative(self, seed):
        rng = np.random.default_rng(seed)
        a, b, c = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(3))
        np.testing.assert_allclose(tensor(tensor(a, b), c), tensor(a, tensor(b, c)), atol=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(seeds, st.integers(1, 3), st.integers(1, 3))
    def test_matches_loops(self, seed, ka, kb):
        rng = np.random.default_rng(seed)
        a = rng.standard_normal((2**ka, 2 ** (3 - ka + 1))) + 1j * rng.standard_normal((2**ka, 2 ** (3 - ka + 1)))
        b = rng.standard_normal((2**kb, 2)) + 1j * rng.standard_normal((2**kb, 2))
        np.testing.assert_allclose(tensor(a, b), kron_loops(a, b), atol=1e-12)


class TestMatmul:
    def test_identity(self):
        m = np.arange(16).reshape(4, 4) * (1 + 1j)
        np.testing.assert_array_equal(matmul(np.eye(4), m), m)

    def test_swap_involution(self):
        np.testing.assert_array_equal(matmul(SWAP, SWAP), np.eye(4))

    def test_unitary_product_keeps_column_norms(self):
        m = matmul(pauli("X"), hadamard())
        np.testing.assert_allclose(np.linalg.norm(m, axis=0), [1, 1], atol=1e-15)

    def test_mismatch(self):
        with pytest.raises(DimensionError):
            matmul(np.eye(2), np.eye(4))


class TestPartialTrace:
    def test_product_state(self):
        rng = np.random.default_rng(3)
        rho, sigma = random_density(1, rng), random_density(2, rng) * 0.7
        got = partial_trace(tensor(rho, sigma), [2, 2, 2], [0])
        np.testing.assert_allclose(got, rho * np.trace(sigma), atol=1e-14)

    def test_singlet_marginal(self):
        rho = density_matrix(named_state("PsiMinus"))
        np.testing.assert_allclose(partial_trace(rho, [2, 2], [0]), np.eye(2) / 2, atol=1e-15)
        np.testing.assert_allclose(partial_trace(rho, [2, 2], [1]), np.eye(2) / 2, atol=1e-15)

    def test_three_qubit_keep_outer(self):
        rho = random_density(3, np.random.default_rng(11))
        np.testing.assert_allclose(partial_trace(rho, [2, 2, 2], [0, 2]), partial_trace_loops(rho, 3, [0, 2]), atol=1e-12)

    def test_keep_everything_and_nothing(self):
        rho = random_density(2, np.random.default_rng(1))
        np.testing.assert_allclose(partial_trace(rho, [2, 2], [0, 1]), rho)
        np.testing.assert_allclose(partial_trace(rho, [2, 2], []), [[1.0]], atol=1e-14)

    def test_index_out_of_range(self):
        with pytest.raises(IndexError):
            partial_trace(np.eye(4) / 4, [2, 2], [2])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            partial_trace(np.eye(4) / 4, [2, 2, 2], [0])

    @settings(max_examples=40, deadline=None)
    @given(seeds, st.integers(1, 5), st.data())
    def test_matches_loops_and_keeps_trace(self, seed, n, data):
        keep = data.draw(st.sets(st.integers(0, n - 1)))
        rho = random_density(n, np.random.default_rng(seed))
        got = partial_trace(rho, [2] * n, keep)
        np.testing.assert_allclose(got, partial_trace_loops(rho, n, keep), atol=1e-12)
        assert abs(np.trace(got) - 1) <= 1e-12


class TestApplyOperator:
    def test_matches_full_kron(self):
        rng = np.random.default_rng(5)
        psi = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        op = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        # op on qubits (0, 2): conjugate by a swap of qubits 1 and 2
        swap12 = tensor(np.eye(2), SWAP)
        expected = swap12 @ tensor(op, np.eye(2)) @ swap12 @ psi
        np.testing.assert_allclose(apply_operator(psi, op, [0, 2], 3), expected, atol=1e-12)

    def test_reversed_targets(self):
        rng = np.random.default_rng(6)
        psi = rng.standard_normal(4) + 0j
        op = rng.standard_normal((4, 4)) + 0j
        np.testing.assert_allclose(apply_operator(psi, op, [1, 0], 2), SWAP @ op @ SWAP @ psi, atol=1e-12)

    def test_bad_targets(self):
        with pytest.raises(IndexError):
            apply_operator(np.ones(4), np.eye(4), [0, 0], 2)
        with pytest.raises(DimensionError):
            apply_operator(np.ones(4), np.eye(2), [0, 1], 2)

    def test_does_not_mutate(self):
        psi = np.array([1, 0, 0, 0], dtype=complex)
        apply_operator(psi, pauli("X"), [0], 2)
        np.testing.assert_array_equal(psi, [1, 0, 0, 0])


class TestSu2Exponential:
    def test_zero_duration(self):
        np.testing.assert_allclose(su2_exponential([0, 0, 1], 0.0), np.eye(2), atol=1e-15)

    def test_z_axis_is_diagonal_phase(self):
        t = 1.234
        expected = np.diag([np.exp(-1j * t / 2), np.exp(1j * t / 2)])
        np.testing.assert_allclose(su2_exponential([0, 0, 1], t), expected, atol=1e-15)

    def test_y_axis_pi(self):
        np.testing.assert_allclose(su2_exponential([0, 1, 0], math.pi), [[0, -1], [1, 0]], atol=1e-15)

    def test_non_unit_axis(self):
        with pytest.raises(ValueError):
            su2_exponential([0, 0, 2], 1.0)

    def test_matches_eigendecomposition(self):
        # independent route: exp(-i t H) via eigh of H = n.sigma/2
        rng = np.random.default_rng(9)
        n = random_unit_vector(rng)
        h = (n[0] * pauli("X") + n[1] * pauli("Y") + n[2] * pauli("Z")) / 2
        w, v = np.linalg.eigh(h)
        t = 2.7
        expected = v @ np.diag(np.exp(-1j * t * w)) @ v.conj().T
        np.testing.assert_allclose(su2_exponential(n, t), expected, atol=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(seeds, angles, angles)
    def test_group_law_and_unitarity(self, seed, t, s):
        n = random_unit_vector(np.random.default_rng(seed))
        ut, us = su2_exponential(n, t), su2_exponential(n, s)
        np.testing.assert_allclose(ut @ us, su2_exponential(n, t + s), atol=1e-10)
        assert is_unitary(ut)


class TestPredicates:
    def test_unitary(self):
        assert is_unitary(SWAP)
        assert not is_unitary(np.diag([1, 0.5]))
        assert not is_unitary(np.ones((2, 3)))

    def test_hermitian(self):
        assert is_hermitian(pauli("Y"))
        assert not is_hermitian(np.array([[0, 1], [0, 0]]))

    def test_density(self):
        assert is_density_matrix(np.eye(2) / 2)
        assert not is_density_matrix(np.diag([1.5, -0.5]))
        assert not is_density_matrix(np.eye(2))

    def test_dagger(self):
        m = np.array([[1, 2j], [3, 4]])
        np.testing.assert_array_equal(dagger(m), [[1, 3], [-2j, 4]])
