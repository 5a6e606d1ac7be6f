#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Test cases for the complex matrix kernel."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from povmforge import matkernel
from povmforge.dilation import constrained_columns
from povmforge.exceptions import DimensionError, NonHermitianError, NotOrthonormalError
from povmforge.povm import build_povm

from .base import PovmTestCase

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

entries = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False, allow_infinity=False)
seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


def _naive_product(a, b):
    result = np.zeros((a.shape[0], b.shape[1]), dtype=complex)
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            for k in range(a.shape[1]):
                result[i, j] += a[i, k] * b[k, j]
    return result


class TestMultiply(PovmTestCase):
    """Test `multiply` and `adjoint`."""

    def test_identity_and_pauli(self):
        """Test I4 * A = A and X * X = I2."""
        a = matkernel.random_unitary(4, self.rng)
        self.assertMatrixClose(matkernel.multiply(matkernel.identity(4), a), a, 0)
        self.assertMatrixClose(matkernel.multiply(PAULI_X, PAULI_X), np.eye(2), 0)

    def test_matches_naive_product(self):
        """Test the product against a triple loop."""
        a = self.rng.normal(size=(4, 4)) + 1j * self.rng.normal(size=(4, 4))
        b = self.rng.normal(size=(4, 4)) + 1j * self.rng.normal(size=(4, 4))
        self.assertMatrixClose(matkernel.multiply(a, b), _naive_product(a, b), 1e-13)

    def test_dimension_mismatch(self):
        """Test incompatible shapes are rejected."""
        with self.assertRaises(DimensionError):
            matkernel.multiply(np.eye(2), np.eye(3))

    def test_non_finite_entries_rejected(self):
        """Test NaN entries never reach the arithmetic."""
        with self.assertRaises(DimensionError):
            matkernel.as_matrix([[np.nan, 0], [0, 1]])

    def test_adjoint(self):
        """Test the conjugate transpose."""
        a = self.rng.normal(size=(3, 3)) + 1j * self.rng.normal(size=(3, 3))
        self.assertMatrixClose(matkernel.adjoint(matkernel.adjoint(a)), a, 0)
        self.assertMatrixClose(matkernel.adjoint(np.diag([1j, 1j])), np.diag([-1j, -1j]), 0)
        self.assertMatrixClose(matkernel.multiply(HADAMARD, matkernel.adjoint(HADAMARD)), np.eye(2), 1e-14)

    @settings(max_examples=50, deadline=None)
    @given(
        real=arrays(np.float64, (3, 4, 4), elements=entries),
        imaginary=arrays(np.float64, (3, 4, 4), elements=entries),
    )
    def test_associativity(self, real, imaginary):
        """Test (AB)C = A(BC) on random triples."""
        a, b, c = real + 1j * imaginary
        left = matkernel.multiply(matkernel.multiply(a, b), c)
        right = matkernel.multiply(a, matkernel.multiply(b, c))
        self.assertMatrixClose(left, right, 1e-12)


class TestEigHermitian(PovmTestCase):
    """Test `eig_hermitian`."""

    def test_known_spectra(self):
        """Test the identity and Pauli X spectra."""
        eigenvalues, _ = matkernel.eig_hermitian(matkernel.identity(4))
        np.testing.assert_allclose(eigenvalues, [1, 1, 1, 1])
        eigenvalues, vectors = matkernel.eig_hermitian(PAULI_X)
        np.testing.assert_allclose(eigenvalues, [-1, 1], atol=1e-15)
        self.assertUnitary(vectors)

    def test_set_b_inconclusive_element(self):
        """Test P5 of set B has eigenvalues (0, 0.5, 0.75, 0.75)."""
        eigenvalues, _ = matkernel.eig_hermitian(build_povm(self.set_b).elements[4])
        np.testing.assert_allclose(eigenvalues, [0, 0.5, 0.75, 0.75], atol=1e-12)

    def test_non_hermitian_rejected(self):
        """Test a non-Hermitian input is rejected."""
        with self.assertRaises(NonHermitianError):
            matkernel.eig_hermitian(np.array([[0, 1], [0, 0]]))

    @settings(max_examples=40, deadline=None)
    @given(seed=seeds, dim=st.integers(min_value=1, max_value=32))
    def test_reconstruction(self, seed, dim):
        """Test V diag(lambda) V^dagger reproduces the input."""
        h = matkernel.random_hermitian(dim, np.random.default_rng(seed))
        eigenvalues, vectors = matkernel.eig_hermitian(h)
        self.assertTrue(np.all(np.diff(eigenvalues) >= 0))
        self.assertUnitary(vectors)
        rebuilt = (vectors * eigenvalues) @ vectors.conj().T
        self.assertLessEqual(matkernel.frobenius_distance(rebuilt, h), 1e-9)


class TestCompleteColumns(PovmTestCase):
    """Test `complete_columns`."""

    def test_canonical_columns_complete_to_identity(self):
        """Test the first four canonical columns complete to I32."""
        completed = matkernel.complete_columns(np.eye(32)[:, :4])
        self.assertMatrixClose(completed, np.eye(32), 0)

    def test_constrained_columns_of_set_a(self):
        """Test the dilation columns of set A complete to a unitary."""
        columns = constrained_columns(self.set_a)
        completed = matkernel.complete_columns(columns)
        self.assertLess(matkernel.unitarity_defect(completed), 1e-12)
        self.assertMatrixClose(completed[:, :4], columns, 0)

    def test_repeated_column_rejected(self):
        """Test two equal columns are not orthonormal."""
        column = np.eye(8)[:, [2]]
        with self.assertRaises(NotOrthonormalError):
            matkernel.complete_columns(np.hstack([column, column]))

    @settings(max_examples=25, deadline=None)
    @given(seed=seeds, dim=st.integers(min_value=2, max_value=32), data=st.data())
    def test_random_columns(self, seed, dim, data):
        """Test any orthonormal set completes to a unitary."""
        k = data.draw(st.integers(min_value=1, max_value=dim))
        columns = matkernel.random_unitary(dim, np.random.default_rng(seed))[:, :k]
        completed = matkernel.complete_columns(columns)
        self.assertLessEqual(matkernel.unitarity_defect(completed), 1e-10)


class TestPhaseAlignment(PovmTestCase):
    """Test `phase_aligned_deviation`."""

    def test_global_phase_removed(self):
        """Test a pure global phase is recovered."""
        u = matkernel.random_unitary(8, self.rng)
        deviation, phase = matkernel.phase_aligned_deviation(np.exp(0.7j) * u, u)
        self.assertLess(deviation, 1e-13)
        self.assertAlmostEqual(phase, 0.7, places=12)
