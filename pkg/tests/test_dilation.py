#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Test cases for the dilation unitaries and their audit."""

from dataclasses import replace

import numpy as np

from povmforge import matkernel
from povmforge.dilation import (
    CONSTRAINED_INDICES,
    DIMENSION,
    SOURCE_PAPER_MATRIX,
    audit_dilation,
    build_oracle_dilation,
    constrained_columns,
    dilate_state,
    embed_input,
    entry_findings,
    formula_columns,
    global_index,
    kraus_operators,
    paper_matrix_tags,
    sqrt_povm_element,
    transcribe_paper_matrix,
)
from povmforge.exceptions import IndefiniteError, ParamsMismatchError
from povmforge.povm import build_povm

from .base import PovmTestCase
from .test_povm import random_params


class TestSqrtPovmElement(PovmTestCase):
    """Test `sqrt_povm_element`."""

    def test_zero(self):
        """Test the square root of zero."""
        self.assertMatrixClose(sqrt_povm_element(np.zeros((4, 4))), np.zeros((4, 4)), 0)

    def test_projector(self):
        """Test a projector is its own square root."""
        p1 = build_povm(self.set_a).elements[0]
        self.assertMatrixClose(sqrt_povm_element(p1), p1, 1e-12)

    def test_set_b_inconclusive_element(self):
        """Test sqrt(P5) = diag(u, v, w, p) for set B."""
        root = sqrt_povm_element(build_povm(self.set_b).elements[4])
        expected = np.diag([0, np.sqrt(0.5), np.sqrt(0.75), np.sqrt(0.75)])
        self.assertMatrixClose(root, expected, 1e-12)
        params = self.set_b
        self.assertMatrixClose(np.diag([params.u, params.v, params.w, params.p]), expected, 1e-12)

    def test_indefinite(self):
        """Test a clearly negative eigenvalue is rejected."""
        with self.assertRaises(IndefiniteError):
            sqrt_povm_element(np.diag([1.0, -0.5]))


class TestConstrainedColumns(PovmTestCase):
    """Test the four columns fixed by the POVM."""

    def test_unit_norm_and_orthonormal(self):
        """Test the columns are orthonormal for both sets."""
        for params in (self.set_a, self.set_b):
            columns = constrained_columns(params)
            self.assertMatrixClose(columns.conj().T @ columns, np.eye(4), 1e-12)

    def test_set_a_first_column(self):
        """Test amplitude q/alpha^2 at |00>|000> and zero at |00>|100>."""
        column = constrained_columns(self.set_a)[:, 0]
        self.assertAlmostEqual(column[global_index(0, 0b000)].real, 0.25, places=12)
        self.assertAlmostEqual(abs(column[global_index(0, 0b100)]), 0.0, places=12)

    def test_formula_cross_check(self):
        """Test the square-root route matches the printed coefficient formulas."""
        parameter_sets = [self.set_a, self.set_b] + [random_params(self.rng) for _ in range(20)]
        for params in parameter_sets:
            self.assertMatrixClose(constrained_columns(params), formula_columns(params), 1e-12)


class TestOracleDilation(PovmTestCase):
    """Test `build_oracle_dilation`."""

    def test_unitary(self):
        """Test the oracle is unitary with unit-norm orthogonal columns."""
        for params in (self.set_a, self.set_b):
            oracle = build_oracle_dilation(params)
            self.assertLess(oracle.unitarity_defect, 1e-12)
            np.testing.assert_allclose(np.linalg.norm(oracle.matrix, axis=0), np.ones(DIMENSION), atol=1e-12)

    def test_constrained_positions(self):
        """Test the constrained columns sit at the |j>|000> positions."""
        oracle = build_oracle_dilation(self.set_b)
        self.assertMatrixClose(oracle.matrix[:, list(CONSTRAINED_INDICES)], constrained_columns(self.set_b), 0)

    def test_dilation_contract(self):
        """Test U(|psi>|000>) = sum_k sqrt(P_k)|psi>|k> on random inputs."""
        oracle = build_oracle_dilation(self.set_b)
        kraus = kraus_operators(build_povm(self.set_b))
        for _ in range(100):
            psi = matkernel.random_state(4, self.rng)
            residual = np.linalg.norm(oracle.matrix @ embed_input(psi) - dilate_state(kraus, psi))
            self.assertLess(residual, 1e-10)

    def test_set_a_never_reaches_inconclusive_ancilla(self):
        """Test the |100> ancilla block stays empty when P5 = 0."""
        oracle = build_oracle_dilation(self.set_a)
        for _ in range(10):
            output = oracle.matrix @ embed_input(matkernel.random_state(4, self.rng))
            self.assertLess(np.max(np.abs(output[0b100::8])), 1e-12)

    def test_action_independent_of_completion(self):
        """Test another completion of the free columns acts the same on ancilla |000> inputs."""
        oracle = build_oracle_dilation(self.set_b).matrix
        free = [index for index in range(DIMENSION) if index not in CONSTRAINED_INDICES]
        other = oracle.copy()
        other[:, free] = oracle[:, free] @ matkernel.random_unitary(len(free), self.rng)
        self.assertUnitary(other)
        psi = matkernel.random_state(4, self.rng)
        self.assertMatrixClose(other @ embed_input(psi), oracle @ embed_input(psi), 1e-12)


class TestPaperMatrix(PovmTestCase):
    """Test the transcribed matrix."""

    def test_top_left_entry(self):
        """Test entry (1,1) is q/alpha^2."""
        for params in (self.set_a, self.set_b):
            transcription = transcribe_paper_matrix(params)
            self.assertAlmostEqual(transcription.matrix[0, 0].real, params.q / params.alpha ** 2, places=14)
            self.assertEqual(transcription.tags[0][0], 'q/alpha**2')

    def test_identity_blocks(self):
        """Test rows and columns with ancilla 101, 110, 111 are identity."""
        matrix = transcribe_paper_matrix(self.set_b).matrix
        for system in range(4):
            for ancilla in (0b101, 0b110, 0b111):
                index = global_index(system, ancilla)
                expected = np.zeros(DIMENSION)
                expected[index] = 1
                self.assertMatrixClose(matrix[index, :], expected, 0)
                self.assertMatrixClose(matrix[:, index], expected, 0)

    def test_written_negative_sign(self):
        """Test tags like 2*q/(-alpha) keep the sign as printed."""
        tags = paper_matrix_tags()
        self.assertEqual(tags[4][4], '2*q/(-alpha)')
        matrix = transcribe_paper_matrix(self.set_b).matrix
        self.assertAlmostEqual(matrix[4, 4].real, -2 * self.set_b.q / self.set_b.alpha, places=14)


class TestAuditDilation(PovmTestCase):
    """Test `audit_dilation`."""

    def test_self_audit(self):
        """Test auditing the oracle against itself passes every check."""
        oracle = build_oracle_dilation(self.set_b)
        report = audit_dilation(oracle, oracle, build_povm(self.set_b))
        self.assertTrue(report.passed)
        for check in report.checks:
            self.assertTrue(check.passed, check.name)
            self.assertLess(check.residual, 1e-10)

    def test_corrupted_entry(self):
        """Test a single corrupted entry fails the unitarity check."""
        oracle = build_oracle_dilation(self.set_a)
        matrix = oracle.matrix.copy()
        matrix[3, 7] += 0.1
        report = audit_dilation(replace(oracle, matrix=matrix), oracle, build_povm(self.set_a))
        self.assertFalse(report.passed)
        self.assertIn('unitarity_defect', report.failures())

    def test_paper_matrix_report_is_complete(self):
        """Test the transcription audit lists every check as advisory."""
        for params in (self.set_a, self.set_b):
            transcription = transcribe_paper_matrix(params)
            report = audit_dilation(transcription, build_oracle_dilation(params), build_povm(params))
            names = [check.name for check in report.checks]
            self.assertEqual(names, [
                'unitarity_defect',
                'constrained_columns',
                'dilation_contract',
                'reference_constrained_columns',
                'reference_full_matrix',
                'suspect_entries',
            ])
            self.assertTrue(all(check.advisory for check in report.checks))
            self.assertTrue(all(np.isfinite(check.residual) for check in report.checks))
            self.assertEqual(transcription.source, SOURCE_PAPER_MATRIX)

    def test_enforced_paper_matrix(self):
        """Test `enforce` turns the candidate checks into gates."""
        transcription = transcribe_paper_matrix(self.set_b)
        report = audit_dilation(transcription, build_oracle_dilation(self.set_b), build_povm(self.set_b),
                                enforce=True)
        advisory = {check.name for check in report.checks if check.advisory}
        self.assertEqual(advisory, {'reference_full_matrix', 'suspect_entries'})

    def test_params_mismatch(self):
        """Test candidate and reference must share parameters."""
        with self.assertRaises(ParamsMismatchError):
            audit_dilation(build_oracle_dilation(self.set_a), build_oracle_dilation(self.set_b),
                           build_povm(self.set_a))


class TestEntryFindings(PovmTestCase):
    """Test `entry_findings`."""

    def test_corrupted_entry_is_named(self):
        """Test a corrupted constrained entry is reported with its 1-based position and tag."""
        oracle = build_oracle_dilation(self.set_b)
        matrix = oracle.matrix.copy()
        matrix[0, 0] += 0.1
        candidate = replace(oracle, matrix=matrix, tags=paper_matrix_tags())
        findings = entry_findings(candidate, oracle)
        self.assertTrue(findings[0].startswith("entry (1,1) tag 'q/alpha**2'"))
        self.assertTrue(any(finding.startswith('row 1 norm') for finding in findings))
        self.assertTrue(any(finding.startswith('column 1 norm') for finding in findings))

    def test_clean_candidate(self):
        """Test an exact candidate has no findings."""
        oracle = build_oracle_dilation(self.set_b)
        self.assertEqual(entry_findings(replace(oracle, tags=paper_matrix_tags()), oracle), [])
