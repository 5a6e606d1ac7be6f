#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Test cases for the povmforge subcommands."""

import json
import os
import tempfile
from io import StringIO
from unittest.mock import patch

from django.apps import apps
from django.test import SimpleTestCase, override_settings

from povmforge.apps import PovmForgeConfig
from povmforge.cli import FORMAT_TEXT, emit_report, run_command
from povmforge.reports import AuditReport

SET_A = ['--inv-sq', '0.25,0.25,0.25,0.25']
SET_B = ['--inv-sq', '0.5,0.25,0.125,0.125']


class CommandTestCase(SimpleTestCase):
    """Run subcommands with captured output."""

    def call(self, *argv):
        """Run a subcommand, returning (exit code, stdout, stderr)."""
        stdout, stderr = StringIO(), StringIO()
        with patch('sys.stderr', new_callable=StringIO) as argparse_stderr:
            code = run_command(list(argv), stdout=stdout, stderr=stderr)
        return code, stdout.getvalue(), stderr.getvalue() + argparse_stderr.getvalue()


class TestEmitReport(SimpleTestCase):
    """Test `emit_report`."""

    def test_empty_report(self):
        """Test the empty JSON report."""
        self.assertEqual(emit_report(AuditReport()), '{"checks":[],"notes":[]}')

    def test_text_report(self):
        """Test one line per check and one per note."""
        report = AuditReport()
        report.add('completeness', 0.0, 1e-12)
        report.add('reference_full_matrix', 0.5, 1e-10, advisory=True)
        report.note('tolerance=1e-10')
        self.assertEqual(emit_report(report, FORMAT_TEXT).splitlines(), [
            'pass completeness residual=0',
            'FAIL reference_full_matrix residual=0.5 (advisory)',
            '# tolerance=1e-10',
        ])


class TestUsage(CommandTestCase):
    """Test argument handling and exit codes."""

    def test_unknown_subcommand(self):
        """Test an unknown subcommand is a usage error."""
        code, _, stderr = self.call('teleport')
        self.assertEqual(code, 2)
        self.assertIn('usage: povmforge', stderr)

    def test_no_subcommand(self):
        """Test a bare invocation is a usage error."""
        self.assertEqual(self.call()[0], 2)

    def test_wrong_arity(self):
        """Test two reciprocal squares are rejected with exit code 2."""
        code, stdout, stderr = self.call('povm', '--inv-sq', '0.5,0.5')
        self.assertEqual(code, 2)
        self.assertEqual(stdout, '')
        self.assertIn('arity constraint violated', stderr)

    def test_normalization_violated(self):
        """Test the violated constraint is named."""
        code, _, stderr = self.call('povm', '--alpha', '1', '--beta', '1', '--gamma', '1', '--delta', '1')
        self.assertEqual(code, 2)
        self.assertIn('normalization constraint violated', stderr)

    def test_q_out_of_range(self):
        """Test an explicit q outside the allowed range."""
        code, _, stderr = self.call('povm', *SET_A, '--q', '0.4')
        self.assertEqual(code, 2)
        self.assertIn('q-range constraint violated', stderr)

    def test_every_failed_constraint_named(self):
        """Test a q failing both the range and positivity names both."""
        code, _, stderr = self.call('povm', *SET_A, '--q', '1.2')
        self.assertEqual(code, 2)
        self.assertIn('q-range, positivity constraints violated', stderr)

    def test_conflicting_parameter_flags(self):
        """Test --inv-sq cannot be combined with direct parameters."""
        self.assertEqual(self.call('povm', *SET_A, '--alpha', '2')[0], 2)

    def test_missing_parameters(self):
        """Test parameters are required."""
        self.assertEqual(self.call('povm', '--alpha', '2')[0], 2)

    def test_bad_flag_value(self):
        """Test argparse rejections exit with code 2."""
        self.assertEqual(self.call('simulate', *SET_A, '--shots', '0')[0], 2)
        self.assertEqual(self.call('povm', *SET_A, '--tolerance', '-1')[0], 2)


class TestPovmCommand(CommandTestCase):
    """Test the `povm` subcommand."""

    def test_set_a(self):
        """Test the JSON document for set A."""
        code, stdout, _ = self.call('povm', *SET_A)
        self.assertEqual(code, 0)
        document = json.loads(stdout)
        self.assertEqual(list(document), ['params', 'elements', 'eigenvalues', 'conclusive', 'report'])
        self.assertEqual(document['conclusive'], [1.0, 1.0, 1.0, 1.0])
        self.assertTrue(all(check['pass'] for check in document['report']['checks']))

    def test_direct_parameters(self):
        """Test the direct flags with the default q."""
        code, stdout, _ = self.call('povm', '--alpha', '2', '--beta', '-2', '--gamma', '2', '--delta', '2',
                                    '--q', 'auto')
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(stdout)['params']['beta'], -2.0)

    def test_text_format(self):
        """Test the text listing."""
        code, stdout, _ = self.call('povm', *SET_B, '--format', 'text')
        self.assertEqual(code, 0)
        self.assertTrue(stdout.startswith('P1 eigenvalues'))
        self.assertIn('pass completeness', stdout)

    def test_output_file(self):
        """Test --output writes the document to a file."""
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'povm.json')
            code, stdout, _ = self.call('povm', *SET_B, '--output', path)
            self.assertEqual(code, 0)
            self.assertEqual(stdout, '')
            with open(path) as handle:
                self.assertEqual(len(json.load(handle)['elements']), 5)


class TestDilationCommands(CommandTestCase):
    """Test the `dilate`, `paper-matrix` and `decompose` subcommands."""

    def test_dilate(self):
        """Test the oracle dilation passes its audit."""
        code, stdout, _ = self.call('dilate', *SET_B, '--samples', '20')
        self.assertEqual(code, 0)
        document = json.loads(stdout)
        self.assertEqual(document['source'], 'oracle')
        names = [check['name'] for check in document['report']['checks']]
        self.assertIn('dilation_contract', names)
        self.assertIn('formula_columns', names)

    def test_dilate_text(self):
        """Test the text report."""
        code, stdout, _ = self.call('dilate', *SET_A, '--format', 'text')
        self.assertEqual(code, 0)
        self.assertTrue(stdout.startswith('pass unitarity_defect'))

    def test_paper_matrix_is_advisory(self):
        """Test the transcription audit never fails without --strict."""
        code, stdout, _ = self.call('paper-matrix', *SET_B)
        self.assertEqual(code, 0)
        document = json.loads(stdout)
        self.assertEqual(document['source'], 'paper-matrix')
        self.assertTrue(all(check['advisory'] for check in document['report']['checks']))

    def test_decompose_generic(self):
        """Test the generic decomposition round trips."""
        code, stdout, _ = self.call('decompose', *SET_B)
        self.assertEqual(code, 0)
        document = json.loads(stdout)
        self.assertEqual(document['dim'], 32)
        self.assertLessEqual(len(document['ops']), 496)

    def test_decompose_paper(self):
        """Test the published factors are listed."""
        code, stdout, _ = self.call('decompose', *SET_B, '--source', 'paper', '--reversed')
        self.assertEqual(code, 0)
        document = json.loads(stdout)
        self.assertEqual(len(document['ops']), 43)
        self.assertIn('reversed (diagnostic)', document['report']['notes'][-1])


class TestSimulateCommand(CommandTestCase):
    """Test the `simulate` subcommand."""

    def test_set_b_basis_input(self):
        """Test |00> never yields the inconclusive outcome for set B."""
        code, stdout, stderr = self.call('simulate', *SET_B, '--input', '00', '--shots', '10000')
        self.assertEqual(code, 0)
        histogram = json.loads(stdout)
        self.assertEqual(histogram['shots'], 10000)
        self.assertEqual(histogram['seed'], 42)
        self.assertEqual(histogram['counts'][4], 0)
        self.assertEqual(sum(histogram['counts']), 10000)
        self.assertIn('seed=42', stderr)

    def test_seed_flag(self):
        """Test the seed flag overrides the configured seed and is reproducible."""
        first = self.call('simulate', *SET_B, '--input', 'psi2', '--shots', '1000', '--seed', '9')[1]
        second = self.call('simulate', *SET_B, '--input', 'psi2', '--shots', '1000', '--seed', '9')[1]
        self.assertEqual(first, second)
        self.assertEqual(json.loads(first)['seed'], 9)

    def test_circuit_needs_circuit_route(self):
        """Test --circuit is refused on the matrix route."""
        code, _, stderr = self.call('simulate', *SET_A, '--circuit', 'circuit.json')
        self.assertEqual(code, 2)
        self.assertIn('--route circuit', stderr)

    def test_missing_circuit_file(self):
        """Test an unreadable circuit file is a usage error."""
        code, _, _ = self.call('simulate', *SET_A, '--route', 'circuit', '--circuit', '/nonexistent/circuit.json')
        self.assertEqual(code, 2)

    @override_settings(POVMFORGE_SAMPLING_ENABLED=False)
    def test_sampling_disabled(self):
        """Test sampling can be switched off in the settings."""
        original = apps.get_app_config('povmforge')
        config = PovmForgeConfig(app_name=original.name, app_module=original.module)
        with patch('povmforge.management.base.apps.get_app_config', autospec=True, return_value=config):
            code, _, stderr = self.call('simulate', *SET_A)
        self.assertEqual(code, 2)
        self.assertIn('sampling is disabled', stderr)


class TestPipelineCommands(CommandTestCase):
    """Test the `synth` and `verify` subcommands."""

    def test_synth_qasm(self):
        """Test the text export and the equivalence check."""
        code, stdout, stderr = self.call('synth', *SET_A, '--format', 'qasm', '--check')
        self.assertEqual(code, 0)
        lines = stdout.splitlines()
        self.assertEqual(lines[0], 'qubits 5')
        self.assertTrue(all(line.startswith(('u(', 'cx ')) for line in lines[1:]))
        self.assertIn('equivalence deviation=', stderr)

    def test_synth_json_reloads_for_simulation(self):
        """Test a written circuit drives the circuit route."""
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'circuit.json')
            self.assertEqual(self.call('synth', *SET_A, '--output', path)[0], 0)
            code, stdout, _ = self.call('simulate', *SET_A, '--route', 'circuit', '--circuit', path,
                                        '--shots', '2000', '--input', 'psi3')
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(stdout)['counts'], [0, 0, 2000, 0, 0])

    def test_verify_set_a(self):
        """Test the whole pipeline passes for set A."""
        code, stdout, _ = self.call('verify', *SET_A, '--shots', '20000', '--samples', '20')
        self.assertEqual(code, 0)
        report = json.loads(stdout)
        names = [check['name'] for check in report['checks']]
        for name in ('povm.completeness', 'dilation.dilation_contract', 'decompose.round_trip',
                     'synth.equivalence', 'sampling.chi_square_00', 'collapse.11'):
            self.assertIn(name, names)
        self.assertTrue(report['notes'][0].startswith('tolerance='))
        self.assertTrue(all(check['pass'] for check in report['checks'] if not check['advisory']))
