"""Compile the dilation into a CNOT + single-qubit circuit."""

from django.core.management.base import CommandError

from povmforge.cli import FORMAT_JSON, FORMAT_QASM
from povmforge.dilation import SOURCE_ORACLE, SOURCE_PAPER_PRODUCT
from povmforge.management.base import PovmForgeCommand
from povmforge.matkernel import phase_aligned_deviation
from povmforge.serialisers import CircuitSerialiser, dumps
from povmforge.synth import circuit_to_qasm, circuit_unitary, compile_dilation, dilation_target, gate_counts


class Command(PovmForgeCommand):
    help = 'Compile the dilation unitary into CNOT and single-qubit gates.'
    formats = (FORMAT_JSON, FORMAT_QASM)

    def add_command_arguments(self, parser):
        parser.add_argument('--source', choices=(SOURCE_ORACLE, SOURCE_PAPER_PRODUCT), default=SOURCE_ORACLE)
        parser.add_argument('--check', action='store_true',
                            help='Compare the circuit unitary with the source matrix up to global phase.')

    def run(self, params, tolerance, options):
        circuit = compile_dilation(params, options['source'])
        if options['format'] == FORMAT_JSON:
            self.write(dumps(CircuitSerialiser(circuit).data), options)
        else:
            self.write(circuit_to_qasm(circuit).rstrip('\n'), options)

        counts = gate_counts(circuit)
        self.stderr.write(
            'gates total={total} single={single} cnot={cnot} max_controls={max_controls} '
            'tolerance={tolerance:.3g}'.format(tolerance=tolerance, **counts)
        )
        if options['check']:
            phase_tolerance = self.config.phase_tolerance
            target = dilation_target(params, options['source'])
            deviation, _ = phase_aligned_deviation(circuit_unitary(circuit), target)
            self.stderr.write('equivalence deviation={:.12g} phase_tolerance={:.3g}'.format(
                deviation, phase_tolerance
            ))
            if deviation > phase_tolerance:
                raise CommandError('compiled circuit deviates from the source unitary', returncode=1)
