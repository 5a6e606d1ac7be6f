"""Run the whole pipeline and print one audit report."""

from povmforge.cli import emit_report
from povmforge.management.base import PovmForgeCommand, positive_int
from povmforge.verification import verify


class Command(PovmForgeCommand):
    help = (
        'Audit every stage: POVM, dilation, two-level round trip, compiled circuit, sampling and '
        'collapse. Published-matrix checks are advisory unless --strict is given.'
    )

    def add_command_arguments(self, parser):
        parser.add_argument('--shots', type=positive_int, default=None)
        parser.add_argument('--strict', action='store_true')

    def run(self, params, tolerance, options):
        report = verify(
            params,
            tolerance=tolerance,
            phase_tolerance=self.config.phase_tolerance,
            samples=options['samples'],
            seed=options['seed'],
            shots=options['shots'] or self.config.shots,
            chunk_size=self.config.chunk_size,
            sampling=self.config.sampling_enabled,
            strict=options['strict'],
        )
        self.write(emit_report(report, options['format']), options)
        self.check_report(report)
