"""Evaluate the transcribed 32x32 matrix and audit it against the oracle."""

from povmforge.dilation import audit_dilation, build_oracle_dilation, transcribe_paper_matrix
from povmforge.management.base import PovmForgeCommand
from povmforge.povm import build_povm
from povmforge.serialisers import DilationSerialiser


class Command(PovmForgeCommand):
    help = (
        'Evaluate the published dilation matrix and report its unitarity, constrained-column '
        'residuals and suspect entries. Findings are advisory unless --strict is given.'
    )

    def add_command_arguments(self, parser):
        parser.add_argument('--strict', action='store_true', help='Fail when the transcription fails a check.')

    def run(self, params, tolerance, options):
        povm = build_povm(params)
        oracle = build_oracle_dilation(params, tolerance)
        transcription = transcribe_paper_matrix(params)
        report = audit_dilation(transcription, oracle, povm, samples=options['samples'], seed=options['seed'],
                                tolerance=tolerance, enforce=options['strict'])
        self.write_document(DilationSerialiser(transcription).data, report, options)
        self.check_report(report)
