"""Build the oracle dilation unitary and audit it."""

from povmforge.dilation import (
    audit_dilation,
    build_oracle_dilation,
    constrained_columns,
    formula_columns,
)
from povmforge.management.base import PovmForgeCommand
from povmforge.matkernel import max_deviation
from povmforge.povm import PARAMETER_TOLERANCE, build_povm
from povmforge.serialisers import DilationSerialiser


class Command(PovmForgeCommand):
    help = 'Build the 32x32 oracle dilation unitary and audit the dilation contract.'

    def run(self, params, tolerance, options):
        povm = build_povm(params)
        oracle = build_oracle_dilation(params, tolerance)
        report = audit_dilation(oracle, oracle, povm, samples=options['samples'], seed=options['seed'],
                                tolerance=tolerance)
        report.add('formula_columns',
                   max_deviation(constrained_columns(params, tolerance), formula_columns(params)),
                   PARAMETER_TOLERANCE)
        self.write_document(DilationSerialiser(oracle).data, report, options)
        self.check_report(report)
