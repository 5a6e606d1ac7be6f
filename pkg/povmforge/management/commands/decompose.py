"""Two-level factorisation of the dilation unitary."""

from povmforge.decompose import (
    PAPER_BLOCK_TOLERANCE,
    block_defects,
    build_paper_product_dilation,
    paper_factorization,
    reconstruct,
    two_level_decompose,
)
from povmforge.dilation import DIMENSION, audit_dilation, build_oracle_dilation
from povmforge.management.base import PovmForgeCommand
from povmforge.matkernel import max_deviation
from povmforge.povm import build_povm
from povmforge.reports import AuditReport
from povmforge.serialisers import TwoLevelSeqSerialiser

SOURCE_GENERIC = 'generic'
SOURCE_PAPER = 'paper'
ROUND_TRIP_TOLERANCE = 1e-9


class Command(PovmForgeCommand):
    help = (
        'Factor the dilation into two-level operations. --source generic decomposes the oracle '
        'unitary; --source paper evaluates the published factors and audits their product.'
    )

    def add_command_arguments(self, parser):
        parser.add_argument('--source', choices=(SOURCE_GENERIC, SOURCE_PAPER), default=SOURCE_GENERIC)
        parser.add_argument('--reversed', action='store_true',
                            help='Multiply the published factors in reverse order (diagnostic).')
        parser.add_argument('--strict', action='store_true', help='Fail when the published product fails a check.')

    def run(self, params, tolerance, options):
        oracle = build_oracle_dilation(params, tolerance)
        if options['source'] == SOURCE_GENERIC:
            seq = two_level_decompose(oracle.matrix, tolerance)
            report = AuditReport()
            report.add('round_trip', max_deviation(reconstruct(seq), oracle.matrix), ROUND_TRIP_TOLERANCE)
            report.add_flag('op_count_bound', len(seq) <= DIMENSION * (DIMENSION - 1) // 2)
            report.note('source=generic ops={} tolerance={:.3g}'.format(len(seq), tolerance))
        else:
            seq = paper_factorization(params)
            report = AuditReport()
            report.add('max_block_defect', max(block_defects(seq)), PAPER_BLOCK_TOLERANCE)
            product = build_paper_product_dilation(params, reverse=options['reversed'])
            report.extend(audit_dilation(product, oracle, build_povm(params), samples=options['samples'],
                                         seed=options['seed'], tolerance=tolerance, enforce=options['strict']))
            report.note('source=paper ops={} order={}'.format(
                len(seq), 'reversed (diagnostic)' if options['reversed'] else seq.convention
            ))
        self.write_document(TwoLevelSeqSerialiser(seq).data, report, options)
        self.check_report(report)
