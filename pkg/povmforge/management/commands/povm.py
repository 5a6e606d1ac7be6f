"""Build the five POVM elements and report their eigenvalues."""

from povmforge.cli import FORMAT_JSON, FORMAT_TEXT, emit_report
from povmforge.management.base import PovmForgeCommand
from povmforge.matkernel import eig_hermitian
from povmforge.povm import build_povm, build_states, conclusive_probability, povm_checks
from povmforge.serialisers import AuditReportSerialiser, PovmSetSerialiser, dumps, round_significant


class Command(PovmForgeCommand):
    help = 'Build P1..P5, check them and report their eigenvalues.'

    def run(self, params, tolerance, options):
        povm = build_povm(params)
        report = povm_checks(povm, tolerance)
        report.note('tolerance={:.3g}'.format(tolerance))
        eigenvalues = [eig_hermitian(element, tolerance)[0] for element in povm.elements]
        conclusive = [conclusive_probability(povm, state, tolerance) for state in build_states(params)]

        if options['format'] == FORMAT_JSON:
            document = PovmSetSerialiser(povm).data
            document['eigenvalues'] = [[round_significant(x) for x in values] for values in eigenvalues]
            document['conclusive'] = [round_significant(p) for p in conclusive]
            document['report'] = AuditReportSerialiser(report).data
            self.write(dumps(document), options)
        else:
            lines = []
            for index, values in enumerate(eigenvalues, start=1):
                lines.append('P{} eigenvalues {}'.format(index, ' '.join('{:.12g}'.format(x) for x in values)))
            for index, p in enumerate(conclusive, start=1):
                lines.append('conclusive probability for |Psi_{}> {:.12g}'.format(index, p))
            lines.append(emit_report(report, FORMAT_TEXT))
            self.write('\n'.join(lines), options)
        self.check_report(report)
