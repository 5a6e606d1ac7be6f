"""Shared plumbing for the povmforge management commands."""

import argparse
import logging

from django.apps import apps
from django.core.management.base import BaseCommand, CommandError

from povmforge.cli import FORMAT_JSON, FORMAT_TEXT, configure_verbosity, emit_report
from povmforge.exceptions import ParameterError, PovmForgeError
from povmforge.povm import optimal_q, params_from_inverse_squares, validate_params
from povmforge.serialisers import AuditReportSerialiser, dumps

logger = logging.getLogger(__name__)

DIRECT_PARAMETERS = ('alpha', 'beta', 'gamma', 'delta')


def positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError('expected a number, got {!r}'.format(text)) from None
    if not value > 0:
        raise argparse.ArgumentTypeError('expected a positive number, got {!r}'.format(text))
    return value


def positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError('expected an integer, got {!r}'.format(text)) from None
    if value < 1:
        raise argparse.ArgumentTypeError('expected a positive integer, got {!r}'.format(text))
    return value


def non_negative_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError('expected an integer, got {!r}'.format(text)) from None
    if value < 0:
        raise argparse.ArgumentTypeError('expected a non-negative integer, got {!r}'.format(text))
    return value


def q_value(text):
    """``auto`` (optimal q) or an explicit positive number."""
    if text == 'auto':
        return None
    return positive_float(text)


def float_list(text):
    try:
        return [float(part) for part in text.split(',')]
    except ValueError:
        raise argparse.ArgumentTypeError('expected comma-separated numbers, got {!r}'.format(text)) from None


def describe_error(exc):
    """Error text naming every violated constraint when there are any."""
    if isinstance(exc, ParameterError) and exc.failed_checks:
        return '{} constraint{} violated: {}'.format(
            ', '.join(exc.failed_checks), 's' if len(exc.failed_checks) > 1 else '', exc
        )
    return str(exc)


def params_from_options(options):
    """Build `PovmParams` from either the reciprocal-squares or the direct flags."""
    direct = [options[name] for name in DIRECT_PARAMETERS]
    q = options['q']
    if options['inv_sq'] is not None:
        if any(value is not None for value in direct):
            raise CommandError('--inv-sq cannot be combined with --alpha/--beta/--gamma/--delta', returncode=2)
        return params_from_inverse_squares(options['inv_sq'], q)
    if all(value is not None for value in direct):
        if q is None:
            q = optimal_q(*direct)
        return validate_params(*direct, q)
    raise CommandError('give the parameters with --inv-sq or with all of --alpha, --beta, --gamma, --delta',
                       returncode=2)


class PovmForgeCommand(BaseCommand):
    """
    Base class for the povmforge subcommands.

    Subclasses implement `run(params, tolerance, options)` and may extend
    `add_command_arguments`. Domain errors leave with exit code 2, failed
    audits with exit code 1.
    """

    requires_system_checks = []
    formats = (FORMAT_JSON, FORMAT_TEXT)

    def add_arguments(self, parser):
        parser.add_argument('--inv-sq', type=float_list, default=None,
                            help='Reciprocal squares 1/alpha^2,1/beta^2,1/gamma^2,1/delta^2.')
        for name in DIRECT_PARAMETERS:
            parser.add_argument('--{}'.format(name), type=float, default=None)
        parser.add_argument('--q', type=q_value, default=None, help='"auto" (default) or an explicit q.')
        parser.add_argument('--tolerance', type=positive_float, default=None)
        parser.add_argument('--seed', type=non_negative_int, default=None)
        parser.add_argument('--samples', type=positive_int, default=None,
                            help='Random input states per dilation audit.')
        parser.add_argument('--format', choices=self.formats, default=self.formats[0])
        parser.add_argument('--output', default=None, help='Write the result here instead of stdout.')
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        """Hook for subcommand flags."""

    def handle(self, *args, **options):
        self.config = apps.get_app_config('povmforge')
        configure_verbosity(options['verbosity'])
        tolerance = options['tolerance'] or self.config.tolerance
        if options['seed'] is None:
            options['seed'] = self.config.seed
        if options['samples'] is None:
            options['samples'] = self.config.audit_samples
        try:
            params = params_from_options(options)
            self.run(params, tolerance, options)
        except PovmForgeError as exc:
            raise CommandError(describe_error(exc), returncode=2) from exc

    def run(self, params, tolerance, options):
        raise NotImplementedError('subclasses of PovmForgeCommand must provide a run() method')

    def write(self, text, options):
        """Send a result to `--output` or stdout."""
        if options['output']:
            try:
                with open(options['output'], 'w') as handle:
                    handle.write(text + '\n')
            except OSError as exc:
                raise CommandError('cannot write {}: {}'.format(options['output'], exc), returncode=2) from exc
            logger.info('wrote %s', options['output'])
        else:
            self.stdout.write(text)

    def write_document(self, document, report, options):
        """Write `document` with `report` under the ``report`` key, or the text report."""
        if options['format'] == FORMAT_JSON:
            document['report'] = AuditReportSerialiser(report).data
            self.write(dumps(document), options)
        else:
            self.write(emit_report(report, FORMAT_TEXT), options)

    def check_report(self, report):
        if not report.passed:
            raise CommandError('audit failed: {}'.format(', '.join(report.failures())), returncode=1)
