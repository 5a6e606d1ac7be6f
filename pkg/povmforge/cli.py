"""
Command-line entry point.

Every subcommand is a Django management command under
`povmforge.management.commands`; `run_command` dispatches to them without
going through ``manage.py`` so the tool also works outside a Django project.
"""

import logging
import os
import sys
from importlib import import_module

import django
from django.conf import settings

from povmforge.serialisers import AuditReportSerialiser, dumps

FORMAT_JSON = 'json'
FORMAT_TEXT = 'text'
FORMAT_QASM = 'qasm'

SUBCOMMANDS = ('povm', 'dilate', 'paper-matrix', 'decompose', 'synth', 'simulate', 'verify')
USAGE = 'usage: povmforge {{{}}} [options]'.format(','.join(SUBCOMMANDS))

DEFAULT_LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {'format': '%(levelname)s %(name)s %(message)s'},
    },
    'handlers': {
        'stderr': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'povmforge': {'handlers': ['stderr'], 'level': 'WARNING', 'propagate': False},
    },
}

VERBOSITY_LEVELS = {
    0: logging.ERROR,
    1: logging.WARNING,
    2: logging.INFO,
    3: logging.DEBUG,
}


def configure_verbosity(verbosity):
    """Map a management command `--verbosity` to the package log level."""
    logging.getLogger('povmforge').setLevel(VERBOSITY_LEVELS.get(verbosity, logging.DEBUG))


def emit_report(report, output_format=FORMAT_JSON):
    """
    Render an `AuditReport`.

    JSON is compact with a fixed key order and residuals rounded to 12
    significant digits. Text has one line per check, then one per note.
    """
    if output_format == FORMAT_JSON:
        return dumps(AuditReportSerialiser(report).data)
    lines = []
    for check in report.checks:
        lines.append('{} {} residual={:.12g}{}'.format(
            'pass' if check.passed else 'FAIL', check.name, check.residual, ' (advisory)' if check.advisory else ''
        ))
    lines.extend('# {}'.format(note) for note in report.notes)
    return '\n'.join(lines)


def run_command(argv, stdout=None, stderr=None):
    """
    Run one subcommand and return its exit code.

    0 on success, 1 when an audit fails, 2 on usage or validation errors.
    """
    stderr = stderr or sys.stderr
    if not argv or argv[0] not in SUBCOMMANDS:
        stderr.write('{}\n'.format(USAGE))
        if argv:
            stderr.write('unknown subcommand {!r}\n'.format(argv[0]))
        return 2
    name = argv[0].replace('-', '_')
    module = import_module('povmforge.management.commands.{}'.format(name))
    command = module.Command(stdout=stdout, stderr=stderr)
    try:
        command.run_from_argv(['povmforge', name] + list(argv[1:]))
    except SystemExit as exc:
        if exc.code is None:
            return 0
        return exc.code if isinstance(exc.code, int) else 1
    return 0


def main():
    """Console script entry point."""
    if not settings.configured and 'DJANGO_SETTINGS_MODULE' not in os.environ:
        settings.configure(INSTALLED_APPS=['povmforge'], LOGGING=DEFAULT_LOGGING)
    django.setup()
    sys.exit(run_command(sys.argv[1:]))
