#!/usr/bin/env python
"""Run the povmforge test suite, or the test labels given on the command line."""
import os
import sys

import django
from django.conf import settings
from django.test.utils import get_runner


def run_tests(*labels):
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'tests.settings')
    django.setup()
    runner = get_runner(settings)(verbosity=2 if '-v' in labels else 1)
    failures = runner.run_tests([label for label in labels if label != '-v'] or ['tests'])
    sys.exit(bool(failures))


if __name__ == '__main__':
    run_tests(*sys.argv[1:])
