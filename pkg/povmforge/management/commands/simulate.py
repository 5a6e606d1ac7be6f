"""Sample POVM outcomes through the dilation."""

import json

from django.core.management.base import CommandError

from povmforge.cli import FORMAT_JSON
from povmforge.exceptions import PovmForgeError
from povmforge.management.base import PovmForgeCommand, positive_int
from povmforge.povm import BASIS_LABELS, basis_state, build_states
from povmforge.serialisers import HistogramSerialiser, circuit_from_document, dumps
from povmforge.sim import ROUTE_CIRCUIT, ROUTE_MATRIX, sample_povm

STATE_LABELS = ('psi1', 'psi2', 'psi3', 'psi4')


def input_state(label, params):
    """A basis state such as ``01`` or one of the states |Psi_1>..|Psi_4>."""
    if label in STATE_LABELS:
        return build_states(params)[STATE_LABELS.index(label)]
    return basis_state(label)


class Command(PovmForgeCommand):
    help = 'Prepare an input, dilate it, measure the ancillas and print the outcome histogram.'

    def add_command_arguments(self, parser):
        parser.add_argument('--input', choices=BASIS_LABELS + STATE_LABELS, default='00')
        parser.add_argument('--shots', type=positive_int, default=None)
        parser.add_argument('--route', choices=(ROUTE_MATRIX, ROUTE_CIRCUIT), default=ROUTE_MATRIX)
        parser.add_argument('--circuit', default=None,
                            help='Circuit JSON written by synth, used on the circuit route.')
        parser.add_argument('--chunk-size', type=positive_int, default=None)

    def load_circuit(self, path):
        try:
            with open(path) as handle:
                return circuit_from_document(json.load(handle))
        except PovmForgeError:
            raise
        except (OSError, ValueError) as exc:
            raise CommandError('cannot read circuit {}: {}'.format(path, exc), returncode=2) from exc

    def run(self, params, tolerance, options):
        if not self.config.sampling_enabled:
            raise CommandError('sampling is disabled by POVMFORGE_SAMPLING_ENABLED', returncode=2)
        circuit = None
        if options['circuit']:
            if options['route'] != ROUTE_CIRCUIT:
                raise CommandError('--circuit needs --route circuit', returncode=2)
            circuit = self.load_circuit(options['circuit'])
        histogram = sample_povm(
            params,
            input_state(options['input'], params),
            options['shots'] or self.config.shots,
            options['seed'],
            route=options['route'],
            chunk_size=options['chunk_size'] or self.config.chunk_size,
            circuit=circuit,
        )
        if options['format'] == FORMAT_JSON:
            self.write(dumps(HistogramSerialiser(histogram).data), options)
        else:
            lines = ['outcome {} count {} expected {:.12g}'.format(k, count, p)
                     for k, (count, p) in enumerate(zip(histogram.counts, histogram.expected), start=1)]
            self.write('\n'.join(lines), options)
        self.stderr.write('shots={} seed={} route={} tolerance={:.3g}'.format(
            histogram.shots, histogram.seed, histogram.route, tolerance
        ))
