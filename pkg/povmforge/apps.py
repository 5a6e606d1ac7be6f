"""povmforge app config."""

import os

from django.apps import AppConfig
from django.conf import settings
from django.core.exceptions import ImproperlyConfigured

SEED_ENVIRONMENT_VARIABLE = 'POVMFORGE_SEED'


def _positive(name, value, kind):
    if isinstance(value, bool) or not isinstance(value, kind) or value <= 0:
        raise ImproperlyConfigured(
            "`{}` must be a positive number, got {!r}.".format(name, value)
        )
    return value


class PovmForgeConfig(AppConfig):
    """Config for the povmforge app."""

    name = 'povmforge'
    verbose_name = 'POVM Forge'

    def __init__(self, *args, **kwargs):
        """Initialise the config."""
        self.tolerance = float(_positive(
            'POVMFORGE_TOLERANCE', getattr(settings, 'POVMFORGE_TOLERANCE', 1e-10), (int, float)
        ))
        self.phase_tolerance = float(_positive(
            'POVMFORGE_PHASE_TOLERANCE', getattr(settings, 'POVMFORGE_PHASE_TOLERANCE', 1e-8), (int, float)
        ))
        self.shots = _positive('POVMFORGE_SHOTS', getattr(settings, 'POVMFORGE_SHOTS', 100000), int)
        self.audit_samples = _positive(
            'POVMFORGE_AUDIT_SAMPLES', getattr(settings, 'POVMFORGE_AUDIT_SAMPLES', 100), int
        )
        self.chunk_size = _positive(
            'POVMFORGE_CHUNK_SIZE', getattr(settings, 'POVMFORGE_CHUNK_SIZE', 10000), int
        )

        if hasattr(settings, 'POVMFORGE_SEED'):
            self.seed = settings.POVMFORGE_SEED
        else:
            self.seed = os.environ.get(SEED_ENVIRONMENT_VARIABLE, 0)
        try:
            self.seed = int(self.seed)
        except (TypeError, ValueError):
            raise ImproperlyConfigured(
                "`POVMFORGE_SEED` must be an integer, got {!r}.".format(self.seed)
            ) from None
        if self.seed < 0:
            raise ImproperlyConfigured("`POVMFORGE_SEED` must not be negative.")

        if hasattr(settings, 'POVMFORGE_SAMPLING_ENABLED'):
            self.sampling_enabled = settings.POVMFORGE_SAMPLING_ENABLED
        else:
            self.sampling_enabled = True

        super().__init__(*args, **kwargs)
