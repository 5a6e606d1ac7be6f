"""Naimark dilation, two-level synthesis and simulation of a five-outcome POVM."""

# pylint:disable=invalid-name
# Django requires `default_app_config`
default_app_config = 'povmforge.apps.PovmForgeConfig'
__version__ = '1.0.0'
