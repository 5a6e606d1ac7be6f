"""Shared fixtures for the povmforge test cases."""

import numpy as np
from django.test import SimpleTestCase

from povmforge.povm import params_from_inverse_squares
from povmforge.test import NumericAssertionsMixin

SET_A_INVERSE_SQUARES = (0.25, 0.25, 0.25, 0.25)
SET_B_INVERSE_SQUARES = (0.5, 0.25, 0.125, 0.125)


class PovmTestCase(NumericAssertionsMixin, SimpleTestCase):
    """
    Base test case with the two reference parameter sets.

    * `set_a`: alpha = beta = gamma = delta = 2, q = 1. The four states are
      orthonormal and P5 vanishes.
    * `set_b`: reciprocal squares (1/2, 1/4, 1/8, 1/8), q = sqrt(1/2).
    """

    def setUp(self):
        """Build the parameter sets and a seeded generator."""
        super().setUp()
        self.set_a = params_from_inverse_squares(SET_A_INVERSE_SQUARES)
        self.set_b = params_from_inverse_squares(SET_B_INVERSE_SQUARES)
        self.rng = np.random.default_rng(2024)
