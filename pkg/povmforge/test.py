"""povmforge test utilities."""

# pylint:disable=invalid-name
# `assertMatrixClose`, `assertUnitary`, `assertEqualUpToPhase` and
# `assertHermitian` follow the camel case pattern of the python unittest
# library.

import numpy as np

from povmforge import matkernel


class NumericAssertionsMixin:
    """
    Numeric assertions for test cases working with complex matrices.

    Mix it into any `unittest.TestCase` subclass:

    ```
    class TestMyCircuit(NumericAssertionsMixin, SimpleTestCase):
        def test_circuit(self):
            self.assertEqualUpToPhase(circuit_unitary(circuit), expected, 1e-8)
    ```

    Every assertion compares the largest entrywise deviation against
    `tolerance`, except `assertUnitary`, which uses the Frobenius norm of
    U^dagger U - I.
    """

    def assertMatrixClose(self, actual, expected, tolerance=1e-12, msg=None):
        """Check two arrays agree entrywise within `tolerance`."""
        deviation = matkernel.max_deviation(np.asarray(actual), np.asarray(expected))
        if deviation > tolerance:
            self.fail(self._formatMessage(msg, 'max deviation {:.3e} exceeds {:.3e}'.format(deviation, tolerance)))

    def assertUnitary(self, matrix, tolerance=1e-10, msg=None):
        """Check `matrix` is unitary within `tolerance`."""
        defect = matkernel.unitarity_defect(np.asarray(matrix))
        if defect > tolerance:
            self.fail(self._formatMessage(msg, 'unitarity defect {:.3e} exceeds {:.3e}'.format(defect, tolerance)))

    def assertEqualUpToPhase(self, actual, expected, tolerance=1e-8, msg=None):
        """Check `actual` equals e^{i phi} `expected` for the best phase phi."""
        deviation, _ = matkernel.phase_aligned_deviation(np.asarray(actual), np.asarray(expected))
        if deviation > tolerance:
            self.fail(self._formatMessage(
                msg, 'deviation after phase alignment {:.3e} exceeds {:.3e}'.format(deviation, tolerance)
            ))

    def assertHermitian(self, matrix, tolerance=1e-12, msg=None):
        """Check `matrix` equals its adjoint within `tolerance`."""
        defect = matkernel.hermiticity_defect(np.asarray(matrix))
        if defect > tolerance:
            self.fail(self._formatMessage(msg, 'hermiticity defect {:.3e} exceeds {:.3e}'.format(defect, tolerance)))

# pylint:enable=invalid-name
