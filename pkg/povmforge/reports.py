"""Audit reports shared by every verification stage."""

from dataclasses import dataclass, field
from typing import List


@dataclass(frozen=True)
class Check:
    """
    One named audit check.

    Advisory checks are reported like any other but do not decide whether
    the report passes.
    """

    name: str
    residual: float
    passed: bool
    advisory: bool = False


@dataclass
class AuditReport:
    """An ordered list of checks plus free-text notes."""

    checks: List[Check] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def add(self, name, residual, tolerance, advisory=False):
        """Record `residual` as a check passing when it is within `tolerance`."""
        residual = float(residual)
        check = Check(name=name, residual=residual, passed=bool(residual <= tolerance), advisory=advisory)
        self.checks.append(check)
        return check

    def add_flag(self, name, passed, advisory=False):
        """Record a yes/no check; its residual is 0 on success and 1 otherwise."""
        check = Check(name=name, residual=0.0 if passed else 1.0, passed=bool(passed), advisory=advisory)
        self.checks.append(check)
        return check

    def note(self, text):
        """Append a free-text note."""
        self.notes.append(text)

    def extend(self, other, prefix='', advisory=None):
        """
        Append the checks and notes of `other`.

        Args:
            prefix (str): Prepended to every check name.
            advisory (bool): Optional, force the advisory flag of the copied checks.
        """
        for check in other.checks:
            self.checks.append(Check(
                name=prefix + check.name,
                residual=check.residual,
                passed=check.passed,
                advisory=check.advisory if advisory is None else advisory,
            ))
        self.notes.extend(prefix + note for note in other.notes)

    @property
    def passed(self):
        """Whether every non-advisory check passed."""
        return all(check.passed for check in self.checks if not check.advisory)

    def failures(self):
        """Names of the non-advisory checks that failed."""
        return [check.name for check in self.checks if not check.advisory and not check.passed]
