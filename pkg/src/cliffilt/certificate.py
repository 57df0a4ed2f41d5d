"""Structured pass/fail results for the verification routines.

A certificate is truthy exactly when the check passed.  The witness of
a failing certificate is a plain dict of JSON-compatible values that
identifies the first violated constraint.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True)
class Certificate:
    check: str
    passed: bool
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.passed

    def to_json_obj(self) -> dict:
        return {"check": self.check, "pass": self.passed, "witness": self.witness}


def passing(check: str) -> Certificate:
    return Certificate(check, True, None)


def failing(check: str, **witness) -> Certificate:
    return Certificate(check, False, witness)


def combine(check: str, parts: Iterable[Certificate]) -> Certificate:
    """Aggregate sub-checks; the first failure becomes the witness."""
    for part in parts:
        if not part.passed:
            witness = {"failed": part.check}
            if part.witness:
                witness.update(part.witness)
            return Certificate(check, False, witness)
    return Certificate(check, True, None)
