"""Exact-valued check certificates shared by the verification operations."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    description: str
    expected: object
    actual: object

    @property
    def ok(self) -> bool:
        return self.expected == self.actual


class CheckFailure(Exception):
    """A certificate check failed; the message names the violated invariant."""

    def __init__(self, stage: str, check: Check):
        self.stage = stage
        self.check = check
        super().__init__(
            "%s: %s (expected %r, got %r)"
            % (stage, check.description, check.expected, check.actual)
        )


@dataclass
class Certificate:
    """A list of (description, expected, actual) checks for one stage.

    Expected and actual values are exact integers or exact structure hashes,
    never floats. wall_time_ms is informational only and is excluded from
    serialized artifacts so runs stay byte-reproducible.
    """

    stage: str
    checks: list[Check] = field(default_factory=list)
    wall_time_ms: int = 0

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)


class CertBuilder:
    """Accumulates checks; in strict mode the first failure raises."""

    def __init__(self, stage: str, strict: bool = True):
        self.cert = Certificate(stage=stage)
        self.strict = strict

    def check(self, description: str, expected: object, actual: object) -> None:
        c = Check(description=description, expected=expected, actual=actual)
        self.cert.checks.append(c)
        if self.strict and not c.ok:
            raise CheckFailure(self.cert.stage, c)

    def done(self) -> Certificate:
        return self.cert
