"""Checker reports and classification verdicts."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any


class Verdict(str, enum.Enum):
    FINITE = "finite"
    INFINITE = "infinite"

    def __str__(self):
        return self.value


FiniteDistance = Verdict.FINITE
InfiniteDistance = Verdict.INFINITE


@dataclass(frozen=True)
class Classification:
    """Finite/infinite verdict plus a witness that can be re-checked."""

    verdict: Verdict
    witness: dict
    route: str

    @property
    def is_finite(self) -> bool:
        return self.verdict is Verdict.FINITE


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool | None
    detail: str = ""
    witness: Any = None

    @property
    def status(self) -> str:
        if self.passed is None:
            return "n/a"
        return "pass" if self.passed else "FAIL"


@dataclass(frozen=True)
class Report:
    title: str
    checks: tuple[Check, ...] = ()
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed is not False for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.passed is False]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)
