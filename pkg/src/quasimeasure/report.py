"""Check results with re-evaluatable failure witnesses.

Every verification operation in this package returns an ``AxiomReport``:
an ordered list of named checks, each pass/fail, and for each failure a
witness carrying the sets involved and both sides of the violated relation.
Failures are reported, never raised.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any


@dataclass(frozen=True)
class Witness:
    """The concrete sets and values of one violated (or missing) relation.

    ``sets`` maps a role name ("X", "Y", "meet", "cover", ...) to the set it
    names, in a fixed order.  For equality/inequality violations both side
    values are present; for a failed existence condition ``rhs`` is None and
    ``note`` says what was searched for.
    """

    sets: tuple[tuple[str, Any], ...]
    lhs: Fraction | float
    rhs: Fraction | float | None
    relation: str  # "eq", "le", or "exists"
    note: str = ""

    def set_named(self, role: str) -> Any:
        for name, value in self.sets:
            if name == role:
                return value
        raise KeyError(role)

    def render(self) -> str:
        parts = [f"{name}={value}" for name, value in self.sets]
        if self.rhs is None:
            parts.append(f"value {self.lhs}: {self.note}" if self.note else f"value {self.lhs}")
        else:
            op = {"eq": "!=", "le": ">"}[self.relation]
            parts.append(f"{self.lhs} {op} {self.rhs}")
            if self.note:
                parts.append(self.note)
        return " ".join(str(p) for p in parts)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a single named check."""

    name: str
    passed: bool
    witnesses: tuple[Witness, ...] = ()
    details: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.passed and self.witnesses:
            raise ValueError("a passing check must carry no witnesses")


@dataclass(frozen=True)
class AxiomReport:
    """Ordered collection of check results from one verification run."""

    suite: str
    results: tuple[CheckResult, ...]
    notes: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def result(self, name: str) -> CheckResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(f"no check named {name!r} in suite {self.suite!r}")

    def failures(self) -> tuple[CheckResult, ...]:
        return tuple(r for r in self.results if not r.passed)


class ReportBuilder:
    """Accumulates witnesses per check, then freezes an AxiomReport."""

    def __init__(self, suite: str):
        self.suite = suite
        self._order: list[str] = []
        self._witnesses: dict[str, list[Witness]] = {}
        self._details: dict[str, list[str]] = {}
        self._notes: list[str] = []

    def declare(self, *names: str) -> None:
        for name in names:
            if name not in self._witnesses:
                self._order.append(name)
                self._witnesses[name] = []
                self._details[name] = []

    def fail(self, name: str, witness: Witness) -> None:
        self.declare(name)
        self._witnesses[name].append(witness)

    def detail(self, name: str, text: str) -> None:
        self.declare(name)
        self._details[name].append(text)

    def note(self, text: str) -> None:
        self._notes.append(text)

    def build(self) -> AxiomReport:
        results = tuple(
            CheckResult(
                name,
                passed=not self._witnesses[name],
                witnesses=tuple(self._witnesses[name]),
                details=tuple(self._details[name]),
            )
            for name in self._order
        )
        return AxiomReport(self.suite, results, tuple(self._notes))
