"""Three-valued verdicts for fuel-bounded checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable

HOLDS = "holds"
FAILS = "fails"
UNKNOWN = "unknown"

_RANK = {HOLDS: 0, UNKNOWN: 1, FAILS: 2}
EXIT_CODES = {HOLDS: 0, FAILS: 1, UNKNOWN: 2}


@dataclass(frozen=True)
class Verdict:
    status: str
    reason: str = ""
    witness: Any = None

    def __bool__(self):
        return self.status == HOLDS

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    @property
    def fails(self) -> bool:
        return self.status == FAILS

    @property
    def unknown(self) -> bool:
        return self.status == UNKNOWN

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def __str__(self):
        return f"{self.status}: {self.reason}" if self.reason else self.status

    def because(self, prefix: str) -> "Verdict":
        """Same verdict with ``prefix`` prepended to the reason."""
        if self.status == HOLDS:
            return self
        reason = f"{prefix}: {self.reason}" if self.reason else prefix
        return Verdict(self.status, reason, self.witness)


def holds(reason: str = "") -> Verdict:
    return Verdict(HOLDS, reason)


def fails(reason: str, witness: Any = None) -> Verdict:
    return Verdict(FAILS, reason, witness)


def unknown(reason: str, witness: Any = None) -> Verdict:
    return Verdict(UNKNOWN, reason, witness)


def worst(verdicts: Iterable[Verdict]) -> Verdict:
    """Worst-wins aggregation: fails over unknown over holds.  The first
    verdict of the worst rank is returned, so reasons stay deterministic."""
    best = holds()
    for v in verdicts:
        if _RANK[v.status] > _RANK[best.status]:
            best = v
    return best


def first_failure(verdicts: Iterable[Verdict]) -> Verdict:
    """Like :func:`worst` but stops at the first definite failure."""
    seen = holds()
    for v in verdicts:
        if v.fails:
            return v
        if v.unknown and seen.holds:
            seen = v
    return seen
