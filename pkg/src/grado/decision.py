"""Tri-state decision values.

Searches never lie: "no" is only emitted by deterministic routes (dimension
obstructions, exhausted finite enumerations); randomized searches that fail
report "undecided".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

YES = "yes"
NO = "no"
UNDECIDED = "undecided"


@dataclass
class Decision:
    status: str
    witness: Any = None
    reason: str = ""
    checked: int = 0

    @property
    def is_yes(self):
        return self.status == YES

    @property
    def is_no(self):
        return self.status == NO

    @property
    def is_undecided(self):
        return self.status == UNDECIDED

    def __bool__(self):
        raise TypeError("Decision is tri-state; test .is_yes / .is_no explicitly")


def yes(witness=None, checked=0, reason=""):
    return Decision(YES, witness=witness, checked=checked, reason=reason)


def no(reason="", checked=0):
    return Decision(NO, reason=reason, checked=checked)


def undecided(reason="", checked=0):
    return Decision(UNDECIDED, reason=reason, checked=checked)


@dataclass
class Report:
    """Named pass/fail entries with optional detail payloads."""

    entries: list = field(default_factory=list)

    def add(self, name, ok, detail=None):
        self.entries.append((name, bool(ok), detail))

    @property
    def ok(self):
        return all(ok for _, ok, _ in self.entries)

    def failures(self):
        return [(n, d) for n, ok, d in self.entries if not ok]

    def to_json(self):
        return [{"check": n, "ok": ok, **({"detail": str(d)} if d is not None else {})}
                for n, ok, d in self.entries]
