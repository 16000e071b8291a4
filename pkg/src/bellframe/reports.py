"""Verdicts and witnesses returned by every checker."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

PASS, FAIL, VACUOUS = "pass", "fail", "vacuous"


def frac_str(x):
    """Exact ``p/q`` rendering; integers keep an explicit ``/1``."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass
class Witness:
    """One violated identity.

    ``clause`` names the identity, ``atom`` is the conditioning full
    specification (history ids), ``assignment`` the values of the event
    variables, ``lhs``/``rhs`` the two exact sides.
    """

    clause: str
    lhs: Fraction
    rhs: Fraction
    atom: tuple | None = None
    assignment: tuple = ()
    regions: tuple = ()
    event: tuple | None = None

    def to_dict(self):
        d = {"clause": self.clause, "lhs": frac_str(self.lhs), "rhs": frac_str(self.rhs)}
        if self.atom is not None:
            d["atom"] = list(self.atom)
        if self.assignment:
            d["assignment"] = list(self.assignment)
        if self.regions:
            d["regions"] = list(self.regions)
        if self.event is not None:
            d["event"] = list(self.event)
        return d


@dataclass
class CheckReport:
    condition: str
    verdict: str
    witnesses: list = field(default_factory=list)
    vacuous_atoms: int = 0
    clauses: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def __post_init__(self):
        if self.verdict == FAIL and not any(w.lhs != w.rhs for w in self.witnesses):
            raise AssertionError(f"{self.condition}: fail verdict without a witness")

    @property
    def passed(self):
        return self.verdict == PASS

    @property
    def ok(self):
        """Pass or vacuous."""
        return self.verdict != FAIL

    def to_dict(self):
        return {
            "condition": self.condition,
            "verdict": self.verdict,
            "vacuous_atoms": self.vacuous_atoms,
            "clauses": dict(self.clauses),
            "notes": list(self.notes),
            "witnesses": [w.to_dict() for w in self.witnesses],
        }

    def summary(self):
        line = f"{self.condition}: {self.verdict}"
        if self.vacuous_atoms:
            line += f" ({self.vacuous_atoms} null atoms skipped)"
        return line


def finish(condition, witnesses, evaluated, nulls=0, clauses=None, notes=None):
    if witnesses:
        verdict = FAIL
    elif evaluated == 0:
        verdict = VACUOUS
    else:
        verdict = PASS
    return CheckReport(condition, verdict, list(witnesses), nulls,
                       dict(clauses or {}), list(notes or []))
