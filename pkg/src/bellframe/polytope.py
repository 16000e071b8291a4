"""Two-setting, two-outcome behaviour tables and the local polytope.

A table maps ``(a_s, b_s, a_o, b_o)`` with settings in ``{0, 1}`` and
outcomes in ``{+1, -1}`` to exact probabilities ``p(a_o, b_o | a_s, b_s)``.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError
from .lp import Infeasible, solve_feasibility
from .reports import Witness, finish

SETTINGS = (0, 1)
OUTCOMES = (1, -1)
KEYS = tuple(itertools.product(SETTINGS, SETTINGS, OUTCOMES, OUTCOMES))
# deterministic strategies: (a for setting 0, a for setting 1, b for 0, b for 1)
STRATEGIES = tuple(itertools.product(OUTCOMES, repeat=4))
# (signs on E00, E01, E10, E11), odd number of minus signs
CONVENTIONS = tuple(s for s in itertools.product((1, -1), repeat=4) if s.count(-1) % 2 == 1)


class BehaviorTable:
    def __init__(self, p, check=True, meta=None):
        self.p = {k: Fraction(v) for k, v in p.items()}
        self.meta = dict(meta or {})
        if check:
            self.validate()

    def validate(self):
        if set(self.p) != set(KEYS):
            raise InputError("behaviour table must have exactly the 16 entries")
        for k, v in self.p.items():
            if v < 0:
                raise InputError(f"negative probability at {k}")
        for x, y in itertools.product(SETTINGS, SETTINGS):
            total = sum(self.p[(x, y, a, b)] for a in OUTCOMES for b in OUTCOMES)
            if total != 1:
                raise InputError(f"entries for settings ({x}, {y}) sum to {total}")

    def __getitem__(self, key):
        return self.p[key]

    def __eq__(self, other):
        return isinstance(other, BehaviorTable) and self.p == other.p

    def __repr__(self):
        return f"BehaviorTable({self.to_text()!r})"

    def to_text(self):
        return "".join(f"{k[0]} {k[1]} {k[2]:+d} {k[3]:+d} "
                       f"{self.p[k].numerator}/{self.p[k].denominator}\n" for k in KEYS)

    @classmethod
    def from_text(cls, text):
        p = {}
        for n, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 5:
                raise InputError(f"line {n}: expected 'a_s b_s a_o b_o p/q'")
            try:
                key = (int(parts[0]), int(parts[1]), int(parts[2]), int(parts[3]))
                value = Fraction(parts[4])
            except (ValueError, ZeroDivisionError) as exc:
                raise InputError(f"line {n}: {exc}") from None
            if key[0] not in SETTINGS or key[1] not in SETTINGS or key[2] not in OUTCOMES \
                    or key[3] not in OUTCOMES:
                raise InputError(f"line {n}: key out of range")
            if key in p:
                raise InputError(f"line {n}: duplicate entry {key}")
            p[key] = value
        return cls(p)


def correlators(t):
    return {(x, y): sum(a * b * t[(x, y, a, b)] for a in OUTCOMES for b in OUTCOMES)
            for x, y in itertools.product(SETTINGS, SETTINGS)}


def chsh_value(t):
    """Largest ``|±E00 ± E01 ± E10 ± E11|`` over odd sign conventions.

    Returns ``(value, signs)``; ties go to the first convention in order.
    """
    e = correlators(t)
    order = ((0, 0), (0, 1), (1, 0), (1, 1))
    best, arg = None, None
    for signs in CONVENTIONS:
        v = abs(sum(s * e[k] for s, k in zip(signs, order)))
        if best is None or v > best:
            best, arg = v, signs
    return best, arg


def no_signalling_violations(t):
    """List of ``(wing, setting, other settings, outcome, lhs, rhs)`` mismatches."""
    out = []
    for x in SETTINGS:
        for a in OUTCOMES:
            m0, m1 = (sum(t[(x, y, a, b)] for b in OUTCOMES) for y in SETTINGS)
            if m0 != m1:
                out.append(("a", x, (0, 1), a, m0, m1))
    for y in SETTINGS:
        for b in OUTCOMES:
            m0, m1 = (sum(t[(x, y, a, b)] for a in OUTCOMES) for x in SETTINGS)
            if m0 != m1:
                out.append(("b", y, (0, 1), b, m0, m1))
    return out


def check_no_signalling_behavior(t):
    witnesses = [Witness(f"no_signalling_{w}", lhs, rhs,
                         assignment=(f"setting={s}", f"outcome={o:+d}"))
                 for w, s, _, o, lhs, rhs in no_signalling_violations(t)]
    return finish("no_signalling", witnesses, evaluated=8)


def deterministic_table(strategy):
    a0, a1, b0, b1 = strategy
    av, bv = (a0, a1), (b0, b1)
    return BehaviorTable({(x, y, a, b): int(av[x] == a and bv[y] == b) for x, y, a, b in KEYS})


def pr_box_table():
    """Equal outcomes, except anticorrelated when both settings are 1."""
    return BehaviorTable({(x, y, a, b): Fraction(1, 2) if (a == b) != (x == 1 and y == 1) else 0
                          for x, y, a, b in KEYS})


def white_noise():
    return BehaviorTable({k: Fraction(1, 4) for k in KEYS})


def mixture(tables, weights):
    weights = [Fraction(w) for w in weights]
    if sum(weights) != 1 or any(w < 0 for w in weights):
        raise InputError("mixture weights must be nonnegative and sum to 1")
    return BehaviorTable({k: sum(w * t[k] for w, t in zip(weights, tables)) for k in KEYS})


def chsh_facet_membership(t):
    """Positivity, no-signalling, and every CHSH expression at most 2."""
    if any(v < 0 for v in t.p.values()) or no_signalling_violations(t):
        return False
    return chsh_value(t)[0] <= 2


@dataclass(frozen=True)
class LhvDecomposition:
    weights: dict

    def reconstruct(self):
        A = _lp_matrix()
        col = {s: j for j, s in enumerate(STRATEGIES)}
        return BehaviorTable({k: sum(w * A[i][col[s]] for s, w in self.weights.items())
                              for i, k in enumerate(KEYS)}, check=False)


@dataclass(frozen=True)
class NotLocal:
    reason: str
    facet: tuple | None = None
    value: Fraction | None = None
    certificate: tuple | None = None
    detail: str = ""


@functools.lru_cache(maxsize=None)
def _lp_matrix():
    """Rows indexed by KEYS, columns by STRATEGIES, 0/1 entries."""
    cols = [deterministic_table(s) for s in STRATEGIES]
    return tuple(tuple(int(c[k]) for c in cols) for k in KEYS)


def lhv_membership(t):
    """Decide membership in the local polytope by exact LP over the 16 vertices.

    Returns :class:`LhvDecomposition` or :class:`NotLocal`.  For an
    infeasible table the LP's Farkas certificate is attached: a linear
    functional nonnegative on every vertex and negative on ``t``.
    """
    negative = [k for k in KEYS if t[k] < 0]
    if negative:
        return NotLocal("positivity", detail=f"negative entry at {negative[0]}")
    ns = no_signalling_violations(t)
    res = solve_feasibility(_lp_matrix(), [t[k] for k in KEYS])
    if isinstance(res, Infeasible):
        if ns:
            w, s, _, o, lhs, rhs = ns[0]
            return NotLocal("no-signalling", certificate=res.certificate,
                            detail=f"wing {w} marginal for setting {s}, outcome {o:+d}: {lhs} vs {rhs}")
        value, signs = chsh_value(t)
        return NotLocal("chsh", facet=signs, value=value, certificate=res.certificate)
    return LhvDecomposition({s: w for s, w in zip(STRATEGIES, res.x) if w})


def singlet_table(angle_a, angle_a2, angle_b, angle_b2, cap):
    """Rational approximation of the singlet correlations ``E = -cos(θa - θb)``.

    For each setting pair ``x = (1 + E) / 4`` is rounded to the nearest
    fraction with denominator at most ``cap`` and used for both equal-outcome
    entries; the unequal entries get ``1/2 - x``.  Marginals stay exactly
    uniform, so no-signalling holds exactly.  ``meta["max_error"]`` bounds
    the per-entry deviation from the real-valued table.
    """
    if cap < 2:
        raise InputError("denominator cap must be at least 2")
    angles_a, angles_b = (angle_a, angle_a2), (angle_b, angle_b2)
    p, err = {}, 0.0
    for x, y in itertools.product(SETTINGS, SETTINGS):
        exact = (1 - math.cos(angles_a[x] - angles_b[y])) / 4
        same = Fraction(exact).limit_denominator(cap)
        diff = Fraction(1, 2) - same
        if same < 0 or diff < 0:
            raise InputError("denominator cap too coarse: rounding produced a negative entry")
        err = max(err, abs(float(same) - exact))
        for a, b in itertools.product(OUTCOMES, OUTCOMES):
            p[(x, y, a, b)] = same if a == b else diff
    return BehaviorTable(p, meta={"cap": cap, "max_error": err})


def behavior_from_model(model, scen):
    """Exact ``p(a_o, b_o | a_s, b_s)`` from a model's measure.

    Setting value 0 is the setting event, 1 its complement; outcome +1 is
    the outcome event, -1 its complement.
    """
    if not scen.complete:
        raise InputError("scenario lacks setting/outcome events")

    def pick(e, v, first):
        return e if v == first else model.complement(e)

    p = {}
    for x, y, a, b in KEYS:
        ss = pick(scen.setting_a, x, 0) & pick(scen.setting_b, y, 0)
        w = model.weight(ss)
        if w == 0:
            raise InputError(f"setting pair ({x}, {y}) has probability zero")
        hit = ss & pick(scen.outcome_a, a, 1) & pick(scen.outcome_b, b, 1)
        p[(x, y, a, b)] = Fraction(model.weight(hit), w)
    return BehaviorTable(p)
