"""Exact linear feasibility ``{x ≥ 0 : A x = b}`` by rational simplex.

Two-phase simplex restricted to phase one, with Bland's rule so it always
terminates.  On infeasibility a Farkas certificate ``y`` is returned with
``yᵀA ≥ 0`` componentwise and ``yᵀb < 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class Feasible:
    x: tuple


@dataclass(frozen=True)
class Infeasible:
    certificate: tuple


def solve_feasibility(A, b):
    m = len(A)
    n = len(A[0]) if m else 0
    if any(len(row) != n for row in A) or len(b) != m:
        raise ValueError("inconsistent LP dimensions")
    sign = [1 if Fraction(bi) >= 0 else -1 for bi in b]
    # tableau columns: n structural, m artificial, then rhs
    T = []
    for i in range(m):
        row = [Fraction(sign[i] * a) for a in A[i]]
        row += [Fraction(int(i == k)) for k in range(m)]
        row.append(Fraction(sign[i] * Fraction(b[i])))
        T.append(row)
    basis = [n + i for i in range(m)]
    # reduced costs of phase one: cost 1 on artificials
    cost = [Fraction(0)] * n + [Fraction(1)] * m + [Fraction(0)]
    obj = list(cost)
    for i in range(m):
        obj = [o - t for o, t in zip(obj, T[i])]
    width = n + m
    while True:
        enter = next((j for j in range(width) if obj[j] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            # cannot happen in phase one (objective bounded below by 0)
            raise ArithmeticError("unbounded phase-one problem")
        piv = T[leave][enter]
        T[leave] = [v / piv if v else v for v in T[leave]]
        for i in range(m):
            if i != leave and T[i][enter]:
                f = T[i][enter]
                T[i] = [v - f * w if w else v for v, w in zip(T[i], T[leave])]
        f = obj[enter]
        obj = [v - f * w if w else v for v, w in zip(obj, T[leave])]
        basis[leave] = enter
    if -obj[-1] != 0:
        # dual of the phase-one optimum: y_i = 1 - reduced cost of artificial i
        y = [-(1 - obj[n + i]) * sign[i] for i in range(m)]
        return Infeasible(tuple(y))
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = T[i][-1]
    return Feasible(tuple(x))
