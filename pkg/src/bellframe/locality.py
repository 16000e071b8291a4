"""Conditional-independence conditions on EPRB-style scenarios.

Every checker returns a :class:`~bellframe.reports.CheckReport`.  Null
full specifications are skipped and counted; a check that evaluates no
defined conditional at all is ``vacuous`` rather than ``pass``.

Value conventions: the setting variable ``a_s`` ranges over the setting
event and its complement, labelled ``A_s`` and ``~A_s``; likewise for the
other three scenario events.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import kernels
from .causal import (JOINT_PAST, PastSelector, Region, Slice, precedes_entirely, resolve_past,
                     blocks, separates, spacelike, srla_region)
from .errors import InputError
from .reports import FAIL, PASS, VACUOUS, CheckReport, Witness, finish
from .stochastic import (Algebra, check_separability, generated_algebra, intrinsic_region,
                         nonseparable_generators, region_algebra)


@dataclass(frozen=True)
class EPRBScenario:
    """Two wings with their setting and outcome events and a past selector.

    The events are bitmasks; any of them may be ``None`` for scenarios that
    only need the wings (screening checks on bare region pairs).
    """

    wing_a: Region
    wing_b: Region
    setting_a: int | None = None
    setting_b: int | None = None
    outcome_a: int | None = None
    outcome_b: int | None = None
    past: PastSelector = JOINT_PAST
    past_partition: tuple | None = None
    labels: tuple = ("A_s", "B_s", "A_o", "B_o")

    @property
    def complete(self):
        return None not in (self.setting_a, self.setting_b, self.outcome_a, self.outcome_b)

    def with_past(self, past):
        return EPRBScenario(self.wing_a, self.wing_b, self.setting_a, self.setting_b,
                            self.outcome_a, self.outcome_b, past, self.past_partition, self.labels)


def validate_scenario(model, scen, require_spacelike=None):
    """Operational consistency: each wing's events belong to that wing's algebra."""
    if not scen.complete:
        raise InputError("scenario lacks setting/outcome events")
    if require_spacelike is None:
        require_spacelike = scen.past.needs_spacelike
    if require_spacelike and not spacelike(model.site, scen.wing_a, scen.wing_b):
        raise InputError("scenario wings are not spacelike")
    sa, sb = region_algebra(model, scen.wing_a), region_algebra(model, scen.wing_b)
    la, lb, loa, lob = scen.labels
    for label, alg, e in ((la, sa, scen.setting_a), (loa, sa, scen.outcome_a),
                          (lb, sb, scen.setting_b), (lob, sb, scen.outcome_b)):
        if not alg.contains(e):
            raise InputError(f"event {label} is not in the algebra of its wing")


def _values(model, event, label):
    return ((label, event), ("~" + label, model.complement(event)))


def _lambdas(model, scen):
    past = resolve_past(model.site, scen.wing_a, scen.wing_b, scen.past)
    return region_algebra(model, past).atoms, past


def _p(model, e):
    return Fraction(model.weight(e), model.denominator)


def _c(model, e, given):
    return Fraction(model.weight(e & given), model.weight(given))


# -- screening conditions ---------------------------------------------------

def _screening(model, condition, conds, a_alg, b_alg, notes=()):
    violations, nulls = kernels.screen(model.weights, list(conds), list(a_alg.atoms),
                                       list(b_alg.atoms))
    witnesses = []
    for ci, li, ri, wj, wl, wr, wc in violations:
        witnesses.append(Witness(
            "screening", Fraction(wj, wc), Fraction(wl, wc) * Fraction(wr, wc),
            atom=model.members(conds[ci]),
            assignment=(model.members(a_alg.atoms[li]), model.members(b_alg.atoms[ri]))))
    return finish(condition, witnesses, evaluated=len(conds) - nulls, nulls=nulls, notes=notes)


def check_bell_locality(model, a, b, sel=JOINT_PAST):
    """Every atom pair of Σ(a)×Σ(b) is independent given each past full specification."""
    past = resolve_past(model.site, a, b, sel)
    conds = region_algebra(model, past).atoms
    return _screening(model, "bell_locality", conds, region_algebra(model, a),
                      region_algebra(model, b),
                      notes=[f"past {sel.label} = {model.universe.named(past).label}"])


def check_nouvelle_locality(model, a, b, s: Slice):
    rep = check_bell_locality(model, a, b, PastSelector.slice_block(s))
    rep.condition = "nouvelle_locality"
    return rep


def check_srla(model, x, y, s: Slice):
    """Atoms of Σ(x), Σ(y) independent given full specifications of the interposed slice region."""
    if not precedes_entirely(model.site, x, y):
        # srla_region raises with the offending point
        srla_region(model.site, x, y, s)
        raise InputError("first region does not lie entirely in the past of the second")
    between = srla_region(model.site, x, y, s)
    conds = region_algebra(model, between).atoms
    return _screening(model, "srla", conds, region_algebra(model, x), region_algebra(model, y),
                      notes=[f"interposed region {model.universe.named(between).label}"])


def check_bell_locality_weakened(model, a, b, sel=JOINT_PAST):
    """Bell locality with extra conditioning on non-separable events that straddle the past.

    The conditioning algebra is generated by the past full specifications
    together with every non-separable generator event whose intrinsic
    region meets the past region without lying inside it.
    """
    past = resolve_past(model.site, a, b, sel)
    extra = []
    for g in nonseparable_generators(model):
        home = intrinsic_region(model, g.event)
        if not home.isdisjoint(past) and not home <= past:
            extra.append(g)
    alg = region_algebra(model, past)
    if extra:
        alg = alg.join(generated_algebra(model, [g.event for g in extra]))
    notes = [f"extra conditioning on {', '.join(g.name for g in extra) or 'nothing'}"]
    rep = _screening(model, "bell_locality_weakened", alg.atoms, region_algebra(model, a),
                     region_algebra(model, b), notes=notes)
    return rep


def merge_reports(condition, reports, notes=()):
    """One report for a family of checks: fail if any fails, vacuous if all are."""
    reports = list(reports)
    witnesses = [w for r in reports for w in r.witnesses]
    evaluated = sum(r.verdict != VACUOUS for r in reports)
    nulls = sum(r.vacuous_atoms for r in reports)
    return finish(condition, witnesses, evaluated, nulls,
                  notes=list(notes) + [n for r in reports for n in r.notes])


def srla_triples(model):
    """Every ``(x, y, slice)`` with universe regions ``x``, ``y`` that the slice separates."""
    regions = [r for r in model.universe if r.points]
    for name in sorted(model.slices):
        s = model.slices[name]
        for x, y in itertools.permutations(regions, 2):
            if separates(model.site, s, x, y):
                yield x, y, s


def check_srla_all(model):
    reports = []
    for x, y, s in srla_triples(model):
        r = check_srla(model, x, y, s)
        for w in r.witnesses:
            w.regions = (x.label, y.label, s.name or "slice")
        reports.append(r)
    rep = merge_reports("srla", reports, notes=[f"{len(reports)} separated region pairs"])
    return rep


def check_nouvelle_all(model, a, b):
    reports = []
    for name in sorted(model.slices):
        r = check_nouvelle_locality(model, a, b, model.slices[name])
        if not blocks(model.site, model.slices[name], a, b):
            r.notes.append(f"slice {name} does not block both backward light cones")
        for w in r.witnesses:
            w.regions = (name,)
        reports.append(r)
    return merge_reports("nouvelle_locality", reports)


# -- EPRB conditions --------------------------------------------------------

def check_freedom_of_settings(model, scen):
    validate_scenario(model, scen)
    lams, _ = _lambdas(model, scen)
    la, lb, _, _ = scen.labels
    witnesses, nulls, evaluated = [], 0, 0
    notes = []
    for lam in lams:
        if model.weight(lam) == 0:
            nulls += 1
            continue
        evaluated += 1
        for (na, sa), (nb, sb) in itertools.product(_values(model, scen.setting_a, la),
                                                    _values(model, scen.setting_b, lb)):
            lhs, rhs = _c(model, sa & sb, lam), _p(model, sa & sb)
            if lhs != rhs:
                witnesses.append(Witness("freedom", lhs, rhs, atom=model.members(lam),
                                         assignment=(na, nb)))
    for label, e in ((la, scen.setting_a), (lb, scen.setting_b)):
        if model.weight(e) in (0, model.denominator):
            notes.append(f"setting {label} is degenerate (probability {_p(model, e)})")
    return finish("freedom_of_settings", witnesses, evaluated, nulls, notes=notes)


def _assignments(model, scen):
    la, lb, loa, lob = scen.labels
    return (_values(model, scen.setting_a, la), _values(model, scen.setting_b, lb),
            _values(model, scen.outcome_a, loa), _values(model, scen.outcome_b, lob))


def _factorisability_at(model, scen, lam, witnesses=None):
    """Factorisability at one full specification; returns (holds, evaluated)."""
    sas, sbs, oas, obs = _assignments(model, scen)
    ok, evaluated = True, 0
    for (na, sa), (nb, sb) in itertools.product(sas, sbs):
        ss = sa & sb & lam
        if model.weight(ss) == 0:
            continue
        for (noa, oa), (nob, ob) in itertools.product(oas, obs):
            evaluated += 1
            lhs = _c(model, oa & ob, ss)
            rhs = _c(model, oa, sa & lam) * _c(model, ob, sb & lam)
            if lhs != rhs:
                ok = False
                if witnesses is not None:
                    witnesses.append(Witness("factorisability", lhs, rhs, atom=model.members(lam),
                                             assignment=(na, nb, noa, nob)))
    return ok, evaluated


def check_factorisability(model, scen):
    validate_scenario(model, scen)
    lams, _ = _lambdas(model, scen)
    witnesses, nulls, evaluated = [], 0, 0
    for lam in lams:
        if model.weight(lam) == 0:
            nulls += 1
            continue
        evaluated += _factorisability_at(model, scen, lam, witnesses)[1]
    return finish("factorisability", witnesses, evaluated, nulls)


def verify_derivation_chain(model, scen):
    """Re-derive factorisability step by step from Bell locality and freedom of settings.

    Both premises must pass.  A failing clause means a bug in this package,
    not a property of the model.
    """
    bell = check_bell_locality(model, scen.wing_a, scen.wing_b, scen.past)
    if bell.verdict == FAIL:
        raise InputError("derivation chain needs Bell locality, which fails for this scenario")
    free = check_freedom_of_settings(model, scen)
    if free.verdict == FAIL:
        raise InputError("derivation chain needs freedom of settings, which fails for this scenario")
    lams, _ = _lambdas(model, scen)
    sas, sbs, oas, obs = _assignments(model, scen)
    names = ("joint_screening", "settings_product", "settings_marginal", "joint_decomposition",
             "wing_a_decomposition", "wing_b_decomposition", "factorisability")
    bad = {n: [] for n in names}
    nulls, evaluated = 0, 0

    def record(clause, lhs, rhs, lam, assignment):
        if lhs != rhs:
            bad[clause].append(Witness(clause, lhs, rhs, atom=model.members(lam),
                                       assignment=assignment))

    for lam in lams:
        if model.weight(lam) == 0:
            nulls += 1
            continue
        evaluated += 1
        for (na, sa), (nb, sb) in itertools.product(sas, sbs):
            record("settings_product", _c(model, sa & sb, lam),
                   _c(model, sa, lam) * _c(model, sb, lam), lam, (na, nb))
            record("settings_marginal", _c(model, sa, lam) * _c(model, sb, lam),
                   _p(model, sa) * _p(model, sb), lam, (na, nb))
            for (noa, oa), (nob, ob) in itertools.product(oas, obs):
                asg = (na, nb, noa, nob)
                joint = _c(model, oa & sa & ob & sb, lam)
                record("joint_screening", joint,
                       _c(model, oa & sa, lam) * _c(model, ob & sb, lam), lam, asg)
                ss = sa & sb & lam
                if model.weight(ss):
                    record("joint_decomposition", joint,
                           _c(model, oa & ob, ss) * _p(model, sa) * _p(model, sb), lam, asg)
                if model.weight(sa & lam):
                    record("wing_a_decomposition", _c(model, oa & sa, lam),
                           _c(model, oa, sa & lam) * _p(model, sa), lam, asg)
                if model.weight(sb & lam):
                    record("wing_b_decomposition", _c(model, ob & sb, lam),
                           _c(model, ob, sb & lam) * _p(model, sb), lam, asg)
        _factorisability_at(model, scen, lam, bad["factorisability"])
    clauses = {n: (FAIL if bad[n] else PASS) for n in names}
    witnesses = [w for n in names for w in bad[n]]
    rep = finish("derivation_chain", witnesses, evaluated, nulls, clauses=clauses,
                 notes=["internal-consistency suite: a failure indicates an implementation bug"])
    return rep


def _setting_pairs(model, scen):
    sas, sbs, _, _ = _assignments(model, scen)
    for (na, sa), (nb, sb) in itertools.product(sas, sbs):
        if model.weight(sa & sb) == 0:
            raise InputError(f"setting pair ({na}, {nb}) has probability zero")
    return sas, sbs


def check_no_signalling(model, scen):
    validate_scenario(model, scen, require_spacelike=False)
    sas, sbs = _setting_pairs(model, scen)
    _, _, oas, obs = _assignments(model, scen)
    witnesses, evaluated = [], 0
    for (na, sa), (nb, sb) in itertools.product(sas, sbs):
        for noa, oa in oas:
            evaluated += 1
            lhs, rhs = _c(model, oa, sa & sb), _c(model, oa, sa)
            if lhs != rhs:
                witnesses.append(Witness("no_signalling_a", lhs, rhs, assignment=(na, nb, noa)))
        for nob, ob in obs:
            evaluated += 1
            lhs, rhs = _c(model, ob, sa & sb), _c(model, ob, sb)
            if lhs != rhs:
                witnesses.append(Witness("no_signalling_b", lhs, rhs, assignment=(na, nb, nob)))
    return finish("no_signalling", witnesses, evaluated)


def _outcome_independence_at(model, scen, lam, witnesses=None):
    sas, sbs, oas, obs = _assignments(model, scen)
    ok, evaluated = True, 0
    for (na, sa), (nb, sb) in itertools.product(sas, sbs):
        ss = sa & sb & lam
        if model.weight(ss) == 0:
            continue
        for (noa, oa), (nob, ob) in itertools.product(oas, obs):
            for clause, target, given, asg in (
                    ("outcome_independence_a", oa, ob, (na, nb, noa, nob)),
                    ("outcome_independence_b", ob, oa, (na, nb, nob, noa))):
                if model.weight(ss & given) == 0:
                    continue
                evaluated += 1
                lhs, rhs = _c(model, target, ss & given), _c(model, target, ss)
                if lhs != rhs:
                    ok = False
                    if witnesses is not None:
                        witnesses.append(Witness(clause, lhs, rhs, atom=model.members(lam),
                                                 assignment=asg))
    return ok, evaluated


def _parameter_independence_at(model, scen, lam, witnesses=None):
    sas, sbs, oas, obs = _assignments(model, scen)
    ok, evaluated = True, 0
    for (na, sa), (nb, sb) in itertools.product(sas, sbs):
        ss = sa & sb & lam
        if model.weight(ss) == 0:
            continue
        for clause, outs, local, asg in (("parameter_independence_a", oas, sa, (na, nb)),
                                         ("parameter_independence_b", obs, sb, (na, nb))):
            for no, o in outs:
                evaluated += 1
                lhs, rhs = _c(model, o, ss), _c(model, o, local & lam)
                if lhs != rhs:
                    ok = False
                    if witnesses is not None:
                        witnesses.append(Witness(clause, lhs, rhs, atom=model.members(lam),
                                                 assignment=asg + (no,)))
    return ok, evaluated


def _per_lambda(model, scen, name, fn):
    validate_scenario(model, scen)
    lams, _ = _lambdas(model, scen)
    witnesses, nulls, evaluated = [], 0, 0
    for lam in lams:
        if model.weight(lam) == 0:
            nulls += 1
            continue
        evaluated += fn(model, scen, lam, witnesses)[1]
    return finish(name, witnesses, evaluated, nulls)


def check_outcome_independence(model, scen):
    return _per_lambda(model, scen, "outcome_independence", _outcome_independence_at)


def check_parameter_independence(model, scen):
    return _per_lambda(model, scen, "parameter_independence", _parameter_independence_at)


def _joint_screening_at(model, scen, lam):
    sas, sbs, oas, obs = _assignments(model, scen)
    for (_, sa), (_, sb), (_, oa), (_, ob) in itertools.product(sas, sbs, oas, obs):
        if _c(model, oa & sa & ob & sb, lam) != _c(model, oa & sa, lam) * _c(model, ob & sb, lam):
            return False
    return True


def settings_independent(model, scen):
    sa, sb = scen.setting_a, scen.setting_b
    return model.weight(sa & sb) * model.denominator == model.weight(sa) * model.weight(sb)


def check_jarrett_decomposition(model, scen):
    """At every full specification: joint screening holds iff outcome and
    parameter independence both hold.

    Requires freedom of settings, and settings independent of each other
    (freedom plus joint screening forces that, so without it the left side
    is false everywhere and the equivalence says nothing).
    """
    free = check_freedom_of_settings(model, scen)
    if free.verdict == FAIL:
        raise InputError("Jarrett decomposition needs freedom of settings, which fails")
    if not settings_independent(model, scen):
        raise InputError("Jarrett decomposition needs the two settings to be independent")
    lams, _ = _lambdas(model, scen)
    witnesses, nulls, evaluated = [], 0, 0
    both = {"joint_screening": 0, "oi_and_pi": 0}
    for lam in lams:
        if model.weight(lam) == 0:
            nulls += 1
            continue
        evaluated += 1
        left = _joint_screening_at(model, scen, lam)
        right = (_outcome_independence_at(model, scen, lam)[0]
                 and _parameter_independence_at(model, scen, lam)[0])
        both["joint_screening"] += left
        both["oi_and_pi"] += right
        if left != right:
            witnesses.append(Witness("jarrett_biconditional", Fraction(int(left)),
                                     Fraction(int(right)), atom=model.members(lam)))
    notes = [f"joint screening holds at {both['joint_screening']} of {evaluated} atoms; "
             f"outcome and parameter independence at {both['oi_and_pi']}"]
    return finish("jarrett_decomposition", witnesses, evaluated, nulls, notes=notes)


def jarrett_sides(model, scen):
    """Per-atom truth values ``(joint screening, OI, PI)`` for non-null atoms."""
    lams, _ = _lambdas(model, scen)
    return [(lam, _joint_screening_at(model, scen, lam),
             _outcome_independence_at(model, scen, lam)[0],
             _parameter_independence_at(model, scen, lam)[0])
            for lam in lams if model.weight(lam)]


# -- separability of states -------------------------------------------------

@dataclass(frozen=True)
class HowardStates:
    alpha: int
    beta: int


def howard_states(model, scen):
    """Map each past atom to the pair of wing-past atoms containing it."""
    if scen.past_partition is None:
        raise InputError("separability of states needs a declared past partition")
    pa, pb = scen.past_partition
    _, past = _lambdas(model, scen)
    if not pa.isdisjoint(pb):
        raise InputError("past partition parts overlap")
    if (pa | pb).points != past.points:
        raise InputError("past partition does not cover the resolved past region")
    lams = region_algebra(model, past).atoms
    alphas, betas = region_algebra(model, pa).atoms, region_algebra(model, pb).atoms
    out = {}
    for lam in lams:
        alpha = next(a for a in alphas if lam & a == lam)
        beta = next(b for b in betas if lam & b == lam)
        out[lam] = HowardStates(alpha, beta)
    return out


def _state_conditionals(model, scen, states, side):
    """Conditionals of one wing's outcome given settings and λ, grouped by that wing's state.

    Returns ``(table, witnesses)`` where ``table[state][(na, nb, no)]`` is the
    common value, or the first value seen when states disagree.
    """
    sas, sbs, oas, obs = _assignments(model, scen)
    outs = oas if side == "a" else obs
    table, witnesses = {}, []
    for lam, st in states.items():
        if model.weight(lam) == 0:
            continue
        key = st.alpha if side == "a" else st.beta
        row = table.setdefault(key, {})
        for (na, sa), (nb, sb) in itertools.product(sas, sbs):
            ss = sa & sb & lam
            if model.weight(ss) == 0:
                continue
            for no, o in outs:
                v = _c(model, o, ss)
                k = (na, nb, no)
                if k in row and row[k][0] != v:
                    witnesses.append(Witness(f"state_well_defined_{side}", v, row[k][0],
                                             atom=model.members(lam), assignment=k,
                                             event=model.members(key)))
                else:
                    row.setdefault(k, (v, lam))
    return table, witnesses


def check_howard_separability_of_states(model, scen):
    """Wing states must be well defined and the joint conditional must factor through them."""
    validate_scenario(model, scen)
    states = howard_states(model, scen)
    ta, wa = _state_conditionals(model, scen, states, "a")
    tb, wb = _state_conditionals(model, scen, states, "b")
    sas, sbs, oas, obs = _assignments(model, scen)
    wf, nulls, evaluated = [], 0, 0
    for lam, st in states.items():
        if model.weight(lam) == 0:
            nulls += 1
            continue
        for (na, sa), (nb, sb) in itertools.product(sas, sbs):
            ss = sa & sb & lam
            if model.weight(ss) == 0:
                continue
            for (noa, oa), (nob, ob) in itertools.product(oas, obs):
                evaluated += 1
                lhs = _c(model, oa & ob, ss)
                rhs = ta[st.alpha][(na, nb, noa)][0] * tb[st.beta][(na, nb, nob)][0]
                if lhs != rhs:
                    wf.append(Witness("state_factorisation", lhs, rhs, atom=model.members(lam),
                                      assignment=(na, nb, noa, nob)))
    clauses = {"state_well_defined_a": FAIL if wa else PASS,
               "state_well_defined_b": FAIL if wb else PASS,
               "state_factorisation": FAIL if wf else PASS}
    notes = []
    if wa or wb:
        notes.append("wing states are not well defined; the factorisation clause then uses "
                     "the first conditional seen for each state")
    return finish("separability_of_states", wa + wb + wf, evaluated, nulls, clauses=clauses,
                  notes=notes)


def howard_vs_outcome_independence(model, scen):
    """Per-atom pairs ``(state factorisation holds, outcome independence holds)``.

    Only meaningful where the wing states are well defined; returns ``None``
    otherwise.
    """
    states = howard_states(model, scen)
    ta, wa = _state_conditionals(model, scen, states, "a")
    tb, wb = _state_conditionals(model, scen, states, "b")
    if wa or wb:
        return None
    sas, sbs, oas, obs = _assignments(model, scen)
    out = []
    for lam, st in states.items():
        if model.weight(lam) == 0:
            continue
        ok = True
        for (na, sa), (nb, sb) in itertools.product(sas, sbs):
            ss = sa & sb & lam
            if model.weight(ss) == 0:
                continue
            for (noa, oa), (nob, ob) in itertools.product(oas, obs):
                if _c(model, oa & ob, ss) != (ta[st.alpha][(na, nb, noa)][0]
                                              * tb[st.beta][(na, nb, nob)][0]):
                    ok = False
        out.append((lam, ok, _outcome_independence_at(model, scen, lam)[0]))
    return out


__all__ = [
    "EPRBScenario", "HowardStates", "validate_scenario", "check_bell_locality",
    "check_nouvelle_locality", "check_srla", "check_bell_locality_weakened",
    "check_freedom_of_settings", "check_factorisability", "verify_derivation_chain",
    "check_no_signalling", "check_outcome_independence", "check_parameter_independence",
    "check_jarrett_decomposition", "check_howard_separability_of_states", "howard_states",
    "howard_vs_outcome_independence", "jarrett_sides", "settings_independent",
    "check_separability", "merge_reports", "srla_triples", "check_srla_all",
    "check_nouvelle_all",
]
