"""Named groups of checks run against a :class:`~bellframe.modelfile.Document`."""

from __future__ import annotations

from .errors import InputError
from .locality import (check_bell_locality, check_bell_locality_weakened, check_factorisability,
                       check_freedom_of_settings, check_howard_separability_of_states,
                       check_jarrett_decomposition, check_no_signalling, check_nouvelle_all,
                       check_outcome_independence, check_parameter_independence, check_srla_all,
                       merge_reports, verify_derivation_chain)
from .polytope import behavior_from_model, chsh_value, lhv_membership
from .reports import FAIL, PASS, VACUOUS
from .stochastic import check_localised_axioms, check_separability

SUITES = ("all", "axioms", "separability", "bell", "freedom", "factorisability", "nosignal",
          "jarrett", "howard", "srla", "nouvelle", "weakened")


def _wings(doc, past):
    scen = doc.scenario_with(past)
    if scen is None:
        raise InputError("model declares no scenario")
    return scen


def _complete(doc, past):
    scen = _wings(doc, past)
    if not scen.complete:
        raise InputError("scenario lacks setting/outcome bindings")
    return scen


def _axioms(doc, past):
    return [check_localised_axioms(doc.model)]


def _separability(doc, past):
    reps = [check_separability(doc.model, parts) for parts in doc.partition_regions()]
    return [merge_reports("separability", reps)]


def _bell(doc, past):
    s = _wings(doc, past)
    return [check_bell_locality(doc.model, s.wing_a, s.wing_b, s.past)]


def _freedom(doc, past):
    return [check_freedom_of_settings(doc.model, _complete(doc, past))]


def _factorisability(doc, past):
    scen = _complete(doc, past)
    out = [check_factorisability(doc.model, scen)]
    try:
        out.append(verify_derivation_chain(doc.model, scen))
    except InputError:
        pass
    return out


def _nosignal(doc, past):
    return [check_no_signalling(doc.model, _complete(doc, past))]


def _jarrett(doc, past):
    scen = _complete(doc, past)
    out = [check_outcome_independence(doc.model, scen),
           check_parameter_independence(doc.model, scen)]
    try:
        out.append(check_jarrett_decomposition(doc.model, scen))
    except InputError:
        pass
    return out


def _howard(doc, past):
    return [check_howard_separability_of_states(doc.model, _complete(doc, past))]


def _srla(doc, past):
    if not doc.model.slices:
        raise InputError("model declares no slices")
    return [check_srla_all(doc.model)]


def _nouvelle(doc, past):
    if not doc.model.slices:
        raise InputError("model declares no slices")
    s = _wings(doc, past)
    return [check_nouvelle_all(doc.model, s.wing_a, s.wing_b)]


def _weakened(doc, past):
    s = _wings(doc, past)
    return [check_bell_locality_weakened(doc.model, s.wing_a, s.wing_b, s.past)]


RUNNERS = {
    "axioms": _axioms, "separability": _separability, "bell": _bell, "freedom": _freedom,
    "factorisability": _factorisability, "nosignal": _nosignal, "jarrett": _jarrett,
    "howard": _howard, "srla": _srla, "nouvelle": _nouvelle, "weakened": _weakened,
}


def run_suite(doc, suite="all", past=None):
    """Return ``(reports, skipped)``.

    A named suite that does not apply raises :class:`InputError`; under
    ``all`` inapplicable suites are listed in ``skipped`` with the reason.
    """
    if suite not in SUITES:
        raise InputError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    if suite != "all":
        return RUNNERS[suite](doc, past), []
    reports, skipped = [], []
    for name, run in RUNNERS.items():
        try:
            reports.extend(run(doc, past))
        except InputError as exc:
            skipped.append((name, str(exc)))
    return reports, skipped


def chsh_summary(doc, past=None):
    """CHSH value and local-polytope verdict of the scenario's behaviour table."""
    table = behavior_from_model(doc.model, _complete(doc, past))
    return table, chsh_value(table), lhv_membership(table)


def verdict_matrix(doc):
    """Condition -> verdict for the ``all`` suite, plus the CHSH value when defined."""
    reports, _ = run_suite(doc)
    matrix = {r.condition: r.verdict for r in reports}
    try:
        _, (value, _), _ = chsh_summary(doc)
        matrix["chsh"] = f"{value.numerator}/{value.denominator}"
    except InputError:
        pass
    return matrix


def overall(reports):
    if any(r.verdict == FAIL for r in reports):
        return FAIL
    if all(r.verdict == VACUOUS for r in reports):
        return VACUOUS
    return PASS
