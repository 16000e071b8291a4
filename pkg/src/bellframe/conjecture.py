"""Search random models for a split between Bell and slice-block locality.

Among models that satisfy the localised-events axioms and screening by
every separating slice, Bell locality with the joint past and with the
slice block are conjectured to agree.  This module looks for finite
counterexamples; finding none proves nothing.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import asdict, dataclass, field

from .causal import blocks, spacelike
from .errors import InputError
from .gallery import random_model
from .locality import check_bell_locality, check_nouvelle_locality, check_srla_all
from .modelfile import Document, canonical_json
from .reports import FAIL
from .stochastic import check_localised_axioms

__test__ = False  # keep pytest from collecting test_equivalence_conjecture


@dataclass
class Counterexample:
    trial: int
    seed: str
    slice: str
    wing_a: str
    wing_b: str
    bell: str
    nouvelle: str
    digest: str


@dataclass
class ConjectureReport:
    seed: int
    trials: int
    caps: dict
    generated: int = 0
    axiom_failures: int = 0
    srla_failures: int = 0
    without_slice: int = 0
    survivors: int = 0
    unblocked: int = 0
    comparisons: int = 0
    counterexamples: list = field(default_factory=list)

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return canonical_json(self.to_dict())

    def summary(self):
        if not self.counterexamples:
            return f"no counterexample in {self.trials} trials"
        return f"{len(self.counterexamples)} counterexample(s) in {self.trials} trials"


def trial_seed(seed, i):
    return f"{seed}:{i}"


def _compare(doc, trial, seed, report, keep):
    m = doc.model
    regions = [r for r in m.universe if r.points]
    for name in sorted(m.slices):
        s = m.slices[name]
        for a, b in itertools.combinations(regions, 2):
            if not spacelike(m.site, a, b):
                continue
            if not blocks(m.site, s, a, b):
                report.unblocked += 1
                continue
            report.comparisons += 1
            bell = check_bell_locality(m, a, b).ok
            nouvelle = check_nouvelle_locality(m, a, b, s).ok
            if bell != nouvelle:
                witness = Document(m, {"wing_a": a.name, "wing_b": b.name,
                                       "past": f"slice:{name}"}, doc.partitions, doc.name)
                keep.append(witness)
                report.counterexamples.append(Counterexample(
                    trial, seed, name, a.name, b.name, "pass" if bell else "fail",
                    "pass" if nouvelle else "fail", witness.digest()))


def classify(doc):
    """Which filter a model falls to: ``axioms``, ``no_slice``, ``srla`` or ``survivor``."""
    if check_localised_axioms(doc.model).verdict == FAIL:
        return "axioms"
    if not doc.model.slices:
        return "no_slice"
    if check_srla_all(doc.model).verdict == FAIL:
        return "srla"
    return "survivor"


def test_equivalence_conjecture(seed, trials, max_points=6, max_histories=8, max_generators=4,
                                out_dir=None):
    """Run the search; counterexample model files go to ``out_dir`` when given."""
    if trials < 0:
        raise InputError("trials must be nonnegative")
    for cap in (max_points, max_histories):
        if cap < 1:
            raise InputError("caps must be at least 1")
    if max_generators < 0:
        raise InputError("generator cap must be nonnegative")
    caps = {"max_points": max_points, "max_histories": max_histories,
            "max_generators": max_generators}
    report = ConjectureReport(seed, trials, caps)
    keep = []
    for i in range(trials):
        ts = trial_seed(seed, i)
        doc = random_model(ts, max_points, max_histories, max_generators)
        report.generated += 1
        status = classify(doc)
        if status == "axioms":
            report.axiom_failures += 1
        elif status == "no_slice":
            report.without_slice += 1
        elif status == "srla":
            report.srla_failures += 1
        else:
            report.survivors += 1
            _compare(doc, i, ts, report, keep)
    if out_dir is not None and keep:
        os.makedirs(out_dir, exist_ok=True)
        for cx, doc in zip(report.counterexamples, keep):
            path = os.path.join(out_dir, f"counterexample-{cx.trial}-{cx.digest[:12]}.json")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(canonical_json(doc.to_dict()) + "\n")
    return report
