"""JSON model files: parsing, canonical serialization and content digests.

Top-level keys::

    points       list of point ids
    order        list of [before, after] pairs (closure taken on load)
    regions      name -> list of points
    slices       name -> {"lower": [...], "upper": [...]}
    histories    list of history ids
    generators   name -> {"event": [history ids], "home": region name}
    measure      history id -> "p/q"
    scenario     optional bindings, see ``SCENARIO_KEYS``
    partitions   optional list of region-name lists used by the separability suite
    name         optional label
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .causal import CausalSite, PastSelector, Region, make_slice
from .errors import InputError
from .locality import EPRBScenario
from .reports import frac_str
from .stochastic import Generator, Model, RegionUniverse

SCENARIO_KEYS = ("wing_a", "wing_b", "setting_a", "setting_b", "outcome_a", "outcome_b",
                 "past", "past_partition")
KNOWN_KEYS = {"points", "order", "regions", "slices", "histories", "generators", "measure",
              "scenario", "partitions", "name"}


def parse_past(model, text):
    """``mutual | joint | past-a | past-b | slice:<name> | srla:<name> | custom:<region>``."""
    kind, _, arg = str(text).partition(":")
    if kind in ("mutual", "joint", "past-a", "past-b") and not arg:
        return PastSelector(kind)
    if kind in ("slice", "srla") and arg:
        if arg not in model.slices:
            raise InputError(f"unknown slice {arg!r} in past selector")
        return PastSelector(kind, slice=model.slices[arg])
    if kind == "custom" and arg:
        return PastSelector.custom(model.universe[arg])
    raise InputError(f"bad past selector {text!r}")


@dataclass
class Document:
    """A model plus the optional scenario and partition bindings, all by name."""

    model: Model
    binding: dict | None = None
    partitions: list = field(default_factory=list)
    name: str | None = None
    meta: dict = field(default_factory=dict)

    @property
    def scenario(self):
        return self.scenario_with()

    def scenario_with(self, past=None):
        if self.binding is None:
            return None
        b, m = self.binding, self.model

        def ev(key):
            return m.generator(b[key]).event if b.get(key) else None

        part = None
        if b.get("past_partition"):
            pa, pb = b["past_partition"]
            part = (m.region(pa), m.region(pb))
        sel = parse_past(m, past if past is not None else b.get("past", "joint"))
        return EPRBScenario(m.region(b["wing_a"]), m.region(b["wing_b"]), ev("setting_a"),
                            ev("setting_b"), ev("outcome_a"), ev("outcome_b"), sel, part,
                            labels=tuple(b.get(k) or k for k in
                                         ("setting_a", "setting_b", "outcome_a", "outcome_b")))

    def partition_regions(self):
        """Declared partitions, or the single-point partition of the whole site."""
        if self.partitions:
            return [[self.model.region(n) for n in part] for part in self.partitions]
        site = self.model.site
        return [[Region(frozenset([p]), str(p)) for p in site.points]]

    def to_dict(self):
        m = self.model
        d = {
            "points": list(m.site.points),
            "order": [list(pair) for pair in m.site.covers()],
            "regions": {n: m.site.sorted(pts) for n, pts in m.universe.declared.items()},
            "slices": {n: {"lower": m.site.sorted(s.lower), "upper": m.site.sorted(s.upper)}
                       for n, s in m.slices.items()},
            "histories": list(m.histories),
            "generators": {g.name: {"event": list(m.members(g.event)), "home": _home_name(m, g)}
                           for g in m.generators},
            "measure": {h: frac_str(x) for h, x in zip(m.histories, m.measure)},
        }
        if self.binding is not None:
            d["scenario"] = {k: v for k, v in self.binding.items() if v is not None}
        if self.partitions:
            d["partitions"] = [list(p) for p in self.partitions]
        if self.name:
            d["name"] = self.name
        return d

    def canonical(self):
        return canonical_json(self.to_dict())

    def digest(self):
        return hashlib.sha256(self.canonical().encode()).hexdigest()


def _home_name(m, g):
    for name, pts in m.universe.declared.items():
        if pts == g.home.points:
            return name
    return m.universe.named(g.home).name


def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _need(d, key, kind):
    if key not in d:
        raise InputError(f"model file lacks {key!r}")
    if not isinstance(d[key], kind):
        raise InputError(f"{key!r} has the wrong type")
    return d[key]


def _fraction(text, where):
    if not isinstance(text, (str, int)) or isinstance(text, bool):
        raise InputError(f"{where}: probabilities must be 'p/q' strings")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"{where}: cannot parse rational {text!r}") from None


def from_dict(d):
    if not isinstance(d, dict):
        raise InputError("model file must hold a JSON object")
    unknown = set(d) - KNOWN_KEYS
    if unknown:
        raise InputError(f"unknown top-level keys: {', '.join(sorted(unknown))}")
    site = CausalSite(_need(d, "points", list), d.get("order", []))
    regions = d.get("regions", {})
    if not isinstance(regions, dict):
        raise InputError("'regions' must map names to point lists")
    universe = RegionUniverse(site, {n: site.region(pts, n).points for n, pts in regions.items()})
    slices = {}
    for n, s in d.get("slices", {}).items():
        try:
            slices[n] = make_slice(site, s["lower"], s["upper"], n)
        except (KeyError, TypeError):
            raise InputError(f"slice {n!r} needs 'lower' and 'upper'") from None
    histories = _need(d, "histories", list)
    index = {h: i for i, h in enumerate(histories)}
    gens = []
    for n, g in d.get("generators", {}).items():
        try:
            event, home = g["event"], g["home"]
        except (KeyError, TypeError):
            raise InputError(f"generator {n!r} needs 'event' and 'home'") from None
        mask = 0
        for h in event:
            if h not in index:
                raise InputError(f"generator {n!r} mentions unknown history {h!r}")
            mask |= 1 << index[h]
        gens.append(Generator(n, mask, universe[home]))
    measure = _need(d, "measure", dict)
    if set(measure) != set(histories):
        raise InputError("measure must list every history exactly once")
    model = Model(site, histories, universe, gens,
                  [_fraction(measure[h], f"measure[{h}]") for h in histories], slices)
    binding = d.get("scenario")
    if binding is not None:
        if not isinstance(binding, dict):
            raise InputError("'scenario' must be an object")
        extra = set(binding) - set(SCENARIO_KEYS)
        if extra:
            raise InputError(f"unknown scenario keys: {', '.join(sorted(extra))}")
        for k in ("wing_a", "wing_b"):
            if k not in binding:
                raise InputError(f"scenario lacks {k!r}")
    partitions = d.get("partitions", [])
    doc = Document(model, binding, [list(p) for p in partitions], d.get("name"))
    # resolve every cross-reference now so errors surface at load time
    doc.scenario
    doc.partition_regions()
    return doc


def loads(text):
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"not valid JSON: {exc}") from None
    return from_dict(d)


def load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)


def dump(doc, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(doc.to_dict(), sort_keys=True, indent=2, ensure_ascii=False))
        fh.write("\n")
