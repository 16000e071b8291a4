"""Named models and seeded random model generators.

Each :class:`GalleryEntry` carries the verdict matrix its model is expected
to reproduce under :func:`bellframe.suites.verdict_matrix`, together with a
one-line description of the situation it illustrates.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .causal import CausalSite, make_slice
from .errors import InputError
from .modelfile import Document
from .polytope import singlet_table
from .stochastic import Generator, Model, RegionUniverse

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)


class ModelBuilder:
    """Build a model whose histories are all joint values of named variables.

    Variables are independent with the given distributions; generators are
    predicates over the variable values, homed at named regions.  Setting
    events are "variable == 0" and outcome events "variable == 1" by
    convention of the callers below.
    """

    def __init__(self, points, order=()):
        self.site = CausalSite(points, order)
        self.regions = {}
        self.variables = []
        self.generators = []
        self.slices = {}
        self.binding = None
        self.partitions = []

    def region(self, name, points):
        self.regions[name] = frozenset(points)
        return self

    def variable(self, name, p_one=HALF):
        """Binary variable taking value 1 with probability ``p_one``."""
        p_one = Fraction(p_one)
        dist = [(v, q) for v, q in ((0, 1 - p_one), (1, p_one)) if q]
        self.variables.append((name, dist))
        return self

    def generator(self, name, home, predicate):
        self.generators.append((name, home, predicate))
        return self

    def slice(self, name, lower, upper):
        self.slices[name] = (lower, upper)
        return self

    def scenario(self, **binding):
        self.binding = binding
        return self

    def partition(self, *names):
        self.partitions.append(list(names))
        return self

    def _histories(self):
        names = [n for n, _ in self.variables]
        for combo in itertools.product(*(d for _, d in self.variables)):
            values = dict(zip(names, (v for v, _ in combo)))
            prob = math.prod((q for _, q in combo), start=Fraction(1))
            yield "h" + "".join(str(v) for v, _ in combo), values, prob

    def build(self, name=None):
        hist = list(self._histories())
        universe = RegionUniverse(self.site, dict(self.regions))
        gens = []
        for gname, home, pred in self.generators:
            mask = 0
            for i, (_, values, _) in enumerate(hist):
                if pred(values):
                    mask |= 1 << i
            gens.append(Generator(gname, mask, universe[home]))
        slices = {n: make_slice(self.site, lo, up, n) for n, (lo, up) in self.slices.items()}
        model = Model(self.site, [h for h, _, _ in hist], universe, gens, [p for _, _, p in hist],
                      slices)
        return Document(model, self.binding, self.partitions, name)


def _v(name, value=1):
    return lambda v: v[name] == value


# -- named models -----------------------------------------------------------

def nonseparable_minimal():
    """One event X spread over a region with disjoint parts; no part carries it."""
    b = ModelBuilder(["x1", "x2", "x3", "y"])
    b.region("X", ["x1", "x2", "x3"]).region("X1", ["x1"]).region("X23", ["x2", "x3"])
    b.region("Y", ["y"])
    b.variable("x")
    b.generator("X", "X", _v("x"))
    b.partition("X1", "X23")
    return b.build("nonseparable_minimal")


def _eprb_points(extra_past=()):
    pts = ["c", "a", "b", *extra_past]
    order = [("c", "a"), ("c", "b")]
    return pts, order


def _wings(b):
    b.region("A", ["a"]).region("B", ["b"])


def _bind(b, **extra):
    b.scenario(wing_a="A", wing_b="B", setting_a="As", setting_b="Bs", outcome_a="Ao",
               outcome_b="Bo", **extra)


def _settings(b):
    b.variable("as").variable("bs")
    b.generator("As", "A", _v("as", 0)).generator("Bs", "B", _v("bs", 0))


def deterministic_common_cause():
    """A binary past cause fixes each outcome together with the local setting."""
    pts, order = _eprb_points()
    b = ModelBuilder(pts, order)
    _wings(b)
    b.region("C", ["c"])
    b.variable("lam")
    _settings(b)
    b.generator("L", "C", _v("lam"))
    b.generator("Ao", "A", lambda v: v["as"] == 1 or v["lam"] == 1)
    b.generator("Bo", "B", lambda v: v["bs"] == 1 or v["lam"] == 1)
    _bind(b)
    return b.build("deterministic_common_cause")


def pr_box():
    """Maximal no-signalling correlations over a past with no events."""
    b = ModelBuilder(["p", "a", "b"], [("p", "a"), ("p", "b")])
    _wings(b)
    b.region("P", ["p"])
    _settings(b)
    b.variable("r")
    b.generator("Ao", "A", _v("r"))
    b.generator("Bo", "B", lambda v: (v["r"] == 1) != (v["as"] == 1 and v["bs"] == 1))
    _bind(b)
    return b.build("pr_box")


def pilot_wave_like():
    """Outcomes fixed by the cause and both settings; the distant setting is hidden in the marginals."""
    pts, order = _eprb_points()
    b = ModelBuilder(pts, order)
    _wings(b)
    b.region("C", ["c"])
    b.variable("l1").variable("l2")
    _settings(b)
    b.generator("L1", "C", _v("l1")).generator("L2", "C", _v("l2"))
    # each outcome reports l1, except that A with setting 1 and B with setting 1
    # report l2; a one-bit cause would let the wings jointly reveal it
    b.generator("Ao", "A", lambda v: v["l2"] == 1 if v["as"] == 1 and v["bs"] == 1
                else v["l1"] == 1)
    b.generator("Bo", "B", lambda v: v["l2"] == 1 if v["bs"] == 1 else v["l1"] == 1)
    _bind(b)
    return b.build("pilot_wave_like")


def backyard_pingpong():
    """A fires a ball that B catches; every event sits at a single point."""
    b = ModelBuilder(["pa", "pb", "a", "m", "b"],
                     [("pa", "a"), ("a", "m"), ("m", "b"), ("pb", "b")])
    _wings(b)
    b.region("PA", ["pa"]).region("PB", ["pb"]).region("M", ["m"]).region("P", ["pa", "pb"])
    b.variable("ka").variable("kb")
    _settings(b)
    b.variable("ao").variable("jam", QUARTER).variable("nz", QUARTER)
    b.generator("KA", "PA", _v("ka")).generator("KB", "PB", _v("kb"))
    b.generator("Ao", "A", _v("ao"))
    b.generator("Mid", "M", lambda v: v["ao"] == 1 and v["jam"] == 0)
    b.generator("Bo", "B", lambda v: (v["ao"] == 1 and v["jam"] == 0) or v["nz"] == 1)
    _bind(b, past="custom:P", past_partition=["PA", "PB"])
    b.partition("A", "B")
    b.partition("PA", "PB")
    return b.build("backyard_pingpong")


def maudlin_bare_correlation():
    """Correlated outcomes with nothing at all happening in the past."""
    b = ModelBuilder(["pa", "pb", "a", "b"], [("pa", "a"), ("pb", "b")])
    _wings(b)
    b.region("PA", ["pa"]).region("PB", ["pb"])
    _settings(b)
    b.variable("ao").variable("flip", QUARTER)
    b.generator("Ao", "A", _v("ao"))
    b.generator("Bo", "B", lambda v: (v["ao"] == 1) != (v["flip"] == 1))
    _bind(b, past_partition=["PA", "PB"])
    b.partition("PA", "PB")
    return b.build("maudlin_bare_correlation")


def weakened_locality_signalling():
    """A non-separable event on C, partly after A and partly before B, carries A's setting to B."""
    b = ModelBuilder(["p", "a", "b", "c1", "c2"],
                     [("p", "a"), ("p", "b"), ("a", "c1"), ("c2", "b")])
    _wings(b)
    b.region("C", ["c1", "c2"]).region("C1", ["c1"]).region("C2", ["c2"]).region("P", ["p"])
    _settings(b)
    b.variable("ao").variable("xi", QUARTER).variable("eta", QUARTER)
    b.generator("Ao", "A", _v("ao"))
    b.generator("N", "C", lambda v: v["as"] == 0 and v["xi"] == 0)
    b.generator("Bo", "B", lambda v: (v["as"] == 0 and v["xi"] == 0) or v["eta"] == 1)
    _bind(b)
    b.partition("C1", "C2")
    return b.build("weakened_locality_signalling")


def simpsons_slice():
    """An event spanning the slice keeps the slice from screening the wings."""
    b = ModelBuilder(["p", "s1", "s2", "q", "a", "b"],
                     [("p", "s1"), ("p", "s2"), ("s1", "q"), ("q", "a"), ("s2", "b")])
    _wings(b)
    b.region("P", ["p"]).region("Q", ["q"]).region("PQ", ["p", "q"]).region("S", ["s1", "s2"])
    b.variable("lam").variable("nk", QUARTER).variable("na", QUARTER).variable("nb", QUARTER)
    b.generator("L", "P", _v("lam"))
    b.generator("K", "PQ", lambda v: v["lam"] != v["nk"])
    b.generator("Ao", "A", lambda v: (v["lam"] != v["nk"]) != (v["na"] == 1))
    b.generator("Bo", "B", lambda v: v["lam"] != v["nb"])
    b.slice("S", ["s1", "s2"], ["s1", "s2"])
    b.scenario(wing_a="A", wing_b="B")
    return b.build("simpsons_slice")


def superdeterministic():
    """Settings read off the past cause, which also fixes PR-box outcomes."""
    pts, order = _eprb_points()
    b = ModelBuilder(pts, order)
    _wings(b)
    b.region("C", ["c"])
    b.variable("l1").variable("l2").variable("r")
    b.generator("L1", "C", _v("l1")).generator("L2", "C", _v("l2")).generator("R", "C", _v("r"))
    b.generator("As", "A", _v("l1", 0)).generator("Bs", "B", _v("l2", 0))
    b.generator("Ao", "A", _v("r"))
    b.generator("Bo", "B", lambda v: (v["r"] == 1) != (v["l1"] == 1 and v["l2"] == 1))
    _bind(b)
    return b.build("superdeterministic")


def markov_chain():
    """Three layers, each a noisy copy of the one below."""
    b = ModelBuilder(["x", "m", "y"], [("x", "m"), ("m", "y")])
    b.region("X", ["x"]).region("Mid", ["m"]).region("Y", ["y"])
    b.variable("lam").variable("n1", QUARTER).variable("n2", QUARTER)
    b.generator("L", "X", _v("lam"))
    b.generator("M", "Mid", lambda v: v["lam"] != v["n1"])
    b.generator("Z", "Y", lambda v: (v["lam"] != v["n1"]) != (v["n2"] == 1))
    b.slice("Mid", ["m"], ["m"])
    return b.build("markov_chain")


def product():
    """Each wing's outcome depends only on a cause in its own past."""
    b = ModelBuilder(["pa", "pb", "a", "b"], [("pa", "a"), ("pb", "b")])
    _wings(b)
    b.region("PA", ["pa"]).region("PB", ["pb"])
    b.variable("ca").variable("cb")
    _settings(b)
    b.variable("na", QUARTER).variable("nb", QUARTER)
    b.generator("CA", "PA", _v("ca")).generator("CB", "PB", _v("cb"))
    b.generator("Ao", "A", lambda v: v["ca"] != v["na"])
    b.generator("Bo", "B", lambda v: v["cb"] != v["nb"])
    _bind(b, past_partition=["PA", "PB"])
    b.partition("PA", "PB")
    b.partition("A", "B")
    return b.build("product")


TSIRELSON_ANGLES = (0.0, math.pi / 2, math.pi / 4, -math.pi / 4)


def tsirelson_approx(cap=10_000):
    return singlet_table(*TSIRELSON_ANGLES, cap)


# -- registry ---------------------------------------------------------------

@dataclass(frozen=True)
class GalleryEntry:
    name: str
    about: str
    build: Callable
    expected: dict
    kind: str = "model"


def _m(**kw):
    return kw


ENTRIES = {e.name: e for e in [
    GalleryEntry(
        "nonseparable_minimal", "localised events hold while separability fails",
        nonseparable_minimal,
        _m(localised_events="pass", separability="fail")),
    GalleryEntry(
        "deterministic_common_cause", "a common cause screens off deterministic outcomes",
        deterministic_common_cause,
        _m(localised_events="pass", separability="pass", bell_locality="pass",
           freedom_of_settings="pass", factorisability="pass", derivation_chain="pass",
           no_signalling="pass", outcome_independence="pass", parameter_independence="pass",
           jarrett_decomposition="pass", bell_locality_weakened="pass", chsh="2/1")),
    GalleryEntry(
        "pr_box", "maximal no-signalling correlations with an empty past",
        pr_box,
        _m(localised_events="pass", separability="pass", bell_locality="fail",
           freedom_of_settings="pass", factorisability="fail", no_signalling="pass",
           outcome_independence="fail", parameter_independence="pass",
           jarrett_decomposition="pass", bell_locality_weakened="fail", chsh="4/1")),
    GalleryEntry(
        "pilot_wave_like", "parameter dependence hidden by averaging over the cause",
        pilot_wave_like,
        _m(localised_events="pass", separability="pass", bell_locality="fail",
           freedom_of_settings="pass", factorisability="fail", no_signalling="pass",
           outcome_independence="pass", parameter_independence="fail",
           jarrett_decomposition="pass", bell_locality_weakened="fail", chsh="3/1")),
    GalleryEntry(
        "backyard_pingpong", "a separable timelike mechanism violating state factorisation",
        backyard_pingpong,
        _m(localised_events="pass", separability="pass", bell_locality="fail",
           freedom_of_settings="pass", factorisability="fail", no_signalling="pass",
           outcome_independence="fail", parameter_independence="pass",
           jarrett_decomposition="pass", separability_of_states="fail",
           bell_locality_weakened="fail", chsh="9/8")),
    GalleryEntry(
        "maudlin_bare_correlation", "correlated outcomes over a past with no events",
        maudlin_bare_correlation,
        _m(localised_events="pass", separability="pass", bell_locality="fail",
           freedom_of_settings="pass", factorisability="fail", no_signalling="pass",
           outcome_independence="fail", parameter_independence="pass",
           jarrett_decomposition="pass", separability_of_states="fail",
           bell_locality_weakened="fail", chsh="1/1")),
    GalleryEntry(
        "weakened_locality_signalling",
        "extra conditioning on a straddling non-separable event permits signalling",
        weakened_locality_signalling,
        _m(localised_events="pass", separability="fail", bell_locality="fail",
           freedom_of_settings="pass", factorisability="fail", no_signalling="fail",
           outcome_independence="pass", parameter_independence="fail",
           jarrett_decomposition="pass", bell_locality_weakened="pass", chsh="0/1")),
    GalleryEntry(
        "simpsons_slice", "conditioning on a slice alone fails to screen the wings",
        simpsons_slice,
        _m(localised_events="pass", separability="fail", bell_locality="pass", srla="fail",
           nouvelle_locality="fail", bell_locality_weakened="pass")),
    GalleryEntry(
        "superdeterministic", "settings read off the past reproduce the PR box",
        superdeterministic,
        _m(localised_events="fail", separability="pass", bell_locality="pass",
           freedom_of_settings="fail", factorisability="pass", no_signalling="pass",
           outcome_independence="pass", parameter_independence="pass",
           bell_locality_weakened="pass", chsh="4/1")),
    GalleryEntry(
        "markov_chain", "each layer screened off by the one between",
        markov_chain,
        _m(localised_events="pass", separability="pass", srla="pass")),
    GalleryEntry(
        "product", "wing outcomes fed by separate local causes",
        product,
        _m(localised_events="pass", separability="pass", bell_locality="pass",
           freedom_of_settings="pass", factorisability="pass", derivation_chain="pass",
           no_signalling="pass", outcome_independence="pass", parameter_independence="pass",
           jarrett_decomposition="pass", separability_of_states="pass",
           bell_locality_weakened="pass", chsh="0/1")),
    GalleryEntry(
        "tsirelson_approx", "rational approximation of maximal quantum correlations",
        tsirelson_approx, {}, kind="behavior"),
]}


def names():
    return list(ENTRIES)


def build(name):
    try:
        return ENTRIES[name].build()
    except KeyError:
        raise InputError(f"unknown gallery entry {name!r}") from None


# -- random models ----------------------------------------------------------

def _rng(seed):
    return random.Random(f"bellframe/{seed}")


def _composition(rng, total, parts):
    cuts = sorted(rng.randint(0, total) for _ in range(parts - 1))
    bounds = [0, *cuts, total]
    return [bounds[i + 1] - bounds[i] for i in range(parts)]


def random_model(seed, max_points=6, max_histories=8, max_generators=4):
    """A random model; a pure function of its arguments.

    The region universe is every union of a random partition of the points
    into cells.  Most generators are homed on one cell; the rest on a union
    of several, which is how non-separable events arise.  Weights are
    integers over a denominator at most 64, so null histories occur.
    """
    for cap in (max_points, max_histories):
        if cap < 1:
            raise InputError("caps must be at least 1")
    if max_generators < 0:
        raise InputError("generator cap must be nonnegative")
    rng = _rng(f"model/{seed}/{max_points}/{max_histories}/{max_generators}")
    n = rng.randint(1, max_points)
    pts = [f"p{i}" for i in range(n)]
    # layered order: covers between adjacent layers, occasional longer links
    layer = sorted(rng.randint(0, 2) for _ in pts)
    order = [(pts[i], pts[j]) for i in range(n) for j in range(i + 1, n)
             if layer[j] > layer[i] and rng.random() < (0.6 if layer[j] == layer[i] + 1 else 0.15)]
    site = CausalSite(pts, order)
    k = rng.randint(1, n)
    owner = [rng.randrange(k) for _ in pts]
    cells = [frozenset(p for p, o in zip(pts, owner) if o == c) for c in range(k)]
    cells = [c for c in cells if c]
    regions = {f"c{i}": c for i, c in enumerate(cells)}
    m = rng.randint(1, max_histories)
    hist = [f"h{i}" for i in range(m)]
    denom = rng.randint(max(m, 2), 64)
    weights = _composition(rng, denom, m)
    gens = []
    for g in range(rng.randint(0, max_generators)):
        event = rng.getrandbits(m)
        if len(cells) > 1 and rng.random() >= 0.75:
            picked = sorted(rng.sample(range(len(cells)), rng.randint(2, len(cells))))
        else:
            picked = [rng.randrange(len(cells))]
        home = frozenset().union(*(cells[i] for i in picked))
        name = "+".join(f"c{i}" for i in picked)
        regions.setdefault(name, home)
        gens.append((f"g{g}", event, name))
    slices = {}
    base = rng.choice((0, 0, 1))
    lower = [p for p, l in zip(pts, layer) if l == base] or _random_antichain(rng, site)
    upper = [p for p, l in zip(pts, layer) if l == base + 1]
    if not upper or rng.random() < 0.6:
        upper = lower
    s = make_slice(site, lower, upper, "s0")
    if not s.points:
        s = make_slice(site, lower, lower, "s0")
    slices["s0"] = s
    universe = RegionUniverse(site, regions)
    model = Model(site, hist, universe, [Generator(g, e, universe[h]) for g, e, h in gens],
                  [Fraction(w, denom) for w in weights], slices)
    return Document(model, None, [[f"c{i}" for i in range(len(cells))]], f"random-{seed}")


def _random_antichain(rng, site, start=()):
    """A random maximal antichain extending ``start``: every maximal chain meets it."""
    pool = list(site.points)
    rng.shuffle(pool)
    out = list(start)
    for p in pool:
        if p not in out and all(not site.comparable(p, q) for q in out):
            out.append(p)
    return out


def with_nonseparable(doc, p=HALF):
    """Double Ω by an independent coin homed on the whole site.

    Returns a new document whose old events are lifted unchanged; the coin
    belongs to no proper region's algebra, so any partition into two or
    more nonempty universe regions stops being separable.
    """
    m = doc.model
    p = Fraction(p)
    if not 0 < p < 1:
        raise InputError("coin probability must lie strictly between 0 and 1")
    hist = [f"{h}.{bit}" for h in m.histories for bit in (0, 1)]
    measure = [x * q for x in m.measure for q in (1 - p, p)]

    def lift(mask):
        out = 0
        for i in range(m.nbits):
            if (mask >> i) & 1:
                out |= 0b11 << (2 * i)
        return out

    gens = [Generator(g.name, lift(g.event), g.home) for g in m.generators]
    coin = sum(1 << (2 * i + 1) for i in range(m.nbits))
    site_region = m.universe.lookup(m.site.points)
    gens.append(Generator("coin", coin, site_region))
    model = Model(m.site, hist, m.universe, gens, measure, m.slices)
    return Document(model, doc.binding, doc.partitions, (doc.name or "model") + "+coin")


SETTING_MODES = ("free", "free", "free", "correlated", "superdeterministic")
NOISE_MODES = ("independent", "independent", "shared")
SELECTORS = ("mutual", "joint", "past-a", "past-b")
PROBS = (HALF, HALF, QUARTER, Fraction(3, 4), Fraction(1, 3), Fraction(2, 3), Fraction(1))


def random_eprb_model(seed):
    """A random latent-variable EPRB model.

    Points: a common past ``c``, local pasts ``la`` and ``lb``, and the two
    wings.  Up to two hidden bits live in the past, one possibly homed
    non-separably on ``{la, lb}``.  Settings are free, correlated with each
    other, or read off a hidden bit.  Outcomes are random Boolean functions
    of the local setting, the hidden bits and noise; the noise may be shared
    between wings, and with small probability an outcome also reads the
    distant setting.
    """
    rng = _rng(f"eprb/{seed}")
    b = ModelBuilder(["c", "la", "lb", "a", "b"],
                     [("c", "a"), ("c", "b"), ("la", "a"), ("lb", "b")])
    _wings(b)
    b.region("C", ["c"]).region("LA", ["la"]).region("LB", ["lb"])
    b.region("CA", ["c", "la"]).region("LL", ["la", "lb"])
    homes = ("C", "LA", "LB", "LL")
    nbits = rng.randint(0, 2)
    bits = []
    for i in range(nbits):
        name = f"l{i}"
        b.variable(name, rng.choice(PROBS[:-1]))
        home = rng.choice(homes) if rng.random() < 0.85 else "LL"
        b.generator(f"L{i}", home, _v(name))
        bits.append(name)
    mode = rng.choice(SETTING_MODES)
    if mode == "superdeterministic" and not bits:
        mode = "correlated"
    if mode == "free":
        b.variable("as", rng.choice(PROBS[:-2])).variable("bs", rng.choice(PROBS[:-2]))
        sa, sb = "as", "bs"
    elif mode == "correlated":
        b.variable("as").variable("flip", rng.choice((QUARTER, Fraction(1, 3))))
        sa, sb = "as", None
    else:
        b.variable("as")
        sa, sb = None, None
    noise = rng.choice(NOISE_MODES)
    b.variable("na", rng.choice(PROBS))
    if noise == "independent":
        b.variable("nb", rng.choice(PROBS))
    nb = "nb" if noise == "independent" else "na"
    leak = rng.random() < 0.1

    def setting_a(v):
        return v[sa] if sa else v[bits[0]]

    def setting_b(v):
        if sb:
            return v[sb]
        if mode == "correlated":
            return v["as"] ^ v["flip"]
        return v[bits[-1]]

    fa = _random_function(rng, 2 + len(bits) + leak)
    fb = _random_function(rng, 2 + len(bits) + leak)

    def outcome(f, local, other, n):
        def pred(v):
            args = [local(v), v[n], *(v[x] for x in bits)]
            if leak:
                args.append(other(v))
            return f(args)
        return pred

    b.generator("As", "A", lambda v: setting_a(v) == 0)
    b.generator("Bs", "B", lambda v: setting_b(v) == 0)
    b.generator("Ao", "A", outcome(fa, setting_a, setting_b, "na"))
    b.generator("Bo", "B", outcome(fb, setting_b, setting_a, nb))
    past = rng.choice(SELECTORS)
    extra = {}
    if past == "joint":
        extra["past_partition"] = ["CA", "LB"]
    _bind(b, past=past, **extra)
    doc = b.build(f"eprb-{seed}")
    doc.meta = {"settings": mode, "noise": noise, "leak": leak}
    return doc


def _random_function(rng, arity):
    table = [rng.random() < 0.5 for _ in range(2 ** arity)]

    def f(args):
        idx = 0
        for x in args:
            idx = 2 * idx + int(x)
        return table[idx]
    return f
