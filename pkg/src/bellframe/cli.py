"""Command-line interface.

Exit codes: 0 all checks pass (vacuous passes print a warning), 1 some
check fails, 2 input or usage error, 3 conjecture counterexample found.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__, gallery, kernels
from .conjecture import test_equivalence_conjecture
from .errors import InputError
from .modelfile import canonical_json, dump, load
from .polytope import BehaviorTable, LhvDecomposition, chsh_value, lhv_membership
from .reports import FAIL, VACUOUS, frac_str
from .suites import SUITES, chsh_summary, overall, run_suite

SCHEMA_VERSION = 1
EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_FOUND = 0, 1, 2, 3

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "tool_version", "command"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "tool_version": {"type": "string"},
        "command": {"enum": ["check", "chsh", "conjecture"]},
        "model_digest": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
        "summary": {"enum": ["pass", "fail", "vacuous"]},
        "skipped": {"type": "array", "items": {
            "type": "object", "required": ["suite", "reason"],
            "properties": {"suite": {"type": "string"}, "reason": {"type": "string"}}}},
        "reports": {"type": "array", "items": {"$ref": "#/$defs/report"}},
        "chsh": {"type": "object", "required": ["value", "signs", "local"], "properties": {
            "value": {"$ref": "#/$defs/rational"},
            "signs": {"type": "array", "items": {"enum": [1, -1]}, "minItems": 4, "maxItems": 4},
            "local": {"type": "boolean"},
            "decomposition": {"type": "object",
                              "additionalProperties": {"$ref": "#/$defs/rational"}},
            "reason": {"type": "string"},
            "certificate": {"type": "array", "items": {"$ref": "#/$defs/rational"}}}},
        "conjecture": {"type": "object",
                       "required": ["seed", "trials", "caps", "counterexamples"]},
    },
    "$defs": {
        "rational": {"type": "string", "pattern": "^-?[0-9]+/[0-9]+$"},
        "report": {
            "type": "object",
            "required": ["condition", "verdict", "vacuous_atoms", "clauses", "notes", "witnesses"],
            "properties": {
                "condition": {"type": "string"},
                "verdict": {"enum": ["pass", "fail", "vacuous"]},
                "vacuous_atoms": {"type": "integer", "minimum": 0},
                "clauses": {"type": "object",
                            "additionalProperties": {"enum": ["pass", "fail", "vacuous"]}},
                "notes": {"type": "array", "items": {"type": "string"}},
                "witnesses": {"type": "array", "items": {
                    "type": "object", "required": ["clause", "lhs", "rhs"],
                    "properties": {"clause": {"type": "string"},
                                   "lhs": {"$ref": "#/$defs/rational"},
                                   "rhs": {"$ref": "#/$defs/rational"}}}},
            },
        },
    },
}


def _envelope(command, **rest):
    return {"schema_version": SCHEMA_VERSION, "tool_version": __version__, "command": command,
            **rest}


def _emit(obj):
    print(json.dumps(obj, sort_keys=True, indent=2))


def _chsh_dict(value, signs, lhv):
    d = {"value": frac_str(value), "signs": list(signs),
         "local": isinstance(lhv, LhvDecomposition)}
    if isinstance(lhv, LhvDecomposition):
        d["decomposition"] = {"".join("+" if x > 0 else "-" for x in s): frac_str(w)
                              for s, w in sorted(lhv.weights.items(), reverse=True)}
    else:
        d["reason"] = lhv.reason
        if lhv.certificate is not None:
            d["certificate"] = [frac_str(c) for c in lhv.certificate]
    return d


def _chsh_lines(value, signs, lhv):
    sign = " ".join(f"{s:+d}" for s in signs)
    lines = [f"CHSH {frac_str(value)} ({float(value):.6f}), signs [{sign}] on E00 E01 E10 E11"]
    if isinstance(lhv, LhvDecomposition):
        lines.append("local polytope: member")
        for s, w in sorted(lhv.weights.items(), reverse=True):
            strat = "".join("+" if x > 0 else "-" for x in s)
            lines.append(f"  strategy {strat} (a0 a1 b0 b1) weight {frac_str(w)}")
    else:
        lines.append(f"local polytope: NotLocal ({lhv.reason})")
        if lhv.facet is not None:
            lines.append(f"  violated CHSH facet {list(lhv.facet)} value {frac_str(lhv.value)}")
        if lhv.detail:
            lines.append(f"  {lhv.detail}")
    return lines


def cmd_check(args):
    doc = load(args.model)
    reports, skipped = run_suite(doc, args.suite, args.past)
    verdict = overall(reports)
    if args.format == "json":
        _emit(_envelope("check", model_digest=doc.digest(), summary=verdict,
                        reports=[r.to_dict() for r in reports],
                        skipped=[{"suite": s, "reason": why} for s, why in skipped]))
    else:
        print(f"model {doc.name or args.model} sha256:{doc.digest()[:16]}")
        added = doc.model.universe.added
        if added:
            print(f"closure added regions: {', '.join(added)}")
        for r in reports:
            print(r.summary())
            for name, v in r.clauses.items():
                print(f"  {name}: {v}")
            for n in r.notes:
                print(f"  note: {n}")
            for w in r.witnesses[: args.max_witnesses]:
                print(f"  witness {_witness_line(w)}")
            if len(r.witnesses) > args.max_witnesses:
                print(f"  ... {len(r.witnesses) - args.max_witnesses} more witnesses")
        for s, why in skipped:
            print(f"skipped {s}: {why}")
        if any(r.verdict == VACUOUS for r in reports):
            print("warning: some checks were vacuous (no defined conditionals)")
        print(f"summary: {verdict}")
    return EXIT_FAIL if verdict == FAIL else EXIT_PASS


def _witness_line(w):
    d = w.to_dict()
    parts = [d.pop("clause"), f"lhs={d.pop('lhs')}", f"rhs={d.pop('rhs')}"]
    parts += [f"{k}={v}" for k, v in d.items()]
    return " ".join(parts)


def cmd_chsh(args):
    path = args.path
    try:
        with open(path, encoding="utf-8") as fh:
            head = fh.read(1)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    digest = None
    if head == "{":
        doc = load(path)
        digest = doc.digest()
        _, (value, signs), lhv = chsh_summary(doc, args.past)
    else:
        with open(path, encoding="utf-8") as fh:
            table = BehaviorTable.from_text(fh.read())
        value, signs = chsh_value(table)
        lhv = lhv_membership(table)
    if args.format == "json":
        extra = {"model_digest": digest} if digest else {}
        _emit(_envelope("chsh", chsh=_chsh_dict(value, signs, lhv), **extra))
    else:
        print("\n".join(_chsh_lines(value, signs, lhv)))
    return EXIT_PASS


def cmd_conjecture(args):
    report = test_equivalence_conjecture(args.seed, args.trials, args.max_points,
                                         args.max_histories, args.max_generators, args.out)
    if args.format == "json":
        _emit(_envelope("conjecture", conjecture=report.to_dict()))
    else:
        r = report
        print(f"seed {r.seed}, trials {r.trials}, caps {canonical_json(r.caps)}")
        print(f"axiom failures {r.axiom_failures}, without slice {r.without_slice}, "
              f"srla failures {r.srla_failures}, survivors {r.survivors}, "
              f"comparisons {r.comparisons}")
        for cx in r.counterexamples:
            print(f"counterexample trial {cx.trial} seed {cx.seed}: wings {cx.wing_a} / "
                  f"{cx.wing_b}, slice {cx.slice}, bell {cx.bell}, slice-block {cx.nouvelle}")
        print(r.summary())
    return EXIT_FOUND if report.counterexamples else EXIT_PASS


def cmd_gallery(args):
    if args.action == "list":
        for name, e in gallery.ENTRIES.items():
            print(f"{name:30s} {e.kind:9s} {e.about}")
        return EXIT_PASS
    if args.name is None or args.path is None:
        raise InputError("usage: gallery emit NAME PATH")
    built = gallery.build(args.name)
    if isinstance(built, BehaviorTable):
        with open(args.path, "w", encoding="utf-8") as fh:
            fh.write(built.to_text())
    else:
        dump(built, args.path)
    print(f"wrote {args.path}")
    return EXIT_PASS


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _nonnegative(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def build_parser():
    p = _Parser(prog="bellframe", description="Check locality conditions on finite models.")
    p.add_argument("--version", action="version",
                   version=f"%(prog)s {__version__} ({kernels.BACKEND} kernels)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="run condition suites on a model file")
    c.add_argument("model")
    c.add_argument("--suite", choices=SUITES, default="all")
    c.add_argument("--past", help="mutual|joint|past-a|past-b|slice:NAME|custom:REGION")
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.add_argument("--max-witnesses", type=_nonnegative, default=5)
    c.set_defaults(func=cmd_check)

    h = sub.add_parser("chsh", help="CHSH value and local-polytope verdict")
    h.add_argument("path", help="model file (JSON) or behaviour table (text)")
    h.add_argument("--past")
    h.add_argument("--format", choices=("text", "json"), default="text")
    h.set_defaults(func=cmd_chsh)

    j = sub.add_parser("conjecture", help="search random models for counterexamples")
    j.add_argument("--seed", type=int, default=1)
    j.add_argument("--trials", type=_nonnegative, default=100)
    j.add_argument("--max-points", type=_positive, default=6)
    j.add_argument("--max-histories", type=_positive, default=8)
    j.add_argument("--max-generators", type=_nonnegative, default=4)
    j.add_argument("--out", help="directory for counterexample model files")
    j.add_argument("--format", choices=("text", "json"), default="text")
    j.set_defaults(func=cmd_conjecture)

    g = sub.add_parser("gallery", help="list or emit named models")
    g.add_argument("action", choices=("list", "emit"))
    g.add_argument("name", nargs="?")
    g.add_argument("path", nargs="?")
    g.set_defaults(func=cmd_gallery)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
