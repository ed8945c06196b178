"""Command-line entry point.

Every subcommand emits a machine-readable report on stdout (JSON by
default; the text format is rendered from the same report dict, never
computed separately), with diagnostics on stderr.  Randomized subcommands
require an explicit --seed: there is no implicit entropy anywhere, so any
report rerun with identical inputs, parameters, and seeds is byte-
identical apart from the wall_time_s field.

Exit codes: 0 success/true, 1 definitive-false, 2 unknown/budget
exceeded, 3 usage or input errors, 4 internal errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import bounds as bounds_mod
from . import encoding as encoding_mod
from . import generators as gen_mod
from . import spread as spread_mod
from .families import (
    ElementSet,
    SetFamily,
    Sunflower,
    WeightedFamily,
    intersection_profile,
    is_L_intersecting,
    is_d_intersecting,
)
from .finders import find_any
from .formats import dump_family_json, dump_family_text, load_family

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_UNKNOWN = 2
EXIT_ERROR = 3
EXIT_INTERNAL = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors belong to the error band, not "unknown"
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def jsonable(obj):
    """Recursively convert report objects to JSON-native values."""
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, ElementSet):
        return list(obj.elements)
    if isinstance(obj, Sunflower):
        return {
            "core": list(obj.core.elements),
            "sets": [list(s.elements) for s in obj.petal_sets],
        }
    if isinstance(obj, SetFamily):
        return {
            "ground_size": obj.ground_size,
            "sets": [list(s.elements) for s in obj.members],
        }
    if isinstance(obj, WeightedFamily):
        return {
            "ground_size": obj.family.ground_size,
            "sets": [list(s.elements) for s in obj.family.members],
            "weights": [str(w) for w in obj.weights],
        }
    if dataclasses.is_dataclass(obj):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = list(obj)
        if isinstance(obj, (set, frozenset)):
            items = sorted(items)
        return [jsonable(v) for v in items]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _render_text(value, indent=""):
    lines = []
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{indent}{k}:")
                lines.extend(_render_text(v, indent + "  "))
            else:
                lines.append(f"{indent}{k}: {_scalar(v)}")
    elif isinstance(value, list):
        if value and all(isinstance(row, dict) for row in value):
            keys = list(value[0].keys())
            if all(list(row.keys()) == keys for row in value):
                table = [keys] + [[_scalar(row[k]) for k in keys] for row in value]
                widths = [max(len(str(r[i])) for r in table) for i in range(len(keys))]
                for row in table:
                    lines.append(
                        indent + "  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip()
                    )
                return lines
        for item in value:
            if isinstance(item, (dict, list)):
                lines.append(f"{indent}-")
                lines.extend(_render_text(item, indent + "  "))
            else:
                lines.append(f"{indent}- {_scalar(item)}")
    else:
        lines.append(f"{indent}{_scalar(value)}")
    return lines


def _scalar(v):
    if isinstance(v, list):
        return "[" + ", ".join(str(x) for x in v) + "]"
    if isinstance(v, dict):
        return json.dumps(v, sort_keys=True)
    return v


def _emit(args, report: dict) -> None:
    payload = jsonable(report)
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(_render_text(payload)))


def _digest(path: str) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _load(path: str) -> SetFamily:
    family = load_family(Path(path).read_text())
    if isinstance(family, WeightedFamily):
        return family.family
    return family


def _report(subcommand: str, args, parameters: dict, outputs: dict, started: float,
            digest=None, seeds=None) -> dict:
    return {
        "subcommand": subcommand,
        "input_digest": digest,
        "parameters": parameters,
        "seeds": seeds,
        "outputs": outputs,
        "wall_time_s": round(time.perf_counter() - started, 6),
    }


def _parse_int_list(text: str) -> list[int]:
    try:
        return sorted({int(tok) for tok in text.replace(",", " ").split()})
    except ValueError:
        raise ValueError(f"expected a comma-separated integer list, got {text!r}") from None


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"expected a rational like 2, 1/3, or 0.25, got {text!r}") from None


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_check(args) -> int:
    started = time.perf_counter()
    family = _load(args.family)
    params = {"L": args.L, "d": args.d, "uniform": args.uniform}
    profile = sorted(intersection_profile(family))
    verdicts = {}
    if args.L is not None:
        verdicts["L_intersecting"] = is_L_intersecting(family, _parse_int_list(args.L))
    if args.d is not None:
        verdicts["d_intersecting"] = is_d_intersecting(family, args.d)
    if args.uniform is not None:
        verdicts["uniform"] = family.uniformity == args.uniform
    outputs = {
        "ground_size": family.ground_size,
        "members": len(family),
        "uniformity": family.uniformity,
        "intersection_profile": profile,
        "verdicts": verdicts,
    }
    _emit(args, _report("check", args, params, outputs, started, digest=_digest(args.family)))
    return EXIT_TRUE if all(verdicts.values()) else EXIT_FALSE


def cmd_find(args) -> int:
    started = time.perf_counter()
    family = _load(args.family)
    outcome = find_any(family, args.r, strategy=args.strategy, budget=args.budget)
    params = {"r": args.r, "strategy": args.strategy, "budget": args.budget}
    outputs = {
        "status": outcome.status,
        "method": outcome.method,
        "note": outcome.note,
        "sunflower": outcome.sunflower,
        "trace": outcome.trace,
    }
    _emit(args, _report("find", args, params, outputs, started, digest=_digest(args.family)))
    return {"found": EXIT_TRUE, "absent": EXIT_FALSE, "unknown": EXIT_UNKNOWN}[outcome.status]


def cmd_bounds(args) -> int:
    started = time.perf_counter()
    L = _parse_int_list(args.L) if args.L is not None else None
    common = dict(n=args.n, r=args.r, s=args.s, L=L, d=args.d,
                  C=args.C, digits=args.digits, log_base=args.log_base)
    params = {"which": args.which, **{k: (str(v) if isinstance(v, Fraction) else v)
                                      for k, v in common.items()}}

    def crossover():
        return bounds_mod.crossover_report(args.n, args.r, args.C, args.digits, args.log_base)

    if args.which == "crossover":
        _require(args.n is not None and args.r is not None, "crossover needs -n and -r")
        outputs = {"crossover": crossover()}
    elif args.which == "all":
        _require(args.n is not None and args.r is not None, "--which all needs -n and -r")
        reports = []
        for name in bounds_mod.BOUND_NAMES:
            try:
                reports.append(bounds_mod.bound_report(name, **common))
            except ValueError:
                continue  # bound not evaluable from the given parameters
        outputs = {"bounds": reports, "crossover": crossover()}
    else:
        outputs = {"bound": bounds_mod.bound_report(args.which, **common)}
    _emit(args, _report("bounds", args, params, outputs, started))
    return EXIT_TRUE


def cmd_spread(args) -> int:
    started = time.perf_counter()
    family = _load(args.family)
    params = {
        "kappa": str(args.kappa) if args.kappa is not None else None,
        "d": args.d,
        "alpha": str(args.alpha) if args.alpha is not None else None,
        "trials": args.trials,
        "r": args.r,
    }
    outputs: dict = {"spread_kappa": spread_mod.spread_kappa(family)}
    seeds = {"seed": args.seed} if args.seed is not None else None
    verdict_ok = True
    if args.kappa is not None:
        verdict = spread_mod.is_kappa_spread(family, args.kappa)
        outputs["is_kappa_spread"] = verdict
        verdict_ok = verdict
        d = args.d if args.d is not None else family.uniformity
        outputs["spread_link"] = spread_mod.find_spread_link(family, args.kappa, d)
    if args.alpha is not None:
        if family.ground_size <= 24:
            outputs["exact_satisfying"] = spread_mod.exact_satisfying(family, args.alpha)
        if args.trials is not None:
            _require(args.seed is not None, "sampling requires an explicit --seed")
            outputs["sampled_satisfying"] = spread_mod.sample_satisfying(
                family, float(args.alpha), args.trials, args.seed
            )
    if args.r is not None:
        outputs["disjointness"] = spread_mod.check_satisfying_disjoint(
            family, args.r, trials=args.trials, seed=args.seed
        )
    _emit(args, _report("spread", args, params, outputs, started,
                        digest=_digest(args.family), seeds=seeds))
    return EXIT_TRUE if verdict_ok else EXIT_FALSE


def cmd_experiment(args) -> int:
    family = _load(args.family)
    _require(args.seed is not None, "sampling requires an explicit --seed")
    try:
        lo, hi, step = (Fraction(part) for part in args.alpha_grid.split(":"))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"--alpha-grid must look like 0.1:0.9:0.1, got {args.alpha_grid!r}")
    _require(step > 0 and 0 < lo <= hi < 1, "need 0 < start <= stop < 1 and step > 0")
    exact_available = family.ground_size <= 24
    print("alpha,estimate,stderr,exact")
    alpha = lo
    trial_seed = args.seed
    while alpha <= hi:
        est = spread_mod.sample_satisfying(family, float(alpha), args.trials, trial_seed)
        exact = str(spread_mod.exact_satisfying(family, alpha)) if exact_available else ""
        print(f"{float(alpha)!r},{est.estimate!r},{est.stderr!r},{exact}")
        alpha += step
        trial_seed += 1
    return EXIT_TRUE


def cmd_encode_audit(args) -> int:
    started = time.perf_counter()
    family = _load(args.family)
    params = {"px": args.px, "d": args.d,
              "delta": str(args.delta) if args.delta is not None else None}
    audit = encoding_mod.audit_encoding_bound(family, args.px, args.d)
    outputs: dict = {"encoding": audit}
    ok = audit.passed
    if args.delta is not None:
        markov = encoding_mod.audit_markov_step(family, args.px, args.delta, args.d)
        outputs["markov"] = markov
        ok = ok and markov.holds
    _emit(args, _report("encode-audit", args, params, outputs, started,
                        digest=_digest(args.family)))
    return EXIT_TRUE if ok else EXIT_FALSE


def cmd_gen(args) -> int:
    kind = args.kind
    if kind == "sunflower":
        family = gen_mod.gen_sunflower(args.core, args.petal, args.r)
    elif kind == "transversal":
        family = gen_mod.gen_transversal(args.blocks, args.block_size)
    elif kind == "all-subsets":
        family = gen_mod.gen_all_k_subsets(args.x, args.k)
    elif kind == "single-intersection":
        family = gen_mod.gen_single_intersection(args.n, args.t, args.count)
    elif kind == "random-uniform":
        _require(args.seed is not None, "random generation requires an explicit --seed")
        family = gen_mod.gen_random_uniform(args.x, args.n, args.count, args.seed)
    elif kind == "random-l":
        _require(args.seed is not None, "random generation requires an explicit --seed")
        family = gen_mod.gen_random_L_intersecting(
            args.x, args.n, _parse_int_list(args.L), args.count, args.seed, args.budget
        )
        if len(family) < args.count:
            print(f"note: reached {len(family)} of {args.count} sets within budget",
                  file=sys.stderr)
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown generator {kind!r}")
    if args.format == "json":
        sys.stdout.write(dump_family_json(family))
    else:
        sys.stdout.write(dump_family_text(family))
    return EXIT_TRUE


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ValueError(message)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="sunflowers", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)

    def add_common(p):
        p.add_argument("--format", choices=("json", "text"), default="json",
                       help="report rendering (text is rendered from the same JSON)")
        p.add_argument("--threads", type=int, default=1,
                       help="reserved; results are schedule-independent regardless")

    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("check", help="family predicates: uniformity, intersection profile")
    p.add_argument("family")
    p.add_argument("--L", help="comma-separated allowed intersection sizes")
    p.add_argument("--d", type=int, help="check intersections of size at most d")
    p.add_argument("--uniform", type=int, help="check n-uniformity")
    add_common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("find", help="search for an r-sunflower")
    p.add_argument("family")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--strategy", choices=("auto", "recursive", "brute"), default="auto")
    p.add_argument("--budget", type=int, default=500_000,
                   help="max r-subsets the exhaustive fallback may examine")
    add_common(p)
    p.set_defaults(func=cmd_find)

    p = sub.add_parser("bounds", help="evaluate named sunflower bounds")
    p.add_argument("--which", required=True,
                   choices=bounds_mod.BOUND_NAMES + ("crossover", "all"))
    p.add_argument("-n", type=int)
    p.add_argument("-r", type=int)
    p.add_argument("-s", type=int)
    p.add_argument("--L", help="comma-separated intersection sizes")
    p.add_argument("-d", type=int)
    p.add_argument("-C", type=_parse_fraction, default=Fraction(1),
                   help="free constant (rational, default 1)")
    p.add_argument("--digits", type=int, default=50)
    p.add_argument("--log-base", default="e",
                   help="logarithm base: e (default) or a rational like 2")
    add_common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("spread", help="spreadness and satisfying probability")
    p.add_argument("family")
    p.add_argument("--kappa", type=_parse_fraction, help="exact rational spread parameter")
    p.add_argument("--d", type=int, help="max link set size for the spread link search")
    p.add_argument("--alpha", type=_parse_fraction, help="density for satisfying probability")
    p.add_argument("--trials", type=int, help="Monte Carlo trials (needs --seed)")
    p.add_argument("--seed", type=int)
    p.add_argument("--r", type=int, help="run the r-disjointness consistency report")
    add_common(p)
    p.set_defaults(func=cmd_spread)

    p = sub.add_parser("experiment", help="alpha-grid satisfying sweep (CSV)")
    p.add_argument("family")
    p.add_argument("--alpha-grid", required=True, help="start:stop:step, e.g. 0.1:0.9:0.1")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int)
    add_common(p)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("encode-audit", help="bad-pair encoding and Markov audits")
    p.add_argument("family")
    p.add_argument("--px", type=int, required=True, help="|W|, the exact size of the W sets")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--delta", type=_parse_fraction,
                   help="also audit the Markov tail at this rational delta")
    add_common(p)
    p.set_defaults(func=cmd_encode_audit)

    p = sub.add_parser("gen", help="generate fixture families")
    gensub = p.add_subparsers(dest="kind", required=True)

    g = gensub.add_parser("sunflower")
    g.add_argument("core", type=int)
    g.add_argument("petal", type=int)
    g.add_argument("r", type=int)
    add_common(g)
    g.set_defaults(func=cmd_gen, seed=None, format="text")

    g = gensub.add_parser("transversal")
    g.add_argument("blocks", type=int)
    g.add_argument("block_size", type=int)
    add_common(g)
    g.set_defaults(func=cmd_gen, seed=None, format="text")

    g = gensub.add_parser("all-subsets")
    g.add_argument("x", type=int)
    g.add_argument("k", type=int)
    add_common(g)
    g.set_defaults(func=cmd_gen, seed=None, format="text")

    g = gensub.add_parser("single-intersection")
    g.add_argument("n", type=int)
    g.add_argument("t", type=int)
    g.add_argument("count", type=int)
    add_common(g)
    g.set_defaults(func=cmd_gen, seed=None, format="text")

    g = gensub.add_parser("random-uniform")
    g.add_argument("x", type=int)
    g.add_argument("n", type=int)
    g.add_argument("count", type=int)
    g.add_argument("--seed", type=int)
    add_common(g)
    g.set_defaults(func=cmd_gen, format="text")

    g = gensub.add_parser("random-l")
    g.add_argument("x", type=int)
    g.add_argument("n", type=int)
    g.add_argument("--L", required=True)
    g.add_argument("--count", type=int, required=True)
    g.add_argument("--seed", type=int)
    g.add_argument("--budget", type=int, default=100_000)
    add_common(g)
    g.set_defaults(func=cmd_gen, format="text")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_ERROR
    try:
        return args.func(args)
    except (ValueError, TypeError, OSError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as exc:  # pragma: no cover - internal failure band
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
