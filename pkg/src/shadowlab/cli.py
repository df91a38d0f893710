"""Command-line surface with deterministic JSON reports.

Exit codes: 0 for success / true verdicts, 1 for a false verdict (for
example a non-extremal family), 2 for usage or precondition errors, 3 for
budget or overflow errors.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor

from .exact import ExactOverflowError, Seq, binom, decompose
from .families import (
    BudgetError,
    KFamily,
    compact_support,
    read_family,
    to_dict,
)
from . import families as fam_ops
from .extremal import (
    brute_force_min_shadow,
    certify_by_witness,
    characterize,
    enumerate_extremal,
    extremal_iso_classes,
    is_extremal,
    kk_bound,
    min_degree_sweep,
    shadow_chain_check,
    uniqueness_predicate,
)
from .identities import (
    BinomialSum,
    Wall,
    is_invariantly_zero,
    is_zero_on_grid,
    recursive_reduce,
)
from .inequalities import (
    conjecture_scan,
    lemma_sweep,
    splits_comparison,
)
from .constructions import (
    ForbiddenPairSpec,
    example_32_family,
    example_33_family,
    forbidden_pair_cardinalities,
    forbidden_pair_family,
    perturbed_colex,
)


_command_echo: list[str] = []


def _emit(report: dict) -> None:
    # every report opens with the invoking arguments; timing is deliberately
    # omitted so identical inputs stay byte-identical
    payload = {"command": list(_command_echo), **report}
    sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")


def _load_family(path: str) -> KFamily:
    with open(path, "r", encoding="utf-8") as fp:
        return read_family(fp)


def _save_family(family: KFamily, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fp:
        json.dump(to_dict(family), fp, sort_keys=True)
        fp.write("\n")


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("SHADOWLAB_THREADS", "1")))
    except ValueError:
        return 1


def _cmd_decompose(args) -> int:
    seq = decompose(args.m, args.k)
    _emit({"m": args.m, "k": args.k, "seq": list(seq.terms)})
    return 0


def _cmd_bound(args) -> int:
    value = kk_bound(args.m, args.k, args.iter)
    _emit({"m": args.m, "k": args.k, "iter": args.iter, "bound": value})
    return 0


def _cmd_shadow(args) -> int:
    family = _load_family(args.infile)
    if args.upper:
        result = fam_ops.upper_shadow(family, args.upper)
    else:
        result = fam_ops.iterated_shadow(family, args.iter)
    report = {"input_size": len(family), "result": to_dict(result)}
    if args.out:
        _save_family(result, args.out)
    _emit(report)
    return 0


def _cmd_check(args) -> int:
    family = _load_family(args.infile)
    if args.compact:
        family = compact_support(family)
    report: dict = {"n": family.n, "k": family.k, "size": len(family)}
    verdicts: list[bool] = []
    if args.mode in ("direct", "both"):
        direct = is_extremal(family)
        report["extremal"] = direct
        verdicts.append(direct)
    if args.mode in ("characterize", "both"):
        char = characterize(family)
        report["characterize"] = {
            "verdict": char.verdict,
            "cascade": list(char.cascade),
            "witnesses": list(char.witnesses),
            "elements": [
                {
                    "x": e.x,
                    "branch": e.branch,
                    "ok": e.ok,
                    "link_size": e.link_size,
                    "deleted_size": e.deleted_size,
                    "threshold": e.threshold,
                    "inclusion": e.inclusion,
                    "deleted_extremal": e.deleted_extremal,
                    "link_extremal": e.link_extremal,
                    "numeric": e.numeric,
                }
                for e in char.elements
            ],
        }
        verdicts.append(char.verdict)
    if args.witness is not None:
        witness = certify_by_witness(family, args.witness)
        report["witness"] = {"x": args.witness, "certifies": witness}
        verdicts.append(witness)
    if args.chain:
        chain = shadow_chain_check(family)
        report["chain"] = chain
        verdicts.append(chain)
    _emit(report)
    return 0 if all(verdicts) else 1


def _cmd_enumerate(args) -> int:
    families = enumerate_extremal(
        args.n, args.k, args.m, up_to_iso=args.up_to_iso, method=args.method
    )
    _emit(
        {
            "n": args.n,
            "k": args.k,
            "m": args.m,
            "method": args.method,
            "up_to_iso": args.up_to_iso,
            "count": len(families),
            "families": [to_dict(f) for f in families],
        }
    )
    return 0


def _cmd_oracle(args) -> int:
    value = brute_force_min_shadow(args.n, args.k, args.m, budget=args.budget)
    bound = kk_bound(args.m, args.k, 1)
    _emit(
        {
            "n": args.n,
            "k": args.k,
            "m": args.m,
            "min_shadow": value,
            "bound": bound,
            "matches_bound": value == bound,
        }
    )
    return 0 if value == bound else 1


def _cmd_construct(args) -> int:
    report: dict
    family: KFamily | None = None
    if args.what == "colex":
        family = fam_ops.initial_segment(args.n, args.k, args.m)
        report = {
            "kind": "colex",
            "family": to_dict(family),
            "extremal": is_extremal(family),
        }
    elif args.what == "forbidden-pairs":
        deletion = (args.t, args.r) if args.t is not None else None
        spec = ForbiddenPairSpec.complete_pairs(args.n, args.k, args.m, deletion)
        report = {
            "kind": "forbidden-pairs",
            "arithmetic": forbidden_pair_cardinalities(spec),
        }
        if args.materialize:
            family = forbidden_pair_family(spec)
            report["family"] = to_dict(family)
            report["materialized_size"] = len(family)
    elif args.what == "example32":
        family = example_32_family(args.n, args.k, args.variant)
        designated = args.n if args.variant == "b" else args.n + 1
        report = {
            "kind": f"example32-{args.variant}",
            "family": to_dict(family),
            "designated_element": designated,
            "extremal": is_extremal(family),
        }
    elif args.what == "example33":
        family = example_33_family(args.n, args.k)
        report = {
            "kind": "example33",
            "family": to_dict(family),
            "designated_element": family.n,
            "extremal": is_extremal(family),
        }
    elif args.what == "perturbed":
        result = perturbed_colex(args.n, args.k, args.m)
        report = {
            "kind": "perturbed",
            "outcome": result.kind,
            "removed": list(result.removed),
            "added": list(result.added),
        }
        if result.family is not None:
            family = result.family
            report["family"] = to_dict(family)
            report["extremal"] = is_extremal(family)
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown construction {args.what!r}")
    if args.out and family is not None:
        _save_family(family, args.out)
    _emit(report)
    return 0


def _lemma_worker(task: tuple[int, int]) -> dict:
    k, amax = task
    return lemma_sweep(k, amax)


def _cmd_verify(args) -> int:
    if args.what == "lemma-abc":
        tasks = [(k, args.amax) for k in range(2, args.kmax + 1)]
        if args.threads > 1:
            with ProcessPoolExecutor(max_workers=args.threads) as pool:
                results = list(pool.map(_lemma_worker, tasks))
        else:
            results = [_lemma_worker(t) for t in tasks]
        violations = [v for r in results for v in r["violations"]]
        _emit(
            {
                "amax": args.amax,
                "kmax": args.kmax,
                "checked": sum(r["checked"] for r in results),
                "violations": violations,
            }
        )
        return 0 if not violations else 1
    if args.what == "splits":
        result = splits_comparison(args.amax, args.kmax)
        _emit(result)
        return 0 if not result["extras"] and not result["missing"] else 1
    if args.what == "min-degree":
        checked = min_degree_sweep(args.n, args.k)
        _emit({"n": args.n, "k": args.k, "checked": checked, "violations": []})
        return 0
    if args.what == "uniqueness":
        rows = []
        ok = True
        for m in range(1, binom(args.n, args.k) + 1):
            classes = len(extremal_iso_classes(args.n, args.k, m))
            predicted = uniqueness_predicate(args.n, args.k, m)
            agree = (classes == 1) == predicted
            ok = ok and agree
            rows.append(
                {"m": m, "classes": classes, "unique_predicted": predicted, "agree": agree}
            )
        _emit({"n": args.n, "k": args.k, "rows": rows, "equivalence": ok})
        return 0 if ok else 1
    if args.what == "conjecture":
        steps = int(round((args.xmax - args.k) / args.step))
        xs = [args.k + i * args.step for i in range(steps + 1)]
        report = conjecture_scan(args.k, xs, y_samples=args.y_samples)
        _emit(
            {
                "k": args.k,
                "xmax": args.xmax,
                "step": args.step,
                "min_slack": report.min_slack,
                "argmin": list(report.argmin),
                "near_violations": [list(v) for v in report.near_violations],
            }
        )
        return 0 if report.min_slack >= -1e-9 else 1
    raise ValueError(f"unknown verification {args.what!r}")  # pragma: no cover


def _parse_seq(text: str, level: int) -> Seq:
    text = text.strip()
    if not text:
        return Seq((), level)
    return Seq(tuple(int(x) for x in text.split(",")), level)


def _parse_wall(text: str) -> Wall:
    body, _, level = text.partition(":")
    if not level:
        raise ValueError("wall format is w0,w1,..:level")
    w = tuple(int(x) for x in body.split(",")) if body.strip() else ()
    return Wall(w, int(level))


def _cmd_reduce(args) -> int:
    wall = _parse_wall(args.wall)
    b = _parse_seq(args.b, args.k)
    c = _parse_seq(args.c, args.k)
    outcome = recursive_reduce(wall, b, c, args.k)
    seq_diff = (
        BinomialSum.from_seq(b, args.k)
        + BinomialSum.from_seq(c, args.k)
        - BinomialSum.from_seq(outcome.b_out, args.k)
        - BinomialSum.from_seq(outcome.c_out, args.k)
        - outcome.pavement.to_sum()
        - outcome.shared
    )
    wall_diff = (
        wall.expand()
        - outcome.wall_out.expand()
        - outcome.rubble.to_sum()
        - outcome.shared
    )
    _emit(
        {
            "wall_out": {"w": list(outcome.wall_out.w), "level": outcome.wall_out.level},
            "b_out": list(outcome.b_out.terms),
            "c_out": list(outcome.c_out.terms),
            "rubble": list(outcome.rubble.uppers),
            "pavement": list(outcome.pavement.columns),
            "shared": [[u, l, c_] for (u, l), c_ in outcome.shared.items()],
            "identities_invariant": [
                is_invariantly_zero(seq_diff),
                is_invariantly_zero(wall_diff),
            ],
        }
    )
    return 0


_TERM_RE = re.compile(
    r"\s*([+-]?)\s*(?:(\d+)\s*\*\s*)?C\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)"
)


def parse_binomial_sum(text: str) -> BinomialSum:
    """Parse sums like ``C(1,0) - C(0,0) - C(0,-1)`` or ``2*C(5,3) + C(4,2)``."""
    pos = 0
    terms = []
    while pos < len(text):
        match = _TERM_RE.match(text, pos)
        if not match:
            if text[pos:].strip():
                raise ValueError(f"cannot parse binomial sum near {text[pos:]!r}")
            break
        sign, coeff, upper, lower = match.groups()
        value = int(coeff) if coeff else 1
        if sign == "-":
            value = -value
        terms.append(((int(upper), int(lower)), value))
        pos = match.end()
    if not terms:
        raise ValueError("empty binomial sum")
    return BinomialSum(terms)


def _cmd_identity(args) -> int:
    total = parse_binomial_sum(args.sum)
    invariant = is_invariantly_zero(total)
    _emit(
        {
            "sum": args.sum,
            "invariantly_zero": invariant,
            "zero_on_grid": is_zero_on_grid(total),
            "pointwise_value": total.evaluate(),
        }
    )
    return 0 if invariant else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shadowlab",
        description="Exact shadow-minimization toolkit for k-set families",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="cascade decomposition of m at level k")
    p.add_argument("m", type=int)
    p.add_argument("k", type=int)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("bound", help="minimum shadow bound for m sets at level k")
    p.add_argument("m", type=int)
    p.add_argument("k", type=int)
    p.add_argument("--iter", type=int, default=1)
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("shadow", help="iterated or upper shadow of a family file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--iter", type=int, default=1)
    p.add_argument("--upper", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_shadow)

    p = sub.add_parser("check", help="extremality and characterization checks")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument(
        "--mode", choices=("direct", "characterize", "both"), default="direct"
    )
    p.add_argument("--witness", type=int)
    p.add_argument("--chain", action="store_true")
    p.add_argument("--compact", action="store_true")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("enumerate", help="all extremal families of one size")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.add_argument("m", type=int)
    p.add_argument("--up-to-iso", action="store_true")
    p.add_argument("--method", choices=("exhaustive", "recursive"), default="exhaustive")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("oracle", help="brute-force oracles")
    oracle_sub = p.add_subparsers(dest="oracle", required=True)
    q = oracle_sub.add_parser("min-shadow")
    q.add_argument("n", type=int)
    q.add_argument("k", type=int)
    q.add_argument("m", type=int)
    q.add_argument("--budget", type=int, help="combination budget override")
    q.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("construct", help="explicit families")
    con = p.add_subparsers(dest="what", required=True)
    q = con.add_parser("colex")
    q.add_argument("n", type=int)
    q.add_argument("k", type=int)
    q.add_argument("m", type=int)
    q.add_argument("--out")
    q.set_defaults(func=_cmd_construct)
    q = con.add_parser("forbidden-pairs")
    q.add_argument("n", type=int)
    q.add_argument("k", type=int)
    q.add_argument("m", type=int)
    q.add_argument("--t", type=int)
    q.add_argument("--r", type=int)
    q.add_argument("--materialize", action="store_true")
    q.add_argument("--out")
    q.set_defaults(func=_cmd_construct)
    q = con.add_parser("example32")
    q.add_argument("n", type=int)
    q.add_argument("k", type=int)
    q.add_argument("--variant", choices=("b", "c"), default="b")
    q.add_argument("--out")
    q.set_defaults(func=_cmd_construct)
    q = con.add_parser("example33")
    q.add_argument("n", type=int)
    q.add_argument("k", type=int)
    q.add_argument("--out")
    q.set_defaults(func=_cmd_construct)
    q = con.add_parser("perturbed")
    q.add_argument("n", type=int)
    q.add_argument("k", type=int)
    q.add_argument("m", type=int)
    q.add_argument("--out")
    q.set_defaults(func=_cmd_construct)

    p = sub.add_parser("verify", help="exhaustive verification sweeps")
    ver = p.add_subparsers(dest="what", required=True)
    q = ver.add_parser("lemma-abc")
    q.add_argument("--amax", type=int, default=10)
    q.add_argument("--kmax", type=int, default=5)
    q.add_argument("--threads", type=int, default=_default_threads())
    q.set_defaults(func=_cmd_verify)
    q = ver.add_parser("splits")
    q.add_argument("--amax", type=int, default=8)
    q.add_argument("--kmax", type=int, default=5)
    q.set_defaults(func=_cmd_verify)
    q = ver.add_parser("min-degree")
    q.add_argument("n", type=int)
    q.add_argument("k", type=int)
    q.set_defaults(func=_cmd_verify)
    q = ver.add_parser("uniqueness")
    q.add_argument("n", type=int)
    q.add_argument("k", type=int)
    q.set_defaults(func=_cmd_verify)
    q = ver.add_parser("conjecture")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--xmax", type=float, default=12.0)
    q.add_argument("--step", type=float, default=0.25)
    q.add_argument("--y-samples", type=int, default=41)
    q.set_defaults(func=_cmd_verify)

    p = sub.add_parser("reduce", help="wall reduction of a dominated pair")
    p.add_argument("--wall", required=True, help="w0,w1,..:level")
    p.add_argument("--b", required=True, help="comma-separated terms")
    p.add_argument("--c", default="", help="comma-separated terms (may be empty)")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("identity", help="translation-invariance decision")
    idsub = p.add_subparsers(dest="identity", required=True)
    q = idsub.add_parser("check")
    q.add_argument("--sum", required=True)
    q.set_defaults(func=_cmd_identity)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    raw = list(sys.argv[1:] if argv is None else argv)
    # worker count is an execution knob, not an input: reports stay
    # byte-identical across thread settings
    echo = []
    skip = False
    for token in raw:
        if skip:
            skip = False
            continue
        if token == "--threads":
            skip = True
            continue
        if token.startswith("--threads="):
            continue
        echo.append(token)
    _command_echo[:] = echo
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (BudgetError, ExactOverflowError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
