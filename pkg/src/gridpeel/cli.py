"""Command-line front end: peels, sweeps, censuses, verification suites.

Exit codes: 0 success, 2 usage/contract error, 3 internal invariant
violation, 4 verification-suite failure. Identical arguments and seed
produce byte-identical output files.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass

from .analysis import (
    andrews_audit,
    audit_to_csv,
    categories_to_csv,
    category_sweep,
    exponent_fit,
    face_count_audit,
    fit_report_json_obj,
    fit_to_csv,
    max_andrews_ratio,
)
from .hull import oracle_extreme, oracle_peel
from .lattice import (
    CALIBRATED_ALPHA,
    census_report,
    enumerate_directions,
    filter_directions,
    hyperplane_count,
    jordan_totient,
    primitive_normal,
    zeta,
)
from .peeling import (
    PeelOptions,
    dump_json,
    grid_trace,
    peel_all,
    restriction_equivalence_check,
    tau_grid,
    trace_to_csv,
    trace_to_json_obj,
)
from .points import ContractError, DegeneracyError, InvariantError, PointSet, grid


def _threads(value: int) -> int:
    if value and value > 0:
        return value
    return os.cpu_count() or 1


def _options(args) -> PeelOptions:
    return PeelOptions(
        fvectors=getattr(args, "fvectors", False),
        volumes=getattr(args, "volumes", False),
        store_points=getattr(args, "store_points", False)
        or getattr(args, "categories", False),
        symmetry=getattr(args, "symmetry", False),
        backend=getattr(args, "backend", None),
        threads=_threads(getattr(args, "threads", 0)),
    )


def _write(path: str, text: str):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w") as fh:
        fh.write(text)
    print(f"wrote {path}")


def cmd_peel(args) -> int:
    if args.n < 1 or args.d < 1:
        raise ContractError("need n >= 1 and d >= 1")
    if args.categories and args.mu is None:
        raise ContractError("--categories requires --mu")
    opts = _options(args)
    trace = grid_trace(args.n, args.d, opts)
    trace.seed = args.seed
    print(f"tau={trace.tau}")
    csv_text = trace_to_csv(trace, seed=args.seed)
    cat_text = None
    audit_text = None
    if args.categories:
        nu = args.nu
        if nu is None and args.alpha is not None:
            nu = args.alpha * args.mu ** (1.0 / args.d)
        cats = category_sweep(trace, args.mu, filtered=args.filtered, nu=nu)
        cat_text = categories_to_csv(cats)
    if args.fvectors and args.d == 3:
        face = face_count_audit(trace)
        andrews = andrews_audit(trace) if args.volumes else None
        audit_text = audit_to_csv(face, andrews)
    if args.out:
        stem = os.path.join(args.out, f"peel_d{args.d}_n{args.n}")
        _write(stem + ".json",
               dump_json(trace_to_json_obj(trace, include_points=args.store_points)))
        _write(stem + ".csv", csv_text)
        if cat_text is not None:
            _write(stem + "_categories.csv", cat_text)
        if audit_text is not None:
            _write(stem + "_audit.csv", audit_text)
    else:
        sys.stdout.write(csv_text)
        if cat_text is not None:
            sys.stdout.write(cat_text)
        if audit_text is not None:
            sys.stdout.write(audit_text)
    return 0


def cmd_sweep(args) -> int:
    ns = args.n_list
    if args.d < 1:
        raise ContractError("need d >= 1")
    opts = PeelOptions(
        symmetry=args.symmetry,
        backend=args.backend,
        threads=_threads(args.threads),
    )
    pairs = [(n, tau_grid(n, args.d, opts)) for n in ns]
    target = 2 * args.d / (args.d + 1)
    report = exponent_fit(pairs, target)
    obj = fit_report_json_obj(report)
    obj["pairs"] = [list(p) for p in report.pairs]
    obj["seed"] = args.seed
    obj["target_distance"] = abs(report.slope - target)
    if args.d == 3:
        # conjectured exponent and the proven upper-bound exponent 24/11
        obj["upper_exponent"] = 24 / 11
        obj["upper_distance"] = abs(report.slope - 24 / 11)
    text = dump_json(obj)
    sys.stdout.write(text)
    if args.out:
        stem = os.path.join(args.out, f"fit_d{args.d}")
        _write(stem + ".csv", fit_to_csv(report))
        _write(stem + ".json", text)
    return 0


def cmd_census(args) -> int:
    report = census_report(args.mu, args.d)
    obj = {
        "d": report.d,
        "mu": report.mu,
        "exact_count": report.exact_count,
        "jordan_sum": report.jordan_sum,
        "density_ratio": report.density_ratio,
        "seed": args.seed,
    }
    text = dump_json(obj)
    sys.stdout.write(text)
    if args.out:
        _write(os.path.join(args.out, f"census_d{args.d}_mu{args.mu}.json"), text)
    return 0


# verification suites ---------------------------------------------------


def _random_subset(rng: random.Random, n: int, d: int) -> PointSet:
    density = rng.uniform(0.2, 0.8)
    pts = [p for p in grid(n, d) if rng.random() < density]
    if not pts:
        pts = [tuple(rng.randint(1, n) for _ in range(d))]
    return PointSet(pts, dim=d)


def _suite_oracle(args):
    samples = args.samples or 25
    rng = random.Random(args.seed)
    predicate = oracle_extreme
    if args.inject_fault:
        # deliberately corrupted predicate: flips the verdict on the
        # lexicographically smallest point, which is always extreme
        def predicate(p, s):
            return oracle_extreme(p, s) ^ (p == s.points[0])
    checked = failures = 0
    for d, n in ((3, 6), (2, 8)):
        for _ in range(samples):
            ps = _random_subset(rng, n, d)
            checked += 1
            try:
                expected = oracle_peel(ps, predicate)
            except InvariantError:
                # a broken predicate can empty a shell outright
                failures += 1
                continue
            got = [tuple(layer.points) for layer in peel_all(ps).layers]
            if expected != got:
                failures += 1
    return failures == 0, {"checked": checked, "failures": failures}


def _suite_euler(args):
    n = args.n or 7
    mu = args.mu or 1
    trace = grid_trace(n, 3, PeelOptions(fvectors=True, volumes=True,
                                         store_points=True))
    cats = category_sweep(trace, mu)
    audit = face_count_audit(trace, cats)
    bad = [a.layer_index for a in audit if not a.all_ok()]
    ratio = max_andrews_ratio(andrews_audit(trace))
    detail = {"n": n, "mu": mu, "tau": trace.tau, "layers": len(audit),
              "failures": len(bad), "max_andrews_ratio": ratio}
    return not bad, detail


def _suite_lemma2(args):
    n_max = args.n or 50
    mu = args.mu or 5
    checked = failures = 0
    for d in (2, 3):
        for v in enumerate_directions(mu, d):
            top = max(v)
            for n in range(1, n_max + 1):
                count = hyperplane_count(v, n)
                checked += 1
                if count > d * n * top or count > d * n * mu:
                    failures += 1
    return failures == 0, {"checked": checked, "failures": failures,
                           "mu": mu, "n_max": n_max}


def _suite_lemma3(args):
    from math import gcd

    k_max = args.n or 50
    failures = 0
    # Moebius-sum formula against the definition: r-tuples coprime with k
    checked = 0
    for r in (1, 2, 3):
        for k in range(1, k_max + 1):
            direct = 0
            for t in range(k**r):
                g = k
                rem = t
                for _ in range(r):
                    g = gcd(g, rem % k + 1)
                    rem //= k
                if g == 1:
                    direct += 1
            checked += 1
            if direct != jordan_totient(r, k):
                failures += 1
    # census growth: one scan of V_60 gives every |V_m| by max coordinate
    hist = [0] * 61
    import itertools as it

    for v in it.product(range(61), repeat=3):
        g = 0
        for c in v:
            g = gcd(g, c)
        if g == 1:
            hist[max(v)] += 1
    exact = 0
    jsum = 0
    for m in range(1, 61):
        exact += hist[m]
        jsum += jordan_totient(2, m)
        checked += 1
        if jsum > exact:
            failures += 1
    density = exact * zeta(3) / 60**3
    checked += 1
    if not 0.9 <= density <= 1.1:
        failures += 1
    return failures == 0, {"checked": checked, "failures": failures,
                           "v60": exact, "density_ratio": density}


def _suite_lemma4(args):
    alpha = args.alpha if args.alpha is not None else CALIBRATED_ALPHA[3]
    failures = 0
    sizes = {}
    for mu in (5, 10, 20, 40):
        ds = enumerate_directions(mu, 3)
        kept = len(filter_directions(ds, alpha * mu ** (1.0 / 3.0)))
        sizes[str(mu)] = [kept, len(ds)]
        if 2 * kept < len(ds):
            failures += 1
    return failures == 0, {"alpha": alpha, "kept_of_total": sizes,
                           "failures": failures}


def _suite_restriction(args):
    n = args.n or 5
    samples = args.samples or 50
    rng = random.Random(args.seed)
    checked = failures = 0
    for _ in range(samples):
        ps = _random_subset(rng, n, 3)
        for face in range(6):
            ok, aligned = restriction_equivalence_check(ps, face, n=n,
                                                        detail=True)
            checked += 1
            if not (ok and aligned):
                failures += 1
    return failures == 0, {"samples": samples, "checked": checked,
                           "failures": failures}


def _suite_lemma1(args):
    n = args.n or 20
    samples = args.samples or 1000
    rng = random.Random(args.seed)
    bound = 2 * n * n  # (d-1)^((d-1)/2) * n^(d-1) for d = 3
    checked = failures = skipped = 0
    while checked + skipped < samples:
        pts = [tuple(rng.randint(1, n) for _ in range(3)) for _ in range(3)]
        try:
            normal = primitive_normal(pts)
        except DegeneracyError:
            skipped += 1
            continue
        checked += 1
        if max(abs(c) for c in normal) > bound:
            failures += 1
    return failures == 0, {"checked": checked, "degenerate_skipped": skipped,
                           "failures": failures, "bound": bound}


SUITES = {
    "oracle": _suite_oracle,
    "euler": _suite_euler,
    "lemma1": _suite_lemma1,
    "lemma2": _suite_lemma2,
    "lemma3": _suite_lemma3,
    "lemma4": _suite_lemma4,
    "restriction": _suite_restriction,
}


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    all_ok = True
    for name in names:
        passed, detail = SUITES[name](args)
        all_ok = all_ok and passed
        line = {"suite": name, "passed": passed}
        line.update(detail)
        print(json.dumps(line, sort_keys=True))
    return 0 if all_ok else 4


def _add_common(p):
    p.add_argument("--seed", type=int, default=0,
                   help="seed recorded in outputs and used for sampling")
    p.add_argument("--out", help="directory for output files")
    p.add_argument("--threads", type=int, default=0,
                   help="worker threads (0 = auto)")
    p.add_argument("--backend", choices=["auto", "c", "python"], default=None,
                   help="kernel backend override")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridpeel",
        description="Convex-layer peeling of integer grids, exactly.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("peel", help="peel one grid and report the trace")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mu", type=int)
    p.add_argument("--nu", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--fvectors", action="store_true")
    p.add_argument("--volumes", action="store_true")
    p.add_argument("--categories", action="store_true")
    p.add_argument("--filtered", action="store_true")
    p.add_argument("--store-points", action="store_true", dest="store_points")
    p.add_argument("--symmetry", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_peel)

    p = sub.add_parser("sweep", help="tau over an n-list plus exponent fit")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n-list", type=lambda s: [int(x) for x in s.split(",")],
                   required=True, dest="n_list")
    p.add_argument("--symmetry", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("census", help="primitive-direction census")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--mu", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("verify", help="run the verification suites")
    p.add_argument("--suite", default="all",
                   choices=["all"] + sorted(SUITES))
    p.add_argument("--n", type=int)
    p.add_argument("--mu", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--samples", type=int)
    p.add_argument("--inject-fault", action="store_true", dest="inject_fault",
                   help="corrupt the extremeness predicate (self test)")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ContractError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvariantError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
