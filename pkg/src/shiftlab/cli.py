"""Command-line front end (``shiftlab``).

Exit codes: 0 success, 1 any FAIL or rejected certificate, 2 usage error.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import io
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor

from . import bounds_lab, limits
from .certificate import load, verify_certificate, write
from .convolutions import check_section2, energy, energy_k_brute, energy_k_fast
from .errors import (
    BudgetExceededError,
    DuplicateCosetError,
    FieldOverflowError,
    HypothesisViolatedError,
    NotADivisorError,
    NotPrimeError,
    ShiftLabError,
    ZeroRepError,
    ZeroShiftError,
)
from .field_core import ResidueSet, invariant_set, is_prime, make_field, subgroup_of_order
from .stepanov import build_certificate

# bad arguments rather than failed checks
INPUT_ERRORS = (
    NotPrimeError, FieldOverflowError, NotADivisorError, ZeroShiftError,
    ZeroRepError, DuplicateCosetError, HypothesisViolatedError, ValueError,
)

THEOREMS = ("garcia-voloch", "thm1.1", "thm5.5-chain", "lemma5.4", "stmt5.3", "cor5.1", "cor5.6-coverage")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def instance_seed(seed: int, *key) -> int:
    """64-bit seed for one instance, split from the run seed by hashing the key."""
    text = ":".join(str(x) for x in (seed, *key))
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _field(p):
    if not is_prime(p):
        raise UsageError(f"{p} is not prime")
    return make_field(p)


# ---------------------------------------------------------------------------
# simple subcommands


def cmd_subgroups(args, out):
    F = _field(args.prime)
    print(f"p = {F.p}, primitive root g = {F.g}", file=out)
    for t in F.divisors():
        R = subgroup_of_order(F, t)
        print(f"order {t}: generator {R.generator}", file=out)
    return 0


def _format_set(S):
    return "{" + ", ".join(str(x) for x in S.elems) + "}"


def cmd_intersect(args, out):
    F = _field(args.prime)
    R = subgroup_of_order(F, args.order)
    S = bounds_lab.shifted_intersection(R, _int_list(args.mu), args.lam)
    print(_format_set(S), file=out)
    print(f"size {len(S)}", file=out)
    return 0


def cmd_identities(args, out):
    F = _field(args.prime)
    p = F.p
    if args.max_size < 1 or args.max_size > p:
        raise UsageError("--max-size must lie in 1..p")
    failures = 0
    for trial in range(args.trials):
        rng = random.Random(instance_seed(args.seed, "identities", p, trial))
        A = ResidueSet.of(F, rng.sample(range(p), rng.randint(1, args.max_size)))
        B = ResidueSet.of(F, rng.sample(range(p), rng.randint(1, args.max_size)))
        k, l = rng.randint(2, 3), rng.randint(1, 3)
        bad = []
        try:
            energy(A, B)
        except AssertionError as exc:
            bad.append(f"energy: {exc}")
        for m in (2, 3, 4):
            if energy_k_brute(A, m) != energy_k_fast(A, m):
                bad.append(f"E_{m}")
        rep = check_section2(A, B, k, l, seed=rng.getrandbits(63), shifted_sums=len(A) <= 10)
        bad.extend(rep.failures())
        if bad:
            failures += 1
            print(f"trial {trial}: FAIL {', '.join(bad)} A={list(A.elems)} B={list(B.elems)} k={k} l={l}", file=out)
    print(f"{args.trials - failures}/{args.trials} trials passed", file=out)
    return 1 if failures else 0


def cmd_certify(args, out):
    F = _field(args.prime)
    R = subgroup_of_order(F, args.order)
    mu, lambdas = _int_list(args.mu), _int_list(args.lambdas)
    cert = build_certificate(R, mu, lambdas, B_override=args.B)
    write(cert, args.out)
    exact = sum(len(bounds_lab.shifted_intersection(R, mu, lam)) for lam in lambdas)
    print(f"B = {cert.B}, D = {cert.D}, deg Psi = {cert.psi_degree}", file=out)
    print(f"claimed_bound {cert.claimed_bound} vs exact |E| {exact}", file=out)
    return 0 if exact <= cert.claimed_bound else 1


def cmd_verify_cert(args, out):
    try:
        doc = load(args.file)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read certificate: {exc}") from None
    try:
        summary = verify_certificate(doc)
    except (ShiftLabError, KeyError, TypeError, ValueError) as exc:
        print(f"REJECTED {type(exc).__name__}: {exc}", file=out)
        return 1
    print(f"ACCEPTED |E| = {summary['E_size']} <= {summary['claimed_bound']}, "
          f"order >= {summary['min_order_checked']} at every point, deg Psi = {summary['psi_degree']}", file=out)
    return 0


def cmd_fourier(args, out):
    F = _field(args.prime)
    R = subgroup_of_order(F, args.order)
    Q = invariant_set(R, _int_list(args.coset_reps)) if args.coset_reps else R
    top, residual = bounds_lab.fourier_stats(Q)
    print(f"max |Q^(xi)| over xi != 0: {top:.17g}", file=out)
    print(f"Parseval residual: {residual:.3g}", file=out)
    return 0 if residual < 1e-6 else 1


# ---------------------------------------------------------------------------
# scan


def parse_orders(spec: str):
    spec = spec.strip()
    if spec == "all":
        return ("all", None)
    if spec.startswith("max_below(") and spec.endswith(")"):
        try:
            return ("max_below", int(spec[len("max_below("):-1]))
        except ValueError:
            raise UsageError(f"bad orders filter {spec!r}") from None
    return ("list", _int_list(spec))


def select_orders(divisors, orders):
    kind, arg = orders
    if kind == "all":
        return list(divisors)
    if kind == "max_below":
        below = [d for d in divisors if d < arg]
        return below[-1:]
    return [d for d in divisors if d in arg]


def load_scan_config(path):
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise UsageError(f"cannot read config: {exc}") from None
    if "scan" not in parser:
        raise UsageError("config needs a [scan] section")
    sec = parser["scan"]
    try:
        lo, hi = _int_list(sec.get("prime_range", "3,100"))
    except ValueError:
        raise UsageError("prime_range must be 'lo,hi'") from None
    if lo < 3 or hi < lo:
        raise UsageError("prime_range needs 3 <= lo <= hi")
    theorems = [x.strip() for x in sec.get("theorems", ",".join(THEOREMS)).split(",") if x.strip()]
    unknown = set(theorems) - set(THEOREMS)
    if unknown:
        raise UsageError(f"unknown theorems: {sorted(unknown)}")
    budgets = {}
    if "budgets" in parser:
        for key, val in parser["budgets"].items():
            if key not in limits.DEFAULTS:
                raise UsageError(f"unknown budget {key!r}")
            try:
                budgets[key] = int(float(val))
            except ValueError:
                raise UsageError(f"budget {key} must be numeric") from None
            if budgets[key] <= 0:
                raise UsageError(f"budget {key} must be positive")
    try:
        cfg = {
            "prime_range": (lo, hi),
            "orders": parse_orders(sec.get("orders", "all")),
            "k": _int_list(sec.get("k", "1")),
            "seeds": sec.getint("seeds", 1),
            "seed": sec.getint("seed", 0),
            "max_cosets": sec.getint("max_cosets", 3),
            "theorems": theorems,
            "budgets": budgets,
            "output": sec.get("output", "."),
        }
    except ValueError as exc:
        raise UsageError(f"bad [scan] value: {exc}") from None
    if cfg["seeds"] < 1 or cfg["max_cosets"] < 1 or any(k < 1 for k in cfg["k"]):
        raise UsageError("seeds, max_cosets and k must be positive")
    return cfg


def _random_invariant(R, rng, max_cosets):
    reps = R.coset_reps()
    m = rng.randint(1, min(max_cosets, len(reps)))
    return invariant_set(R, rng.sample(reps, m))


def _random_mu(p, k, rng):
    return sorted(rng.sample(range(1, p), k))


def scan_prime(p, cfg):
    """All reports for one prime; returns (reports, skipped instance labels)."""
    with limits.override_limits(**cfg["budgets"]):
        return _scan_prime(p, cfg)


def _scan_prime(p, cfg):
    F = make_field(p)
    orders = select_orders(F.divisors(), cfg["orders"])
    reports, skipped = [], []

    def attempt(label, fn, tag=None):
        try:
            out = fn()
        except BudgetExceededError:
            skipped.append(label)
            return
        out = out if isinstance(out, list) else [out]
        if tag is not None:
            for rep in out:
                rep.instance = (*rep.instance, tag)
        reports.extend(out)

    if "garcia-voloch" in cfg["theorems"]:
        attempt(("garcia-voloch", p), lambda: bounds_lab.garcia_voloch_check(F, orders))
    for t in orders:
        R = subgroup_of_order(F, t)
        for i in range(cfg["seeds"]):
            if "thm1.1" in cfg["theorems"]:
                for k in cfg["k"]:
                    if k > p - 2:
                        continue
                    rng = random.Random(instance_seed(cfg["seed"], "thm1.1", p, t, k, i))
                    Q = _random_invariant(R, rng, cfg["max_cosets"])
                    mu = _random_mu(p, k, rng)
                    attempt(("thm1.1", p, t, k, i), lambda: bounds_lab.theorem11_check(R, Q, mu), f"seed{i}")
            if "stmt5.3" in cfg["theorems"]:
                rng = random.Random(instance_seed(cfg["seed"], "stmt5.3", p, t, i))
                Q = _random_invariant(R, rng, cfg["max_cosets"])
                attempt(("stmt5.3", p, t, i), lambda: bounds_lab.statement53_report(R, Q), f"seed{i}")
            if "cor5.1" in cfg["theorems"]:
                rng = random.Random(instance_seed(cfg["seed"], "cor5.1", p, t, i))
                Qs = [_random_invariant(R, rng, cfg["max_cosets"]) for _ in range(3)]
                attempt(("cor5.1", p, t, i), lambda: bounds_lab.cor51_report(R, *Qs), f"seed{i}")
        if "thm5.5-chain" in cfg["theorems"] and t * t <= p:
            attempt(("thm5.5", p, t), lambda: bounds_lab.theorem55_report(R))
        if "lemma5.4" in cfg["theorems"]:
            attempt(("lemma5.4", p, t), lambda: bounds_lab.lemma54_report(R))
        if "cor5.6-coverage" in cfg["theorems"]:
            attempt(("cor5.6", p, t), lambda: bounds_lab.cor56_report(R))
    return reports, skipped


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(bounds_lab.CSV_COLUMNS)
    for rep in sorted(reports, key=lambda r: r.sort_key()):
        writer.writerow(rep.csv_row())
    return buf.getvalue()


def summarize(reports):
    """Per-theorem verdict counts and the largest observed ratio."""
    table = {}
    for rep in reports:
        row = table.setdefault(rep.name, {"PASS": 0, "FAIL": 0, "REPORT_ONLY": 0, "max_ratio": None})
        row[rep.verdict] += 1
        r = rep.ratio
        if r is not None and (row["max_ratio"] is None or r > row["max_ratio"]):
            row["max_ratio"] = r
    return dict(sorted(table.items()))


def run_scan(cfg, jobs=1):
    lo, hi = cfg["prime_range"]
    primes = [p for p in range(lo, hi + 1) if is_prime(p)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(scan_prime, primes, [cfg] * len(primes)))
    else:
        results = [scan_prime(p, cfg) for p in primes]
    reports = [r for rs, _ in results for r in rs]
    skipped = sorted((s for _, ss in results for s in ss), key=str)
    return reports, skipped


def cmd_scan(args, out):
    cfg = load_scan_config(args.config)
    if args.seed is not None:
        cfg["seed"] = args.seed
    outdir = args.output or cfg["output"]
    if args.jobs < 1:
        raise UsageError("--jobs must be positive")
    reports, skipped = run_scan(cfg, args.jobs)
    os.makedirs(outdir, exist_ok=True)
    path = os.path.join(outdir, "report.csv")
    with open(path, "w", newline="") as fh:
        fh.write(reports_to_csv(reports))
    failed = False
    for name, row in summarize(reports).items():
        ratio = "" if row["max_ratio"] is None else f" max_ratio={row['max_ratio']:.6g}"
        print(f"{name}: PASS={row['PASS']} FAIL={row['FAIL']} REPORT_ONLY={row['REPORT_ONLY']}{ratio}", file=out)
        failed = failed or row["FAIL"] > 0
    if skipped:
        print(f"skipped {len(skipped)} instance(s) over budget", file=out)
    print(f"wrote {len(reports)} rows to {path}", file=out)
    return 1 if failed else 0


# ---------------------------------------------------------------------------


def build_parser():
    parser = _Parser(prog="shiftlab", description="Exact experiments on shifted multiplicative subgroups.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("subgroups", help="list subgroup orders and generators")
    p.add_argument("--prime", type=int, required=True)
    p.set_defaults(func=cmd_subgroups)

    p = sub.add_parser("intersect", help="exact shifted intersection")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--mu", required=True)
    p.add_argument("--lambda", dest="lam", type=int, default=1)
    p.set_defaults(func=cmd_intersect)

    p = sub.add_parser("identities", help="seeded convolution identity suite")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--max-size", type=int, default=8)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("certify", help="build and write an intersection certificate")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--mu", required=True)
    p.add_argument("--lambdas", required=True)
    p.add_argument("--B", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify-cert", help="independently re-check a certificate")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify_cert)

    p = sub.add_parser("scan", help="sweep theorems over a prime range and write CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("fourier", help="largest nontrivial Fourier coefficient of an invariant set")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--coset-reps", default=None)
    p.set_defaults(func=cmd_fourier)
    return parser


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except INPUT_ERRORS as exc:
        print(f"usage error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except ShiftLabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
