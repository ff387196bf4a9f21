"""Acceptance gate: one test and one printed pass/fail line per criterion."""

import io
import itertools
import json
import random
import time

import pytest

from shiftlab import bounds_lab
from shiftlab.certificate import dumps, verify_certificate
from shiftlab.cli import reports_to_csv, run
from shiftlab.convolutions import (
    check_section2,
    circ,
    energy,
    energy_k,
    star,
)
from shiftlab.errors import CertificateError
from shiftlab.field_core import ResidueSet, invariant_set, is_prime, make_field, subgroup_of_order
from shiftlab.poly import DensePoly, vanishing_order
from shiftlab.stepanov import build_certificate, default_B
from shiftlab.wronskian import (
    independent_by_rank,
    independent_by_wronskian,
    prop32_conditions,
    prop32_family,
)

pytestmark = pytest.mark.acceptance

PRIMES_2000 = [p for p in range(3, 2000) if is_prime(p)]


def _timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


def test_criterion_1_energy_identities(criterion):
    def body():
        bad = []
        for i in range(200):
            rng = random.Random(1000 + i)
            F = make_field(rng.choice([101, 499, 1009]))
            A = F.residues(rng.sample(range(F.p), rng.randint(1, 12)))
            B = F.residues(rng.sample(range(F.p), rng.randint(1, 12)))
            via_star = star(A, B).power_sum(2)
            via_circ = circ(A, B).power_sum(2)
            aa, bb = circ(A, A), circ(B, B)
            via_mixed = sum(c * bb[x] for (x,), c in aa.items())
            if not via_star == via_circ == via_mixed == energy(A, B):
                bad.append(("eq6", i))
            for k in (2, 3, 4):
                if energy_k(A, k, method="brute") != energy_k(A, k, method="fast"):
                    bad.append((f"E_{k}", i))
        return bad

    bad, secs = _timed(body)
    ok = not bad and secs < 60
    criterion(1, ok, f"200 pairs, {len(bad)} mismatches, {secs:.1f}s (limit 60s)")
    assert ok, bad[:5]


def test_criterion_2_section2_suite(criterion):
    def body():
        failures, shifted_runs = [], 0
        for i in range(100):
            rng = random.Random(2000 + i)
            F = make_field(rng.choice([101, 499, 1009]))
            A = F.residues(rng.sample(range(F.p), rng.randint(1, 12)))
            B = F.residues(rng.sample(range(F.p), rng.randint(1, 12)))
            k, l = rng.randint(2, 3), rng.randint(1, 3)
            with_shifted = len(A) <= 10
            shifted_runs += with_shifted
            # every shift vector of length at most 1
            rep = check_section2(A, B, k, l, seed=i, shifted_sums=with_shifted, shifted_max_ones=k)
            failures.extend((i, name) for name in rep.failures())
        return failures, shifted_runs

    (failures, n_shifted), secs = _timed(body)
    ok = not failures and secs < 120 and n_shifted > 0
    criterion(2, ok, f"100 instances ({n_shifted} with shifted-energy identities), {len(failures)} failed items, "
                     f"{secs:.1f}s (limit 120s)")
    assert ok, failures[:5]


def test_criterion_3_garcia_voloch(criterion):
    def body():
        total = failed = 0
        for p in PRIMES_2000:
            for rep in bounds_lab.garcia_voloch_check(make_field(p)):
                total += 1
                failed += rep.verdict != bounds_lab.PASS
        return total, failed

    (total, failed), secs = _timed(body)
    ok = failed == 0 and total > 0 and secs < 300
    criterion(3, ok, f"{total} (p, t, mu-coset) checks over p < 2000, {failed} failures, {secs:.1f}s (limit 300s)")
    assert ok


def _thm11_instances():
    rng = random.Random(44)
    out = []
    for t in range(100, 201, 4):
        R_cosets = rng.randint(1, 5)
        p = next(q for q in range(t + 1, 50_000, t) if q >= 5000 and is_prime(q))
        F = make_field(p)
        R = subgroup_of_order(F, t)
        Q = invariant_set(R, rng.sample(R.coset_reps(), R_cosets))
        need = 4 * t * (len(Q) ** (1 / 3) + 1)
        if p < need:
            p = next(q for q in range(p, 50_000, t) if q >= need and is_prime(q))
            F = make_field(p)
            R = subgroup_of_order(F, t)
            Q = invariant_set(R, rng.sample(R.coset_reps(), R_cosets))
        out.append((R, Q, [rng.randrange(1, p)]))
    return out


def test_criterion_4_theorem11(criterion):
    def body():
        reports = [bounds_lab.theorem11_check(R, Q, mu) for R, Q, mu in _thm11_instances()]
        return reports

    reports, secs = _timed(body)
    genuine = [r for r in reports if r.hypothesis_ok]
    passed = [r for r in genuine if r.verdict == bounds_lab.PASS]
    in_range = all(100 <= r.t <= 200 and r.q_size <= 5 * r.t and 5000 <= r.p <= 50_000 for r in genuine)
    ok = len(genuine) >= 20 and len(passed) == len(genuine) and in_range and secs < 600
    worst = max(r.ratio for r in genuine) if genuine else float("nan")
    criterion(4, ok, f"{len(genuine)} instances with hypotheses satisfied, {len(passed)} PASS, "
                     f"max lhs/rhs {worst:.3f}, {secs:.1f}s (limit 600s)")
    assert ok


CERT_CASES = [(80, 1), (100, 1), (120, 1), (150, 1), (200, 1), (300, 1), (80, 2), (120, 2), (200, 2), (300, 2)]


def _cert_instance(t, s, rng):
    B = default_B(t, s, 1)
    p = next(q for q in range((2 * B + 2) * t, 10**6) if (q - 1) % t == 0 and is_prime(q))
    R = subgroup_of_order(make_field(p), t)
    diffs = sorted({(a - b) % p for a in R for b in R} - {0})
    mu = [rng.choice(diffs)]
    return R, mu, R.coset_reps()[:s]


def test_criterion_5_stepanov_certificates(criterion):
    def body():
        rng = random.Random(55)
        lines = []
        for t, s in CERT_CASES:
            R, mu, lambdas = _cert_instance(t, s, rng)
            cert = build_certificate(R, mu, lambdas)
            psi = cert.diagnostics["psi"]
            exact_points = [x * pow(lam, -1, R.p) % R.p for lam in lambdas
                            for x in bounds_lab.shifted_intersection(R, mu, lam)]
            orders_ok = all(vanishing_order(psi, x, cert.D) >= cert.D for x in exact_points)
            bound_ok = cert.claimed_bound * cert.D < 2 * t * cert.B and cert.claimed_bound >= len(exact_points)
            doc = json.loads(dumps(cert))
            accepted = verify_certificate(doc)["E_size"] == len(exact_points)
            tampered = json.loads(dumps(cert))
            row = tampered["coeff_vector"][rng.randrange(len(tampered["coeff_vector"]))]
            row[-1] = row[-1] % (R.p - 1) + 1
            try:
                verify_certificate(tampered)
                rejected = False
            except CertificateError:
                rejected = True
            lines.append((t, s, not psi.is_zero(), orders_ok, bound_ok, accepted, rejected, len(exact_points), cert.claimed_bound))
        return lines

    lines, secs = _timed(body)
    good = [ln for ln in lines if all(ln[2:7])]
    ok = len(good) == len(CERT_CASES) >= 10 and secs < 600
    sizes = ", ".join(f"t={t},s={s}:|E|={e}<={b}" for t, s, *_, e, b in lines)
    criterion(5, ok, f"{len(good)}/{len(lines)} certificates built, verified and tamper-rejected "
                     f"[{sizes}], {secs:.1f}s (limit 600s)")
    assert ok, lines


def test_criterion_6_wronskian(criterion):
    def body():
        rng = random.Random(66)
        disagreements = 0
        dependent = 0
        for _ in range(200):
            p = rng.choice([1009, 10007, 65537])
            l = rng.randint(1, 5)
            fam = [DensePoly.of(p, [rng.randrange(p) for _ in range(rng.randint(1, 41))]) for _ in range(l)]
            if l >= 2 and rng.random() < 0.4:
                combo = DensePoly.zero(p)
                for f in fam[:-1]:
                    combo = combo + f.scale(rng.randrange(1, p))
                fam[-1] = combo if not combo.is_zero() else fam[-1]
            fam = [f if not f.is_zero() else DensePoly.constant(p, 1) for f in fam]
            by_rank = independent_by_rank(fam)
            dependent += not by_rank
            disagreements += independent_by_wronskian(fam) != by_rank
        grids = 0
        grid_failures = 0
        for n in (1, 2):
            for B in (1, 2):
                for D in (1, 2, 3):
                    t = next(t for t in range(1, 200) if 2 * t >= (n - 1) * B ** (2 * n) + 2 * D * B**n)
                    for t_try in (t, t + 1, t + 3):
                        p = next(q for q in range((2 * n * B + 2) * t_try, 10**5) if is_prime(q) and q > 1000)
                        assert all(prop32_conditions(n, t_try, B, D, p).values())
                        alpha = rng.sample(range(1, p), n)
                        grids += 1
                        grid_failures += not independent_by_rank(prop32_family(p, n, t_try, B, D, alpha))
        return disagreements, dependent, grids, grid_failures

    (dis, dep, grids, gfail), secs = _timed(body)
    ok = dis == 0 and gfail == 0 and secs < 60
    criterion(6, ok, f"200 families ({dep} dependent), {dis} disagreements; {grids} grid families, "
                     f"{gfail} dependent; {secs:.1f}s (limit 60s)")
    assert ok


def test_criterion_7_theorem55_chain(criterion, tmp_path):
    def body():
        reports = []
        for p in range(3, 5000):
            if not is_prime(p):
                continue
            F = make_field(p)
            for t in F.divisors():
                if t * t <= p:
                    R = subgroup_of_order(F, t)
                    reports.extend(bounds_lab.theorem55_report(R))
                    reports.append(bounds_lab.lemma54_report(R))
        return reports

    reports, secs = _timed(body)
    chain = [r for r in reports if r.name == "thm5.5-chain"]
    failed = [r for r in chain if r.verdict != bounds_lab.PASS]
    (tmp_path / "ratios.csv").write_text(reports_to_csv([r for r in reports if r.verdict == bounds_lab.REPORT_ONLY]))
    def worst(name):
        return max(r.ratio for r in reports if r.name == name)
    ok = chain and not failed and secs < 600
    criterion(7, ok, f"{len(chain)} subgroups with |R|^2 <= p, p < 5000: {len(failed)} chain failures; "
                     f"max ratios (report only) minus {worst('thm5.5-ratio-minus'):.3f}, "
                     f"plus {worst('thm5.5-ratio-plus'):.3f}, E3 {worst('lemma5.4'):.3f}; {secs:.1f}s (limit 600s)")
    assert ok


def test_criterion_8_fourier(criterion):
    def body():
        rng = random.Random(88)
        worst_residual = 0.0
        count = 0
        for p in [q for q in range(3, 10_000) if is_prime(q)][::25]:
            F = make_field(p)
            t = rng.choice(F.divisors())
            R = subgroup_of_order(F, t)
            Q = invariant_set(R, rng.sample(R.coset_reps(), min(3, len(R.coset_reps()))))
            bounds_lab.statement53_report(R, Q)
            worst_residual = max(worst_residual, bounds_lab.fourier_stats(Q)[1])
            count += 1
        full_ok = all(bounds_lab.fourier_max(make_field(p).full()) < 1e-6 * p for p in (13, 101, 1009, 9973))
        return count, worst_residual, full_ok

    (count, residual, full_ok), secs = _timed(body)
    ok = residual < 1e-6 and full_ok and secs < 120
    criterion(8, ok, f"{count} invariant sets, worst Parseval residual {residual:.2e}; "
                     f"full field max {'< 1e-6 p' if full_ok else 'too large'}; {secs:.1f}s (limit 120s)")
    assert ok


def test_criterion_9_determinism(criterion, tmp_path):
    cfg = tmp_path / "scan.ini"
    cfg.write_text("[scan]\nprime_range = 3,150\norders = all\nk = 1,2\nseeds = 2\nseed = 9\n")
    outputs = []
    for run_id in ("a", "b"):
        code = run(["scan", "--config", str(cfg), "--output", str(tmp_path / run_id)], out=io.StringIO())
        assert code == 0
        outputs.append((tmp_path / run_id / "report.csv").read_bytes())
    certs = []
    for run_id in ("a", "b"):
        path = tmp_path / f"cert_{run_id}.json"
        code = run(["certify", "--prime", "6301", "--order", "300", "--mu", "7", "--lambdas", "1,2",
                    "--out", str(path)], out=io.StringIO())
        assert code == 0
        certs.append(path.read_bytes())
    ok = outputs[0] == outputs[1] and certs[0] == certs[1]
    criterion(9, ok, f"scan CSV ({len(outputs[0])} bytes) and certificate JSON ({len(certs[0])} bytes) byte-identical")
    assert ok
