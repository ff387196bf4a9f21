"""Certificate serialization and independent re-verification.

The verifier never touches the builder's solver: it recomputes the subgroup
by scanning x^t = 1, re-enumerates the family sets, re-assembles Psi from the
stored coefficients and checks vanishing orders through Hasse derivatives
(H_j Psi(x) = sum_i C(i, j) c_i x^(i-j)) rather than synthetic division.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import CertificateError, ZeroPsiError
from .field_core import is_prime
from .poly import int64_safe
from .stepanov import (
    StepanovCertificate,
    assemble_psi,
    claimed_bound_for,
    psi_degree_bound,
    vanishing_D,
)

FIELDS = (
    "p", "t", "k", "mu", "lambdas", "B", "D", "s",
    "coeff_vector", "psi_degree", "claimed_bound", "verified_points",
)


def certificate_to_dict(cert: StepanovCertificate) -> dict:
    doc = {name: getattr(cert, name) for name in FIELDS}
    doc["mu"] = list(cert.mu)
    doc["lambdas"] = list(cert.lambdas)
    doc["coeff_vector"] = cert.coefficient_rows()
    return doc


def dumps(cert: StepanovCertificate) -> str:
    """Bit-exact JSON: fixed key order, one coefficient row per line."""
    doc = certificate_to_dict(cert)
    lines = ["{"]
    for i, name in enumerate(FIELDS):
        tail = "," if i < len(FIELDS) - 1 else ""
        if name == "coeff_vector":
            rows = doc[name]
            body = ",\n".join("    " + json.dumps(r, separators=(", ", ": ")) for r in rows)
            lines.append(f'  "{name}": [\n{body}\n  ]{tail}' if rows else f'  "{name}": []{tail}')
        else:
            lines.append(f'  "{name}": {json.dumps(doc[name])}{tail}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def write(cert: StepanovCertificate, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(dumps(cert))


def load(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _require(cond, reason):
    if not cond:
        raise CertificateError(reason)


def hasse_values(coeffs, xs, p, count):
    """H_j P(x) for j < count at every x; returns an array (len(xs), count)."""
    c = np.asarray(coeffs, dtype=object if not int64_safe(p, 2) else np.int64)
    n = len(c)
    out = np.zeros((len(xs), count), dtype=object)
    if not n:
        return out
    pts = [int(x) % p for x in xs]
    if int64_safe(p, n):
        xarr = np.asarray(pts, dtype=np.int64)
        powers = np.ones((len(pts), n), dtype=np.int64)
        for i in range(1, n):
            powers[:, i] = powers[:, i - 1] * xarr % p
        binom = np.ones(n, dtype=np.int64)
        for j in range(count):
            if j:
                shifted = np.concatenate(([0], binom[:-1]))
                binom = np.cumsum(shifted) % p
            weights = binom[j:] * c[j:] % p
            out[:, j] = ((powers[:, : n - j] * weights) % p).sum(axis=1) % p
        return out
    for r, x in enumerate(pts):
        for j in range(count):
            acc = 0
            for i in range(j, n):
                acc += _binom_mod(i, j, p) * int(c[i]) * pow(x, i - j, p)
            out[r, j] = acc % p
    return out


def _binom_mod(i, j, p):
    from math import comb

    return comb(i, j) % p


def verify_certificate(doc: dict) -> dict:
    """Re-check a certificate document; raise CertificateError on any failure.

    Returns a summary with the recomputed |E| and the minimal vanishing order.
    """
    missing = [f for f in FIELDS if f not in doc]
    _require(not missing, f"missing fields: {missing}")
    p, t, k, s = (int(doc[f]) for f in ("p", "t", "k", "s"))
    B, D = int(doc["B"]), int(doc["D"])
    mu = [int(m) for m in doc["mu"]]
    lambdas = [int(x) for x in doc["lambdas"]]
    _require(is_prime(p), f"p = {p} is not prime")
    _require(t >= 1 and (p - 1) % t == 0, f"t = {t} does not divide p - 1")
    _require(k == len(mu) and k >= 1, "k does not match the number of shifts")
    _require(s == len(lambdas) and s >= 1, "s does not match the number of lambdas")
    _require(all(0 < m < p for m in mu) and len(set(mu)) == k, "shifts must be distinct nonzero residues")
    _require(all(0 < x < p for x in lambdas), "lambdas must be nonzero residues")
    _require(k * B ** (2 * k) < t, "hypothesis k B^(2k) < t fails")
    _require(t * s < B ** (2 * k + 1), "hypothesis t s < B^(2k+1) fails")
    _require(p >= (2 * k * B + 2) * t, "hypothesis p >= (2kB + 2) t fails")
    _require(D == vanishing_D(t, k, B) and D >= 1, f"D = {D} does not equal floor(t / 2B^k)")

    coeffs = {}
    for row in doc["coeff_vector"]:
        _require(len(row) == k + 3, f"coefficient row {row} has wrong length")
        a, b, *c, val = (int(v) for v in row)
        _require(0 <= a < D and 0 <= b < B and all(0 <= cj < B for cj in c), f"index out of range in {row}")
        _require(0 < val < p, f"coefficient {val} is not a nonzero residue")
        key = (a, b, *c)
        _require(key not in coeffs, f"duplicate index {key}")
        coeffs[key] = val
    if not coeffs:
        raise ZeroPsiError("coefficient vector is empty")

    # subgroup by brute-force scan, family sets by direct membership tests
    R = {x for x in range(1, p) if pow(x, t, p) == 1}
    _require(len(R) == t, "subgroup scan found the wrong number of elements")
    points = []
    seen = set()
    for lam in lambdas:
        inv = pow(lam, -1, p)
        for x in sorted(R):
            if all((x - lam * m) % p in R for m in mu):
                moved = x * inv % p
                _require(moved not in seen, f"family sets overlap at {moved}")
                seen.add(moved)
                points.append(moved)

    psi = assemble_psi(p, t, mu, coeffs)
    if psi.is_zero():
        raise ZeroPsiError("assembled Psi is identically zero")
    _require(psi.degree == int(doc["psi_degree"]), f"deg Psi = {psi.degree}, certificate says {doc['psi_degree']}")
    _require(psi.degree <= psi_degree_bound(t, k, B, D), "deg Psi exceeds D - 1 + (k+1) t (B-1)")

    min_order = None
    if points:
        H = hasse_values(psi.coeffs, points, p, D)
        for x, row in zip(points, H):
            nz = [j for j in range(D) if int(row[j])]
            if nz:
                raise CertificateError(f"vanishing-order failure: Psi has order {nz[0]} < D = {D} at x = {x}")
        min_order = D

    bound = claimed_bound_for(t, k, B, D)
    _require(int(doc["claimed_bound"]) == bound, f"claimed_bound {doc['claimed_bound']} != {bound}")
    _require(len(points) <= bound, f"|E| = {len(points)} exceeds claimed bound {bound}")
    _require(int(doc["verified_points"]) == len(points), "verified_points does not match |E|")
    return {"E_size": len(points), "claimed_bound": bound, "min_order_checked": min_order, "psi_degree": psi.degree}
