"""Stepanov auxiliary polynomials bounding shifted intersections of a subgroup.

Given a subgroup R of order t, distinct nonzero shifts mu_1..mu_k and
coset representatives lambda_1..lambda_s, the family sets are

    A_l = R n (R + lambda_l mu_1) n ... n (R + lambda_l mu_k).

Each A_l is moved into lambda_l^{-1} R by x -> x / lambda_l; afterwards
X^t and every (X - mu_j)^t take the single value lambda_l^{-t} on the moved
set.  We then solve for coefficients lambda_{a,b,c} of

    Psi(X) = sum lambda_{a,b,c} X^a X^{tb} prod_j (X - mu_j)^{t c_j}

(a < D, b < B, c_j < B) so that Psi vanishes to order >= D on the union E of
the moved sets, and deg Psi / D bounds |E|.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import limits
from .errors import (
    DegreeGuardViolatedError,
    DuplicateAlphaError,
    HypothesisViolatedError,
    OverlappingFamilyError,
    SystemInfeasibleError,
    ZeroAlphaError,
    ZeroPsiError,
    ZeroShiftError,
    ConsistencyError,
)
from .field_core import Subgroup
from .linalg import kernel_vector
from .poly import DensePoly, int64_safe, mul_coeffs, vanishing_orders

# ---------------------------------------------------------------------------
# weight polynomials P_{n,a,b,c}


def _product_of_roots(p, roots):
    P = DensePoly.constant(p, 1)
    for r in roots:
        P = P * DensePoly.linear_root(p, r)
    return P


def _weight_parts(p, mu):
    """W = X prod(X - mu_j), U = prod(X - mu_j), V_j = X prod_{i != j}(X - mu_i)."""
    U = _product_of_roots(p, mu)
    X = DensePoly.monomial(p, 1)
    W = X * U
    V = [X * _product_of_roots(p, mu[:j] + mu[j + 1 :]) for j in range(len(mu))]
    return W, U, V


def _check_mu(mu, p):
    mu = [int(m) % p for m in mu]
    if any(m == 0 for m in mu):
        raise ZeroAlphaError("shifts mu_j must be nonzero")
    if len(set(mu)) != len(mu):
        raise DuplicateAlphaError("shifts mu_j must be distinct")
    return mu


def weight_poly(p: int, n: int, a: int, b: int, c, mu, t: int) -> DensePoly:
    """P_n with [X prod(X - mu_j)]^n (d/dX)^n X^a H = P_n H, H = X^{tb} prod(X - mu_j)^{t c_j}.

    Recurrence: P_0 = X^a, P_{n+1} = W P_n' + P_n (t S - n W') with
    S = b U + sum_j c_j V_j.
    """
    p = getattr(p, "p", p)
    mu = _check_mu(mu, p)
    c = list(c)
    if len(c) != len(mu):
        raise ValueError("c and mu must have the same length")
    if n + a + t * max([b] + c) >= p:
        raise DegreeGuardViolatedError("n + a + t max(b, c_j) must stay below p")
    W, U, V = _weight_parts(p, mu)
    S = U.scale(b)
    for cj, Vj in zip(c, V):
        S = S + Vj.scale(cj)
    tS = S.scale(t)
    dW = W.derivative()
    P = DensePoly.monomial(p, a)
    for m in range(n):
        P = W * P.derivative() + P * (tS - dW.scale(m))
    return P


def unknown_indices(k: int, B: int, D: int):
    """Coefficient indices (a, b, c_1, ..., c_k), lexicographic."""
    return list(itertools.product(range(D), range(B), *([range(B)] * k)))


def _mul_fixed(P, coeffs, p):
    """Row-wise product of the polynomial rows of P with one fixed polynomial."""
    out = np.zeros_like(P)
    width = P.shape[1]
    for j, f in enumerate(coeffs):
        if f:
            out[:, j:] = (out[:, j:] + P[:, : width - j] * f) % p
    return out


def weight_poly_table(p: int, t: int, mu, B: int, D: int, n_max: int):
    """P_{n,a,b,c} for every n < n_max and every unknown index, as int64 arrays.

    Returns (indices, tables) where tables[n] has shape (len(indices), width)
    and width = D + (n_max - 1) k covers the degree bound a + n k.
    """
    mu = list(mu)
    k = len(mu)
    if not int64_safe(p, 2):
        raise NotImplementedError("vectorised weight polynomials need p < 3e9")
    idx = unknown_indices(k, B, D)
    N = len(idx)
    width = D + max(n_max - 1, 0) * k
    W, U, V = _weight_parts(p, mu)
    dW = W.derivative()
    arr = np.asarray(idx, dtype=np.int64)
    a_col, b_col, c_cols = arr[:, 0], arr[:, 1], arr[:, 2:]
    P = np.zeros((N, width), dtype=np.int64)
    P[np.arange(N), a_col] = 1
    deriv_scale = np.arange(width, dtype=np.int64) % p
    tables = [P]
    for m in range(n_max - 1):
        dP = np.zeros_like(P)
        dP[:, :-1] = P[:, 1:] * deriv_scale[1:] % p
        term1 = _mul_fixed(dP, W.coeffs, p)
        S_part = _mul_fixed(P, U.coeffs, p) * (b_col[:, None] * t % p) % p
        for j in range(k):
            S_part = (S_part + _mul_fixed(P, V[j].coeffs, p) * (c_cols[:, j : j + 1] * t % p)) % p
        w_part = _mul_fixed(P, dW.coeffs, p) * (m % p) % p
        P = (term1 + S_part - w_part) % p
        tables.append(P)
    return idx, tables


# ---------------------------------------------------------------------------
# parameters


def default_B(t: int, s: int, k: int) -> int:
    """Least B with B^(2k+1) > t s."""
    B = 1
    while B ** (2 * k + 1) <= t * s:
        B += 1
    return B


def check_hypotheses(p: int, t: int, k: int, s: int, B: int) -> None:
    if not k * B ** (2 * k) < t:
        raise HypothesisViolatedError("order_large", f"k B^(2k) = {k * B ** (2 * k)} is not < t = {t}")
    if not t * s < B ** (2 * k + 1):
        raise HypothesisViolatedError("B_large", f"t s = {t * s} is not < B^(2k+1) = {B ** (2 * k + 1)}")
    if not p >= (2 * k * B + 2) * t:
        raise HypothesisViolatedError("p_large", f"p = {p} is below (2kB + 2) t = {(2 * k * B + 2) * t}")


def vanishing_D(t: int, k: int, B: int) -> int:
    return t // (2 * B**k)


def claimed_bound_for(t: int, k: int, B: int, D: int) -> int:
    return (D - 1 + (k + 1) * t * (B - 1)) // D


def psi_degree_bound(t: int, k: int, B: int, D: int) -> int:
    return D - 1 + (k + 1) * t * (B - 1)


def equation_counts(k: int, s: int, D: int) -> tuple[int, int]:
    """(equations with deg P_n <= a + n k, equations with the tighter a + n)."""
    ours = s * sum(D + n * k for n in range(D))
    tighter = s * sum(D + n for n in range(D))
    return ours, tighter


# ---------------------------------------------------------------------------
# family sets


@dataclass(frozen=True)
class FamilyMember:
    lam: int
    original: tuple[int, ...]
    moved: tuple[int, ...]
    y: int


def family_sets(R: Subgroup, mu, lambdas) -> list[FamilyMember]:
    """Family sets A_lambda and their images lambda^{-1} A_lambda.

    Asserts the collapse x^t = 1 and (x - lambda mu_j)^t = 1 on every A_lambda
    and raises OverlappingFamilyError if two moved sets intersect.
    """
    p, t = R.field.p, R.order
    mu = _check_mu(mu, p)
    members = R.members
    out = []
    seen = {}
    for lam in lambdas:
        lam = int(lam) % p
        if lam == 0:
            raise ZeroShiftError("lambda must be nonzero")
        shifts = [lam * m % p for m in mu]
        A = tuple(x for x in R.elems if all((x - sh) % p in members for sh in shifts))
        for x in A:
            if pow(x, t, p) != 1 or any(pow((x - sh) % p, t, p) != 1 for sh in shifts):
                raise ConsistencyError(f"collapse property fails at x = {x}")
        inv = pow(lam, -1, p)
        moved = tuple(sorted(x * inv % p for x in A))
        for x in moved:
            if x in seen:
                raise OverlappingFamilyError(
                    f"moved family sets for lambda = {seen[x]} and {lam} share the point {x}"
                )
            seen[x] = lam
        out.append(FamilyMember(lam, A, moved, pow(inv, t, p)))
    return out


# ---------------------------------------------------------------------------
# Psi assembly (shared by builder and verifier)


def assemble_psi(p: int, t: int, mu, coeffs: dict) -> DensePoly:
    """Psi(X) = sum lambda_{a,b,c} X^a X^{tb} prod_j (X - mu_j)^{t c_j}.

    ``coeffs`` maps (a, b, c_1, ..., c_k) to residues.
    """
    mu = [int(m) % p for m in mu]
    k = len(mu)
    live = {tuple(int(v) for v in key): int(val) % p for key, val in coeffs.items() if int(val) % p}
    if not live:
        return DensePoly.zero(p)
    max_a = max(key[0] for key in live)
    max_b = max(key[1] for key in live)
    max_c = max((max(key[2:]) for key in live), default=0) if k else 0
    bound = max_a + t * max_b + k * t * max_c
    limits.check("psi_coeffs", bound + 1, "dense auxiliary polynomial")
    roots = [DensePoly.linear_root(p, m) ** t for m in mu]
    powers = []
    for base in roots:
        row = [DensePoly.constant(p, 1)]
        for _ in range(max_c):
            row.append(row[-1] * base)
        powers.append(row)
    # group the inner X^a sums by (b, c)
    groups = {}
    for (a, b, *c), val in live.items():
        groups.setdefault((b, tuple(c)), {})[a] = val
    total = [0] * (bound + 1)
    cache = {(): DensePoly.constant(p, 1)}

    def c_product(c):
        if c not in cache:
            cache[c] = c_product(c[:-1]) * powers[len(c) - 1][c[-1]]
        return cache[c]

    for (b, c), inner in sorted(groups.items()):
        inner_coeffs = [inner.get(a, 0) for a in range(max(inner) + 1)]
        prod = mul_coeffs(inner_coeffs, c_product(c).coeffs, p)
        off = t * b
        for i, v in enumerate(prod):
            if v:
                total[off + i] = (total[off + i] + v) % p
    return DensePoly.of(p, total)


# ---------------------------------------------------------------------------
# certificate


@dataclass
class StepanovCertificate:
    p: int
    t: int
    k: int
    mu: list[int]
    lambdas: list[int]
    B: int
    D: int
    s: int
    coeff_vector: dict
    psi_degree: int
    claimed_bound: int
    verified_points: int
    diagnostics: dict = field(default_factory=dict, repr=False, compare=False)

    def coefficient_rows(self) -> list[list[int]]:
        return [list(key) + [val] for key, val in sorted(self.coeff_vector.items())]


def build_certificate(R: Subgroup, mu, lambdas, B_override: int | None = None) -> StepanovCertificate:
    """Construct and self-check a Stepanov certificate for the family sets.

    Steps: family sets and collapse check; parameters B, D and the hypothesis
    checks; the homogeneous system forcing every P_{n,l} to vanish for n < D;
    a deterministic kernel vector; Psi; Psi != 0; vanishing order >= D at every
    point of E; and |E| <= claimed_bound.
    """
    p, t = R.field.p, R.order
    mu = _check_mu(mu, p)
    lambdas = [int(x) % p for x in lambdas]
    k, s = len(mu), len(lambdas)
    if k < 1 or s < 1:
        raise ValueError("need at least one shift and one lambda")
    family = family_sets(R, mu, lambdas)
    B = default_B(t, s, k) if B_override is None else int(B_override)
    check_hypotheses(p, t, k, s, B)
    D = vanishing_D(t, k, B)
    if D < 1:
        raise HypothesisViolatedError("order_large", "D = floor(t / 2B^k) must be positive")

    n_unknowns = D * B ** (k + 1)
    n_equations, n_equations_tight = equation_counts(k, s, D)
    if n_unknowns <= n_equations:
        raise SystemInfeasibleError(
            f"{n_equations} equations (deg P_n <= a + nk) for {n_unknowns} unknowns"
        )
    limits.check("system_entries", n_equations * n_unknowns, "Stepanov linear system")

    idx, tables = weight_poly_table(p, t, mu, B, D, D)
    exps = np.array([key[1] + sum(key[2:]) for key in idx], dtype=np.int64)
    blocks = []
    for member in family:
        ypow = np.array([pow(member.y, int(e), p) for e in range(int(exps.max()) + 1)], dtype=np.int64)
        scale = ypow[exps][:, None]
        for n in range(D):
            if tables[n][:, D + n * k :].any():
                raise ConsistencyError(f"deg P_{n} exceeds a + {n}k")
            rows = (tables[n][:, : D + n * k] * scale % p).T
            blocks.append(rows)
    system = np.vstack(blocks)
    if system.shape != (n_equations, n_unknowns):
        raise ConsistencyError(f"system shape {system.shape} != {(n_equations, n_unknowns)}")
    vec = kernel_vector(system, p, n_unknowns)
    if vec is None:
        raise SystemInfeasibleError("kernel is trivial")
    residual = (system @ np.asarray(vec, dtype=np.int64) % p) if int64_safe(p, n_unknowns) else None
    if residual is not None and residual.any():
        raise ConsistencyError("kernel vector does not solve the system")
    coeff_vector = {key: int(v) for key, v in zip(idx, vec) if v}

    psi = assemble_psi(p, t, mu, coeff_vector)
    if psi.is_zero():
        raise ZeroPsiError("kernel vector produced Psi == 0")
    if psi.degree > psi_degree_bound(t, k, B, D):
        raise ConsistencyError("deg Psi exceeds D - 1 + (k+1) t (B-1)")
    points = sorted(x for member in family for x in member.moved)
    orders = vanishing_orders(psi, points, D)
    bad = [x for x, o in zip(points, orders) if o < D]
    if bad:
        raise ConsistencyError(f"Psi vanishes to order < D = {D} at {bad[:5]}")
    bound = claimed_bound_for(t, k, B, D)
    if len(points) > bound:
        raise ConsistencyError(f"|E| = {len(points)} exceeds claimed bound {bound}")
    if not bound * D < (k + 1) * t * B:
        raise ConsistencyError("claimed bound is not below (k+1) t B / D")
    return StepanovCertificate(
        p=p, t=t, k=k, mu=mu, lambdas=lambdas, B=B, D=D, s=s,
        coeff_vector=coeff_vector, psi_degree=psi.degree, claimed_bound=bound,
        verified_points=len(points),
        diagnostics={
            "unknowns": n_unknowns,
            "equations": n_equations,
            "equations_tight_degree": n_equations_tight,
            "family_sizes": [len(m.original) for m in family],
            "min_order": min(orders) if orders else None,
            "psi": psi,
        },
    )
