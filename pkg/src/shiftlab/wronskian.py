"""Wronskians and linear-independence tests for polynomial families over Z/pZ."""

from __future__ import annotations

import itertools

from .errors import (
    DegreeGuardViolatedError,
    DuplicateAlphaError,
    FieldMismatchError,
    ZeroAlphaError,
)
from .linalg import rank_mod_p
from .poly import DensePoly


def _common_p(polys):
    ps = {P.p for P in polys}
    if len(ps) != 1:
        raise FieldMismatchError(f"polynomials over different fields: {sorted(ps)}")
    return ps.pop()


def wronskian(polys) -> DensePoly:
    """det [Phi_i^(j)] for j = 0..l-1, by fraction-free (Bareiss) elimination.

    Every division in the elimination is exact in Z_p[x]; a nonzero remainder
    would mean a bug and raises ArithmeticError.
    """
    polys = list(polys)
    if not polys:
        raise ValueError("need at least one polynomial")
    p = _common_p(polys)
    l = len(polys)
    cols = [P.derivatives(l) for P in polys]
    M = [[cols[i][j] for i in range(l)] for j in range(l)]
    sign = 1
    prev = DensePoly.constant(p, 1)
    for k in range(l - 1):
        if M[k][k].is_zero():
            swap = next((r for r in range(k + 1, l) if not M[r][k].is_zero()), None)
            if swap is None:
                return DensePoly.zero(p)
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, l):
            for j in range(k + 1, l):
                num = M[k][k] * M[i][j] - M[i][k] * M[k][j]
                q, r = divmod(num, prev)
                if not r.is_zero():
                    raise ArithmeticError("inexact Bareiss division")
                M[i][j] = q
        prev = M[k][k]
    det = M[l - 1][l - 1]
    W = det if sign > 0 else -det
    if not W.is_zero():
        bound = sum(P.degree for P in polys) - l * (l - 1) // 2
        if W.degree > bound:
            raise ArithmeticError(f"Wronskian degree {W.degree} exceeds bound {bound}")
    return W


def independent_by_rank(polys) -> bool:
    """Ground truth: rank of the coefficient matrix equals the family size."""
    polys = list(polys)
    if not polys:
        return True
    p = _common_p(polys)
    width = max(P.degree for P in polys) + 1
    if width <= 0:
        return False
    rows = [list(P.coeffs) + [0] * (width - len(P.coeffs)) for P in polys]
    return rank_mod_p(rows, p) == len(polys)


def wronskian_degree_guard(polys) -> None:
    """Raise unless all degrees and the Wronskian degree bound are below p."""
    p = _common_p(polys)
    l = len(polys)
    degs = [P.degree for P in polys]
    if max(degs) > p - 1:
        raise DegreeGuardViolatedError(f"degree {max(degs)} exceeds p - 1 = {p - 1}")
    bound = sum(d for d in degs if d >= 0) - l * (l - 1) // 2
    if bound >= p:
        raise DegreeGuardViolatedError(f"Wronskian degree bound {bound} is not below p = {p}")


def independent_by_wronskian(polys) -> bool:
    """Independence via a nonvanishing Wronskian (valid under the degree guard)."""
    polys = list(polys)
    if not polys:
        return True
    wronskian_degree_guard(polys)
    return not wronskian(polys).is_zero()


def _check_alpha(alpha, p):
    alpha = [int(a) % p for a in alpha]
    if any(a == 0 for a in alpha):
        raise ZeroAlphaError("alpha entries must be nonzero")
    if len(set(alpha)) != len(alpha):
        raise DuplicateAlphaError("alpha entries must be distinct")
    return alpha


def prop32_conditions(n: int, t: int, B: int, D: int, p: int) -> dict[str, bool]:
    """The two parameter conditions guaranteeing independence of the grid family."""
    return {
        "t_large": 2 * t >= (n - 1) * B ** (2 * n) + 2 * D * B**n,
        "p_large": p >= (2 * n * B + 2) * t,
    }


def prop32_indices(n: int, B: int, D: int):
    """Grid (a, b_0, ..., b_n) with a < D and b_j < B, in lexicographic order."""
    return list(itertools.product(range(D), *([range(B)] * (n + 1))))


def prop32_family(p: int, n: int, t: int, B: int, D: int, alpha, indices=None) -> list[DensePoly]:
    """Expanded x^a x^(t b_0) (x - alpha_1)^(t b_1) ... (x - alpha_n)^(t b_n).

    ``indices`` is an iterable of tuples (a, b_0, ..., b_n); by default the
    full grid a < D, b_j < B.  Output follows the (sorted) index order.
    """
    p = getattr(p, "p", p)
    alpha = _check_alpha(alpha, p)
    if len(alpha) != n:
        raise ValueError(f"expected {n} alpha values, got {len(alpha)}")
    idx = sorted(prop32_indices(n, B, D) if indices is None else (tuple(i) for i in indices))
    max_b = max((max(i[1:]) for i in idx), default=0)
    bases = [DensePoly.linear_root(p, a) ** t for a in alpha]
    powers = []
    for base in bases:
        row = [DensePoly.constant(p, 1)]
        for _ in range(max_b):
            row.append(row[-1] * base)
        powers.append(row)
    out = []
    for a, b0, *bs in idx:
        P = DensePoly.monomial(p, a + t * b0)
        for j, b in enumerate(bs):
            if b:
                P = P * powers[j][b]
        out.append(P)
    return out
