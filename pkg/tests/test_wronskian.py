import random

import pytest

from shiftlab.errors import DegreeGuardViolatedError, DuplicateAlphaError, FieldMismatchError, ZeroAlphaError
from shiftlab.poly import DensePoly
from shiftlab.wronskian import (
    independent_by_rank,
    independent_by_wronskian,
    prop32_conditions,
    prop32_family,
    wronskian,
)

P = 1009


def X(p=P):
    return DensePoly.monomial(p, 1)


def test_small_wronskians():
    one = DensePoly.constant(P, 1)
    assert wronskian([one, X()]) == DensePoly.constant(P, 1)
    assert wronskian([one, X(), X() ** 2]) == DensePoly.constant(P, 2)
    f = DensePoly.of(P, [1, 2, 3])
    assert wronskian([f, f.scale(3)]).is_zero()


def test_wronskian_two_by_two_formula():
    rng = random.Random(0)
    for _ in range(20):
        f = DensePoly.of(P, [rng.randrange(P) for _ in range(6)])
        g = DensePoly.of(P, [rng.randrange(P) for _ in range(5)])
        assert wronskian([f, g]) == f * g.derivative() - g * f.derivative()


def test_independence_examples():
    one = DensePoly.constant(P, 1)
    assert independent_by_rank([one, X(), X() ** 2])
    assert not independent_by_rank([DensePoly.of(P, [1, 1]), DensePoly.of(P, [2, 2])])
    assert independent_by_wronskian([one, X()])
    f = DensePoly.of(P, [4, 0, 1])
    assert not independent_by_wronskian([f, f.scale(3)])


def test_degree_guard():
    with pytest.raises(DegreeGuardViolatedError):
        independent_by_wronskian([DensePoly.monomial(13, 12), DensePoly.monomial(13, 11), DensePoly.monomial(13, 3)])


def test_field_mismatch():
    with pytest.raises(FieldMismatchError):
        wronskian([DensePoly.constant(13, 1), DensePoly.constant(17, 1)])


def random_family(rng, p, l, maxdeg):
    base = [DensePoly.of(p, [rng.randrange(p) for _ in range(rng.randint(1, maxdeg + 1))]) for _ in range(l)]
    if rng.random() < 0.4 and l >= 2:
        # force a dependency
        combo = DensePoly.zero(p)
        for P_ in base[:-1]:
            combo = combo + P_.scale(rng.randrange(p))
        base[-1] = combo
    return base


def test_wronskian_agrees_with_rank_randomly():
    rng = random.Random(1)
    for _ in range(60):
        fam = random_family(rng, P, rng.randint(1, 4), 20)
        if any(f.is_zero() for f in fam):
            continue
        assert independent_by_wronskian(fam) == independent_by_rank(fam)


def test_prop32_examples():
    fam = prop32_family(13, 1, 3, 1, 2, [1])
    assert [f.coeffs for f in fam] == [(1,), (0, 1)]
    fam = prop32_family(13, 1, 3, 2, 1, [1])
    x3 = DensePoly.monomial(13, 3)
    xm = DensePoly.linear_root(13, 1) ** 3
    assert fam == [DensePoly.constant(13, 1), xm, x3, x3 * xm]
    with pytest.raises(DuplicateAlphaError):
        prop32_family(13, 2, 3, 1, 1, [1, 1])
    with pytest.raises(ZeroAlphaError):
        prop32_family(13, 1, 3, 1, 1, [0])


def test_prop32_grid_independent_when_conditions_hold():
    n, B, D, t = 2, 2, 2, 24
    assert all(prop32_conditions(n, t, B, D, 1201).values())
    fam = prop32_family(1201, n, t, B, D, [3, 7])
    assert independent_by_rank(fam)
