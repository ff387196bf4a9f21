import pytest
from hypothesis import given, settings, strategies as st

from shiftlab.errors import (
    DuplicateCosetError,
    FieldOverflowError,
    NotADivisorError,
    NotPrimeError,
    ZeroRepError,
)
from shiftlab.field_core import ResidueSet, invariant_set, is_prime, make_field, subgroup_of_order

SMALL_PRIMES = [p for p in range(3, 2000) if all(p % d for d in range(2, int(p**0.5) + 1))]


def test_is_prime_matches_trial_division():
    for n in range(-3, 2000):
        assert is_prime(n) == (n in SMALL_PRIMES or n == 2)


def test_is_prime_large_known_values():
    assert is_prime(2**61 - 1)
    assert not is_prime(2**61 + 1)
    # strong pseudoprime to bases 2..11
    assert not is_prime(3825123056546413051)
    assert is_prime(1_000_000_007)


def test_make_field_13():
    F = make_field(13)
    assert F.g == 2
    assert pow(2, 6, 13) == 12 and pow(2, 4, 13) == 3
    assert F.divisors() == [1, 2, 3, 4, 6, 12]


@pytest.mark.parametrize("p, exc", [(2, FieldOverflowError), (15, NotPrimeError), (2**62 + 1, FieldOverflowError), (1, FieldOverflowError)])
def test_make_field_errors(p, exc):
    with pytest.raises(exc):
        make_field(p)


def test_primitive_root_is_smallest():
    for p in SMALL_PRIMES[:150]:
        F = make_field(p)
        orders = [next(e for e in range(1, p) if pow(g, e, p) == 1) for g in range(1, F.g + 1)]
        assert orders[-1] == p - 1
        assert all(o < p - 1 for o in orders[:-1])


def test_subgroups_13():
    F = make_field(13)
    assert subgroup_of_order(F, 1).elems == (1,)
    assert subgroup_of_order(F, 3).elems == (1, 3, 9)
    R6 = subgroup_of_order(F, 6)
    assert R6.elems == tuple(sorted({x * x % 13 for x in range(1, 13)}))
    with pytest.raises(NotADivisorError):
        subgroup_of_order(F, 5)


def test_subgroups_are_root_sets_for_small_primes():
    for p in SMALL_PRIMES:
        F = make_field(p)
        for t in F.divisors():
            R = subgroup_of_order(F, t)
            assert R.elems == tuple(x for x in range(1, p) if pow(x, t, p) == 1)
            assert pow(R.generator, t, p) == 1 and len(R) == t


def test_subgroups_nested():
    F = make_field(241)
    for t1 in F.divisors():
        for t2 in F.divisors():
            if t2 % t1 == 0:
                assert subgroup_of_order(F, t1).issubset(subgroup_of_order(F, t2))


def test_invariant_set_examples():
    F = make_field(13)
    R = subgroup_of_order(F, 6)
    assert invariant_set(R, [1]) == R
    assert invariant_set(R, [2]).elems == (2, 5, 6, 7, 8, 11)
    with pytest.raises(DuplicateCosetError):
        invariant_set(R, [1, 3])
    with pytest.raises(ZeroRepError):
        invariant_set(R, [0])


def test_coset_reps_partition():
    F = make_field(61)
    for t in F.divisors():
        R = subgroup_of_order(F, t)
        Q = invariant_set(R, R.coset_reps())
        assert Q.elems == tuple(range(1, 61))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([p for p in SMALL_PRIMES if p < 400]), st.data())
def test_invariant_set_closed(p, data):
    F = make_field(p)
    t = data.draw(st.sampled_from(F.divisors()))
    R = subgroup_of_order(F, t)
    reps = R.coset_reps()
    chosen = data.draw(st.lists(st.sampled_from(reps), unique=True, min_size=1, max_size=4))
    Q = invariant_set(R, chosen)
    assert len(Q) == len(chosen) * t and 0 not in Q
    assert all(q * r % p in Q for q in Q for r in R)


def test_residue_set_canonical():
    F = make_field(13)
    S = ResidueSet.of(F, [14, 3, 3, -1])
    assert S.elems == (1, 3, 12)
    assert S.shift(1).elems == (0, 2, 4)
    assert S.negate().elems == (1, 10, 12)
    R = subgroup_of_order(F, 6)
    assert R == ResidueSet.of(F, [1, 3, 4, 9, 10, 12])
    with pytest.raises(ValueError):
        ResidueSet(F, (3, 1))
