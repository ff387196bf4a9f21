"""Prime fields, residue sets, multiplicative subgroups and R-invariant sets.

Residues are always stored reduced into ``[0, p)`` and sorted ascending, so
every derived object has a single canonical form.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from sympy import factorint

from . import limits
from .errors import (
    DuplicateCosetError,
    FieldMismatchError,
    FieldOverflowError,
    NotADivisorError,
    NotPrimeError,
    ZeroRepError,
)

P_MAX = 1 << 62

# first twelve primes: deterministic for n < 3.18e23, which covers p < 2**62
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test for n < 3.18e23."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def divisors_from_factorization(factors) -> list[int]:
    divs = [1]
    for q, e in factors:
        divs = [d * q**i for d in divs for i in range(e + 1)]
    return sorted(divs)


@dataclass(frozen=True)
class PrimeField:
    """The field Z/pZ together with its smallest primitive root ``g``."""

    p: int
    g: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise NotPrimeError(f"{self.p} is not prime")
        for q, _ in self.factors:
            if pow(self.g, (self.p - 1) // q, self.p) == 1:
                raise ValueError(f"{self.g} is not a primitive root mod {self.p}")

    def divisors(self) -> list[int]:
        """All divisors of p - 1, ascending (the possible subgroup orders)."""
        return divisors_from_factorization(self.factors)

    def inv(self, x: int) -> int:
        return pow(x, -1, self.p)

    def residues(self, values) -> ResidueSet:
        return ResidueSet.of(self, values)

    def full(self) -> ResidueSet:
        return ResidueSet(self, tuple(range(self.p)))


def make_field(p: int) -> PrimeField:
    """Build the field context for ``p`` with its smallest primitive root.

    Raises FieldOverflowError unless 2 < p < 2**62 and NotPrimeError for
    composite ``p``.
    """
    p = int(p)
    if not 2 < p < P_MAX:
        raise FieldOverflowError(f"modulus must satisfy 2 < p < 2**62, got {p}")
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    factors = tuple(sorted((int(q), int(e)) for q, e in factorint(p - 1).items()))
    g = 2
    while any(pow(g, (p - 1) // q, p) == 1 for q, _ in factors):
        g += 1
    return PrimeField(p, g, factors)


def _check_same_field(*sets):
    ps = {s.field.p for s in sets}
    if len(ps) > 1:
        raise FieldMismatchError(f"sets live in different fields: {sorted(ps)}")


@dataclass(frozen=True, eq=False)
class ResidueSet:
    """A canonical (sorted, duplicate free) set of residues mod p."""

    field: PrimeField
    elems: tuple[int, ...]

    def __post_init__(self):
        p = self.field.p
        prev = -1
        for x in self.elems:
            if not isinstance(x, (int, np.integer)) or x <= prev or x >= p:
                raise ValueError("elems must be strictly increasing residues in [0, p)")
            prev = x

    @classmethod
    def of(cls, fld: PrimeField, values) -> ResidueSet:
        p = fld.p
        return cls(fld, tuple(sorted({int(v) % p for v in values})))

    @property
    def p(self) -> int:
        return self.field.p

    def __eq__(self, other):
        if not isinstance(other, ResidueSet):
            return NotImplemented
        return self.field.p == other.field.p and self.elems == other.elems

    def __hash__(self):
        return hash((self.field.p, self.elems))

    def __len__(self):
        return len(self.elems)

    def __iter__(self):
        return iter(self.elems)

    def __contains__(self, x) -> bool:
        x = int(x) % self.field.p
        i = bisect_left(self.elems, x)
        return i < len(self.elems) and self.elems[i] == x

    def __repr__(self):
        return f"ResidueSet(p={self.field.p}, elems={list(self.elems)})"

    @cached_property
    def members(self) -> frozenset[int]:
        return frozenset(self.elems)

    def mask(self) -> np.ndarray:
        """Boolean indicator array of length p (dense; guarded by a budget)."""
        limits.check("dense_modulus", self.field.p, "indicator array")
        out = np.zeros(self.field.p, dtype=bool)
        if self.elems:
            out[np.fromiter(self.elems, dtype=np.int64)] = True
        return out

    def array(self) -> np.ndarray:
        return np.fromiter(self.elems, dtype=np.int64, count=len(self.elems))

    def shift(self, c: int) -> ResidueSet:
        """The translate X + c."""
        return ResidueSet.of(self.field, (x + c for x in self.elems))

    def scale(self, c: int) -> ResidueSet:
        return ResidueSet.of(self.field, (x * c for x in self.elems))

    def negate(self) -> ResidueSet:
        return self.scale(-1)

    def intersection(self, other: ResidueSet) -> ResidueSet:
        _check_same_field(self, other)
        m = other.members
        return ResidueSet(self.field, tuple(x for x in self.elems if x in m))

    def union(self, other: ResidueSet) -> ResidueSet:
        _check_same_field(self, other)
        return ResidueSet.of(self.field, self.members | other.members)

    def difference(self, other: ResidueSet) -> ResidueSet:
        _check_same_field(self, other)
        m = other.members
        return ResidueSet(self.field, tuple(x for x in self.elems if x not in m))

    def issubset(self, other: ResidueSet) -> bool:
        return self.members <= other.members


@dataclass(frozen=True, eq=False, repr=False)
class Subgroup(ResidueSet):
    """The unique multiplicative subgroup of order ``order`` in Z_p^*."""

    order: int = 0
    generator: int = 1
    _check: bool = field(default=True, compare=False)

    def __post_init__(self):
        super().__post_init__()
        if not self._check:
            return
        p, t = self.field.p, self.order
        if t < 1 or (p - 1) % t:
            raise NotADivisorError(f"{t} does not divide p - 1 = {p - 1}")
        if len(self.elems) != t or 0 in self.members:
            raise ValueError("subgroup must have exactly t nonzero elements")
        if any(pow(x, t, p) != 1 for x in self.elems):
            raise ValueError("every subgroup element must satisfy x^t = 1")

    def __repr__(self):
        return f"Subgroup(p={self.field.p}, t={self.order}, generator={self.generator})"

    def coset_index(self) -> int:
        """Number of cosets, (p - 1) / t."""
        return (self.field.p - 1) // self.order

    def coset_reps(self) -> list[int]:
        """One representative g^i per coset, i = 0 .. (p-1)/t - 1."""
        p, g = self.field.p, self.field.g
        return [pow(g, i, p) for i in range(self.coset_index())]

    def same_coset(self, a: int, b: int) -> bool:
        """Whether a/b lies in the subgroup (via inverse and sorted lookup)."""
        p = self.field.p
        return (a * pow(b, -1, p)) % p in self


def subgroup_of_order(fld: PrimeField, t: int) -> Subgroup:
    """Return {g^(i (p-1)/t) : 0 <= i < t} with generator g^((p-1)/t)."""
    p = fld.p
    if t < 1 or (p - 1) % t:
        raise NotADivisorError(f"{t} does not divide p - 1 = {p - 1}")
    h = pow(fld.g, (p - 1) // t, p)
    elems, x = [], 1
    for _ in range(t):
        elems.append(x)
        x = x * h % p
    return Subgroup(fld, tuple(sorted(elems)), order=t, generator=h, _check=False)


def invariant_set(R: Subgroup, reps) -> ResidueSet:
    """The union of the cosets rep * R, i.e. an R-invariant set Q = RQ.

    Representatives must be nonzero and pairwise in distinct cosets.
    """
    p = R.field.p
    reps = [int(r) % p for r in reps]
    if any(r == 0 for r in reps):
        raise ZeroRepError("coset representatives must be nonzero")
    for i, a in enumerate(reps):
        for b in reps[:i]:
            if R.same_coset(a, b):
                raise DuplicateCosetError(f"{a} and {b} lie in the same coset of R")
    return ResidueSet.of(R.field, (r * x for r in reps for x in R.elems))
