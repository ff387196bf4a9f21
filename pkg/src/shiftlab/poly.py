"""Dense univariate polynomials over Z/pZ.

Coefficients are stored lowest degree first with trailing zeros stripped;
the zero polynomial has an empty coefficient tuple.  Products use numpy
convolution when the accumulated sums provably fit in int64 and Kronecker
substitution on Python integers otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegreeTooLargeError, FieldMismatchError, ZeroPolynomialError

_INT64_MAX = (1 << 63) - 1


def _strip(coeffs):
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return coeffs[:n]


def int64_safe(p: int, terms: int) -> bool:
    """Whether a sum of ``terms`` products of residues mod p fits in int64."""
    return terms * (p - 1) ** 2 <= _INT64_MAX


def mul_coeffs(a, b, p: int) -> list[int]:
    """Product of two coefficient sequences, reduced mod p."""
    if not len(a) or not len(b):
        return []
    if int64_safe(p, min(len(a), len(b))):
        out = np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)) % p
        return out.tolist()
    # Kronecker substitution: pack into one big integer per operand
    bits = (min(len(a), len(b)) * (p - 1) ** 2).bit_length() + 1
    mask = (1 << bits) - 1
    pa = 0
    for c in reversed(a):
        pa = (pa << bits) | int(c)
    pb = 0
    for c in reversed(b):
        pb = (pb << bits) | int(c)
    prod = pa * pb
    out = []
    for _ in range(len(a) + len(b) - 1):
        out.append((prod & mask) % p)
        prod >>= bits
    return out


@dataclass(frozen=True)
class DensePoly:
    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.coeffs and self.coeffs[-1] == 0:
            raise ValueError("leading coefficient must be nonzero; use DensePoly.of")

    @classmethod
    def of(cls, p: int, coeffs) -> DensePoly:
        p = getattr(p, "p", p)
        return cls(p, tuple(_strip([int(c) % p for c in coeffs])))

    @classmethod
    def zero(cls, p: int) -> DensePoly:
        return cls(getattr(p, "p", p), ())

    @classmethod
    def constant(cls, p: int, c: int) -> DensePoly:
        return cls.of(p, [c])

    @classmethod
    def monomial(cls, p: int, degree: int, c: int = 1) -> DensePoly:
        return cls.of(p, [0] * degree + [c])

    @classmethod
    def linear_root(cls, p: int, root: int) -> DensePoly:
        """X - root."""
        return cls.of(p, [-root, 1])

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __repr__(self):
        if not self.coeffs:
            return f"DensePoly(p={self.p}, 0)"
        terms = [f"{c}*x^{i}" if i else str(c) for i, c in enumerate(self.coeffs) if c]
        return f"DensePoly(p={self.p}, {' + '.join(reversed(terms))})"

    def _coerce(self, other) -> DensePoly:
        if isinstance(other, DensePoly):
            if other.p != self.p:
                raise FieldMismatchError(f"polynomials over Z/{self.p} and Z/{other.p}")
            return other
        if isinstance(other, (int, np.integer)):
            return DensePoly.constant(self.p, int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % self.p
        return DensePoly(self.p, tuple(_strip(out)))

    __radd__ = __add__

    def __neg__(self):
        return DensePoly(self.p, tuple((-c) % self.p for c in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return DensePoly(self.p, tuple(_strip(mul_coeffs(self.coeffs, other.coeffs, self.p))))

    __rmul__ = __mul__

    def scale(self, c: int) -> DensePoly:
        c %= self.p
        return DensePoly.of(self.p, [x * c for x in self.coeffs]) if c else DensePoly.zero(self.p)

    def shift(self, n: int) -> DensePoly:
        """Multiply by X^n."""
        if not self.coeffs:
            return self
        return DensePoly(self.p, (0,) * n + self.coeffs)

    def __pow__(self, n: int) -> DensePoly:
        if n < 0:
            raise ValueError("negative exponent")
        result = DensePoly.constant(self.p, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other):
        other = self._coerce(other)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        rem = list(self.coeffs)
        dq = other.degree
        inv_lead = pow(other.coeffs[-1], -1, p)
        quot = [0] * max(len(rem) - dq, 0)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] * inv_lead % p
            if c:
                quot[i - dq] = c
                for j, d in enumerate(other.coeffs):
                    rem[i - dq + j] = (rem[i - dq + j] - c * d) % p
        return DensePoly.of(p, quot), DensePoly.of(p, rem[:dq])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x: int) -> int:
        p, acc = self.p, 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % p
        return acc

    def derivative(self) -> DensePoly:
        """Formal derivative; requires degree <= p - 1."""
        if self.degree > self.p - 1:
            raise DegreeTooLargeError(
                f"formal derivative needs degree <= p - 1 = {self.p - 1}, got {self.degree}"
            )
        p = self.p
        return DensePoly.of(p, [i * c % p for i, c in enumerate(self.coeffs)][1:])

    def derivatives(self, count: int) -> list[DensePoly]:
        """[P, P', ..., P^(count-1)]."""
        out = [self]
        for _ in range(count - 1):
            out.append(out[-1].derivative())
        return out


def derivative(P: DensePoly) -> DensePoly:
    return P.derivative()


def vanishing_order(P: DensePoly, x: int, cap: int) -> int:
    """Largest m <= cap with (X - x)^m dividing P, by repeated synthetic division."""
    if P.is_zero():
        raise ZeroPolynomialError("vanishing order of the zero polynomial is undefined")
    p = P.p
    x %= p
    coeffs = list(P.coeffs)
    m = 0
    while m < cap and len(coeffs) > 1:
        # Horner from the top: quotient coefficients and final remainder
        q = [0] * (len(coeffs) - 1)
        acc = coeffs[-1]
        for i in range(len(coeffs) - 2, -1, -1):
            q[i] = acc
            acc = (coeffs[i] + acc * x) % p
        if acc:
            break
        coeffs = q
        m += 1
    return m


def vanishing_orders(P: DensePoly, xs, cap: int) -> list[int]:
    """Vectorised :func:`vanishing_order` for many points at once."""
    if P.is_zero():
        raise ZeroPolynomialError("vanishing order of the zero polynomial is undefined")
    xs = [int(x) % P.p for x in xs]
    if not xs:
        return []
    p = P.p
    if not int64_safe(p, 2):
        return [vanishing_order(P, x, cap) for x in xs]
    pts = np.asarray(xs, dtype=np.int64)
    rows = np.tile(np.asarray(P.coeffs, dtype=np.int64), (len(xs), 1))
    orders = np.zeros(len(xs), dtype=np.int64)
    alive = np.ones(len(xs), dtype=bool)
    n = rows.shape[1]
    for _ in range(cap):
        if n <= 1 or not alive.any():
            break
        idx = np.flatnonzero(alive)
        sub, x = rows[idx, :n], pts[idx]
        q = np.empty((len(idx), n - 1), dtype=np.int64)
        acc = sub[:, n - 1].copy()
        for i in range(n - 2, -1, -1):
            q[:, i] = acc
            acc = (sub[:, i] + acc * x) % p
        divisible = acc == 0
        keep = idx[divisible]
        rows[keep, : n - 1] = q[divisible]
        rows[keep, n - 1] = 0
        orders[keep] += 1
        alive[idx[~divisible]] = False
        # rows that stay alive all have length n - 1 now
        n -= 1
    return orders.tolist()
