"""Higher convolutions, higher energies, tensor sets and fiber sets.

All counts are exact integers.  Tables are sparse: a ``ConvolutionTable``
only stores shift vectors with a nonzero count, so the cost is bounded by
the product of the set sizes and never by p**(k-1).
"""

from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import limits
from .errors import ConsistencyError, FieldMismatchError
from .field_core import ResidueSet


def _same_field(*sets):
    ps = {s.field.p for s in sets}
    if len(ps) > 1:
        raise FieldMismatchError(f"sets live in different fields: {sorted(ps)}")
    return sets[0].field.p


@dataclass(frozen=True, eq=False)
class ConvolutionTable:
    """Sparse values of C_k(f_1, ..., f_k) keyed by (k-1)-tuples of shifts.

    For k = 1 the single key ``()`` holds C_1(f) = |f| (absent when f is empty).
    """

    k: int
    counts: dict = field(default_factory=dict)

    def __getitem__(self, key) -> int:
        # a bare integer addresses the single coordinate of a k = 2 table
        if not isinstance(key, tuple) and not isinstance(key, list):
            key = (key,)
        return self.counts.get(tuple(int(x) for x in key), 0)

    def __len__(self):
        return len(self.counts)

    def __iter__(self):
        return iter(sorted(self.counts))

    def items(self):
        return sorted(self.counts.items())

    def support(self) -> list[tuple[int, ...]]:
        return sorted(self.counts)

    def total(self) -> int:
        return sum(self.counts.values())

    def power_sum(self, m: int) -> int:
        return sum(c**m for c in self.counts.values())


@dataclass(frozen=True, eq=False)
class TensorSet:
    """A canonical sorted collection of distinct l-vectors of residues."""

    l: int
    vectors: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def __contains__(self, v) -> bool:
        return tuple(int(x) for x in v) in self.members

    def __eq__(self, other):
        if not isinstance(other, TensorSet):
            return NotImplemented
        return self.l == other.l and self.vectors == other.vectors

    def __hash__(self):
        return hash((self.l, self.vectors))

    @property
    def members(self) -> frozenset:
        cache = self.__dict__.get("_members")
        if cache is None:
            cache = frozenset(self.vectors)
            object.__setattr__(self, "_members", cache)
        return cache


def _pair_counts(f: ResidueSet, g: ResidueSet, op: str) -> dict[int, int]:
    """{x: #{(a, b) in f x g : b - a = x}} for op='circ', a + b = x for 'star'."""
    p = _same_field(f, g)
    if not len(f) or not len(g):
        return {}
    a = f.array()
    b = g.array()
    vals = (b[None, :] - a[:, None]) if op == "circ" else (b[None, :] + a[:, None])
    vals %= p
    keys, counts = np.unique(vals.ravel(), return_counts=True)
    return dict(zip(keys.tolist(), counts.tolist()))


def circ(f: ResidueSet, g: ResidueSet, op: str = "circ") -> ConvolutionTable:
    """(f o g)(x) = #{y in f : y + x in g}; with op='star', (f * g)(x) = #{a + b = x}."""
    if op not in ("circ", "star"):
        raise ValueError("op must be 'circ' or 'star'")
    return ConvolutionTable(2, {(x,): c for x, c in _pair_counts(f, g, op).items()})


def star(f: ResidueSet, g: ResidueSet) -> ConvolutionTable:
    return circ(f, g, "star")


def circ_array(f: ResidueSet, g: ResidueSet) -> np.ndarray:
    """Dense length-p array of (f o g)(x)."""
    p = _same_field(f, g)
    limits.check("dense_modulus", p, "dense convolution")
    out = np.zeros(p, dtype=np.int64)
    for x, c in _pair_counts(f, g, "circ").items():
        out[x] = c
    return out


def convolution_k(sets) -> ConvolutionTable:
    """C_k(f_1, ..., f_k)(x_1..x_{k-1}) = #{z in f_1 : z + x_i in f_{i+1} for all i}."""
    sets = list(sets)
    if not sets:
        raise ValueError("need at least one set")
    p = _same_field(*sets)
    k = len(sets)
    if k == 1:
        n = len(sets[0])
        return ConvolutionTable(1, {(): n} if n else {})
    limits.check("convolution_work", math.prod(len(s) for s in sets), f"C_{k} enumeration")
    counts = Counter()
    rest = [s.elems for s in sets[1:]]
    for z in sets[0].elems:
        shifted = [[(y - z) % p for y in s] for s in rest]
        counts.update(itertools.product(*shifted))
    return ConvolutionTable(k, dict(counts))


def energy(A: ResidueSet, B: ResidueSet) -> int:
    """Additive energy E(A, B), evaluated three ways and cross-checked."""
    _same_field(A, B)
    via_star = sum(c * c for c in _pair_counts(A, B, "star").values())
    via_circ = sum(c * c for c in _pair_counts(A, B, "circ").values())
    aa = _pair_counts(A, A, "circ")
    bb = _pair_counts(B, B, "circ")
    via_auto = sum(c * bb.get(x, 0) for x, c in aa.items())
    if not via_star == via_circ == via_auto:
        raise ConsistencyError(f"energy formulas disagree: {via_star}, {via_circ}, {via_auto}")
    return via_star


def energy_k_fast(A: ResidueSet, k: int) -> int:
    """E_k(A) as sum_x (A o A)(x)^k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return sum(c**k for c in _pair_counts(A, A, "circ").values())


def energy_k_brute(A: ResidueSet, k: int) -> int:
    """E_k(A) as the sum of squares of the full C_k(A, ..., A) table."""
    limits.check("brute_energy_size", len(A), "brute-force E_k")
    return convolution_k([A] * k).power_sum(2)


def energy_k(A: ResidueSet, k: int, method: str = "auto") -> int:
    """Higher energy E_k(A) = sum over (k-1)-vectors of C_k(A)^2.

    ``method='auto'`` runs the brute-force table whenever |A| is within the
    ``brute_energy_size`` budget and asserts it equals the fast formula;
    ``'brute'`` insists on the table (BudgetExceededError otherwise) and
    ``'fast'`` only evaluates sum_x (A o A)(x)^k.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if method == "fast":
        return energy_k_fast(A, k)
    if method == "brute" or len(A) <= limits.limit("brute_energy_size"):
        brute = energy_k_brute(A, k)
        fast = energy_k_fast(A, k)
        if brute != fast:
            raise ConsistencyError(f"E_{k}: table gives {brute}, autocorrelation gives {fast}")
        return brute
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    return energy_k_fast(A, k)


def higher_energy(sets) -> int:
    """E_k(f_1, ..., f_k) for arbitrary sets, from the C_k table."""
    return convolution_k(sets).power_sum(2)


def tensor_set(A: ResidueSet, B: ResidueSet, l: int) -> TensorSet:
    """A (x)_l B: all vectors (a_1 - b, ..., a_l - b) with b in B, a_i in A."""
    p = _same_field(A, B)
    if l < 1:
        raise ValueError("l must be >= 1")
    limits.check("tensor_work", len(B) * len(A) ** l, f"tensor set of dimension {l}")
    vectors = set()
    for b in B.elems:
        diffs = [(a - b) % p for a in A.elems]
        vectors.update(itertools.product(diffs, repeat=l))
    out = TensorSet(l, tuple(sorted(vectors)))
    if len(B) and len(A):
        n = len(out)
        if not len(A) ** l <= n <= len(B) * len(A) ** l:
            raise ConsistencyError(f"tensor set size {n} outside [|A|^l, |B||A|^l]")
    return out


def fiber_set(A: ResidueSet, B: ResidueSet, x) -> ResidueSet:
    """B_x = B n (A - x_1) n ... n (A - x_k)."""
    p = _same_field(A, B)
    x = [int(v) % p for v in x]
    members = A.members
    return ResidueSet(B.field, tuple(b for b in B.elems if all((b + xi) % p in members for xi in x)))


# ---------------------------------------------------------------------------
# identity and inequality suite


@dataclass
class IdentityReport:
    """Pass/fail per identity or inequality plus the numbers behind it."""

    items: dict[str, bool] = field(default_factory=dict)
    details: dict[str, object] = field(default_factory=dict)
    counterexamples: dict[str, list] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.items.values())

    def record(self, name, ok, **details):
        self.items[name] = self.items.get(name, True) and bool(ok)
        if details:
            self.details[name] = details

    def fail_example(self, name, example):
        self.items[name] = False
        self.counterexamples.setdefault(name, []).append(example)

    def failures(self) -> list[str]:
        return [k for k, v in self.items.items() if not v]


def _cauchy_schwarz(A, B, k, rep):
    # Cauchy-Schwarz over the support of C_k(B, A, ..., A)
    table = convolution_k([B] + [A] * (k - 1))
    tens = tensor_set(A, B, k - 1)
    support_ok = set(table.counts) == set(tens.vectors)
    mass_ok = table.total() == len(A) ** (k - 1) * len(B)
    e_k = table.power_sum(2)
    # cyclic relabelling leaves E_k unchanged
    e_k_rot = higher_energy([A] * (k - 1) + [B])
    lhs = len(A) ** (2 * k - 2) * len(B) ** 2
    rhs = e_k * len(tens)
    rep.record(f"energy-support-bound[k={k}]", lhs <= rhs and support_ok and mass_ok and e_k == e_k_rot,
               lhs=lhs, rhs=rhs, E_k=e_k, tensor_size=len(tens))


def _fiber_membership(A, B, l, rng, rep, probes=50):
    p = A.field.p
    tens = tensor_set(A, B, l)
    table = convolution_k([B] + [A] * l)
    ok = True
    for v in tens.vectors:
        fib = fiber_set(A, B, v)
        if not len(fib) or len(fib) != table[v]:
            ok = False
            rep.fail_example(f"fiber-membership[l={l}]", v)
    for _ in range(probes):
        v = tuple(rng.randrange(p) for _ in range(l))
        if (v in tens) != bool(len(fiber_set(A, B, v))):
            ok = False
            rep.fail_example(f"fiber-membership[l={l}]", v)
    rep.record(f"fiber-membership[l={l}]", ok)


def _tensor_split(A, B, l, rep, label="tensor-split"):
    tens = tensor_set(A, B, l)
    for m in range(1, l):
        rebuilt = set()
        for head in tensor_set(A, B, m).vectors:
            fib = fiber_set(A, B, head)
            if len(fib):
                rebuilt.update(head + tail for tail in tensor_set(A, fib, l - m).vectors)
        rep.record(f"{label}[l={l},m={m}]", rebuilt == set(tens.vectors))


def _coordinate_bounds(A, l, S_members, rep):
    p = A.field.p
    tens_l = tensor_set(A, A, l)
    lower = {m: tensor_set(A, A, m).members for m in range(1, l)}
    name10 = f"projection-bound[l={l}]"
    name12 = f"pairwise-difference-bound[l={l}]"
    ok10 = ok12 = True
    # both sides are indicators, so only vectors inside A (x)_l A can violate
    for v in tens_l.vectors:
        for m, members in lower.items():
            for E in itertools.combinations(range(l), m):
                if tuple(v[j] for j in E) not in members:
                    ok10 = False
                    rep.fail_example(name10, (v, E))
        ext = (0,) + v
        for i in range(l + 1):
            for j in range(l + 1):
                if i != j and (ext[i] - ext[j]) % p not in S_members:
                    ok12 = False
                    rep.fail_example(name12, v)
    rep.record(name10, ok10)
    rep.record(name12, ok12)
    ok11 = True
    for x, y in tensor_set(A, A, 2).vectors:
        if not (x in S_members and y in S_members and (x - y) % p in S_members):
            ok11 = False
            rep.fail_example("two-coordinate-bound", (x, y))
    rep.record("two-coordinate-bound", ok11)


def _tensor_size_chain(A, l, S, rep):
    p = A.field.p
    size = len(tensor_set(A, A, l))
    ss = _pair_counts(S, S, "circ")
    middle = 0
    right = 0
    for x in S.elems:
        A_x = fiber_set(A, A, (x,))
        diff = {(a - b) % p for a in A.elems for b in A_x.elems}
        middle += len(diff) ** (l - 1)
        right += ss.get(x, 0) ** (l - 1)
    rep.record(f"tensor-size-chain[l={l}]", size <= middle <= right, tensor_size=size, middle=middle, right=right)


def _katz_koester(A, l, S, rng, rep, samples):
    p = A.field.p
    ok = True
    tensors = {m: tensor_set(A, A, m).vectors for m in range(1, l + 1)}
    for _ in range(samples):
        m = rng.randint(1, l)
        n = rng.randint(1, l)
        s = rng.choice(tensors[m])
        t = rng.choice(tensors[n])
        lhs = {(a - b) % p for a in fiber_set(A, A, s).elems for b in fiber_set(A, A, t).elems}
        u = [(si - tj) % p for i, si in enumerate((0,) + s) for j, tj in enumerate((0,) + t) if (i, j) != (0, 0)]
        S_u = fiber_set(S, S, u)
        if not lhs <= S_u.members:
            ok = False
            rep.fail_example("katz-koester", (s, t))
    rep.record("katz-koester", ok)


def shifted_energy_sums(A: ResidueSet, k: int, lengths) -> tuple[int, int]:
    """Left-hand sides of the mass identity and the energy identity.

    ``lengths[j]`` in {0, 1} is the length of the j-th shift vector.  Only
    shifts s in A - A contribute (otherwise A_s is empty), so the sums over
    Z_p are evaluated exactly by ranging over A - A.
    Returns (sum of C_k totals, sum of E_k values).
    """
    if len(lengths) != k or any(x not in (0, 1) for x in lengths):
        raise ValueError("lengths must be k entries from {0, 1}")
    S = difference_set(A)
    fibers = {s: fiber_set(A, A, (s,)) for s in S.elems}
    choices = [list(fibers.values()) if ln else [A] for ln in lengths]
    mass = 0
    en = 0
    for combo in itertools.product(*choices):
        if any(not len(c) for c in combo):
            continue
        table = convolution_k(combo)
        mass += table.total()
        en += table.power_sum(2)
    return mass, en


def difference_set(A: ResidueSet) -> ResidueSet:
    p = A.field.p
    return ResidueSet.of(A.field, ((a - b) % p for a in A.elems for b in A.elems))


def _shifted_energy(A, k, rep, patterns):
    for lengths in patterns:
        norm = sum(lengths)
        mass, en = shifted_energy_sums(A, k, lengths)
        rep.record(f"shifted-mass[k={k},lengths={lengths}]", mass == len(A) ** (norm + k),
                   lhs=mass, rhs=len(A) ** (norm + k))
        target = energy_k(A, norm + k)
        rep.record(f"shifted-energy[k={k},lengths={lengths}]", en == target, lhs=en, rhs=target)


def length_patterns(k: int, max_ones: int = 2):
    """All 0/1 length patterns for k shift vectors with at most ``max_ones`` ones."""
    return [pat for pat in itertools.product((0, 1), repeat=k) if sum(pat) <= max_ones]


def check_section2(A: ResidueSet, B: ResidueSet, k: int, l: int, *, seed: int = 0,
                   kk_samples: int = 5, shifted_sums: bool = True, shifted_max_ones: int = 2) -> IdentityReport:
    """Evaluate the tensor-set and higher-energy relations exactly for one instance.

    Items: |A|^(2k-2)|B|^2 <= E_k |A (x)_(k-1) B| with the support and mass of
    C_k(B, A, ..., A); fiber membership and the head/tail splitting of tensor
    sets for (A, B, l); coordinate projection and pairwise-difference bounds
    and the tensor-size chain for A with dimension l; sampled Katz-Koester
    inclusions; and, when ``shifted_sums`` is set, the mass and energy
    identities for sums over shifted sets A_s with at most ``shifted_max_ones``
    shift vectors of length one.
    """
    _same_field(A, B)
    limits.check("identity_suite_size", max(len(A), len(B)), "identity suite")
    if k < 2 or l < 1:
        raise ValueError("need k >= 2 and l >= 1")
    rng = random.Random(seed)
    rep = IdentityReport()
    if not len(A) or not len(B):
        raise ValueError("identity checks need nonempty A and B")
    S = difference_set(A)
    _cauchy_schwarz(A, B, k, rep)
    _fiber_membership(A, B, l, rng, rep)
    if l >= 2:
        _tensor_split(A, B, l, rep)
        _tensor_split(A, A, l, rep, label="tensor-split-self")
    _coordinate_bounds(A, max(l, 1), S.members, rep)
    _tensor_size_chain(A, l, S, rep)
    _katz_koester(A, l, S, rng, rep, kk_samples)
    if shifted_sums:
        _shifted_energy(A, k, rep, length_patterns(k, shifted_max_ones))
    return rep
