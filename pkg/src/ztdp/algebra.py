"""Exact ring arithmetic and subset-lattice transforms on small ground sets.

Subsets of a ground set of size r (r <= 25) are encoded as bitmask ints.
The zeta and Moebius transforms use the usual per-coordinate sweeps; the
convolution oracles below them are deliberately written as direct
definitional loops so they can arbitrate faster implementations.

Ring values are plain Python ints, or coefficient tuples for the truncated
polynomial ring.  A ring object carries the optional modulus so values stay
primitive.
"""

from __future__ import annotations

from dataclasses import dataclass, field

MAX_GROUND = 25


class AlgebraError(ValueError):
    pass


def _check_modulus(modulus):
    if modulus is not None and modulus < 2:
        raise AlgebraError(f"modulus must be >= 2, got {modulus}")


class IntegerRing:
    """Arbitrary-precision integers, optionally reduced mod m."""

    kind = "scalar"

    def __init__(self, modulus: int | None = None):
        _check_modulus(modulus)
        self.modulus = modulus
        self.zero = 0
        self.one = 1 % modulus if modulus else 1

    def add(self, a, b):
        c = a + b
        return c % self.modulus if self.modulus else c

    def sub(self, a, b):
        c = a - b
        return c % self.modulus if self.modulus else c

    def mul(self, a, b):
        c = a * b
        return c % self.modulus if self.modulus else c

    def coerce(self, x: int):
        return x % self.modulus if self.modulus else x

    def value_width(self) -> int:
        return 1


class PolynomialRing:
    """Polynomials truncated beyond degree cap, as fixed-length tuples."""

    kind = "poly"

    def __init__(self, cap: int, modulus: int | None = None):
        if cap < 0:
            raise AlgebraError("polynomial cap must be >= 0")
        _check_modulus(modulus)
        self.cap = cap
        self.modulus = modulus
        self.zero = (0,) * (cap + 1)
        one = 1 % modulus if modulus else 1
        self.one = (one,) + (0,) * cap

    def add(self, a, b):
        m = self.modulus
        if m:
            return tuple((x + y) % m for x, y in zip(a, b))
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        m = self.modulus
        if m:
            return tuple((x - y) % m for x, y in zip(a, b))
        return tuple(x - y for x, y in zip(a, b))

    def mul(self, a, b):
        n = self.cap + 1
        out = [0] * n
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j in range(n - i):
                y = b[j]
                if y:
                    out[i + j] += x * y
        if self.modulus:
            return tuple(c % self.modulus for c in out)
        return tuple(out)

    def coerce(self, x: int):
        return ((x % self.modulus if self.modulus else x),) + (0,) * self.cap

    def monomial(self, degree: int, coeff: int = 1):
        """coeff * X^degree, truncated to zero when degree exceeds the cap."""
        if degree > self.cap:
            return self.zero
        c = coeff % self.modulus if self.modulus else coeff
        return tuple(c if i == degree else 0 for i in range(self.cap + 1))

    def value_width(self) -> int:
        return self.cap + 1


@dataclass
class SetFunction:
    """Dense table over all subsets of a ground set of size r."""

    ring: object
    r: int
    values: list = field(default_factory=list)

    def __post_init__(self):
        if not (0 <= self.r <= MAX_GROUND):
            raise AlgebraError(f"ground set size {self.r} outside 0..{MAX_GROUND}")
        if not self.values:
            self.values = [self.ring.zero] * (1 << self.r)
        elif len(self.values) != 1 << self.r:
            raise AlgebraError("value table does not match ground set size")

    def __getitem__(self, mask: int):
        return self.values[mask]

    def __setitem__(self, mask: int, value):
        self.values[mask] = value

    def copy(self) -> "SetFunction":
        return SetFunction(self.ring, self.r, list(self.values))

    def __eq__(self, other):
        return (
            isinstance(other, SetFunction)
            and self.r == other.r
            and self.values == other.values
        )


def _check_pair(f: SetFunction, g: SetFunction):
    if f.r != g.r:
        raise AlgebraError("ground set sizes differ")
    if f.ring is not g.ring:
        raise AlgebraError("set functions use different rings")


def zeta(f: SetFunction) -> SetFunction:
    """zf[Y] = sum of f over all subsets of Y."""
    out = f.copy()
    add = f.ring.add
    vals = out.values
    for i in range(f.r):
        bit = 1 << i
        for mask in range(1 << f.r):
            if mask & bit:
                vals[mask] = add(vals[mask], vals[mask ^ bit])
    return out


def mobius(f: SetFunction) -> SetFunction:
    """Inverse of zeta: mf[Y] = sum over X subseteq Y of (-1)^|Y\\X| f[X]."""
    out = f.copy()
    sub = f.ring.sub
    vals = out.values
    for i in range(f.r):
        bit = 1 << i
        for mask in range(1 << f.r):
            if mask & bit:
                vals[mask] = sub(vals[mask], vals[mask ^ bit])
    return out


def subset_convolve(f: SetFunction, g: SetFunction) -> SetFunction:
    """(f*g)[X] = sum over X' subseteq X of f[X'] g[X\\X'], by definition."""
    _check_pair(f, g)
    ring = f.ring
    out = SetFunction(ring, f.r)
    for x in range(1 << f.r):
        acc = ring.zero
        sub = x
        while True:
            acc = ring.add(acc, ring.mul(f[sub], g[x ^ sub]))
            if sub == 0:
                break
            sub = (sub - 1) & x
        out[x] = acc
    return out


def union_product(f: SetFunction, g: SetFunction) -> SetFunction:
    """(f *u g)[X] = sum over X1 cup X2 = X of f[X1] g[X2], by definition."""
    _check_pair(f, g)
    ring = f.ring
    out = SetFunction(ring, f.r)
    zero = ring.zero
    for a in range(1 << f.r):
        fa = f[a]
        if fa == zero:
            continue
        for b in range(1 << f.r):
            gb = g[b]
            if gb != zero:
                u = a | b
                out[u] = ring.add(out[u], ring.mul(fa, gb))
    return out


def pointwise_product(f: SetFunction, g: SetFunction) -> SetFunction:
    _check_pair(f, g)
    out = SetFunction(f.ring, f.r)
    for x in range(1 << f.r):
        out[x] = f.ring.mul(f[x], g[x])
    return out


@dataclass
class Relaxation:
    """Rank-indexed family f^0..f^r with f^i[X] = f[X] when |X| = i and
    f^i[X] = 0 when |X| > i.  Entries above the diagonal are unconstrained."""

    funcs: list[SetFunction]

    @property
    def r(self) -> int:
        return self.funcs[0].r

    def is_valid_for(self, f: SetFunction) -> bool:
        zero = f.ring.zero
        for i, fi in enumerate(self.funcs):
            for x in range(1 << f.r):
                k = bin(x).count("1")
                if k == i and fi[x] != f[x]:
                    return False
                if k > i and fi[x] != zero:
                    return False
        return True


def canonical_relaxation(f: SetFunction) -> Relaxation:
    """The relaxation with f^i[X] = f[X] for |X| <= i, else 0."""
    funcs = []
    for i in range(f.r + 1):
        fi = SetFunction(f.ring, f.r)
        for x in range(1 << f.r):
            if bin(x).count("1") <= i:
                fi[x] = f[x]
        funcs.append(fi)
    return Relaxation(funcs)


def ranked_union_convolve(fr: Relaxation, gr: Relaxation) -> Relaxation:
    """a^i = sum over j of f^j *u g^(i-j).  On the diagonal (|X| = i) this
    recovers the subset convolution of the underlying functions."""
    if fr.r != gr.r:
        raise AlgebraError("ground set sizes differ")
    r = fr.r
    ring = fr.funcs[0].ring
    out = []
    for i in range(r + 1):
        acc = SetFunction(ring, r)
        for j in range(i + 1):
            term = union_product(fr.funcs[j], gr.funcs[i - j])
            for x in range(1 << r):
                acc[x] = ring.add(acc[x], term[x])
        out.append(acc)
    return Relaxation(out)
