"""Table-driven arithmetic in GF(p^e).

Elements are plain ints in ``range(q)``.  For ``e > 1`` the int is the
base-p, little-endian encoding of the coefficient vector of a polynomial
in ``x`` reduced modulo a fixed monic irreducible of degree ``e``; e.g. in
GF(4) the element 2 is ``x`` and 3 is ``x + 1``.  This index order is what
"the i-th element of the field" means throughout the package.
"""

from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple

from .errors import NoIrreducibleFound, NotPrime, TooLarge, ZeroInverse

MAX_ORDER = 1 << 16
# q*q tables for add/mul are only built up to this order
_FULL_TABLE_LIMIT = 256

FieldElement = int


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _digits(n: int, p: int, e: int) -> list[int]:
    out = []
    for _ in range(e):
        n, r = divmod(n, p)
        out.append(r)
    return out


def _undigits(ds, p: int) -> int:
    n = 0
    for c in reversed(ds):
        n = n * p + c
    return n


def _poly_rem(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic polynomial ``m`` over GF(p)."""
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return a[:dm]


def _is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    e = len(poly) - 1
    for k in range(1, e // 2 + 1):
        for low in range(p**k):
            divisor = _digits(low, p, k) + [1]
            if not any(_poly_rem(poly, divisor, p)):
                return False
    return True


def _smallest_irreducible(p: int, e: int) -> tuple[int, ...]:
    for low in range(p**e):
        poly = _digits(low, p, e) + [1]
        if poly[0] and _is_irreducible(poly, p):
            return tuple(poly)
    raise NoIrreducibleFound(f"no monic irreducible of degree {e} over GF({p})")


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class FieldSpec:
    """GF(p^e) with precomputed exp/log/inverse tables.

    Instances are immutable and interned by :func:`field_make`; equality is
    by ``(p, e, modulus)``.
    """

    __slots__ = (
        "p", "e", "q", "modulus", "_exp", "_log", "_inv", "_neg",
        "_add_tab", "_mul_tab",
    )

    def __init__(self, p: int, e: int, modulus: tuple[int, ...]):
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = modulus
        q = self.q

        self._neg = [self._slow_neg(x) for x in range(q)]
        if q <= _FULL_TABLE_LIMIT:
            self._add_tab = [[self._slow_add(x, y) for y in range(q)] for x in range(q)]
        else:
            self._add_tab = None

        gen = self._find_generator()
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        x = 1
        for k in range(q - 1):
            exp[k] = x
            log[x] = k
            x = self._slow_mul(x, gen)
        for k in range(q - 1, 2 * (q - 1)):
            exp[k] = exp[k - (q - 1)]
        self._exp = exp
        self._log = log
        inv = [0] * q
        for x in range(1, q):
            inv[x] = exp[(q - 1 - log[x]) % (q - 1)]
        self._inv = inv
        if q <= _FULL_TABLE_LIMIT:
            self._mul_tab = [[self._table_mul(x, y) for y in range(q)] for x in range(q)]
        else:
            self._mul_tab = None

    # construction helpers; only used while filling tables

    def _slow_add(self, x: int, y: int) -> int:
        if self.e == 1:
            return (x + y) % self.p
        if self.p == 2:
            return x ^ y
        dx, dy = _digits(x, self.p, self.e), _digits(y, self.p, self.e)
        return _undigits([(a + b) % self.p for a, b in zip(dx, dy)], self.p)

    def _slow_neg(self, x: int) -> int:
        if self.e == 1:
            return (-x) % self.p
        return _undigits([(-a) % self.p for a in _digits(x, self.p, self.e)], self.p)

    def _slow_mul(self, x: int, y: int) -> int:
        if self.e == 1:
            return (x * y) % self.p
        p, e = self.p, self.e
        dx, dy = _digits(x, p, e), _digits(y, p, e)
        prod = [0] * (2 * e - 1)
        for i, a in enumerate(dx):
            if a:
                for j, b in enumerate(dy):
                    prod[i + j] = (prod[i + j] + a * b) % p
        return _undigits(_poly_rem(prod, list(self.modulus), p), p)

    def _slow_pow(self, x: int, n: int) -> int:
        out = 1
        while n:
            if n & 1:
                out = self._slow_mul(out, x)
            x = self._slow_mul(x, x)
            n >>= 1
        return out

    def _find_generator(self) -> int:
        q = self.q
        if q == 2:
            return 1
        factors = _prime_factors(q - 1)
        for g in range(2, q):
            if all(self._slow_pow(g, (q - 1) // r) != 1 for r in factors):
                return g
        raise NoIrreducibleFound(f"GF({q}) has no generator; modulus is reducible")

    def _table_mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        return self._exp[self._log[x] + self._log[y]]

    # arithmetic

    def add(self, x: int, y: int) -> int:
        if self._add_tab is not None:
            return self._add_tab[x][y]
        return self._slow_add(x, y)

    def neg(self, x: int) -> int:
        return self._neg[x]

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self._neg[y])

    def mul(self, x: int, y: int) -> int:
        if self._mul_tab is not None:
            return self._mul_tab[x][y]
        return self._table_mul(x, y)

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroInverse("0 has no multiplicative inverse")
        return self._inv[x]

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def elements(self) -> range:
        return range(self.q)

    def coefficients(self, x: int) -> list[int]:
        """Coefficient vector of ``x`` (little-endian, length e)."""
        return _digits(x, self.p, self.e)

    def to_json(self) -> dict:
        return {"p": self.p, "e": self.e, "modulus": list(self.modulus)}

    def _ident(self):
        return (self.p, self.e, self.modulus)

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return self._ident() == other._ident()

    def __hash__(self) -> int:
        return hash(self._ident())

    def __repr__(self) -> str:
        if self.e == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.e})"

    def __reduce__(self):
        return (field_make, (self.p, self.e))


@lru_cache(maxsize=None)
def field_make(p: int, e: int = 1) -> FieldSpec:
    """Build (and intern) GF(p^e).

    The modulus for ``e > 1`` is the monic irreducible whose lower
    coefficients have the smallest base-p encoding, so x^2+x+1 for GF(4)
    and x^3+x+1 for GF(8).
    """
    if not is_prime(p):
        raise NotPrime(f"p={p} is not prime")
    if e < 1:
        raise NotPrime(f"exponent e={e} must be >= 1")
    if p**e > MAX_ORDER:
        raise TooLarge(f"p^e={p}^{e} exceeds the table limit {MAX_ORDER}")
    modulus = () if e == 1 else _smallest_irreducible(p, e)
    return FieldSpec(p, e, modulus)


def field_from_order(q: int) -> FieldSpec:
    """GF(q) for a prime power q."""
    for p in range(2, q + 1):
        if q % p == 0:
            e, n = 0, q
            while n % p == 0:
                n //= p
                e += 1
            if n != 1:
                raise NotPrime(f"q={q} is not a prime power")
            return field_make(p, e)
    raise NotPrime(f"q={q} is not a prime power")


def fe_add(f: FieldSpec, x: int, y: int) -> int:
    return f.add(x, y)


def fe_mul(f: FieldSpec, x: int, y: int) -> int:
    return f.mul(x, y)


def fe_inv(f: FieldSpec, x: int) -> int:
    return f.inv(x)


def enumerate_field(f: FieldSpec) -> list[int]:
    return list(range(f.q))


class ProjectivePoint(NamedTuple):
    alpha: int
    beta: int


def canonical_point(f: FieldSpec, alpha: int, beta: int) -> ProjectivePoint:
    """Scale ``(alpha, beta)`` to ``[a:1]`` or ``[1:0]``."""
    if beta:
        return ProjectivePoint(f.div(alpha, beta), 1)
    if alpha:
        return ProjectivePoint(1, 0)
    raise ZeroInverse("(0, 0) is not a projective point")


def enumerate_projective_line(f: FieldSpec) -> list[ProjectivePoint]:
    """The q+1 points ``[a:1]`` in field order, then ``[1:0]``."""
    return [ProjectivePoint(a, 1) for a in range(f.q)] + [ProjectivePoint(1, 0)]
