"""Exact arithmetic in F_p and its quadratic tower F_{p^2} and F_{p^4}.

An element of F_{p^2} = F_p[s]/(s^2 - n) is stored as the coordinate pair
(a, b) meaning a + b*s.  F_{p^4} = F_{p^2}[w]/(w^2 - m) stores four
coordinates (a0, b0, a1, b1) meaning (a0 + b0*s) + (a1 + b1*s)*w.  The
tower non-residues n and m are chosen deterministically by
``make_field``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, Optional, Union

import numpy as np
from sympy import isprime
from sympy.ntheory import primitive_root

Coords = tuple[int, ...]


class FieldError(ValueError):
    """Raised for invalid field parameters or undefined field operations."""


# ---------------------------------------------------------------------------
# Raw coordinate arithmetic.  ``tower`` is a tuple whose k-th entry is the
# non-residue (as a coordinate tuple of length 2**k) adjoined at level k.
# ---------------------------------------------------------------------------


def _add(x: Coords, y: Coords, p: int) -> Coords:
    return tuple((u + v) % p for u, v in zip(x, y))


def _sub(x: Coords, y: Coords, p: int) -> Coords:
    return tuple((u - v) % p for u, v in zip(x, y))


def _neg(x: Coords, p: int) -> Coords:
    return tuple(-u % p for u in x)


def _mul(x: Coords, y: Coords, p: int, tower: tuple) -> Coords:
    k = len(x)
    if k == 1:
        return (x[0] * y[0] % p,)
    if k == 2:
        a, b = x
        c, d = y
        n = tower[0][0]
        return ((a * c + n * (b * d % p)) % p, (a * d + b * c) % p)
    h = k // 2
    a, b = x[:h], x[h:]
    c, d = y[:h], y[h:]
    m = tower[h.bit_length() - 1]
    bd = _mul(b, d, p, tower)
    lo = _add(_mul(a, c, p, tower), _mul(m, bd, p, tower), p)
    hi = _add(_mul(a, d, p, tower), _mul(b, c, p, tower), p)
    return lo + hi


def _inv(x: Coords, p: int, tower: tuple) -> Coords:
    k = len(x)
    if k == 1:
        if x[0] % p == 0:
            raise ZeroDivisionError("inverse of zero")
        return (pow(x[0], -1, p),)
    h = k // 2
    a, b = x[:h], x[h:]
    m = tower[h.bit_length() - 1]
    # (a + b w)^-1 = (a - b w) / (a^2 - m b^2)
    norm = _sub(_mul(a, a, p, tower), _mul(m, _mul(b, b, p, tower), p, tower), p)
    ninv = _inv(norm, p, tower)
    return _mul(a, ninv, p, tower) + _neg(_mul(b, ninv, p, tower), p)


def _is_zero(x: Coords) -> bool:
    return not any(x)


# ---------------------------------------------------------------------------
# Field descriptors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldDescriptor:
    """The field F_q, q = p**degree, together with its tower non-residues."""

    p: int
    degree: int
    tower_nonresidues: tuple = ()

    @property
    def q(self) -> int:
        return self.p**self.degree

    def __call__(self, value: Union[int, Coords, "FieldElement"]) -> "FieldElement":
        if isinstance(value, FieldElement):
            return lift(value, self)
        if isinstance(value, (int, np.integer)):
            coords = (int(value) % self.p,) + (0,) * (self.degree - 1)
        else:
            coords = tuple(int(c) % self.p for c in value)
            if len(coords) != self.degree:
                raise FieldError(f"expected {self.degree} coordinates, got {len(coords)}")
        return FieldElement(self, coords)

    def zero(self) -> "FieldElement":
        return self(0)

    def one(self) -> "FieldElement":
        return self(1)

    def gen(self) -> "FieldElement":
        """The adjoined root s of the first tower non-residue (s**2 == n)."""
        if self.degree == 1:
            raise FieldError("F_p has no tower generator")
        return self((0, 1) + (0,) * (self.degree - 2))

    def elements(self) -> Iterator["FieldElement"]:
        """All q elements in lexicographic coordinate order."""
        for coords in product(range(self.p), repeat=self.degree):
            yield FieldElement(self, coords)

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.degree})"


@lru_cache(maxsize=None)
def smallest_nonresidue(p: int) -> int:
    for n in range(2, p):
        if pow(n, (p - 1) // 2, p) == p - 1:
            return n
    raise FieldError(f"no quadratic non-residue mod {p}")


@lru_cache(maxsize=None)
def make_field(p: int, degree: int = 1) -> FieldDescriptor:
    """Return the descriptor of F_{p^degree} with canonical tower non-residues.

    F_{p^2} adjoins a square root of the smallest positive non-residue mod p.
    F_{p^4} adjoins a square root of the lexicographically first non-square of
    F_{p^2}.
    """
    if not isinstance(p, (int, np.integer)) or p < 5 or not isprime(int(p)):
        raise FieldError(f"characteristic must be a prime >= 5, got {p!r}")
    if degree not in (1, 2, 4):
        raise FieldError(f"unsupported extension degree {degree}")
    p = int(p)
    if degree == 1:
        return FieldDescriptor(p, 1, ())
    n = smallest_nonresidue(p)
    if degree == 2:
        return FieldDescriptor(p, 2, ((n,),))
    k2 = make_field(p, 2)
    for coords in product(range(p), repeat=2):
        if not is_square(FieldElement(k2, coords)):
            return FieldDescriptor(p, 4, ((n,), coords))
    raise AssertionError("F_{p^2} has no non-square")  # pragma: no cover


# ---------------------------------------------------------------------------
# Field elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FieldElement:
    field: FieldDescriptor
    coords: Coords

    # -- coercion ----------------------------------------------------------
    def _other(self, other) -> Optional[Coords]:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError(f"descriptor mismatch: {self.field} vs {other.field}")
            return other.coords
        if isinstance(other, (int, np.integer)):
            return (int(other) % self.field.p,) + (0,) * (self.field.degree - 1)
        return None

    def _wrap(self, coords: Coords) -> "FieldElement":
        return FieldElement(self.field, coords)

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self._wrap(_add(self.coords, o, self.field.p))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self._wrap(_sub(self.coords, o, self.field.p))

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self._wrap(_sub(o, self.coords, self.field.p))

    def __neg__(self):
        return self._wrap(_neg(self.coords, self.field.p))

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        f = self.field
        return self._wrap(_mul(self.coords, o, f.p, f.tower_nonresidues))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError(f"inverse of zero in {self.field}")
        f = self.field
        return self._wrap(_inv(self.coords, f.p, f.tower_nonresidues))

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * self._wrap(o).inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self._wrap(o) * self.inverse()

    def __pow__(self, k: int) -> "FieldElement":
        if k < 0:
            return self.inverse() ** (-k)
        f = self.field
        result = (1,) + (0,) * (f.degree - 1)
        base = self.coords
        while k:
            if k & 1:
                result = _mul(result, base, f.p, f.tower_nonresidues)
            base = _mul(base, base, f.p, f.tower_nonresidues)
            k >>= 1
        return self._wrap(result)

    # -- predicates ----------------------------------------------------------
    def is_zero(self) -> bool:
        return _is_zero(self.coords)

    def in_base_field(self) -> bool:
        return not any(self.coords[1:])

    def __int__(self) -> int:
        if not self.in_base_field():
            raise FieldError(f"{self} is not in the prime field")
        return self.coords[0]

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coords == other.coords
        if isinstance(other, (int, np.integer)):
            return self.in_base_field() and self.coords[0] == int(other) % self.field.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.p, self.coords))

    def __lt__(self, other: "FieldElement") -> bool:
        return self.coords < other.coords

    def __repr__(self) -> str:
        if self.field.degree == 1:
            return f"{self.coords[0]}"
        return f"{self.field}{self.coords}"


def lift(x: FieldElement, target: FieldDescriptor) -> FieldElement:
    """Embed x into a larger field of the same tower."""
    if x.field.p != target.p or x.field.degree > target.degree:
        raise FieldError(f"cannot embed {x.field} into {target}")
    coords = x.coords
    while len(coords) < target.degree:
        coords = coords + (0,) * len(coords)
    return FieldElement(target, coords)


def frobenius(x: FieldElement) -> FieldElement:
    """Conjugate a + b*s -> a - b*s in F_{p^2}; this is x**p."""
    if x.field.degree != 2:
        raise FieldError("frobenius is defined here for F_{p^2} only")
    a, b = x.coords
    return FieldElement(x.field, (a, -b % x.field.p))


def norm(x: FieldElement) -> int:
    """N(a + b*s) = a^2 - n*b^2 in F_p, for x in F_{p^2}."""
    if x.field.degree != 2:
        raise FieldError("norm is defined here for F_{p^2} only")
    p = x.field.p
    a, b = x.coords
    return (a * a - x.field.tower_nonresidues[0][0] * b * b) % p


# ---------------------------------------------------------------------------
# Residue symbols and roots
# ---------------------------------------------------------------------------


def legendre_symbol(a: int, p: int) -> int:
    """(a/p) via Euler's criterion."""
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def is_square(x: FieldElement) -> bool:
    if x.is_zero():
        return True
    if x.field.degree == 1:
        return legendre_symbol(x.coords[0], x.field.p) == 1
    return x ** ((x.field.q - 1) // 2) == 1


def tonelli_shanks(a: int, p: int) -> Optional[int]:
    """A square root of a mod p, or None when a is a non-residue."""
    a %= p
    if a == 0:
        return 0
    if legendre_symbol(a, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = smallest_nonresidue(p)
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


@lru_cache(maxsize=None)
def _first_nonsquare(field: FieldDescriptor) -> FieldElement:
    for x in field.elements():
        if not is_square(x):
            return x
    raise AssertionError("no non-square")  # pragma: no cover


def _tonelli_generic(x: FieldElement) -> FieldElement:
    f = x.field
    q, s = f.q - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = _first_nonsquare(f)
    m, c, t, r = s, z**q, x**q, x ** ((q + 1) // 2)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2
            i += 1
        b = c ** (1 << (m - i - 1))
        m, c = i, b * b
        t, r = t * c, r * b
    return r


def _canonical(r: FieldElement) -> FieldElement:
    return min(r, -r, key=lambda e: e.coords)


def sqrt(x: FieldElement) -> Optional[FieldElement]:
    """Canonical square root of x, or None if x is not a square.

    Of the two roots {r, -r} the one with the lexicographically smaller
    coordinate vector is returned.
    """
    f = x.field
    p = f.p
    if x.is_zero():
        return x
    if f.degree == 1:
        r = tonelli_shanks(x.coords[0], p)
        return None if r is None else FieldElement(f, (min(r, p - r),))
    if f.degree == 2:
        a, b = x.coords
        n = f.tower_nonresidues[0][0]
        if b == 0:
            r = tonelli_shanks(a, p)
            if r is not None:
                return _canonical(FieldElement(f, (r, 0)))
            r = tonelli_shanks(a * pow(n, -1, p), p)
            return _canonical(FieldElement(f, (0, r)))
        nr = tonelli_shanks(norm(x), p)
        if nr is None:
            return None
        inv2 = pow(2, -1, p)
        for cand in ((a + nr) * inv2, (a - nr) * inv2):
            c = tonelli_shanks(cand, p)
            if c:
                d = b * pow(2 * c, -1, p) % p
                return _canonical(FieldElement(f, (c, d)))
        raise AssertionError("norm method failed")  # pragma: no cover
    if not is_square(x):
        return None
    return _canonical(_tonelli_generic(x))


def is_eighth_power(x: FieldElement) -> bool:
    """Whether the nonzero x in F_{p^2} lies in (F_{p^2}^*)^8."""
    if x.field.degree != 2:
        raise FieldError("is_eighth_power expects an element of F_{p^2}")
    if x.is_zero():
        raise FieldError("zero is excluded")
    return x ** ((x.field.q - 1) // 8) == 1


# ---------------------------------------------------------------------------
# Table helpers for the vectorized census loops
# ---------------------------------------------------------------------------


@lru_cache(maxsize=64)
def sqrt_table(p: int) -> np.ndarray:
    """r[c] = canonical square root of c mod p, or -1 for non-residues."""
    table = np.full(p, -1, dtype=np.int64)
    i = np.arange((p - 1) // 2, -1, -1, dtype=np.int64)
    # descending i so the smaller root wins the scatter
    table[i * i % p] = i
    table.flags.writeable = False
    return table


@lru_cache(maxsize=64)
def inverse_table(p: int) -> np.ndarray:
    table = np.zeros(p, dtype=np.int64)
    table[1:] = [pow(i, -1, p) for i in range(1, p)]
    table.flags.writeable = False
    return table


def primes_below(n: int) -> np.ndarray:
    """All primes < n (sieve of Eratosthenes)."""
    if n <= 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n, dtype=bool)
    sieve[:2] = False
    for i in range(2, int(n**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    return np.flatnonzero(sieve).astype(np.int64)


def _convolve_mod(x: np.ndarray, y: np.ndarray, p: int) -> np.ndarray:
    # Exact integer convolution mod p through float FFTs on half-width limbs.
    size = len(x) + len(y) - 1
    nfft = 1 << (size - 1).bit_length()
    shift = (p.bit_length() + 1) // 2
    mask = (1 << shift) - 1
    fx = [np.fft.rfft((x >> k) & mask if k else x & mask, nfft) for k in (0, shift)]
    fy = [np.fft.rfft((y >> k) & mask if k else y & mask, nfft) for k in (0, shift)]

    def back(spec):
        return np.rint(np.fft.irfft(spec, nfft)[:size]).astype(np.int64) % p

    lo = back(fx[0] * fy[0])
    mid = back(fx[0] * fy[1] + fx[1] * fy[0])
    hi = back(fx[1] * fy[1])
    base = pow(2, shift, p)
    return (lo + mid * base % p + hi * (base * base % p)) % p


def evaluate_on_field(coeffs, p: int) -> np.ndarray:
    """values[c] = sum_j coeffs[j] * c^j mod p for every c in F_p.

    Uses the identity jk = T(j+k) - T(j) - T(k), T(x) = x(x-1)/2, to turn
    evaluation at the powers of a primitive root into one convolution.
    """
    if p >= 1 << 20:
        raise FieldError("evaluate_on_field supports p < 2^20")
    a = np.asarray(coeffs, dtype=np.int64) % p
    deg = len(a) - 1
    if deg >= p - 1:
        raise FieldError("reduce the polynomial modulo c^(p-1) - 1 first")
    g = primitive_root(p)
    order = p - 1
    gpow = np.empty(order, dtype=np.int64)
    acc = 1
    for e in range(order):
        gpow[e] = acc
        acc = acc * g % p

    def tri(k: np.ndarray) -> np.ndarray:
        return (k * (k - 1) // 2) % order

    j = np.arange(deg + 1, dtype=np.int64)
    u = a * gpow[(-tri(j)) % order] % p
    v = gpow[tri(np.arange(deg + order, dtype=np.int64))]
    corr = _convolve_mod(u[::-1].copy(), v, p)[deg : deg + order]
    k = np.arange(order, dtype=np.int64)
    on_units = corr * gpow[(-tri(k)) % order] % p
    values = np.empty(p, dtype=np.int64)
    values[0] = a[0]
    values[gpow] = on_units
    return values
