"""Legendre-form elliptic curves over F_p and F_{p^2}.

Supersingularity is decided two ways: by vanishing of the Deuring
(Hasse) polynomial H_p(t) = sum_i C(m, i)^2 t^i, m = (p-1)/2, at the
Legendre parameter, and over F_p by counting points.  Curves over the base
field are carried as y^2 = x^3 + a x^2 + b x.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .ffield import FieldElement, FieldError, is_square, make_field, sqrt, sqrt_table

Point = Optional[tuple]  # None is the point at infinity


@dataclass(frozen=True)
class LegendreCurve:
    """E_s : y^2 = x(x - 1)(x - s)."""

    s: FieldElement

    def __post_init__(self):
        if self.s == 0 or self.s == 1:
            raise FieldError(f"degenerate Legendre parameter {self.s}")

    @property
    def field(self):
        return self.s.field

    def to_general(self) -> "GeneralCubicCurve":
        return GeneralCubicCurve(-(self.s + 1), self.s)

    def j_invariant(self) -> FieldElement:
        s = self.s
        return 256 * (s * s - s + 1) ** 3 / (s * s * (s - 1) ** 2)


@dataclass(frozen=True)
class GeneralCubicCurve:
    """y^2 = x^3 + a x^2 + b x."""

    a: FieldElement
    b: FieldElement

    def __post_init__(self):
        if self.b == 0 or self.a * self.a - 4 * self.b == 0:
            raise FieldError(f"singular curve y^2 = x^3 + {self.a} x^2 + {self.b} x")

    @property
    def field(self):
        return self.a.field

    def rhs(self, x: FieldElement) -> FieldElement:
        return x * (x * x + self.a * x + self.b)

    def contains(self, P: Point) -> bool:
        if P is None:
            return True
        x, y = P
        return y * y == self.rhs(x)

    def two_torsion(self) -> list:
        """The finite 2-torsion points rational over the curve's field."""
        pts = [(self.field(0), self.field(0))]
        disc = self.a * self.a - 4 * self.b
        r = sqrt(disc)
        if r is not None:
            inv2 = self.field(2).inverse()
            for root in ((-self.a + r) * inv2, (-self.a - r) * inv2):
                pts.append((root, self.field(0)))
        return pts


def _as_general(curve) -> GeneralCubicCurve:
    return curve.to_general() if isinstance(curve, LegendreCurve) else curve


# ---------------------------------------------------------------------------
# Group law (affine chord-tangent)
# ---------------------------------------------------------------------------


def negate(P: Point) -> Point:
    return None if P is None else (P[0], -P[1])


def add_points(curve, P: Point, Q: Point) -> Point:
    E = _as_general(curve)
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if y1 == -y2:
            return None
        slope = (3 * x1 * x1 + 2 * E.a * x1 + E.b) / (2 * y1)
    else:
        slope = (y2 - y1) / (x2 - x1)
    x3 = slope * slope - E.a - x1 - x2
    return (x3, slope * (x1 - x3) - y1)


def double_point(curve, P: Point) -> Point:
    return add_points(curve, P, P)


def scalar_mul(curve, k: int, P: Point) -> Point:
    if k < 0:
        return scalar_mul(curve, -k, negate(P))
    R = None
    while k:
        if k & 1:
            R = add_points(curve, R, P)
        P = add_points(curve, P, P)
        k >>= 1
    return R


def rational_points(curve) -> list:
    """Every point of E(F_q), infinity first.  Exhaustive, so keep q small."""
    E = _as_general(curve)
    pts: list = [None]
    for x in E.field.elements():
        y = sqrt(E.rhs(x))
        if y is None:
            continue
        pts.append((x, y))
        if not y.is_zero():
            pts.append((x, -y))
    return pts


# ---------------------------------------------------------------------------
# Deuring polynomial
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DeuringPolynomial:
    p: int
    coeffs: tuple  # coeffs[i] multiplies t^i

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t: FieldElement) -> FieldElement:
        acc = t.field(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc


@lru_cache(maxsize=256)
def deuring_poly(p: int) -> DeuringPolynomial:
    if p < 5:
        raise FieldError(f"p must be >= 5, got {p}")
    m = (p - 1) // 2
    coeffs = [1]
    binom = 1
    for i in range(1, m + 1):
        binom = binom * (m - i + 1) * pow(i, -1, p) % p
        coeffs.append(binom * binom % p)
    return DeuringPolynomial(p, tuple(coeffs))


def is_supersingular_fast(E: LegendreCurve) -> bool:
    """H_p(s) == 0, evaluated in whatever field s lives in."""
    return deuring_poly(E.field.p)(E.s).is_zero()


def deuring_vanishes(p: int, re: np.ndarray, im: Optional[np.ndarray] = None) -> np.ndarray:
    """Vectorized H_p(t) == 0 for many t = re + im*s in F_{p^2}.

    With ``im`` omitted the parameters are taken in F_p.
    """
    if p >= 1 << 30:
        raise FieldError("vectorized path needs p < 2^30")
    coeffs = deuring_poly(p).coeffs
    re = np.asarray(re, dtype=np.int64) % p
    if im is None:
        acc = np.full(re.shape, coeffs[-1], dtype=np.int64)
        for c in coeffs[-2::-1]:
            acc = (acc * re + c) % p
        return acc == 0
    im = np.asarray(im, dtype=np.int64) % p
    n = make_field(p, 2).tower_nonresidues[0][0]
    n_im = n * im % p
    A = np.full(re.shape, coeffs[-1], dtype=np.int64)
    B = np.zeros(re.shape, dtype=np.int64)
    for c in coeffs[-2::-1]:
        A, B = (A * re % p + B * n_im + c) % p, (A * im + B * re) % p
    return (A == 0) & (B == 0)


# ---------------------------------------------------------------------------
# Point counting over F_p
# ---------------------------------------------------------------------------


def _int_coeffs(curve) -> tuple:
    E = _as_general(curve)
    if E.field.degree != 1:
        raise FieldError("point counting is defined over the prime field only")
    return E.field.p, int(E.a), int(E.b)


def _chi_table(p: int) -> np.ndarray:
    roots = sqrt_table(p)
    chi = np.where(roots >= 0, 1, -1).astype(np.int64)
    chi[0] = 0
    return chi


def point_count(curve) -> int:
    """#E(F_p) = p + 1 + sum_x chi(f(x))."""
    p, a, b = _int_coeffs(curve)
    x = np.arange(p, dtype=np.int64)
    f = x * ((x * x + a * x + b) % p) % p
    return int(p + 1 + _chi_table(p)[f].sum())


def is_supersingular_oracle(E) -> bool:
    p = _int_coeffs(E)[0]
    return point_count(E) == p + 1


# ---------------------------------------------------------------------------
# Legendre isomorphism orbits (p = 3 mod 4)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrbitReport:
    s: FieldElement
    orbit: frozenset  # the six parameters with the same j-invariant
    triples: tuple  # F_p-isomorphism classes, the one containing s first


def legendre_orbit(s: FieldElement) -> OrbitReport:
    """Split the six-element Legendre orbit of s into F_p-isomorphism triples.

    Valid for p = 3 mod 4 and j(E_s) != 0.  Which three parameters go
    together is decided by the squareness of s and s - 1.
    """
    K = s.field
    if K.degree != 1 or K.p % 4 != 3:
        raise FieldError("legendre_orbit needs s in F_p with p = 3 mod 4")
    if s == 0 or s == 1:
        raise FieldError(f"degenerate Legendre parameter {s}")
    if s * s - s + 1 == 0:
        raise FieldError("j(E_s) = 0 is excluded")
    one = K(1)
    orbit = frozenset({s, 1 / s, one - s, 1 / (one - s), s / (s - 1), (s - 1) / s})
    special = frozenset({K(-1), K(2), 1 / K(2)})
    if s in special:
        return OrbitReport(s, orbit, (special,))
    sq, sq1 = is_square(s), is_square(s - 1)
    if sq and sq1:
        mine = {s, 1 / s, 1 / (one - s)}
    elif sq:
        mine = {s, 1 / s, s / (s - 1)}
    elif sq1:
        mine = {s, (s - 1) / s, 1 / (one - s)}
    else:
        mine = {s, (s - 1) / s, s / (s - 1)}
    mine = frozenset(mine)
    return OrbitReport(s, orbit, (mine, orbit - mine))


def isomorphic_parameters(s: FieldElement) -> frozenset:
    """All t in F_p with E_t isomorphic to E_s over F_p.

    Independent of ``legendre_orbit``: an F_p-isomorphism between curves
    y^2 = cubic has the shape x -> u^2 x + r with r a root, so E_t ~ E_s iff
    for some root e of x(x-1)(x-s) the shifted roots d1, d2 satisfy
    d1 = u^2 with u in F_p^* and t = d2/d1.
    """
    roots = [s.field(0), s.field(1), s]
    found = set()
    for e in roots:
        d = [r - e for r in roots if r != e]
        for d1, d2 in ((d[0], d[1]), (d[1], d[0])):
            if is_square(d1):
                found.add(d2 / d1)
    return frozenset(found)


# ---------------------------------------------------------------------------
# 2-descent and the 2-isogeny
# ---------------------------------------------------------------------------


def halving_membership(curve, Q: tuple) -> bool:
    """Whether the 2-torsion point Q equals [2]P for some P in E(F_p).

    Runs over every affine P = (x, y) with y != 0 and applies the x-only
    duplication formula x([2]P) = (x^2 - b)^2 / (4 f(x)); points with y = 0
    double to O.
    """
    E = _as_general(curve)
    p, a, b = _int_coeffs(E)
    if Q is None or not Q[1].is_zero() or not E.contains(Q):
        raise FieldError(f"{Q} is not a finite 2-torsion point")
    xq = int(Q[0])
    x = np.arange(p, dtype=np.int64)
    f = x * ((x * x + a * x + b) % p) % p
    on_curve = _chi_table(p)[f] == 1
    num = (x * x - b) % p
    num = num * num % p
    den = 4 * f % p
    return bool(np.any(on_curve & (num == xq * den % p)))


def two_isogeny(curve) -> tuple[GeneralCubicCurve, Callable[[Point], Point]]:
    """theta: y^2 = x^3 + a x^2 + b x  ->  Y^2 = X^3 - 2a X^2 + (a^2 - 4b) X.

    Kernel {O, (0, 0)}.
    """
    E = _as_general(curve)
    image = GeneralCubicCurve(-2 * E.a, E.a * E.a - 4 * E.b)

    def point_map(P: Point) -> Point:
        if P is None or P[0].is_zero():
            return None
        x, y = P
        x2 = x * x
        return (y * y / x2, y * (E.b - x2) / x2)

    return image, point_map
