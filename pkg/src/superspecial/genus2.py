"""Type-(3) genus-2 curves C_lam : y^2 = x(x-1)(x+1)(x-lam)(x-1/lam).

C_lam is superspecial exactly when the two elliptic curves with Legendre
parameters

    Lam(lam)  = -(lam - sqrt(lam^2 - 1))^2
    Lam'(lam) = -(lam + sqrt(lam^2 - 1))^2 = 1 / Lam(lam)

are supersingular.  ``psi(p)`` counts the superspecial lam in
F_p minus {0, 1, -1}.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

import numpy as np

from .ellcurve import LegendreCurve, deuring_vanishes, is_supersingular_fast
from .ffield import (
    FieldElement,
    FieldError,
    evaluate_on_field,
    inverse_table,
    is_square,
    lift,
    make_field,
    sqrt,
    sqrt_table,
)

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class Genus2Curve:
    lam: Union[FieldElement, Rational]

    def __post_init__(self):
        if self.lam in (0, 1, -1):
            raise FieldError(f"degenerate genus-2 parameter {self.lam}")

    def rhs(self, x: FieldElement) -> FieldElement:
        lam = self.lam
        return x * (x - 1) * (x + 1) * (x - lam) * (x - 1 / lam)

    def reduce(self, p: int) -> Optional["Genus2Curve"]:
        """Reduction mod p, or None when lam has p in its denominator or
        lands on {0, 1, -1}."""
        lam = Fraction(self.lam)
        if lam.denominator % p == 0:
            return None
        r = lam.numerator * pow(lam.denominator, -1, p) % p
        if r in (0, 1, p - 1):
            return None
        return Genus2Curve(make_field(p)(r))


@dataclass(frozen=True)
class LambdaPair:
    Lam: FieldElement
    Lam_prime: FieldElement
    in_base_field: bool
    root: FieldElement  # the square root of lam^2 - 1 that was used


def _base_lambda(lam: FieldElement) -> FieldElement:
    if lam.field.degree != 1:
        raise FieldError("lam must lie in F_p")
    if lam in (0, 1, -1):
        raise FieldError(f"degenerate genus-2 parameter {lam}")
    return lam


def lambda_to_pair(lam: FieldElement) -> LambdaPair:
    lam = _base_lambda(lam)
    p = lam.field.p
    disc = lam * lam - 1
    r = sqrt(disc)
    if r is None:
        K2 = make_field(p, 2)
        lam2 = lift(lam, K2)
        r = sqrt(lift(disc, K2))
        Lam = -((lam2 - r) ** 2)
        return LambdaPair(Lam, -((lam2 + r) ** 2), False, r)
    return LambdaPair(-((lam - r) ** 2), -((lam + r) ** 2), True, r)


def is_superspecial(lam: FieldElement, verify: bool = False) -> bool:
    """Superspeciality of C_lam via supersingularity of E_Lam.

    Since Lam' = 1/Lam and E_s, E_{1/s} are supersingular together, only
    Lam is tested unless ``verify`` asks for both sides.
    """
    pair = lambda_to_pair(lam)
    ss = is_supersingular_fast(LegendreCurve(pair.Lam))
    if verify:
        ss_prime = is_supersingular_fast(LegendreCurve(pair.Lam_prime))
        if ss != ss_prime:
            raise AssertionError(f"E_Lam and E_Lam' disagree at lam={lam}")
    return ss


# ---------------------------------------------------------------------------
# Whole-prime enumeration
# ---------------------------------------------------------------------------


def lambda_coordinates(p: int, lam: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(re, im, split) of Lam(lam) in F_{p^2} for an array of lam values.

    ``split`` marks lam with lam^2 - 1 a square in F_p (Lam then lies in F_p).
    Roots come from ``sqrt_table`` so they agree with ``lambda_to_pair``.
    """
    lam = np.asarray(lam, dtype=np.int64) % p
    roots = sqrt_table(p)
    disc = (lam * lam - 1) % p
    r = roots[disc]
    split = r >= 0
    n = make_field(p, 2).tower_nonresidues[0][0]
    b = roots[disc * inverse_table(p)[n] % p]
    d = (lam - np.where(split, r, 0)) % p
    re = np.where(split, -(d * d) % p, -(2 * lam * lam - 1) % p) % p
    im = np.where(split, 0, 2 * lam * b % p)
    return re, im, split


@lru_cache(maxsize=128)
def _deuring_mask(p: int) -> np.ndarray:
    mask = np.zeros(p, dtype=bool)
    half = np.arange(2, (p - 1) // 2 + 1, dtype=np.int64)
    re, im, _ = lambda_coordinates(p, half)
    ss = deuring_vanishes(p, re, im)
    mask[half] = ss
    mask[p - half] = ss  # Lam(-lam) = 1/Lam(lam)
    mask.flags.writeable = False
    return mask


def hasse_coefficients(p: int) -> list[int]:
    """Coefficients (ascending) of K_p(c) with K_p(c) = 0 iff C_lam is
    superspecial, c = lam^2 - 1.

    E_Lam is isomorphic over the algebraic closure to the F_p-curve
    y^2 = x^3 - 2c x^2 - c x, whose Hasse invariant is the coefficient of
    x^m in (x^2 - 2c x - c)^m, m = (p-1)/2.  After removing the power of c
    it is a polynomial of degree floor(m/2).
    """
    m = (p - 1) // 2
    top = m // 2
    fact = [1] * (m + 1)
    for i in range(1, m + 1):
        fact[i] = fact[i - 1] * i % p
    inv = [pow(f, -1, p) for f in fact]
    coeffs = [0] * (top + 1)
    for i in range(top + 1):
        multinom = fact[m] * inv[i] % p * inv[i] % p * inv[m - 2 * i] % p
        sign = -1 if i % 2 else 1
        g = multinom * pow(-2, m - 2 * i, p) * sign % p
        coeffs[top - i] = g
    return coeffs


@lru_cache(maxsize=4096)
def _hasse_mask(p: int) -> np.ndarray:
    values = evaluate_on_field(hasse_coefficients(p), p)
    lam = np.arange(p, dtype=np.int64)
    mask = values[(lam * lam - 1) % p] == 0
    mask[[0, 1, p - 1]] = False
    mask.flags.writeable = False
    return mask


def superspecial_mask(p: int, method: str = "deuring") -> np.ndarray:
    """Boolean array over residues: mask[lam] iff C_lam is superspecial mod p.

    ``deuring`` evaluates H_p at Lam(lam) in F_{p^2}, O(p^2).  ``hasse``
    evaluates the F_p-rational Hasse invariant at every unit by one FFT
    convolution, O(p log p).
    """
    if p < 5:
        raise FieldError(f"p must be >= 5, got {p}")
    if method == "deuring":
        return _deuring_mask(p)
    if method == "hasse":
        return _hasse_mask(p)
    raise ValueError(f"unknown method {method!r}")


def sigma_set(p: int, method: str = "deuring") -> tuple[int, ...]:
    """Sorted residues lam with C_lam superspecial."""
    return tuple(int(v) for v in np.flatnonzero(superspecial_mask(p, method)))


def psi(p: int, method: str = "deuring") -> int:
    return int(superspecial_mask(p, method).sum())


def theorem_a_predict(p: int, h_minus_p: int, h_minus_4p: int) -> int:
    if p % 4 == 1:
        return h_minus_4p
    if p % 8 == 3:
        return 6 * h_minus_p - 2
    return 2 * h_minus_p - 2


# ---------------------------------------------------------------------------
# The degree-2 maps C_lam -> E_Lam, E_Lam'
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MorphismData:
    lam: FieldElement  # in F_{p^4}
    root: FieldElement  # sqrt(lam^2 - 1) in F_{p^4}
    Lam: FieldElement
    Lam_prime: FieldElement
    eps: FieldElement  # canonical sqrt(-1)
    lam32: FieldElement  # canonical sqrt(lam^3)


def morphism_data(lam: FieldElement) -> MorphismData:
    lam = _base_lambda(lam)
    K4 = make_field(lam.field.p, 4)
    pair = lambda_to_pair(lam)
    l4 = lift(lam, K4)
    eps = sqrt(K4(-1))
    lam32 = sqrt(l4**3)
    if eps is None or lam32 is None:
        raise FieldError("F_{p^4} is too small to hold eps and lam^(3/2)")
    return MorphismData(
        l4, lift(pair.root, K4), lift(pair.Lam, K4), lift(pair.Lam_prime, K4), eps, lam32
    )


def morphism_image(lam: FieldElement, P: tuple, which: int, eps_sign: int = 1,
                   lam32_sign: int = 1):
    """Image of a point P of C_lam(F_{p^4}) under f1 (which=1) or f2 (which=2).

    None stands for the point at infinity (the pole x = lam).
    """
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    d = morphism_data(lam)
    x, y = P
    if x.field != d.lam.field:
        raise FieldError("points must have coordinates in F_{p^4}")
    l = d.lam
    if x == l:
        return None
    shift = l - d.root if which == 1 else l + d.root
    X = -(l * x + (l * l - 1) * x / (x - l))
    Y = eps_sign * lam32_sign * d.eps * d.lam32 * (x - shift) / (x - l) ** 2 * y
    return (X, Y)


def _on_legendre(P, s: FieldElement) -> bool:
    if P is None:
        return True
    X, Y = P
    return Y * Y == X * (X - 1) * (X - s)


def morphism_targets(lam: FieldElement, P: tuple, which: int, eps_sign: int = 1,
                     lam32_sign: int = 1) -> frozenset:
    """Which of {"Lam", "Lam_prime"} the image of P lies on."""
    d = morphism_data(lam)
    Q = morphism_image(lam, P, which, eps_sign, lam32_sign)
    hit = set()
    if _on_legendre(Q, d.Lam):
        hit.add("Lam")
    if _on_legendre(Q, d.Lam_prime):
        hit.add("Lam_prime")
    return frozenset(hit)


def morphism_check(lam: FieldElement, P: tuple, which: int, eps_sign: int = 1,
                   lam32_sign: int = 1) -> bool:
    """True iff f_which(P) satisfies the equation of its target curve
    (E_Lam for f1, E_Lam' for f2)."""
    d = morphism_data(lam)
    if not Genus2Curve(d.lam).rhs(P[0]) == P[1] * P[1]:
        raise FieldError(f"{P} is not on C_lam")
    target = d.Lam if which == 1 else d.Lam_prime
    return _on_legendre(morphism_image(lam, P, which, eps_sign, lam32_sign), target)


def sample_points(lam: FieldElement, count: int, rng: random.Random) -> list[tuple]:
    """Random affine points of C_lam(F_{p^4})."""
    lam = _base_lambda(lam)
    K4 = make_field(lam.field.p, 4)
    C = Genus2Curve(lift(lam, K4))
    pts = []
    while len(pts) < count:
        x = K4(tuple(rng.randrange(K4.p) for _ in range(4)))
        y = sqrt(C.rhs(x))
        if y is not None:
            pts.append((x, y if rng.random() < 0.5 else -y))
    return pts


__all__ = [
    "Genus2Curve",
    "LambdaPair",
    "MorphismData",
    "hasse_coefficients",
    "is_square",
    "is_superspecial",
    "lambda_coordinates",
    "lambda_to_pair",
    "morphism_check",
    "morphism_data",
    "morphism_image",
    "morphism_targets",
    "psi",
    "sample_points",
    "sigma_set",
    "superspecial_mask",
    "theorem_a_predict",
]
