"""Averages of phi_lam(X) = #{5 <= p < X : C_lam has superspecial reduction at p}
over integer and rational lam, the character sums behind their constants,
and the residue counts that make the reordered sums exact.

Conventions shared by every path: p = 2, 3 are skipped; a rational lam = a/b
(b >= 1, gcd(a, b) = 1) reduces at p only when p does not divide b, and a
reduction landing on {0, 1, -1} does not count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Union

import numpy as np

from .ffield import make_field, primes_below, sqrt_table
from .genus2 import is_superspecial, sigma_set

Rational = Union[int, Fraction]
SigmaSource = Callable[[int], tuple]


def default_sigma(p: int) -> tuple:
    return sigma_set(p, method="hasse")


@dataclass(frozen=True)
class AverageReport:
    X: float
    N: int
    mode: str
    sum_fast: int
    average: float
    asymptotic: float
    sum_exact: Optional[int] = None

    @property
    def ratio(self) -> float:
        return self.average / self.asymptotic

    @property
    def consistent(self) -> bool:
        return self.sum_exact is None or self.sum_exact == self.sum_fast

    def row(self) -> list:
        return [self.X, self.N, self.mode, self.sum_fast, repr(self.average),
                repr(self.asymptotic), repr(self.ratio)]

    def as_dict(self) -> dict:
        return {
            "X": self.X,
            "N": self.N,
            "mode": self.mode,
            "sum_exact": self.sum_exact,
            "sum_fast": self.sum_fast,
            "average": self.average,
            "asymptotic": self.asymptotic,
            "ratio": self.ratio,
        }


AVERAGE_HEADER = "X,N,mode,sum_fast,average,asymptotic,ratio"


@dataclass(frozen=True)
class RationalHeightCount:
    N: int
    p: int
    t: int
    count_exact: int
    count_approx: float

    @property
    def relative_error(self) -> float:
        return abs(self.count_exact - self.count_approx) / self.count_approx


def _primes(X: float) -> list[int]:
    """Primes 5 <= p < X."""
    return [int(p) for p in primes_below(math.ceil(X)) if p >= 5]


# ---------------------------------------------------------------------------
# phi_lam and the brute-force sums
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _superspecial_residue(p: int, r: int) -> bool:
    if r in (0, 1, p - 1):
        return False
    return is_superspecial(make_field(p)(r))


def _reduce(lam: Fraction, p: int) -> Optional[int]:
    if lam.denominator % p == 0:
        return None
    return lam.numerator * pow(lam.denominator, -1, p) % p


def phi_lambda(lam: Rational, X: float, sigma: Optional[SigmaSource] = None) -> int:
    """phi_lam(X).  With ``sigma`` given, membership is looked up in Sigma_p;
    otherwise each reduction is tested directly."""
    lam = Fraction(lam)
    if lam in (0, 1, -1):
        return 0
    count = 0
    for p in _primes(X):
        r = _reduce(lam, p)
        if r is None:
            continue
        if sigma is None:
            count += _superspecial_residue(p, r)
        else:
            count += r in sigma(p)
    return count


def avg_integer_exact(N: int, X: float) -> int:
    """sum_{|lam| <= N} phi_lam(X), one lam at a time."""
    return sum(phi_lambda(lam, X) for lam in range(-N, N + 1))


def integer_residue_count(N: int, p: int, t: int) -> int:
    """#{lam in Z : |lam| <= N, lam = t mod p} for 0 <= t < p."""
    return (N - t) // p + (N + t) // p + 1


def avg_integer_fast(N: int, X: float, sigma: SigmaSource = default_sigma) -> int:
    """sum_{p < X} sum_{t in Sigma_p} #{|lam| <= N, lam = t mod p}."""
    total = 0
    for p in _primes(X):
        t = np.asarray(sigma(p), dtype=np.int64)
        if t.size:
            total += int(((N - t) // p + (N + t) // p + 1).sum())
    return total


def asymptotic_integer(X: float) -> float:
    if X <= 1:
        raise ValueError("X must exceed 1")
    return 1.5 * math.pi * math.sqrt(X) / math.log(X)


def asymptotic_rational(X: float) -> float:
    if X <= 1:
        raise ValueError("X must exceed 1")
    return 9 / math.pi * math.sqrt(X) / math.log(X)


def integer_report(X: float, N: int, check_exact: bool = False,
                   sigma: SigmaSource = default_sigma) -> AverageReport:
    fast = avg_integer_fast(N, X, sigma)
    exact = avg_integer_exact(N, X) if check_exact else None
    return AverageReport(X, N, "integer", fast, fast / N, asymptotic_integer(X), exact)


# ---------------------------------------------------------------------------
# Rationals of bounded height
# ---------------------------------------------------------------------------


def rationals_of_height(N: int):
    """Every a/b with b >= 1, gcd(a, b) = 1 and max(|a|, b) <= N."""
    for b in range(1, N + 1):
        for a in range(-N, N + 1):
            if math.gcd(a, b) == 1:
                yield a, b


def rational_residue_count_brute(N: int, p: int, t: int) -> int:
    return sum(1 for a, b in rationals_of_height(N) if b % p and (a - t * b) % p == 0)


def mobius_sieve(n: int) -> np.ndarray:
    """mu(k) for 0 <= k <= n (mu(0) set to 0)."""
    mu = np.ones(n + 1, dtype=np.int8)
    mu[0] = 0
    for p in primes_below(n + 1):
        p = int(p)
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
    return mu


def totient_table(n: int) -> np.ndarray:
    """phi(k) for 0 <= k <= n."""
    phi = np.arange(n + 1, dtype=np.int64)
    for p in primes_below(n + 1):
        p = int(p)
        phi[p::p] -= phi[p::p] // p
    return phi


def totient_sum(x: int) -> int:
    """sum_{n <= x} phi(n)."""
    if x < 1:
        raise ValueError("x must be at least 1")
    return int(totient_table(x)[1:].sum())


def rationals_count(N: int) -> int:
    """Number of rationals of height <= N: 0 plus two signs of each
    positive a/b, counted by 2 Phi(N) - 1."""
    return 1 + 2 * (2 * totient_sum(N) - 1)


def _pair_table(p: int, t: int) -> np.ndarray:
    """P[rho] = #{1 <= beta <= rho : t beta mod p in [1, rho]}, rho = 0..p-1."""
    beta = np.arange(1, p, dtype=np.int64)
    key = np.maximum(beta, t * beta % p)
    return np.cumsum(np.bincount(key, minlength=p))


def _lattice_count(M: np.ndarray, p: int, pair_sum: np.ndarray, k: int) -> np.ndarray:
    """sum over k nonzero residues t (closed under t -> -t) of
    #{(a, b) : 1 <= b <= M, p does not divide b, |a| <= M, a = t b mod p}.

    For one t and M = q p + rho this is 2 q^2 (p-1) + 4 q rho + P_t(rho) + P_{-t}(rho);
    ``pair_sum`` holds sum_t P_t.
    """
    q, rho = np.divmod(M, p)
    return k * (2 * q * q * (p - 1) + 4 * q * rho) + 2 * pair_sum[rho]


class _MobiusData:
    def __init__(self, N: int):
        mu = mobius_sieve(N)
        d = np.flatnonzero(mu).astype(np.int64)
        self.N = N
        self.d = d
        self.mu = mu[d].astype(np.int64)
        self.M = N // d


@lru_cache(maxsize=4)
def _mobius_data(N: int) -> _MobiusData:
    return _MobiusData(N)


def _coprime_sum(N: int, p: int, F: Callable[[np.ndarray], np.ndarray]) -> int:
    """sum over d <= N with p not dividing d of mu(d) F(N // d)."""
    data = _mobius_data(N)
    keep = data.d % p != 0
    return int((data.mu[keep] * F(data.M[keep])).sum())


def rational_residue_count(N: int, p: int, t: int) -> RationalHeightCount:
    """Rationals a/b of height <= N with p not dividing b and a = t b mod p.

    Exact by Moebius inversion over the common divisor of (a, b): without the
    coprimality condition the count has a closed form in N // p and N % p.
    """
    if p < 5 or not 0 <= t < p:
        raise ValueError("need p >= 5 and 0 <= t < p")
    make_field(p)
    if N < 1:
        exact = 0
    elif t == 0:
        def F(M):
            q, rho = np.divmod(M, p)
            return (2 * q + 1) * ((p - 1) * q + rho)
        exact = _coprime_sum(N, p, F)
    else:
        # the closed form is symmetric in t, -t; average the pair
        pair = _pair_table(p, t) + _pair_table(p, p - t)
        exact = _coprime_sum(N, p, lambda M: _lattice_count(M, p, pair, 2)) // 2
    return RationalHeightCount(N, p, t, exact, 12 / math.pi**2 * N * N / p)


def _sigma_pair_sum(p: int, sigma_p: tuple) -> np.ndarray:
    total = np.zeros(p, dtype=np.int64)
    for t in sigma_p:
        total += _pair_table(p, t)
    return total


def avg_rational_fast(N: int, X: float, mode: str = "exact",
                      sigma: SigmaSource = default_sigma) -> Union[int, float]:
    """sum_{p < X} sum_{t in Sigma_p} #{ht(lam) <= N, lam = t mod p}.

    ``exact`` (an integer) or ``approx`` (12/pi^2 N^2/p per residue).
    """
    if mode not in ("exact", "approx"):
        raise ValueError(f"unknown mode {mode!r}")
    total = 0 if mode == "exact" else 0.0
    for p in _primes(X):
        sig = tuple(sigma(p))
        if not sig:
            continue
        if mode == "approx":
            total += len(sig) * 12 / math.pi**2 * N * N / p
            continue
        if N < 1:
            continue
        pair = _sigma_pair_sum(p, sig)
        total += _coprime_sum(N, p, lambda M: _lattice_count(M, p, pair, len(sig)))
    return total


def avg_rational_exact(N: int, X: float) -> int:
    """Brute force: sum of phi_lam(X) over every rational of height <= N."""
    return sum(phi_lambda(Fraction(a, b), X) for a, b in rationals_of_height(N))


def rational_report(X: float, N: int, check_exact: bool = False,
                    sigma: SigmaSource = default_sigma) -> AverageReport:
    fast = avg_rational_fast(N, X, "exact", sigma)
    exact = avg_rational_exact(N, X) if check_exact else None
    return AverageReport(X, N, "rational", fast, fast / N**2, asymptotic_rational(X), exact)


# ---------------------------------------------------------------------------
# Character sums
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CharSums:
    X: float
    U: int
    S1: float
    S3: float
    S7: float

    @property
    def scale(self) -> float:
        return math.sqrt(self.X) / math.log(self.X)

    def normalized(self) -> dict:
        return {"S1": self.S1 / self.scale, "S3": self.S3 / self.scale, "S7": self.S7 / self.scale}

    @staticmethod
    def limits() -> dict:
        return {"S1": math.pi**2 / 8, "S3": math.pi**2 / 24, "S7": math.pi**2 / 8}


def _legendre_row(p: int) -> np.ndarray:
    leg = np.where(sqrt_table(p) >= 0, 1.0, -1.0)
    leg[0] = 0.0
    return leg


def char_sums(X: float, U: Optional[int] = None) -> CharSums:
    """S1, S3, S7: sum_{n<=U} 1/n sum_{p<X in the class} chi(n)/sqrt(p).

    S3 and S7 use (n/p) over p = 3, 7 mod 8.  S1 runs over p = 1 mod 4 with
    ``chi_displayed``, which is (n/p) on odd n and 0 on even n.
    Default U = floor(X^(3/4)).
    """
    if X < 5:
        raise ValueError("X must be at least 5")
    if U is None:
        U = int(math.floor(X**0.75))
    n = np.arange(1, U + 1, dtype=np.int64)
    inv_n = 1.0 / n
    inv_odd = np.where(n % 2 == 1, inv_n, 0.0)
    sums = {1: 0.0, 3: 0.0, 7: 0.0}
    for p in _primes(X):
        leg = _legendre_row(p)[n % p]
        if p % 4 == 1:
            sums[1] += float(leg @ inv_odd) / math.sqrt(p)
        else:
            sums[p % 8] += float(leg @ inv_n) / math.sqrt(p)
    return CharSums(X, U, sums[1], sums[3], sums[7])


def predicted_integer_average(X: float, U: Optional[int] = None) -> float:
    """(4/pi) S1 + (12/pi) S3 + (4/pi) S7, the character-sum form of the
    normalized integer average."""
    s = char_sums(X, U)
    return (4 * s.S1 + 12 * s.S3 + 4 * s.S7) / math.pi
