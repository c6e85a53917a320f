"""Class numbers of negative discriminants by counting reduced forms, and
the same numbers through a truncated Dirichlet L-series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from sympy import isprime

from .ffield import legendre_symbol, sqrt_table


class DiscriminantError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class QuadraticForm:
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def is_primitive(self) -> bool:
        return math.gcd(self.a, self.b, self.c) == 1

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y


def _check_discriminant(d: int) -> None:
    if d >= 0 or d % 4 not in (0, 1):
        raise DiscriminantError(f"{d} is not a negative discriminant")


def reduced_forms(d: int) -> list[QuadraticForm]:
    """Primitive reduced forms of discriminant d, sorted."""
    _check_discriminant(d)
    forms = []
    a = 1
    while 3 * a * a <= -d:
        for b in range(-a + 1, a + 1):
            if (b - d) % 2:
                continue
            num = b * b - d
            if num % (4 * a):
                continue
            f = QuadraticForm(a, b, num // (4 * a))
            if f.is_reduced() and f.is_primitive():
                forms.append(f)
        a += 1
    return sorted(forms)


@lru_cache(maxsize=None)
def class_number(d: int) -> int:
    return len(reduced_forms(d))


def table_class_numbers(p: int) -> tuple[int, int]:
    """(h(-p), h(-4p)) with h(-p) := 0 when -p is not a discriminant."""
    h_p = class_number(-p) if p % 4 == 3 else 0
    return h_p, class_number(-4 * p)


# ---------------------------------------------------------------------------
# Characters
# ---------------------------------------------------------------------------


def _split(d: int) -> tuple[int, int]:
    """d = -p or d = -4p with p an odd prime >= 5: return (p, 1 or 4)."""
    if d < 0:
        if -d % 4 == 0 and isprime(-d // 4) and -d // 4 >= 5:
            return -d // 4, 4
        if isprime(-d) and -d >= 5 and -d % 4 == 3:
            return -d, 1
    raise DiscriminantError(f"character for d={d} needs d = -p (p = 3 mod 4) or d = -4p")


def chi(d: int, n: int) -> int:
    """Kronecker character (d/n) for d = -p, p = 3 mod 4, or d = -4p.

    chi_{-p}(n) = (n/p).  For odd n, chi_{-4p}(n) = (-1)^((p+1)/2 (n-1)/2) (n/p)
    by quadratic reciprocity; even n give 0.
    """
    p, k = _split(d)
    if k == 1:
        return legendre_symbol(n, p)
    if n % 2 == 0:
        return 0
    sign = -1 if ((p + 1) // 2) * ((n - 1) // 2) % 2 else 1
    return sign * legendre_symbol(n, p)


def chi_displayed(p: int, n: int) -> int:
    """(2/n)^2 (-1)^((p-1)/2 (n-1)/2) (n/p), the expression entering S1.

    For p = 1 mod 4 this is (n/p) on odd n, which is not the character of
    Q(sqrt(-p)) (that one is ``chi(-4*p, n)``).  The two agree on odd squares,
    so they give the same main term in S1.
    """
    if n % 2 == 0:
        return 0
    sign = -1 if ((p - 1) // 2) * ((n - 1) // 2) % 2 else 1
    return sign * legendre_symbol(n, p)


def chi_table(d: int) -> np.ndarray:
    """chi(d, n) for n = 0..|d|-1; the character has period |d|."""
    p, k = _split(d)
    roots = sqrt_table(p)
    leg = np.where(roots >= 0, 1, -1).astype(np.int8)
    leg[0] = 0
    n = np.arange(-d, dtype=np.int64)
    vals = leg[n % p]
    if k == 4:
        odd = n % 2 == 1
        flip = (((p + 1) // 2) * ((n - 1) // 2)) % 2 == 1
        vals = np.where(odd, np.where(flip, -vals, vals), 0).astype(np.int8)
    return vals


def class_number_via_L(d: int, U: Optional[int] = None) -> tuple[float, float]:
    """(sqrt|d|/pi) * sum_{n<=U} chi_d(n)/n and its truncation error bound.

    The bound 3 sqrt|d| log|d| / U on the L-series tail comes from Polya's
    inequality with Abel summation.  Default U = |d|^2.
    """
    _split(d)
    D = -d
    if U is None:
        U = D * D
    if U < 2:
        raise ValueError("U must be at least 2")
    table = chi_table(d).astype(np.float64)
    total = 0.0
    block = 1 << 22
    for start in range(1, U + 1, block):
        n = np.arange(start, min(start + block, U + 1), dtype=np.int64)
        total += float(np.sum(table[n % D] / n))
    scale = math.sqrt(D) / math.pi
    return scale * total, scale * 3 * math.sqrt(D) * math.log(D) / U
