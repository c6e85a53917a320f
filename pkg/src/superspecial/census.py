"""Census of supersingular Legendre parameters and the class-number identities
behind the superspecial count.

Sets built for a prime p (F_{p^2} elements are stored with two coordinates):

    T   s in F_p - {0, 1} with E_s supersingular
    U   members of T of the shape -t^2, t in F_p
    T', U'  the same without -1
    S   mu^(p-1) for mu in F_{p^2} - F_p with E_{mu^(p-1)} supersingular
    Theta   Lam(lam), Lam'(lam) for lam with lam^2 - 1 non-square and
            C_lam superspecial
    Sigma   lam with C_lam superspecial

``s ~= t`` means s = t or s = 1/t; ``lam ~ lam'`` means lam = +-lam'.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Iterable, Optional

import numpy as np

from .classnum import table_class_numbers
from .ellcurve import (
    GeneralCubicCurve,
    LegendreCurve,
    deuring_vanishes,
    halving_membership,
    is_supersingular_fast,
    is_supersingular_oracle,
    isomorphic_parameters,
    legendre_orbit,
)
from .ffield import (
    FieldElement,
    FieldError,
    frobenius,
    inverse_table,
    is_eighth_power,
    is_square,
    lift,
    make_field,
    primes_below,
    sqrt,
)
from .genus2 import lambda_coordinates, lambda_to_pair, psi, sigma_set, theorem_a_predict


@dataclass(frozen=True)
class CensusSets:
    p: int
    S: frozenset
    T: frozenset
    T_prime: frozenset
    U: frozenset
    U_prime: frozenset
    Theta: frozenset
    Sigma: frozenset


@dataclass(frozen=True)
class CensusRecord:
    p: int
    residue_mod_8: int
    discriminant: int
    class_number: int
    psi_observed: int
    psi_predicted: int
    h_minus_p: int
    h_minus_4p: int

    @property
    def match(self) -> bool:
        return self.psi_observed == self.psi_predicted

    def row(self) -> list:
        return [self.p, self.residue_mod_8, self.discriminant, self.class_number,
                self.psi_observed, self.psi_predicted, str(self.match).lower()]

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "residue_mod_8": self.residue_mod_8,
            "discriminant": self.discriminant,
            "class_number": self.class_number,
            "psi_observed": self.psi_observed,
            "psi_predicted": self.psi_predicted,
            "match": self.match,
            "h_minus_p": self.h_minus_p,
            "h_minus_4p": self.h_minus_4p,
        }


CENSUS_HEADER = "p,residue_mod_8,discriminant,class_number,psi_observed,psi_predicted,match"


@dataclass
class Check:
    claim: str
    expected: object
    observed: object

    @property
    def passed(self) -> bool:
        return self.expected == self.observed


@dataclass
class Report:
    p: int
    suite: str
    checks: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)  # observed values that are not asserted

    def add(self, claim: str, expected, observed) -> None:
        self.checks.append(Check(claim, expected, observed))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "suite": self.suite,
            "passed": self.passed,
            "checks": [
                {"claim": c.claim, "expected": _jsonable(c.expected),
                 "observed": _jsonable(c.observed), "passed": c.passed}
                for c in self.checks
            ],
            "notes": {k: _jsonable(v) for k, v in self.notes.items()},
        }


def _jsonable(v):
    if isinstance(v, (bool, int, float, str)) or v is None:
        return v
    return repr(v)


def _check_prime(p: int) -> None:
    if p < 5:
        raise FieldError(f"p must be >= 5, got {p}")
    make_field(p)  # primality check


# ---------------------------------------------------------------------------
# Set construction
# ---------------------------------------------------------------------------


def supersingular_parameters(p: int) -> np.ndarray:
    """Sorted s in 2..p-1 with E_s supersingular (the set T_p)."""
    s = np.arange(2, p, dtype=np.int64)
    return s[deuring_vanishes(p, s)]


def _coset_parameters(p: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """mu^(p-1) for the coset representatives mu = a + s, a in F_p.

    Every mu outside F_p is u (a + s) for a unique a and u in F_p^*, and
    mu^(p-1) = conj(mu)/mu only sees the coset.  With N = a^2 - n,
    (a - s)/(a + s) = (a^2 + n - 2 a s)/N.
    """
    n = make_field(p, 2).tower_nonresidues[0][0]
    a = np.arange(p, dtype=np.int64)
    N_inv = inverse_table(p)[(a * a - n) % p]
    re = (a * a + n) % p * N_inv % p
    im = (-2 * a) % p * N_inv % p
    return a, re, im


def _sets_S(p: int, exhaustive: bool) -> frozenset:
    K2 = make_field(p, 2)
    if not exhaustive:
        _, re, im = _coset_parameters(p)
        ss = deuring_vanishes(p, re, im)
        return frozenset(K2((int(x), int(y))) for x, y in zip(re[ss], im[ss]))
    out = set()
    for a in range(p):
        for b in range(1, p):
            mu = K2((a, b))
            m = frobenius(mu) / mu
            if is_supersingular_fast(LegendreCurve(m)):
                out.add(m)
    return frozenset(out)


def _sets_theta(p: int) -> frozenset:
    K2 = make_field(p, 2)
    lam = np.array(sigma_set(p), dtype=np.int64)
    if lam.size == 0:
        return frozenset()
    re, im, split = lambda_coordinates(p, lam)
    # Lam'(lam) = Lam(-lam) and Sigma is closed under negation, so collecting
    # Lam over all of Sigma yields both members of each pair
    return frozenset(K2((int(x), int(y))) for x, y, sp in zip(re, im, split) if not sp)


def build_sets(p: int, exhaustive: bool = False) -> CensusSets:
    """All census sets for p.  ``exhaustive`` builds S from every mu rather
    than one representative per F_p^*-coset."""
    _check_prime(p)
    K = make_field(p)
    T = frozenset(K(int(s)) for s in supersingular_parameters(p))
    U = frozenset(s for s in T if is_square(-s))
    minus_one = K(-1)
    S = _sets_S(p, exhaustive)
    Theta = _sets_theta(p)
    Sigma = frozenset(K(l) for l in sigma_set(p))
    return CensusSets(p, S, T, T - {minus_one}, U, U - {minus_one}, Theta, Sigma)


# ---------------------------------------------------------------------------
# Equivalence classes
# ---------------------------------------------------------------------------


def _to_quadratic(x: FieldElement) -> FieldElement:
    return x if x.field.degree == 2 else lift(x, make_field(x.field.p, 2))


def inversion_class(s: FieldElement) -> frozenset:
    """The ~= class {s, 1/s}, as elements of F_{p^2}."""
    s = _to_quadratic(s)
    return frozenset({s, 1 / s})


def class_rep(cls: Iterable[FieldElement]) -> FieldElement:
    return min(cls, key=lambda e: e.coords)


def inversion_quotient(X: Iterable[FieldElement]) -> frozenset:
    return frozenset(inversion_class(s) for s in X)


def negation_quotient(Sigma: Iterable[FieldElement]) -> frozenset:
    return frozenset(frozenset({l, -l}) for l in Sigma)


# ---------------------------------------------------------------------------
# The maps Phi and Psi
# ---------------------------------------------------------------------------


def phi_map(lam: FieldElement) -> frozenset:
    """Phi: the class of lam in Sigma/~ goes to the ~=-class {Lam, Lam'}."""
    p = lam.field.p
    if int(lam) not in sigma_set(p):
        raise FieldError(f"{lam} is not in Sigma_{p}")
    pair = lambda_to_pair(lam)
    return frozenset({_to_quadratic(pair.Lam), _to_quadratic(pair.Lam_prime)})


def nu(t: FieldElement) -> FieldElement:
    """nu(t) = (t^2 - 1) + 2t sqrt(-1) in F_{p^2}, sqrt(-1) canonical."""
    K2 = make_field(t.field.p, 2)
    i = sqrt(K2(-1))
    t2 = lift(t, K2)
    return (t2 * t2 - 1) + 2 * t2 * i


def psi_map(s: FieldElement, sets: Optional[CensusSets] = None) -> frozenset:
    """Psi: the class of s = -t^2 in U'/~= goes to the ~=-class of
    conj(nu(t))/nu(t)."""
    p = s.field.p
    if p % 4 != 3:
        raise FieldError("psi_map needs p = 3 mod 4")
    sets = sets or build_sets(p)
    if s not in sets.U_prime:
        raise FieldError(f"{s} is not in U'_{p}")
    t = sqrt(-s)
    v = nu(t)
    return inversion_class(frobenius(v) / v)


# ---------------------------------------------------------------------------
# Lemma-level counts
# ---------------------------------------------------------------------------


def lemma25_count(p: int, exhaustive: bool = False) -> int:
    """#{mu in F_{p^2} - F_p : y^2 = x(x - mu)(x - conj(mu)) supersingular}.

    Scaling x by mu turns the curve into E_{conj(mu)/mu}, so the default path
    counts coset representatives and multiplies by p - 1.  ``exhaustive``
    walks every mu and decides each curve by its Legendre parameter.
    """
    _check_prime(p)
    if not exhaustive:
        _, re, im = _coset_parameters(p)
        return (p - 1) * int(deuring_vanishes(p, re, im).sum())
    n = make_field(p, 2).tower_nonresidues[0][0]
    a, b = np.meshgrid(np.arange(p, dtype=np.int64), np.arange(1, p, dtype=np.int64))
    a, b = a.ravel(), b.ravel()
    N_inv = inverse_table(p)[(a * a - n * b * b) % p]
    # (a - b s)^2 / N(mu)
    re = (a * a + n * b * b) % p * N_inv % p
    im = (-2 * a * b) % p * N_inv % p
    return int(deuring_vanishes(p, re, im).sum())


def lemma25_count_by_points(p: int) -> int:
    """Slow oracle: count mu through the F_p-model x^3 - Tr(mu) x^2 + N(mu) x."""
    K = make_field(p)
    total = 0
    for tr in range(p):
        for nm in range(1, p):
            if is_square(K(tr * tr - 4 * nm)):
                continue
            E = GeneralCubicCurve(K(-tr), K(nm))
            if is_supersingular_oracle(E):
                total += 2  # mu and its conjugate share the pair (Tr, N)
    return total


# ---------------------------------------------------------------------------
# Verification suites
# ---------------------------------------------------------------------------


def _twice(report: Report, name: str, X: frozenset) -> None:
    report.add(f"#{name} = 2 #({name}/~=)", len(X), 2 * len(inversion_quotient(X)))


def verify_section3(p: int, sets: Optional[CensusSets] = None) -> Report:
    """Cardinality identities for the sets S, T, U, Theta at p."""
    _check_prime(p)
    sets = sets or build_sets(p)
    h_p, h_4p = table_class_numbers(p)
    rep = Report(p, "section3")
    if p % 4 == 1:
        rep.add("#S = h(-4p)", h_4p, len(sets.S))
        rep.add("#{mu : y^2 = x(x-mu)(x-conj mu) supersingular} = (p-1) h(-4p)", (p - 1) * h_4p, lemma25_count(p))
        _twice(rep, "S", sets.S)
    else:
        rep.add("#T = 3 h(-p)", 3 * h_p, len(sets.T))
        rep.add("#Theta = #U'", len(sets.U_prime), len(sets.Theta))
        if p % 8 == 3:
            rep.add("T = U", True, sets.T == sets.U)
            rep.add("#U = 3 h(-p)", 3 * h_p, len(sets.U))
            rep.add("#Theta = 3 h(-p) - 1", 3 * h_p - 1, len(sets.Theta))
        else:
            rep.add("#U = h(-p)", h_p, len(sets.U))
            rep.add("#Theta = h(-p) - 1", h_p - 1, len(sets.Theta))
        for name, X in (("T'", sets.T_prime), ("U'", sets.U_prime), ("Theta", sets.Theta)):
            _twice(rep, name, X)
        rep.notes["lemma25_count"] = lemma25_count(p)
        rep.notes["(p-1) h(-4p)"] = (p - 1) * h_4p
    eighth = [s for s in sets.T | sets.S | sets.Theta if not is_eighth_power(-_to_quadratic(s))]
    rep.add("-s is an 8th power in F_{p^2} for supersingular s",
            [], eighth)
    rep.add("#Sigma = 2 #(Sigma/~)", len(sets.Sigma), 2 * len(negation_quotient(sets.Sigma)))
    return rep


def verify_maps(p: int, sets: Optional[CensusSets] = None) -> Report:
    """Injectivity and image of Phi, bijectivity of Psi, and the square
    criteria feeding them."""
    _check_prime(p)
    sets = sets or build_sets(p)
    rep = Report(p, "maps")
    lam_classes = negation_quotient(sets.Sigma)
    images = {cls: phi_map(class_rep(cls)) for cls in lam_classes}
    consistent = all(phi_map(l) == images[cls] for cls in lam_classes for l in cls)
    rep.add("Phi is well defined on Sigma/~", True, consistent)
    image = frozenset(images.values())
    rep.add("Phi injective", len(lam_classes), len(image))
    if p % 4 == 1:
        rep.add("image(Phi) = S/~=", inversion_quotient(sets.S), image)
        bad = [l for l in sets.Sigma if is_square(l * l - 1)]
        rep.add("lam^2 - 1 non-square on Sigma", [], bad)
        rep.add("-(mu - conj mu)^2/(mu conj mu) square on S", [], _lemma45_failures(p))
        return rep
    theta_q = inversion_quotient(sets.Theta)
    other = sets.T_prime if p % 8 == 3 else sets.U_prime
    other_q = inversion_quotient(other)
    label = "image(Phi) = Theta/~= + T'/~=" if p % 8 == 3 else \
        "image(Phi) = Theta/~= + U'/~="
    rep.add(label + " (disjoint)", True, theta_q.isdisjoint(other_q))
    rep.add(label, theta_q | other_q, image)

    # Psi on U'/~=
    psi_images = {}
    well_defined = True
    for cls in inversion_quotient(sets.U_prime):
        members = [FieldElement(make_field(p), (m.coords[0],)) for m in cls]
        imgs = {psi_map(m, sets) for m in members}
        for m in members:
            t = sqrt(-m)
            v = nu(-t)
            imgs.add(inversion_class(frobenius(v) / v))
            lam = 2 * t / (t * t + 1)
            imgs.add(phi_map(lam) if int(lam) in sigma_set(p) else frozenset({"off Sigma"}))
        well_defined &= len(imgs) == 1
        psi_images[cls] = imgs.pop()
    rep.add("Psi well defined (t, -t, 1/t and lam = 2t/(t^2+1) agree)", True, well_defined)
    rep.add("Psi lands in Theta/~=", True, set(psi_images.values()) <= theta_q)
    rep.add("Psi injective", len(psi_images), len(set(psi_images.values())))
    rep.add("Psi surjective", theta_q, frozenset(psi_images.values()))
    return rep


def _lemma45_failures(p: int) -> list:
    n = make_field(p, 2).tower_nonresidues[0][0]
    a, re, im = _coset_parameters(p)
    ss = deuring_vanishes(p, re, im)
    K = make_field(p)
    bad = []
    for ai in a[ss]:
        # mu = a + s: (mu - conj mu)^2 = 4n, mu conj mu = a^2 - n
        value = K(-4 * n) / K(int(ai) ** 2 - n)
        if not is_square(value):
            bad.append(int(ai))
    return bad


def structural_props(p: int, sets: Optional[CensusSets] = None) -> Report:
    """Orbit shape of T (p = 3 mod 4) and the 2-torsion halving pattern of
    E_{-t^2} (p = 7 mod 8)."""
    _check_prime(p)
    if p % 4 != 3:
        raise FieldError("structural_props needs p = 3 mod 4")
    sets = sets or build_sets(p)
    K = make_field(p)
    rep = Report(p, "structure")
    no_minus_square = []
    orbit_mismatch = []
    for s in sorted(sets.T, key=lambda e: e.coords):
        triple = legendre_orbit(s).triples[0]
        if triple != isomorphic_parameters(s):
            orbit_mismatch.append(int(s))
        if not any(is_square(-m) for m in triple):
            no_minus_square.append(int(s))
    rep.add("every s in T is F_p-isomorphic to some E_{-t^2}", [], no_minus_square)
    rep.add("orbit triples agree with the isomorphism oracle", [], orbit_mismatch)

    # the halving obstruction holds for every t with E_{-t^2} nondegenerate
    lemma39 = []
    for t in range(1, (p - 1) // 2 + 1):
        s = -K(t) ** 2
        E = LegendreCurve(s)
        if halving_membership(E, (K(0), K(0))) or halving_membership(E, (s, K(0))):
            lemma39.append(t)
    rep.add("Q0, Q2 not in [2]E(F_p)", [], lemma39)

    if p % 8 == 7:
        prop38, prop310 = [], []
        for s in sorted(sets.U, key=lambda e: e.coords):
            t = sqrt(-s)
            if not is_square(t * t + 1):
                prop38.append(int(t))
            if not halving_membership(LegendreCurve(s), (K(1), K(0))):
                prop310.append(int(t))
        rep.add("t^2 + 1 square for -t^2 in U", [], prop38)
        rep.add("Q1 in [2]E(F_p) for -t^2 in U", [], prop310)
    return rep


def verify_lemma25(p: int, exhaustive: bool = False) -> Report:
    _check_prime(p)
    rep = Report(p, "lemma25")
    count = lemma25_count(p, exhaustive)
    h_4p = table_class_numbers(p)[1]
    if p % 4 == 1:
        rep.add("#{mu : y^2 = x(x-mu)(x-conj mu) supersingular} = (p-1) h(-4p)", (p - 1) * h_4p, count)
    else:
        rep.notes["count"] = count
        rep.notes["(p-1) h(-4p)"] = (p - 1) * h_4p
    return rep


SUITES: dict[str, Callable[[int], Report]] = {
    "section3": verify_section3,
    "maps": verify_maps,
    "structure": structural_props,
    "lemma25": verify_lemma25,
}


def suite_applies(suite: str, p: int) -> bool:
    return suite != "structure" or p % 4 == 3


def run_suite(suite: str, p: int) -> Report:
    return SUITES[suite](p)


# ---------------------------------------------------------------------------
# psi_p against class numbers
# ---------------------------------------------------------------------------


def census_record(p: int, method: str = "deuring",
                  sigma: Optional[Callable[[int], tuple]] = None) -> CensusRecord:
    """Observed and predicted psi_p.  ``sigma`` overrides the Sigma_p source
    (a cache, say); otherwise Sigma_p is enumerated with ``method``."""
    h_p, h_4p = table_class_numbers(p)
    observed = len(sigma(p)) if sigma is not None else psi(p, method)
    if p % 4 == 1:
        d, h = -4 * p, h_4p
    else:
        d, h = -p, h_p
    return CensusRecord(
        p=p,
        residue_mod_8=p % 8,
        discriminant=d,
        class_number=h,
        psi_observed=observed,
        psi_predicted=theorem_a_predict(p, h_p, h_4p),
        h_minus_p=h_p,
        h_minus_4p=h_4p,
    )


def census_primes(p_max: int) -> list[int]:
    return [int(p) for p in primes_below(p_max + 1) if p >= 5]


def parallel_map(fn, items: list, threads: int = 1) -> list:
    """Order-preserving map, in worker processes when threads > 1."""
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * threads))))


def verify_theorem_a(p_max: int, threads: int = 1, method: str = "deuring") -> list[CensusRecord]:
    """One record per prime 5 <= p <= p_max, sorted by p."""
    return parallel_map(partial(census_record, method=method), census_primes(p_max), threads)
