"""Exact mixed moments of the low x-coefficients under the Gaussian field law.

Everything here is symbolic in beta: results are polynomials in beta**-1 with
rational coefficients (:class:`MomentPolynomial`).  The main engine
:func:`gaussian_x_moment` sums over integer partitions with conjugacy-class
weights; :func:`gaussian_x_moment_raw` recomputes the same moment by brute
enumeration of decomposition families and exists purely as an oracle, as does
:func:`gaussian_x_moment_via_f_expansion`, which expands the x-monomials into
Gaussian f-monomials and integrates term by term.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Mapping

from .combinatorics import MultiIndex, f_weight, haar_weight, partitions
from .ratfunc import BetaPoly, Rat, RatFuncBeta, ratfunc_normalize

#: When true, the partition-support cut in gaussian_x_moment double-checks that
#: every skipped partition really carries zero weight (slow; used in tests).
CHECK_SUPPORT_CUT = False


@dataclass(frozen=True)
class MomentPolynomial:
    """Polynomial in beta**-1 with nonnegative rational coefficients.

    Stored as an exponent -> coefficient map; ``terms[k]`` multiplies beta**-k.
    """

    terms: tuple[tuple[int, Fraction], ...] = field(default=())

    @classmethod
    def from_terms(cls, terms: Mapping[int, Rat | int]) -> MomentPolynomial:
        cleaned = {k: Fraction(c) for k, c in terms.items() if c}
        return cls(tuple(sorted(cleaned.items())))

    @classmethod
    def zero(cls) -> MomentPolynomial:
        return cls()

    @classmethod
    def one(cls) -> MomentPolynomial:
        return cls.from_terms({0: 1})

    def coeff(self, k: int) -> Fraction:
        for e, c in self.terms:
            if e == k:
                return c
        return Fraction(0)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def max_exponent(self) -> int:
        return self.terms[-1][0] if self.terms else 0

    def __add__(self, other: MomentPolynomial) -> MomentPolynomial:
        out = dict(self.terms)
        for k, c in other.terms:
            out[k] = out.get(k, Fraction(0)) + c
        return MomentPolynomial.from_terms(out)

    def __mul__(self, other: MomentPolynomial) -> MomentPolynomial:
        out: dict[int, Fraction] = {}
        for k1, c1 in self.terms:
            for k2, c2 in other.terms:
                k = k1 + k2
                out[k] = out.get(k, Fraction(0)) + c1 * c2
        return MomentPolynomial.from_terms(out)

    def scale(self, c: Rat | int) -> MomentPolynomial:
        c = Fraction(c)
        return MomentPolynomial.from_terms({k: c * v for k, v in self.terms})

    def evaluate(self, beta: Rat | int) -> Fraction:
        beta = Fraction(beta)
        return sum((c / beta**k for k, c in self.terms), Fraction(0))

    def as_ratfunc(self) -> RatFuncBeta:
        """The same value as a canonical rational function in beta."""
        if not self.terms:
            return ratfunc_normalize(BetaPoly(), BetaPoly.constant(1))
        d = self.max_exponent
        num = BetaPoly.from_map({d - k: c for k, c in self.terms})
        return ratfunc_normalize(num, BetaPoly.beta_power(d))

    def to_map(self) -> dict[int, Fraction]:
        return dict(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "MomentPolynomial(0)"
        body = " + ".join(f"({c})b^-{k}" if k else f"{c}" for k, c in self.terms)
        return f"MomentPolynomial({body})"


def gaussian_f_moment(p: MultiIndex, q: MultiIndex) -> MomentPolynomial:
    """E of f**p (f**q)* for the independent complex Gaussians f_n.

    Nonzero only on the diagonal p = q, where it is
    prod_n p(n)! / n**p(n) times beta**-|p|.
    """
    if p != q:
        return MomentPolynomial.zero()
    value = Fraction(1)
    for n, c in p.items():
        value *= Fraction(factorial(c), n**c)
    return MomentPolynomial.from_terms({p.size: value})


def gaussian_x_moment(p: MultiIndex, q: MultiIndex) -> MomentPolynomial:
    """E of x**p (x**q)* as a polynomial in beta**-1 (partition-sum engine).

    Vanishes unless deg(p) = deg(q) = d; otherwise sums, over partitions L of
    d supported up to min(max supp p, max supp q), the conjugacy-class weight
    times the two decomposition counts, contributing at exponent |L|.
    """
    d = p.deg
    if d != q.deg:
        return MomentPolynomial.zero()
    cut = min(p.max_support, q.max_support)
    out: dict[int, Fraction] = {}
    for L in partitions(d):
        if L.max_support > cut and d > 0:
            if CHECK_SUPPORT_CUT:
                assert f_weight(p, L) * f_weight(q, L) == 0, (p, q, L)
            continue
        w = f_weight(p, L) * f_weight(q, L)
        if w:
            k = L.size
            out[k] = out.get(k, Fraction(0)) + haar_weight(L) * w
    return MomentPolynomial.from_terms(out)


def _decomposition_sums(p: MultiIndex) -> dict[MultiIndex, Fraction]:
    """Map sum-of-parts M -> sum over decomposition families of 1/prod(J!).

    Families assign one partition J of n to each labeled slot (n, r), r <= p(n);
    J! means prod_u J(u)!.
    """
    parts = [n for n, c in p.items() for _ in range(c)]
    acc: dict[MultiIndex, Fraction] = {MultiIndex(): Fraction(1)}
    for n in parts:
        nxt: dict[MultiIndex, Fraction] = {}
        for M, val in acc.items():
            for J in partitions(n):
                jfact = 1
                for _, c in J.items():
                    jfact *= factorial(c)
                key = M + J
                nxt[key] = nxt.get(key, Fraction(0)) + val / jfact
        acc = nxt
    return acc


def gaussian_x_moment_raw(p: MultiIndex, q: MultiIndex) -> MomentPolynomial:
    """Oracle for :func:`gaussian_x_moment` by direct decomposition enumeration.

    Sums over pairs of decomposition families with equal part sums M the value
    M! / (prod J! prod K! prod_u u**M(u)) at exponent |M|.  Guarded to degree 8.
    """
    if max(p.deg, q.deg) > 8:
        raise ValueError("raw decomposition sum guarded to degree <= 8")
    if p.deg != q.deg:
        return MomentPolynomial.zero()
    left = _decomposition_sums(p)
    right = _decomposition_sums(q)
    out: dict[int, Fraction] = {}
    for M, lval in left.items():
        rval = right.get(M)
        if rval is None:
            continue
        mid = Fraction(1)
        for u, c in M.items():
            mid *= Fraction(factorial(c), u**c)
        k = M.size
        out[k] = out.get(k, Fraction(0)) + lval * rval * mid
    return MomentPolynomial.from_terms(out)


def _exp_neg_f_coefficient(n: int) -> dict[MultiIndex, Fraction]:
    """Coefficient of z**n in exp(-sum f_u z**u) as a polynomial in the f_u.

    Monomials are multi-indices A in the f-variables; the coefficient of f**A
    is (-1)**|A| / A!.
    """
    out: dict[MultiIndex, Fraction] = {}
    for A in partitions(n):
        denom = 1
        for _, c in A.items():
            denom *= factorial(c)
        out[A] = Fraction((-1) ** A.size, denom)
    return out


def gaussian_x_moment_via_f_expansion(p: MultiIndex, q: MultiIndex) -> MomentPolynomial:
    """Second oracle: expand the x-monomials into f-monomials and integrate.

    Writes each x_n as its exponential-series polynomial in the f-variables,
    multiplies out x**p and x**q symbolically, and applies the diagonal
    Gaussian moment formula monomial by monomial.  Independent of both the
    partition engine and the raw decomposition sum.
    """

    def monomial_poly(mi: MultiIndex) -> dict[MultiIndex, Fraction]:
        poly: dict[MultiIndex, Fraction] = {MultiIndex(): Fraction(1)}
        for n, c in mi.items():
            factor = _exp_neg_f_coefficient(n)
            for _ in range(c):
                nxt: dict[MultiIndex, Fraction] = {}
                for A, ca in poly.items():
                    for B, cb in factor.items():
                        key = A + B
                        nxt[key] = nxt.get(key, Fraction(0)) + ca * cb
                poly = nxt
        return poly

    poly_p = monomial_poly(p)
    poly_q = monomial_poly(q)
    out = MomentPolynomial.zero()
    for A, ca in poly_p.items():
        cb = poly_q.get(A)
        if cb is None:
            continue
        out = out + gaussian_f_moment(A, A).scale(ca * cb)
    return out


def variance_pmf(n: int) -> MomentPolynomial:
    """prod_{k=1}^{n} ((1/k) beta**-1 + (k-1)/k), expanded exactly.

    The probability generating function of a sum of independent Bernoulli
    variables with success probabilities 1/k, read as a polynomial in beta**-1.
    """
    if n < 1:
        raise ValueError("variance_pmf needs n >= 1")
    out = MomentPolynomial.one()
    for k in range(1, n + 1):
        out = out * MomentPolynomial.from_terms({1: Fraction(1, k), 0: Fraction(k - 1, k)})
    return out


def multiplicity_free_moment(p: MultiIndex) -> MomentPolynomial:
    """prod_n variance_pmf(n)**p(n); equals the (p, delta_d) cross moment."""
    out = MomentPolynomial.one()
    for n, c in p.items():
        base = variance_pmf(n)
        for _ in range(c):
            out = out * base
    return out


def a_coefficients(n: int) -> list[Fraction]:
    """Coefficients (a_1, ..., a_n) of variance_pmf(n), by two formulas at once.

    Route one sums conjugacy-class weights over partitions of n by length;
    route two reads a_k as e_{n-k}(0, 1, ..., n-1) / n! off the expansion of
    prod_j (t + j).  A mismatch raises, since it would mean an internal bug.
    """
    if not 1 <= n <= 20:
        raise ValueError("a_coefficients supported for 1 <= n <= 20")
    by_partitions = [Fraction(0)] * (n + 1)
    for L in partitions(n):
        by_partitions[L.size] += haar_weight(L)

    # prod_{j=0}^{n-1} (t + j), ascending in t; coefficient of t^k is e_{n-k}.
    poly = [Fraction(1)]
    for j in range(n):
        shifted = [Fraction(0)] + poly
        scaled = [Fraction(j) * c for c in poly] + [Fraction(0)]
        poly = [a + b for a, b in zip(shifted, scaled)]
    nfact = factorial(n)
    by_stirling = [c / nfact for c in poly]

    if by_partitions != by_stirling:
        raise RuntimeError(
            f"coefficient formulas disagree at n={n}: {by_partitions} vs {by_stirling}"
        )
    return by_partitions[1:]
