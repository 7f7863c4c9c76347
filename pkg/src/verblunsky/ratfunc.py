"""Exact arithmetic in the real parameter beta.

Values are built from three layers:

* ``Rat`` — arbitrary-precision rationals (stdlib ``fractions.Fraction``).
* ``BetaPoly`` — dense polynomials in beta with rational coefficients.
* ``RatFuncBeta`` — quotients of two ``BetaPoly`` kept in a canonical form
  (gcd-reduced, monic denominator), so equal values compare equal bitwise.

Degrees stay small (tens), so dense coefficient tuples are the simplest honest
representation.  The polynomial gcd runs a primitive-PRS (fraction-free)
Euclidean algorithm on integer-cleared coefficients to avoid rational blowup
in intermediate remainders.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd as _int_gcd
from typing import Iterable, Mapping

Rat = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _trim(coeffs: list[Fraction]) -> tuple[Fraction, ...]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class BetaPoly:
    """Polynomial in beta, dense ascending coefficients, trailing zeros trimmed."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Rat | int] = ()):
        self.coeffs: tuple[Fraction, ...] = _trim([Fraction(c) for c in coeffs])

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, c: Rat | int) -> BetaPoly:
        return cls((c,))

    @classmethod
    def beta_power(cls, k: int) -> BetaPoly:
        """beta**k as a polynomial (k >= 0)."""
        if k < 0:
            raise ValueError("beta_power needs k >= 0; negative powers live in RatFuncBeta")
        return cls([0] * k + [1])

    @classmethod
    def from_map(cls, exps: Mapping[int, Rat | int]) -> BetaPoly:
        if not exps:
            return cls()
        coeffs = [_ZERO] * (max(exps) + 1)
        for e, c in exps.items():
            coeffs[e] = Fraction(c)
        return cls(coeffs)

    # -- basic queries -----------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial at -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else _ZERO

    def to_map(self) -> dict[int, Fraction]:
        return {e: c for e, c in enumerate(self.coeffs) if c}

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: BetaPoly) -> BetaPoly:
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return BetaPoly(out)

    def __neg__(self) -> BetaPoly:
        p = BetaPoly.__new__(BetaPoly)
        p.coeffs = tuple(-c for c in self.coeffs)
        return p

    def __sub__(self, other: BetaPoly) -> BetaPoly:
        return self + (-other)

    def __mul__(self, other: BetaPoly) -> BetaPoly:
        if self.is_zero() or other.is_zero():
            return BetaPoly()
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] += a * b
        return BetaPoly(out)

    def scale(self, c: Rat | int) -> BetaPoly:
        c = Fraction(c)
        if c == 0:
            return BetaPoly()
        p = BetaPoly.__new__(BetaPoly)
        p.coeffs = tuple(a * c for a in self.coeffs)
        return p

    def divmod(self, other: BetaPoly) -> tuple[BetaPoly, BetaPoly]:
        """Exact euclidean division over the rationals."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        div = other.coeffs
        dq = len(rem) - len(div)
        if dq < 0:
            return BetaPoly(), self
        quo = [_ZERO] * (dq + 1)
        inv_lead = 1 / div[-1]
        for k in range(dq, -1, -1):
            c = rem[k + len(div) - 1] * inv_lead
            if c:
                quo[k] = c
                for i, b in enumerate(div):
                    rem[k + i] -= c * b
        return BetaPoly(quo), BetaPoly(rem)

    def monic(self) -> BetaPoly:
        if self.is_zero():
            return self
        return self.scale(1 / self.leading)

    def evaluate(self, beta: Rat | int) -> Fraction:
        acc = _ZERO
        beta = Fraction(beta)
        for c in reversed(self.coeffs):
            acc = acc * beta + c
        return acc

    # -- comparisons -------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BetaPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if self.is_zero():
            return "BetaPoly(0)"
        terms = [f"{c}*b^{e}" if e else str(c) for e, c in enumerate(self.coeffs) if c]
        return "BetaPoly(" + " + ".join(terms) + ")"


def _integer_primitive(p: BetaPoly) -> list[int]:
    """Clear denominators and divide by the content; [] for the zero polynomial."""
    if p.is_zero():
        return []
    lcm = 1
    for c in p.coeffs:
        lcm = lcm // _int_gcd(lcm, c.denominator) * c.denominator
    ints = [int(c * lcm) for c in p.coeffs]
    g = 0
    for v in ints:
        g = _int_gcd(g, v)
    return [v // g for v in ints]


def _pseudo_rem(a: list[int], b: list[int]) -> list[int]:
    """Remainder of lc(b)^k * a by b, integer arithmetic only (ascending coeffs)."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and any(r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < db:
            break
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [lb * c for c in r]
        for i, bc in enumerate(b):
            r[shift + i] -= lr * bc
        while r and r[-1] == 0:
            r.pop()
    return r


def poly_gcd(a: BetaPoly, b: BetaPoly) -> BetaPoly:
    """Monic gcd via the primitive polynomial remainder sequence."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    A, B = _integer_primitive(a), _integer_primitive(b)
    if len(A) < len(B):
        A, B = B, A
    while B:
        R = _pseudo_rem(A, B)
        if R:
            g = 0
            for v in R:
                g = _int_gcd(g, v)
            R = [v // g for v in R]
        A, B = B, R
    return BetaPoly(A).monic()


class PoleError(ZeroDivisionError):
    """Evaluation of a rational function at a root of its denominator."""


@dataclass(frozen=True)
class RatFuncBeta:
    """Canonical rational function in beta: reduced, monic denominator.

    Construct through :func:`ratfunc_normalize` (or the arithmetic operators,
    which re-normalize); the canonical form makes ``==`` decide value equality.
    """

    num: BetaPoly
    den: BetaPoly

    @classmethod
    def from_rat(cls, c: Rat | int) -> RatFuncBeta:
        return ratfunc_normalize(BetaPoly.constant(c), BetaPoly.constant(1))

    @classmethod
    def beta_inverse_power(cls, k: int) -> RatFuncBeta:
        """beta**(-k) for k >= 0."""
        return ratfunc_normalize(BetaPoly.constant(1), BetaPoly.beta_power(k))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other: RatFuncBeta) -> RatFuncBeta:
        return ratfunc_normalize(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __neg__(self) -> RatFuncBeta:
        return RatFuncBeta(-self.num, self.den)

    def __sub__(self, other: RatFuncBeta) -> RatFuncBeta:
        return self + (-other)

    def __mul__(self, other: RatFuncBeta) -> RatFuncBeta:
        return ratfunc_normalize(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: RatFuncBeta) -> RatFuncBeta:
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return ratfunc_normalize(self.num * other.den, self.den * other.num)

    def to_maps(self) -> dict[str, dict[int, Fraction]]:
        return {"num": self.num.to_map(), "den": self.den.to_map()}

    def __repr__(self) -> str:
        return f"RatFuncBeta({self.num!r} / {self.den!r})"


def ratfunc_normalize(num: BetaPoly, den: BetaPoly) -> RatFuncBeta:
    """Unique reduced representative of num/den with monic denominator."""
    if den.is_zero():
        raise ZeroDivisionError("rational function with zero denominator")
    if num.is_zero():
        return RatFuncBeta(BetaPoly(), BetaPoly.constant(1))
    g = poly_gcd(num, den)
    if g.degree > 0:
        num, _ = num.divmod(g)
        den, _ = den.divmod(g)
    lead = den.leading
    if lead != 1:
        num = num.scale(1 / lead)
        den = den.scale(1 / lead)
    return RatFuncBeta(num, den)


def eval_rational(rf: RatFuncBeta, beta: Rat | int) -> Fraction:
    """Exact value of rf at a rational beta; raises :class:`PoleError` at poles."""
    beta = Fraction(beta)
    d = rf.den.evaluate(beta)
    if d == 0:
        raise PoleError(
            f"pole at beta = {beta}: denominator {rf.den!r} vanishes there"
        )
    return rf.num.evaluate(beta) / d
