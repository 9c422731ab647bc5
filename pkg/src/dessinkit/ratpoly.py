"""Exact polynomials and rational maps over Q, and branch loci on the projective line.

Polynomial arithmetic is delegated to sympy's dense ``Poly`` over ``QQ``;
this module adds the map-level notions (evaluation at infinity, critical
values, Belyi tests) on top.  Nothing here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

import sympy
from sympy import QQ, Poly, Rational, symbols

X, Y = symbols("x y")


class _Infinity:
    __slots__ = ()

    def __repr__(self) -> str:
        return "INF"

    def __reduce__(self):
        return "INF"


INF = _Infinity()
Point = Union[Fraction, _Infinity]


def _q(c) -> Rational:
    if isinstance(c, Fraction):
        return Rational(c.numerator, c.denominator)
    return Rational(c)


def _frac(c) -> Fraction:
    c = QQ.to_sympy(c) if not isinstance(c, sympy.Basic) else c
    return Fraction(int(c.p), int(c.q))


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


class RatPoly:
    """A polynomial in ``x`` with rational coefficients."""

    __slots__ = ("p",)

    def __init__(self, coeffs: Iterable = (), *, poly: Poly | None = None):
        if poly is not None:
            self.p = poly
        else:
            cs = [_q(c) for c in coeffs]
            self.p = Poly(list(reversed(cs)) or [0], X, domain=QQ)

    @classmethod
    def x(cls) -> "RatPoly":
        return cls([0, 1])

    @classmethod
    def const(cls, c) -> "RatPoly":
        return cls([c])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "RatPoly":
        out = cls([1])
        for r in roots:
            out = out * cls([-_q(r), 1])
        return out

    @property
    def coeffs(self) -> list[Fraction]:
        """Coefficients from the constant term up."""
        return [_frac(c) for c in reversed(self.p.all_coeffs())]

    def degree(self) -> int:
        """Degree; ``-1`` for the zero polynomial."""
        return -1 if self.p.is_zero else int(self.p.degree())

    def is_zero(self) -> bool:
        return bool(self.p.is_zero)

    def lc(self) -> Fraction:
        return _frac(self.p.LC())

    def __add__(self, other: "RatPoly") -> "RatPoly":
        return RatPoly(poly=self.p + _lift(other).p)

    __radd__ = __add__

    def __sub__(self, other: "RatPoly") -> "RatPoly":
        return RatPoly(poly=self.p - _lift(other).p)

    def __rsub__(self, other) -> "RatPoly":
        return _lift(other) - self

    def __neg__(self) -> "RatPoly":
        return RatPoly(poly=-self.p)

    def __mul__(self, other: "RatPoly") -> "RatPoly":
        return RatPoly(poly=self.p * _lift(other).p)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "RatPoly":
        return RatPoly(poly=self.p**k)

    def divmod(self, other: "RatPoly") -> tuple["RatPoly", "RatPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        q, r = self.p.div(other.p)
        return RatPoly(poly=q), RatPoly(poly=r)

    def exquo(self, other: "RatPoly") -> "RatPoly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ValueError("inexact division")
        return q

    def divides(self, other: "RatPoly") -> bool:
        """True when ``self`` divides ``other``."""
        return self.is_zero() and other.is_zero() or (not self.is_zero() and other.divmod(self)[1].is_zero())

    def __eq__(self, other) -> bool:
        return isinstance(other, RatPoly) and self.p == other.p

    def __hash__(self) -> int:
        return hash(tuple(self.coeffs))

    def derivative(self) -> "RatPoly":
        return RatPoly(poly=self.p.diff(X))

    def monic(self) -> "RatPoly":
        return self if self.is_zero() else RatPoly(poly=self.p.monic())

    def gcd(self, other: "RatPoly") -> "RatPoly":
        return RatPoly(poly=self.p.gcd(other.p)).monic()

    def squarefree_part(self) -> "RatPoly":
        if self.degree() <= 0:
            return self.monic()
        return RatPoly(poly=self.p.sqf_part()).monic()

    def rational_roots(self) -> set[Fraction]:
        """All rational roots, read off the linear factors over Q."""
        if self.is_zero():
            raise ValueError("the zero polynomial has every rational as a root")
        out = set()
        for fac, _ in self.p.factor_list()[1]:
            if fac.degree() == 1:
                a, b = fac.all_coeffs()
                out.add(_frac(-b / a))
        return out

    def without_rational_roots(self) -> "RatPoly":
        """Squarefree part with every rational linear factor removed."""
        s = self.squarefree_part()
        for r in s.rational_roots():
            s = s.exquo(RatPoly([-r, 1]))
        return s.monic()

    def compose(self, inner: "RatPoly") -> "RatPoly":
        return RatPoly(poly=self.p.compose(inner.p))

    def __call__(self, x) -> Fraction:
        return _frac(self.p.eval(_q(x)))

    def reversed(self, d: int) -> "RatPoly":
        """``x^d * self(1/x)`` for ``d >= degree``."""
        cs = self.coeffs
        cs = cs + [Fraction(0)] * (d + 1 - len(cs))
        return RatPoly(list(reversed(cs)))

    def to_pairs(self) -> list[list[int]]:
        return [[c.numerator, c.denominator] for c in self.coeffs]

    @classmethod
    def from_pairs(cls, pairs) -> "RatPoly":
        return cls([Fraction(int(a), int(b)) for a, b in pairs])

    def __repr__(self) -> str:
        return f"RatPoly({self.p.as_expr()})"


def _lift(c) -> RatPoly:
    return c if isinstance(c, RatPoly) else RatPoly.const(c)


def resultant(a: RatPoly, b: RatPoly) -> Fraction:
    return _frac(a.p.resultant(b.p))


def image_polynomial(num: RatPoly, den: RatPoly, s: RatPoly) -> RatPoly:
    """``Res_x(num - y*den, s)`` as a polynomial in ``y``.

    Its roots are the values ``num/den`` takes at the roots of ``s`` (roots
    shared with ``den`` excluded by the caller).
    """
    A = Poly(num.p.as_expr() - Y * den.p.as_expr(), X, Y, domain=QQ)
    B = Poly(s.p.as_expr(), X, Y, domain=QQ)
    R = Poly(sympy.resultant(A.as_expr(), B.as_expr(), X), Y, domain=QQ)
    return RatPoly(poly=Poly(R.as_expr().subs(Y, X), X, domain=QQ))


# --------------------------------------------------------------------------
# rational maps


class RatMap:
    """``num/den`` with coprime numerator and monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: RatPoly, den: RatPoly | None = None):
        den = den if den is not None else RatPoly.const(1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = num.gcd(den)
        if g.degree() > 0:
            num, den = num.exquo(g), den.exquo(g)
        c = den.lc()
        self.num = num * RatPoly.const(1 / c)
        self.den = den * RatPoly.const(1 / c)

    @classmethod
    def polynomial(cls, p: RatPoly) -> "RatMap":
        return cls(p)

    @classmethod
    def mobius(cls, a, b, c, d) -> "RatMap":
        """``(a x + b)/(c x + d)``."""
        if Fraction(a) * Fraction(d) - Fraction(b) * Fraction(c) == 0:
            raise ValueError("degenerate Mobius transformation")
        return cls(RatPoly([b, a]), RatPoly([d, c]))

    @property
    def degree(self) -> int:
        return max(self.num.degree(), self.den.degree(), 0)

    def is_constant(self) -> bool:
        return self.num.degree() <= 0 and self.den.degree() <= 0

    def __call__(self, x: Point) -> Point:
        n, d = self.num, self.den
        if x is INF:
            dn, dd = n.degree(), d.degree()
            if dn > dd:
                return INF
            if dn < dd:
                return Fraction(0)
            return n.lc() / d.lc()
        dv = d(x)
        if dv == 0:
            return INF
        return n(x) / dv

    def compose(self, inner: "RatMap") -> "RatMap":
        """``self o inner``."""
        d = self.degree
        P, Q = inner.num, inner.den
        powers_P = [RatPoly.const(1)]
        powers_Q = [RatPoly.const(1)]
        for _ in range(d):
            powers_P.append(powers_P[-1] * P)
            powers_Q.append(powers_Q[-1] * Q)

        def homog(f: RatPoly) -> RatPoly:
            out = RatPoly.const(0)
            for i, c in enumerate(f.coeffs):
                if c:
                    out = out + RatPoly.const(c) * powers_P[i] * powers_Q[d - i]
            return out

        return RatMap(homog(self.num), homog(self.den))

    def wronskian(self) -> RatPoly:
        """``N' D - N D'``; its roots are the finite critical points off the poles."""
        return self.num.derivative() * self.den - self.num * self.den.derivative()

    def __eq__(self, other) -> bool:
        return isinstance(other, RatMap) and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def to_json(self) -> dict:
        return {"num": self.num.to_pairs(), "den": self.den.to_pairs()}

    @classmethod
    def from_json(cls, obj: dict) -> "RatMap":
        return cls(RatPoly.from_pairs(obj["num"]), RatPoly.from_pairs(obj["den"]))

    def __repr__(self) -> str:
        return f"RatMap(({self.num.p.as_expr()}) / ({self.den.p.as_expr()}))"


# --------------------------------------------------------------------------
# branch loci


@dataclass(frozen=True)
class BranchData:
    rational_branch_values: frozenset
    at_infinity: bool
    irrational_part: RatPoly

    def is_within_01inf(self) -> bool:
        return self.irrational_part.degree() <= 0 and self.rational_branch_values <= {Fraction(0), Fraction(1)}

    def as_json(self) -> dict:
        return {
            "rational": sorted(str(v) for v in self.rational_branch_values),
            "infinity": self.at_infinity,
            "irrational_part": self.irrational_part.to_pairs(),
        }


def _ramified_at_infinity(f: RatMap) -> tuple[bool, Point]:
    """Whether ``infinity`` is a critical point, and its value."""
    dn, dd = f.num.degree(), f.den.degree()
    if dn != dd:
        return abs(dn - dd) >= 2, f(INF)
    d = f.degree
    F, G = f.num.reversed(d), f.den.reversed(d)
    W = F.derivative() * G - F * G.derivative()
    return (W.is_zero() or W(0) == 0), f(INF)


def critical_split(f: RatMap) -> tuple[list[tuple[RatPoly, Point]], RatPoly]:
    """Split the squarefree critical polynomial by value.

    Returns ``[(factor, value)]`` for factors whose roots all map to the
    rational value (or ``INF``) and the remaining factor.
    """
    W = f.wronskian()
    if W.is_zero():
        raise ValueError("constant map")
    rest = W.squarefree_part()
    parts = []
    rest = rest.exquo(rest.gcd(f.den))
    for value_poly, value in ((f.num, Fraction(0)), (f.num - f.den, Fraction(1))):
        g = rest.gcd(value_poly)
        if g.degree() > 0:
            parts.append((g, value))
            rest = rest.exquo(g)
    for r in rest.rational_roots():
        parts.append((RatPoly([-r, 1]), f(r)))
        rest = rest.exquo(RatPoly([-r, 1]))
    # multiple poles: roots of gcd(D, D')
    Dsf = f.den.gcd(f.den.derivative())
    if Dsf.degree() > 0:
        parts.append((Dsf, INF))
    return parts, rest.monic()


def branch_data(f: RatMap) -> BranchData:
    if f.is_constant():
        raise ValueError("branch_data needs a nonconstant map")
    parts, rest = critical_split(f)
    rational = set()
    at_inf = False
    for _, v in parts:
        if v is INF:
            at_inf = True
        else:
            rational.add(v)
    irr = RatPoly.const(1)
    if rest.degree() > 0:
        R = image_polynomial(f.num, f.den, rest)
        rational |= R.rational_roots()
        irr = R.without_rational_roots()
    crit_inf, v_inf = _ramified_at_infinity(f)
    if crit_inf:
        if v_inf is INF:
            at_inf = True
        else:
            rational.add(v_inf)
    return BranchData(frozenset(rational), at_inf, irr)


def is_belyi(f: RatMap) -> bool:
    """All critical values in ``{0, 1, infinity}``, tested by divisibility."""
    if f.is_constant():
        raise ValueError("is_belyi needs a nonconstant map")
    W = f.wronskian().squarefree_part()
    target = (f.num * (f.num - f.den) * f.den).squarefree_part()
    if not W.divides(target):
        return False
    crit_inf, v = _ramified_at_infinity(f)
    return not crit_inf or v is INF or v in (Fraction(0), Fraction(1))
