"""Rational-part integration in a log/exp tower.

Hermite reduction brings a denominator down to square-free; the
Rothstein-Trager resultant ``res_t(R - z*D(b), b)`` then decides elementary
integrability (all its roots must be constants) and, when its constant roots
are rational or come in conjugate pairs ``a +- r*i`` with rational ``a, r``,
produces the logarithmic part explicitly.  Nothing here guesses: every
returned :class:`LiouvilleForm` has been differentiated back and compared
with the input exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import (
    QQ,
    Gaussian,
    GaussianField,
    Poly,
    RatFunc,
    poly_divmod,
    poly_gcd,
    resultant,
    solve_diophantine,
    squarefree_factorize,
)
from .tower import EXP, Tower, const_value, true_level


class NotElementary(ArithmeticError):
    """The TR-resultant has a non-constant root."""


class UnsupportedSplitting(ArithmeticError):
    """The constant resultant does not split into supported residue factors."""


@dataclass(frozen=True)
class LiouvilleForm:
    """``v0 + sum(c * log(v)) + sum(c * arctan(w))`` with rational ``c``."""

    v0: RatFunc
    logs: tuple = ()
    arctans: tuple = ()

    def derivative(self, tower: Tower) -> RatFunc:
        total = tower.derive(tower.lift(self.v0))
        for c, v in self.logs:
            v = tower.lift(v)
            if not v:
                raise ValueError("logarithm of zero in integral")
            total = total + tower.derive(v) / v * Fraction(c)
        for c, w in self.arctans:
            w = tower.lift(w)
            total = total + tower.derive(w) / (w * w + 1) * Fraction(c)
        return total

    def __add__(self, other: "LiouvilleForm") -> "LiouvilleForm":
        return LiouvilleForm(self.v0 + other.v0, self.logs + other.logs, self.arctans + other.arctans)

    def shifted(self, c) -> "LiouvilleForm":
        """The same integral plus a constant."""
        return LiouvilleForm(self.v0 + c, self.logs, self.arctans)


@dataclass(frozen=True)
class HermiteStep:
    extracted: RatFunc
    remaining_num: Poly
    remaining_den: Poly
    sigma: Poly
    tau: Poly


@dataclass(frozen=True)
class TRResultant:
    poly_in_z: Poly  # coefficients in the field below the top variable

    @property
    def degree(self) -> int:
        return self.poly_in_z.deg


def _top(tower: Tower):
    return tower.top


def hermite_reduce(R: Poly, b: Poly, tower: Tower) -> list[HermiteStep]:
    """Hermite steps until the remaining denominator is square-free."""
    field = _top(tower)
    if not b:
        raise ZeroDivisionError("zero denominator")
    if R.deg >= b.deg:
        raise ValueError("numerator degree must be below denominator degree")
    steps = []
    while True:
        sff = squarefree_factorize(b)
        k = max((m for _, m in sff.factors), default=0)
        if k < 2:
            return steps
        V = None
        for f, m in sff.factors:
            if m == k:
                V = f if V is None else V * f
        U = b.exact_div(V ** k)
        dV = field.derive_poly(V)
        try:
            sigma, tau = solve_diophantine(U * dV, V, R)
        except ValueError as exc:
            raise RuntimeError("Hermite diophantine equation unsolvable") from exc
        inv = Fraction(1, k - 1)
        extracted = field.frac(-sigma.scale(inv), V ** (k - 1))
        R = tau + (U * field.derive_poly(sigma)).scale(inv)
        b = b.exact_div(V)
        steps.append(HermiteStep(extracted, R, b, sigma, tau))


def tr_resultant(R: Poly, b: Poly, tower: Tower) -> TRResultant:
    """``res_t(R - z*D(b), b)`` as a polynomial in ``z``.

    Evaluated at ``z = 0..deg b`` and interpolated, so only resultants over
    the coefficient field are needed.
    """
    field = _top(tower)
    F = field.base
    if b.deg < 1:
        raise ValueError("denominator must be nonconstant")
    if poly_gcd(b, b.diff()).deg > 0:
        raise ValueError("denominator is not square-free")
    Db = field.derive_poly(b)
    n = b.deg
    formal = max(R.deg, Db.deg)
    values = []
    for j in range(n + 1):
        A = R - Db.scale(j)
        if not A:
            values.append(F.zero)
            continue
        r = resultant(A, b)
        drop = formal - A.deg
        if drop:
            r = r * b.lc ** drop
            if (drop * n) % 2:
                r = -r
        values.append(r)
    coeffs = [F.zero] * (n + 1)
    for j in range(n + 1):
        if not values[j]:
            continue
        basis = Poly.const(1)
        scale = Fraction(1)
        for k in range(n + 1):
            if k != j:
                basis = basis * Poly([-k, 1])
                scale /= j - k
        for i, c in enumerate(basis.coeffs):
            if c:
                coeffs[i] = coeffs[i] + values[j] * (c * scale)
    return TRResultant(Poly(coeffs, F))


def constant_coefficient_check(r: TRResultant) -> bool:
    """True iff the monic TR-resultant has only constant coefficients."""
    p = r.poly_in_z
    if not p:
        raise ValueError("zero TR-resultant (numerator and denominator not coprime)")
    F = p.dom
    return all(F.is_constant(c) for c in p.monic().coeffs)


def _primitive_lc(q: Poly) -> int:
    from math import gcd, lcm

    den = lcm(*(c.denominator for c in q.coeffs))
    ints = [int(c * den) for c in q.coeffs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return abs(ints[-1] // g)


def _rational_roots(h: Poly) -> tuple[list[Fraction], Poly]:
    """Rational roots of a square-free rational polynomial and the cofactor."""
    bound = _primitive_lc(h)
    roots = []
    if h.deg < 1:
        return roots, h
    for z in np.roots([float(c) for c in reversed(h.coeffs)]):
        if abs(z.imag) > 1e-7 * (1 + abs(z)):
            continue
        c = Fraction(float(z.real)).limit_denominator(bound)
        if not h(c):
            roots.append(c)
            h = h.exact_div(Poly([-c, 1]))
            if h.deg < 1:
                break
    return roots, h


def _split_log_argument(v: Poly, F) -> list[Poly]:
    """Rational linear factors of ``v`` when its coefficients are numbers."""
    if v.deg < 2 or any(true_level(c) >= 0 for c in v.coeffs):
        return [v]
    q = Poly([const_value(c) for c in v.coeffs], QQ).monic()
    roots, rest = _rational_roots(q)
    parts = [Poly([F.convert(-c), F.one], F) for c in roots]
    if rest.deg >= 1:
        parts.append(Poly([F.convert(c) for c in rest.coeffs], F))
    return parts


def split_residues(q: Poly) -> tuple[list[Fraction], list[tuple[Fraction, Fraction]]]:
    """Distinct roots of a rational polynomial as rationals and pairs ``a +- r*i``.

    Floating-point roots only propose candidates; every candidate is
    confirmed by exact division, and anything left over raises
    :class:`UnsupportedSplitting`.
    """
    q = q.monic()
    if q.deg < 1:
        return [], []
    h = q.exact_div(poly_gcd(q, q.diff())).monic()
    rational_roots, h = _rational_roots(h)
    pairs = []
    if h.deg >= 1:
        bound2 = 2 * _primitive_lc(h)
        for z in np.roots([float(c) for c in reversed(h.coeffs)]):
            if z.imag <= 1e-9:
                continue
            a = Fraction(float(z.real)).limit_denominator(bound2)
            r = Fraction(float(z.imag)).limit_denominator(bound2)
            quad = Poly([a * a + r * r, -2 * a, 1])
            quo, rem = poly_divmod(h, quad)
            if r > 0 and not rem:
                pairs.append((a, r))
                h = quo
                if h.deg < 1:
                    break
    if h.deg >= 1:
        raise UnsupportedSplitting(f"residue polynomial factor {h!r} not supported")
    return rational_roots, pairs


def tr_integrate(R: Poly, b: Poly, tower: Tower) -> LiouvilleForm:
    """Rothstein-Trager integration of ``R/b`` (``b`` square-free, coprime to ``R``)."""
    field = _top(tower)
    F = field.base
    ext = tower.extensions[-1] if tower.extensions else None
    if ext is not None and ext.kind == EXP and b.deg >= 1 and not b.coeffs[0]:
        raise ValueError("exponential variable divides the denominator")
    res = tr_resultant(R, b, tower)
    if not constant_coefficient_check(res):
        raise NotElementary("TR-resultant has non-constant roots")
    q = Poly([const_value(c) for c in res.poly_in_z.monic().coeffs], QQ)
    roots, pairs = split_residues(q)
    Db = field.derive_poly(b)
    logs, arctans = [], []
    log_weight = Fraction(0)
    for c in roots:
        v = poly_gcd(R - Db.scale(c), b)
        for part in _split_log_argument(v, F):
            logs.append((c, field.frac(part)))
        log_weight += c * v.deg
    if pairs:
        G = GaussianField(F)

        def gauss(p: Poly) -> Poly:
            return Poly([Gaussian(c, F.zero, G) for c in p.coeffs], G)

        Rg, Dg, bg = gauss(R), gauss(Db), gauss(b)
        for a, r in pairs:
            alpha = Gaussian(F.convert(a), F.convert(r), G)
            v = poly_gcd(Rg - Dg.scale(alpha), bg)
            P = Poly([c.re for c in v.coeffs], F)
            Q = Poly([c.im for c in v.coeffs], F)
            if not Q:
                raise RuntimeError("complex residue produced a real log argument")
            if a:
                norm = P * P + Q * Q
                logs.append((a, field.frac(norm)))
                log_weight += a * norm.deg
            arctans.append((2 * r, field.frac(P, Q)))
    v0 = field.zero
    if ext is not None and ext.kind == EXP and log_weight:
        # D(log v) = deg(v)*D(u) + proper part when the top variable is exp(u)
        v0 = -tower.lift(ext.argument) * log_weight
    form = LiouvilleForm(v0, tuple(logs), tuple(arctans))
    if form.derivative(tower) != field.frac(R, b):
        raise RuntimeError("Rothstein-Trager result does not differentiate back")
    return form


def integrate_rational(f: RatFunc, tower: Tower) -> LiouvilleForm:
    """Integrate an element with zero polynomial part in the top variable.

    Hermite reduction followed by :func:`tr_integrate` on the square-free
    remainder.
    """
    field = _top(tower)
    f = tower.lift(f)
    q, r = poly_divmod(f.num, f.den)
    if q:
        raise UnsupportedSplitting("integrand has a polynomial part in the top variable")
    if not r:
        return LiouvilleForm(field.zero)
    steps = hermite_reduce(r, f.den, tower)
    v0 = field.zero
    for s in steps:
        v0 = v0 + s.extracted
    if steps:
        rest = field.frac(steps[-1].remaining_num, steps[-1].remaining_den)
    else:
        rest = f
    if not rest:
        return LiouvilleForm(v0)
    q, r = poly_divmod(rest.num, rest.den)
    if q:
        raise UnsupportedSplitting("Hermite remainder has a polynomial part")
    form = tr_integrate(r, rest.den, tower)
    return LiouvilleForm(v0 + form.v0, form.logs, form.arctans)
