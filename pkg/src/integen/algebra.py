"""Dense univariate polynomials and rational functions over exact fields.

A coefficient *domain* is any object exposing ``zero``, ``one``, ``level``,
``convert(v)``, ``derive(a)`` and ``is_constant(a)``; its elements only need
the usual arithmetic operators and truthiness (``not a`` means ``a == 0``).
The rationals (:data:`QQ`), the fraction fields of :class:`RatFuncField` and
the Gaussian extension used by the integration kernel all fit that shape, so
the same :class:`Poly` code serves every level of a differential tower.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import flint
from gmpy2 import mpq, mpz

_MPQ = type(mpq(0))


class QQField:
    """The field of rational numbers (elements are ``gmpy2.mpq``)."""

    level = -1
    zero = mpq(0)
    one = mpq(1)

    def convert(self, v):
        if type(v) is _MPQ:
            return v
        if isinstance(v, (int, type(mpz(0)))):
            return mpq(v)
        if isinstance(v, Fraction):
            return mpq(int(v.numerator), int(v.denominator))
        raise TypeError(f"cannot convert {v!r} to a rational")

    def derive(self, a):
        return self.zero

    def is_constant(self, a):
        return True

    def __repr__(self):
        return "QQ"


QQ = QQField()


def to_fraction(v) -> Fraction:
    """A rational (int, Fraction or mpq) as a plain-int ``Fraction``."""
    if isinstance(v, Fraction) and type(v.numerator) is int:
        return v
    return Fraction(int(v.numerator), int(v.denominator))


class Poly:
    """Immutable dense polynomial; ``coeffs[i]`` is the coefficient of var**i."""

    __slots__ = ("coeffs", "dom")

    def __init__(self, coeffs=(), dom=QQ):
        cs = [dom.convert(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)
        self.dom = dom

    @classmethod
    def _make(cls, cs, dom):
        # cs: list of already-converted coefficients; trailing zeros allowed
        while cs and not cs[-1]:
            cs.pop()
        p = object.__new__(cls)
        p.coeffs = tuple(cs)
        p.dom = dom
        return p

    @classmethod
    def const(cls, c, dom=QQ):
        return cls._make([dom.convert(c)], dom)

    @classmethod
    def monomial(cls, c, n, dom=QQ):
        return cls._make([dom.zero] * n + [dom.convert(c)], dom)

    @classmethod
    def var(cls, dom=QQ):
        return cls._make([dom.zero, dom.one], dom)

    @property
    def deg(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.dom.zero

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.dom.zero

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        try:
            other = self.dom.convert(other)
        except TypeError:
            return NotImplemented
        return self.coeffs == ((other,) if other else ())

    def __hash__(self):
        if len(self.coeffs) == 1:
            return hash(self.coeffs[0])
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({list(self.coeffs)!r})"

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.dom is self.dom:
                return other
            if other.dom.level < self.dom.level:
                return Poly._make([self.dom.convert(c) for c in other.coeffs], self.dom)
            raise TypeError("polynomials over incompatible domains")
        return Poly._make([self.dom.convert(other)], self.dom)

    def __add__(self, other):
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        cs = list(a)
        for i, c in enumerate(b):
            cs[i] = cs[i] + c
        return Poly._make(cs, self.dom)

    __radd__ = __add__

    def __neg__(self):
        return Poly._make([-c for c in self.coeffs], self.dom)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._make([], self.dom)
        cs = [self.dom.zero] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                cs[i + j] = cs[i + j] + ai * bj
        return Poly._make(cs, self.dom)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        c = self.dom.convert(c)
        if not c:
            return Poly._make([], self.dom)
        return Poly._make([a * c for a in self.coeffs], self.dom)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Poly._make([self.dom.one], self.dom)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        return poly_divmod(self, self._coerce(other))

    def __floordiv__(self, other):
        return poly_divmod(self, self._coerce(other))[0]

    def __mod__(self, other):
        return poly_divmod(self, self._coerce(other))[1]

    def exact_div(self, other):
        q, r = poly_divmod(self, self._coerce(other))
        if r:
            raise ArithmeticError("polynomial division is not exact")
        return q

    def monic(self):
        if not self.coeffs:
            return self
        inv = self.dom.one / self.coeffs[-1]
        return Poly._make([c * inv for c in self.coeffs], self.dom)

    def diff(self):
        """Formal derivative with respect to the polynomial's own variable."""
        return Poly._make([c * i for i, c in enumerate(self.coeffs)][1:], self.dom)

    def __call__(self, v):
        acc = self.dom.zero
        for c in reversed(self.coeffs):
            acc = acc * v + c
        return acc

    def map_coeffs(self, fn, dom=None):
        dom = self.dom if dom is None else dom
        return Poly._make([fn(c) for c in self.coeffs], dom)


def poly_divmod(g: Poly, b: Poly) -> tuple[Poly, Poly]:
    """Euclidean division ``g = q*b + r`` with ``deg r < deg b``."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    dom = g.dom
    n = b.deg
    if g.deg < n:
        return Poly._make([], dom), g
    rem = list(g.coeffs)
    quo = [dom.zero] * (len(rem) - n)
    inv = dom.one / b.coeffs[-1]
    bc = b.coeffs
    for i in range(len(rem) - 1, n - 1, -1):
        c = rem[i]
        if not c:
            continue
        c = c * inv
        quo[i - n] = c
        for j in range(n + 1):
            rem[i - n + j] = rem[i - n + j] - c * bc[j]
    return Poly._make(quo, dom), Poly._make(rem[:n], dom)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor."""
    if not a and not b:
        raise ValueError("gcd of two zero polynomials")
    if not b:
        return a.monic()
    if a.deg > 0 and b.deg > 0 and _coprime_image(a, b):
        return Poly.const(1, a.dom)
    if isinstance(a.dom, RatFuncField):
        return _multivariate_gcd(a, b)
    if a.dom is QQ:
        g = _to_flint(a).gcd(_to_flint(b))
        return Poly._make([mpq(int(c.p), int(c.q)) for c in g.coeffs()], QQ)
    a, b = a.monic(), b.monic()
    if a.deg < b.deg:
        a, b = b, a
    while b:
        r = poly_divmod(a, b)[1]
        a, b = b, (r.monic() if r else r)
    return a


def _to_flint(p: Poly):
    return flint.fmpq_poly([_fmpq(c) for c in p.coeffs])


def _mpoly_ctx(nvars: int):
    return flint.fmpq_mpoly_ctx.get(tuple(f"v{i}" for i in range(nvars)), "lex")


def _fmpq(c):
    return flint.fmpq(int(c.numerator), int(c.denominator))


def _lcm_cofactors(dens):
    lcm = dens[0]
    for d in dens[1:]:
        lcm = lcm * (d / lcm.gcd(d))
    return lcm, [lcm / d for d in dens]


def _poly_to_mpoly(p: Poly, var, ctx):
    """``p`` with nested rational coefficients as ``(num, den)`` over Q[v0, v1, ...]."""
    if not p:
        return ctx.from_dict({}), ctx.constant(1)
    fracs = [_elem_to_mpoly(c, ctx) for c in p.coeffs]
    den, cof = _lcm_cofactors([d for _n, d in fracs])
    num = ctx.from_dict({})
    for i, ((n, _d), k) in enumerate(zip(fracs, cof)):
        if not n.is_zero():
            num = num + n * k * var ** i
    return num, den


def _elem_to_mpoly(c, ctx):
    if not isinstance(c, RatFunc):
        return ctx.constant(_fmpq(c)), ctx.constant(1)
    var = ctx.gens()[c.field.level]
    nn, nd = _poly_to_mpoly(c.num, var, ctx)
    dn, dd = _poly_to_mpoly(c.den, var, ctx)
    num, den = nn * dd, nd * dn
    g = num.gcd(den)
    return num / g, den / g


def _mpoly_to_poly(m, F: RatFuncField) -> Poly:
    """Inverse of :func:`_poly_to_mpoly` for a polynomial in ``v{level+1}``."""
    gens, fld = [], F
    while isinstance(fld, RatFuncField):
        gens.append(fld.gen)
        fld = fld.base
    gens = [F.convert(g) for g in reversed(gens)]
    top = F.level + 1
    coeffs = {}
    for exps, c in m.terms():
        term = F.convert(mpq(int(c.p), int(c.q)))
        for j, e in enumerate(exps[:top]):
            if e:
                term = term * gens[j] ** e
        coeffs[exps[top]] = coeffs.get(exps[top], F.zero) + term
    return Poly._make([coeffs.get(i, F.zero) for i in range(max(coeffs) + 1)], F)


def _multivariate_gcd(a: Poly, b: Poly) -> Poly:
    """gcd over ``K(x, t1, ...)[t]`` via a multivariate gcd of cleared numerators.

    Euclid directly over the nested fraction fields suffers badly from
    intermediate swell; the cleared gcd differs from the true one by a unit.
    """
    F = a.dom
    ctx = _mpoly_ctx(F.level + 2)
    var = ctx.gens()[F.level + 1]
    g = _poly_to_mpoly(a, var, ctx)[0].gcd(_poly_to_mpoly(b, var, ctx)[0])
    return _mpoly_to_poly(g, F).monic()


# specialization points for x, t1, t2, ...; values unlikely to hit a pole
_POINTS = (
    tuple(mpq(n, d) for n, d in ((13, 7), (-5, 3), (11, 4), (-19, 6), (23, 9))),
    tuple(mpq(n, d) for n, d in ((-17, 5), (7, 2), (-3, 11), (29, 8), (-31, 10))),
)


def _specialize(c, point):
    """Value of a nested rational function at ``point``; ZeroDivisionError at a pole."""
    if not isinstance(c, RatFunc):
        return c
    v = point[c.field.level]
    d = _horner(c.den, v, point)
    if not d:
        raise ZeroDivisionError("pole")
    return _horner(c.num, v, point) / d


def _horner(p: Poly, v, point):
    acc = mpq(0)
    for c in reversed(p.coeffs):
        acc = acc * v + _specialize(c, point)
    return acc


def _coprime_image(a: Poly, b: Poly) -> bool:
    """Cheap proof that ``gcd(a, b) = 1`` over a field of rational functions.

    Substituting numbers for x, t1, ... is a ring map where it is defined.
    If it keeps both leading coefficients nonzero it maps ``res(a, b)`` to
    the resultant of the images, so coprime images certify ``res(a, b) != 0``.
    A failed test proves nothing and the caller runs Euclid.
    """
    if not isinstance(a.dom, RatFuncField):
        return False
    for point in _POINTS:
        if len(point) <= a.dom.level:
            return False
        try:
            ia = [_specialize(c, point) for c in a.coeffs]
            ib = [_specialize(c, point) for c in b.coeffs]
        except ZeroDivisionError:
            continue
        if not ia[-1] or not ib[-1]:
            continue
        return poly_gcd(Poly(ia), Poly(ib)).deg == 0
    return False


def poly_xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Return ``(g, s, t)`` with ``s*a + t*b = g`` and ``g`` monic."""
    if not a and not b:
        raise ValueError("gcd of two zero polynomials")
    dom = a.dom
    one, zero = Poly.const(1, dom), Poly._make([], dom)
    r0, r1, s0, s1, t0, t1 = a, b, one, zero, zero, one
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    inv = dom.one / r0.lc
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        raise ValueError("lcm with the zero polynomial")
    return (a * b).exact_div(poly_gcd(a, b)).monic()


def solve_diophantine(a: Poly, b: Poly, c: Poly) -> tuple[Poly, Poly]:
    """Solve ``sigma*a + tau*b = c`` with ``deg sigma < deg b``.

    Raises ``ValueError`` when ``gcd(a, b)`` does not divide ``c``.
    """
    g, t, s = poly_xgcd(b, a)
    q, r = poly_divmod(c, g)
    if r:
        raise ValueError("gcd(a, b) does not divide c")
    sigma = (s * q) % b if b.deg > 0 else Poly._make([], a.dom)
    tau = (c - sigma * a).exact_div(b)
    return sigma, tau


@dataclass(frozen=True)
class SquareFreeFactorization:
    unit: object
    factors: tuple  # of (monic Poly, multiplicity)

    def expand(self) -> Poly:
        dom = self.factors[0][0].dom if self.factors else QQ
        out = Poly.const(self.unit, dom) if self.factors else Poly.const(self.unit)
        for f, m in self.factors:
            out = out * f ** m
        return out

    def squarefree_part(self) -> Poly:
        out = None
        for f, _ in self.factors:
            out = f if out is None else out * f
        return out


def squarefree_factorize(b: Poly) -> SquareFreeFactorization:
    """Yun's square-free factorization (characteristic zero)."""
    if not b:
        raise ValueError("square-free factorization of zero")
    unit = b.lc
    b = b.monic()
    factors = []
    if b.deg <= 0:
        return SquareFreeFactorization(unit, ())
    db = b.diff()
    g = poly_gcd(b, db)
    c = b.exact_div(g)
    d = db.exact_div(g) - c.diff()
    i = 1
    while c.deg > 0:
        a = poly_gcd(c, d)
        c = c.exact_div(a)
        d = d.exact_div(a) - c.diff()
        if a.deg > 0:
            factors.append((a, i))
        i += 1
    return SquareFreeFactorization(unit, tuple(factors))


def _check_res_args(a: Poly, b: Poly):
    if not a or not b:
        raise ValueError("resultant of a zero polynomial")
    if a.dom is not b.dom:
        raise TypeError("resultant of polynomials over different domains")


def resultant(a: Poly, b: Poly):
    """Resultant via the Euclidean remainder sequence over a field."""
    _check_res_args(a, b)
    dom = a.dom
    acc = dom.one
    while True:
        m, n = a.deg, b.deg
        if n == 0:
            return acc * b.lc ** m
        if m == 0:
            return acc * a.lc ** n
        # res(a,b) = (-1)^(mn) res(b,a) = (-1)^(mn) lc(b)^(m-k) res(b, a mod b)
        r = poly_divmod(a, b)[1]
        if not r:
            return dom.zero
        k = r.deg
        if (m * n) % 2:
            acc = -acc
        acc = acc * b.lc ** (m - k)
        a, b = b, r


def sylvester_matrix(a: Poly, b: Poly) -> list:
    m, n = a.deg, b.deg
    size = m + n
    zero = a.dom.zero
    rows = []
    ar = list(reversed(a.coeffs))
    br = list(reversed(b.coeffs))
    for i in range(n):
        rows.append([zero] * i + ar + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + br + [zero] * (size - n - 1 - i))
    return rows


def determinant(rows: list, dom=QQ):
    """Determinant by Gaussian elimination over a field."""
    mat = [list(r) for r in rows]
    size = len(mat)
    det = dom.one
    for col in range(size):
        piv = next((r for r in range(col, size) if mat[r][col]), None)
        if piv is None:
            return dom.zero
        if piv != col:
            mat[col], mat[piv] = mat[piv], mat[col]
            det = -det
        p = mat[col][col]
        det = det * p
        inv = dom.one / p
        for r in range(col + 1, size):
            f = mat[r][col]
            if not f:
                continue
            f = f * inv
            row, prow = mat[r], mat[col]
            for c in range(col, size):
                row[c] = row[c] - f * prow[c]
    return det


def sylvester_resultant(a: Poly, b: Poly):
    """Resultant as the determinant of the Sylvester matrix."""
    _check_res_args(a, b)
    if a.deg == 0 and b.deg == 0:
        return a.dom.one
    return determinant(sylvester_matrix(a, b), a.dom)


@dataclass(frozen=True)
class PartialFractions:
    poly_part: Poly
    terms: tuple  # of (numerator, factor, power)

    def recombine(self):
        """Return ``(num, den)`` of the recombined rational function."""
        num, den = self.poly_part, Poly.const(1, self.poly_part.dom)
        for n, f, k in self.terms:
            fk = f ** k
            num, den = num * fk + n * den, den * fk
        return num, den


def partial_fractions(R: Poly, factors) -> PartialFractions:
    """Decompose ``R / prod(f**m)`` over pairwise coprime ``(f, m)`` factors.

    ``factors`` may be a :class:`SquareFreeFactorization` (its unit divides
    the result) or a plain sequence of ``(factor, multiplicity)`` pairs.
    """
    if isinstance(factors, SquareFreeFactorization):
        unit = factors.unit
        factors = factors.factors
        R = R.scale(R.dom.one / R.dom.convert(unit)) if unit != 1 else R
    factors = list(factors)
    dom = R.dom
    for i, (f, _) in enumerate(factors):
        if f.deg < 1:
            raise ValueError("partial fraction factor must be nonconstant")
        for g, _ in factors[i + 1:]:
            if poly_gcd(f, g).deg > 0:
                raise ValueError("partial fraction factors are not coprime")
    powers = [f ** m for f, m in factors]
    den = Poly.const(1, dom)
    for p in powers:
        den = den * p
    poly_part, rem = poly_divmod(R, den)
    terms = []
    rest = den
    for (f, m), fm in zip(factors, powers):
        rest = rest.exact_div(fm)
        # rem/(fm*rest) = sigma/rest + tau/fm
        sigma, tau = solve_diophantine(fm, rest, rem)
        rem = sigma
        for k in range(m, 0, -1):
            tau, r = poly_divmod(tau, f)
            if r:
                terms.append((r, f, k))
        if tau:
            raise ArithmeticError("partial fraction numerator not proper")
    return PartialFractions(poly_part, tuple(terms))


class RatFuncField:
    """Fraction field ``base(var)``, optionally carrying a derivation.

    The derivation is given by ``eta = D(var)`` as a polynomial in ``var`` over
    ``base``; the coefficients are differentiated with ``base.derive``.
    """

    def __init__(self, base, name: str, eta: Poly | None = None, extension=None):
        self.base = base
        self.name = name
        self.level = base.level + 1
        self.eta = eta
        self.extension = extension
        self._one_poly = Poly._make([base.one], base)
        self.zero = RatFunc._raw(Poly._make([], base), self._one_poly, self)
        self.one = RatFunc._raw(self._one_poly, self._one_poly, self)
        self.gen = RatFunc._raw(Poly._make([base.zero, base.one], base), self._one_poly, self)

    def __repr__(self):
        return f"RatFuncField({self.name}, level={self.level})"

    def convert(self, v):
        if isinstance(v, RatFunc):
            if v.field is self:
                return v
            if v.field.level >= self.level:
                raise TypeError(f"cannot lower {v.field} into {self}")
        elif isinstance(v, Poly):
            return self.frac(v, self._one_poly)
        return RatFunc._raw(Poly._make([self.base.convert(v)], self.base), self._one_poly, self)

    def poly(self, coeffs) -> Poly:
        return Poly(coeffs, self.base)

    def frac(self, num: Poly, den: Poly | None = None) -> "RatFunc":
        """Canonical element ``num/den``."""
        if den is None:
            den = self._one_poly
        num = num if num.dom is self.base else Poly(num.coeffs, self.base)
        den = den if den.dom is self.base else Poly(den.coeffs, self.base)
        return _canonical(num, den, self)

    def derive_poly(self, p: Poly) -> Poly:
        if self.eta is None:
            raise TypeError(f"{self} carries no derivation")
        base = self.base
        d = Poly._make([base.derive(c) for c in p.coeffs], base)
        if p.deg > 0:
            d = d + p.diff() * self.eta
        return d

    def derive(self, e):
        e = self.convert(e)
        if e.den.deg == 0:
            return RatFunc._raw(self.derive_poly(e.num), self._one_poly, self)
        dn, dd = self.derive_poly(e.num), self.derive_poly(e.den)
        return self.frac(dn * e.den - e.num * dd, e.den * e.den)

    def is_constant(self, e) -> bool:
        e = self.convert(e)
        if e.den.deg != 0 or e.num.deg > 0:
            return False
        return not e.num or self.base.is_constant(e.num.coeffs[0])


def _canonical(num: Poly, den: Poly, field: RatFuncField) -> "RatFunc":
    if not den:
        raise ZeroDivisionError("rational function with zero denominator")
    if not num:
        return RatFunc._raw(num, field._one_poly, field)
    if den.deg > 0:
        g = poly_gcd(num, den)
        if g.deg > 0:
            num = num.exact_div(g)
            den = den.exact_div(g)
    lc = den.coeffs[-1]
    if lc != field.base.one:
        inv = field.base.one / lc
        num, den = num.scale(inv), den.scale(inv)
    return RatFunc._raw(num, den, field)


def _canonical_monic(num: Poly, den: Poly, field: RatFuncField) -> "RatFunc":
    # num and den already coprime; only the leading coefficient is normalized
    lc = den.coeffs[-1]
    if lc != field.base.one:
        inv = field.base.one / lc
        num, den = num.scale(inv), den.scale(inv)
    return RatFunc._raw(num, den, field)


class RatFunc:
    """Element ``num/den`` of a :class:`RatFuncField`, always canonical:
    ``den`` monic and coprime to ``num``."""

    __slots__ = ("num", "den", "field")

    @classmethod
    def _raw(cls, num, den, field):
        e = object.__new__(cls)
        e.num, e.den, e.field = num, den, field
        return e

    @property
    def level(self) -> int:
        return self.field.level

    def _pair(self, other):
        """Both operands in a common field, or ``None`` if incompatible."""
        if isinstance(other, RatFunc):
            if other.field is self.field:
                return self, other
            if other.field.level > self.field.level:
                try:
                    return other.field.convert(self), other
                except TypeError:
                    return None
        try:
            return self, self.field.convert(other)
        except TypeError:
            return None

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        pr = self._pair(other)
        if pr is None:
            return NotImplemented
        a, b = pr
        return a.num.coeffs == b.num.coeffs and a.den.coeffs == b.den.coeffs

    def __hash__(self):
        if self.den.deg == 0 and self.num.deg <= 0:
            return hash(self.num.coeffs[0]) if self.num else hash(0)
        return hash((self.field.level, self.num.coeffs, self.den.coeffs))

    def __add__(self, other):
        pr = self._pair(other)
        if pr is None:
            return NotImplemented
        a, b = pr
        f = a.field
        if a.den == b.den:
            if a.den.deg == 0:
                return RatFunc._raw(a.num + b.num, a.den, f)
            return _canonical(a.num + b.num, a.den, f)
        if a.den.deg == 0:
            return RatFunc._raw(a.num * b.den + b.num, b.den, f)
        if b.den.deg == 0:
            return RatFunc._raw(a.num + b.num * a.den, a.den, f)
        # Henrici: only gcd(t, g) can cancel, g = gcd of the denominators
        g = poly_gcd(a.den, b.den)
        if g.deg == 0:
            return RatFunc._raw(a.num * b.den + b.num * a.den, a.den * b.den, f)
        ad, bd = a.den.exact_div(g), b.den.exact_div(g)
        t = a.num * bd + b.num * ad
        if not t:
            return f.zero
        g2 = poly_gcd(t, g)
        if g2.deg > 0:
            t, g = t.exact_div(g2), g.exact_div(g2)
        return _canonical_monic(t, ad * bd * g, f)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den, self.field)

    def __sub__(self, other):
        pr = self._pair(other)
        if pr is None:
            return NotImplemented
        return pr[0] + (-pr[1])

    def __rsub__(self, other):
        pr = self._pair(other)
        if pr is None:
            return NotImplemented
        return pr[1] + (-pr[0])

    def __mul__(self, other):
        pr = self._pair(other)
        if pr is None:
            return NotImplemented
        a, b = pr
        f = a.field
        if a.den.deg == 0 and b.den.deg == 0:
            return RatFunc._raw(a.num * b.num, a.den, f)
        if b.num.deg <= 0 and b.den.deg == 0:
            if not b.num:
                return f.zero
            return RatFunc._raw(a.num.scale(b.num.coeffs[0]), a.den, f)
        if a.num.deg <= 0 and a.den.deg == 0:
            if not a.num:
                return f.zero
            return RatFunc._raw(b.num.scale(a.num.coeffs[0]), b.den, f)
        g1 = poly_gcd(a.num, b.den) if b.den.deg > 0 else None
        g2 = poly_gcd(b.num, a.den) if a.den.deg > 0 else None
        an, bd = (a.num, b.den) if g1 is None or g1.deg == 0 else (a.num.exact_div(g1), b.den.exact_div(g1))
        bn, ad = (b.num, a.den) if g2 is None or g2.deg == 0 else (b.num.exact_div(g2), a.den.exact_div(g2))
        return _canonical_monic(an * bn, ad * bd, f)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return _canonical_monic(self.den, self.num, self.field)

    def __truediv__(self, other):
        pr = self._pair(other)
        if pr is None:
            return NotImplemented
        return pr[0] * pr[1].inverse()

    def __rtruediv__(self, other):
        pr = self._pair(other)
        if pr is None:
            return NotImplemented
        return pr[1] * pr[0].inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc._raw(self.num ** n, self.den ** n, self.field)

    def __repr__(self):
        return f"RatFunc({self.num!r} / {self.den!r} @ {self.field.name})"


class GaussianField:
    """``base(i)`` with ``i**2 = -1``; ``base`` must be formally real."""

    def __init__(self, base):
        self.base = base
        self.level = base.level + 0.5
        self.zero = Gaussian(base.zero, base.zero, self)
        self.one = Gaussian(base.one, base.zero, self)
        self.i = Gaussian(base.zero, base.one, self)

    def convert(self, v):
        if isinstance(v, Gaussian):
            return v
        return Gaussian(self.base.convert(v), self.base.zero, self)


class Gaussian:
    __slots__ = ("re", "im", "field")

    def __init__(self, re, im, field):
        self.re, self.im, self.field = re, im, field

    def _c(self, o):
        return o if isinstance(o, Gaussian) else self.field.convert(o)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, o):
        o = self._c(o)
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __add__(self, o):
        o = self._c(o)
        return Gaussian(self.re + o.re, self.im + o.im, self.field)

    __radd__ = __add__

    def __neg__(self):
        return Gaussian(-self.re, -self.im, self.field)

    def __sub__(self, o):
        o = self._c(o)
        return Gaussian(self.re - o.re, self.im - o.im, self.field)

    def __rsub__(self, o):
        return self._c(o) - self

    def __mul__(self, o):
        o = self._c(o)
        return Gaussian(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re, self.field)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._c(o)
        n = o.re * o.re + o.im * o.im
        if not n:
            raise ZeroDivisionError("Gaussian division by zero")
        inv = self.field.base.one / n
        return self * Gaussian(o.re * inv, -o.im * inv, self.field)

    def __rtruediv__(self, o):
        return self._c(o) / self

    def __pow__(self, n):
        out = self.field.one
        for _ in range(n):
            out = out * self
        return out

    def __repr__(self):
        return f"({self.re!r} + {self.im!r}*i)"
