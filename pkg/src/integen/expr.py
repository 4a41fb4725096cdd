"""Expression trees: rendering tower elements, infix text, and the way back.

Trees use the operators ``add sub mul div pow`` (binary), ``neg ln exp
arctan`` (unary) and the leaves ``x``, non-negative integers and ``CONST``.
Negative numbers are ``neg`` over a positive leaf and a rational ``p/q`` is
``div(p, q)``, so every tree has a single token vocabulary of integers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

import numpy as np

from .algebra import Poly, RatFunc, partial_fractions, poly_gcd, poly_lcm, to_fraction
from .tower import EXP, LOG, Tower, TowerError, true_level

BINARY = ("add", "sub", "mul", "div", "pow")
UNARY = ("neg", "ln", "exp", "arctan")
FUNCTIONS = ("ln", "exp", "arctan")


@dataclass(frozen=True)
class Expr:
    op: str
    args: tuple = ()
    value: int | None = None

    def __post_init__(self):
        arity = 2 if self.op in BINARY else 1 if self.op in UNARY else 0
        if len(self.args) != arity:
            raise ValueError(f"{self.op} takes {arity} operands, got {len(self.args)}")
        if self.op == "int" and (not isinstance(self.value, int) or self.value < 0):
            raise ValueError("integer leaves hold non-negative ints")

    def __repr__(self):
        return infix(self)

    def size(self) -> int:
        return 1 + sum(a.size() for a in self.args)


X = Expr("x")
CONST = Expr("CONST")


def integer(n: int) -> Expr:
    n = int(n)
    if n < 0:
        return Expr("neg", (Expr("int", value=-n),))
    return Expr("int", value=n)


def rational(q) -> Expr:
    q = to_fraction(q)
    if q < 0:
        return Expr("neg", (rational(-q),))
    if q.denominator == 1:
        return integer(q.numerator)
    return Expr("div", (integer(q.numerator), integer(q.denominator)))


def add(a, b):
    return Expr("add", (a, b))


def sub(a, b):
    return Expr("sub", (a, b))


def mul(a, b):
    return Expr("mul", (a, b))


def div(a, b):
    return Expr("div", (a, b))


def neg(a):
    return Expr("neg", (a,))


def pow_(a, n: int):
    return Expr("pow", (a, integer(n)))


def ln(a):
    return Expr("ln", (a,))


def exp(a):
    return Expr("exp", (a,))


def arctan(a):
    return Expr("arctan", (a,))


# --------------------------------------------------------------------------
# tower elements -> trees


def _sign(e) -> int:
    while isinstance(e, RatFunc):
        if not e.num:
            return 0
        e = e.num.coeffs[-1]
    return (e > 0) - (e < 0)


def _scaled(c: Fraction, body: Expr) -> Expr:
    """``c * body`` for a positive rational ``c``."""
    p, q = c.numerator, c.denominator
    if p != 1:
        body = mul(integer(p), body)
    if q != 1:
        body = div(body, integer(q))
    return body


def _signed_sum(terms) -> tuple[Expr | None, int]:
    """Fold ``[(sign, expr), ...]``; a leading minus is returned as sign -1."""
    terms = [t for t in terms if t[0]]
    if not terms:
        return None, 0
    overall = terms[0][0]
    out = None
    for s, e in terms:
        if out is None:
            out = e
        elif s * overall > 0:
            out = add(out, e)
        else:
            out = sub(out, e)
    return out, overall


def _apply_sign(e: Expr, s: int) -> Expr:
    return neg(e) if s < 0 else e


def _split_by(den: Poly, hints) -> tuple[list, Poly]:
    """Pull hinted factors out of ``den``: ``([(f, m), ...], rest)``."""
    found = []
    for f in hints:
        if f.dom is not den.dom or f.deg < 1 or den.deg < f.deg:
            continue
        m = 0
        while den.deg >= f.deg:
            q, r = divmod(den, f)
            if r:
                break
            den, m = q, m + 1
        if m:
            found.append((f, m))
    return found, den


def _rational_linear_factors(p: Poly) -> list[Poly]:
    """Monic ``x - c`` for the distinct rational roots of a Q[x] polynomial."""
    if p.deg < 1:
        return []
    lc = abs(int(_primitive(p)[0].coeffs[-1]))
    out = []
    for z in np.roots([float(c) for c in reversed(p.coeffs)]):
        if abs(z.imag) > 1e-7 * (1 + abs(z)):
            continue
        c = Fraction(float(z.real)).limit_denominator(max(lc, 1))
        f = Poly([-c, 1])
        if not p(c) and f not in out:
            out.append(f)
    return out


class _Renderer:
    def __init__(self, tower: Tower | None, factors=()):
        self.tower = tower
        self._vars = {}
        self._memo = {}
        hints = list(factors)
        if tower is not None:
            for ext in tower.extensions:
                u = ext.argument
                if isinstance(u, RatFunc):
                    hints += [u.num, u.den]
        seen = []
        for f in hints:
            if isinstance(f, Poly) and f.deg >= 1:
                f = f.monic()
                if f not in seen:
                    seen.append(f)
        self.hints = seen

    def var(self, level: int) -> Expr:
        if level == 0:
            return X
        if level not in self._vars:
            if self.tower is None or level > self.tower.height:
                raise TowerError(f"no tower to render level {level}")
            ext = self.tower.extensions[level - 1]
            arg = self.elem(ext.argument)
            self._vars[level] = ln(arg) if ext.kind == LOG else exp(arg)
        return self._vars[level]

    # elements -----------------------------------------------------------

    def elem(self, e) -> Expr:
        body, s = self.signed(e)
        return _apply_sign(body, s)

    def signed(self, e) -> tuple[Expr, int]:
        """Render ``|e|`` and return it with the sign of ``e``."""
        key = ("e", e)
        if key not in self._memo:
            self._memo[key] = self._signed(e)
        return self._memo[key]

    def _signed(self, e) -> tuple[Expr, int]:
        level = true_level(e)
        if level < 0:
            q = _rational_of(e)
            return rational(abs(q)), (q > 0) - (q < 0)
        while e.level > level:
            e = e.num.coeffs[0]
        num, den = e.num, e.den
        best = self._frac(num, den, level)
        if den.deg == 0 and num.deg > 0:
            # term by term, each coefficient rendered on its own
            inv = den.dom.one / den.coeffs[0]
            termwise = self._poly_terms(num.scale(inv), level)
            if termwise[0].size() < best[0].size():
                best = termwise
        if den.deg > 0 and num.deg >= den.deg:
            q, r = divmod(num, den)
            one = Poly.const(1, num.dom)
            pe, ps = self._frac(q, one, level)
            re_, rs = self._frac(r, den, level)
            split, s = _signed_sum([(ps, pe), (rs, re_)])
            if split.size() < best[0].size():
                best = split, s
        common, shared = _coeff_content(num)
        if common is not None or shared is not None:
            # pull a shared lower-level factor out of every term
            lower = num.dom
            m = lower.one if common is None else lower.frac(common)
            g = lower.one if shared is None else lower.frac(shared)
            inner, s = self.signed(e * e.field.convert(m / g))
            if shared is not None:
                inner = mul(self._multiplier(g), inner)
            pulled = inner if common is None else div(inner, self._multiplier(m))
            if pulled.size() < best[0].size():
                best = pulled, s
        return best

    def _frac(self, num: Poly, den: Poly, level: int, split: bool = True) -> tuple[Expr, int]:
        key = ("f", num, den, level, split)
        if key not in self._memo:
            self._memo[key] = self._frac_uncached(num, den, level, split)
        return self._memo[key]

    def _frac_uncached(self, num: Poly, den: Poly, level: int, split: bool) -> tuple[Expr, int]:
        if not num:
            return integer(0), 0
        if level == 0:
            return self._frac_q(num, den)
        combined = self._combined(num, den, level)
        if split and den.deg > 0:
            pf = self._partial(num, den, level)
            if pf is not None and pf[0].size() < combined[0].size():
                return pf
        return combined

    def _partial(self, num: Poly, den: Poly, level: int):
        """Partial fractions over the hinted factors, if they split ``den``."""
        parts, rest = _split_by(den, self.hints)
        if not parts or rest.deg > 0 or (len(parts) == 1 and parts[0][1] == 1):
            return None
        num = num.scale(num.dom.one / rest.coeffs[0])
        pf = partial_fractions(num, parts)
        terms = []
        if pf.poly_part:
            body, s = self._frac(pf.poly_part, Poly.const(1, num.dom), level, split=False)
            terms.append((s, body))
        for r, f, k in pf.terms:
            body, s = self._frac(r, f ** k, level, split=False)
            terms.append((s, body))
        out, s = _signed_sum(terms)
        return None if out is None else (out, s)

    def _combined(self, num: Poly, den: Poly, level: int) -> tuple[Expr, int]:
        # clear lower-level denominators, then rational ones, from both sides
        lower = num.dom
        m = None
        for c in num.coeffs + den.coeffs:
            if isinstance(c, RatFunc) and c.den.deg > 0:
                m = c.den if m is None else poly_lcm(m, c.den)
        mm = lower.one if m is None else lower.frac(m)
        num, den = num.scale(mm), den.scale(mm)
        k = _clearing_scalar(num, den)
        if k != 1:
            num, den, mm = num.scale(k), den.scale(k), mm * k
        n_expr, s = self.poly(num, level)
        if den.deg <= 0:
            d_expr, ds = self.signed(den.coeffs[0])
            if d_expr == integer(1):
                return n_expr, s * ds
            return div(n_expr, d_expr), s * ds
        d_expr = self.poly(den, level)[0]
        inner = den.scale(mm.inverse()) if mm != 1 else den
        parts, rest = _split_by(inner, self.hints)
        if parts:
            # integer-coefficient factors when the leftover multiplier allows it
            one = Poly.const(1, rest.dom)
            scaled, adj = [], mm
            for f, m in parts + ([(rest, 1)] if rest.deg > 0 else []):
                kf = _clearing_scalar(f, one)
                scaled.append((f.scale(kf), m))
                adj = adj * (1 / kf) ** m
            if all(q.denominator == 1 for q in _leaves(adj)):
                if rest.deg > 0:
                    rest = scaled.pop()[0]
                parts, mm = scaled, adj
        if mm != 1 or parts:
            body = self._product(parts, rest, level)
            factored = body if mm == 1 else mul(self._multiplier(mm), body)
            if factored.size() <= d_expr.size():
                d_expr = factored
        return div(n_expr, d_expr), s

    def _multiplier(self, mm) -> Expr:
        """Positive lower-level factor of a denominator, factored over Q[x] if possible."""
        if true_level(mm) == 0 and mm.level == 0 and mm.den.deg == 0:
            ni, nc = _primitive(mm.num)
            d = self._q_den(ni)
            return d if nc == 1 else mul(rational(nc), d)
        return self.elem(mm)

    def _product(self, parts, rest: Poly, level: int) -> Expr:
        exprs = []
        for f, m in parts:
            e = self.poly(f, level)[0] if level else self.poly_int(_primitive(f)[0])
            exprs.append(e if m == 1 else pow_(e, m))
        if rest.deg > 0:
            exprs.append(self.poly(rest, level)[0] if level else self.poly_int(rest))
        out = exprs[0]
        for e in exprs[1:]:
            out = mul(out, e)
        return out

    def _q_den(self, di: Poly) -> Expr:
        """Primitive integer Q[x] denominator, factored when that is shorter."""
        expanded = self.poly_int(di)
        hints = [h for h in self.hints if h.dom is di.dom]
        hints += [f for f in _rational_linear_factors(di) if f not in hints]
        parts, rest = _split_by(di, hints)
        if not parts:
            return expanded
        # rest keeps the integer content of the removed monic factors
        scale = Fraction(1)
        for f, m in parts:
            scale *= _primitive(f)[1] ** m
        rest = rest.scale(scale)
        factored = self._product(parts, rest, 0)
        if rest.deg <= 0 and rest.coeffs[0] != 1:
            factored = mul(rational(_rational_of(rest.coeffs[0])), factored)
        return factored if factored.size() < expanded.size() else expanded

    def _frac_q(self, num: Poly, den: Poly) -> tuple[Expr, int]:
        ni, nc = _primitive(num)
        di, dc = _primitive(den)
        k = nc / dc
        s = (k > 0) - (k < 0)
        k = abs(k)
        n_expr = self.poly_int(ni)
        p, q = k.numerator, k.denominator
        if p != 1:
            n_expr = integer(p) if n_expr == integer(1) else mul(integer(p), n_expr)
        if di.deg > 0:
            d_expr = self._q_den(di)
            if q != 1:
                d_expr = mul(integer(q), d_expr)
            return div(n_expr, d_expr), s
        if q != 1:
            return div(n_expr, integer(q)), s
        return n_expr, s

    def poly_int(self, p: Poly) -> Expr:
        body, s = self._poly_terms(p, 0)
        return _apply_sign(body, s)

    def poly(self, p: Poly, level: int) -> tuple[Expr, int]:
        return self._poly_terms(p, level)

    def _poly_terms(self, p: Poly, level: int) -> tuple[Expr, int]:
        v = self.var(level)
        terms = []
        for i in range(p.deg, -1, -1):
            c = p.coeffs[i]
            if not c:
                continue
            power = None if i == 0 else v if i == 1 else pow_(v, i)
            if true_level(c) < 0:
                q = _rational_of(c)
                s = (q > 0) - (q < 0)
                body = rational(abs(q)) if power is None else _scaled(abs(q), power)
            else:
                body, s = self.signed(c)
                if power is not None:
                    body = mul(body, power)
            terms.append((s, body))
        out, s = _signed_sum(terms)
        return (integer(0), 0) if out is None else (out, s)


def _leaves(e):
    if isinstance(e, Poly):
        for c in e.coeffs:
            yield from _leaves(c)
    elif isinstance(e, RatFunc):
        yield from _leaves(e.num)
        yield from _leaves(e.den)
    else:
        yield to_fraction(e)


def _coeff_content(p: Poly):
    """Monic lcm of the coefficient denominators and monic gcd of the numerators.

    Either is None when it is a constant.
    """
    m = g = None
    for c in p.coeffs:
        if not isinstance(c, RatFunc) or not c:
            continue
        if c.den.deg > 0:
            m = c.den if m is None else poly_lcm(m, c.den)
        g = c.num if g is None else poly_gcd(g, c.num)
    if g is not None:
        g = g.monic() if g.deg > 0 else None
    return m, g


def _clearing_scalar(num: Poly, den: Poly) -> Fraction:
    """Rational k making every rational leaf of k*num and k*den a coprime integer set."""
    leaves = list(_leaves(num)) + list(_leaves(den))
    d = lcm(*(q.denominator for q in leaves))
    g = 0
    for q in leaves:
        g = gcd(g, int(q * d))
    return Fraction(d, g) if g else Fraction(1)


def _rational_of(e) -> Fraction:
    while isinstance(e, RatFunc):
        e = e.num.coeffs[0] if e.num else Fraction(0)
    return to_fraction(e)


def _primitive(p: Poly) -> tuple[Poly, Fraction]:
    """Split a Q[x] polynomial into (primitive integer poly with lc > 0, content)."""
    den = lcm(*(to_fraction(c).denominator for c in p.coeffs))
    ints = [int(c * den) for c in p.coeffs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if ints[-1] < 0:
        g = -g
    return Poly([v // g for v in ints], p.dom), Fraction(g, den)


def to_expr(obj, tower: Tower | None = None, factors=()) -> Expr:
    """Render a tower element or a Liouville form as an expression tree.

    ``factors`` are known polynomial factors (e.g. of a planted denominator);
    a denominator divisible by them may be written as their product.
    """
    from .kernel import LiouvilleForm

    r = _Renderer(tower, factors)
    if isinstance(obj, LiouvilleForm):
        return _liouville_expr(obj, r)
    return r.elem(obj)


def _liouville_expr(form, r: _Renderer) -> Expr:
    terms = []
    if form.v0:
        body, s = r.signed(form.v0)
        terms.append((s, body))
    for fn, pairs in ((ln, form.logs), (arctan, form.arctans)):
        for c, v in pairs:
            c = to_fraction(c)
            if c:
                terms.append(((c > 0) - (c < 0), _scaled(abs(c), fn(r.elem(v)))))
    terms = [t for t in terms if t[0]]
    if not terms:
        return integer(0)
    # a leading minus stays on the first term rather than the whole sum
    s, out = terms[0]
    out = _apply_sign(out, s)
    for s, e in terms[1:]:
        out = add(out, e) if s > 0 else sub(out, e)
    return out


# --------------------------------------------------------------------------
# infix text

_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "neg": 3, "pow": 4}
_SYM = {"add": " + ", "sub": " - ", "mul": "*", "div": "/", "pow": "^"}


def _prec(e: Expr) -> int:
    return _PREC.get(e.op, 5)


def infix(e: Expr) -> str:
    """Human-readable parenthesized rendering (``ln``/``exp``/``arctan``)."""
    op = e.op
    if op == "x":
        return "x"
    if op == "CONST":
        return "CONST"
    if op == "int":
        return str(e.value)
    if op in FUNCTIONS:
        return f"{op}({infix(e.args[0])})"
    if op == "neg":
        a = e.args[0]
        inner = infix(a)
        return f"-({inner})" if _prec(a) < 3 else f"-{inner}"
    a, b = e.args
    p = _PREC[op]
    la = infix(a)
    lb = infix(b)
    if _prec(a) < p or (op == "pow" and _prec(a) <= p) or (a.op == "neg" and op != "add" and op != "sub"):
        la = f"({la})"
    strict = op in ("sub", "div", "pow")
    if _prec(b) < p or (strict and _prec(b) == p) or b.op == "neg":
        lb = f"({lb})"
    return f"{la}{_SYM[op]}{lb}"


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]+)|(\*\*|[-+*/^()]))")
_FUNC_ALIASES = {"ln": "ln", "log": "ln", "exp": "exp", "arctan": "arctan", "atan": "arctan"}


def parse_infix(text: str) -> Expr:
    """Parse the infix syntax produced by :func:`infix` (``log`` = ``ln``)."""
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        toks.append((m.group(m.lastindex), m.lastindex, m.start(m.lastindex)))
        pos = m.end()
    p = _InfixParser(toks, len(text))
    e = p.expr()
    if p.i != len(toks):
        raise ParseError("trailing input", toks[p.i][2])
    return e


class _InfixParser:
    def __init__(self, toks, end):
        self.toks, self.i, self.end = toks, 0, end

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def take(self, want=None):
        if self.i >= len(self.toks):
            raise ParseError("unexpected end of input", self.end)
        tok, kind, pos = self.toks[self.i]
        if want is not None and tok != want:
            raise ParseError(f"expected {want!r}, got {tok!r}", pos)
        self.i += 1
        return tok, kind, pos

    def expr(self):
        e = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            e = Expr("add" if op == "+" else "sub", (e, self.term()))
        return e

    def term(self):
        e = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()[0]
            e = Expr("mul" if op == "*" else "div", (e, self.unary()))
        return e

    def unary(self):
        if self.peek() == "-":
            self.take()
            return neg(self.unary())
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() in ("^", "**"):
            self.take()
            return Expr("pow", (base, self.unary()))
        return base

    def atom(self):
        tok, kind, pos = self.take()
        if kind == 1:
            return Expr("int", value=int(tok))
        if kind == 2:
            if tok == "x":
                return X
            if tok == "CONST":
                return CONST
            fn = _FUNC_ALIASES.get(tok)
            if fn is None:
                raise ParseError(f"unknown name {tok!r}", pos)
            self.take("(")
            arg = self.expr()
            self.take(")")
            return Expr(fn, (arg,))
        if tok == "(":
            e = self.expr()
            self.take(")")
            return e
        raise ParseError(f"unexpected {tok!r}", pos)


# --------------------------------------------------------------------------
# trees -> tower elements


def to_elem(e: Expr, tower: Tower) -> RatFunc:
    """Interpret a tree as a tower element; ``ln``/``exp`` must be tower variables."""
    op = e.op
    if op == "x":
        return tower.x
    if op == "int":
        return tower.const(e.value)
    if op == "CONST":
        raise TowerError("CONST has no value")
    if op == "neg":
        return -to_elem(e.args[0], tower)
    if op in ("ln", "exp"):
        arg = to_elem(e.args[0], tower)
        kind = LOG if op == "ln" else EXP
        for i, ext in enumerate(tower.extensions, start=1):
            if ext.kind == kind and tower.lift(ext.argument) == tower.lift(arg):
                return tower.theta(i)
        raise TowerError(f"{infix(e)} is not a variable of the tower")
    if op == "arctan":
        raise TowerError("arctan is not a tower element")
    a = to_elem(e.args[0], tower)
    if op == "pow":
        n = to_elem(e.args[1], tower)
        if not tower.is_constant(n):
            raise TowerError("non-constant exponent")
        from .tower import const_value

        q = const_value(n)
        if q.denominator != 1:
            raise TowerError("non-integer exponent")
        return a ** int(q)
    b = to_elem(e.args[1], tower)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if not b:
            raise TowerError("division by zero in expression")
        return a / b
    raise TowerError(f"unknown operator {op!r}")


def _terms(e: Expr, sign: int = 1):
    if e.op == "add":
        yield from _terms(e.args[0], sign)
        yield from _terms(e.args[1], sign)
    elif e.op == "sub":
        yield from _terms(e.args[0], sign)
        yield from _terms(e.args[1], -sign)
    elif e.op == "neg":
        yield from _terms(e.args[0], -sign)
    else:
        yield sign, e


def _const_times_call(e: Expr, tower: Tower):
    """Match ``c * f(arg)`` for f in (ln, arctan); return (c, f, arg) or None."""
    if e.op in ("ln", "arctan"):
        return Fraction(1), e.op, e.args[0]
    if e.op == "neg":
        m = _const_times_call(e.args[0], tower)
        return None if m is None else (-m[0], m[1], m[2])
    if e.op in ("mul", "div"):
        a, b = e.args
        for inner, other, swap in ((a, b, False), (b, a, True)):
            if e.op == "div" and swap:
                break
            m = _const_times_call(inner, tower)
            if m is None:
                continue
            try:
                k = to_elem(other, tower)
            except TowerError:
                return None
            if not tower.is_constant(k) or not k:
                return None
            from .tower import const_value

            k = const_value(k)
            return (m[0] * k if e.op == "mul" else m[0] / k), m[1], m[2]
    return None


def to_liouville(e: Expr, tower: Tower):
    """Read an integral tree back as ``v0 + sum c*ln(v) + sum c*arctan(w)``."""
    from .kernel import LiouvilleForm

    v0 = tower.top.zero
    logs, arctans = [], []
    for sign, term in _terms(e):
        try:
            v0 = v0 + tower.lift(to_elem(term, tower)) * sign
            continue
        except TowerError:
            pass
        m = _const_times_call(term, tower)
        if m is None:
            raise TowerError(f"term {infix(term)} is not of Liouville shape")
        c, fn, arg = m
        v = tower.lift(to_elem(arg, tower))
        (logs if fn == "ln" else arctans).append((c * sign, v))
    return LiouvilleForm(v0, tuple(logs), tuple(arctans))
