"""Differential towers Q(x)(t1, ..., tn) of logarithmic and exponential extensions.

Every element of the tower is a canonical :class:`~integen.algebra.RatFunc`
in the topmost variable it involves, with coefficients one level down.  Since
the extension variables are treated as transcendental, an element is zero
exactly when its numerator polynomial is empty, which makes ``D(F) - f == 0``
a decidable, exact test.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import QQ, Poly, RatFunc, RatFuncField, to_fraction

LOG = "log"
EXP = "exp"

TowerElem = RatFunc

#: Q(x) with D(x) = 1, shared by every tower.
QX = RatFuncField(QQ, "x", eta=Poly.const(1))


class TowerError(ValueError):
    """Invalid extension or element for a tower."""


@dataclass(frozen=True, eq=False)
class Extension:
    kind: str
    argument: RatFunc

    def __post_init__(self):
        if self.kind not in (LOG, EXP):
            raise TowerError(f"unknown extension kind {self.kind!r}")


class Tower:
    """Q(x) followed by an ordered list of log/exp extensions.

    Level 0 is Q(x); level ``i`` adjoins ``t_i = log(u)`` or ``t_i = exp(u)``
    with ``u`` an element of level ``i - 1`` or below.
    """

    def __init__(self, extensions=()):
        self.fields = [QX]
        self.extensions: list[Extension] = []
        for ext in extensions:
            if isinstance(ext, tuple):
                ext = Extension(*ext)
            self._adjoin(ext)

    @property
    def height(self) -> int:
        return len(self.extensions)

    @property
    def top(self) -> RatFuncField:
        return self.fields[-1]

    @property
    def x(self) -> RatFunc:
        return self.fields[0].gen

    def theta(self, i: int = None) -> RatFunc:
        """The extension variable of level ``i`` (default: the top one)."""
        i = self.height if i is None else i
        if not 1 <= i <= self.height:
            raise TowerError(f"no extension at level {i}")
        return self.fields[i].gen

    def field(self, level: int) -> RatFuncField:
        return self.fields[level]

    def const(self, c) -> RatFunc:
        return self.fields[0].convert(Fraction(c))

    def lift(self, e, level: int = None) -> RatFunc:
        """View ``e`` (a rational, int or lower-level element) at ``level``."""
        level = self.height if level is None else level
        field = self.fields[level]
        if isinstance(e, RatFunc) and e.field is not self.fields[e.level]:
            raise TowerError("element belongs to a different tower")
        return field.convert(e)

    def derive(self, e) -> RatFunc:
        if not isinstance(e, RatFunc):
            return self.fields[0].zero
        return e.field.derive(e)

    def is_constant(self, e) -> bool:
        if not isinstance(e, RatFunc):
            return True
        return e.field.is_constant(e)

    def with_extension(self, kind: str, argument) -> "Tower":
        t = Tower()
        t.fields = list(self.fields)
        t.extensions = list(self.extensions)
        t._adjoin(Extension(kind, argument))
        return t

    def _adjoin(self, ext: Extension):
        prev = self.top
        try:
            u = prev.convert(ext.argument)
        except TypeError as exc:
            raise TowerError(f"extension argument not in level {prev.level}") from exc
        if not self.derive(u):
            raise TowerError("extension argument must be nonconstant")
        if ext.kind == LOG:
            self._check_log_argument(u)
            eta = Poly([prev.derive(u) / u], prev)
        else:
            self._check_exp_argument(u)
            eta = Poly([prev.zero, prev.derive(u)], prev)
        level = prev.level + 1
        ext = Extension(ext.kind, u)
        field = RatFuncField(prev, f"t{level}", eta=eta, extension=ext)
        self.extensions.append(ext)
        self.fields.append(field)

    def _check_log_argument(self, u: RatFunc):
        # log(a * exp(v)^k) = log(a) + k*v: reject monomials in an exp variable
        lvl = _true_level(u)
        if lvl >= 1 and self.extensions[lvl - 1].kind == EXP:
            e = self.fields[lvl].convert(u)
            if len(_support(e.num)) == 1 and len(_support(e.den)) == 1:
                raise TowerError("log of an exponential monomial is not transcendental")

    def _check_exp_argument(self, u: RatFunc):
        for i, ext in enumerate(self.extensions, start=1):
            if ext.kind != LOG:
                continue
            t = self.lift(self.fields[i].gen)
            uu = self.lift(u)
            lt = self.lift(t)
            # u = c*t + d with c, d in Q  <=>  D(u) = c D(t) with c constant
            du, dt = self.derive(uu), self.derive(lt)
            ratio = du / dt
            if self.is_constant(ratio) and self.is_constant(uu - ratio * lt):
                raise TowerError("exp of a logarithm is not transcendental")

    def describe(self) -> str:
        from .expr import infix, to_expr

        parts = []
        for i, ext in enumerate(self.extensions):
            parts.append(f"{ext.kind}({infix(to_expr(ext.argument, self))})")
        return "; ".join(parts)

    @classmethod
    def from_description(cls, text: str) -> "Tower":
        from .expr import parse_infix, to_elem

        tower = cls()
        text = text.strip()
        if not text:
            return tower
        for piece in text.split(";"):
            node = parse_infix(piece.strip())
            if node.op not in ("ln", "exp"):
                raise TowerError(f"bad extension description {piece!r}")
            arg = to_elem(node.args[0], tower)
            tower = tower.with_extension(LOG if node.op == "ln" else EXP, arg)
        return tower

    def __repr__(self):
        return f"Tower({self.describe()!r})"


def _support(p: Poly) -> list[int]:
    return [i for i, c in enumerate(p.coeffs) if c]


def _true_level(e) -> int:
    """Lowest level at which ``e`` can be represented."""
    while isinstance(e, RatFunc):
        if e.den.deg == 0 and e.num.deg <= 0:
            e = e.num.coeffs[0] if e.num else Fraction(0)
            continue
        return e.level
    return -1


def true_level(e) -> int:
    return _true_level(e)


def derive(e, tower: Tower) -> RatFunc:
    """Apply the tower derivation D."""
    return tower.derive(e)


def canonicalize(e: RatFunc) -> RatFunc:
    """Re-normalize ``e``: monic denominator, coprime numerator/denominator."""
    return e.field.frac(e.num, e.den)


def from_num_den(num: Poly, den: Poly, field: RatFuncField) -> RatFunc:
    """Element ``num/den`` without reduction (input for :func:`canonicalize`)."""
    return RatFunc._raw(num, den, field)


def const_value(e) -> Fraction:
    """The rational value of a constant element."""
    while isinstance(e, RatFunc):
        if e.den.deg != 0 or e.num.deg > 0:
            raise TowerError("element is not constant")
        e = e.num.coeffs[0] if e.num else Fraction(0)
    return to_fraction(e)
