"""Random (integrand, integral) pairs that are elementary integrable by construction.

Three routes, all over a random log/exp tower:

* polynomial part: a random polynomial ``P`` in the top variable is
  differentiated, giving the pair ``(D(P), P)``;
* square-free rational part: a denominator is fixed as a product of coprime
  irreducible factors and every factor receives a constant residue, so the
  Rothstein-Trager resultant has constant roots by construction;
* non-square-free rational part: additionally a free numerator over the
  deflated denominator contributes a rational term ``s/h``.

A mixed pair is the sum of a polynomial pair and a rational pair.  Every
draw comes from an item RNG seeded by ``(master seed, item index)``.

The distributions favour small expressions: most coefficients are bare
rationals (``GenConfig.constant_bias``) and the number of factors, the
degrees and the shift shapes are weighted towards the simplest choices.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import isqrt

from .algebra import Poly, RatFunc, poly_gcd
from .expr import Expr, add, sub, to_expr
from .kernel import (
    LiouvilleForm,
    NotElementary,
    UnsupportedSplitting,
    constant_coefficient_check,
    integrate_rational,
    tr_resultant,
)
from .tower import EXP, LOG, Tower, TowerError, const_value

METHODS = ("poly", "sqfree", "hermite", "mixed")
EXTENSIONS = ("log", "exp", "random")
MAX_ATTEMPTS = 100
TINY_SIZE = 10
TINY_DROP = 0.75


class GenerationError(RuntimeError):
    """A configuration could not produce a valid draw."""


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    # None: the default thirds of poly, rational and mixed pairs
    method: str | None = None
    extension_kind: str = "random"
    tower_height: int = 1
    max_theta_degree: int = 4
    max_factor_count: int = 3
    coeff_bound: int = 20
    allow_negative_exp_powers: bool = True
    # None: on for log towers, off for exp towers
    arctan_factors: bool | None = None
    constant_bias: float = 0.6
    quadratic_prob: float = 0.2
    verify_forward: bool = True

    def validate(self) -> "GenConfig":
        if self.method is not None and self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.extension_kind not in EXTENSIONS:
            raise ValueError(f"unknown extension kind {self.extension_kind!r}")
        if self.tower_height not in (1, 2):
            raise ValueError("tower height must be 1 or 2")
        for name in ("max_theta_degree", "max_factor_count", "coeff_bound"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        for name in ("constant_bias", "quadratic_prob"):
            if not 0 <= getattr(self, name) <= 1:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.extension_kind == "exp" and self.arctan_factors:
            raise ValueError("arctan factors are only available for log towers")
        if self.method in ("hermite", "mixed", None) and self.max_theta_degree < 2:
            raise ValueError("hermite pairs need max_theta_degree >= 2")
        return self

    def use_arctan(self, kind: str) -> bool:
        if kind != LOG:
            return False
        return True if self.arctan_factors is None else self.arctan_factors


@dataclass
class IntegrablePair:
    integrand: Expr
    integral: Expr
    integrand_elem: RatFunc
    integral_form: LiouvilleForm
    tower: Tower
    method: str
    seed: int
    verified: bool = False
    meta: dict = field(default_factory=dict)


def item_seed(master: int, index: int) -> int:
    """Stable 64-bit seed for item ``index`` of a run seeded with ``master``."""
    h = hashlib.blake2b(f"{master}:{index}".encode(), digest_size=8)
    return int.from_bytes(h.digest(), "big")


# --------------------------------------------------------------------------
# random building blocks


def _weighted(rng: random.Random, weights: dict):
    keys = list(weights)
    return rng.choices(keys, weights=[weights[k] for k in keys])[0]


def _small_int(rng: random.Random, bound: int) -> int:
    # mostly single digits, occasionally up to the bound
    hi = bound if rng.random() < 0.1 else min(bound, 9)
    return rng.randint(1, hi)


def random_constant(rng: random.Random, bound: int, fractions: float = 0.15) -> Fraction:
    n = _small_int(rng, bound)
    d = _small_int(rng, min(bound, 9)) if rng.random() < fractions else 1
    c = Fraction(n, d)
    return -c if rng.random() < 0.4 else c


_BASE_SHAPES = {"cx": 4, "cx+d": 2, "c/x": 3, "c/(x+k)": 1, "cx^2": 1, "cx^2+d": 1, "cx+d/x": 1}


def random_base_coeff(rng: random.Random, tower: Tower, bound: int, constant_bias: float = 0.6) -> RatFunc:
    """A small element of Q(x); a bare rational with probability ``constant_bias``."""
    x = tower.x
    c = random_constant(rng, bound)
    if rng.random() < constant_bias:
        return tower.const(c)
    shape = _weighted(rng, _BASE_SHAPES)
    d = random_constant(rng, bound, 0)
    if shape == "cx":
        return x * c
    if shape == "cx+d":
        return x * c + d
    if shape == "c/x":
        return c / x
    if shape == "c/(x+k)":
        k = _small_int(rng, 5)
        return c / (x + rng.choice((k, -k)))
    if shape == "cx^2":
        return x * x * c
    if shape == "cx^2+d":
        return x * x * c + d
    return x * c + d / x


def random_coeff(rng: random.Random, tower: Tower, level: int, bound: int,
                 constant_bias: float = 0.6) -> RatFunc:
    """A small element of the field at ``level`` (a coefficient one level up)."""
    e = random_base_coeff(rng, tower, bound, constant_bias)
    if level >= 1 and rng.random() < 0.3:
        e = tower.lift(e, level) + tower.theta(level) * random_constant(rng, bound, 0)
    return tower.lift(e, level)


# (argument, weight); short arguments dominate since every occurrence of the
# extension variable repeats its argument in the rendered tree
def _log_args(tower: Tower, rng: random.Random, level: int) -> list:
    x = tower.x
    k = _small_int(rng, 5)
    if level >= 1:
        t = tower.theta(level)
        return [(t + k, 2), (t + x, 2), (t * x, 1), (t * (k + 1) + x, 1)]
    return [(x, 4), (x * (k + 1), 3), (x + k, 2), (x * (k + 1) + 1, 0.5), (1 / x, 1.5),
            (x * x + k, 0.7), (x * x + x * k, 0.3), ((x + k) / x, 0.3), (x ** 3 + k, 0.3)]


def _exp_args(tower: Tower, rng: random.Random, level: int) -> list:
    x = tower.x
    k = _small_int(rng, 5)
    if level >= 1:
        t = tower.theta(level)
        return [(t + x, 2), (t * x, 1), (t + x * x, 1)]
    return [(x, 4), (x * (k + 1), 3), (x * (k + 1) + 1, 1.5), (x * x, 1), (x + k, 1.5), (1 / x, 1),
            (x * x + x * k, 0.3), (x ** 3, 0.5)]


def random_tower(cfg: GenConfig, rng: random.Random) -> Tower:
    for _ in range(MAX_ATTEMPTS):
        tower = Tower()
        try:
            for level in range(cfg.tower_height):
                kind = cfg.extension_kind
                if kind == "random":
                    kind = rng.choice((LOG, EXP))
                pool = (_log_args if kind == LOG else _exp_args)(tower, rng, level)
                arg = rng.choices([a for a, _ in pool], weights=[w for _, w in pool])[0]
                tower = tower.with_extension(kind, arg)
            return tower
        except TowerError:
            continue
    raise GenerationError("could not draw a valid tower")


# --------------------------------------------------------------------------
# denominators


def _top_kind(tower: Tower) -> str:
    return tower.extensions[-1].kind if tower.extensions else LOG


def _shift_pool(tower: Tower, rng: random.Random) -> list:
    """Shifts ``p`` for linear factors ``t + p``; popped from the end."""
    x = tower.x
    ints = [tower.const(k) for k in (1, -1, 2, -2, 3, -3, 4, -4, 5, -5)]
    multiples = [x * k for k in (1, -1, 2, -2, 3)]
    offsets = [x + k for k in (1, -1, 2, -2, 3, -3)]
    for group in (ints, multiples, offsets):
        rng.shuffle(group)
    pool = []
    while ints or multiples or offsets:
        groups = [g for g in (ints, ints, ints, multiples, offsets) if g]
        pool.append(rng.choice(groups).pop())
    pool.reverse()
    return pool


_FACTOR_COUNTS = {1: 9, 2: 8, 3: 3, 4: 1}


def _factor_count(rng: random.Random, most: int) -> int:
    return _weighted(rng, {n: w for n, w in _FACTOR_COUNTS.items() if n <= most} or {1: 1})


def random_denominator(cfg: GenConfig, rng: random.Random, tower: Tower,
                       need_multiple: bool = False) -> tuple[list, Poly]:
    """Pairwise coprime monic factors ``[(f, m), ...]`` and their product ``b``.

    With ``need_multiple`` the first factor is repeated (multiplicity 2 or 3).
    """
    field_ = tower.top
    F = field_.base
    theta = Poly([F.zero, F.one], F)
    arctan = cfg.use_arctan(_top_kind(tower))
    budget = cfg.max_theta_degree
    n_factors = _factor_count(rng, cfg.max_factor_count)
    if need_multiple:
        # the repeated factor already doubles the size of the integrand
        n_factors = min(cfg.max_factor_count, _weighted(rng, {1: 3, 2: 2}))
    shifts = _shift_pool(tower, rng)
    radii = [Fraction(r) for r in (1, 2, 3)] + [Fraction(1, 2), Fraction(3, 2)]
    rng.shuffle(radii)
    x = tower.x
    quads = [x * k for k in (1, -1, 2, 3)] + [x * x + k for k in (1, 2, 4)]
    rng.shuffle(quads)
    factors = []
    for i in range(n_factors):
        mult = 1
        if need_multiple and i == 0:
            mult = 3 if budget >= 3 and rng.random() < 0.15 else 2
        elif need_multiple and rng.random() < 0.15:
            mult = 2
        if rng.random() < cfg.quadratic_prob and budget >= 2 * mult:
            if arctan:
                if not radii:
                    raise GenerationError("pool of quadratic factors exhausted")
                r = radii.pop()
                f = theta * theta + Poly([r * r], F)
            else:
                if not quads:
                    raise GenerationError("pool of quadratic factors exhausted")
                f = theta * theta + Poly([tower.lift(quads.pop(), F.level)], F)
        else:
            if not shifts:
                raise GenerationError("pool of linear factors exhausted")
            f = theta + Poly([tower.lift(shifts.pop(), F.level)], F)
        if f.deg * mult > budget:
            if need_multiple and i == 0:
                raise GenerationError("max_theta_degree too small for a repeated factor")
            continue
        budget -= f.deg * mult
        factors.append((f, mult))
    if not factors:
        raise GenerationError("max_theta_degree too small for a denominator")
    b = Poly.const(1, F)
    for f, m in factors:
        b = b * f ** m
    return factors, b


# --------------------------------------------------------------------------
# pairs


def _make_pair(integrand: RatFunc, form: LiouvilleForm, tower: Tower, method: str, seed: int,
               factors=(), integrand_expr: Expr | None = None, integral_expr: Expr | None = None,
               **meta) -> IntegrablePair:
    integrand = tower.lift(integrand)
    verified = form.derivative(tower) == integrand
    if integrand_expr is None:
        integrand_expr = to_expr(integrand, tower, factors)
    if integral_expr is None:
        integral_expr = to_expr(form, tower, factors)
    if factors:
        meta["factors"] = tuple(factors)
    return IntegrablePair(
        integrand=integrand_expr,
        integral=integral_expr,
        integrand_elem=integrand,
        integral_form=form,
        tower=tower,
        method=method,
        seed=seed,
        verified=verified,
        meta=meta,
    )


def build_poly_pair(tower: Tower, coeffs: dict, seed: int = 0) -> IntegrablePair:
    """The pair ``(D(P), P)`` for ``P = sum(coeffs[i] * t**i)`` in the top variable."""
    t = tower.theta() if tower.height else tower.x
    P = tower.top.zero
    for i, q in sorted(coeffs.items()):
        P = P + tower.lift(q) * t ** i
    return _make_pair(tower.derive(P), LiouvilleForm(P), tower, "poly", seed)


_POLY_DEGREES = {1: 4, 2: 4, 3: 1}
# the polynomial half of a mixed pair stays light
_MIXED_POLY_DEGREES = {1: 3, 2: 1}


def gen_poly_pair(cfg: GenConfig, rng: random.Random, tower: Tower | None = None,
                  seed: int = 0, degrees=None) -> IntegrablePair:
    tower = tower or random_tower(cfg, rng)
    level = tower.height - 1
    for _ in range(MAX_ATTEMPTS):
        top = min(cfg.max_theta_degree, _weighted(rng, degrees or _POLY_DEGREES))
        low = 0
        if _top_kind(tower) == EXP and cfg.allow_negative_exp_powers and rng.random() < 0.3:
            low = -_weighted(rng, {1: 3, 2: 1})
            if rng.random() < 0.5:
                top = 0
        coeffs = {}
        for i in range(low, top + 1):
            if i not in (low, top) and rng.random() < 0.5:
                continue
            coeffs[i] = random_coeff(rng, tower, level, cfg.coeff_bound, cfg.constant_bias)
        if top - low == 1 and tower.is_constant(coeffs[top]):
            # a*t + q has too little structure to be worth a record
            coeffs[top] = random_coeff(rng, tower, level, cfg.coeff_bound, 0.0)
        if any(i != 0 for i in coeffs):
            pair = build_poly_pair(tower, coeffs, seed)
            if pair.integrand_elem:
                return pair
    raise GenerationError("could not draw a polynomial pair")


def _rational_sqrt(e) -> Fraction:
    q = const_value(e)
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n) if n >= 0 else -1, isqrt(d)
    if rn < 0 or rn * rn != n or rd * rd != d:
        raise ValueError("not a rational square")
    return Fraction(rn, rd)


def _arctan_radius(f: Poly) -> Fraction | None:
    """``r`` when ``f = t**2 + r**2`` with rational ``r > 0``."""
    if f.deg != 2 or f.coeffs[1] or not f.dom.is_constant(f.coeffs[0]):
        return None
    try:
        r = _rational_sqrt(f.coeffs[0])
    except ValueError:
        return None
    return r if r > 0 else None


def _residue_terms(tower: Tower, factors: list, residues: dict, arctan_terms: dict) -> LiouvilleForm:
    """Log/arctan part planting constant residues on square-free factors.

    ``residues[i]`` is the constant in front of ``log(f_i)``; for a factor
    ``t**2 + r**2`` an entry ``arctan_terms[i] = delta`` adds
    ``delta * arctan(t / r)``.  Over an exp tower the ``deg(f)*D(u)`` part of
    ``D(log f)`` is cancelled in ``v0`` so the integrand stays proper.
    """
    field_ = tower.top
    t = field_.gen
    logs, arcs = [], []
    weight = Fraction(0)
    for i, (f, _m) in enumerate(factors):
        c = Fraction(residues.get(i, 0))
        if c:
            logs.append((c, field_.frac(f)))
            weight += c * f.deg
        d = Fraction(arctan_terms.get(i, 0))
        if d:
            r = _arctan_radius(f)
            if r is None:
                raise ValueError("arctan term on a factor that is not t**2 + r**2")
            arcs.append((d, t / r))
    v0 = field_.zero
    if tower.height and _top_kind(tower) == EXP and weight:
        v0 = -tower.lift(tower.extensions[-1].argument) * weight
    return LiouvilleForm(v0, tuple(logs), tuple(arcs))


def build_sqfree_pair(tower: Tower, factors: list, residues: dict, arctan_terms: dict | None = None,
                      seed: int = 0, check_tr: bool = True) -> IntegrablePair:
    """Pair with square-free denominator ``prod(f)`` and planted residues."""
    form = _residue_terms(tower, factors, residues, arctan_terms or {})
    integrand = form.derivative(tower)
    pair = _make_pair(integrand, form, tower, "sqfree", seed, factors=[f for f, _ in factors])
    if check_tr and integrand:
        ok = constant_coefficient_check(tr_resultant(integrand.num, integrand.den, tower))
        pair.meta["tr_constant"] = ok
        pair.verified = pair.verified and ok
    return pair


def _draw_residues(rng: random.Random, cfg: GenConfig, factors: list, arctan: bool,
                   allow_zero=()) -> tuple[dict, dict]:
    residues, arcs = {}, {}
    for i, (f, _m) in enumerate(factors):
        if arctan and _arctan_radius(f) is not None:
            residues[i] = random_constant(rng, cfg.coeff_bound) if rng.random() < 0.5 else 0
            arcs[i] = random_constant(rng, cfg.coeff_bound)
        elif i in allow_zero and rng.random() < 0.5:
            continue
        else:
            residues[i] = random_constant(rng, cfg.coeff_bound)
    return residues, arcs


def gen_sqfree_pair(cfg: GenConfig, rng: random.Random, tower: Tower | None = None,
                    seed: int = 0) -> IntegrablePair:
    tower = tower or random_tower(cfg, rng)
    factors, _b = random_denominator(cfg, rng, tower)
    factors = [(f, 1) for f, _ in factors]
    residues, arcs = _draw_residues(rng, cfg, factors, cfg.use_arctan(_top_kind(tower)))
    return build_sqfree_pair(tower, factors, residues, arcs, seed=seed)


def build_hermite_pair(tower: Tower, factors: list, s, residues: dict, arctan_terms: dict | None = None,
                       seed: int = 0, forward: bool = True) -> IntegrablePair:
    """Pair with integral ``s/h + residue terms`` where ``h = prod(f**(m-1))``.

    ``s`` is a polynomial in the top variable, or any top-level element
    (then ``s/h`` is taken literally).  With ``forward`` the integrand is
    integrated back by Hermite reduction plus Rothstein-Trager and the result
    is compared exactly.
    """
    field_ = tower.top
    F = field_.base
    h = Poly.const(1, F)
    for f, m in factors:
        h = h * f ** (m - 1)
    if isinstance(s, Poly):
        rational = field_.frac(s, h)
    else:
        rational = tower.lift(s) / field_.frac(h)
    form = _residue_terms(tower, factors, residues, arctan_terms or {})
    form = LiouvilleForm(form.v0 + rational, form.logs, form.arctans)
    integrand = form.derivative(tower)
    pair = _make_pair(integrand, form, tower, "hermite", seed, factors=[f for f, _ in factors])
    if forward:
        try:
            back = integrate_rational(integrand, tower)
        except (UnsupportedSplitting, NotElementary) as exc:
            pair.meta["forward"] = f"unsupported: {exc}"
        else:
            if back.derivative(tower) != integrand:
                raise RuntimeError("forward integration disagrees with generated pair")
            pair.meta["forward"] = "ok"
            pair.meta["forward_form"] = back
    return pair


def gen_hermite_pair(cfg: GenConfig, rng: random.Random, tower: Tower | None = None,
                     seed: int = 0) -> IntegrablePair:
    tower = tower or random_tower(cfg, rng)
    F = tower.top.base
    level = tower.height - 1
    for _ in range(MAX_ATTEMPTS):
        factors, _b = random_denominator(cfg, rng, tower, need_multiple=True)
        h = Poly.const(1, F)
        for f, m in factors:
            h = h * f ** (m - 1)
        coeffs = []
        for i in range(h.deg):
            if i and rng.random() < 0.6:
                coeffs.append(F.zero)
            else:
                bias = max(cfg.constant_bias, 0.85)
                coeffs.append(random_coeff(rng, tower, level, cfg.coeff_bound, bias))
        s = Poly(coeffs, F)
        if not s or poly_gcd(s, h).deg > 0:
            continue
        multi = {i for i, (_f, m) in enumerate(factors) if m > 1}
        residues, arcs = _draw_residues(rng, cfg, factors, cfg.use_arctan(_top_kind(tower)), multi)
        return build_hermite_pair(tower, factors, s, residues, arcs, seed=seed,
                                  forward=cfg.verify_forward)
    raise GenerationError("could not draw a Hermite pair")


def _join(a: Expr, b: Expr) -> Expr:
    if b.op == "neg":
        return sub(a, b.args[0])
    return add(a, b)


def _shorter(a: Expr, b: Expr) -> Expr:
    return b if b.size() < a.size() else a


def combine_pairs(a: IntegrablePair, b: IntegrablePair, method: str = "mixed") -> IntegrablePair:
    """Sum of two pairs over the same tower; the trees are joined, not re-expanded."""
    if a.tower is not b.tower and a.tower.describe() != b.tower.describe():
        raise ValueError("pairs live in different towers")
    if not a.integrand_elem:
        return replace(b, method=method)
    if not b.integrand_elem:
        return replace(a, method=method)
    tower = a.tower
    integrand = tower.lift(a.integrand_elem) + tower.lift(b.integrand_elem)
    form = a.integral_form + b.integral_form
    factors = a.meta.get("factors", ()) + b.meta.get("factors", ())
    # whichever is shorter: the two trees side by side, or one rendering of the sum
    integrand_expr = _shorter(_join(a.integrand, b.integrand), to_expr(integrand, tower, factors))
    integral_expr = _shorter(_join(a.integral, b.integral), to_expr(form, tower, factors))
    return _make_pair(integrand, form, tower, method, a.seed, factors=factors,
                      integrand_expr=integrand_expr, integral_expr=integral_expr,
                      parts=(a.method, b.method))


def gen_mixed_pair(cfg: GenConfig, rng: random.Random, tower: Tower | None = None,
                   seed: int = 0) -> IntegrablePair:
    tower = tower or random_tower(cfg, rng)
    poly = gen_poly_pair(cfg, rng, tower, seed, _MIXED_POLY_DEGREES)
    make_rational = gen_hermite_pair if rng.random() < 0.5 else gen_sqfree_pair
    return combine_pairs(poly, make_rational(cfg, rng, tower, seed))


GENERATORS = {
    "poly": gen_poly_pair,
    "sqfree": gen_sqfree_pair,
    "hermite": gen_hermite_pair,
    "mixed": gen_mixed_pair,
}


def default_method(index: int, rng: random.Random) -> str:
    """Thirds: polynomial, rational (square-free or Hermite), mixed."""
    slot = index % 3
    if slot == 0:
        return "poly"
    if slot == 1:
        return rng.choice(("sqfree", "hermite"))
    return "mixed"


def generate_item(cfg: GenConfig, index: int, method: str | None = None) -> IntegrablePair:
    """Item ``index`` of the run described by ``cfg``; independent of other items."""
    seed = item_seed(cfg.seed, index)
    rng = random.Random(seed)
    method = method or cfg.method or default_method(index, rng)
    for _ in range(MAX_ATTEMPTS):
        try:
            pair = GENERATORS[method](cfg, rng, seed=seed)
        except GenerationError:
            continue
        # very small integrands repeat across a run; keep only some of them
        if pair.integrand.size() <= TINY_SIZE and rng.random() < TINY_DROP:
            continue
        return pair
    raise GenerationError(f"item {index}: too many rejected draws")
