from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from integen.algebra import Poly, squarefree_factorize
from integen.expr import infix, to_expr
from integen.kernel import (
    LiouvilleForm,
    NotElementary,
    TRResultant,
    UnsupportedSplitting,
    constant_coefficient_check,
    hermite_reduce,
    integrate_rational,
    tr_integrate,
    tr_resultant,
)
from integen.tower import EXP, LOG, QX, Tower

x = QX.gen


def lin(tower, p):
    """``t + p`` in the top variable."""
    F = tower.top.base
    return Poly([F.convert(p), F.one], F)


def as_poly(tower, e):
    """An element that is polynomial in the top variable, as a Poly."""
    e = tower.lift(e)
    assert e.den.deg == 0
    return e.num.scale(tower.top.base.one / e.den.coeffs[0])


# -- Hermite reduction ----------------------------------------------------------


def test_hermite_power_rule(base):
    R, b = Poly([1]), Poly([0, 0, 1])  # 1/x^2
    steps = hermite_reduce(R, b, base)
    assert len(steps) == 1
    assert steps[0].extracted == base.lift(-1 / x)
    assert not steps[0].remaining_num


def test_hermite_square_free_input_is_untouched(log_x):
    b = lin(log_x, 1) * lin(log_x, x)
    assert hermite_reduce(Poly.const(1, b.dom), b, log_x) == []


def test_hermite_worked_example(log_x):
    th, X = log_x.theta(), log_x.x
    c = X ** 2 + 1 / (5 * X)
    bx = (-10 * X ** 4 + 5 * X ** 3 + 60 * X ** 2 + 61 * X + 20) / (5 * X * (1 + X) ** 2)
    f = 2 / (X * (th + 1)) + bx / (th + X) + c / (th + X) ** 2
    steps = hermite_reduce(f.num, f.den, log_x)
    assert len(steps) == 1
    assert steps[0].extracted == -(5 * X ** 3 + 1) / (5 * (1 + X) * (th + X))
    assert steps[0].remaining_den.monic() == lin(log_x, 1) * lin(log_x, x)


def test_hermite_rejects_improper_input(log_x):
    b = lin(log_x, 1)
    with pytest.raises(ValueError):
        hermite_reduce(b * b, b, log_x)


HERMITE_TOWERS = [Tower(), Tower([(LOG, x)]), Tower([(EXP, x)]), Tower([(LOG, x + 2)])]
SHIFTS = [-3, -1, 1, 2, 5, x, 2 * x, x + 1, -x, 1 / x]


@st.composite
def non_squarefree(draw):
    tower = draw(st.sampled_from(HERMITE_TOWERS))
    shifts = draw(st.lists(st.sampled_from(range(len(SHIFTS))), min_size=1, max_size=3, unique=True))
    mults = [draw(st.integers(1, 3)) for _ in shifts]
    if max(mults) < 2:
        mults[0] = 2
    F = tower.top.base
    b = Poly.const(1, F)
    for i, m in zip(shifts, mults):
        p = SHIFTS[i]
        if tower.height == 0:
            p = draw(st.integers(-4, 4)) if not isinstance(p, int) else p
        b = b * lin(tower, p) ** m
    b = b.monic()
    coeffs = [F.convert(draw(st.integers(-5, 5))) * (x if draw(st.booleans()) and tower.height else 1)
              for _ in range(b.deg)]
    R = Poly(coeffs, F)
    if not R:
        R = Poly.const(1, F)
    return tower, R, b


@settings(max_examples=200)
@given(non_squarefree())
def test_hermite_identity(case):
    tower, R, b = case
    field = tower.top
    current = field.frac(R, b)
    top_mult = max(m for _, m in squarefree_factorize(b).factors)
    steps = hermite_reduce(R, b, tower)
    assert steps, "a non-square-free denominator needs at least one step"
    for step in steps:
        remaining = field.frac(step.remaining_num, step.remaining_den)
        assert tower.derive(step.extracted) + remaining == current
        mult = max(m for _, m in squarefree_factorize(step.remaining_den).factors)
        assert mult < top_mult
        top_mult = mult
        current = remaining
    assert top_mult == 1


# -- TR-resultant ----------------------------------------------------------------


def test_tr_resultant_base_field(base):
    # res(1 - z*2x, x^2 - 2) = 1 - 8z^2, checked against sympy
    r = tr_resultant(Poly([1]), Poly([-2, 0, 1]), base)
    assert r.poly_in_z == Poly([1, 0, -8])
    assert constant_coefficient_check(r)


def test_tr_resultant_of_logarithmic_derivative(log_x):
    b = lin(log_x, 1) * lin(log_x, x) * lin(log_x, -3)
    Db = log_x.top.derive_poly(b)
    r = tr_resultant(Db, b, log_x).poly_in_z.monic()
    assert r == Poly([-1, 3, -3, 1], r.dom)  # (z - 1)^3


def test_tr_resultant_cubic_example(log_x):
    th, X = log_x.theta(), log_x.x
    f = (3 * th ** 2 + X) / (X * (th ** 3 + X))
    r = tr_resultant(f.num, f.den, log_x)
    assert r.degree == 3
    # a unit times (z - 1)^3, as sympy also finds
    assert r.poly_in_z.monic() == Poly([-1, 3, -3, 1], r.poly_in_z.dom)
    assert not constant_coefficient_check(TRResultant(r.poly_in_z * Poly([1 / x, 1], r.poly_in_z.dom)))
    assert constant_coefficient_check(r)


def test_tr_resultant_requires_square_free(log_x):
    b = lin(log_x, 1) ** 2
    with pytest.raises(ValueError):
        tr_resultant(Poly.const(1, b.dom), b, log_x)


def test_constant_check_examples(base):
    F = QX
    assert not constant_coefficient_check(TRResultant(Poly([1 / x, F.zero, F.one], F)))
    unit = -x ** 3 - 27 * x ** 2
    cube = Poly([-1, 3, -3, 1], F) * Poly.const(unit, F)
    assert constant_coefficient_check(TRResultant(cube))
    with pytest.raises(ValueError):
        constant_coefficient_check(TRResultant(Poly([], F)))


@settings(max_examples=60)
@given(non_squarefree())
def test_tr_resultant_degree(case):
    tower, R, b = case
    sf = squarefree_factorize(b).squarefree_part()
    if tower.height and tower.extensions[-1].kind == EXP and not sf.coeffs[0]:
        return
    r = tr_resultant(Poly.const(1, sf.dom), sf, tower)
    assert r.degree == sf.deg


# -- forward integration -----------------------------------------------------------


def test_tr_integrate_single_log(log_x):
    th, X = log_x.theta(), log_x.x
    f = 2 / (X * (th + 1))
    form = tr_integrate(f.num, f.den, log_x)
    assert form.logs == ((2, th + 1),) and not form.arctans
    assert infix(to_expr(form, log_x)) == "2*ln(ln(x) + 1)"


def test_tr_integrate_arctan(log_x):
    th, X = log_x.theta(), log_x.x
    f = 1 / (X * (th ** 2 + 1))
    form = tr_integrate(f.num, f.den, log_x)
    assert not form.logs
    assert infix(to_expr(form, log_x)) == "arctan(ln(x))"
    assert form.derivative(log_x) == f


def test_tr_integrate_family_with_unit_constants(log_x):
    th, X = log_x.theta(), log_x.x
    f = 1 / (X * (th + 1)) + 1 / (X * (th - 3)) + (th + 1) / (X * (th ** 2 + 1))
    assert f.den == as_poly(log_x, th ** 4 - 2 * th ** 3 - 2 * th ** 2 - 2 * th - 3)
    form = tr_integrate(f.num, f.den, log_x)
    assert form.derivative(log_x) == f
    assert sorted(infix(to_expr(LiouvilleForm(log_x.top.zero, (t,)), log_x)) for t in form.logs) == [
        "ln(ln(x) + 1)", "ln(ln(x) - 3)", "ln(ln(x)^2 + 1)/2"]
    assert [infix(to_expr(LiouvilleForm(log_x.top.zero, (), (t,)), log_x)) for t in form.arctans] == [
        "arctan(ln(x))"]


def test_tr_integrate_irrational_residues(base):
    with pytest.raises(UnsupportedSplitting):
        tr_integrate(Poly([1]), Poly([-2, 0, 1]), base)


def test_tr_integrate_not_elementary(log_x):
    # 1/log(x) has the non-constant residue x
    th = log_x.theta()
    f = 1 / th
    with pytest.raises(NotElementary):
        tr_integrate(f.num, f.den, log_x)


def test_integrate_rational_worked_example(log_x):
    th, X = log_x.theta(), log_x.x
    F = -(5 * X ** 3 + 1) / (5 * (1 + X) * (th + X))
    f = log_x.derive(F) + 2 * log_x.derive(th + 1) / (th + 1) + 4 * log_x.derive(th + X) / (th + X)
    form = integrate_rational(f, log_x)
    assert form.v0 == F
    assert sorted((Fraction(c), v) for c, v in form.logs) == [(2, th + 1), (4, th + X)]


def test_integrate_rational_exp_tower(exp_x):
    # 3*D(log(t + 1)) - 3 = -3/(t + 1) is the proper part
    th = exp_x.theta()
    f = -3 / (th + 1)
    form = integrate_rational(f, exp_x)
    assert form.derivative(exp_x) == f
    assert form.logs == ((3, th + 1),) and form.v0 == -3 * exp_x.x


def test_liouville_form_shift(log_x):
    form = LiouvilleForm(log_x.x, ((1, log_x.theta()),))
    assert form.shifted(Fraction(7, 3)).derivative(log_x) == form.derivative(log_x)
