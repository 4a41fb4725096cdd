from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from integen.algebra import (
    QQ,
    Poly,
    RatFuncField,
    partial_fractions,
    poly_divmod,
    poly_gcd,
    resultant,
    solve_diophantine,
    squarefree_factorize,
    sylvester_resultant,
    to_fraction,
)
from integen.tower import QX

t = Poly([0, 1])  # a variable over Q
QXT = RatFuncField(QX, "t")  # Q(x)(t), no derivation needed here
X = QX.gen


def T(*coeffs):
    """Polynomial in t over Q(x), lowest degree first."""
    return Poly([QX.convert(c) for c in coeffs], QX)


rationals = st.fractions(min_value=-9, max_value=9, max_denominator=5)


def polys(max_deg=6, min_deg=0):
    return st.lists(rationals, min_size=min_deg + 1, max_size=max_deg + 1).map(Poly)


nonzero = polys().filter(bool)


# -- division ------------------------------------------------------------


def test_divmod_examples():
    q, r = poly_divmod(t * t + 1, t - 1)
    assert q == t + 1 and r == 2
    q, r = poly_divmod(t ** 3 + t, t * t + 1)
    assert q == t and not r
    g = Poly([3, 0, 5])
    assert poly_divmod(g, Poly.const(1)) == (g, Poly())


def test_divmod_by_zero():
    with pytest.raises(ZeroDivisionError):
        poly_divmod(t, Poly())


@given(polys(), nonzero)
def test_divmod_reconstructs(g, b):
    q, r = poly_divmod(g, b)
    assert q * b + r == g
    assert r.deg < b.deg


# -- gcd -------------------------------------------------------------------


def test_gcd_examples():
    assert poly_gcd(t * t - 1, t - 1) == t - 1
    a = Poly([2, 4])
    assert poly_gcd(a, Poly()) == Poly([Fraction(1, 2), 1])
    with pytest.raises(ValueError):
        poly_gcd(Poly(), Poly())


def test_gcd_over_rational_functions():
    # b = (t+1)(t+x)^2 over Q(x); gcd(b, db/dt) = t + x
    b = T(1, 1) * T(X, 1) ** 2
    assert poly_gcd(b, b.diff()) == T(X, 1)


@given(nonzero, nonzero, nonzero)
def test_gcd_divides_and_is_greatest(a, b, c):
    g = poly_gcd(a * c, b * c)
    assert not poly_divmod(a * c, g)[1]
    assert not poly_divmod(b * c, g)[1]
    assert not poly_divmod(g, c.monic())[1]
    assert g.lc == 1


# -- diophantine ------------------------------------------------------------


def test_diophantine_examples():
    s, tau = solve_diophantine(Poly.const(1), t, t + 2)
    assert (s, tau) == (Poly.const(2), Poly.const(1))
    s, tau = solve_diophantine(t + 1, t, Poly.const(1))
    assert (s, tau) == (Poly.const(1), Poly.const(-1))
    xt = T(0, X)
    s, tau = solve_diophantine(xt, xt, xt)
    assert s == T(1) and not tau


def test_diophantine_unsolvable():
    with pytest.raises(ValueError):
        solve_diophantine(t * t, t, Poly.const(1))


@given(nonzero, nonzero, polys())
def test_diophantine_solution(a, b, c):
    g = poly_gcd(a, b)
    c = c * g
    s, tau = solve_diophantine(a, b, c)
    assert s * a + tau * b == c
    if c and b.deg > 0:
        assert s.deg < b.deg


# -- square-free factorization ---------------------------------------------------


def test_squarefree_example_hermite_denominator():
    # t^3 + (2x+1) t^2 + (x^2+2x) t + x^2 = (t+1)(t+x)^2
    b = T(X * X, X * X + 2 * X, 2 * X + 1, 1)
    sff = squarefree_factorize(b)
    assert set(sff.factors) == {(T(1, 1), 1), (T(X, 1), 2)}


def test_squarefree_example_already_squarefree():
    b = T(-3, -2, -2, -2, 1)
    sff = squarefree_factorize(b)
    assert sff.factors == ((b, 1),)


def test_squarefree_power():
    sff = squarefree_factorize(t * t)
    assert sff.factors == ((t, 2),)
    with pytest.raises(ValueError):
        squarefree_factorize(Poly())


@settings(max_examples=200)
@given(st.lists(st.tuples(polys(3, 1).filter(lambda p: p.deg >= 1), st.integers(1, 3)),
                min_size=1, max_size=3), rationals.filter(bool))
def test_yun_reconstruction(parts, unit):
    b = Poly.const(unit)
    for f, m in parts:
        b = b * f ** m
    sff = squarefree_factorize(b)
    assert sff.expand() == b
    fs = [f for f, _ in sff.factors]
    for i, f in enumerate(fs):
        assert poly_gcd(f, f.diff()).deg == 0
        assert f.lc == 1
        for g in fs[i + 1:]:
            assert poly_gcd(f, g).deg == 0


# -- resultants ---------------------------------------------------------------


def test_resultant_examples():
    assert resultant(t - 2, t - 5) == -3
    assert resultant(t, t * t - 1) == -1
    assert resultant(t, t - 1) * resultant(t, t + 1) == -1
    A = Poly([1, 2, 3])
    assert resultant(A, Poly.const(5)) == 25


def test_resultant_zero_input():
    with pytest.raises(ValueError):
        resultant(Poly(), t)


@settings(max_examples=200)
@given(polys(5).filter(bool), polys(5).filter(bool))
def test_prs_matches_sylvester(a, b):
    assert resultant(a, b) == sylvester_resultant(a, b)


@settings(max_examples=200)
@given(polys(4).filter(bool), polys(3).filter(bool), polys(3).filter(bool))
def test_resultant_multiplicative(a, b, c):
    assert resultant(a, b * c) == resultant(a, b) * resultant(a, c)


@given(polys(4).filter(bool), polys(4).filter(bool))
def test_resultant_antisymmetry(a, b):
    sign = -1 if (a.deg * b.deg) % 2 else 1
    assert resultant(a, b) == sign * resultant(b, a)


def test_resultant_over_rational_functions():
    a, b = T(X, 1), T(-X, 0, 1)  # t + x, t^2 - x
    assert resultant(a, b) == sylvester_resultant(a, b) == X * X - X


# -- partial fractions -------------------------------------------------------


def test_partial_fractions_two_linears():
    pf = partial_fractions(Poly.const(1), [(t + 1, 1), (t - 3, 1)])
    terms = {f: r for r, f, _k in pf.terms}
    assert terms[t + 1] == Fraction(-1, 4)
    assert terms[t - 3] == Fraction(1, 4)
    assert not pf.poly_part


def test_partial_fractions_shape_of_mixed_denominator():
    factors = [(t + 1, 1), (t - 3, 1), (t * t + 1, 1)]
    R = Poly([5, -3, -3, 3])
    pf = partial_fractions(R, factors)
    assert [(f, k) for _r, f, k in pf.terms] == [(f, 1) for f, _ in factors]
    assert [r.deg < f.deg for r, f, _k in pf.terms] == [True] * 3
    num, den = pf.recombine()
    assert num * (t + 1) * (t - 3) * (t * t + 1) == R * den


def test_partial_fractions_single_factor():
    R = Poly([1, 2])
    pf = partial_fractions(R, [(t * t + 1, 1)])
    assert pf.terms == ((R, t * t + 1, 1),)


def test_partial_fractions_rejects_common_factor():
    with pytest.raises(ValueError):
        partial_fractions(Poly.const(1), [(t, 1), (t * (t + 1), 1)])


@st.composite
def coprime_factors(draw):
    roots = draw(st.lists(st.integers(-6, 6), min_size=1, max_size=3, unique=True))
    out = [(t - r, draw(st.integers(1, 3))) for r in roots]
    if draw(st.booleans()):
        out.append((t * t + draw(st.integers(1, 5)), draw(st.integers(1, 2))))
    return out


@settings(max_examples=200)
@given(coprime_factors(), polys(8))
def test_partial_fractions_recombine(factors, R):
    den = Poly.const(1)
    for f, m in factors:
        den = den * f ** m
    R = poly_divmod(R, den)[1] if R.deg >= den.deg else R
    pf = partial_fractions(R, factors)
    num, d = pf.recombine()
    assert num * den == R * d
    for r, f, _k in pf.terms:
        assert r.deg < f.deg


def test_rationals_are_exact():
    assert to_fraction(QQ.convert(Fraction(6, 4))) == Fraction(3, 2)
    assert QQ.convert(Fraction(-2, 6)) * 3 == -1
