from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from integen.dataset import pair_record
from integen.expr import parse_infix, to_elem, to_liouville
from integen.generator import GenConfig, generate_item
from integen.kernel import LiouvilleForm
from integen.tower import EXP, LOG, QX, Tower
from integen.verifier import MalformedIntegral, check_item, verify_dataset, verify_pair, verify_record

x = QX.gen


def test_log_pair_passes(log_x):
    report = verify_pair(log_x.lift(1 / x), LiouvilleForm(log_x.theta()), log_x)
    assert report.passed and report.residual is None


def test_wrong_pair_reports_residual(base):
    report = verify_pair(base.x, LiouvilleForm(base.x), base)
    assert not report.passed
    assert report.residual == base.x - 1


def test_printed_worked_pair_passes(log_x):
    integrand = to_elem(parse_infix(
        "2/(x*(ln(x)+1)) + (-10*x^4+5*x^3+60*x^2+61*x+20)/(5*x*(1+x)^2*(ln(x)+x))"
        " + (x^2+1/(5*x))/(ln(x)+x)^2"), log_x)
    integral = to_liouville(parse_infix(
        "-(5*x^3+1)/(5*(1+x)*(ln(x)+x)) + 2*ln(ln(x)+1) + 4*ln(ln(x)+x)"), log_x)
    assert verify_pair(integrand, integral, log_x).passed


def test_log_of_zero_is_malformed(log_x):
    with pytest.raises(MalformedIntegral):
        verify_pair(log_x.top.zero, LiouvilleForm(log_x.top.zero, ((1, log_x.top.zero),)), log_x)


# -- batches ------------------------------------------------------------------------


def records(n, seed=4):
    cfg = GenConfig(seed=seed)
    return [pair_record(generate_item(cfg, i), i) for i in range(n)]


def test_empty_dataset():
    s = verify_dataset([])
    assert (s.passed, s.failed) == (0, 0) and s.ok
    assert str(s) == "0 pass, 0 fail"


def test_valid_records_pass():
    s = verify_dataset(records(3))
    assert (s.passed, s.failed) == (3, 0)


def test_valid_pairs_pass():
    cfg = GenConfig(seed=4)
    s = verify_dataset([generate_item(cfg, i) for i in range(3)])
    assert (s.passed, s.failed) == (3, 0)


def test_corrupted_record_is_counted():
    good = records(2)
    bad = dict(good[0], integrand_prefix=good[0]["integrand_prefix"][:-1])
    s = verify_dataset(good + [bad])
    assert (s.passed, s.failed) == (2, 1)
    index, reason = s.failures[0]
    assert index == 2 and "unreadable record" in reason


def test_unreadable_line_keeps_its_reason():
    s = verify_dataset(records(1) + ["invalid JSON: Expecting value"])
    assert (s.passed, s.failed) == (1, 1)
    assert s.failures == [(1, "invalid JSON: Expecting value")]


def test_tampered_integral_fails():
    rec = records(1)[0]
    rec["integral_prefix"] = ["add", "x"] + rec["integral_prefix"]
    report = verify_record(rec)
    assert not report.passed and report.reason == "derivative differs from integrand"


def test_infix_must_match_prefix():
    rec = records(1)[0]
    rec["integrand_infix"] = "x + 12345"
    report = verify_record(rec)
    assert not report.passed and "differ" in report.reason


def test_missing_fields():
    report = check_item({"id": 0})
    assert not report.passed and report.reason.startswith("missing fields")


# -- random Liouville forms -------------------------------------------------------------

TOWERS = [Tower([(LOG, x)]), Tower([(EXP, x)]), Tower([(LOG, 1 / x)]), Tower([(EXP, 2 * x + 1)]),
          Tower([(LOG, x + 2), (EXP, x)])]
SMALL = st.integers(-4, 4)


@st.composite
def elements(draw, tower, nonzero=False):
    th, X = tower.theta(), tower.x
    e = tower.top.zero
    for i in range(draw(st.integers(0, 2)) + 1):
        c = draw(SMALL) + draw(SMALL) * X + Fraction(draw(SMALL), draw(st.integers(1, 3))) / (X + 5)
        e = e + c * th ** i
    if draw(st.booleans()):
        e = e / (th + draw(st.integers(1, 4)) * X + draw(SMALL))
    if nonzero and not e:
        e = th + 1
    return e


@st.composite
def liouville_forms(draw):
    tower = draw(st.sampled_from(TOWERS))
    v0 = draw(elements(tower))
    logs = tuple((Fraction(draw(SMALL.filter(bool)), draw(st.integers(1, 3))), draw(elements(tower, True)))
                 for _ in range(draw(st.integers(0, 2))))
    arcs = tuple((Fraction(draw(SMALL.filter(bool))), draw(elements(tower)))
                 for _ in range(draw(st.integers(0, 1))))
    return tower, LiouvilleForm(v0, logs, arcs)


@settings(max_examples=200)
@given(liouville_forms(), st.fractions(-10, 10, max_denominator=7))
def test_oracle_accepts_its_own_derivatives(case, shift):
    tower, form = case
    f = form.derivative(tower)
    assert verify_pair(f, form, tower).passed
    assert verify_pair(f, form.shifted(shift), tower).passed
    report = verify_pair(f + tower.x, form, tower)
    assert not report.passed and report.residual == tower.x
