"""Exact verification of integrand/integral pairs.

A pair passes when ``D(integral) - integrand`` is the zero element of the
tower.  Elements are canonical, so this is a structural test and never a
numeric one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .dataset import RECORD_FIELDS, from_prefix
from .expr import Expr, ParseError, parse_infix, to_elem, to_liouville
from .kernel import LiouvilleForm
from .tower import Tower, TowerError


class MalformedIntegral(ValueError):
    """The integral is not a valid Liouville form (e.g. ``log(0)``)."""


@dataclass(frozen=True)
class VerifyReport:
    passed: bool
    residual: object = None
    reason: str = ""


def verify_pair(integrand, integral: LiouvilleForm, tower: Tower) -> VerifyReport:
    """Compare ``D(integral)`` with ``integrand`` exactly.

    A failing report carries ``integrand - D(integral)`` as its residual.
    """
    for _c, v in integral.logs:
        if not tower.lift(v):
            raise MalformedIntegral("logarithm of zero in integral")
    residual = tower.lift(integrand) - integral.derivative(tower)
    if residual:
        return VerifyReport(False, residual, "derivative differs from integrand")
    return VerifyReport(True)


def verify_trees(integrand: Expr, integral: Expr, tower: Tower) -> VerifyReport:
    """Verify emitted trees by reading them back into the tower."""
    f = to_elem(integrand, tower)
    form = to_liouville(integral, tower)
    return verify_pair(f, form, tower)


def verify_record(record: dict) -> VerifyReport:
    """Verify one JSON record from its tower description and prefix tokens.

    The infix integrand must name the same element as the prefix one.
    """
    missing = [k for k in RECORD_FIELDS if k not in record]
    if missing:
        return VerifyReport(False, reason=f"missing fields: {', '.join(missing)}")
    try:
        tower = Tower.from_description(record["tower"])
        integrand = from_prefix(record["integrand_prefix"])
        integral = from_prefix(record["integral_prefix"])
        report = verify_trees(integrand, integral, tower)
        if report.passed:
            shown = to_elem(parse_infix(record["integrand_infix"]), tower)
            if tower.lift(shown) != tower.lift(to_elem(integrand, tower)):
                return VerifyReport(False, reason="infix and prefix integrands differ")
            to_liouville(parse_infix(record["integral_infix"]), tower)
        return report
    except (ParseError, TowerError, MalformedIntegral, TypeError, ValueError) as exc:
        return VerifyReport(False, reason=f"unreadable record: {exc}")


@dataclass
class VerifySummary:
    passed: int = 0
    failed: int = 0
    failures: list = field(default_factory=list)  # (index, reason)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def __str__(self):
        return f"{self.passed} pass, {self.failed} fail"


def check_item(item) -> VerifyReport:
    """Verify a pair, a JSON record, or report an unreadable entry (a string)."""
    if isinstance(item, str):
        return VerifyReport(False, reason=item)
    if isinstance(item, dict):
        return verify_record(item)
    try:
        report = verify_pair(item.integrand_elem, item.integral_form, item.tower)
        if report.passed:
            report = verify_trees(item.integrand, item.integral, item.tower)
        return report
    except (AttributeError, TowerError, MalformedIntegral, ValueError) as exc:
        return VerifyReport(False, reason=f"unreadable record: {exc}")


def verify_dataset(records, mapper=map) -> VerifySummary:
    """Verify pairs or JSON records; the summary keeps input order.

    A plain string entry stands for a record that could not be read at all;
    it counts as a failure and the string is kept as the reason.  ``mapper``
    may be any order-preserving map, e.g. a process pool's.
    """
    summary = VerifySummary()
    for index, report in enumerate(mapper(check_item, list(records))):
        if report.passed:
            summary.passed += 1
        else:
            summary.failed += 1
            summary.failures.append((index, report.reason))
    return summary
