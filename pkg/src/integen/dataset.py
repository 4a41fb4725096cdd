"""Prefix tokens, CONST canonicalization, JSON Lines records and statistics.

Length of an expression is the number of prefix tokens of the emitted
(already canonical) tree; integers are single decimal tokens.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass

from .expr import BINARY, CONST, UNARY, Expr, ParseError, infix

LEAVES = ("x", "CONST")
RECORD_FIELDS = (
    "id",
    "method",
    "tower",
    "seed",
    "integrand_infix",
    "integral_infix",
    "integrand_prefix",
    "integral_prefix",
    "verified",
)


def to_prefix(e: Expr) -> list[str]:
    out = []
    stack = [e]
    while stack:
        node = stack.pop()
        if node.op == "int":
            out.append(str(node.value))
        else:
            out.append(node.op)
            stack.extend(reversed(node.args))
    return out


def _arity(tok: str) -> int:
    if tok in BINARY:
        return 2
    if tok in UNARY:
        return 1
    return 0


def _leaf(tok: str, pos: int) -> Expr:
    if tok in LEAVES:
        return Expr(tok)
    if tok.isdigit() and tok.isascii():
        return Expr("int", value=int(tok))
    raise ParseError(f"unknown token {tok!r}", pos)


def from_prefix(tokens) -> Expr:
    """Inverse of :func:`to_prefix`; positions in errors are token indices."""
    tokens = list(tokens)
    if not tokens:
        raise ParseError("empty token stream", 0)
    # (op, position, children so far) frames
    stack: list[tuple[str, int, list]] = []
    result = None
    for pos, tok in enumerate(tokens):
        if result is not None:
            raise ParseError("tokens after a complete expression", pos)
        n = _arity(tok)
        if n:
            stack.append((tok, pos, []))
            continue
        node = _leaf(tok, pos)
        while True:
            if not stack:
                result = node
                break
            op, _p, kids = stack[-1]
            kids.append(node)
            if len(kids) < _arity(op):
                break
            stack.pop()
            node = Expr(op, tuple(kids))
    if result is None:
        op, p, kids = stack[-1]
        raise ParseError(f"missing operand for {op!r} opened at token {p}", len(tokens))
    return result


def _is_constant_tree(e: Expr) -> bool:
    if e.op in ("int", "CONST"):
        return True
    if e.op in ("neg", "add", "sub", "mul", "div"):
        return all(_is_constant_tree(a) for a in e.args)
    return False


def const_canonicalize(e: Expr) -> Expr:
    """Replace numeric coefficients by ``CONST`` and forget signs.

    Maximal constant subtrees (``2``, ``-3``, ``5/7``) become one ``CONST``;
    pow exponents are kept.  Uniqueness is judged modulo constants *and*
    sign, so ``neg`` nodes are dropped and ``sub`` becomes ``add``.
    """
    if _is_constant_tree(e):
        return CONST
    if e.op == "pow":
        return Expr("pow", (const_canonicalize(e.args[0]), e.args[1]))
    if e.op == "neg":
        return const_canonicalize(e.args[0])
    args = tuple(const_canonicalize(a) for a in e.args)
    return Expr("add" if e.op == "sub" else e.op, args)


# --------------------------------------------------------------------------
# records


def pair_record(pair, index: int) -> dict:
    return {
        "id": index,
        "method": pair.method,
        "tower": pair.tower.describe(),
        "seed": pair.seed,
        "integrand_infix": infix(pair.integrand),
        "integral_infix": infix(pair.integral),
        "integrand_prefix": to_prefix(pair.integrand),
        "integral_prefix": to_prefix(pair.integral),
        "verified": bool(pair.verified),
    }


def dump_record(record: dict) -> str:
    return json.dumps({k: record[k] for k in RECORD_FIELDS}, ensure_ascii=False, separators=(", ", ": "))


def write_jsonl(records, stream) -> int:
    n = 0
    for r in records:
        stream.write(dump_record(r))
        stream.write("\n")
        n += 1
    return n


def read_jsonl(stream):
    """Yield ``(line_number, record_or_None, error_or_None)`` for every line."""
    for lineno, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            yield lineno, None, f"invalid JSON: {exc.msg}"
            continue
        if not isinstance(rec, dict):
            yield lineno, None, "record is not an object"
            continue
        missing = [k for k in RECORD_FIELDS if k not in rec]
        if missing:
            yield lineno, None, f"missing fields: {', '.join(missing)}"
            continue
        yield lineno, rec, None


# --------------------------------------------------------------------------
# statistics


@dataclass(frozen=True)
class DatasetStats:
    count: int
    integrand_length: dict
    integral_length: dict
    close_fraction: float
    unique_mod_const_fraction: float
    closeness_threshold: int = 10

    def as_text(self) -> str:
        def summary(h):
            values = sorted(h.elements())
            mean = sum(values) / len(values)
            return f"min={values[0]} median={values[len(values) // 2]} mean={mean:.1f} max={values[-1]}"

        rows = [
            ("count", str(self.count)),
            ("integrand_length", summary(Counter(self.integrand_length))),
            ("integral_length", summary(Counter(self.integral_length))),
            (f"close_fraction (<{self.closeness_threshold})", f"{self.close_fraction:.4f}"),
            ("unique_mod_const_fraction", f"{self.unique_mod_const_fraction:.4f}"),
        ]
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)

    def as_csv(self) -> str:
        lines = ["kind,length,count"]
        for kind, h in (("integrand", self.integrand_length), ("integral", self.integral_length)):
            for length in sorted(h):
                lines.append(f"{kind},{length},{h[length]}")
        return "\n".join(lines)


def _tokens(rec, side: str) -> list[str]:
    if isinstance(rec, dict):
        return list(rec[f"{side}_prefix"])
    return to_prefix(getattr(rec, side))


def dataset_stats(records, closeness_threshold: int = 10) -> DatasetStats:
    """Length histograms, closeness share and uniqueness modulo constants.

    ``records`` may hold :class:`IntegrablePair` objects or JSON records.
    """
    records = list(records)
    if not records:
        raise ValueError("statistics of an empty dataset")
    h_in, h_out = Counter(), Counter()
    close = 0
    shapes = set()
    for rec in records:
        a, b = _tokens(rec, "integrand"), _tokens(rec, "integral")
        h_in[len(a)] += 1
        h_out[len(b)] += 1
        close += abs(len(a) - len(b)) < closeness_threshold
        shapes.add(tuple(to_prefix(const_canonicalize(from_prefix(a)))))
    n = len(records)
    return DatasetStats(
        count=n,
        integrand_length=dict(sorted(h_in.items())),
        integral_length=dict(sorted(h_out.items())),
        close_fraction=close / n,
        unique_mod_const_fraction=len(shapes) / n,
        closeness_threshold=closeness_threshold,
    )
