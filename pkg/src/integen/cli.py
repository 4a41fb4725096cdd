"""``integen generate | verify | stats``.

Exit codes: 0 success, 1 runtime or verification failure, 2 usage error.
Records go to standard output unless ``--out`` is given; log messages go to
standard error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from functools import partial

from .dataset import dataset_stats, dump_record, pair_record, read_jsonl
from .generator import EXTENSIONS, METHODS, GenConfig, GenerationError, generate_item
from .verifier import verify_dataset

log = logging.getLogger("integen")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SEED_ENV = "INTEGEN_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="integen", description="Generate and check elementary integration pairs.")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write pairs as JSON Lines")
    g.add_argument("--count", type=_positive, default=10)
    g.add_argument("--seed", type=_seed, default=None,
                   help=f"master seed (default: ${SEED_ENV}, else 0)")
    g.add_argument("--method", choices=METHODS, default=None,
                   help="default: one third poly, one third rational, one third mixed")
    g.add_argument("--extension", choices=EXTENSIONS, default="random")
    g.add_argument("--tower-height", type=int, choices=(1, 2), default=1)
    g.add_argument("--max-theta-degree", type=_positive, default=4)
    g.add_argument("--max-factor-count", type=_positive, default=3)
    g.add_argument("--arctan", action=argparse.BooleanOptionalAction, default=None,
                   help="quadratic factors with arctan terms (log towers; default on for log)")
    g.add_argument("--out", default=None, help="output path (default: stdout)")
    g.add_argument("--jobs", type=_positive, default=1)

    v = sub.add_parser("verify", help="re-verify every record of a JSON Lines file")
    v.add_argument("--in", dest="path", required=True)
    v.add_argument("--jobs", type=_positive, default=1)

    s = sub.add_parser("stats", help="length, closeness and uniqueness statistics")
    s.add_argument("--in", dest="path", required=True)
    s.add_argument("--closeness-threshold", type=_positive, default=10)
    s.add_argument("--csv", default=None, metavar="PATH",
                   help="also write the length histograms as CSV ('-' for stdout)")
    return p


class _StderrHandler(logging.StreamHandler):
    """Writes to whatever ``sys.stderr`` is at the time of the message."""

    @property
    def stream(self):
        return sys.stderr

    @stream.setter
    def stream(self, _value):
        pass


def _setup_logging(verbose: bool):
    if not any(isinstance(h, _StderrHandler) for h in log.handlers):
        handler = _StderrHandler()
        handler.setFormatter(logging.Formatter("integen: %(levelname)s: %(message)s"))
        log.addHandler(handler)
        log.propagate = False
    log.setLevel(logging.DEBUG if verbose else logging.INFO)


def _resolve_seed(seed):
    if seed is not None:
        return seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return _seed(env)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"{SEED_ENV}: {exc}") from None


def _record_line(cfg: GenConfig, index: int) -> tuple[str, bool]:
    pair = generate_item(cfg, index)
    return dump_record(pair_record(pair, index)), pair.verified


def _map(fn, items, jobs: int):
    """Ordered map, in worker processes when ``jobs > 1``."""
    if jobs <= 1:
        yield from map(fn, items)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(fn, items, chunksize=16)


@contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def cmd_generate(args) -> int:
    cfg = GenConfig(
        seed=_resolve_seed(args.seed),
        method=args.method,
        extension_kind=args.extension,
        tower_height=args.tower_height,
        max_theta_degree=args.max_theta_degree,
        max_factor_count=args.max_factor_count,
        arctan_factors=args.arctan,
    )
    try:
        cfg.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    log.info("generating %d pairs, seed %d", args.count, cfg.seed)
    unverified = 0
    with _output(args.out) as out:
        lines = _map(partial(_record_line, cfg), range(args.count), args.jobs)
        for index, (line, verified) in enumerate(lines):
            if not verified:
                unverified += 1
                log.error("record %d failed verification", index)
            out.write(line + "\n")
    if unverified:
        log.error("%d records failed verification", unverified)
        return EXIT_FAIL
    return EXIT_OK


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return list(read_jsonl(fh))


def cmd_verify(args) -> int:
    rows = _read(args.path)
    items = [rec if rec is not None else err for _lineno, rec, err in rows]
    summary = verify_dataset(items, mapper=lambda fn, xs: _map(fn, xs, args.jobs))
    for index, reason in summary.failures:
        log.error("record %d (line %d): %s", index, rows[index][0], reason)
    print(summary)
    return EXIT_OK if summary.ok else EXIT_FAIL


def cmd_stats(args) -> int:
    rows = _read(args.path)
    bad = [(lineno, err) for lineno, rec, err in rows if rec is None]
    for lineno, err in bad:
        log.error("line %d: %s", lineno, err)
    records = [rec for _l, rec, _e in rows if rec is not None]
    if not records:
        log.error("no readable records in %s", args.path)
        return EXIT_FAIL
    st = dataset_stats(records, args.closeness_threshold)
    print(st.as_text())
    if args.csv:
        with _output(args.csv) as out:
            out.write(st.as_csv() + "\n")
    return EXIT_FAIL if bad else EXIT_OK


COMMANDS = {"generate": cmd_generate, "verify": cmd_verify, "stats": cmd_stats}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _setup_logging(args.verbose)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    except (OSError, GenerationError) as exc:
        log.error("%s", exc)
        return EXIT_FAIL


def main() -> None:
    sys.exit(run())
