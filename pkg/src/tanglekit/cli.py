"""``tanglekit`` command line.

Exit codes: 0 success, 1 verification failed, 2 parse/validation error,
3 dimension or rank incompatibility, 4 I/O failure.
"""
import argparse
import sys
from pathlib import Path

import numpy as np

from . import fileio
from .errors import BadDims, RankExceeded, TangleKitError
from .inverter import state_invert
from .oracle import VerifyConfig, summarize, verify_batch
from .rank2 import eof_upper_bound, i_tangle_rank2, optimal_decomposition
from .states import project_rank2, random_rank2
from .wootters import concurrence_2q

EXIT_OK, EXIT_VERIFY, EXIT_PARSE, EXIT_DIMS, EXIT_IO = 0, 1, 2, 3, 4

MEASURES = ("itangle", "concurrence", "eof-bound", "inverter", "decompose")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load(path, project: bool):
    try:
        rho, meta = fileio.read_state_file(path)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc}") from None
    except (fileio.StateFileError, TangleKitError) as exc:
        raise CliError(EXIT_PARSE, f"{type(exc).__name__}: {exc}") from None
    return (project_rank2(rho) if project else rho), meta


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {out}: {exc}") from None


def _scalar(x: float) -> str:
    # the 15th decimal is below the few-ulp noise of the pipeline; drop it so
    # exact values like 1 or 0.6 print cleanly
    return f"{round(float(x), 14) + 0.0:.15f}\n"


def cmd_compute(args) -> int:
    rho, _ = _load(args.infile, args.project_rank2)
    try:
        if args.measure == "itangle":
            text = _scalar(i_tangle_rank2(rho))
        elif args.measure == "concurrence":
            text = _scalar(concurrence_2q(rho))
        elif args.measure == "eof-bound":
            text = _scalar(eof_upper_bound(rho, swap=args.swap))
        elif args.measure == "inverter":
            doc = fileio.state_document(state_invert(rho.matrix, rho.dims), rho.dims, label="inverted")
            text = fileio.dump_json(doc)
        else:
            text = fileio.dump_json(fileio.decomposition_document(optimal_decomposition(rho)))
    except (BadDims, RankExceeded) as exc:
        raise CliError(EXIT_DIMS, f"{type(exc).__name__}: {exc}") from None
    _emit(text, args.out)
    return EXIT_OK


def cmd_random(args) -> int:
    outdir = Path(args.outdir)
    rng = np.random.default_rng(args.seed)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        width = max(4, len(str(max(args.count - 1, 0))))
        for i in range(args.count):
            rho = random_rank2(args.dims, rng)
            doc = fileio.state_document(rho.matrix, rho.dims, label=f"random-rank2-{i}",
                                        seed=args.seed, index=i)
            fileio.write_json(doc, outdir / f"state_{i:0{width}d}.json")
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write to {outdir}: {exc}") from None
    return EXIT_OK


def cmd_verify(args) -> int:
    extra = [_load(path, args.project_rank2)[0] for path in args.include]
    rows = verify_batch(args.dims, args.count, args.seed, VerifyConfig(),
                        extra_states=extra, threads=args.threads)
    try:
        fileio.write_report_csv(rows, args.out)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {args.out}: {exc}") from None
    summary = summarize(rows, args.tol)
    print(f"rows={summary.rows} ok={summary.ok_rows} max_gap={summary.max_gap:.3e} "
          f"mean_gap={summary.mean_gap:.3e} min_margin={summary.min_margin:.3e} "
          f"tol={args.tol:.1e} {'PASS' if summary.passed else 'FAIL'}")
    eof = np.array([r.eof_gap for r in rows if r.eof_gap is not None])
    if eof.size:
        print(f"eof_gap min={eof.min():.3e} median={np.median(eof):.3e} max={eof.max():.3e}")
    return EXIT_OK if summary.passed else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tanglekit",
                                     description="I-tangle of rank-2 bipartite states")
    parser.add_argument("--project-rank2", action="store_true",
                        help="truncate inputs to their top two spectral components")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        p = sub.add_parser(name, **kw)
        p.add_argument("--project-rank2", action="store_true", default=argparse.SUPPRESS)
        return p

    p = add("compute", help="evaluate one measure on a state file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--measure", required=True, choices=MEASURES)
    p.add_argument("--swap", action="store_true", help="treat B as the qubit for eof-bound")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_compute)

    p = add("random", help="write seeded random rank-2 state files")
    p.add_argument("--dims", nargs=2, type=int, required=True, metavar=("A", "B"))
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--outdir", required=True)
    p.set_defaults(func=cmd_random)

    p = add("verify", help="closed form against brute-force oracles, CSV report")
    p.add_argument("--dims", nargs=2, type=int, required=True, metavar=("A", "B"))
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--out", required=True)
    p.add_argument("--include", action="append", default=[], metavar="FILE",
                   help="extra state file appended to the batch (repeatable)")
    p.add_argument("--threads", type=int, default=None,
                   help="worker processes; default from TANGLEKIT_THREADS, 0 = all cores")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "dims", None) is not None and min(args.dims) < 2:
            raise CliError(EXIT_PARSE, "dimensions must be >= 2")
        if getattr(args, "count", 0) < 0:
            raise CliError(EXIT_PARSE, "count must be nonnegative")
        return args.func(args)
    except CliError as exc:
        print(f"tanglekit: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
