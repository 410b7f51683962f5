"""Command-line entry point.

Subcommands::

    run <script>       execute a search script
    oracle <kind> ...  exhaustive w* values
    verify <file>      check a digit-string witness coloring
    split <script>     write chunk scripts for a split search
    merge <dir>        combine chunk reports into one

Exit codes: 0 success, 1 usage or parse error, 2 run incomplete (iteration
cap reached), 3 verification failed.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import oracle
from .engine import (
    Checkpoint, CheckpointError, SearchError, SearchRun, checkpoint_resume, checkpoint_save, run_search,
    target_report,
)
from .filters import FilterError
from .script import Command, ScriptError, execute, parse, render, write_depth_counts, write_gap_histogram

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INCOMPLETE = 2
EXIT_VERIFY_FAILED = 3

REPORT_FORMAT = "ramseysearch-report-v1"


class CliError(Exception):
    pass


def _suffixed(path: Path, n: int) -> Path:
    """``path`` for the first search of a script, ``stem-n.ext`` for later ones."""
    return path if n == 1 else path.with_name(f"{path.stem}-{n}{path.suffix}")


# -- run ---------------------------------------------------------------------


def chunk_report(run: SearchRun) -> dict:
    rep = target_report(run)
    return {
        "format": REPORT_FORMAT,
        "digest": run.digest(with_chunk=False),
        "chunk": None if run.split is None else [run.split.index, run.split.count],
        "complete": run.complete,
        "iterations": run.iterations,
        "generated": list(run.generated),
        "passing": list(run.passing),
        "seed_length": len(run.space.seed),
        "best_path": None if run.best_path is None else list(run.best_path),
        "max_length": rep.max_length,
        "rendered": rep.rendered,
    }


class _Runner:
    """Wraps :func:`run_search` with the cap override and checkpoint files."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.count = 0

    def __call__(self, run: SearchRun) -> SearchRun:
        self.count += 1
        a = self.args
        if a.max_iterations is not None:
            run = dataclasses.replace(run, max_iterations=a.max_iterations)
        cp_path = None if a.checkpoint is None else _suffixed(Path(a.checkpoint), self.count)
        if a.resume:
            if cp_path is None:
                raise CliError("--resume needs --checkpoint")
            if cp_path.exists():
                run = checkpoint_resume(Checkpoint.load(cp_path), run)
        if cp_path is None:
            return run_search(run, backend=a.backend)
        step = a.checkpoint_every
        while True:
            pause = None if step is None else run.iterations + step
            run = run_search(run, backend=a.backend, pause_at=pause)
            checkpoint_save(run).save(cp_path)
            if run.complete or run.capped:
                return run


def cmd_run(args: argparse.Namespace) -> int:
    script = Path(args.script)
    try:
        commands = parse(script.read_text(encoding="utf-8"))
    except OSError as exc:
        raise CliError(f"cannot read {script}: {exc.strerror}") from None
    runner = _Runner(args)
    result = execute(commands, dump_dir=args.dump_dir or script.parent, runner=runner,
                     echo=lambda line: print(line, flush=True))
    for n, run in enumerate(result.runs, 1):
        if args.emit_depth_counts:
            write_depth_counts(_suffixed(Path(args.emit_depth_counts), n), run)
        if args.emit_gap_histogram:
            write_gap_histogram(_suffixed(Path(args.emit_gap_histogram), n), run)
        result_path = args.result
        if result_path is None and run.split is not None:
            result_path = script.with_suffix(".json")
        if result_path is not None:
            path = _suffixed(Path(result_path), n)
            path.write_text(json.dumps(chunk_report(run), indent=1) + "\n", encoding="utf-8")
    return EXIT_OK if all(r.complete for r in result.runs) else EXIT_INCOMPLETE


# -- oracle / verify ---------------------------------------------------------


def _gap_bound(text: str) -> Optional[int]:
    if text in ("inf", "-"):
        return None
    return int(text)


def oracle_query(kind: str, params: Sequence[str], bound: int) -> oracle.WStarQuery:
    try:
        if kind == "plain":
            r, k = (int(x) for x in params)
            return oracle.WStarQuery.plain(r, k, bound)
        if kind == "uniform":
            r, k, d = (int(x) for x in params)
            return oracle.WStarQuery.uniform(r, k, d, bound)
        if kind == "gapped":
            if len(params) < 2:
                raise ValueError
            return oracle.WStarQuery.gapped(int(params[0]), [_gap_bound(x) for x in params[1:]], bound)
    except ValueError as exc:
        detail = f": {exc}" if str(exc) else ""
        usage = {"plain": "R K", "uniform": "R K D", "gapped": "K A1 A2 ..."}[kind]
        raise CliError(f"oracle {kind} expects {usage}{detail}") from None
    raise CliError(f"unknown oracle kind {kind!r}")


def cmd_oracle(args: argparse.Namespace) -> int:
    q = oracle_query(args.kind, args.params, args.bound)
    res = oracle.w_star(q, semantics=args.semantics)
    print(res)
    if args.witness:
        print("witness: " + "".join(str(c - 1) for c in res.witness))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        text = Path(args.file).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {args.file}: {exc.strerror}") from None
    report = oracle.verify_witness_coloring(text, args.k)
    for line in report.lines():
        print(line)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


# -- split / merge -----------------------------------------------------------


def split_scripts(commands: Sequence[Command], depth: int, chunks: int) -> list[str]:
    if not any(c.verb == "search" for c in commands):
        raise CliError("script has no search command to split")
    if any(c.verb == "set" and c.args[0] in ("split-depth", "chunk") for c in commands):
        raise CliError("script already sets split-depth or chunk")
    body = render(commands)
    return [f"set split-depth {depth}\nset chunk {i}/{chunks}\n{body}" for i in range(chunks)]


def cmd_split(args: argparse.Namespace) -> int:
    if args.depth < 0 or args.chunks < 1:
        raise CliError("need --depth >= 0 and --chunks >= 1")
    script = Path(args.script)
    try:
        commands = parse(script.read_text(encoding="utf-8"))
    except OSError as exc:
        raise CliError(f"cannot read {script}: {exc.strerror}") from None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    width = len(str(args.chunks - 1))
    for i, text in enumerate(split_scripts(commands, args.depth, args.chunks)):
        (out / f"{script.stem}-chunk{i:0{width}d}.rs").write_text(text, encoding="utf-8")
    print(f"Wrote {args.chunks} chunk scripts to {out}")
    return EXIT_OK


def _add(total: list[int], xs: Sequence[int]) -> None:
    total.extend([0] * (len(xs) - len(total)))
    for i, x in enumerate(xs):
        total[i] += x


def merge_reports(reports: Sequence[dict]) -> dict:
    """Sum the counters of a complete set of chunk reports and keep the deepest best."""
    if not reports:
        raise CliError("no chunk reports to merge")
    if any(r.get("format") != REPORT_FORMAT for r in reports):
        raise CliError("not a chunk report")
    if len({r["digest"] for r in reports}) != 1:
        raise CliError("chunk reports come from different search configurations")
    if any(r["chunk"] is None for r in reports):
        raise CliError("report is not from a split chunk")
    count = reports[0]["chunk"][1]
    indices = sorted(r["chunk"][0] for r in reports)
    if any(r["chunk"][1] != count for r in reports) or indices != list(range(count)):
        missing = sorted(set(range(count)) - set(indices))
        raise CliError(f"chunk set incomplete or duplicated (expected {count}, missing {missing})")
    incomplete = [r["chunk"][0] for r in reports if not r["complete"]]
    if incomplete:
        raise CliError(f"chunks {incomplete} did not finish")
    generated: list[int] = []
    passing: list[int] = []
    best = None
    for r in sorted(reports, key=lambda r: r["chunk"][0]):
        _add(generated, r["generated"])
        _add(passing, r["passing"])
        if r["best_path"] is not None and (best is None or len(r["best_path"]) > len(best["best_path"])):
            best = r
    return {
        "chunks": count,
        "iterations": sum(r["iterations"] for r in reports),
        "generated": generated,
        "passing": passing,
        "seed_length": reports[0]["seed_length"],
        "max_length": None if best is None else best["max_length"],
        "best_path": None if best is None else best["best_path"],
        "rendered": "" if best is None else best["rendered"],
    }


def cmd_merge(args: argparse.Namespace) -> int:
    paths = sorted(Path(args.dir).glob("*.json"))
    reports = []
    for p in paths:
        try:
            reports.append(json.loads(p.read_text(encoding="utf-8")))
        except json.JSONDecodeError as exc:
            raise CliError(f"{p}: {exc}") from None
    merged = merge_reports(reports)
    seed = merged["seed_length"]
    counts = [seed + d for d in range(len(merged["passing"]))]
    print(f"Merged {merged['chunks']} chunks.")
    if merged["max_length"] is not None:
        print(f"Max. length {merged['max_length']}: {merged['rendered']}")
    print("Counts per length: " + " ".join(f"{n}:{c}" for n, c in zip(counts, merged["passing"])))
    print(f"Iterations: {merged['iterations']}")
    if args.emit_depth_counts:
        with open(args.emit_depth_counts, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("depth,count,generated\n")
            gen = merged["generated"] + [0] * (len(merged["passing"]) - len(merged["generated"]))
            for n, c, g in zip(counts, merged["passing"], gen):
                fh.write(f"{n},{c},{g}\n")
    return EXIT_OK


# -- entry -------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # argparse's own status 2 would read as "run incomplete"
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ramseysearch", description="Backtracking searches for double-AP-free objects.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute a search script")
    p.add_argument("script")
    p.add_argument("--emit-depth-counts", metavar="PATH", help="write depth,count,generated CSV")
    p.add_argument("--emit-gap-histogram", metavar="PATH", help="write gap,frequency CSV of the best sequence")
    p.add_argument("--checkpoint", metavar="PATH", help="checkpoint file, written when the run stops")
    p.add_argument("--checkpoint-every", metavar="N", type=int, help="also checkpoint every N iterations")
    p.add_argument("--resume", action="store_true", help="continue from --checkpoint if it exists")
    p.add_argument("--max-iterations", metavar="N", type=int, help="override the script's iteration cap")
    p.add_argument("--result", metavar="PATH", help="write a JSON report (default for split chunks: next to the script)")
    p.add_argument("--dump-dir", metavar="DIR", help="directory for the script's dump files")
    p.add_argument("--backend", choices=("numba", "python"), default="numba")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("oracle", help="exhaustive w* value")
    p.add_argument("kind", choices=("plain", "gapped", "uniform"))
    p.add_argument("params", nargs="+", help="plain: R K; uniform: R K D; gapped: K A1 .. Ar (inf = unbounded)")
    p.add_argument("--bound", type=int, default=1000, help="give up above this length")
    p.add_argument("--semantics", choices=(oracle.WITHIN, oracle.BOUNDARY), default=oracle.WITHIN)
    p.add_argument("--witness", action="store_true", help="also print a longest free coloring")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", help="check a witness coloring file")
    p.add_argument("file")
    p.add_argument("--k", type=int, default=3)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("split", help="write chunk scripts")
    p.add_argument("script")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--chunks", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("merge", help="combine chunk reports")
    p.add_argument("dir")
    p.add_argument("--emit-depth-counts", metavar="PATH")
    p.set_defaults(func=cmd_merge)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ScriptError, SearchError, CheckpointError, FilterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
