"""The search scripting language.

One command per line; ``#`` starts a comment. Verbs::

    echo <text>              print text verbatim
    set <key> <value>        integer, ``a..b`` range, ``[x y z]`` list, ``i/n``
    filter <name>            add a filter; parameters come from ``set`` keys
    target <name>            max-length (default) or counts-per-length
    seed <literal>           ``[[1 4] [2 3]]`` classes, or ``[1 2 1]`` gap word
    dump <name>              CSV export: counts-per-length or gap-histogram
    search <space>           colorings, sequences or covers
"""

from __future__ import annotations

import csv
import re
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional, Sequence, Union

from . import core
from .engine import SearchRun, SearchSpace, Split, gap_histogram, run_search, target_report
from .filters import REGISTRY, FilterSpec, make_filter

VERBS = ("echo", "set", "filter", "target", "search", "seed", "dump")
KEYS = (
    "n-colors", "ap-length", "gap-alphabet", "gap-order", "max-gaps", "additive-power",
    "max-depth", "max-iterations", "split-depth", "chunk",
)
TARGETS = ("max-length", "counts-per-length")
DUMPS = ("counts-per-length", "gap-histogram")
SPACES = {"colorings": "coloring", "sequences": "sequence", "covers": "cover"}

Value = Union[int, None, tuple]


class ScriptError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Command:
    verb: str
    args: tuple = ()
    line: int = field(default=0, compare=False)


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\[|\]|[^\s\[\],]+")


def _parse_scalar(tok: str, line: int) -> Value:
    if tok in ("inf", "none", "-"):
        return None
    if re.fullmatch(r"-?\d+", tok):
        return int(tok)
    m = re.fullmatch(r"(\d+)\.\.(\d+)", tok)
    if m:
        lo, hi = int(m.group(1)), int(m.group(2))
        if lo > hi:
            raise ScriptError(f"empty range {tok!r}", line)
        return tuple(range(lo, hi + 1))
    m = re.fullmatch(r"(\d+)/(\d+)", tok)
    if m:
        return (int(m.group(1)), int(m.group(2)))
    raise ScriptError(f"bad value {tok!r}", line)


def parse_literal(text: str, line: int = 0) -> Value:
    """Parse an integer, range, or (nested) bracketed list of integers."""
    tokens = _TOKEN.findall(text)
    if not tokens:
        raise ScriptError("missing value", line)
    pos = 0

    def item():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        if tok == "[":
            out = []
            while pos < len(tokens) and tokens[pos] != "]":
                v = item()
                # ranges inside a list splice in
                if isinstance(v, tuple) and tokens[pos - 1] not in ("]",):
                    out.extend(v)
                else:
                    out.append(v)
            if pos >= len(tokens):
                raise ScriptError(f"unclosed '[' in {text!r}", line)
            pos += 1
            return tuple(out)
        if tok == "]":
            raise ScriptError(f"unexpected ']' in {text!r}", line)
        return _parse_scalar(tok, line)

    value = item()
    if pos != len(tokens):
        raise ScriptError(f"unexpected token {tokens[pos]!r}", line)
    return value


def _strip_comment(raw: str) -> str:
    i = raw.find("#")
    return raw if i < 0 else raw[:i]


def parse(text: str) -> list[Command]:
    commands = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = _strip_comment(raw).strip()
        if not body:
            continue
        verb, _, rest = body.partition(" ")
        rest = rest.strip()
        if verb not in VERBS:
            raise ScriptError(f"unknown command {verb!r}", lineno)
        if verb == "echo":
            commands.append(Command("echo", (rest,), lineno))
            continue
        if verb == "set":
            key, _, value = rest.partition(" ")
            if not key or not value.strip():
                raise ScriptError("set needs a key and a value", lineno)
            if key not in KEYS:
                raise ScriptError(f"unknown setting {key!r}", lineno)
            commands.append(Command("set", (key, parse_literal(value, lineno)), lineno))
            continue
        if verb == "seed":
            if not rest.startswith("["):
                raise ScriptError("seed needs a bracketed literal", lineno)
            commands.append(Command("seed", (parse_literal(rest, lineno),), lineno))
            continue
        words = rest.split()
        if len(words) != 1:
            raise ScriptError(f"{verb} takes exactly one argument, got {len(words)}", lineno)
        name = words[0]
        if verb == "filter" and name not in REGISTRY:
            raise ScriptError(f"unknown filter {name!r}", lineno)
        if verb == "target" and name not in TARGETS:
            raise ScriptError(f"unknown target {name!r}", lineno)
        if verb == "dump" and name not in DUMPS:
            raise ScriptError(f"unknown dump {name!r}", lineno)
        if verb == "search" and name not in SPACES:
            raise ScriptError(f"unknown search space {name!r}", lineno)
        commands.append(Command(verb, (name,), lineno))
    return commands


def render_value(v: Value) -> str:
    if v is None:
        return "inf"
    if isinstance(v, tuple):
        return "[" + " ".join(render_value(x) for x in v) + "]"
    return str(v)


def render(commands: Sequence[Command]) -> str:
    """Canonical script text; ``parse(render(cmds)) == cmds``."""
    lines = []
    for c in commands:
        if c.verb == "echo":
            lines.append(f"echo {c.args[0]}".rstrip())
        elif c.verb == "set" and c.args[0] == "chunk" and isinstance(c.args[1], tuple) and len(c.args[1]) == 2:
            lines.append(f"set chunk {c.args[1][0]}/{c.args[1][1]}")
        elif c.verb == "set":
            lines.append(f"set {c.args[0]} {render_value(c.args[1])}")
        elif c.verb == "seed":
            lines.append(f"seed {render_value(c.args[0])}")
        else:
            lines.append(f"{c.verb} {c.args[0]}")
    return "\n".join(lines) + ("\n" if lines else "")


# -- interpretation ----------------------------------------------------------


@dataclass
class Environment:
    params: dict[str, Value] = field(default_factory=dict)
    filters: list[str] = field(default_factory=list)
    targets: list[str] = field(default_factory=list)
    dumps: list[str] = field(default_factory=list)
    seed: Optional[tuple] = None

    def get_int(self, key: str, least: int = 1) -> int:
        v = self.params.get(key)
        if v is None:
            raise ScriptError(f"missing setting {key!r}")
        if not isinstance(v, int) or v < least:
            raise ScriptError(f"setting {key!r} must be an integer >= {least}, got {render_value(v)}")
        return v

    def optional_int(self, key: str, least: int = 0) -> Optional[int]:
        return self.get_int(key, least) if self.params.get(key) is not None else None


def filter_spec(name: str, env: Environment) -> FilterSpec:
    """Resolve a filter's parameters from the environment."""
    p = env.params
    if name in ("no-double-aps", "no-mono-double-aps", "no-n-aps"):
        return FilterSpec(name, {"k": env.get_int("ap-length", 2)})
    if name == "no-rainbow-aps":
        # a rainbow progression uses every color once
        return FilterSpec(name, {"k": env.get_int("n-colors", 2)})
    if name == "no-additive-powers":
        return FilterSpec(name, {"p": env.get_int("additive-power", 2)})
    if name == "max-class-gaps":
        gaps = p.get("max-gaps")
        if gaps is None:
            raise ScriptError("missing setting 'max-gaps'")
        if isinstance(gaps, int):
            gaps = (gaps,) * env.get_int("n-colors")
        return FilterSpec(name, {"gaps": list(gaps)})
    return FilterSpec(name, {})


def _display_name(name: str, env: Environment) -> str:
    try:
        return make_filter(filter_spec(name, env)).display_name
    except (ScriptError, ValueError):
        return name


def _space(kind: str, env: Environment) -> SearchSpace:
    seed = env.seed
    if kind == "sequences":
        order = env.params.get("gap-order")
        alphabet = env.params.get("gap-alphabet")
        if order is None and alphabet is None:
            raise ScriptError("missing setting 'gap-alphabet'")
        if isinstance(order, int) or isinstance(alphabet, int):
            raise ScriptError("gap-alphabet and gap-order must be ranges or lists")
        if order is not None and alphabet is not None and sorted(order) != sorted(alphabet):
            raise ScriptError("gap-order must be a permutation of gap-alphabet")
        gaps = tuple(order) if order is not None else tuple(sorted(alphabet))
        if seed is not None and any(not isinstance(x, int) for x in seed):
            raise ScriptError("a sequence seed is a flat gap list like [1 2 1]")
        return SearchSpace("sequences", alphabet=gaps, seed=seed or ())
    size = env.get_int("n-colors")
    elements: tuple = ()
    if seed is not None:
        if len(seed) != size or any(not isinstance(c, tuple) for c in seed):
            raise ScriptError(f"seed must list {size} classes like [[1 3] [2]]")
        obj = core.Coloring.from_classes(seed) if kind == "colorings" else core.CoverWord.from_classes(seed)
        elements = obj.assignment
    return SearchSpace(kind, size=size, seed=elements)


def build_run(kind: str, env: Environment) -> SearchRun:
    space = _space(kind, env)
    specs = tuple(filter_spec(name, env) for name in env.filters)
    for spec in specs:
        make_filter(spec)
    split = None
    depth = env.optional_int("split-depth")
    chunk = env.params.get("chunk")
    if depth is not None or chunk is not None:
        if depth is None:
            raise ScriptError("missing setting 'split-depth'")
        if not (isinstance(chunk, tuple) and len(chunk) == 2):
            raise ScriptError("setting 'chunk' must be i/n")
        split = Split(depth, chunk[0], chunk[1])
    return SearchRun(
        space,
        specs,
        targets=tuple(env.targets) or ("max-length",),
        max_depth=env.optional_int("max-depth"),
        max_iterations=env.optional_int("max-iterations", 1),
        split=split,
    )


Runner = Callable[[SearchRun], SearchRun]


@dataclass
class ScriptResult:
    lines: list[str] = field(default_factory=list)
    runs: list[SearchRun] = field(default_factory=list)
    dumps: list[Path] = field(default_factory=list)

    @property
    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def write_depth_counts(path: Path | str, run: SearchRun) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["depth", "count", "generated"])
        for length, passing, generated in target_report(run).counts:
            w.writerow([length, passing, generated])


def write_gap_histogram(path: Path | str, run: SearchRun) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["gap", "frequency"])
        w.writerows(gap_histogram(run))


def _search_lines(run: SearchRun, env: Environment, kind: str) -> list[str]:
    filters = [make_filter(s).display_name for s in run.filters]
    if run.space.kind == "sequences":
        seed = render_value(run.space.seed)
    else:
        seed = run.space.render(run.space.seed)
    return [
        f"#### Starting {SPACES[kind]} search ####",
        f"  Targets: \t{' '.join(run.targets)} ",
        f"  Filters: \t{' '.join(filters)} ",
        f"  Dump data: \t{' '.join(env.dumps)}".rstrip(" "),
        f"  Seed:\t\t{seed}",
    ]


def _result_lines(run: SearchRun, kind: str) -> list[str]:
    rep = target_report(run)
    out = []
    if rep.max_length is not None:
        out.append(f"Max. {SPACES[kind]} (len {rep.max_length:5d}): {rep.rendered}")
    if "counts-per-length" in run.targets:
        out.append("Counts per length: " + " ".join(map(str, rep.counts_per_length)))
    if not run.complete:
        out.append(f"Search incomplete after {run.iterations} iterations; results are lower bounds.")
    out.append(f"Time taken: {run.elapsed:.0f}s. Iterations: {run.iterations}")
    out.append("#### Done. ####")
    return out


def execute(commands: Sequence[Command], *, dump_dir: Path | str | None = None,
            runner: Optional[Runner] = None, echo: Optional[Callable[[str], None]] = None) -> ScriptResult:
    """Run a parsed script. ``runner`` replaces :func:`run_search` (checkpointing, backends)."""
    env = Environment()
    result = ScriptResult()
    runner = runner or run_search
    dump_dir = Path(dump_dir) if dump_dir is not None else Path.cwd()

    def emit(line: str) -> None:
        result.lines.append(line)
        if echo is not None:
            echo(line)

    for cmd in commands:
        try:
            if cmd.verb == "echo":
                emit(cmd.args[0])
            elif cmd.verb == "set":
                env.params[cmd.args[0]] = cmd.args[1]
            elif cmd.verb == "filter":
                env.filters.append(cmd.args[0])
                emit(f'Added filter "{_display_name(cmd.args[0], env)}".')
            elif cmd.verb == "target":
                if cmd.args[0] not in env.targets:
                    env.targets.append(cmd.args[0])
            elif cmd.verb == "dump":
                if cmd.args[0] not in env.dumps:
                    env.dumps.append(cmd.args[0])
            elif cmd.verb == "seed":
                env.seed = cmd.args[0]
            elif cmd.verb == "search":
                kind = cmd.args[0]
                run = build_run(kind, env)
                for line in _search_lines(run, env, kind):
                    emit(line)
                t0 = time.perf_counter()
                run = runner(run)
                if run.elapsed == 0.0:
                    run.elapsed = time.perf_counter() - t0
                for line in _result_lines(run, kind):
                    emit(line)
                result.runs.append(run)
                suffix = "" if len(result.runs) == 1 else f"-{len(result.runs)}"
                for name in env.dumps:
                    path = dump_dir / f"{name}{suffix}.csv"
                    if name == "counts-per-length":
                        write_depth_counts(path, run)
                    else:
                        write_gap_histogram(path, run)
                    result.dumps.append(path)
        except ScriptError as exc:
            if exc.line is None:
                raise ScriptError(str(exc), cmd.line) from None
            raise
        except ValueError as exc:
            raise ScriptError(str(exc), cmd.line) from None
    return result


def run_script(text: str, **kwargs: Any) -> ScriptResult:
    return execute(parse(text), **kwargs)
