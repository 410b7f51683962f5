"""Line-oriented checkpoint files for paused searches.

A checkpoint stores the traversal cursor, counters and best choice path at
a node boundary, plus the run's configuration digest. Resuming replays the
cursor from the seed and continues at the exact next node, so the final
counters equal those of an uninterrupted run.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .search import SearchRun

MAGIC = "# ramseysearch checkpoint v1"


class CheckpointError(ValueError):
    pass


@dataclass(frozen=True)
class Checkpoint:
    digest: str
    started: bool
    complete: bool
    truncated: bool
    root_index: int
    cursor: Optional[tuple[int, ...]]
    iterations: int
    generated: tuple[int, ...]
    passing: tuple[int, ...]
    best_path: Optional[tuple[int, ...]]

    def to_text(self) -> str:
        def ints(xs):
            return " ".join(map(str, xs))

        status = "complete" if self.complete else ("paused" if self.started else "fresh")
        lines = [
            MAGIC,
            f"digest {self.digest}",
            f"status {status}",
            f"truncated {int(self.truncated)}",
            f"root {self.root_index}",
            "cursor -" if self.cursor is None else f"cursor {ints(self.cursor)}".rstrip(),
            f"iterations {self.iterations}",
            f"generated {ints(self.generated)}".rstrip(),
            f"passing {ints(self.passing)}".rstrip(),
            "best -" if self.best_path is None else f"best {ints(self.best_path)}".rstrip(),
        ]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Checkpoint":
        lines = text.split("\n")
        if not lines or lines[0] != MAGIC:
            raise CheckpointError("not a checkpoint file")
        fields: dict[str, str] = {}
        for line in lines[1:]:
            if not line:
                continue
            key, _, value = line.partition(" ")
            fields[key] = value
        try:
            def ints(key):
                value = fields[key]
                return None if value == "-" else tuple(int(x) for x in value.split())

            status = fields["status"]
            if status not in ("fresh", "paused", "complete"):
                raise CheckpointError(f"unknown status {status!r}")
            return cls(
                digest=fields["digest"],
                started=status != "fresh",
                complete=status == "complete",
                truncated=fields["truncated"] == "1",
                root_index=int(fields["root"]),
                cursor=ints("cursor"),
                iterations=int(fields["iterations"]),
                generated=ints("generated"),
                passing=ints("passing"),
                best_path=ints("best"),
            )
        except KeyError as exc:
            raise CheckpointError(f"checkpoint is missing the {exc.args[0]!r} line") from None
        except ValueError as exc:
            raise CheckpointError(f"malformed checkpoint: {exc}") from None

    def save(self, path: Path | str) -> None:
        Path(path).write_text(self.to_text(), encoding="utf-8", newline="\n")

    @classmethod
    def load(cls, path: Path | str) -> "Checkpoint":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))


def checkpoint_save(run: SearchRun) -> Checkpoint:
    return Checkpoint(
        digest=run.digest(),
        started=run.started,
        complete=run.complete,
        truncated=run.truncated,
        root_index=run.root_index,
        cursor=run.cursor,
        iterations=run.iterations,
        generated=tuple(run.generated),
        passing=tuple(run.passing),
        best_path=run.best_path,
    )


def checkpoint_resume(cp: Checkpoint, run: SearchRun) -> SearchRun:
    """Restore ``cp`` onto the configuration of ``run``; refuses a different configuration."""
    if cp.digest != run.digest():
        raise CheckpointError("checkpoint was written for a different search configuration")
    return dataclasses.replace(
        run.copy(),
        started=cp.started,
        complete=cp.complete,
        truncated=cp.truncated,
        root_index=cp.root_index,
        cursor=cp.cursor,
        iterations=cp.iterations,
        generated=list(cp.generated),
        passing=list(cp.passing),
        best_path=cp.best_path,
    )
