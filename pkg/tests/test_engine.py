from __future__ import annotations

import dataclasses

import pytest

from ramseysearch.engine import (
    Checkpoint, CheckpointError, SearchError, SearchRun, SearchSpace, Split, checkpoint_resume,
    checkpoint_save, chunk_slice, enumerate_prefixes, gap_histogram, run_search, target_report,
)
from ramseysearch.filters import FilterSpec

# recursion tree sizes for no-double-aps(3) over gaps 1..17, by depth bound
TREE_SIZES = {0: 1, 1: 18, 2: 307, 3: 4931, 4: 78915, 5: 1216147}

NO_DOUBLE_3 = (FilterSpec("no-double-aps", {"k": 3}),)


def seq_run(depth=None, alphabet=tuple(range(1, 18)), split=None, **kw):
    return SearchRun(SearchSpace("sequences", alphabet=alphabet), NO_DOUBLE_3, max_depth=depth, split=split, **kw)


def coloring_run(r, filters, **kw):
    return SearchRun(SearchSpace("colorings", size=r), tuple(FilterSpec(n, p) for n, p in filters), **kw)


def split_total(depth, split_depth, count, backend="numba"):
    runs = [run_search(seq_run(depth, split=Split(split_depth, i, count)), backend=backend) for i in range(count)]
    assert all(r.complete for r in runs)
    return runs


# -- spaces ------------------------------------------------------------------


def test_space_validation():
    with pytest.raises(SearchError):
        SearchSpace("sequences")
    with pytest.raises(SearchError):
        SearchSpace("sequences", alphabet=(1, 1))
    with pytest.raises(SearchError):
        SearchSpace("colorings", size=0)
    with pytest.raises(SearchError):
        SearchSpace("covers", size=9)
    with pytest.raises(SearchError):
        SearchSpace("lattices", size=2)


def test_space_children_and_rendering():
    assert SearchSpace("sequences", alphabet=(3, 1, 2)).children() == [3, 1, 2]
    assert SearchSpace("colorings", size=3).children() == [1, 2, 3]
    cover = SearchSpace("covers", size=2)
    assert cover.children() == [frozenset({1}), frozenset({2}), frozenset({1, 2})]
    assert cover.render(cover.build((2, 0))) == "[[1 2] [1]]"
    seq = SearchSpace("sequences", alphabet=(1, 2, 3))
    assert seq.render(seq.build((0, 1, 0))) == "gaps [1 2 1] sequence [1 2 4 5]"


# -- counting ----------------------------------------------------------------


@pytest.mark.parametrize("depth", sorted(TREE_SIZES))
def test_tree_sizes(depth):
    run = run_search(seq_run(depth))
    assert run.complete
    assert run.iterations == TREE_SIZES[depth]
    assert sum(run.generated) == run.iterations


def test_generated_is_alphabet_times_passing():
    run = run_search(seq_run(5))
    for d in range(5):
        assert run.generated[d + 1] == 17 * run.passing[d]


@pytest.mark.parametrize("backend", ["numba", "python"])
def test_backends_agree_on_sequences(backend):
    run = run_search(seq_run(3), backend=backend)
    assert run.iterations == 4931
    assert run.generated == [1, 17, 289, 4624]
    assert run.passing == [1, 17, 272, 4352]
    assert run.best_path == (0, 1, 0)


@pytest.mark.parametrize("space,filters", [
    (SearchSpace("colorings", size=2), [("no-mono-double-aps", {"k": 3})]),
    (SearchSpace("colorings", size=3), [("no-n-aps", {"k": 3}), ("no-rainbow-aps", {"k": 3})]),
    (SearchSpace("colorings", size=3), [("no-mono-double-aps", {"k": 3}), ("max-class-gaps", {"gaps": [2, 3, None]})]),
    (SearchSpace("colorings", size=2), [("no-mono-double-aps", {"k": 4}), ("max-class-gaps", {"gaps": [3, 2]})]),
    (SearchSpace("covers", size=2), [("no-mono-double-aps", {"k": 3})]),
    (SearchSpace("covers", size=2), [("no-n-aps", {"k": 3}), ("max-class-gaps", {"gaps": [2, 2]})]),
    (SearchSpace("sequences", alphabet=(1, 2, 3)), [("no-additive-cubes", {})]),
    (SearchSpace("sequences", alphabet=(2, 1)), [("no-additive-powers", {"p": 4})]),
    (SearchSpace("sequences", alphabet=(1, 2, 3, 4)), [("no-double-aps", {"k": 4})]),
])
def test_backends_agree(space, filters):
    run = SearchRun(space, tuple(FilterSpec(n, p) for n, p in filters), max_depth=9)
    a = run_search(run, backend="numba")
    b = run_search(run, backend="python")
    assert (a.iterations, a.generated, a.passing, a.best_path) == (b.iterations, b.generated, b.passing, b.best_path)


def test_runs_are_deterministic():
    a = run_search(seq_run(4))
    b = run_search(seq_run(4))
    assert (a.iterations, a.generated, a.passing, a.best_path) == (b.iterations, b.generated, b.passing, b.best_path)


def test_unbounded_search_finds_longest_word():
    # over {1, 2, 3} no additive square is longer than 7
    run = run_search(seq_run(None, alphabet=(1, 2, 3)))
    assert run.complete and run.max_length == 7
    assert run.best_object() == (1, 2, 1, 3, 1, 2, 1)


def test_seeded_search_counts_only_below_seed():
    run = run_search(SearchRun(SearchSpace("sequences", alphabet=(1, 2, 3), seed=(1, 2)), NO_DOUBLE_3, max_depth=1))
    assert run.iterations == 4
    assert run.passing == [1, 2]
    assert run.max_length == 3


def test_seed_failing_a_filter_is_rejected():
    with pytest.raises(SearchError, match="seed fails"):
        run_search(SearchRun(SearchSpace("sequences", alphabet=(1, 2), seed=(1, 1)), NO_DOUBLE_3))


def test_filter_space_mismatch():
    with pytest.raises(SearchError):
        run_search(SearchRun(SearchSpace("colorings", size=2), NO_DOUBLE_3))


def test_order_invariance_of_max_length():
    forward = run_search(seq_run(4))
    backward = run_search(seq_run(4, alphabet=tuple(range(17, 0, -1))))
    assert forward.max_length == backward.max_length == 4
    assert forward.iterations == backward.iterations
    assert forward.best_object() != backward.best_object()


def test_iteration_cap_marks_run_incomplete():
    run = run_search(seq_run(5, max_iterations=500))
    assert not run.complete and run.capped and run.iterations == 500
    assert target_report(run).complete is False


def test_targets_and_histogram():
    run = run_search(seq_run(None, alphabet=(1, 2, 3)))
    rep = target_report(run)
    assert rep.max_length == 7
    assert [length for length, _, _ in rep.counts] == list(range(len(rep.counts)))
    assert rep.counts_per_length[0] == 1
    assert gap_histogram(run) == [(1, 4), (2, 2), (3, 1)]
    with pytest.raises(SearchError):
        gap_histogram(run_search(coloring_run(2, [("no-mono-double-aps", {"k": 3})])))


def test_coloring_search_finds_sixteen():
    run = run_search(coloring_run(2, [("no-mono-double-aps", {"k": 3})]))
    assert run.complete and run.max_length == 16


# -- splitting ---------------------------------------------------------------


def test_chunk_slices_partition():
    for n in range(0, 30):
        for count in range(1, 9):
            covered = [i for c in range(count) for i in chunk_slice(n, c, count)]
            assert covered == list(range(n))


def test_enumerate_prefixes():
    run = seq_run(4)
    assert len(enumerate_prefixes(run, 1)) == 17
    assert len(enumerate_prefixes(run, 2)) == 272
    assert len(enumerate_prefixes(run, 3)) == 4352
    assert enumerate_prefixes(run, 2, backend="python") == enumerate_prefixes(run, 2)


@pytest.mark.parametrize("split_depth,count", [(1, 17), (2, 5), (2, 272), (3, 7), (1, 40), (0, 1)])
def test_split_matches_unsplit(split_depth, count):
    whole = run_search(seq_run(4))
    runs = split_total(4, split_depth, count)
    assert sum(r.iterations for r in runs) == whole.iterations == 78915
    width = len(whole.generated)
    for d in range(width):
        assert sum(r.generated[d] if d < len(r.generated) else 0 for r in runs) == whole.generated[d]
        assert sum(r.passing[d] if d < len(r.passing) else 0 for r in runs) == whole.passing[d]
    assert max(r.max_length or 0 for r in runs) == whole.max_length


def test_split_depth_cannot_exceed_max_depth():
    with pytest.raises(SearchError):
        run_search(seq_run(2, split=Split(3, 0, 2)))


def test_split_coloring_space():
    base = coloring_run(2, [("no-mono-double-aps", {"k": 3})], max_depth=12)
    whole = run_search(base)
    parts = [run_search(dataclasses.replace(base, split=Split(4, i, 3))) for i in range(3)]
    assert sum(p.iterations for p in parts) == whole.iterations
    assert max(p.max_length for p in parts if p.max_length is not None) == whole.max_length


def test_digest_ignores_cap_and_chunk_index():
    a = seq_run(3, split=Split(1, 0, 4))
    b = seq_run(3, split=Split(1, 2, 4), max_iterations=9)
    assert a.digest() != b.digest()
    assert a.digest(with_chunk=False) == b.digest(with_chunk=False)
    assert seq_run(3).digest() == seq_run(3, max_iterations=5).digest()
    assert seq_run(3).digest() != seq_run(4).digest()


# -- checkpoints -------------------------------------------------------------


def test_checkpoint_text_round_trip(tmp_path):
    run = run_search(seq_run(3), pause_at=100)
    cp = checkpoint_save(run)
    path = tmp_path / "cp.txt"
    cp.save(path)
    assert Checkpoint.load(path) == cp
    assert path.read_bytes().count(b"\r") == 0


@pytest.mark.parametrize("pause", [1, 2, 100, 4930])
def test_resume_reaches_same_counters(pause):
    whole = run_search(seq_run(3))
    part = run_search(seq_run(3), pause_at=pause)
    assert not part.complete and part.iterations == pause
    cp = Checkpoint.from_text(checkpoint_save(part).to_text())
    done = run_search(checkpoint_resume(cp, seq_run(3)))
    assert done.complete
    assert (done.iterations, done.generated, done.passing, done.best_path) == \
        (whole.iterations, whole.generated, whole.passing, whole.best_path)


def test_resume_in_many_steps_on_split_chunk():
    run = seq_run(4, split=Split(2, 0, 3))
    whole = run_search(run)
    step = run
    while not step.complete:
        step = run_search(step, pause_at=step.iterations + 997)
    assert (step.iterations, step.generated, step.passing) == (whole.iterations, whole.generated, whole.passing)


def test_resume_python_backend_and_coloring():
    base = coloring_run(3, [("no-n-aps", {"k": 3}), ("no-rainbow-aps", {"k": 3})], max_depth=8)
    whole = run_search(base)
    part = run_search(base, backend="python", pause_at=50)
    done = run_search(checkpoint_resume(checkpoint_save(part), base))
    assert done.iterations == whole.iterations and done.best_path == whole.best_path


def test_resume_refuses_other_configuration():
    cp = checkpoint_save(run_search(seq_run(3), pause_at=10))
    with pytest.raises(CheckpointError):
        checkpoint_resume(cp, seq_run(4))


def test_raising_the_cap_continues_a_capped_run():
    capped = run_search(seq_run(3, max_iterations=1000))
    assert capped.capped
    resumed = checkpoint_resume(checkpoint_save(capped), seq_run(3))
    assert run_search(resumed).iterations == 4931


def test_malformed_checkpoints():
    with pytest.raises(CheckpointError):
        Checkpoint.from_text("hello\n")
    text = checkpoint_save(run_search(seq_run(2))).to_text()
    with pytest.raises(CheckpointError):
        Checkpoint.from_text(text.replace("iterations 307", "iterations x"))
    with pytest.raises(CheckpointError):
        Checkpoint.from_text("\n".join(line for line in text.split("\n") if not line.startswith("root")))


# (blue, green) -> w*(3; 3, green, blue); None is unbounded
RED_THREE = {
    (3, 3): 22, (4, 3): 31, (4, 4): 31, (5, 3): 33, (5, 4): 38, (5, 5): 43,
    (6, 3): 33, (6, 4): 41, (6, 5): 44, (6, 6): 45, (7, 3): 33, (7, 4): 41, (7, 5): 46, (7, 6): 46,
    (7, 7): 46, (7, 8): 47, (None, 3): 33, (None, 4): 41, (None, 5): 46, (None, 6): 46, (None, None): 47,
}


def test_three_color_gapped_block_with_red_three():
    for (blue, green), value in RED_THREE.items():
        run = run_search(coloring_run(3, [("no-mono-double-aps", {"k": 3}),
                                          ("max-class-gaps", {"gaps": [3, green, blue]})]))
        assert run.max_length + 1 == value, (blue, green)
