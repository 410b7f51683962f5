from __future__ import annotations

import json
from pathlib import Path

import pytest

from ramseysearch import cli
from ramseysearch.cli import main

DATA = Path(__file__).parent / "data"

TREE = "set ap-length 3\nset gap-alphabet 1..17\nset max-depth {depth}\nfilter no-double-aps\nsearch sequences\n"


@pytest.fixture
def tree_script(tmp_path):
    def make(depth, name="tree.rs"):
        path = tmp_path / name
        path.write_text(TREE.format(depth=depth))
        return path
    return make


def test_run_prints_report(tree_script, capsys):
    assert main(["run", str(tree_script(3))]) == 0
    out = capsys.readouterr().out
    assert "Max. sequence (len     3)" in out
    assert "Iterations: 4931" in out


def test_run_emits_depth_counts(tree_script, tmp_path):
    csv = tmp_path / "counts.csv"
    assert main(["run", str(tree_script(5)), "--emit-depth-counts", str(csv)]) == 0
    rows = csv.read_text().splitlines()
    assert rows[0] == "depth,count,generated"
    assert sum(int(r.split(",")[2]) for r in rows[1:]) == 1216147
    first = csv.read_bytes()
    main(["run", str(tree_script(5)), "--emit-depth-counts", str(csv)])
    assert csv.read_bytes() == first and b"\r" not in first


def test_run_emits_gap_histogram(tmp_path):
    script = tmp_path / "s.rs"
    script.write_text("set ap-length 3\nset gap-alphabet 1..3\nfilter no-double-aps\nsearch sequences\n")
    out = tmp_path / "gaps.csv"
    assert main(["run", str(script), "--emit-gap-histogram", str(out)]) == 0
    assert out.read_text() == "gap,frequency\n1,4\n2,2\n3,1\n"


def test_run_parse_error_exits_one(tmp_path, capsys):
    script = tmp_path / "bad.rs"
    script.write_text("echo hi\nset n-colors 2\nfrobnicate\n")
    assert main(["run", str(script)]) == 1
    assert "line 3" in capsys.readouterr().err


def test_run_missing_file(tmp_path, capsys):
    assert main(["run", str(tmp_path / "nope.rs")]) == 1
    assert "cannot read" in capsys.readouterr().err


def test_usage_errors_exit_one(capsys):
    with pytest.raises(SystemExit) as info:
        main(["oracle"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 1


def test_iteration_cap_exits_two(tree_script):
    assert main(["run", str(tree_script(4)), "--max-iterations", "100"]) == 2


def test_checkpoint_and_resume(tree_script, tmp_path, capsys):
    cp = tmp_path / "cp.txt"
    script = str(tree_script(4))
    assert main(["run", script, "--checkpoint", str(cp), "--max-iterations", "1000"]) == 2
    assert "status paused" in cp.read_text()
    assert main(["run", script, "--checkpoint", str(cp), "--resume", "--max-iterations", "30000"]) == 2
    capsys.readouterr()
    assert main(["run", script, "--checkpoint", str(cp), "--resume"]) == 0
    assert "Iterations: 78915" in capsys.readouterr().out
    assert "status complete" in cp.read_text()


def test_periodic_checkpoints(tree_script, tmp_path, capsys):
    cp = tmp_path / "cp.txt"
    assert main(["run", str(tree_script(4)), "--checkpoint", str(cp), "--checkpoint-every", "5000"]) == 0
    assert "Iterations: 78915" in capsys.readouterr().out


def test_resume_refuses_other_script(tree_script, tmp_path, capsys):
    cp = tmp_path / "cp.txt"
    assert main(["run", str(tree_script(4)), "--checkpoint", str(cp), "--max-iterations", "10"]) == 2
    assert main(["run", str(tree_script(3, "other.rs")), "--checkpoint", str(cp), "--resume"]) == 1
    assert "different search configuration" in capsys.readouterr().err


def test_resume_needs_checkpoint(tree_script):
    assert main(["run", str(tree_script(2)), "--resume"]) == 1


def test_python_backend(tree_script, capsys):
    assert main(["run", str(tree_script(3)), "--backend", "python"]) == 0
    assert "Iterations: 4931" in capsys.readouterr().out


@pytest.mark.parametrize("argv,expected", [
    (["plain", "2", "3"], "w*(2,3) = 17"),
    (["uniform", "3", "3", "2"], "w*(3,3;2) = 11"),
    (["gapped", "3", "3", "2"], "w*(3;3,2) = 11"),
    (["plain", "3", "3", "--bound", "30"], "w*(3,3) > 30"),
])
def test_oracle(argv, expected, capsys):
    assert main(["oracle", *argv]) == 0
    assert capsys.readouterr().out.splitlines()[0] == expected


def test_oracle_witness_and_errors(capsys):
    assert main(["oracle", "plain", "2", "3", "--witness"]) == 0
    witness = capsys.readouterr().out.splitlines()[1].split()[1]
    assert len(witness) == 16
    assert main(["oracle", "plain", "2"]) == 1
    assert main(["oracle", "gapped", "3"]) == 1
    assert main(["oracle", "gapped", "3", "x"]) == 1


def test_verify(tmp_path, capsys):
    assert main(["verify", str(DATA / "coloring_413.txt"), "--k", "3"]) == 0
    assert capsys.readouterr().out.startswith("PASS: coloring of [1,413]")
    bad = tmp_path / "bad.txt"
    bad.write_text("0010110100101101 0\n")
    assert main(["verify", str(bad), "--k", "3"]) == 3
    assert "witness in color" in capsys.readouterr().out
    junk = tmp_path / "junk.txt"
    junk.write_text("01x1\n")
    assert main(["verify", str(junk)]) == 1


def split_and_run(script, tmp_path, depth, chunks):
    out = tmp_path / "chunks"
    assert main(["split", str(script), "--depth", str(depth), "--chunks", str(chunks), "--out", str(out)]) == 0
    scripts = sorted(out.glob("*.rs"))
    assert len(scripts) == chunks
    for s in scripts:
        assert main(["run", str(s)]) == 0
    return out


def test_split_and_merge_depth_three(tree_script, tmp_path, capsys):
    out = split_and_run(tree_script(3), tmp_path, 1, 17)
    capsys.readouterr()
    assert main(["merge", str(out)]) == 0
    text = capsys.readouterr().out
    assert "Merged 17 chunks." in text
    assert "Iterations: 4931" in text
    assert "Max. length 3:" in text


def test_split_and_merge_matches_unsplit_depth_four(tree_script, tmp_path, capsys):
    whole_csv = tmp_path / "whole.csv"
    merged_csv = tmp_path / "merged.csv"
    script = tree_script(4)
    assert main(["run", str(script), "--emit-depth-counts", str(whole_csv)]) == 0
    out = split_and_run(script, tmp_path, 2, 9)
    assert main(["merge", str(out), "--emit-depth-counts", str(merged_csv)]) == 0
    assert whole_csv.read_bytes() == merged_csv.read_bytes()
    assert "Iterations: 78915" in capsys.readouterr().out


def test_merge_refuses_incomplete_or_mixed_sets(tree_script, tmp_path, capsys):
    out = split_and_run(tree_script(3), tmp_path, 1, 4)
    reports = sorted(out.glob("*.json"))
    first = reports[0].read_text()
    reports[0].unlink()
    assert main(["merge", str(out)]) == 1
    assert "missing [0]" in capsys.readouterr().err
    data = json.loads(first)
    data["digest"] = "0" * 64
    reports[0].write_text(json.dumps(data))
    assert main(["merge", str(out)]) == 1
    assert "different search configurations" in capsys.readouterr().err
    assert main(["merge", str(tmp_path / "empty")]) == 1


def test_merge_refuses_unfinished_chunks():
    report = {"format": cli.REPORT_FORMAT, "digest": "d", "chunk": [0, 1], "complete": False,
              "iterations": 1, "generated": [1], "passing": [1], "seed_length": 0,
              "best_path": [], "max_length": 0, "rendered": ""}
    with pytest.raises(cli.CliError, match="did not finish"):
        cli.merge_reports([report])


def test_split_rejects_scripts_without_search(tmp_path):
    script = tmp_path / "s.rs"
    script.write_text("echo nothing\n")
    assert main(["split", str(script), "--depth", "1", "--chunks", "2", "--out", str(tmp_path / "o")]) == 1


def test_chunk_scripts_are_valid_scripts(tree_script, tmp_path):
    out = tmp_path / "c"
    main(["split", str(tree_script(3)), "--depth", "1", "--chunks", "3", "--out", str(out)])
    text = sorted(out.glob("*.rs"))[1].read_text()
    assert text.startswith("set split-depth 1\nset chunk 1/3\n")
