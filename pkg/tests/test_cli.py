"""Exit codes, output formats, caching, and defect injection for the CLI."""

import json

import pytest

from virhoch import cli
from virhoch.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# exit code contract


def test_no_command_is_usage_error(capsys):
    code, _, err = run(capsys, )
    assert code == 64
    assert "usage error" in err


def test_unknown_command_is_usage_error(capsys):
    code, _, err = run(capsys, "bogus")
    assert code == 64


def test_version_flag():
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0


# ---------------------------------------------------------------------------
# gsb


def test_gsb_small(capsys):
    code, out, _ = run(capsys, "gsb", "--bound", "3")
    assert code == 0
    assert "overlaps:" in out and "relations:" in out and "ok" in out


def test_gsb_bad_bound(capsys):
    code, _, err = run(capsys, "gsb", "--bound", "0")
    assert code == 64
    assert "usage error" in err


# ---------------------------------------------------------------------------
# ddzero, with and without the planted defect


def test_ddzero_resolution(capsys):
    code, out, _ = run(capsys, "ddzero", "--letters", "3", "--smax", "4")
    assert code == 0
    assert "delta.delta = 0 on" in out


def test_ddzero_symbolic(capsys):
    code, out, _ = run(capsys, "ddzero", "--symbolic", "--degrees", "1", "--smax", "3")
    assert code == 0
    assert "d.d = 0 symbolically on" in out


def test_ddzero_injected_defect_fails_then_recovers(capsys):
    code, _, err = run(capsys, "ddzero", "--letters", "3", "--smax", "4",
                       "--inject-defect")
    assert code == 1
    assert "FAIL" in err

    # the corrupted rule table must not leak into later runs
    code2, out2, _ = run(capsys, "ddzero", "--letters", "3", "--smax", "4")
    assert code2 == 0
    assert "delta.delta = 0 on" in out2


def test_ddzero_symbolic_injected_defect(capsys):
    code, _, err = run(capsys, "ddzero", "--symbolic", "--degrees", "1",
                       "--smax", "3", "--inject-defect")
    assert code == 1
    assert "FAIL" in err


# ---------------------------------------------------------------------------
# cohomology


def test_cohomology_expect_match(capsys):
    code, out, _ = run(capsys, "cohomology", "--delta", "1", "--expect", "paper")
    assert code == 0
    assert "totals: 2,1,0,0" in out
    assert "expectation (paper): match" in out


def test_cohomology_locate(capsys):
    code, out, _ = run(capsys, "cohomology", "--delta", "0", "--nmax", "3",
                       "--locate")
    assert code == 0
    assert "classes at n=1: [2]" in out
    assert "classes at n=2: [2|0], [2|1]" in out
    assert "classes at n=3: [2|1|0]" in out


def test_cohomology_unlisted_point_fails_fast(capsys):
    code, out, err = run(capsys, "cohomology", "--delta", "7", "--expect", "paper")
    assert code == 64
    assert "no bundled expectation" in err
    assert out == ""  # nothing was computed


def test_cohomology_expect_mismatch(capsys, monkeypatch):
    wrong = {
        "graded": [{"delta": "1", "alpha": "0",
                    "totals": {"1": "9", "2": "9", "3": "9", "4": "9"}}],
        "truncated": [],
    }
    monkeypatch.setattr(cli, "load_expected", lambda: wrong)
    code, out, _ = run(capsys, "cohomology", "--delta", "1", "--expect", "paper")
    assert code == 2
    assert "differ from expected" in out


def test_alpha_without_truncation_is_usage_error(capsys):
    code, _, err = run(capsys, "cohomology", "--delta", "1", "--alpha", "1")
    assert code == 64
    assert "truncated" in err


def test_truncated_with_zero_alpha_is_usage_error(capsys):
    code, _, err = run(capsys, "cohomology", "--delta", "1", "--truncated", "6")
    assert code == 64


def test_bad_rational_is_usage_error(capsys):
    code, _, err = run(capsys, "cohomology", "--delta", "1//2")
    assert code == 64
    assert "usage error" in err


def test_csv_format(capsys):
    code, out, _ = run(capsys, "cohomology", "--delta", "1", "--nmax", "1",
                       "--smax", "2", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "delta,alpha,n,s,dim"
    assert "1,0,1,-1,1" in lines
    assert all(line.count(",") == 4 for line in lines)


def test_json_format_round_trips(capsys):
    code, out, _ = run(capsys, "cohomology", "--delta", "5/2", "--nmax", "2",
                       "--smax", "3", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["delta"] == "5/2"
    assert doc["totals"] == {"1": 0, "2": 0}


# ---------------------------------------------------------------------------
# cache behaviour


def test_cache_warm_run_identical(capsys, tmp_path):
    args = ("cohomology", "--delta", "0", "--nmax", "2", "--smax", "4",
            "--format", "json", "--cache-dir", str(tmp_path))
    code1, out1, _ = run(capsys, *args)
    cached = list(tmp_path.glob("virhoch-*.json"))
    assert code1 == 0 and len(cached) == 1
    code2, out2, _ = run(capsys, *args)
    assert code2 == 0
    assert out2 == out1


def test_cache_dir_from_environment(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(cli.CACHE_ENV, str(tmp_path))
    code, _, _ = run(capsys, "cohomology", "--delta", "2", "--nmax", "1",
                     "--smax", "2")
    assert code == 0
    assert list(tmp_path.glob("virhoch-*.json"))


def test_cache_key_separates_configs(capsys, tmp_path):
    base = ("--nmax", "1", "--smax", "2", "--cache-dir", str(tmp_path))
    run(capsys, "cohomology", "--delta", "1", *base)
    run(capsys, "cohomology", "--delta", "2", *base)
    assert len(list(tmp_path.glob("virhoch-*.json"))) == 2


# ---------------------------------------------------------------------------
# report bundle


def test_report_csv_needs_out(capsys):
    code, _, err = run(capsys, "report", "--nmax", "1", "--smax", "2")
    assert code == 64
    assert "--out" in err


def test_report_deterministic(capsys, tmp_path):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert run(capsys, "report", "--out", str(out_a), "--nmax", "2", "--smax", "3")[0] == 0
    assert run(capsys, "report", "--out", str(out_b), "--nmax", "2", "--smax", "3")[0] == 0
    names = sorted(p.name for p in out_a.iterdir())
    assert names == sorted(p.name for p in out_b.iterdir())
    assert "summary.txt" in names
    assert "dims_d5_2_a0.csv" in names and "dims_dm1_a0.csv" in names
    for name in names:
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()


def test_report_json_stdout(capsys):
    code, out, _ = run(capsys, "report", "--format", "json", "--nmax", "1",
                       "--smax", "2")
    assert code == 0
    bundle = json.loads(out)
    assert sorted(bundle) == ["-1", "-2", "0", "1", "2", "5/2"]
    assert bundle["1"]["totals"] == {"1": 2}


def test_report_parallel_matches_serial(capsys, tmp_path):
    serial, parallel = tmp_path / "s", tmp_path / "p"
    run(capsys, "report", "--out", str(serial), "--nmax", "1", "--smax", "2")
    run(capsys, "report", "--out", str(parallel), "--nmax", "1", "--smax", "2",
        "--jobs", "2")
    for path in sorted(serial.iterdir()):
        assert (parallel / path.name).read_bytes() == path.read_bytes()
