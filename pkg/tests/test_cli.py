import csv
import io
import json
import os

import pytest

from sievelab import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(line for line in io.StringIO(text) if not line.startswith("#")))


def test_lhs_example(capsys):
    code, out, _ = run(capsys, "lhs", "--Q", "2", "--N", "1", "--seq", "ones")
    assert code == 0
    assert out.startswith("# generated ")
    (row,) = rows(out)
    assert float(row["lhs"]) == pytest.approx(3)
    assert set(row) == set(cli.LHS_FIELDS)


def test_lhs_json(capsys):
    code, out, _ = run(capsys, "lhs", "--Q", "4", "--N", "64", "--seq", "ones", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert isinstance(data, list) and data[0]["Q"] == 4 and data[0]["N"] == 64


def test_missing_sequence_file(capsys, tmp_path):
    code, _, err = run(capsys, "lhs", "--Q", "4", "--N", "64", "--seq", f"file:{tmp_path / 'missing.txt'}")
    assert code == 2 and "missing.txt" in err


def test_sequence_file_input(capsys, tmp_path):
    path = tmp_path / "seq.txt"
    path.write_text("1 0\n1 0\n1 0\n")
    code, out, _ = run(capsys, "lhs", "--Q", "1", "--N", "3", "--seq", f"file:{path}", "--reproducible")
    assert code == 0 and float(rows(out)[0]["lhs"]) == pytest.approx(9)
    code, _, _ = run(capsys, "lhs", "--Q", "1", "--N", "4", "--seq", f"file:{path}")
    assert code == 2


def test_grid_product_and_pairs(capsys):
    _, out, _ = run(capsys, "lhs", "--Q", "1", "2", "--N", "3", "5", "--reproducible")
    assert [(r["Q"], r["N"]) for r in rows(out)] == [("1", "3"), ("1", "5"), ("2", "3"), ("2", "5")]
    _, out, _ = run(capsys, "lhs", "--grid", "2:5", "3:4", "--reproducible")
    assert [(r["Q"], r["N"]) for r in rows(out)] == [("2", "5"), ("3", "4")]


def test_ratio_grid_empty(capsys):
    code, out, _ = run(capsys, "ratio-grid", "--reproducible")
    assert code == 0
    assert out == ",".join(cli.GRID_FIELDS) + "\n"


def test_ratio_grid_summary_rows(capsys):
    code, out, _ = run(
        capsys, "ratio-grid", "--grid", "4:256", "--seq", "ones", "random_pm1", "point_mass:0.37",
        "--trials", "3", "--bounds", "goal", "classical_q4", "--reproducible",
    )
    assert code == 0
    table = rows(out)
    body = [r for r in table if r["seq"] != "summary"]
    assert len(body) == (1 + 3 + 1) * 2
    summary = {r["bound_name"]: float(r["ratio"]) for r in table if r["seq"] == "summary"}
    for name, worst in summary.items():
        assert worst == max(float(r["ratio"]) for r in body if r["bound_name"] == name)


def test_ratio_grid_threads_keep_order(capsys, monkeypatch):
    argv = ("ratio-grid", "--Q", "2", "3", "--N", "16", "40", "--seq", "random_pm1", "--trials", "4", "--seed", "9", "--reproducible")
    _, serial, _ = run(capsys, *argv)
    monkeypatch.setenv("SIEVELAB_THREADS", "4")
    _, threaded, _ = run(capsys, *argv)
    assert serial == threaded


def test_seed_changes_random_rows(capsys):
    base = ("lhs", "--Q", "3", "--N", "50", "--seq", "random_pm1", "--reproducible")
    _, a, _ = run(capsys, *base, "--seed", "1")
    _, b, _ = run(capsys, *base, "--seed", "2")
    assert a != b


@pytest.mark.parametrize("bad", ["point_mass:1.5", "zeros"])
def test_bad_sequence_spec(capsys, bad):
    code, _, _ = run(capsys, "lhs", "--Q", "2", "--N", "4", "--seq", bad)
    assert code == 2


def test_count_examples(capsys):
    code, out, _ = run(capsys, "count", "--alpha", "0.1111111", "--Q", "2", "--delta", "1e-6")
    assert code == 0
    assert "count: 1" in out and "arc: major" in out
    code, out, _ = run(capsys, "count", "--Q", "2", "--delta", "1", "--mode", "max")
    assert code == 0 and "count: 14" in out and "witness:" in out


def test_count_bad_delta(capsys):
    code, _, err = run(capsys, "count", "--delta", "2")
    assert code == 2 and "delta" in err


def test_verify_identities(capsys):
    code, out, _ = run(capsys, "verify", "identities")
    assert code == 0 and "charsum" in out and "gauss" in out


def test_verify_unknown(capsys):
    code, _, _ = run(capsys, "verify", "nope")
    assert code == 2


def test_verify_failure_exit(capsys, monkeypatch):
    from sievelab import verify

    monkeypatch.setitem(verify.SUITES, "spacing", lambda: [verify.Check("forced", False, 1.0, 0.0)])
    code, out, _ = run(capsys, "verify", "spacing")
    assert code == 1 and "failed: forced" in out


def test_usage_error_exit():
    with pytest.raises(SystemExit) as exc:
        cli.main(["lhs", "--trials"])
    assert exc.value.code == 2


def test_sieve_estimate(capsys):
    code, out, _ = run(capsys, "sieve-estimate", "--Q", "8", "--N", "1024", "--alpha", "0.3819660112501051", "--R", "6")
    assert code == 0
    fields = dict(line.split(": ", 1) for line in out.strip().splitlines())
    assert int(fields["P"]) >= 1
    assert float(fields["pair_sum_exact"]) <= float(fields["pair_sum_dual_bound"]) + float(fields["dual_tail"]) + 1e-9
    code, _, _ = run(capsys, "sieve-estimate", "--Q", "8")
    assert code == 2


def test_out_file(tmp_path, capsys):
    target = tmp_path / "rows.csv"
    code, out, _ = run(capsys, "lhs", "--Q", "2", "--N", "1", "--out", str(target), "--reproducible")
    assert code == 0 and out == ""
    assert target.read_text().startswith("seq,trial,Q")


def test_module_entry_point():
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "sievelab", "count", "--delta", "0"], capture_output=True, text=True, env={**os.environ})
    assert res.returncode == 2
