from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from lattice_ctqw.cli import main, parse_range


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    body = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def test_parse_range():
    assert np.allclose(parse_range("0:10:3"), [0, 5, 10])
    assert np.allclose(parse_range("1,2.5"), [1, 2.5])


def test_scheme_hexagonal(capsys):
    code, out, _ = run(["scheme", "--kind", "hexagonal", "--m", "3"], capsys)
    d = json.loads(out)
    assert code == 0
    assert [c["size"] for c in d["classes"]] == [1, 6, 2]
    assert d["symmetric"] and d["degree"] == 6


def test_scheme_honeycomb(capsys):
    _, out, _ = run(["scheme", "--kind", "honeycomb", "--m", "3"], capsys)
    d = json.loads(out)
    assert len(d["classes"]) == 5
    p = {(i, j, k): v for i, j, k, v in d["intersection_numbers"]}
    assert p[(1, 1, 0)] == 3 and p[(1, 1, 2)] == 1
    assert p[(1, 3, 4)] == 3 and p[(1, 4, 3)] == 1
    assert d["b_convention"].startswith("B = I + S1 + S2^-1")


def test_scheme_asymmetric(capsys):
    _, out, _ = run(["scheme", "--kind", "zmn", "--m", "3", "--n", "2", "--asymmetric"], capsys)
    assert len(json.loads(out)["classes"]) == 4


def test_walk_honeycomb_closed_form(capsys):
    code, out, _ = run(["walk", "--kind", "honeycomb", "--m", "3", "--t", "0:10:1001"], capsys)
    assert code == 0
    rs = [r for r in rows(out) if r["stratum_index"] == "0"]
    assert len(rs) == 1001
    assert float(rs[0]["probability"]) == pytest.approx(1.0, abs=1e-15)
    t = np.array([float(r["time"]) for r in rs])
    v = np.array([float(r["vertex_re"]) + 1j * float(r["vertex_im"]) for r in rs])
    ref = (np.cos(3 * t) + 6 * np.cos(np.sqrt(3) * t) + 2) / 9
    assert np.abs(v - ref).max() < 1e-12


def test_walk_oracle_footer(capsys):
    code, out, err = run(["walk", "--kind", "hexagonal", "--m", "5", "--oracle"], capsys)
    assert code == 0
    footer = out.strip().splitlines()[-1]
    assert footer.startswith("# max_abs_diff=")
    assert float(footer.split("=")[1]) < 1e-12
    assert "max |exact - oracle|" in err


def test_walk_oracle_cap(capsys):
    code, _, err = run(["walk", "--kind", "hexagonal", "--m", "5", "--oracle", "--oracle-cap", "10"], capsys)
    assert code == 1
    assert "cap of 10" in err


def test_walk_json_and_svg(tmp_path, capsys):
    code, out, _ = run(["walk", "--kind", "hexagonal", "--m", "4", "--t", "0:1:3", "--format", "json"], capsys)
    d = json.loads(out)
    assert code == 0 and len(d["times"]) == 3 and d["sizes"][0] == 1
    svg = tmp_path / "w.svg"
    run(["walk", "--m", "3", "--format", "svg", "--out", str(svg)], capsys)
    text = svg.read_text()
    assert text.startswith("<svg") and "<polyline" in text


def test_walk_infinite(capsys):
    code, out, _ = run(["walk", "--infinite", "--t", "0:2:3", "--points", "64"], capsys)
    assert code == 0
    assert float(rows(out)[0]["probability"]) == pytest.approx(1.0)


def test_walk_deterministic(capsys):
    argv = ["walk", "--kind", "honeycomb", "--m", "4", "--t", "0:30:50", "--oracle"]
    a = run(argv, capsys)[1]
    b = run(argv, capsys)[1]
    assert a == b
    header = json.loads(a.splitlines()[0][2:])
    assert header["kind"] == "honeycomb" and "version" in header and "normalizations" in header


def test_walk_polynomials(capsys):
    a = rows(run(["walk", "--m", "5", "--t", "0:4:5"], capsys)[1])
    b = rows(run(["walk", "--m", "5", "--t", "0:4:5", "--polynomials"], capsys)[1])
    for ra, rb in zip(a, b):
        assert float(ra["vertex_re"]) == pytest.approx(float(rb["vertex_re"]), abs=1e-12)


def test_converge(tmp_path, capsys):
    svg = tmp_path / "c.svg"
    code, out, _ = run(["converge", "--ms", "10,20", "--t", "0", "--svg", str(svg)], capsys)
    assert code == 0
    rs = rows(out)
    assert [r["m"] for r in rs] == ["10", "20"]
    assert all(float(r["pi"]) < 1e-12 for r in rs)
    assert "<polyline" in svg.read_text()


def test_verify_honeycomb(capsys):
    code, out, _ = run(["verify", "--kind", "honeycomb", "--m", "3"], capsys)
    assert code == 0
    assert "PASS  honeycomb m=3: susy identities" in out
    assert "FAIL" not in out


def test_verify_rank_three(capsys):
    code, out, _ = run(["verify", "--kind", "zmn", "--m", "4", "--n", "3"], capsys)
    assert code == 0, out


def test_stationary(capsys):
    _, out, _ = run(["stationary"], capsys)
    d = json.loads(out)
    assert len(d[0]["points"]) == 6


def test_polys_and_susy(capsys):
    code, out, _ = run(["polys", "--kind", "zmn", "--m", "7", "--asymmetric"], capsys)
    assert code == 0 and "z*zbar - 3" in out
    code, out, _ = run(["susy", "--m", "4"], capsys)
    assert code == 0 and json.loads(out)["all_pass"]


@pytest.mark.parametrize(
    "argv",
    [
        ["walk", "--m", "2"],
        ["scheme", "--n", "0", "--kind", "zmn"],
        ["walk", "--t", "0:1"],
        ["walk", "--points", "8", "--infinite"],
        ["verify", "--bogus"],
        ["converge", "--ms", "2,10"],
        ["scheme", "--kind", "honeycomb", "--n", "3"],
    ],
)
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as e:
        main(argv)
    assert e.value.code == 2
    assert "error" in capsys.readouterr().err


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "lattice_ctqw", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("lattice-ctqw")
