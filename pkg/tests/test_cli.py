import csv
import io
import xml.etree.ElementTree as ET

import pytest

from mvscn.cli import main
from mvscn.plot import zero_floor
from mvscn.presets import PRESETS, preset_jobs
from mvscn.results import COLUMNS

MINIMAL = "c = 8\nl = 16\narch = II\ndensity = 0.4\nce = 0.5\nseed = 1\ntrials = 3  # keep it quick\n"


def rows_of(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


@pytest.fixture
def config(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text(MINIMAL)
    return p


def test_run_smoke_and_determinism(config, tmp_path):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["run", str(config), "-o", str(out1)]) == 0
    assert main(["run", str(config), "-o", str(out2), "--threads", "2"]) == 0
    text = out1.read_text()
    assert text.splitlines()[0] == ",".join(COLUMNS)
    assert text == out2.read_text()
    row = rows_of(out1)[0]
    assert (row["arch"], row["M"], row["trials"], row["seed"]) == ("II", "131", "3", "1")
    assert int(row["queries"]) == 3 * 131


def test_run_overrides(config, tmp_path):
    out = tmp_path / "a.csv"
    assert main(["run", str(config), "-o", str(out), "--seed", "5", "--trials", "2",
                 "--set", "w_max=3,arch=III"]) == 0
    row = rows_of(out)[0]
    assert (row["seed"], row["trials"], row["w_max"], row["arch"]) == ("5", "2", "3", "III")


@pytest.mark.parametrize("bad", ["deletion_rate = 1.5", "bogus = 1", "just words", "M = 10"])
def test_run_rejects_bad_config(tmp_path, bad, capsys):
    p = tmp_path / "bad.cfg"
    p.write_text(MINIMAL + bad + "\n")
    out = tmp_path / "x.csv"
    assert main(["run", str(p), "-o", str(out)]) != 0
    assert "error" in capsys.readouterr().err
    assert not out.exists()


def test_run_missing_config(tmp_path):
    assert main(["run", str(tmp_path / "nope.cfg")]) != 0


def test_sweep_custom_axis(config, tmp_path):
    out = tmp_path / "w.csv"
    assert main(["sweep", str(config), "--axis", "w_max", "--values", "1..8", "--trials", "1",
                 "-o", str(out)]) == 0
    assert [r["w_max"] for r in rows_of(out)] == [str(k) for k in range(1, 9)]


def test_sweep_rejects_unknown_axis_and_preset(config):
    assert main(["sweep", str(config), "--axis", "gamma", "--values", "1"]) != 0
    assert main(["sweep", "--preset", "fig10"]) != 0


def test_preset_grids():
    assert set(PRESETS) == {f"fig{k}" for k in range(2, 10)}
    fig2 = preset_jobs("fig2")
    assert len(fig2) == 12 and all(j.axis == "density" for j in fig2)
    fig3 = preset_jobs("fig3")
    assert sorted((j.spec.config.w_max, j.spec.iterations) for j in fig3) == [(1, 1), (1, 4), (3, 1), (3, 4)]
    fig5 = preset_jobs("fig5")
    assert {j.spec.addition_rate for j in fig5} == {0.5} and {j.spec.deletion_rate for j in fig5} == {0.5}
    fig8 = preset_jobs("fig8")
    assert [(j.spec.arch.value, j.spec.config.w_max, j.spec.config.l, j.spec.M_resolved) for j in fig8] == [
        ("II", 3, 16, 131), ("II", 1, 23, 131)]
    assert {j.spec.arch.value for j in preset_jobs("fig9")} == {"III"}


def test_sweep_preset_fig8(tmp_path):
    out = tmp_path / "f8.csv"
    assert main(["sweep", "--preset", "fig8", "--trials", "1", "-o", str(out)]) == 0
    rows = rows_of(out)
    assert {(r["w_max"], r["l"]) for r in rows} == {("3", "16"), ("1", "23")}
    assert len(rows) == 20


def test_plot_fig3_series(tmp_path):
    csv_path, svg_path = tmp_path / "f3.csv", tmp_path / "f3.svg"
    assert main(["sweep", "--preset", "fig3", "--trials", "1", "-o", str(csv_path)]) == 0
    assert main(["plot", str(csv_path), "--x", "deletion_rate", "--series", "w_max,iterations",
                 "-o", str(svg_path)]) == 0
    root = ET.parse(svg_path).getroot()
    groups = [g for g in root.iter("{http://www.w3.org/2000/svg}g") if g.get("class") == "series"]
    assert len(groups) == 4
    assert "href" not in svg_path.read_text()


def test_plot_errors(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text(",".join(COLUMNS) + "\r\n")
    assert main(["plot", str(empty), "--x", "density_target"]) != 0
    assert main(["plot", str(empty), "--x", "nope"]) != 0


def test_zero_mer_floor():
    assert zero_floor([0.0, 0.02, 0.5]) == 0.01
    assert zero_floor([0.0, 0.0]) == 1e-6


def test_plot_handles_zero_mer(tmp_path, capsys):
    p = tmp_path / "z.csv"
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=["x", "mer"])
    w.writeheader()
    w.writerows([{"x": 0, "mer": 0.0}, {"x": 1, "mer": 0.01}])
    p.write_text(buf.getvalue())
    assert main(["plot", str(p), "--x", "x"]) == 0
    svg = capsys.readouterr().out
    assert 'fill="#ffffff" stroke' in svg  # hollow marker for the floored zero


def _demo_files(tmp_path, stored, queries):
    s, q = tmp_path / "store.txt", tmp_path / "query.txt"
    s.write_text("\n".join(stored) + "\n")
    q.write_text("\n".join(queries) + "\n")
    return str(s), str(q)


def test_demo_retrieves(tmp_path, capsys):
    s, q = _demo_files(tmp_path, ["0 1 2", "3 1 0"], ["0 1 ?", "? ? ?", "2 2 2"])
    assert main(["demo", s, q, "--l", "4", "--arch", "III"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "0 1 ? -> 0 1 2"
    assert lines[1] == "? ? ? -> AMBIGUOUS"
    assert lines[2] == "2 2 2 -> EMPTY"


def test_demo_rejects_malformed(tmp_path):
    s, q = _demo_files(tmp_path, ["0 1 2"], ["0 1"])
    assert main(["demo", s, q, "--l", "4"]) != 0
    s, q = _demo_files(tmp_path, ["0 1 x"], ["0 1 2"])
    assert main(["demo", s, q, "--l", "4"]) != 0
