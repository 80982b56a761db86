import subprocess
import sys

import numpy as np
import pytest

from qlitho import background_penalty, kernel_2d, preset_fig2, save_mask, save_plan, mask_from_plan
from qlitho.cli import main
from qlitho.planner import FIG2_RIDGE


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def parse_metrics(text):
    return {k: float(v) for k, v in (line.split("=") for line in text.splitlines())}


def test_repro_fig2(tmp_path, capsys):
    code, out, _ = run(["repro", "fig2", "--out", str(tmp_path)], capsys)
    assert code == 0
    for name in ("fig2_map.pgm", "fig2_map.csv", "fig2_profile.csv", "fig2_metrics.txt"):
        assert (tmp_path / name).exists()
    metrics = parse_metrics((tmp_path / "fig2_metrics.txt").read_text())
    assert metrics == parse_metrics(out)
    assert 0.88 <= metrics["ridge_min_ratio"] <= 0.91
    expected = background_penalty(preset_fig2(), None, 512, ridge=FIG2_RIDGE)
    assert metrics["background"] == expected
    assert (tmp_path / "fig2_map.pgm").read_text().startswith("P2\n512 512\n65535\n")


def test_repro_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert run(["repro", "fig4", "--res", "64", "--out", str(d)], capsys)[0] == 0
    for name in ("fig4_map.pgm", "fig4_map.csv", "fig4_profile.csv", "fig4_metrics.txt"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_plates(capsys):
    code, out, _ = run(["plates", "--n", "6", "--ell", "5"], capsys)
    assert code == 0
    assert "plate 0: 1/7 lambda" in out and "plate 2: 4/7 lambda" in out
    assert "total: 5/7 lambda" in out


def test_plates_half_shift(capsys):
    code, out, _ = run(["plates", "--n", "6", "--ell", "2.5"], capsys)
    assert code == 0 and "half-shift plate: 1/14 lambda" in out


def test_kernel1d_n1(capsys):
    code, out, _ = run(["kernel1d", "--n", "1", "--ell", "1", "--samples", "5"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "x,value" and len(lines) == 6
    xs, vs = np.array([[float(t) for t in line.split(",")] for line in lines[1:]]).T
    np.testing.assert_allclose(xs, np.arange(5) / 10)
    np.testing.assert_allclose(vs, np.cos(2 * np.pi * (xs - 1 / 8)) ** 2, atol=1e-14)


def test_kernel2d_point(capsys):
    code, out, _ = run(["kernel2d", "--n", "6", "--lx", "2", "--ly", "1", "--x", "0.2", "--y", "0.1"], capsys)
    assert code == 0
    assert float(out.splitlines()[1].split(",")[2]) == kernel_2d(6, 2, 1, 0.2, 0.1)


def test_kernel2d_grid(tmp_path, capsys):
    dest = tmp_path / "k.csv"
    assert run(["kernel2d", "--n", "3", "--lx", "1", "--ly", "2", "--res", "8", "--out", str(dest)], capsys)[0] == 0
    assert len(dest.read_text().splitlines()) == 65


def test_counts(capsys):
    code, out, _ = run(["counts", "--n", "6"], capsys)
    assert code == 0
    assert out == f"pure_states=84\npatterns={2**49}\n"


def test_expose_from_plan_and_mask(tmp_path, capsys):
    save_plan(preset_fig2(), tmp_path / "plan.json")
    save_mask(mask_from_plan(preset_fig2()), tmp_path / "mask.pgm")
    for flag, path, prefix in [("--plan", "plan.json", "p"), ("--mask", "mask.pgm", "m")]:
        code, _, _ = run(["expose", flag, str(tmp_path / path), "--res", "32",
                          "--out", str(tmp_path / prefix)], capsys)
        assert code == 0
    assert (tmp_path / "p.pgm").read_bytes() == (tmp_path / "m.pgm").read_bytes()
    assert (tmp_path / "p.csv").exists()


def test_metrics_custom_ridge(capsys):
    code, out, _ = run(["metrics", "--preset", "fig4", "--res", "64", "--ridge", "2,3;5,6"], capsys)
    assert code == 0
    m = parse_metrics(out)
    assert set(m) == {"ridge_min", "ridge_max", "ridge_min_ratio", "ridge_ripple", "background"}
    assert 1.02 <= m["ridge_max"] <= 1.06


@pytest.mark.parametrize(
    "argv",
    [
        ["frobnicate"],
        ["plates", "--n", "6"],
        ["plates", "--n", "6", "--ell", "1.3"],
        ["kernel1d", "--n", "0", "--ell", "1"],
        ["expose", "--preset", "fig2", "--res", "4", "--out", "OUT"],
        ["expose", "--preset", "fig2", "--display-max", "-1", "--out", "OUT"],
        ["metrics", "--preset", "fig2", "--ridge", "1,2"],
        ["repro", "fig9"],
        ["kernel2d", "--n", "2", "--lx", "1", "--ly", "1", "--x", "0.1"],
    ],
)
def test_argument_errors_exit_2_and_write_nothing(argv, tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err
    assert list(tmp_path.iterdir()) == []


def test_runtime_error_exit_1(tmp_path, capsys):
    code, _, err = run(["metrics", "--plan", str(tmp_path / "nope.json")], capsys)
    assert code == 1 and "nope.json" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qlitho", "counts", "--n", "1"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout == "pure_states=4\npatterns=16\n"
