import json
import math
from io import StringIO

import pandas as pd
import pytest
from typer.testing import CliRunner

from starlike_radii.cli import app, grid_axis, main, parse_regions
from starlike_radii.config import THREADS_ENV_VAR
from starlike_radii.errors import NoRootError, ParameterError
from starlike_radii.regions import SQRT2, RegionTag

runner = CliRunner()


def _rows(output: str) -> pd.DataFrame:
    return pd.read_csv(StringIO(output), keep_default_na=False, dtype={"sharp": str})


def test_radius_k1_parabolic():
    result = runner.invoke(app, ["radius", "--class", "K1", "--b", "-1", "--region", "parabolic"])
    assert result.exit_code == 0, result.output
    rows = _rows(result.output)
    assert len(rows) == 1
    assert rows.loc[0, "rho"] == pytest.approx(0.2021347, abs=1e-6)
    assert rows.loc[0, "method"] == "polynomial"
    assert rows.loc[0, "sharp"] == "true"


def test_radius_order_alpha():
    result = runner.invoke(app, ["radius", "--class", "K1", "--b", "-1", "--region", "order", "--alpha", "0.5"])
    assert result.exit_code == 0, result.output
    assert _rows(result.output).loc[0, "rho"] == pytest.approx(0.202135, abs=1e-5)


def test_radius_k3_from_normalized_parameters():
    result = runner.invoke(app, ["radius", "--class", "K3", "--p1", "0", "--p2", "0", "--region", "order"])
    assert result.exit_code == 0, result.output
    row = _rows(result.output).loc[0]
    assert row["rho"] == pytest.approx(0.350864113, abs=1e-9)
    assert row["sharp"] == ""
    raw = runner.invoke(app, ["radius", "--class", "K3", "--b", "0", "--c", "0", "--region", "order", "--alpha", "0"])
    assert _rows(raw.output).loc[0, "rho"] == row["rho"]


def test_radius_normalized_and_raw_agree():
    raw = runner.invoke(app, ["radius", "--class", "K2", "--b", "-1", "--c", "-1", "--region", "lune"])
    normalized = runner.invoke(app, ["radius", "--class", "K2", "--p1", "2", "--p2", "2", "--region", "lune"])
    assert _rows(raw.output).loc[0, "rho"] == _rows(normalized.output).loc[0, "rho"]
    assert _rows(raw.output).loc[0, "rho"] == pytest.approx(0.134993, abs=1e-5)


def test_radius_by_margin_oracle():
    args = ["radius", "--class", "K1", "--b", "-1", "--region", "parabolic", "--method", "margin"]
    result = runner.invoke(app, args)
    assert result.exit_code == 0, result.output
    row = _rows(result.output).loc[0]
    assert row["method"] == "margin_oracle"
    assert row["rho"] == pytest.approx(0.2021347, abs=1e-6)


def test_radius_json():
    args = ["radius", "--class", "K2", "--b", "-1", "--c", "-1", "--region", "exponential", "--format", "json"]
    result = runner.invoke(app, args)
    assert result.exit_code == 0, result.output
    (row,) = json.loads(result.output)
    assert row["class"] == "K2"
    assert row["alpha"] is None
    assert row["rho"] == pytest.approx(0.144684, abs=1e-5)


@pytest.mark.parametrize(
    "args",
    [
        ["--class", "K1", "--b", "1.5", "--region", "parabolic"],
        ["--class", "K1", "--b", "-1", "--p1", "2", "--region", "parabolic"],
        ["--class", "K2", "--region", "parabolic"],
        ["--class", "K1", "--b", "-1", "--region", "order", "--alpha", "1"],
        ["--class", "K1", "--b", "-1", "--region", "sine", "--alpha", "0.3"],
    ],
)
def test_radius_parameter_errors(args):
    result = runner.invoke(app, ["radius", *args])
    assert result.exit_code == 2
    assert "error:" in result.output


def test_usage_errors_exit_with_one(capsys):
    assert main(["radius", "--class", "K9", "--b", "0", "--region", "parabolic"]) == 1
    assert main(["radius", "--class", "K1", "--b", "0", "--region", "ellipse"]) == 1
    assert main(["-v", "-q", "radius", "--class", "K1", "--b", "0", "--region", "sine"]) == 1
    assert main(["no-such-command"]) == 1


def test_main_returns_zero_and_prints(capsys):
    assert main(["radius", "--class", "K1", "--b", "-1", "--region", "sine"]) == 0
    assert _rows(capsys.readouterr().out).loc[0, "region"] == "sine"


def test_main_maps_parameter_errors():
    assert main(["radius", "--class", "K1", "--b", "2", "--region", "sine"]) == 2


def test_no_root_exits_with_three(monkeypatch):
    def no_root(spec, region):
        raise NoRootError(f"No root for {spec} {region}")

    monkeypatch.setattr("starlike_radii.cli.polynomial_radius", no_root)
    result = runner.invoke(app, ["radius", "--class", "K1", "--b", "-1", "--region", "parabolic"])
    assert result.exit_code == 3
    assert "No root" in result.output


def test_quiet_silences_info_logs(capsys, restore_logging):
    assert main(["--quiet", "radius", "--class", "K1", "--b", "-1", "--region", "parabolic"]) == 0
    captured = capsys.readouterr()
    assert captured.err == ""
    assert "parabolic" in captured.out


def test_table_k1_default_grid():
    result = runner.invoke(app, ["table", "--class", "K1"])
    assert result.exit_code == 0, result.output
    rows = _rows(result.output)
    assert len(rows) == 9 * 10
    assert rows["b"].tolist() == sorted(rows["b"].tolist())
    assert set(rows.loc[rows["b"] == 0, "sharp"]) == {""}


def test_table_row_matches_radius():
    table = runner.invoke(app, ["table", "--class", "K1", "--region", "parabolic"])
    radius = runner.invoke(app, ["radius", "--class", "K1", "--b", "0", "--region", "parabolic"])
    assert radius.output.splitlines()[1] in table.output.splitlines()


def test_table_single_k2_cell():
    args = ["table", "--class", "K2", "--b-start", "-1", "--b-stop", "-1", "--c-start", "-1", "--c-stop", "-1"]
    result = runner.invoke(app, [*args, "--region", "lune", "--region", "order", "--alpha", "0", "--alpha", "0.5"])
    assert result.exit_code == 0, result.output
    rows = _rows(result.output)
    assert rows["region"].tolist() == ["lune", "order", "order"]
    lune = rows.loc[rows["region"] == "lune"].iloc[0]
    assert lune["rho"] == pytest.approx(0.134993, abs=1e-5)
    assert lune["sharp"] == "true"


def test_table_rejects_invalid_pairs_unless_skipped():
    args = ["table", "--class", "K2", "--b-step", "1", "--c-step", "1", "--region", "parabolic"]
    assert runner.invoke(app, args).exit_code == 2
    result = runner.invoke(app, [*args, "--skip-invalid"])
    assert result.exit_code == 0, result.output
    rows = _rows(result.output)
    assert all(abs(2 * b - c) <= 1 for b, c in zip(rows["b"], rows["c"]))
    assert len(rows) == 5


def test_table_out_is_deterministic(tmp_path):
    args = ["table", "--class", "K1", "--b-step", "0.5", "--region", "sine", "--region", "nephroid"]
    first = runner.invoke(app, [*args, "--out", str(tmp_path / "a.csv")])
    second = runner.invoke(app, [*args, "--out", str(tmp_path / "b.csv")])
    assert first.exit_code == second.exit_code == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert len(pd.read_csv(tmp_path / "a.csv")) == 10


def test_table_json(tmp_path):
    path = tmp_path / "radii.json"
    args = ["table", "--class", "K1", "--b-step", "1", "--region", "cardioid", "--out", str(path), "--format", "json"]
    assert runner.invoke(app, args).exit_code == 0
    rows = json.loads(path.read_text())
    assert [row["b"] for row in rows] == [-1.0, 0.0, 1.0]


def test_invalid_thread_setting(monkeypatch):
    monkeypatch.setenv(THREADS_ENV_VAR, "zero")
    result = runner.invoke(app, ["table", "--class", "K1", "--region", "sine"])
    assert result.exit_code == 2
    assert THREADS_ENV_VAR in result.output


def test_verify_lemma():
    result = runner.invoke(app, ["verify", "--lemma", "--b", "1", "--alpha", "0", "--trials", "10000", "--seed", "7"])
    assert result.exit_code == 0, result.output
    assert "no violations" in result.output


def test_verify_restricted_matrix(tmp_path):
    path = tmp_path / "report.json"
    args = ["verify", "--class", "K1", "--region", "parabolic", "--trials", "200", "--out", str(path)]
    result = runner.invoke(app, args)
    assert result.exit_code == 0, result.output
    assert "All 13 cells and 15 lemma checks passed" in result.output
    payload = json.loads(path.read_text())
    assert len(payload["cells"]) == 13
    assert {row["passed"] for row in payload["cells"]} == {"true"}
    assert len(payload["lemma"]) == 15


def test_verify_catches_tampering():
    args = ["verify", "--class", "K1", "--region", "parabolic", "--trials", "100", "--tamper", "K1-parabolic:c2:+0.1"]
    result = runner.invoke(app, args)
    assert result.exit_code == 4
    assert "FAILED K1-parabolic" in result.output


def test_verify_bad_tamper():
    result = runner.invoke(app, ["verify", "--class", "K1", "--region", "sine", "--tamper", "K1-sine"])
    assert result.exit_code == 2


def test_plot_data_lemniscate(tmp_path):
    args = ["plot-data", "--out-dir", str(tmp_path), "--class", "K1", "--b", "-1", "--region", "lemniscate"]
    result = runner.invoke(app, args)
    assert result.exit_code == 0, result.output
    assert sorted(p.name for p in tmp_path.iterdir()) == [
        "K1_lemniscate_boundary.csv",
        "K1_lemniscate_image.csv",
        "K1_lemniscate_touch.csv",
    ]
    touch = pd.read_csv(tmp_path / "K1_lemniscate_touch.csv").iloc[0]
    assert touch["u"] == pytest.approx(SQRT2, abs=1e-6)
    assert touch["direction"] == "+"
    assert bool(touch["certified"])
    image = pd.read_csv(tmp_path / "K1_lemniscate_image.csv")
    assert len(image) == 720
    assert image.loc[0, "u"] == pytest.approx(SQRT2, abs=1e-6)


def test_plot_data_region_only(tmp_path):
    args = ["plot-data", "--out-dir", str(tmp_path), "--region", "nephroid", "--region-only", "--samples", "64"]
    assert runner.invoke(app, args).exit_code == 0
    boundary = pd.read_csv(tmp_path / "nephroid_boundary.csv")
    # the curve passes through both touch points on the real axis
    for point in (5 / 3, 1 / 3):
        assert ((boundary["u"] - point).abs() + boundary["v"].abs()).min() < 1e-8
    assert boundary["theta"].iloc[-1] == pytest.approx(2 * math.pi)


def test_plot_data_without_extremal(tmp_path):
    args = ["plot-data", "--out-dir", str(tmp_path), "--class", "K3", "--b", "0", "--c", "0", "--region", "sine"]
    result = runner.invoke(app, args)
    assert result.exit_code == 2
    assert "K3" in result.output


def test_grid_axis():
    assert grid_axis(-1.0, 1.0, 0.25) == [-1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0]
    assert grid_axis(0.5, 0.5, 0.1) == [0.5]
    for start, stop, step in [(0.0, 1.0, 0.0), (1.0, 0.0, 0.5), (0.0, 1.0, 0.3)]:
        with pytest.raises(ParameterError):
            grid_axis(start, stop, step)


def test_parse_regions():
    assert len(parse_regions(None, None)) == 10
    regions = parse_regions([RegionTag.ORDER, RegionTag.SINE, RegionTag.ORDER], [0.0, 0.5])
    assert [str(region) for region in regions] == ["order(0)", "order(0.5)", "sine"]
