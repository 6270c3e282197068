import json
import math
from pathlib import Path

import numpy as np
import pytest

from nullgeo.cli import (
    DimensionMismatch,
    Scenario,
    ScenarioParseError,
    load_scenario,
    main,
    parse_scenario,
    serialize_scenario,
)

ROOT = Path(__file__).resolve().parents[1]
SCENARIOS = ROOT / "scenarios"


def write(tmp_path, name, payload):
    p = tmp_path / name
    p.write_text(json.dumps(payload))
    return str(p)


class TestParsing:
    def test_bad_json_exit_code(self, tmp_path, capsys):
        p = tmp_path / "broken.json"
        p.write_text("{not json")
        assert main(["classify", "--scenario", str(p), "--out", str(tmp_path)]) == 2
        assert "error:" in capsys.readouterr().err

    def test_unknown_mode_is_parse_error(self, tmp_path):
        path = write(tmp_path, "s.json", {"mode": "simulate"})
        assert main(["classify", "--scenario", path, "--out", str(tmp_path)]) == 2

    def test_mode_mismatch_is_parse_error(self, tmp_path):
        path = write(tmp_path, "s.json", {"mode": "search", "family": [[[0.0]]]})
        assert main(["classify", "--scenario", path, "--out", str(tmp_path)]) == 2

    def test_dimension_mismatch_exit_code(self, tmp_path):
        payload = {
            "mode": "evolve",
            "c": 0.0,
            "C0": [[0.0, 0.0], [0.0, 0.0]],
            "A0": [[[1.0]]],
            "t_grid": {"t_end": 1.0, "samples": 3},
        }
        path = write(tmp_path, "s.json", payload)
        assert main(["evolve", "--scenario", path, "--out", str(tmp_path)]) == 3

    def test_nonsquare_matrix_is_dimension_error(self, tmp_path):
        with pytest.raises(DimensionMismatch):
            parse_scenario({"mode": "classify", "C0": [[1.0, 0.0]]})

    def test_missing_fields_is_parse_error(self, tmp_path):
        path = write(tmp_path, "s.json", {"mode": "evolve"})
        assert main(["evolve", "--scenario", path, "--out", str(tmp_path)]) == 2

    def test_round_trip_is_idempotent(self):
        scn = load_scenario(SCENARIOS / "evolve_skew_hyperbolic.json")
        text = serialize_scenario(scn)
        again = serialize_scenario(parse_scenario(json.loads(text)))
        assert text == again


class TestEvolve:
    def test_writes_trajectory(self, tmp_path):
        code = main(
            [
                "evolve",
                "--scenario",
                str(SCENARIOS / "evolve_skew_hyperbolic.json"),
                "--out",
                str(tmp_path),
            ]
        )
        assert code == 0
        csv_path = tmp_path / "evolve_skew_hyperbolic.trajectory.csv"
        lines = csv_path.read_text().strip().splitlines()
        header = lines[0].split(",")
        assert header[:3] == ["t", "det_J", "C_norm"]
        assert "A0_norm" in header
        first = lines[1].split(",")
        # t = 0 row: det J = 1, C matches the input tensor (norm sqrt(2))
        assert float(first[0]) == 0.0
        assert float(first[1]) == 1.0
        assert float(first[2]) == pytest.approx(math.sqrt(2.0), abs=1e-15)

    def test_singular_horizon_exit_code(self, tmp_path, capsys):
        payload = {
            "mode": "evolve",
            "c": 0.0,
            "C0": [[2.0, 0.0], [0.0, -3.0]],
            "A0": [[[1.0, 0.0], [0.0, 1.0]]],
            "t_grid": {"t_end": 1.0, "samples": 5},
        }
        path = write(tmp_path, "s.json", payload)
        assert main(["evolve", "--scenario", path, "--out", str(tmp_path)]) == 4
        assert "b_max" in capsys.readouterr().err


class TestClassify:
    def test_flat_line_verdict(self, tmp_path):
        code = main(
            [
                "classify",
                "--scenario",
                str(SCENARIOS / "classify_flat_line.json"),
                "--out",
                str(tmp_path),
            ]
        )
        assert code == 0
        rec = json.loads((tmp_path / "classify_flat_line.verdict.json").read_text())
        assert rec["verdict"]["consistent"] is False
        assert rec["verdict"]["violated_clause"] == "II1"
        txt = (tmp_path / "classify_flat_line.verdict.txt").read_text()
        assert "violates (ii.1)" in txt

    def test_consistent_ray_embeds_decay(self, tmp_path):
        payload = {
            "mode": "classify",
            "c": -1.0,
            "C0": [[0.0, 1.0], [-1.0, 0.0]],
            "A0": [[[1.0, 0.0], [0.0, -1.0]]],
            "domain": {"kind": "ray"},
        }
        path = write(tmp_path, "s.json", payload)
        assert main(["classify", "--scenario", path, "--out", str(tmp_path)]) == 0
        rec = json.loads((tmp_path / "s.verdict.json").read_text())
        assert rec["verdict"]["consistent"] is True
        assert rec["decay"]["global_alpha_limit"] == "Zero"


class TestSearch:
    def test_worked_family_found(self, tmp_path):
        code = main(
            [
                "search",
                "--scenario",
                str(SCENARIOS / "search_worked_family.json"),
                "--out",
                str(tmp_path),
            ]
        )
        assert code == 0
        rec = json.loads((tmp_path / "search_worked_family.direction.json").read_text())
        assert rec["result"] == "found"
        np.testing.assert_allclose(np.abs(rec["coeffs"]), [0.0, 0.0, 1.0], atol=1e-10)
        assert rec["lambda"] == pytest.approx(-1.0, abs=1e-10)

    def test_absent(self, tmp_path):
        payload = {
            "mode": "search",
            "family": [
                [[1.0, 0.0], [0.0, -1.0]],
                [[0.0, 1.0], [1.0, 0.0]],
            ],
        }
        path = write(tmp_path, "s.json", payload)
        assert main(["search", "--scenario", path, "--out", str(tmp_path)]) == 0
        rec = json.loads((tmp_path / "s.direction.json").read_text())
        assert rec == {"result": "absent"}


class TestCatalogAndCheck:
    def test_catalog_entry_verified(self, tmp_path):
        code = main(
            [
                "catalog",
                "--scenario",
                str(SCENARIOS / "catalog_hyperbolic_cylinder.json"),
                "--out",
                str(tmp_path),
            ]
        )
        assert code == 0
        rec = json.loads(
            (tmp_path / "catalog_hyperbolic_cylinder.model.json").read_text()
        )
        assert rec["name"] == "hyperbolic_cylinder"
        assert all(rec["verified"].values())

    def test_unknown_catalog_entry(self, tmp_path):
        payload = {"mode": "catalog", "catalog": {"entry": "nope"}}
        path = write(tmp_path, "s.json", payload)
        assert main(["catalog", "--scenario", path, "--out", str(tmp_path)]) == 2

    def test_check_without_scenario(self, tmp_path, capsys):
        assert main(["check", "--out", str(tmp_path)]) == 0
        out = capsys.readouterr().out
        assert "PASS" in out and "FAIL" not in out
        assert (tmp_path / "check.report.txt").exists()


class TestDeterminism:
    def test_two_runs_byte_identical(self, tmp_path):
        outs = []
        for sub in ("a", "b"):
            d = tmp_path / sub
            d.mkdir()
            main(
                [
                    "evolve",
                    "--scenario",
                    str(SCENARIOS / "evolve_skew_hyperbolic.json"),
                    "--out",
                    str(d),
                ]
            )
            outs.append((d / "evolve_skew_hyperbolic.trajectory.csv").read_bytes())
        assert outs[0] == outs[1]
