import json
import math

import pytest

from bvortex.cli import main


def write_config(tmp_path, payload, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


class TestLandscapeCommand:
    def test_disk_has_empty_minima(self, tmp_path):
        cfg = write_config(tmp_path, {"domain": {"kind": "unit_disk"},
                                      "landscape": {"grid_n": 64}})
        out = tmp_path / "out"
        assert main(["landscape", "--config", cfg, "--out", str(out)]) == 0
        minima = json.loads((out / "minima.json").read_text())
        assert minima["minima"] == []
        header = (out / "landscape.csv").read_text().splitlines()
        assert header[0].startswith("# bvortex")
        assert header[1] == "t_p,t_q,W"

    def test_rectangle_contains_midpoint_pair(self, tmp_path):
        cfg = write_config(tmp_path, {"domain": {"kind": "rectangle", "L": 1.0, "H": 1.0},
                                      "landscape": {"grid_n": 96}})
        out = tmp_path / "out"
        assert main(["landscape", "--config", cfg, "--out", str(out)]) == 0
        minima = json.loads((out / "minima.json").read_text())["minima"]
        assert len(minima) == 1
        assert abs(minima[0]["t_p"] - 0.5) < 1e-6
        assert abs(minima[0]["t_q"] - 0.5) < 1e-6
        assert minima[0]["class"] == "isolated_min"
        assert len(minima[0]["hess"]) == 2

    def test_malformed_json_exit_2(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"domain": {"kind": "unit_disk"')
        assert main(["landscape", "--config", str(path), "--out", str(tmp_path)]) == 2

    def test_unknown_field_exit_2(self, tmp_path):
        cfg = write_config(tmp_path, {"domain": {"kind": "unit_disk"}, "grid": 7})
        assert main(["landscape", "--config", cfg, "--out", str(tmp_path)]) == 2

    def test_unknown_domain_field_exit_2(self, tmp_path):
        cfg = write_config(tmp_path, {"domain": {"kind": "unit_disk", "radius": 2}})
        assert main(["landscape", "--config", cfg, "--out", str(tmp_path)]) == 2


class TestSolveAndBranch:
    def test_solve_writes_record(self, tmp_path):
        cfg = write_config(tmp_path, {
            "domain": {"kind": "regular_polygon_disk", "N": 4, "r": 0.995},
            "nonlinearity": {"name": "cubic"},
            "solve": {"eps": 0.2, "n_modes": 256,
                      "vortices": [math.pi / 4, 5 * math.pi / 4]}})
        out = tmp_path / "out"
        assert main(["solve", "--config", cfg, "--out", str(out)]) == 0
        rec = json.loads((out / "solution.json").read_text())
        assert rec["stable"] is True
        assert len(rec["vortices"]) == 2
        assert rec["residual_norm"] < 1e-9
        assert rec["_meta"]["tool"] == "bvortex"

    def test_branch_csv_schema(self, tmp_path):
        cfg = write_config(tmp_path, {
            "domain": {"kind": "regular_polygon_disk", "N": 4, "r": 0.995},
            "nonlinearity": {"name": "cubic"},
            "branch": {"eps_start": 0.2, "eps_end": 0.1, "n_steps": 3,
                       "n_modes": 256, "vortices": [math.pi / 4, 5 * math.pi / 4]}})
        out = tmp_path / "out"
        assert main(["branch", "--config", cfg, "--out", str(out)]) == 0
        lines = (out / "branch.csv").read_text().splitlines()
        assert lines[1] == "eps,energy_total,lambda_min,vortex1,vortex2,stable"
        assert len(lines) == 2 + 3
        assert lines[2].endswith(",true")

    def test_missing_vortices_exit_2(self, tmp_path):
        cfg = write_config(tmp_path, {
            "domain": {"kind": "unit_disk"},
            "solve": {"eps": 0.2, "n_modes": 128}})
        assert main(["solve", "--config", cfg, "--out", str(tmp_path)]) == 2


class TestLayerAndCf:
    def test_layer_profile_csv(self, tmp_path):
        cfg = write_config(tmp_path, {"nonlinearity": {"name": "sine", "a": 1.0},
                                      "layer": {"X": 60.0, "n": 512}})
        out = tmp_path / "out"
        assert main(["layer", "--config", cfg, "--out", str(out)]) == 0
        lines = (out / "profile.csv").read_text().splitlines()
        assert lines[1] == "x,v"
        payload = json.loads((out / "layer.json").read_text())
        assert payload["residual"] <= 1e-10

    def test_cf_json_fields(self, tmp_path):
        cfg = write_config(tmp_path, {
            "nonlinearity": {"name": "sine", "a": 1.0},
            "cf": {"R_list": [16, 32, 64, 128, 176], "n": 2048}})
        out = tmp_path / "out"
        assert main(["cf", "--config", cfg, "--out", str(out)]) == 0
        payload = json.loads((out / "cf.json").read_text())
        assert set(payload) >= {"R_list", "I_values", "cf_estimate", "slope", "a"}
        assert abs(payload["cf_estimate"] - payload["closed_form"]) < 2e-3


class TestVerifyCommand:
    def test_t0_suite_passes(self, tmp_path):
        cfg = write_config(tmp_path, {"verify": {"suite": "t0_root"}})
        out = tmp_path / "out"
        assert main(["verify", "--config", cfg, "--out", str(out)]) == 0
        report = json.loads((out / "verify_t0_root.json").read_text())
        assert report["passed"] is True

    def test_failing_suite_exit_4(self, tmp_path):
        cfg = write_config(tmp_path, {
            "verify": {"suite": "t0_root", "params": {"tol": 1e-12}}})
        assert main(["verify", "--config", cfg, "--out", str(tmp_path)]) == 4

    def test_unknown_suite_exit_2(self, tmp_path):
        cfg = write_config(tmp_path, {"verify": {"suite": "bogus"}})
        assert main(["verify", "--config", cfg, "--out", str(tmp_path)]) == 2


class TestDeterminism:
    def test_byte_identical_reruns(self, tmp_path):
        cfg = write_config(tmp_path, {
            "domain": {"kind": "regular_polygon_disk", "N": 4, "r": 0.995},
            "landscape": {"grid_n": 64}})
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            assert main(["landscape", "--config", cfg, "--out", str(out)]) == 0
            outs.append(((out / "landscape.csv").read_bytes(),
                         (out / "minima.json").read_bytes()))
        assert outs[0] == outs[1]

    def test_config_hash_embedded(self, tmp_path):
        cfg = write_config(tmp_path, {"domain": {"kind": "unit_disk"},
                                      "landscape": {"grid_n": 64}})
        out = tmp_path / "out"
        main(["landscape", "--config", cfg, "--out", str(out)])
        meta = json.loads((out / "minima.json").read_text())["_meta"]
        assert meta["tool"] == "bvortex" and len(meta["config_sha256"]) == 16
        assert "version" in meta
