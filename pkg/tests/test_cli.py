import json

import pytest

from disagg.cli import main

GB = 1e9


def run_cli(*argv):
    return main(list(argv))


class TestClassifyCommand:
    def test_single_app_prints_zone(self, capsys, tmp_path):
        code = run_cli("classify", "--app", "deepcam", "--machine", "default",
                       "--scope", "global", "--format", "text")
        assert code == 0
        out = capsys.readouterr().out
        assert "DeepCAM: Green" in out

    def test_report_and_figure_written(self, tmp_path):
        out = tmp_path / "artifacts"
        code = run_cli("classify", "--scope", "rack", "--out", str(out))
        assert code == 0
        report = json.loads((out / "classify_report.json").read_text())
        zones = {r["name"]: r["zone"] for r in report["results"]}
        assert zones["GEMM"] == "Grey"
        assert (out / "zones_rack.svg").exists()
        assert (out / "zones_rack.csv").exists()
        assert (out / "run_manifest.json").exists()


class TestTopologyCommand:
    def test_reference_row(self, capsys):
        code = run_cli("topology", "--ref", "disagg-24x32-28pct", "--format", "text")
        assert code == 0
        out = capsys.readouterr().out
        assert "768" in out and "6624" in out

    def test_unknown_reference(self, capsys):
        code = run_cli("topology", "--ref", "nonelike", "--format", "text")
        assert code == 2
        assert "unknown reference" in capsys.readouterr().err

    def test_custom_spec_file(self, tmp_path, capsys):
        spec = {"kind": "dragonfly", "name": "tiny", "groups": 4,
                "switches_per_group": 2, "inter_links_per_pair": 1,
                "endpoints": 64, "link_bandwidth": "89 GB/s"}
        path = tmp_path / "spec.json"
        path.write_text(json.dumps(spec))
        code = run_cli("topology", "--spec", str(path), "--format", "text")
        assert code == 0
        assert "tiny" in capsys.readouterr().out

    def test_csv_artifact(self, tmp_path):
        out = tmp_path / "topo"
        code = run_cli("topology", "--format", "csv", "--out", str(out))
        assert code == 0
        text = (out / "topology_report.csv").read_text()
        assert "perlmutter" in text and "1018" in text


class TestOtherCommands:
    def test_design_space_text(self, capsys):
        code = run_cli("design-space", "--memory-nodes", "1000,10000",
                       "--demand", "1.0,0.1", "--format", "text")
        assert code == 0
        out = capsys.readouterr().out
        assert "M=1000" in out

    def test_design_space_csv(self, tmp_path):
        out = tmp_path / "ds"
        code = run_cli("design-space", "--format", "csv", "--out", str(out))
        assert code == 0
        assert (out / "design_space_capacity.csv").exists()
        assert (out / "design_space_bandwidth.csv").exists()

    def test_roofline_prints_knees(self, capsys):
        code = run_cli("roofline", "--format", "text")
        assert code == 0
        out = capsys.readouterr().out
        assert "65.5" in out and "131.1" in out and "234.1" in out

    def test_concurrency_markers(self, capsys):
        code = run_cli("concurrency", "--format", "text",
                       "--marker", "os-page:4 KB:1")
        assert code == 0
        assert "os-page" in capsys.readouterr().out

    def test_apps_list(self, capsys):
        code = run_cli("apps", "--format", "text")
        assert code == 0
        out = capsys.readouterr().out
        for name in ("ResNet-50", "STREAM", "SuperLU"):
            assert name in out

    def test_apps_counters_csv(self, tmp_path, capsys):
        path = tmp_path / "counters.csv"
        path.write_text("dram__sectors_read.sum,100\ndram__sectors_write.sum,50\n")
        code = run_cli("apps", "--counters-csv", str(path), "--remote-bytes", "4800",
                       "--format", "text")
        assert code == 0
        assert "L:R from counters: 1" in capsys.readouterr().out

    def test_user_apps_file(self, tmp_path, capsys):
        apps = [{"name": "mine", "lr": 10, "footprint": "1 TB"},
                {"name": "modeled", "model": "align",
                 "params": {"m": 200, "n": 780, "pairs": 1000}}]
        path = tmp_path / "apps.json"
        path.write_text(json.dumps(apps))
        code = run_cli("classify", "--apps-file", str(path), "--format", "text")
        assert code == 0
        out = capsys.readouterr().out
        assert "mine:" in out and "modeled:" in out

    def test_workload_sizing(self, tmp_path, capsys):
        entries = [{"app": "ResNet-50", "node_hours": 90},
                   {"app": {"name": "remote-heavy", "lr": 1927,
                            "footprint": "4096 GB"}, "node_hours": 10}]
        path = tmp_path / "entries.json"
        path.write_text(json.dumps(entries))
        out = tmp_path / "wl"
        code = run_cli("workload", "--entries", str(path), "--out", str(out))
        assert code == 0
        assert "ratio 9" in capsys.readouterr().out
        report = json.loads((out / "workload_report.json").read_text())
        assert report["ratio"] == pytest.approx(9.0)


class TestErrorPaths:
    def test_unknown_subcommand_exits_2(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            run_cli("frobnicate")
        assert excinfo.value.code == 2
        assert "usage" in capsys.readouterr().err.lower()

    def test_unknown_flag_exits_2(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            run_cli("roofline", "--no-such-flag")
        assert excinfo.value.code == 2

    def test_schema_violation_names_field(self, tmp_path, capsys):
        bad = {"compute_nodes": 10, "memory_nodes": 1, "demand_fraction": 7,
               "compute_node": {"local_memory": "HBM3", "nic": "PCIe6"},
               "memory_node": {"capacity": "4 TB", "nic": "PCIe6"}}
        path = tmp_path / "machine.json"
        path.write_text(json.dumps(bad))
        code = run_cli("classify", "--machine", str(path), "--format", "text")
        assert code == 1
        assert "demand_fraction" in capsys.readouterr().err

    def test_missing_file_reports_error(self, capsys):
        code = run_cli("classify", "--machine", "/no/such/file.json", "--format", "text")
        assert code == 1
        assert "error" in capsys.readouterr().err


class TestConfigDir:
    def test_env_var_resolves_relative_paths(self, tmp_path, monkeypatch, capsys):
        machine = {"compute_nodes": 100, "memory_nodes": 10, "demand_fraction": 0.5,
                   "compute_node": {"local_memory": "HBM3", "nic": "PCIe6"},
                   "memory_node": {"capacity": "4096 GB", "nic": "PCIe6"}}
        (tmp_path / "small.json").write_text(json.dumps(machine))
        monkeypatch.setenv("DISAGG_CONFIG_DIR", str(tmp_path))
        code = run_cli("classify", "--machine", "small.json", "--app", "STREAM",
                       "--format", "text")
        assert code == 0
        assert "STREAM" in capsys.readouterr().out

    def test_cli_defaults_file_supplies_flags(self, tmp_path, monkeypatch, capsys):
        (tmp_path / "cli_defaults.json").write_text(json.dumps({
            "*": {"format": "text"},
            "classify": {"scope": "rack"},
        }))
        monkeypatch.setenv("DISAGG_CONFIG_DIR", str(tmp_path))
        code = run_cli("classify", "--app", "GEMM")
        assert code == 0
        assert "Grey (limiter: rack-bisection)" in capsys.readouterr().out

    def test_explicit_flag_beats_defaults_file(self, tmp_path, monkeypatch, capsys):
        (tmp_path / "cli_defaults.json").write_text(json.dumps({
            "classify": {"scope": "rack", "format": "text"},
        }))
        monkeypatch.setenv("DISAGG_CONFIG_DIR", str(tmp_path))
        code = run_cli("classify", "--app", "GEMM", "--scope", "global")
        assert code == 0
        assert "global-bisection" in capsys.readouterr().out


class TestReproduce:
    def test_full_run(self, tmp_path, capsys):
        out = tmp_path / "repro"
        code = run_cli("reproduce", "--out", str(out))
        assert code == 0
        stdout = capsys.readouterr().out
        assert "FAIL" not in stdout
        report = json.loads((out / "golden_report.json").read_text())
        assert report["failures"] == 0
        for name in (
            "design_space_capacity.svg", "design_space_bandwidth.svg",
            "roofline_injection.svg", "roofline_bisection.svg",
            "zones_rack.svg", "zones_global.svg", "concurrency.svg",
            "topology_report.csv", "apps.csv", "run_manifest.json",
        ):
            assert (out / name).exists(), name
