import json

import pytest

from disagg.appmodel import builtin_apps
from disagg.classify import classify, zone_config_from_machine
from disagg.design_space import build_grid
from disagg.errors import ConfigError
from disagg.report import (
    FigureSpec,
    canonical_json,
    config_digest,
    emit_figure,
    format_text_table,
    grid_csv_rows,
    render_concurrency,
    render_heatmap,
    render_roofline,
    render_topology_table,
    render_zones,
    roofline_csv_rows,
    write_csv,
    write_json,
    write_run_manifest,
    zones_csv_rows,
)
from disagg.roofline import RooflineConfig, roofline_curve
from disagg.topology import build_report, reference_machines

M_VALUES = [100, 1000, 10000]
F_VALUES = [1.0, 0.5, 0.1]


@pytest.fixture()
def grid(machine):
    return build_grid(machine, M_VALUES, F_VALUES)


@pytest.fixture()
def zone_cfg(machine):
    return zone_config_from_machine(machine, scope="global")


class TestCsvJson:
    def test_grid_rows_follow_f_bins(self, grid):
        header, rows = grid_csv_rows(grid, "capacity")
        assert header == ["demand_fraction", "M=100", "M=1000", "M=10000"]
        assert [row[0] for row in rows] == F_VALUES
        # Capacity in TB: 10000 nodes at f=1 see 10000*4.096TB/10000.
        assert rows[0][3] == pytest.approx(4.096)

    def test_csv_is_stable(self, tmp_path, grid):
        header, rows = grid_csv_rows(grid, "bandwidth")
        a = write_csv(tmp_path / "a.csv", header, rows).read_bytes()
        b = write_csv(tmp_path / "b.csv", header, rows).read_bytes()
        assert a == b

    def test_json_canonical_ordering(self, tmp_path):
        first = write_json(tmp_path / "a.json", {"b": 1, "a": 2}).read_text()
        second = canonical_json({"a": 2, "b": 1})
        assert first == second
        assert first.index('"a"') < first.index('"b"')

    def test_manifest_digest_stable_and_input_sensitive(self, tmp_path):
        path = write_run_manifest(tmp_path, "roofline", {"x": 1})
        digest_one = json.loads(path.read_text())["config_digest"]
        assert digest_one == config_digest({"x": 1})
        assert digest_one != config_digest({"x": 2})

    def test_text_table_alignment(self):
        text = format_text_table(["name", "v"], [["a", 1], ["long-name", 2.5]])
        lines = text.splitlines()
        assert lines[0].startswith("name")
        assert len(lines) == 4


class TestDeterminism:
    """Identical inputs must yield byte-identical SVG artifacts."""

    def _render_twice(self, tmp_path, render):
        first = render(tmp_path / "one.svg").read_bytes()
        second = render(tmp_path / "two.svg").read_bytes()
        assert first == second
        assert b"<svg" in first

    def test_heatmap(self, tmp_path, grid):
        self._render_twice(tmp_path, lambda p: render_heatmap(grid, "capacity", p))

    def test_roofline(self, tmp_path, catalog):
        cfg = RooflineConfig.from_catalog(catalog)
        curves = roofline_curve(cfg, (1, 1e4))
        self._render_twice(tmp_path, lambda p: render_roofline(curves, cfg, p))

    def test_concurrency(self, tmp_path):
        self._render_twice(
            tmp_path,
            lambda p: render_concurrency([32, 4096, 262144], 2e-6, [25e9, 100e9], p,
                                         markers=[("os-page", 4096, 1)]),
        )

    def test_zones(self, tmp_path, zone_cfg):
        apps = builtin_apps()
        self._render_twice(tmp_path, lambda p: render_zones(apps, zone_cfg, p))

    def test_topology_table(self, tmp_path, catalog):
        reports = [(name, build_report(ref.spec))
                   for name, ref in reference_machines(catalog).items()]
        self._render_twice(tmp_path, lambda p: render_topology_table(reports, p))


class TestFigureContents:
    def test_zones_csv_has_antidiagonal_endpoints(self, zone_cfg):
        apps = builtin_apps()
        header, rows = zones_csv_rows([(a, classify(a, zone_cfg)) for a in apps], zone_cfg)
        start = [r for r in rows if r[0] == "antidiagonal_start"][0]
        end = [r for r in rows if r[0] == "antidiagonal_end"][0]
        assert start[1] == pytest.approx(0.512)  # TB
        assert start[2] == pytest.approx(524, abs=1)
        assert end[1] == pytest.approx(4.096)
        assert end[2] == pytest.approx(65.5, abs=0.1)

    def test_roofline_svg_labels_knees(self, tmp_path, catalog):
        cfg = RooflineConfig.from_catalog(catalog)
        curves = roofline_curve(cfg, (1, 1e4))
        svg = render_roofline(curves, cfg, tmp_path / "r.svg").read_text()
        for label in ("65.5", "131.1", "234.1"):
            assert label in svg

    def test_roofline_csv_columns(self, catalog):
        cfg = RooflineConfig.from_catalog(catalog)
        header, rows = roofline_csv_rows(roofline_curve(cfg, (1, 1e4)))
        assert header[0] == "lr"
        assert any("injection" in col for col in header)
        assert len(rows) > 100

    def test_sibling_csv_written_next_to_svg(self, tmp_path, grid):
        render_heatmap(grid, "bandwidth", tmp_path / "hm.svg")
        assert (tmp_path / "hm.csv").exists()


class TestEmitFigure:
    def test_dispatch_heatmap(self, tmp_path, grid):
        spec = FigureSpec(kind="heatmap", output=tmp_path / "x.svg")
        path = emit_figure(spec, {"grid": grid, "quantity": "capacity"})
        assert path.exists()

    def test_unknown_kind_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="kind"):
            FigureSpec(kind="pie", output=tmp_path / "x.svg")

    def test_unwritable_path_raises(self, tmp_path, grid):
        missing = tmp_path / "no" / "such" / "dir" / "x.svg"
        with pytest.raises(OSError):
            render_heatmap(grid, "capacity", missing)
