"""Deterministic CSV/JSON writers and matplotlib figure emitters.

Identical inputs must produce byte-identical artifacts, so figures are
rendered with a fixed hash salt, text kept as text (not font paths), no
creation date in the SVG metadata, and a fixed palette; floats in CSV/JSON
are formatted through one canonical path. Every figure writes a sibling
CSV of the data it plots.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import ListedColormap

from .classify import Zone, ZoneConfig, classify, contention_balance
from .design_space import DesignGrid
from .errors import ConfigError
from .roofline import RooflineConfig, machine_balance

__version__ = "0.1.0"

FIGURE_KINDS = ("heatmap", "roofline", "concurrency", "zones", "topology-table")

ZONE_COLORS = {
    Zone.BLUE: "#4878cf",
    Zone.GREEN: "#6acc65",
    Zone.ORANGE: "#ee854a",
    Zone.GREY: "#b0b0b0",
    Zone.RED: "#d65f5f",
}

SCOPE_COLORS = {"injection": "#4878cf", "rack": "#d65f5f", "global": "#6acc65"}

_SVG_RC = {
    "svg.hashsalt": "disagg",
    "svg.fonttype": "none",
    "figure.dpi": 100,
    "savefig.dpi": 100,
    "font.family": "DejaVu Sans",
    "font.size": 9,
    "axes.unicode_minus": False,
}


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def write_csv(path: Path, header: list[str], rows: list[list]) -> Path:
    path = Path(path)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    path.write_text(buffer.getvalue())
    return path


def write_json(path: Path, payload) -> Path:
    path = Path(path)
    path.write_text(canonical_json(payload))
    return path


def canonical_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _save_svg(fig, path: Path):
    path = Path(path)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


@dataclass(frozen=True)
class FigureSpec:
    """What to render and where; data shape depends on the kind."""

    kind: str
    output: Path
    title: str = ""
    axes: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise ConfigError(f"figure kind must be one of {FIGURE_KINDS}, got {self.kind!r}")


@dataclass(frozen=True)
class RunManifest:
    command: str
    config_digest: str
    version: str
    timestamp: str


def config_digest(resolved_config) -> str:
    """Stable digest of the fully resolved inputs of a run."""
    return hashlib.sha256(canonical_json(resolved_config).encode()).hexdigest()


def write_run_manifest(out_dir: Path, command: str, resolved_config) -> Path:
    out_dir = Path(out_dir)
    manifest = RunManifest(
        command=command,
        config_digest=config_digest(resolved_config),
        version=__version__,
        timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )
    return write_json(out_dir / "run_manifest.json", manifest.__dict__)


# ---------------------------------------------------------------------------
# Design-space heat maps
# ---------------------------------------------------------------------------

def grid_csv_rows(grid: DesignGrid, quantity: str) -> tuple[list[str], list[list]]:
    """Rows = demand-fraction bins, columns = memory-node counts."""
    if quantity == "capacity":
        matrix = grid.capacity_matrix() / 1e12  # TB
    elif quantity == "bandwidth":
        matrix = grid.bandwidth_matrix() / 1e9  # GB/s
    else:
        raise ConfigError(f"quantity must be 'capacity' or 'bandwidth', got {quantity!r}")
    header = ["demand_fraction"] + [f"M={m}" for m in grid.m_values]
    rows = [
        [grid.f_values[i]] + [float(matrix[i, j]) for j in range(len(grid.m_values))]
        for i in range(len(grid.f_values))
    ]
    return header, rows


def render_heatmap(grid: DesignGrid, quantity: str, path: Path, title: str = "") -> Path:
    """Annotated heat map of one design-space quantity; writes SVG + CSV."""
    header, rows = grid_csv_rows(grid, quantity)
    write_csv(Path(path).with_suffix(".csv"), header, rows)

    matrix = np.array([[float(v) for v in row[1:]] for row in rows])
    unit = "TB" if quantity == "capacity" else "GB/s"
    with plt.rc_context(_SVG_RC):
        fig, ax = plt.subplots(figsize=(8, 4.5))
        mesh = ax.pcolormesh(
            np.arange(matrix.shape[1] + 1),
            np.arange(matrix.shape[0] + 1),
            matrix,
            norm=matplotlib.colors.LogNorm(vmin=matrix.min(), vmax=matrix.max()),
            cmap="viridis",
        )
        ax.set_xticks(np.arange(matrix.shape[1]) + 0.5, [str(m) for m in grid.m_values])
        ax.set_yticks(np.arange(matrix.shape[0]) + 0.5, [f"{f:g}" for f in grid.f_values])
        ax.invert_yaxis()
        ax.set_xlabel("memory nodes (supply)")
        ax.set_ylabel("demand fraction of compute nodes")
        if matrix.size <= 200:
            mid = np.sqrt(matrix.min() * matrix.max())
            for i in range(matrix.shape[0]):
                for j in range(matrix.shape[1]):
                    ax.text(
                        j + 0.5, i + 0.5, f"{matrix[i, j]:.3g}",
                        ha="center", va="center", fontsize=7,
                        color="white" if matrix[i, j] < mid else "black",
                    )
        fig.colorbar(mesh, ax=ax, label=f"remote {quantity} per compute node ({unit})")
        ax.set_title(title or f"Remote memory {quantity} per compute node")
        fig.tight_layout()
        return _save_svg(fig, path)


# ---------------------------------------------------------------------------
# Memory roofline
# ---------------------------------------------------------------------------

def roofline_csv_rows(curves: dict) -> tuple[list[str], list[list]]:
    scopes = list(curves)
    lrs = [p.lr for p in curves[scopes[0]]]
    header = ["lr"] + [f"attainable_gbs[{s}]" for s in scopes]
    rows = []
    for i, lr in enumerate(lrs):
        rows.append([lr] + [curves[s][i].attainable_bps / 1e9 for s in scopes])
    return header, rows


def render_roofline(
    curves: dict,
    cfg: RooflineConfig,
    path: Path,
    title: str = "",
    markers: list[tuple[str, float, float]] | None = None,
) -> Path:
    """Log-log attainable-bandwidth curves with labeled knees; SVG + CSV.

    markers are (label, lr, attainable_bps) application points.
    """
    header, rows = roofline_csv_rows(curves)
    write_csv(Path(path).with_suffix(".csv"), header, rows)

    with plt.rc_context(_SVG_RC):
        fig, ax = plt.subplots(figsize=(7, 4.5))
        for scope, points in curves.items():
            color = SCOPE_COLORS.get(scope, "#333333")
            ax.loglog(
                [p.lr for p in points],
                [p.attainable_bps / 1e9 for p in points],
                label=f"{scope} (taper {cfg.taper(scope):g})",
                color=color,
            )
            knee = machine_balance(cfg, scope)
            ax.axvline(knee, color=color, linestyle=":", linewidth=0.8)
            ax.annotate(
                f"{knee:.1f}",
                xy=(knee, cfg.local_bandwidth_bps / 1e9),
                xytext=(knee * 1.05, cfg.local_bandwidth_bps / 1e9 * 1.15),
                fontsize=8, color=color,
            )
        ax.axhline(cfg.local_bandwidth_bps / 1e9, color="black", linewidth=0.8, linestyle="--")
        for label, lr, attainable in markers or []:
            ax.plot([lr], [attainable / 1e9], marker="o", color="#333333", markersize=4)
            ax.annotate(label, xy=(lr, attainable / 1e9), fontsize=7,
                        xytext=(lr * 1.1, attainable / 1e9 * 0.8))
        ax.set_xlabel("local:remote access ratio (L:R)")
        ax.set_ylabel("attainable bandwidth (GB/s)")
        ax.set_title(title or "Memory roofline")
        ax.legend(loc="lower right", fontsize=8)
        ax.grid(True, which="both", linestyle=":", linewidth=0.4)
        fig.tight_layout()
        return _save_svg(fig, path)


# ---------------------------------------------------------------------------
# Concurrency roofline
# ---------------------------------------------------------------------------

def concurrency_csv_rows(
    quanta_bytes: list[float], concurrency: np.ndarray, latency_s: float, cap_bps: float
) -> tuple[list[str], list[list]]:
    header = ["concurrency"] + [f"sustained_gbs[q={int(q)}B]" for q in quanta_bytes]
    rows = []
    for c in concurrency:
        rows.append([float(c)] + [min(cap_bps, c * q / latency_s) / 1e9 for q in quanta_bytes])
    return header, rows


def render_concurrency(
    quanta_bytes: list[float],
    latency_s: float,
    link_caps_bps: list[float],
    path: Path,
    title: str = "",
    markers: list[tuple[str, float, float]] | None = None,
    concurrency_range=(1.0, 1e5),
) -> Path:
    """Little's-Law chart: one diagonal per transfer quanta, one horizontal
    line per link capacity, optional (quanta, concurrency) markers."""
    top_cap = max(link_caps_bps)
    concurrency = np.geomspace(concurrency_range[0], concurrency_range[1], 121)
    header, rows = concurrency_csv_rows(quanta_bytes, concurrency, latency_s, top_cap)
    write_csv(Path(path).with_suffix(".csv"), header, rows)

    with plt.rc_context(_SVG_RC):
        fig, ax = plt.subplots(figsize=(7, 4.5))
        for q in quanta_bytes:
            sustained = np.minimum(top_cap, concurrency * q / latency_s)
            ax.loglog(concurrency, sustained / 1e9, label=f"quanta {int(q)} B")
        for cap in link_caps_bps:
            ax.axhline(cap / 1e9, color="black", linewidth=0.7, linestyle="--")
            ax.annotate(f"{cap / 1e9:g} GB/s", xy=(concurrency[0], cap / 1e9),
                        xytext=(concurrency[0] * 1.2, cap / 1e9 * 1.12), fontsize=7)
        for label, q, c in markers or []:
            sustained = min(top_cap, c * q / latency_s)
            ax.plot([c], [sustained / 1e9], marker="x", color="#d65f5f", markersize=6)
            ax.annotate(label, xy=(c, sustained / 1e9), fontsize=7,
                        xytext=(c * 1.15, sustained / 1e9 * 0.75))
        ax.set_xlabel("outstanding transfers (concurrency)")
        ax.set_ylabel("sustained bandwidth (GB/s)")
        ax.set_title(title or f"Concurrency roofline (latency {latency_s * 1e6:g} us)")
        ax.legend(loc="lower right", fontsize=8)
        ax.grid(True, which="both", linestyle=":", linewidth=0.4)
        fig.tight_layout()
        return _save_svg(fig, path)


# ---------------------------------------------------------------------------
# Zone scatter
# ---------------------------------------------------------------------------

def zones_csv_rows(apps_with_zones, cfg: ZoneConfig) -> tuple[list[str], list[list]]:
    header = ["name", "footprint_tb", "lr", "zone"]
    rows = [
        [app.name, app.footprint_bytes / 1e12, app.lr, result.zone.value]
        for app, result in apps_with_zones
    ]
    # Contention antidiagonal endpoints: (local capacity, balance there) to
    # (one memory node, injection balance).
    rows.append([
        "antidiagonal_start",
        cfg.hbm_capacity_bytes / 1e12,
        cfg.local_bandwidth_bps
        / (cfg.remote_nic_bps * (cfg.hbm_capacity_bytes / cfg.memory_node_capacity_bytes)),
        "",
    ])
    rows.append([
        "antidiagonal_end",
        cfg.memory_node_capacity_bytes / 1e12,
        contention_balance(cfg.memory_node_capacity_bytes, cfg),
        "",
    ])
    return header, rows


def render_zones(apps, cfg: ZoneConfig, path: Path, title: str = "") -> Path:
    """Footprint vs. L:R scatter over shaded zone regions (log-log).

    The background is classified cell-by-cell with the real classifier so
    the regions always agree with classify(); the contention antidiagonal
    is drawn between its segment endpoints.
    """
    apps_with_zones = [(app, classify(app, cfg)) for app in apps]
    header, rows = zones_csv_rows(apps_with_zones, cfg)
    write_csv(Path(path).with_suffix(".csv"), header, rows)

    fp_lo, fp_hi = 1e9, 1e14
    lr_lo, lr_hi = 1.0, 1e4
    fp_edges = np.geomspace(fp_lo, fp_hi, 241)
    lr_edges = np.geomspace(lr_lo, lr_hi, 241)
    fp_mid = np.sqrt(fp_edges[:-1] * fp_edges[1:])
    lr_mid = np.sqrt(lr_edges[:-1] * lr_edges[1:])

    zone_order = [Zone.BLUE, Zone.GREEN, Zone.ORANGE, Zone.GREY, Zone.RED]
    zone_index = {zone: i for i, zone in enumerate(zone_order)}
    codes = np.empty((len(lr_mid), len(fp_mid)), dtype=int)
    probe = _ZoneProbe(cfg)
    for j, fp in enumerate(fp_mid):
        for i, lr in enumerate(lr_mid):
            codes[i, j] = zone_index[probe(lr, fp)]

    with plt.rc_context(_SVG_RC):
        fig, ax = plt.subplots(figsize=(7.5, 5))
        cmap = ListedColormap([ZONE_COLORS[z] for z in zone_order])
        ax.pcolormesh(fp_edges / 1e12, lr_edges, codes, cmap=cmap, vmin=0,
                      vmax=len(zone_order) - 1, alpha=0.35)
        ax.set_xscale("log")
        ax.set_yscale("log")

        anti_x = [rows[-2][1], rows[-1][1]]
        anti_y = [rows[-2][2], rows[-1][2]]
        ax.plot(anti_x, anti_y, color="black", linewidth=1.2)

        for app, result in apps_with_zones:
            ax.plot([app.footprint_bytes / 1e12], [app.lr], marker="o", markersize=5,
                    color=ZONE_COLORS[result.zone], markeredgecolor="black",
                    markeredgewidth=0.5)
            ax.annotate(app.name, xy=(app.footprint_bytes / 1e12, app.lr), fontsize=7,
                        xytext=(app.footprint_bytes / 1e12 * 1.15, app.lr * 1.05))
        ax.set_xlabel("memory footprint (TB)")
        ax.set_ylabel("local:remote access ratio (L:R)")
        ax.set_title(title or f"Application zones ({cfg.scope} disaggregation)")
        fig.tight_layout()
        return _save_svg(fig, path)


class _ZoneProbe:
    """Classify synthetic (lr, footprint) probe points for region shading."""

    def __init__(self, cfg: ZoneConfig):
        self.cfg = cfg

    def __call__(self, lr: float, footprint: float) -> Zone:
        from .appmodel import AppCharacterization

        app = AppCharacterization(
            name="probe", lr=lr, footprint_bytes=footprint,
            lr_source="analytical", footprint_source="analytical",
        )
        return classify(app, self.cfg).zone


# ---------------------------------------------------------------------------
# Topology table
# ---------------------------------------------------------------------------

def topology_csv_rows(reports: list[tuple[str, object]]) -> tuple[list[str], list[list]]:
    header = [
        "name", "switches", "total_links",
        "rack_bisection_gbs", "rack_taper",
        "global_bisection_gbs", "global_taper",
    ]
    rows = []
    for name, report in reports:
        rows.append([
            name, report.switch_count, report.total_links,
            report.rack_bisection_bps / 1e9, report.rack_taper,
            report.global_bisection_bps / 1e9, report.global_taper,
        ])
    return header, rows


def render_topology_table(reports: list[tuple[str, object]], path: Path, title: str = "") -> Path:
    header, rows = topology_csv_rows(reports)
    write_csv(Path(path).with_suffix(".csv"), header, rows)
    with plt.rc_context(_SVG_RC):
        fig, ax = plt.subplots(figsize=(10, 0.5 + 0.3 * len(rows)))
        ax.axis("off")
        table = ax.table(
            cellText=[[_fmt(round(v, 4) if isinstance(v, float) else v) for v in row] for row in rows],
            colLabels=header,
            loc="center",
        )
        table.auto_set_font_size(False)
        table.set_fontsize(7)
        ax.set_title(title or "Topology report")
        fig.tight_layout()
        return _save_svg(fig, path)


def format_text_table(header: list[str], rows: list[list]) -> str:
    """Fixed-width text table for terminal output."""
    cells = [[_fmt(v) for v in row] for row in rows]
    widths = [max(len(header[i]), *(len(r[i]) for r in cells)) if cells else len(header[i])
              for i in range(len(header))]
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(header, widths)),
        "  ".join("-" * w for w in widths),
    ]
    for row in cells:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


def emit_figure(spec: FigureSpec, data) -> Path:
    """Render one figure per its spec; data shape depends on spec.kind."""
    if spec.kind == "heatmap":
        return render_heatmap(data["grid"], data.get("quantity", "capacity"),
                              spec.output, spec.title)
    if spec.kind == "roofline":
        return render_roofline(data["curves"], data["config"], spec.output, spec.title,
                               markers=data.get("markers"))
    if spec.kind == "concurrency":
        return render_concurrency(
            data["quanta_bytes"], data["latency_s"], data["link_caps_bps"],
            spec.output, spec.title, markers=data.get("markers"),
        )
    if spec.kind == "zones":
        return render_zones(data["apps"], data["config"], spec.output, spec.title)
    if spec.kind == "topology-table":
        return render_topology_table(data["reports"], spec.output, spec.title)
    raise ConfigError(f"unsupported figure kind {spec.kind!r}")
