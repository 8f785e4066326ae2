"""Command-line interface.

Subcommands: design-space, topology, roofline, concurrency, apps,
classify, workload, reproduce. Every run that writes artifacts also writes
a run_manifest.json recording the command, a digest of its resolved
inputs, the tool version, and a timestamp.

DISAGG_CONFIG_DIR sets the directory relative machine/catalog paths are
resolved against. A cli_defaults.json file in that directory supplies
config-file equivalents for any flag, keyed by subcommand (or "*" for all
commands); explicitly passed flags win on conflict. Values must carry the
flag's JSON type (numbers for numeric flags).

The CLI only formats and plots; every number it emits comes from a
library operation, with unit conversion (bytes -> TB, bytes/s -> GB/s) as
the one exception.
"""

from __future__ import annotations

import argparse
import csv as csv_module
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import appmodel, classify, design_space, goldens, report, roofline, topology
from .errors import DisaggError
from .techdb import builtin_catalog, default_machine, load_catalog, load_machine
from .units import fmt_bytes, fmt_rate, parse_bytes, parse_rate, parse_seconds

DEFAULT_M_VALUES = "100,200,500,1000,2000,5000,10000,20000"
DEFAULT_F_VALUES = "1.0,0.75,0.5,0.25,0.1,0.05,0.01"


def _config_dir() -> Path | None:
    value = os.environ.get("DISAGG_CONFIG_DIR")
    return Path(value) if value else None


def _resolve_input(path_str: str) -> Path:
    """Resolve a config path, trying DISAGG_CONFIG_DIR for relative names."""
    path = Path(path_str)
    if path.exists():
        return path
    config_dir = _config_dir()
    if config_dir is not None and (config_dir / path).exists():
        return config_dir / path
    return path  # let the open() error name the missing path


def _cli_defaults() -> dict:
    """Flag defaults from DISAGG_CONFIG_DIR/cli_defaults.json, if present."""
    config_dir = _config_dir()
    if config_dir is None:
        return {}
    path = config_dir / "cli_defaults.json"
    if not path.exists():
        return {}
    return json.loads(path.read_text())


def _load_inputs(args):
    catalog_arg = getattr(args, "catalog", None)
    catalog = load_catalog(_resolve_input(catalog_arg)) if catalog_arg else builtin_catalog()
    machine_arg = getattr(args, "machine", None)
    if machine_arg and machine_arg != "default":
        machine = load_machine(_resolve_input(machine_arg), catalog)
    else:
        machine = default_machine(catalog)
    return catalog, machine


def _machine_dict(machine) -> dict:
    return {
        "compute_nodes": machine.compute_nodes,
        "memory_nodes": machine.memory_nodes,
        "demand_fraction": machine.demand_fraction,
        "compute_node": {
            "local_memory": {
                "name": machine.compute_spec.local_memory.name,
                "bandwidth_bps": machine.compute_spec.local_memory.bandwidth_bps,
                "capacity_bytes": machine.compute_spec.local_memory.capacity_bytes,
            },
            "nic": {
                "name": machine.compute_spec.nic.name,
                "bandwidth_bps": machine.compute_spec.nic.bandwidth_bps,
                "latency_s": machine.compute_spec.nic.latency_s,
            },
        },
        "memory_node": {
            "capacity_bytes": machine.memory_node_capacity_bytes,
            "nic": {
                "name": machine.memory_node_nic.name,
                "bandwidth_bps": machine.memory_node_nic.bandwidth_bps,
                "latency_s": machine.memory_node_nic.latency_s,
            },
        },
    }


def _prepare_out(args, command: str, resolved_config: dict) -> Path | None:
    if args.format == "text":
        return None
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    report.write_run_manifest(out_dir, command, resolved_config)
    return out_dir


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------

def cmd_design_space(args) -> int:
    catalog, machine = _load_inputs(args)
    m_values = _ints(args.memory_nodes)
    f_values = _floats(args.demand)
    grid = design_space.build_grid(machine, m_values, f_values,
                                   taper=args.taper, taper_mode=args.taper_mode)

    resolved = {"machine": _machine_dict(machine), "m_values": m_values,
                "f_values": f_values, "taper": args.taper, "taper_mode": args.taper_mode}
    out_dir = _prepare_out(args, "design-space", resolved)

    for quantity in ("capacity", "bandwidth"):
        header, rows = report.grid_csv_rows(grid, quantity)
        print(f"remote {quantity} per compute node "
              f"({'TB' if quantity == 'capacity' else 'GB/s'}):")
        print(report.format_text_table(header, rows))
        if out_dir is None:
            continue
        if args.format in ("svg",):
            report.render_heatmap(grid, quantity, out_dir / f"design_space_{quantity}.svg")
        elif args.format == "csv":
            report.write_csv(out_dir / f"design_space_{quantity}.csv", header, rows)
        elif args.format == "json":
            report.write_json(out_dir / f"design_space_{quantity}.json",
                              {"header": header, "rows": rows})
    return 0


def cmd_topology(args) -> int:
    catalog, _ = _load_inputs(args)
    refs = topology.reference_machines(catalog)
    if args.spec:
        spec_data = json.loads(_resolve_input(args.spec).read_text())
        spec = _topology_spec_from_dict(spec_data, catalog)
        reports = [(spec_data.get("name", "custom"), topology.build_report(spec))]
    elif args.ref:
        if args.ref not in refs:
            print(f"error: unknown reference {args.ref!r}; "
                  f"known: {', '.join(refs)}", file=sys.stderr)
            return 2
        ref = refs[args.ref]
        reports = [(ref.name, topology.build_report(ref.spec))]
    else:
        reports = [(name, topology.build_report(ref.spec)) for name, ref in refs.items()]

    header, rows = report.topology_csv_rows(reports)
    print(report.format_text_table(header, rows))

    resolved = {"ref": args.ref, "spec": args.spec}
    out_dir = _prepare_out(args, "topology", resolved)
    if out_dir is not None:
        if args.format == "svg":
            report.render_topology_table(reports, out_dir / "topology_report.svg")
        elif args.format == "csv":
            report.write_csv(out_dir / "topology_report.csv", header, rows)
        elif args.format == "json":
            report.write_json(out_dir / "topology_report.json",
                              {"header": header, "rows": rows})
    return 0


def _topology_spec_from_dict(data: dict, catalog):
    kind = data.get("kind")
    nic_name = data.get("endpoint_nic", "PCIe6")
    nic = catalog.link(nic_name) if isinstance(nic_name, str) else None
    if kind == "dragonfly":
        return topology.DragonflySpec(
            groups=int(data["groups"]),
            switches_per_group=int(data["switches_per_group"]),
            intra_links_per_pair=int(data.get("intra_links_per_pair", 1)),
            inter_links_per_pair=int(data["inter_links_per_pair"]),
            link_bandwidth_bps=parse_rate(
                data.get("link_bandwidth", topology.DEFAULT_LINK_BW_BPS), "link_bandwidth"),
            endpoints=int(data["endpoints"]),
            endpoint_nic=nic,
        )
    if kind == "fat-tree":
        return topology.FatTreeSpec(
            radix=int(data["radix"]),
            leaf_switches=int(data["leaf_switches"]),
            leaf_uplink_ports=int(data["leaf_uplink_ports"]),
            core_groups=int(data["core_groups"]),
            core_group_size=int(data["core_group_size"]),
            core_down_ports_per_switch=int(data["core_down_ports_per_switch"]),
            endpoints=int(data["endpoints"]),
            endpoint_nic=nic,
        )
    raise DisaggError(f"topology.kind must be 'dragonfly' or 'fat-tree', got {kind!r}")


def cmd_roofline(args) -> int:
    catalog, machine = _load_inputs(args)
    tapers = {"injection": 1.0, "rack": args.rack_taper, "global": args.global_taper}
    if args.local or args.remote:
        local = args.local or "HBM3"
        remote = args.remote or "PCIe6"
        try:
            local_bps = catalog.memory(local).bandwidth_bps
        except DisaggError:
            local_bps = parse_rate(local, "--local")
        try:
            remote_bps = catalog.link(remote).bandwidth_bps
        except DisaggError:
            remote_bps = parse_rate(remote, "--remote")
        cfg = roofline.RooflineConfig(local_bps, remote_bps, tapers)
    else:
        cfg = roofline.RooflineConfig(
            machine.compute_spec.local_memory.bandwidth_bps,
            machine.compute_spec.nic.bandwidth_bps,
            tapers,
        )

    curves = roofline.roofline_curve(cfg, (args.lr_min, args.lr_max))
    for scope in cfg.tapers:
        knee = roofline.machine_balance(cfg, scope)
        print(f"{scope}: machine balance (knee) = {knee:.1f}, "
              f"plateau = {fmt_rate(cfg.local_bandwidth_bps)}")

    resolved = {"local_bps": cfg.local_bandwidth_bps, "remote_bps": cfg.remote_bandwidth_bps,
                "tapers": tapers, "lr_range": [args.lr_min, args.lr_max]}
    out_dir = _prepare_out(args, "roofline", resolved)
    if out_dir is not None:
        if args.format == "svg":
            report.render_roofline(curves, cfg, out_dir / "roofline.svg")
        else:
            header, rows = report.roofline_csv_rows(curves)
            if args.format == "csv":
                report.write_csv(out_dir / "roofline.csv", header, rows)
            elif args.format == "json":
                report.write_json(out_dir / "roofline.json", {"header": header, "rows": rows})
    return 0


def cmd_concurrency(args) -> int:
    latency = parse_seconds(args.latency, "--latency")
    caps = [parse_rate(v, "--caps") for v in args.caps.split(",")]
    quanta = [parse_bytes(v, "--quanta") for v in args.quanta.split(",")]
    markers = []
    for marker in args.marker or []:
        label, q, c = marker.rsplit(":", 2)
        markers.append((label, parse_bytes(q, "--marker"), float(c)))

    for q in quanta:
        needed = roofline.required_concurrency(max(caps), q, latency)
        print(f"quanta {fmt_bytes(q)}: concurrency {needed} sustains {fmt_rate(max(caps))}")
    for label, q, c in markers:
        point = roofline.sustained_bandwidth(q, c, latency, max(caps))
        print(f"{label}: sustains {fmt_rate(point.sustained_bps)}")

    resolved = {"latency_s": latency, "caps_bps": caps, "quanta_bytes": quanta,
                "markers": markers}
    out_dir = _prepare_out(args, "concurrency", resolved)
    if out_dir is not None:
        if args.format == "svg":
            report.render_concurrency(quanta, latency, caps, out_dir / "concurrency.svg",
                                      markers=markers)
        else:
            concurrency = np.geomspace(1, 1e5, 121)
            header, rows = report.concurrency_csv_rows(quanta, concurrency, latency, max(caps))
            if args.format == "csv":
                report.write_csv(out_dir / "concurrency.csv", header, rows)
            elif args.format == "json":
                report.write_json(out_dir / "concurrency.json", {"header": header, "rows": rows})
    return 0


def _load_apps(args) -> list[appmodel.AppCharacterization]:
    if getattr(args, "apps_file", None):
        data = json.loads(_resolve_input(args.apps_file).read_text())
        if not isinstance(data, list):
            raise DisaggError("apps file must hold a JSON list of app objects")
        return [appmodel.app_from_dict(entry) for entry in data]
    return appmodel.builtin_apps()


def cmd_apps(args) -> int:
    if args.counters_csv:
        rows = []
        with open(_resolve_input(args.counters_csv), newline="") as handle:
            for row in csv_module.reader(handle):
                if not row or row[0].startswith("#"):
                    continue
                rows.append((row[0], float(row[1])))
        remote = parse_bytes(args.remote_bytes, "--remote-bytes") if args.remote_bytes else None
        sample = appmodel.counters_from_rows(rows, remote)
        print(f"L:R from counters: {appmodel.lr_from_counters(sample):.4g}")
        return 0

    apps = _load_apps(args)
    if args.app:
        apps = [appmodel.lookup_app(args.app, apps)]
    header = ["name", "lr", "footprint", "lr_source", "footprint_source"]
    rows = [[a.name, f"{a.lr:.6g}", fmt_bytes(a.footprint_bytes), a.lr_source,
             a.footprint_source] for a in apps]
    print(report.format_text_table(header, rows))

    resolved = {"apps": [a.name for a in apps]}
    out_dir = _prepare_out(args, "apps", resolved)
    if out_dir is not None:
        data_rows = [[a.name, a.lr, a.footprint_bytes, a.lr_source, a.footprint_source]
                     for a in apps]
        if args.format in ("csv", "svg"):  # no figure kind for the roster; emit CSV
            report.write_csv(out_dir / "apps.csv",
                             ["name", "lr", "footprint_bytes", "lr_source",
                              "footprint_source"], data_rows)
        else:
            report.write_json(out_dir / "apps.json", {
                "apps": [
                    {"name": a.name, "lr": a.lr, "footprint_bytes": a.footprint_bytes,
                     "lr_source": a.lr_source, "footprint_source": a.footprint_source}
                    for a in apps
                ]
            })
    return 0


def cmd_classify(args) -> int:
    catalog, machine = _load_inputs(args)
    cfg = classify.zone_config_from_machine(
        machine, scope=args.scope,
        rack_taper=args.rack_taper, global_taper=args.global_taper,
    )
    apps = _load_apps(args)
    if args.app:
        apps = [appmodel.lookup_app(args.app, apps)]

    results = [(app, classify.classify(app, cfg)) for app in apps]
    for app, result in results:
        print(f"{app.name}: {result.zone.value} (limiter: {result.limiter.value})")

    resolved = {"machine": _machine_dict(machine), "scope": args.scope,
                "apps": [a.name for a in apps]}
    out_dir = _prepare_out(args, "classify", resolved)
    if out_dir is not None:
        payload = {
            "scope": cfg.scope,
            "results": [
                {
                    "name": app.name,
                    "lr": app.lr,
                    "footprint_bytes": app.footprint_bytes,
                    "zone": result.zone.value,
                    "limiter": result.limiter.value,
                }
                for app, result in results
            ],
        }
        report.write_json(out_dir / "classify_report.json", payload)
        if args.format == "svg":
            report.render_zones(apps, cfg, out_dir / f"zones_{cfg.scope}.svg")
        elif args.format == "csv":
            header, rows = report.zones_csv_rows(results, cfg)
            report.write_csv(out_dir / f"zones_{cfg.scope}.csv", header, rows)
    return 0


def cmd_workload(args) -> int:
    catalog, machine = _load_inputs(args)
    cfg = classify.zone_config_from_machine(
        machine, scope=args.scope,
        rack_taper=args.rack_taper, global_taper=args.global_taper,
    )
    data = json.loads(_resolve_input(args.entries).read_text())
    if not isinstance(data, list):
        raise DisaggError("entries file must hold a JSON list")
    entries = []
    roster = appmodel.builtin_apps()
    for item in data:
        app_field = item.get("app")
        if isinstance(app_field, str):
            app = appmodel.lookup_app(app_field, roster)
        else:
            app = appmodel.app_from_dict(app_field)
        entries.append(classify.WorkloadEntry(app=app, node_hours=float(item["node_hours"])))

    sizing = classify.size_workload(entries, cfg)
    print(sizing.message)
    if sizing.advisory:
        print(f"advisory: {sizing.advisory}")
    for item in sizing.per_app:
        print(f"  {item.app.name}: {item.zone.value}, {item.node_hours:g} node-hours"
              + (f", scaled {item.scaled_hours:.3g}" if item.scaled_hours else ""))

    resolved = {"machine": _machine_dict(machine), "scope": args.scope,
                "entries": [{"app": e.app.name, "node_hours": e.node_hours} for e in entries]}
    out_dir = _prepare_out(args, "workload", resolved)
    if out_dir is not None:
        payload = {
            "ratio": None if sizing.ratio == float("inf") else sizing.ratio,
            "message": sizing.message,
            "advisory": sizing.advisory,
            "blue_hours": sizing.blue_hours,
            "scaled_remote_hours": sizing.scaled_remote_hours,
            "per_app": [
                {"name": item.app.name, "zone": item.zone.value,
                 "node_hours": item.node_hours, "scaled_hours": item.scaled_hours}
                for item in sizing.per_app
            ],
        }
        report.write_json(out_dir / "workload_report.json", payload)
    return 0


def cmd_reproduce(args) -> int:
    catalog, machine = _load_inputs(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    report.write_run_manifest(out_dir, "reproduce", {"machine": _machine_dict(machine)})

    m_values = _ints(DEFAULT_M_VALUES)
    f_values = _floats(DEFAULT_F_VALUES)

    # Design-space heat maps, untapered and under rack/global tapers.
    grid = design_space.build_grid(machine, m_values, f_values)
    report.render_heatmap(grid, "capacity", out_dir / "design_space_capacity.svg")
    report.render_heatmap(grid, "bandwidth", out_dir / "design_space_bandwidth.svg")
    for taper, label in ((0.5, "rack"), (0.28, "global")):
        tapered = design_space.build_grid(machine, m_values, f_values, taper=taper)
        report.render_heatmap(
            tapered, "bandwidth", out_dir / f"design_space_bandwidth_{label}.svg",
            title=f"Remote bandwidth per compute node, {label} bisection (taper {taper:g})",
        )

    # Memory roofline, injection only and all scopes.
    rl_cfg = roofline.RooflineConfig.from_catalog(catalog)
    apps = appmodel.builtin_apps()
    markers = []
    for app in apps:
        point = roofline.attainable_bandwidth(app.lr, rl_cfg)
        markers.append((app.name, app.lr, point.attainable_bps))
    injection_only = roofline.RooflineConfig(
        rl_cfg.local_bandwidth_bps, rl_cfg.remote_bandwidth_bps, {"injection": 1.0})
    report.render_roofline(
        roofline.roofline_curve(injection_only), injection_only,
        out_dir / "roofline_injection.svg", markers=markers,
        title="Memory roofline, injection bandwidth",
    )
    report.render_roofline(
        roofline.roofline_curve(rl_cfg), rl_cfg, out_dir / "roofline_bisection.svg",
        title="Memory roofline with bisection tapers",
    )

    # Zone scatters for both scopes.
    for scope in ("rack", "global"):
        cfg = classify.zone_config_from_machine(machine, scope=scope)
        report.render_zones(apps, cfg, out_dir / f"zones_{scope}.svg")

    # Concurrency roofline.
    report.render_concurrency(
        [32, 4096, 262144], 2e-6, [25e9, 50e9, 100e9], out_dir / "concurrency.svg",
        markers=[("4KB page, c=1", 4096, 1), ("32B line, c=2048", 32, 2048)],
    )

    # Topology reference table.
    refs = topology.reference_machines(catalog)
    reports = [(name, topology.build_report(ref.spec)) for name, ref in refs.items()]
    header, rows = report.topology_csv_rows(reports)
    report.write_csv(out_dir / "topology_report.csv", header, rows)

    # Apps table.
    report.write_csv(
        out_dir / "apps.csv",
        ["name", "lr", "footprint_bytes", "lr_source", "footprint_source"],
        [[a.name, a.lr, a.footprint_bytes, a.lr_source, a.footprint_source] for a in apps],
    )

    # Golden comparisons.
    checks = goldens.run_goldens()
    failures = [c for c in checks if not c.ok]
    report.write_json(out_dir / "golden_report.json", {
        "checks": [c.__dict__ for c in checks],
        "failures": len(failures),
    })
    for check in checks:
        status = "PASS" if check.ok else "FAIL"
        print(f"[{status}] {check.name}: expected {check.expected}, got {check.actual}")
    print(f"\n{len(checks) - len(failures)}/{len(checks)} golden checks passed; "
          f"artifacts in {out_dir}")
    return 1 if failures else 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_common(parser, machine: bool = True):
    parser.add_argument("--out", default="disagg-out", help="artifact output directory")
    parser.add_argument("--format", choices=("svg", "csv", "json", "text"), default="svg",
                        help="artifact format; 'text' prints only")
    parser.add_argument("--catalog", help="technology catalog JSON (default: shipped)")
    if machine:
        parser.add_argument("--machine", default="default",
                            help="machine config JSON path, or 'default'")


def build_parser(cli_defaults: dict | None = None) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="disagg",
        description="Design-space modeling for network-attached disaggregated-memory systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    subparsers: dict[str, argparse.ArgumentParser] = {}

    p = subparsers["design-space"] = sub.add_parser(
        "design-space", help="per-node remote capacity/bandwidth heat maps")
    _add_common(p)
    p.add_argument("--memory-nodes", default=DEFAULT_M_VALUES,
                   help="comma-separated memory-node counts (columns)")
    p.add_argument("--demand", default=DEFAULT_F_VALUES,
                   help="comma-separated demand fractions (rows)")
    p.add_argument("--taper", type=float, default=1.0,
                   help="bisection taper applied to bandwidth cells")
    p.add_argument("--taper-mode", choices=("scale", "cap"), default="scale")
    p.set_defaults(func=cmd_design_space)

    p = subparsers["topology"] = sub.add_parser("topology", help="switch/link/bisection report for a topology")
    _add_common(p, machine=False)
    p.add_argument("--ref", help="named reference machine")
    p.add_argument("--spec", help="topology spec JSON file")
    p.set_defaults(func=cmd_topology)

    p = subparsers["roofline"] = sub.add_parser("roofline", help="memory roofline curves and machine balances")
    _add_common(p)
    p.add_argument("--local", help="local memory tech name or bandwidth (default HBM3)")
    p.add_argument("--remote", help="remote NIC tech name or bandwidth (default PCIe6)")
    p.add_argument("--rack-taper", type=float, default=0.5)
    p.add_argument("--global-taper", type=float, default=0.28)
    p.add_argument("--lr-min", type=float, default=1.0)
    p.add_argument("--lr-max", type=float, default=1e4)
    p.set_defaults(func=cmd_roofline)

    p = subparsers["concurrency"] = sub.add_parser("concurrency", help="Little's-Law sustained-bandwidth chart")
    _add_common(p, machine=False)
    p.add_argument("--latency", default="2 us")
    p.add_argument("--caps", default="25 GB/s,50 GB/s,100 GB/s",
                   help="comma-separated link capacities")
    p.add_argument("--quanta", default="32,4096,262144",
                   help="comma-separated transfer quanta (bytes or sizes)")
    p.add_argument("--marker", action="append",
                   help="label:quanta:concurrency marker (repeatable)")
    p.set_defaults(func=cmd_concurrency)

    p = subparsers["apps"] = sub.add_parser("apps", help="list or evaluate workload characterizations")
    _add_common(p, machine=False)
    p.add_argument("--app", help="single application to show")
    p.add_argument("--apps-file", help="JSON list of user app definitions")
    p.add_argument("--counters-csv", help="counter CSV (one row per counter name)")
    p.add_argument("--remote-bytes", help="remote byte volume for --counters-csv")
    p.set_defaults(func=cmd_apps)

    p = subparsers["classify"] = sub.add_parser("classify", help="zone classification on a machine")
    _add_common(p)
    p.add_argument("--app", help="single application (default: all shipped)")
    p.add_argument("--apps-file", help="JSON list of user app definitions")
    p.add_argument("--scope", choices=("rack", "global"), default="global")
    p.add_argument("--rack-taper", type=float, default=0.5)
    p.add_argument("--global-taper", type=float, default=0.28)
    p.set_defaults(func=cmd_classify)

    p = subparsers["workload"] = sub.add_parser("workload", help="compute:memory sizing from node-hours")
    _add_common(p)
    p.add_argument("--entries", required=True,
                   help="JSON list of {app, node_hours} entries")
    p.add_argument("--scope", choices=("rack", "global"), default="global")
    p.add_argument("--rack-taper", type=float, default=0.5)
    p.add_argument("--global-taper", type=float, default=0.28)
    p.set_defaults(func=cmd_workload)

    p = subparsers["reproduce"] = sub.add_parser("reproduce", help="regenerate all reference figures and goldens")
    p.add_argument("--out", default="disagg-out")
    p.add_argument("--catalog", help="technology catalog JSON (default: shipped)")
    p.add_argument("--machine", default="default")
    p.set_defaults(func=cmd_reproduce)

    # Config-file flag equivalents: apply as parser defaults so explicitly
    # passed flags always win.
    for command, subparser in subparsers.items():
        merged = {**(cli_defaults or {}).get("*", {}),
                  **(cli_defaults or {}).get(command, {})}
        known = {action.dest for action in subparser._actions}
        overrides = {key.replace("-", "_"): value for key, value in merged.items()
                     if key.replace("-", "_") in known}
        if overrides:
            subparser.set_defaults(**overrides)

    return parser


def main(argv=None) -> int:
    parser = build_parser(_cli_defaults())
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DisaggError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
