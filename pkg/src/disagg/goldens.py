"""Golden reference checks for the shipped configurations.

These are the published figures the toolkit is expected to reproduce:
design-space capacities and bandwidths, reference-topology switch/link
tallies and tapers, machine balances, workload L:R ratios, zone
assignments, and concurrency bounds. `disagg reproduce` evaluates all of
them and exits nonzero on any mismatch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from . import appmodel, classify, design_space, roofline, topology
from .techdb import builtin_catalog, default_machine


@dataclass(frozen=True)
class GoldenCheck:
    name: str
    expected: str
    actual: str
    ok: bool


def _close(checks, name, actual, expected, tol):
    checks.append(GoldenCheck(
        name=name,
        expected=f"{expected:.6g} (+/- {tol:g})",
        actual=f"{actual:.6g}",
        ok=abs(actual - expected) <= tol,
    ))


def _exact(checks, name, actual, expected):
    checks.append(GoldenCheck(
        name=name, expected=f"{expected}", actual=f"{actual}", ok=actual == expected
    ))


def _is_in(checks, name, actual, allowed):
    checks.append(GoldenCheck(
        name=name,
        expected=f"one of {sorted(str(a) for a in allowed)}",
        actual=f"{actual}",
        ok=actual in allowed,
    ))


def run_goldens() -> list[GoldenCheck]:
    catalog = builtin_catalog()
    machine = default_machine(catalog)
    checks: list[GoldenCheck] = []

    # --- design space: pooled capacity and saturating bandwidth ---
    node_cap = machine.memory_node_capacity_bytes
    paired = replace(machine, memory_nodes=machine.compute_nodes, demand_fraction=1.0)
    _exact(checks, "design-space.capacity[C=M,f=1]",
           design_space.remote_capacity_per_node(paired), node_cap)
    _exact(checks, "design-space.capacity[C=M,f=0.5]",
           design_space.remote_capacity_per_node(replace(paired, demand_fraction=0.5)),
           2 * node_cap)
    _exact(checks, "design-space.bandwidth[10K:1K,f=0.1]",
           design_space.remote_bandwidth_per_node(machine),
           machine.compute_spec.nic.bandwidth_bps)

    # --- reference topologies: integer tallies and tapers ---
    for name, ref in topology.reference_machines(catalog).items():
        report = topology.build_report(ref.spec)
        _exact(checks, f"topology[{name}].switches", report.switch_count,
               ref.expected.switch_count)
        _exact(checks, f"topology[{name}].links", report.total_links,
               ref.expected.total_links)
        _close(checks, f"topology[{name}].global_taper", report.global_taper,
               ref.expected.global_taper, 0.03)
        _close(checks, f"topology[{name}].rack_taper", report.rack_taper,
               ref.expected.rack_taper, 0.03)

    # --- machine balances ---
    rl = roofline.RooflineConfig.from_catalog(catalog)
    _close(checks, "roofline.balance[injection]", roofline.machine_balance(rl), 65.5, 0.1)
    _close(checks, "roofline.balance[rack]", roofline.machine_balance(rl, "rack"), 131, 0.5)
    _close(checks, "roofline.balance[global]", roofline.machine_balance(rl, "global"), 234, 1)
    prev_gen = roofline.RooflineConfig.from_catalog(catalog, local="HBM2", remote="PCIe4")
    _close(checks, "roofline.balance[HBM2:PCIe4]", roofline.machine_balance(prev_gen), 62.2, 0.1)
    adept_util = roofline.attainable_bandwidth(477, rl).remote_utilization
    _close(checks, "roofline.nic_utilization[lr=477]", adept_util, 0.137, 0.001)

    # --- workload L:R ratios ---
    _close(checks, "apps.lr[ResNet-50]", appmodel.lr_ai(55.35, 221_000), 3993, 1)
    _close(checks, "apps.lr[DeepCAM]", appmodel.lr_ai(55.5, 107_000), 1927, 1)
    _close(checks, "apps.lr[CosmoFlow]", appmodel.lr_ai(38.6, 15_400), 399, 1)
    _exact(checks, "apps.lr[STREAM]", appmodel.lr_stream(), 2.0)
    _exact(checks, "apps.lr[DASSA]", appmodel.lr_windowed_similarity(500, 2), 1000.0)
    adept = appmodel.lr_align(appmodel.ADEPT_REFERENCE, traceback=False)
    _close(checks, "apps.lr[ADEPT]", adept.lr, 477, 1)
    adept_tb = appmodel.lr_align(appmodel.ADEPT_REFERENCE, traceback=True)
    _close(checks, "apps.lr[ADEPT-traceback]", adept_tb.lr, 477, 1)
    for iters, expected in ((1, 4), (50, 101), (100, 201)):
        params = replace(appmodel.SUPERLU_REFERENCE, iters=iters)
        _close(checks, f"apps.lr[SuperLU iters={iters}]",
               appmodel.lr_superlu(params).lr_whole, expected, 1)
    pastis = appmodel.lr_from_counters(appmodel.CounterSample(
        remote_bytes=363e9, dram_read_sectors=158e12 / 32, dram_write_sectors=0,
    ))
    _close(checks, "apps.lr[PASTIS]", pastis, 435, 1)
    gemm = appmodel.lr_gemm(appmodel.GEMM_REFERENCE)
    _close(checks, "apps.lr[GEMM N=400K]", gemm.lr, 90, 1)
    # Band over the observable sweep: ~1.25 TB to ~3.75 TB of operands.
    band_ok = True
    for footprint in (1.25e12, 1.7e12, 2.2e12, 2.8e12, 3.4e12, 3.75e12):
        n = int(math.sqrt(footprint / 24))
        lr = appmodel.lr_gemm(appmodel.GemmParams(n=n)).lr
        band_ok = band_ok and 50 <= lr <= 90
    checks.append(GoldenCheck(
        name="apps.lr[GEMM band 1.25-3.75TB]",
        expected="within [50, 90]", actual="in band" if band_ok else "out of band",
        ok=band_ok,
    ))

    # --- zone assignments on the shipped machine ---
    apps = {app.name: app for app in appmodel.builtin_apps()}
    for scope in ("global", "rack"):
        cfg = classify.zone_config_from_machine(machine, scope=scope)
        zones = {name: classify.classify(app, cfg).zone for name, app in apps.items()}
        _exact(checks, f"zones[{scope}].ResNet-50", zones["ResNet-50"].value, "Blue")
        _exact(checks, f"zones[{scope}].DeepCAM", zones["DeepCAM"].value, "Green")
        _exact(checks, f"zones[{scope}].CosmoFlow", zones["CosmoFlow"].value, "Green")
        _exact(checks, f"zones[{scope}].STREAM", zones["STREAM"].value, "Orange")
        _exact(checks, f"zones[{scope}].Eigensolver", zones["Eigensolver"].value, "Orange")
        for name in ("ADEPT", "ADEPT-traceback", "PASTIS", "DASSA", "TOAST", "EXTENSION"):
            _is_in(checks, f"zones[{scope}].{name}", zones[name].value, {"Blue", "Green"})
    global_cfg = classify.zone_config_from_machine(machine, scope="global")
    rack_cfg = classify.zone_config_from_machine(machine, scope="rack")
    _exact(checks, "zones[global].SuperLU",
           classify.classify(apps["SuperLU"], global_cfg).zone.value, "Grey")
    _exact(checks, "zones[rack].SuperLU",
           classify.classify(apps["SuperLU"], rack_cfg).zone.value, "Green")
    _exact(checks, "zones[rack].GEMM",
           classify.classify(apps["GEMM"], rack_cfg).zone.value, "Grey")
    blue_green = sum(
        1 for app in apps.values()
        if classify.classify(app, global_cfg).zone in (classify.Zone.BLUE, classify.Zone.GREEN)
    )
    _exact(checks, "zones[global].blue+green count", blue_green, 9)

    # --- concurrency roofline ---
    paging = roofline.sustained_bandwidth(4096, 1, 2e-6, 25e9)
    _exact(checks, "concurrency.sustained[4KB,c=1]", paging.sustained_bps, 2.048e9)
    big_pages = roofline.sustained_bandwidth(262144, 1, 2e-6, 100e9)
    _exact(checks, "concurrency.sustained[256KB,c=1]", big_pages.sustained_bps, 100e9)
    _exact(checks, "concurrency.required[50GB/s,32B]",
           roofline.required_concurrency(50e9, 32, 2e-6), 3125)
    _exact(checks, "concurrency.required[25GB/s,4KB]",
           roofline.required_concurrency(25e9, 4096, 2e-6), 13)

    return checks
