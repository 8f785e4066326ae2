"""Three-hop Dragonfly and three-level fat-tree bisection modeling.

Dragonfly conventions used throughout:

* Total link counts tally both directions of every inter-group pair
  connection: total = 2 * C(g,2) * a = g*(g-1)*a. This is the only
  convention consistent with the published per-configuration link tallies,
  and intra-group links are not included in it.
* A half-cut splits the g groups (or the s switches of one group) into two
  equal halves, so the global cut crosses (g/2)^2 * a links and the
  intra-group (rack) cut crosses (s/2)^2 * b links.
* Per-node bisection divides the cut bandwidth by half the affected
  endpoints (N/2 globally, N/g/2 within a rack), i.e. the worst case where
  every endpoint communicates across the cut. Tapers are that per-node
  figure over the endpoint NIC bandwidth, capped at 1.0.

The effective per-link bandwidth of a PCIe6-era fabric defaults to 89 GB/s.
That value is a fit that reproduces the shipped reference tapers; it is a
config field, not a constant.

Fat-trees are modeled as leaf switches plus core groups of combined
switches; a full-bandwidth three-level fat-tree always achieves 100% of the
injection bandwidth, so both tapers are 1.0 by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError, ModelError
from .techdb import LinkTech, TechCatalog, builtin_catalog

DEFAULT_LINK_BW_BPS = 89e9


@dataclass(frozen=True)
class DragonflySpec:
    groups: int
    switches_per_group: int
    intra_links_per_pair: int
    inter_links_per_pair: int
    link_bandwidth_bps: float
    endpoints: int
    endpoint_nic: LinkTech

    def __post_init__(self):
        if self.groups < 2:
            raise ConfigError(f"groups must be >= 2, got {self.groups}")
        if self.switches_per_group < 1:
            raise ConfigError("switches_per_group must be >= 1")
        if self.intra_links_per_pair < 1 or self.inter_links_per_pair < 1:
            raise ConfigError("links per pair must be >= 1")
        if self.link_bandwidth_bps <= 0:
            raise ConfigError("link_bandwidth must be positive")
        if self.endpoints < 2:
            raise ConfigError("endpoints must be >= 2")


@dataclass(frozen=True)
class FatTreeSpec:
    radix: int
    leaf_switches: int
    leaf_uplink_ports: int
    core_groups: int
    core_group_size: int
    core_down_ports_per_switch: int
    endpoints: int
    endpoint_nic: LinkTech | None = None

    def __post_init__(self):
        for field in (
            "radix",
            "leaf_switches",
            "leaf_uplink_ports",
            "core_groups",
            "core_group_size",
            "core_down_ports_per_switch",
            "endpoints",
        ):
            if getattr(self, field) < 1:
                raise ConfigError(f"{field} must be >= 1")


@dataclass(frozen=True)
class TopologyReport:
    """Switch/link tallies plus per-node bisection figures and tapers.

    Bisection values are capped at the endpoint NIC bandwidth and tapers at
    1.0: a cut that could deliver more than a node can inject is reported
    as saturated rather than as a >100% share.
    """

    switch_count: int
    total_links: int
    rack_bisection_bps: float
    global_bisection_bps: float
    rack_taper: float
    global_taper: float
    rack_cut_links: int = 0
    global_cut_links: int = 0


def max_endpoints(kind: str, radix: int) -> int:
    """Largest endpoint count a radix-k network of the given kind scales to:
    k^3/4 for a three-level fat-tree, k^4/64 for a three-hop dragonfly."""
    if radix < 2:
        raise ConfigError(f"radix must be >= 2, got {radix}")
    if kind == "fat-tree":
        count = radix**3 // 4
    elif kind == "dragonfly":
        count = radix**4 // 64
    else:
        raise ConfigError(f"kind must be 'fat-tree' or 'dragonfly', got {kind!r}")
    if count < 1:
        raise ModelError(f"radix too small: {kind} with radix {radix} scales to 0 endpoints")
    return count


def dragonfly_links(spec: DragonflySpec) -> int:
    """Total inter-group links, both directions of each pair connection."""
    g, a = spec.groups, spec.inter_links_per_pair
    return 2 * math.comb(g, 2) * a


def dragonfly_bisection(spec: DragonflySpec) -> TopologyReport:
    """Rack (intra-group) and global (inter-group) bisection per endpoint."""
    g, s = spec.groups, spec.switches_per_group
    if g % 2 != 0:
        raise ConfigError(f"groups must be even for a half-cut, got {g}")
    if s % 2 != 0:
        raise ConfigError(f"switches_per_group must be even for a half-cut, got {s}")

    global_cut = (g // 2) ** 2 * spec.inter_links_per_pair
    rack_cut = (s // 2) ** 2 * spec.intra_links_per_pair

    half_endpoints = spec.endpoints / 2
    half_group_endpoints = spec.endpoints / g / 2
    global_per_node = global_cut * spec.link_bandwidth_bps / half_endpoints
    rack_per_node = rack_cut * spec.link_bandwidth_bps / half_group_endpoints

    nic_bps = spec.endpoint_nic.bandwidth_bps
    return TopologyReport(
        switch_count=g * s,
        total_links=dragonfly_links(spec),
        rack_bisection_bps=min(rack_per_node, nic_bps),
        global_bisection_bps=min(global_per_node, nic_bps),
        rack_taper=min(rack_per_node / nic_bps, 1.0),
        global_taper=min(global_per_node / nic_bps, 1.0),
        rack_cut_links=rack_cut,
        global_cut_links=global_cut,
    )


def fat_tree_build(spec: FatTreeSpec) -> TopologyReport:
    """Switch and inter-level link tallies for a three-level fat-tree.

    Port accounting: each leaf switch spends leaf_uplink_ports up plus
    ceil(endpoints/leaf_switches) down; each core-group member switch
    spends core_down_ports_per_switch down plus one port per core group
    for the fully connected root level. Inter-level links are tallied on
    the core side: core_groups * core_group_size * core_down_ports_per_switch.
    """
    endpoints_per_leaf = math.ceil(spec.endpoints / spec.leaf_switches)
    leaf_ports = spec.leaf_uplink_ports + endpoints_per_leaf
    if leaf_ports > spec.radix:
        raise ConfigError(
            f"leaf tier ports overcommitted: {spec.leaf_uplink_ports} uplinks + "
            f"{endpoints_per_leaf} endpoint ports > radix {spec.radix}"
        )
    core_ports = spec.core_down_ports_per_switch + spec.core_groups
    if core_ports > spec.radix:
        raise ConfigError(
            f"core tier ports overcommitted: {spec.core_down_ports_per_switch} down + "
            f"{spec.core_groups} inter-core ports > radix {spec.radix}"
        )

    switches = spec.leaf_switches + spec.core_groups * spec.core_group_size
    links = spec.core_groups * spec.core_group_size * spec.core_down_ports_per_switch
    nic_bps = spec.endpoint_nic.bandwidth_bps if spec.endpoint_nic else float("nan")
    return TopologyReport(
        switch_count=switches,
        total_links=links,
        rack_bisection_bps=nic_bps,
        global_bisection_bps=nic_bps,
        rack_taper=1.0,
        global_taper=1.0,
    )


@dataclass(frozen=True)
class ReferenceMachine:
    """A named golden configuration with its published report attached."""

    name: str
    spec: DragonflySpec | FatTreeSpec
    expected: TopologyReport
    notes: str = ""


def _disagg_dragonfly(catalog, groups, switches, inter_links):
    return DragonflySpec(
        groups=groups,
        switches_per_group=switches,
        intra_links_per_pair=1,
        inter_links_per_pair=inter_links,
        link_bandwidth_bps=DEFAULT_LINK_BW_BPS,
        endpoints=11000,
        endpoint_nic=catalog.link("PCIe6"),
    )


def reference_machines(catalog: TechCatalog | None = None) -> dict[str, ReferenceMachine]:
    """Named golden topologies with their published switch/link/taper figures.

    The disaggregated rows model an 11,000-endpoint system (10K compute +
    1K memory nodes) on PCIe6 NICs; the production dragonfly row models a
    2021 system on PCIe4 with 2 intra-group links per switch pair and 16
    endpoints per switch.
    """
    catalog = catalog or builtin_catalog()
    pcie4 = catalog.link("PCIe4")

    refs = [
        ReferenceMachine(
            name="perlmutter",
            spec=DragonflySpec(
                groups=24,
                switches_per_group=16,
                intra_links_per_pair=2,
                inter_links_per_pair=6,
                link_bandwidth_bps=pcie4.bandwidth_bps,
                endpoints=6144,
                endpoint_nic=pcie4,
            ),
            expected=TopologyReport(384, 3312, 25e9, 7e9, 1.0, 0.28),
            notes="production dragonfly, 24 groups x 16 switches, PCIe4 era",
        ),
        ReferenceMachine(
            name="disagg-24x32-9pct",
            spec=_disagg_dragonfly(catalog, 24, 32, 4),
            expected=TopologyReport(768, 2208, 100e9, 9e9, 1.0, 0.09),
        ),
        ReferenceMachine(
            name="disagg-24x32-28pct",
            spec=_disagg_dragonfly(catalog, 24, 32, 12),
            expected=TopologyReport(768, 6624, 100e9, 28e9, 1.0, 0.28),
        ),
        ReferenceMachine(
            name="disagg-24x32-50pct",
            spec=_disagg_dragonfly(catalog, 24, 32, 21),
            expected=TopologyReport(768, 11592, 100e9, 50e9, 1.0, 0.50),
        ),
        ReferenceMachine(
            name="disagg-24x32-100pct",
            spec=_disagg_dragonfly(catalog, 24, 32, 43),
            expected=TopologyReport(768, 23736, 100e9, 100e9, 1.0, 1.0),
        ),
        ReferenceMachine(
            name="disagg-48x16-28pct",
            spec=_disagg_dragonfly(catalog, 48, 16, 3),
            expected=TopologyReport(768, 6768, 50e9, 28e9, 0.50, 0.28),
        ),
        ReferenceMachine(
            name="disagg-48x16-56pct",
            spec=_disagg_dragonfly(catalog, 48, 16, 6),
            expected=TopologyReport(768, 13536, 50e9, 56e9, 0.50, 0.56),
        ),
        ReferenceMachine(
            name="disagg-48x16-100pct",
            spec=_disagg_dragonfly(catalog, 48, 16, 11),
            expected=TopologyReport(768, 24816, 50e9, 100e9, 0.50, 1.0),
        ),
        ReferenceMachine(
            name="disagg-48x16-50pct-rack",
            spec=_disagg_dragonfly(catalog, 48, 16, 3),
            expected=TopologyReport(768, 6768, 50e9, 28e9, 0.50, 0.28),
            notes="48-group layout highlighted for its 50% rack bisection",
        ),
        ReferenceMachine(
            name="disagg-fat-tree",
            spec=FatTreeSpec(
                radix=64,
                leaf_switches=762,
                leaf_uplink_ports=46,
                core_groups=16,
                core_group_size=16,
                core_down_ports_per_switch=46,
                endpoints=11000,
                endpoint_nic=catalog.link("PCIe6"),
            ),
            expected=TopologyReport(1018, 11776, 100e9, 100e9, 1.0, 1.0),
            notes="three-level fat-tree; link tally is core-side inter-level links",
        ),
    ]
    return {ref.name: ref for ref in refs}


def build_report(spec: DragonflySpec | FatTreeSpec) -> TopologyReport:
    """Dispatch to the matching builder."""
    if isinstance(spec, DragonflySpec):
        return dragonfly_bisection(spec)
    if isinstance(spec, FatTreeSpec):
        return fat_tree_build(spec)
    raise ConfigError(f"unsupported topology spec {type(spec).__name__}")
