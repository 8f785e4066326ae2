"""Zone classification and workload-level compute:memory sizing.

An application lands in one of five zones on a configured machine:

* Blue   - footprint fits in local HBM; never touches remote memory.
* Red    - rack scope only: footprint exceeds the rack's pooled remote
           capacity.
* Green  - local bandwidth is the binding bound; disaggregation costs
           nothing.
* Orange - the contention-adjusted injection bound binds (low L:R or a
           small footprint share of a memory node).
* Grey   - the bisection bound of the chosen scope binds.

Capacity checks (Blue, Red) run first and depend only on capacities; the
bandwidth zones compare b_local = B_l, b_inj = lr * NIC * share, and
b_bis = lr * NIC * taper, where share = min(1, footprint / memory-node
capacity) is the memory-node NIC fraction a sharing compute node can
claim. The contention share applies only to the injection bound; bisection
thresholds are flat. Ties resolve toward the less constrained zone (Green
over Grey over Orange), so an application sitting exactly on a knee runs
at full local bandwidth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .appmodel import AppCharacterization
from .errors import ConfigError, ModelError
from .roofline import RooflineConfig, machine_balance
from .techdb import MachineConfig


class Zone(str, Enum):
    BLUE = "Blue"
    GREEN = "Green"
    ORANGE = "Orange"
    GREY = "Grey"
    RED = "Red"


class Limiter(str, Enum):
    HBM = "HBM"
    INJECTION = "injection"
    RACK_BISECTION = "rack-bisection"
    GLOBAL_BISECTION = "global-bisection"
    CAPACITY = "capacity"


@dataclass(frozen=True)
class ZoneConfig:
    hbm_capacity_bytes: float
    memory_node_capacity_bytes: float
    remote_nic_bps: float
    local_bandwidth_bps: float
    rack_taper: float = 0.5
    global_taper: float = 0.28
    rack_memory_nodes: int = 20
    scope: str = "global"

    def __post_init__(self):
        if self.hbm_capacity_bytes <= 0 or self.memory_node_capacity_bytes <= 0:
            raise ConfigError("capacities must be positive")
        if self.remote_nic_bps <= 0 or self.local_bandwidth_bps <= 0:
            raise ConfigError("bandwidths must be positive")
        for name in ("rack_taper", "global_taper"):
            if not 0 < getattr(self, name) <= 1:
                raise ConfigError(f"{name} must be in (0,1]")
        if self.rack_memory_nodes < 0:
            raise ConfigError("rack_memory_nodes must be >= 0")
        if self.scope not in ("rack", "global"):
            raise ConfigError(f"scope must be 'rack' or 'global', got {self.scope!r}")

    def taper(self) -> float:
        return self.rack_taper if self.scope == "rack" else self.global_taper


def zone_config_from_machine(
    machine: MachineConfig,
    scope: str = "global",
    rack_taper: float = 0.5,
    global_taper: float = 0.28,
    dragonfly_groups: int = 48,
    rack_memory_nodes: int | None = None,
) -> ZoneConfig:
    """Derive a ZoneConfig from a machine configuration. Rack remote
    capacity defaults to memory_nodes / dragonfly_groups, rounded down."""
    if rack_memory_nodes is None:
        rack_memory_nodes = machine.memory_nodes // dragonfly_groups
    return ZoneConfig(
        hbm_capacity_bytes=machine.compute_spec.local_memory.capacity_bytes,
        memory_node_capacity_bytes=machine.memory_node_capacity_bytes,
        remote_nic_bps=machine.compute_spec.nic.bandwidth_bps,
        local_bandwidth_bps=machine.compute_spec.local_memory.bandwidth_bps,
        rack_taper=rack_taper,
        global_taper=global_taper,
        rack_memory_nodes=rack_memory_nodes,
        scope=scope,
    )


def contention_share(footprint_bytes: float, cfg: ZoneConfig) -> float:
    """Fraction of one memory node's NIC a sharing compute node can claim."""
    return min(1.0, footprint_bytes / cfg.memory_node_capacity_bytes)


def contention_balance(footprint_bytes: float, cfg: ZoneConfig) -> float:
    """The L:R value on the Green/Orange contention antidiagonal for a
    footprint: B_l / (NIC * share). At one full memory node it meets the
    injection machine balance; the local-capacity boundary is the
    antidiagonal's left endpoint and is allowed."""
    if footprint_bytes < cfg.hbm_capacity_bytes:
        raise ModelError("contention balance applies only at or above local capacity")
    share = contention_share(footprint_bytes, cfg)
    return cfg.local_bandwidth_bps / (cfg.remote_nic_bps * share)


@dataclass(frozen=True)
class ZoneResult:
    zone: Zone
    limiter: Limiter
    scope: str
    bound_local_bps: float | None = None
    bound_injection_bps: float | None = None
    bound_bisection_bps: float | None = None
    share: float | None = None


def classify(app: AppCharacterization, cfg: ZoneConfig) -> ZoneResult:
    """Assign an application its zone on the configured machine."""
    if app.footprint_bytes <= cfg.hbm_capacity_bytes:
        return ZoneResult(Zone.BLUE, Limiter.HBM, cfg.scope)
    if cfg.scope == "rack":
        rack_capacity = cfg.rack_memory_nodes * cfg.memory_node_capacity_bytes
        if app.footprint_bytes > rack_capacity:
            return ZoneResult(Zone.RED, Limiter.CAPACITY, cfg.scope)

    share = contention_share(app.footprint_bytes, cfg)
    b_local = cfg.local_bandwidth_bps
    b_inj = app.lr * cfg.remote_nic_bps * share
    b_bis = app.lr * cfg.remote_nic_bps * cfg.taper()

    # Ties go to the faster zone: Green beats Grey beats Orange.
    minimum = min(b_local, b_inj, b_bis)
    if b_local <= minimum:
        zone, limiter = Zone.GREEN, Limiter.HBM
    elif b_bis <= minimum:
        zone, limiter = Zone.GREY, (
            Limiter.RACK_BISECTION if cfg.scope == "rack" else Limiter.GLOBAL_BISECTION
        )
    else:
        zone, limiter = Zone.ORANGE, Limiter.INJECTION
    return ZoneResult(
        zone=zone,
        limiter=limiter,
        scope=cfg.scope,
        bound_local_bps=b_local,
        bound_injection_bps=b_inj,
        bound_bisection_bps=b_bis,
        share=share,
    )


def balance_consistency(cfg: ZoneConfig) -> tuple[float, float]:
    """(contention balance at one full memory node, injection machine
    balance) - equal by construction; exposed for cross-checking."""
    roofline = RooflineConfig(
        local_bandwidth_bps=cfg.local_bandwidth_bps,
        remote_bandwidth_bps=cfg.remote_nic_bps,
    )
    return (
        contention_balance(cfg.memory_node_capacity_bytes, cfg),
        machine_balance(roofline, "injection"),
    )


@dataclass(frozen=True)
class WorkloadEntry:
    app: AppCharacterization
    node_hours: float

    def __post_init__(self):
        if self.node_hours < 0:
            raise ConfigError(f"{self.app.name}: node_hours must be >= 0")


@dataclass(frozen=True)
class AppSizing:
    app: AppCharacterization
    zone: Zone
    node_hours: float
    scaled_hours: float


@dataclass(frozen=True)
class WorkloadSizing:
    """Recommended compute:memory node ratio for a workload mix.

    ratio = blue node hours / sum over remote-memory zones of node hours
    scaled by footprint / memory-node capacity. An infinite ratio means no
    entry needs remote memory at all.
    """

    ratio: float
    blue_hours: float
    scaled_remote_hours: float
    orange_hours: float
    total_hours: float
    per_app: tuple[AppSizing, ...]
    advisory: str | None
    message: str


def size_workload(entries: list[WorkloadEntry], cfg: ZoneConfig) -> WorkloadSizing:
    """Size compute vs. memory nodes from a node-hours-weighted workload."""
    if not entries:
        raise ConfigError("workload must contain at least one entry")

    per_app = []
    blue_hours = 0.0
    scaled_remote = 0.0
    orange_hours = 0.0
    total = 0.0
    for entry in entries:
        result = classify(entry.app, cfg)
        total += entry.node_hours
        scaled = 0.0
        if result.zone == Zone.BLUE:
            blue_hours += entry.node_hours
        else:
            scaled = entry.node_hours * (
                entry.app.footprint_bytes / cfg.memory_node_capacity_bytes
            )
            scaled_remote += scaled
            if result.zone == Zone.ORANGE:
                orange_hours += entry.node_hours
        per_app.append(AppSizing(entry.app, result.zone, entry.node_hours, scaled))

    advisory = None
    if total > 0 and orange_hours / total > 0.5:
        advisory = (
            "injection-bound (Orange) work dominates the node hours; this "
            "workload is better served by node-local memory than by a "
            "remote pool behind the NIC"
        )

    if scaled_remote == 0:
        return WorkloadSizing(
            ratio=math.inf,
            blue_hours=blue_hours,
            scaled_remote_hours=0.0,
            orange_hours=orange_hours,
            total_hours=total,
            per_app=tuple(per_app),
            advisory=advisory,
            message="no remote-memory demand; memory nodes unnecessary",
        )
    ratio = blue_hours / scaled_remote
    return WorkloadSizing(
        ratio=ratio,
        blue_hours=blue_hours,
        scaled_remote_hours=scaled_remote,
        orange_hours=orange_hours,
        total_hours=total,
        per_app=tuple(per_app),
        advisory=advisory,
        message=f"recommended compute:memory node ratio {ratio:.3g} : 1",
    )
