"""Memory roofline and concurrency (Little's Law) roofline.

The memory roofline bounds an application's attainable local-side
bandwidth by its local:remote access ratio: moving L local bytes per R
remote bytes sustains at most min(B_l, (L/R) * t * B_r), where B_l is the
local memory bandwidth, B_r the remote (injection) bandwidth, and t the
bisection taper of the chosen scope. The knee of each curve is the machine
balance B_l / (t * B_r): applications above it run at full local bandwidth,
applications below it are remote-limited.

Bisection enters only as the multiplicative taper on B_r. Latency does not
appear here; it lives in the concurrency roofline, where sustained
bandwidth is min(link capacity, outstanding_transfers * quanta / latency).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import ConfigError
from .techdb import TechCatalog

DEFAULT_SCOPES = MappingProxyType({"injection": 1.0, "rack": 0.5, "global": 0.28})


@dataclass(frozen=True)
class RooflineConfig:
    local_bandwidth_bps: float
    remote_bandwidth_bps: float
    tapers: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_SCOPES))

    def __post_init__(self):
        if self.remote_bandwidth_bps <= 0:
            raise ConfigError("remote_bandwidth must be positive")
        if self.local_bandwidth_bps < self.remote_bandwidth_bps:
            raise ConfigError("local_bandwidth must be >= remote_bandwidth")
        for scope, taper in self.tapers.items():
            if not 0 < taper <= 1:
                raise ConfigError(f"taper[{scope}] must be in (0,1], got {taper}")

    def taper(self, scope: str) -> float:
        try:
            return self.tapers[scope]
        except KeyError:
            raise ConfigError(
                f"unknown scope {scope!r}; configured: {', '.join(self.tapers)}"
            ) from None

    @classmethod
    def from_catalog(
        cls,
        catalog: TechCatalog,
        local: str = "HBM3",
        remote: str = "PCIe6",
        tapers: Mapping[str, float] | None = None,
    ) -> "RooflineConfig":
        return cls(
            local_bandwidth_bps=catalog.memory(local).bandwidth_bps,
            remote_bandwidth_bps=catalog.link(remote).bandwidth_bps,
            tapers=dict(tapers or DEFAULT_SCOPES),
        )


@dataclass(frozen=True)
class RooflinePoint:
    lr: float
    attainable_bps: float
    limiter: str  # "local" | "remote"
    remote_utilization: float
    scope: str = "injection"


def machine_balance(cfg: RooflineConfig, scope: str = "injection") -> float:
    """The L:R knee for a scope: B_l / (taper * B_r)."""
    return cfg.local_bandwidth_bps / (cfg.taper(scope) * cfg.remote_bandwidth_bps)


def attainable_bandwidth(lr: float, cfg: RooflineConfig, scope: str = "injection") -> RooflinePoint:
    """Attainable local-side bandwidth at a given L:R under one scope.

    remote_utilization is the fraction of the injection NIC the
    application actually consumes while running at the attainable rate.
    """
    if lr <= 0:
        raise ConfigError(f"lr must be positive, got {lr}")
    taper = cfg.taper(scope)
    remote_bound = lr * taper * cfg.remote_bandwidth_bps
    attainable = min(cfg.local_bandwidth_bps, remote_bound)
    limiter = "local" if lr >= machine_balance(cfg, scope) else "remote"
    return RooflinePoint(
        lr=lr,
        attainable_bps=attainable,
        limiter=limiter,
        remote_utilization=attainable / (lr * cfg.remote_bandwidth_bps),
        scope=scope,
    )


def roofline_curve(
    cfg: RooflineConfig,
    lr_range=(1.0, 1e4),
    scopes=None,
    points_per_decade: int = 64,
) -> dict[str, list[RooflinePoint]]:
    """Sample one diagonal-plus-plateau curve per scope, log-spaced in L:R.

    lr_range is either a (min, max) pair to sample or an explicit sequence
    of L:R values.
    """
    if scopes is None:
        scopes = list(cfg.tapers)
    lrs = np.asarray(lr_range, dtype=float)
    if lrs.size == 0:
        raise ConfigError("lr_range must be nonempty")
    if np.any(lrs <= 0):
        raise ConfigError("lr_range values must be positive")
    if lrs.size == 2 and lrs[0] < lrs[1]:
        decades = math.log10(lrs[1] / lrs[0])
        n = max(2, int(round(decades * points_per_decade)) + 1)
        lrs = np.geomspace(lrs[0], lrs[1], n)
    return {
        scope: [attainable_bandwidth(float(lr), cfg, scope) for lr in lrs]
        for scope in scopes
    }


@dataclass(frozen=True)
class ConcurrencyPoint:
    quanta_bytes: float
    concurrency: float
    latency_s: float
    sustained_bps: float
    link_cap_bps: float


def sustained_bandwidth(
    quanta_bytes: float, concurrency: float, latency_s: float, link_cap_bps: float
) -> ConcurrencyPoint:
    """Little's Law bound: min(link capacity, concurrency * quanta / latency)."""
    for name, value in (
        ("quanta", quanta_bytes),
        ("concurrency", concurrency),
        ("latency", latency_s),
        ("link_cap", link_cap_bps),
    ):
        if value <= 0:
            raise ConfigError(f"{name} must be positive, got {value}")
    return ConcurrencyPoint(
        quanta_bytes=quanta_bytes,
        concurrency=concurrency,
        latency_s=latency_s,
        sustained_bps=min(link_cap_bps, concurrency * quanta_bytes / latency_s),
        link_cap_bps=link_cap_bps,
    )


def required_concurrency(target_bps: float, quanta_bytes: float, latency_s: float) -> int:
    """Outstanding transfers needed to sustain a target bandwidth:
    ceil(target * latency / quanta)."""
    for name, value in (
        ("target", target_bps),
        ("quanta", quanta_bytes),
        ("latency", latency_s),
    ):
        if value <= 0:
            raise ConfigError(f"{name} must be positive, got {value}")
    return math.ceil(target_bps * latency_s / quanta_bytes)
