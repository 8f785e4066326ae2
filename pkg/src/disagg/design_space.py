"""Per-compute-node remote memory capacity and bandwidth across C:M ratios.

The pooled remote memory is shared by the compute nodes that demand it:
with C compute nodes, M memory nodes of a given capacity, and a demand
fraction f, each demanding node sees M*cap/(f*C) bytes of remote capacity
and min(NIC, M*mem_nic/(f*C)) of remote bandwidth. Capacity grows without
bound as supply rises; bandwidth saturates at the compute node's own NIC.

Node shares are kept as real numbers; no integer rounding of memory nodes
per compute node is applied.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, ModelError
from .techdb import MachineConfig


def _demanding_nodes(config: MachineConfig) -> float:
    if config.memory_nodes == 0:
        raise ModelError("no remote memory configured (memory_nodes = 0)")
    demand = config.demand_fraction * config.compute_nodes
    if demand < 1:
        raise ModelError(
            f"demand_fraction x compute_nodes = {demand:.4g} < 1; "
            "fewer than one node demands remote memory"
        )
    return demand


def remote_capacity_per_node(config: MachineConfig) -> float:
    """Remote capacity available to each demanding compute node, in bytes."""
    demand = _demanding_nodes(config)
    return config.memory_nodes * config.memory_node_capacity_bytes / demand


def remote_bandwidth_per_node(config: MachineConfig) -> float:
    """Remote bandwidth per demanding compute node, capped at its NIC."""
    demand = _demanding_nodes(config)
    supply = config.memory_nodes * config.memory_node_nic.bandwidth_bps / demand
    return min(config.compute_spec.nic.bandwidth_bps, supply)


@dataclass(frozen=True)
class DesignPoint:
    """One heat-map cell: a (memory nodes, demand fraction) configuration."""

    memory_nodes: int
    demand_fraction: float
    remote_capacity_bytes: float
    remote_bandwidth_bps: float


@dataclass(frozen=True)
class DesignGrid:
    """Rectangular grid of design points; rows follow f_values, columns m_values."""

    m_values: tuple[int, ...]
    f_values: tuple[float, ...]
    points: tuple[tuple[DesignPoint, ...], ...]
    taper: float
    taper_mode: str

    def capacity_matrix(self) -> np.ndarray:
        return np.array([[p.remote_capacity_bytes for p in row] for row in self.points])

    def bandwidth_matrix(self) -> np.ndarray:
        return np.array([[p.remote_bandwidth_bps for p in row] for row in self.points])


def _check_axis(values, name: str, integral: bool):
    if len(values) == 0:
        raise ConfigError(f"{name}: axis must be nonempty")
    diffs = np.diff(np.asarray(values, dtype=float))
    if len(values) > 1 and not (np.all(diffs > 0) or np.all(diffs < 0)):
        raise ConfigError(f"{name}: axis values must be strictly monotone")
    if integral and any(int(v) != v for v in values):
        raise ConfigError(f"{name}: axis values must be integers")


def build_grid(
    config: MachineConfig,
    m_values,
    f_values,
    taper: float = 1.0,
    taper_mode: str = "scale",
) -> DesignGrid:
    """Evaluate the design space over memory-node counts and demand fractions.

    taper models the bisection bandwidth as a fraction of injection
    bandwidth. In "scale" mode (default) every cell's bandwidth is
    multiplied by it; in "cap" mode cells are instead clamped to
    taper * NIC, which leaves already-unsaturated cells untouched.
    """
    if not 0 < taper <= 1:
        raise ConfigError(f"taper must be in (0,1], got {taper}")
    if taper_mode not in ("scale", "cap"):
        raise ConfigError(f"taper_mode must be 'scale' or 'cap', got {taper_mode!r}")
    _check_axis(m_values, "m_values", integral=True)
    _check_axis(f_values, "f_values", integral=False)

    nic_bps = config.compute_spec.nic.bandwidth_bps
    rows = []
    for f in f_values:
        row = []
        for m in m_values:
            cell_cfg = replace(config, memory_nodes=int(m), demand_fraction=float(f))
            capacity = remote_capacity_per_node(cell_cfg)
            bandwidth = remote_bandwidth_per_node(cell_cfg)
            if taper_mode == "scale":
                bandwidth = taper * bandwidth
            else:
                bandwidth = min(bandwidth, taper * nic_bps)
            row.append(
                DesignPoint(
                    memory_nodes=int(m),
                    demand_fraction=float(f),
                    remote_capacity_bytes=capacity,
                    remote_bandwidth_bps=bandwidth,
                )
            )
        rows.append(tuple(row))
    return DesignGrid(
        m_values=tuple(int(m) for m in m_values),
        f_values=tuple(float(f) for f in f_values),
        points=tuple(rows),
        taper=float(taper),
        taper_mode=taper_mode,
    )
