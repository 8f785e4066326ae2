"""Technology catalog and machine configuration.

The catalog names memory and interconnect generations with their per-node
figures. It ships as a data file (data/catalog.json) rather than code so
users can add future technologies without touching the package. Shipped
bandwidths are per node: DRAM entries assume 16 DIMMs per memory node
(DDR4: 16 x 25.6 GB/s, 16 x 32 GB; DDR5: 16 x 51.2 GB/s, 16 x 256 GB) and
HBM3 assumes eight 16-high 64 GB stacks. NIC entries default to a 2 us
one-way remote access latency.

A MachineConfig binds compute and memory node counts to those technologies
plus the demand fraction: the share of compute nodes that simultaneously
need remote memory.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

from .errors import CatalogError, ConfigError
from .units import parse_bytes, parse_rate, parse_seconds


@dataclass(frozen=True)
class MemoryTech:
    """One memory generation: per-node bandwidth and capacity."""

    name: str
    year: int
    bandwidth_bps: float
    capacity_bytes: float

    def __post_init__(self):
        if self.bandwidth_bps <= 0:
            raise ConfigError(f"{self.name}.bandwidth must be positive")
        if self.capacity_bytes <= 0:
            raise ConfigError(f"{self.name}.capacity must be positive")


@dataclass(frozen=True)
class LinkTech:
    """One interconnect generation: per-endpoint NIC bandwidth and latency."""

    name: str
    bandwidth_bps: float
    latency_s: float

    def __post_init__(self):
        if self.bandwidth_bps <= 0:
            raise ConfigError(f"{self.name}.bandwidth must be positive")
        if self.latency_s <= 0:
            raise ConfigError(f"{self.name}.latency must be positive")


@dataclass(frozen=True)
class NodeSpec:
    """A compute node: local memory plus the NIC it reaches remote memory through."""

    local_memory: MemoryTech
    nic: LinkTech


@dataclass(frozen=True)
class MachineConfig:
    """System-level configuration: node counts, specs, and demand fraction."""

    compute_nodes: int
    memory_nodes: int
    compute_spec: NodeSpec
    memory_node_capacity_bytes: float
    memory_node_nic: LinkTech
    demand_fraction: float

    def __post_init__(self):
        if self.compute_nodes < 1:
            raise ConfigError(f"compute_nodes must be >= 1, got {self.compute_nodes}")
        if self.memory_nodes < 0:
            raise ConfigError(f"memory_nodes must be >= 0, got {self.memory_nodes}")
        if self.memory_node_capacity_bytes <= 0:
            raise ConfigError("memory_node_capacity must be positive")
        if not 0 < self.demand_fraction <= 1:
            raise ConfigError("demand_fraction must be in (0,1]")


class TechCatalog:
    """Immutable name -> technology mapping; safe for concurrent reads."""

    def __init__(self, memory: dict[str, MemoryTech], links: dict[str, LinkTech]):
        self._memory = dict(memory)
        self._links = dict(links)

    @property
    def memory_names(self) -> tuple[str, ...]:
        return tuple(self._memory)

    @property
    def link_names(self) -> tuple[str, ...]:
        return tuple(self._links)

    def memory(self, name: str) -> MemoryTech:
        try:
            return self._memory[name]
        except KeyError:
            raise CatalogError(
                f"unknown memory technology {name!r}; shipped: {', '.join(self._memory)}"
            ) from None

    def link(self, name: str) -> LinkTech:
        try:
            return self._links[name]
        except KeyError:
            raise CatalogError(
                f"unknown link technology {name!r}; shipped: {', '.join(self._links)}"
            ) from None

    def lookup(self, name: str) -> MemoryTech | LinkTech:
        if name in self._memory:
            return self._memory[name]
        if name in self._links:
            return self._links[name]
        raise CatalogError(
            f"unknown technology {name!r}; shipped: "
            f"{', '.join((*self._memory, *self._links))}"
        )

    def entries(self) -> list[MemoryTech | LinkTech]:
        return [*self._memory.values(), *self._links.values()]

    @classmethod
    def from_dict(cls, data: dict) -> "TechCatalog":
        memory = {}
        for entry in data.get("memory", []):
            tech = MemoryTech(
                name=entry["name"],
                year=int(entry.get("year", 0)),
                bandwidth_bps=parse_rate(entry["bandwidth"], f"memory[{entry['name']}].bandwidth"),
                capacity_bytes=parse_bytes(entry["capacity"], f"memory[{entry['name']}].capacity"),
            )
            memory[tech.name] = tech
        links = {}
        for entry in data.get("links", []):
            tech = LinkTech(
                name=entry["name"],
                bandwidth_bps=parse_rate(entry["bandwidth"], f"links[{entry['name']}].bandwidth"),
                latency_s=parse_seconds(entry.get("latency", 2e-6), f"links[{entry['name']}].latency"),
            )
            links[tech.name] = tech
        return cls(memory, links)


def _read_data_file(name: str) -> dict:
    text = resources.files("disagg").joinpath("data").joinpath(name).read_text()
    return json.loads(text)


def load_catalog(path: str | Path | None = None) -> TechCatalog:
    """Load a technology catalog from a JSON file, or the shipped one."""
    if path is None:
        return TechCatalog.from_dict(_read_data_file("catalog.json"))
    return TechCatalog.from_dict(json.loads(Path(path).read_text()))


def builtin_catalog() -> TechCatalog:
    """The shipped catalog: DDR4/DDR5, HBM2/HBM3, PCIe4/5/6 NICs."""
    return load_catalog(None)


def _node_spec_from(entry, catalog: TechCatalog, field: str) -> NodeSpec:
    local = entry.get("local_memory")
    nic = entry.get("nic")
    if local is None or nic is None:
        raise ConfigError(f"{field}: needs 'local_memory' and 'nic'")
    if isinstance(local, str):
        local_tech = catalog.memory(local)
    else:
        local_tech = MemoryTech(
            name=local.get("name", "custom-memory"),
            year=int(local.get("year", 0)),
            bandwidth_bps=parse_rate(local["bandwidth"], f"{field}.local_memory.bandwidth"),
            capacity_bytes=parse_bytes(local["capacity"], f"{field}.local_memory.capacity"),
        )
    if isinstance(nic, str):
        nic_tech = catalog.link(nic)
    else:
        nic_tech = LinkTech(
            name=nic.get("name", "custom-nic"),
            bandwidth_bps=parse_rate(nic["bandwidth"], f"{field}.nic.bandwidth"),
            latency_s=parse_seconds(nic.get("latency", 2e-6), f"{field}.nic.latency"),
        )
    return NodeSpec(local_memory=local_tech, nic=nic_tech)


def machine_from_dict(data: dict, catalog: TechCatalog | None = None) -> MachineConfig:
    """Build a MachineConfig from its JSON form, resolving technology names."""
    catalog = catalog or builtin_catalog()
    for key in ("compute_nodes", "memory_nodes", "demand_fraction", "compute_node", "memory_node"):
        if key not in data:
            raise ConfigError(f"machine config missing field {key!r}")
    mem_node = data["memory_node"]
    if "capacity" not in mem_node or "nic" not in mem_node:
        raise ConfigError("memory_node: needs 'capacity' and 'nic'")
    nic = mem_node["nic"]
    if isinstance(nic, str):
        nic_tech = catalog.link(nic)
    else:
        nic_tech = LinkTech(
            name=nic.get("name", "custom-nic"),
            bandwidth_bps=parse_rate(nic["bandwidth"], "memory_node.nic.bandwidth"),
            latency_s=parse_seconds(nic.get("latency", 2e-6), "memory_node.nic.latency"),
        )
    try:
        compute_nodes = int(data["compute_nodes"])
        memory_nodes = int(data["memory_nodes"])
    except (TypeError, ValueError):
        raise ConfigError("compute_nodes/memory_nodes must be integers") from None
    return MachineConfig(
        compute_nodes=compute_nodes,
        memory_nodes=memory_nodes,
        compute_spec=_node_spec_from(data["compute_node"], catalog, "compute_node"),
        memory_node_capacity_bytes=parse_bytes(mem_node["capacity"], "memory_node.capacity"),
        memory_node_nic=nic_tech,
        demand_fraction=float(data["demand_fraction"]),
    )


def validate(config) -> MachineConfig:
    """Normalize and validate a machine configuration.

    Accepts either a MachineConfig (re-checked as-is) or a raw dict in the
    JSON schema. Idempotent: validate(validate(x)) == validate(x).
    """
    if isinstance(config, MachineConfig):
        # Re-run invariant checks; replace() re-triggers __post_init__.
        return replace(config)
    if isinstance(config, dict):
        return machine_from_dict(config)
    raise ConfigError(f"expected MachineConfig or dict, got {type(config).__name__}")


def load_machine(path: str | Path, catalog: TechCatalog | None = None) -> MachineConfig:
    """Read a machine configuration from a JSON file."""
    return machine_from_dict(json.loads(Path(path).read_text()), catalog)


def default_machine(catalog: TechCatalog | None = None) -> MachineConfig:
    """The shipped reference machine: 10K compute nodes with HBM3 and PCIe6
    NICs, 1K DDR5 memory nodes of 4096 GB each, 10% demand fraction."""
    return machine_from_dict(_read_data_file("default_machine.json"), catalog)
