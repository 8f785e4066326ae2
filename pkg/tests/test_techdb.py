import pytest

from disagg.errors import CatalogError, ConfigError
from disagg.techdb import (
    LinkTech,
    MachineConfig,
    MemoryTech,
    NodeSpec,
    builtin_catalog,
    default_machine,
    machine_from_dict,
    validate,
)

GB = 1e9


class TestCatalog:
    def test_shipped_memory_values(self, catalog):
        # DRAM entries are 16 DIMMs at the per-DIMM vendor figures.
        assert catalog.memory("DDR4").bandwidth_bps == 16 * 25.6 * GB
        assert catalog.memory("DDR4").capacity_bytes == 16 * 32 * GB
        assert catalog.memory("DDR5").bandwidth_bps == 16 * 51.2 * GB
        assert catalog.memory("DDR5").capacity_bytes == 16 * 256 * GB

    def test_hbm3_cross_checks(self, catalog):
        hbm3 = catalog.memory("HBM3")
        # Eight stacks at DDR5-node rate per stack.
        assert hbm3.bandwidth_bps == pytest.approx(8 * 819.2 * GB)
        assert hbm3.capacity_bytes == 8 * 64 * GB
        # Balance against the PCIe6 NIC: 65.5 within 0.1%.
        ratio = hbm3.bandwidth_bps / catalog.link("PCIe6").bandwidth_bps
        assert ratio == pytest.approx(65.5, rel=1e-3)

    def test_hbm2_pcie4_balance(self, catalog):
        ratio = catalog.memory("HBM2").bandwidth_bps / catalog.link("PCIe4").bandwidth_bps
        assert ratio == pytest.approx(62.2, abs=1e-9)

    def test_nic_ladder(self, catalog):
        assert catalog.link("PCIe4").bandwidth_bps == 25 * GB
        assert catalog.link("PCIe5").bandwidth_bps == 50 * GB
        assert catalog.link("PCIe6").bandwidth_bps == 100 * GB
        for name in catalog.link_names:
            assert catalog.link(name).latency_s == 2e-6

    def test_lookup_total_over_shipped_names(self, catalog):
        for name in (*catalog.memory_names, *catalog.link_names):
            assert catalog.lookup(name).name == name

    def test_lookup_fails_loudly(self, catalog):
        with pytest.raises(CatalogError, match="DDR9"):
            catalog.lookup("DDR9")
        with pytest.raises(CatalogError):
            catalog.memory("PCIe6")  # link, not memory
        with pytest.raises(CatalogError):
            catalog.link("HBM3")


class TestMachineConfig:
    def test_default_machine(self, machine):
        assert machine.compute_nodes == 10000
        assert machine.memory_nodes == 1000
        assert machine.demand_fraction == 0.1
        assert machine.memory_node_capacity_bytes == 4096 * GB
        assert machine.compute_spec.local_memory.name == "HBM3"
        assert machine.compute_spec.nic.name == "PCIe6"

    def test_validate_accepts_reference_shape(self, catalog):
        cfg = machine_from_dict(
            {
                "compute_nodes": 10000,
                "memory_nodes": 1000,
                "demand_fraction": 0.1,
                "compute_node": {"local_memory": "HBM3", "nic": "PCIe6"},
                "memory_node": {"capacity": "4 TB", "nic": "PCIe6"},
            },
            catalog,
        )
        assert cfg.memory_node_capacity_bytes == 4e12

    def test_validate_idempotent(self, machine):
        assert validate(validate(machine)) == validate(machine) == machine

    def test_demand_fraction_zero_rejected(self, machine):
        with pytest.raises(ConfigError, match=r"demand_fraction must be in \(0,1\]"):
            MachineConfig(
                compute_nodes=10,
                memory_nodes=1,
                compute_spec=machine.compute_spec,
                memory_node_capacity_bytes=4e12,
                memory_node_nic=machine.memory_node_nic,
                demand_fraction=0.0,
            )

    @pytest.mark.parametrize("fraction", [-0.1, 1.5])
    def test_demand_fraction_out_of_range(self, machine, fraction):
        with pytest.raises(ConfigError, match="demand_fraction"):
            validate(
                {
                    "compute_nodes": 10,
                    "memory_nodes": 1,
                    "demand_fraction": fraction,
                    "compute_node": {"local_memory": "HBM3", "nic": "PCIe6"},
                    "memory_node": {"capacity": "4 TB", "nic": "PCIe6"},
                }
            )

    def test_nonpositive_counts_rejected(self, machine):
        with pytest.raises(ConfigError, match="compute_nodes"):
            MachineConfig(
                compute_nodes=0,
                memory_nodes=1,
                compute_spec=machine.compute_spec,
                memory_node_capacity_bytes=4e12,
                memory_node_nic=machine.memory_node_nic,
                demand_fraction=0.5,
            )

    def test_memory_nodes_zero_is_constructible(self, machine):
        # M = 0 is a valid (degenerate) config; queries fail downstream.
        cfg = validate(
            {
                "compute_nodes": 10,
                "memory_nodes": 0,
                "demand_fraction": 0.5,
                "compute_node": {"local_memory": "HBM3", "nic": "PCIe6"},
                "memory_node": {"capacity": "4 TB", "nic": "PCIe6"},
            }
        )
        assert cfg.memory_nodes == 0

    def test_units_normalized_from_strings(self, catalog):
        cfg = machine_from_dict(
            {
                "compute_nodes": 2,
                "memory_nodes": 1,
                "demand_fraction": 1.0,
                "compute_node": {
                    "local_memory": {"name": "X", "bandwidth": "1 TB/s", "capacity": "64 GB"},
                    "nic": {"name": "N", "bandwidth": "50 GB/s", "latency": "2 us"},
                },
                "memory_node": {"capacity": "1.5 TB", "nic": "PCIe5"},
            },
            catalog,
        )
        assert cfg.compute_spec.local_memory.bandwidth_bps == 1e12
        assert cfg.compute_spec.nic.latency_s == 2e-6
        assert cfg.memory_node_capacity_bytes == 1.5e12

    def test_missing_field_diagnostic(self):
        with pytest.raises(ConfigError, match="memory_node"):
            machine_from_dict({"compute_nodes": 1, "memory_nodes": 1, "demand_fraction": 1.0,
                               "compute_node": {"local_memory": "HBM3", "nic": "PCIe6"}})


def test_tech_invariants_enforced():
    with pytest.raises(ConfigError, match="bandwidth"):
        MemoryTech("bad", 2026, -1.0, 1.0)
    with pytest.raises(ConfigError, match="latency"):
        LinkTech("bad", 1.0, 0.0)
