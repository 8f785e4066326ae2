"""Design-space modeling for network-attached disaggregated-memory systems.

Submodules: techdb (technology catalog, machine configs), design_space
(per-node remote capacity/bandwidth grids), topology (dragonfly and
fat-tree bisection), roofline (memory and concurrency rooflines), appmodel
(workload L:R characterizations), classify (zones and workload sizing),
report (deterministic CSV/SVG emission), cli (the `disagg` command).
"""

from .appmodel import (
    AlignParams,
    AppCharacterization,
    CounterSample,
    GemmParams,
    SparseParams,
    builtin_apps,
    lookup_app,
    lr_ai,
    lr_align,
    lr_from_counters,
    lr_gemm,
    lr_spmm,
    lr_stream,
    lr_superlu,
    lr_windowed_similarity,
)
# The classify() function itself stays namespaced (disagg.classify.classify)
# so the submodule attribute is not shadowed.
from .classify import (
    Zone,
    ZoneConfig,
    WorkloadEntry,
    contention_balance,
    size_workload,
    zone_config_from_machine,
)
from .design_space import (
    DesignGrid,
    DesignPoint,
    build_grid,
    remote_bandwidth_per_node,
    remote_capacity_per_node,
)
from .errors import CatalogError, ConfigError, DisaggError, ModelError
from .roofline import (
    ConcurrencyPoint,
    RooflineConfig,
    RooflinePoint,
    attainable_bandwidth,
    machine_balance,
    required_concurrency,
    roofline_curve,
    sustained_bandwidth,
)
from .techdb import (
    LinkTech,
    MachineConfig,
    MemoryTech,
    NodeSpec,
    TechCatalog,
    builtin_catalog,
    default_machine,
    load_catalog,
    load_machine,
    validate,
)
from .topology import (
    DragonflySpec,
    FatTreeSpec,
    TopologyReport,
    dragonfly_bisection,
    dragonfly_links,
    fat_tree_build,
    max_endpoints,
    reference_machines,
)

__version__ = "0.1.0"
