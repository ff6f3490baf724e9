"""Module decomposition of Structor/Functional software designs.

A design is a bipartite graph between Structors (classes, circuit boxes) and
the Functionals they provide. Its modules are found three ways that must
agree: connected components, the kernel of the graph Laplacian, and the
edge-projector classes of the design density matrix ``rho = L / trace(L)``.
"""

from .estimator import ModuleDecomposition, biadjacency_to_design, check_design
from .exceptions import DegenerateDesignError, DesignError, DisconnectedModuleError, NumericalError, ParseError
from .ingest import (
    CircuitDocument,
    format_design,
    load_design,
    lower_circuit,
    parse_circuit,
    parse_design,
)
from .model import SystemDesign, VertexOrder, VertexPartition, connected_components, infer_inheritance
from .modularity import compare_partitions, detect_outliers, split_module
from .projectors import (
    EdgeProjector,
    apply_to_ket,
    edge_decomposition,
    modules_from_projectors,
    partition_terms,
    render_dirac,
)
from .spectral import (
    DesignMatrices,
    EigenSystem,
    build_matrices,
    eigendecompose,
    fiedler_vector,
    modules_from_kernel,
    zero_multiplicity,
)

__version__ = "0.1.0"

__all__ = [
    "CircuitDocument",
    "DegenerateDesignError",
    "DesignError",
    "DesignMatrices",
    "DisconnectedModuleError",
    "EdgeProjector",
    "EigenSystem",
    "ModuleDecomposition",
    "NumericalError",
    "ParseError",
    "SystemDesign",
    "VertexOrder",
    "VertexPartition",
    "apply_to_ket",
    "biadjacency_to_design",
    "build_matrices",
    "check_design",
    "compare_partitions",
    "connected_components",
    "detect_outliers",
    "edge_decomposition",
    "eigendecompose",
    "fiedler_vector",
    "format_design",
    "infer_inheritance",
    "load_design",
    "lower_circuit",
    "modules_from_kernel",
    "modules_from_projectors",
    "parse_circuit",
    "parse_design",
    "partition_terms",
    "render_dirac",
    "split_module",
    "zero_multiplicity",
]
