"""Module validation: sparse-module detection, Fiedler bisection and partition comparison."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .exceptions import DisconnectedModuleError
from .model import SystemDesign, VertexPartition, components_of, induced_edges
from .spectral import fiedler_vector, sub_laplacian

#: default density below which a bridged module is a split candidate
SPLIT_THRESHOLD = 0.5
#: Fiedler entries within this distance of zero go to side A
TIE_TOL = 1e-10


def _kinds(design: SystemDesign, vertices: Iterable[int]) -> tuple[int, int]:
    order = design.order
    vs = list(vertices)
    n_s = sum(order.is_structor(i) for i in vs)
    return n_s, len(vs) - n_s


def _two_sided(design, vertices) -> bool:
    n_s, n_f = _kinds(design, vertices)
    return n_s >= 1 and n_f >= 1


def _edge_ids(design, edges):
    """(structor id, functional id) for vertex-index edges ``(u, v)`` with ``u`` a functional."""
    order = design.order
    return [(order.id(v), order.id(u)) for u, v in edges]


def module_density(design: SystemDesign, module: Iterable[int]) -> float | None:
    """Edges over structors x functionals, or ``None`` without both kinds."""
    module = list(module)
    n_s, n_f = _kinds(design, module)
    if n_s == 0 or n_f == 0:
        return None
    return len(induced_edges(design, module)) / (n_s * n_f)


def _check_connected(design, module, edges):
    if len(components_of(module, edges)) != 1:
        raise DisconnectedModuleError(f"vertex set {sorted(module)} is not connected")


def detect_outliers(design: SystemDesign, module: Iterable[int]) -> list[tuple[str, str]]:
    """Edges whose removal splits ``module`` into two parts that each hold
    at least one structor and one functional.

    Every edge is tried in turn, so the cost is ``O(|E| (|V| + |E|))``.

    Returns
    -------
    list of (structor id, functional id)
        In declaration order of the edges.
    """
    module = sorted(set(module))
    edges = induced_edges(design, module)
    _check_connected(design, module, edges)
    bridges = []
    for k, e in enumerate(edges):
        parts = components_of(module, edges[:k] + edges[k + 1:])
        if len(parts) == 2 and all(_two_sided(design, p) for p in parts):
            bridges.append(e)
    return _edge_ids(design, bridges)


@dataclass(frozen=True, eq=False)
class SplitResult:
    """One Fiedler bisection of a module.

    ``values`` is aligned with ``vertices`` (the parent module, sorted).
    ``valid`` holds when each side has at least one structor and one
    functional. ``tie_break`` records that some entry was within 1e-10 of
    zero and went to side A.
    """

    vertices: tuple[int, ...]
    values: np.ndarray
    side_a: tuple[int, ...]
    side_b: tuple[int, ...]
    cut: list
    valid: bool
    fiedler_value: float | None = None
    degenerate: bool = False
    tie_break: bool = False

    @property
    def parent(self) -> frozenset:
        return frozenset(self.vertices)


def split_module(design: SystemDesign, module: Iterable[int]) -> SplitResult:
    """Bisect a connected module by the sign of its Fiedler vector.

    Side A collects the vertices with value ``>= -1e-10``; side B the rest.

    Raises
    ------
    DisconnectedModuleError
        If ``module`` is not connected.
    """
    vs = tuple(sorted(set(module)))
    edges = induced_edges(design, vs)
    _check_connected(design, vs, edges)
    if len(vs) < 2:
        return SplitResult(vs, np.zeros(len(vs)), vs, (), [], False)
    fp = fiedler_vector(sub_laplacian(design, vs))
    y = fp.vector
    in_a = y >= -TIE_TOL
    side_a = tuple(x for x, a in zip(vs, in_a) if a)
    side_b = tuple(x for x, a in zip(vs, in_a) if not a)
    a_set = set(side_a)
    cut = [(u, v) for u, v in edges if (u in a_set) != (v in a_set)]
    valid = bool(side_b) and _two_sided(design, side_a) and _two_sided(design, side_b)
    return SplitResult(
        vertices=vs,
        values=y,
        side_a=side_a,
        side_b=side_b,
        cut=_edge_ids(design, cut),
        valid=valid,
        fiedler_value=fp.value,
        degenerate=fp.degenerate,
        tie_break=bool(np.any(np.abs(y) <= TIE_TOL)),
    )


@dataclass(frozen=True)
class PartitionComparison:
    equal: bool
    only_first: tuple[tuple[int, ...], ...] = ()
    only_second: tuple[tuple[int, ...], ...] = ()


def compare_partitions(p1: VertexPartition, p2: VertexPartition) -> PartitionComparison:
    """Equality of two partitions, with the groups unique to each side when unequal."""
    if p1.n_vertices != p2.n_vertices:
        raise ValueError(f"partitions cover different vertex sets ({p1.n_vertices} vs {p2.n_vertices} vertices)")
    g1, g2 = set(p1.groups), set(p2.groups)
    return PartitionComparison(
        equal=g1 == g2,
        only_first=tuple(g for g in p1.groups if g not in g2),
        only_second=tuple(g for g in p2.groups if g not in g1),
    )


@dataclass(frozen=True)
class ModuleStats:
    vertices: tuple[int, ...]
    structors: int
    functionals: int
    edges: int
    density: float | None
    bridges: list
    reducible: bool


def module_stats(design: SystemDesign, module: Iterable[int], threshold: float = SPLIT_THRESHOLD) -> ModuleStats:
    vs = tuple(sorted(set(module)))
    n_s, n_f = _kinds(design, vs)
    density = module_density(design, vs)
    bridges = detect_outliers(design, vs) if density is not None else []
    return ModuleStats(
        vertices=vs,
        structors=n_s,
        functionals=n_f,
        edges=len(induced_edges(design, vs)),
        density=density,
        bridges=bridges,
        reducible=bool(bridges) and density < threshold,
    )


@dataclass(frozen=True)
class ModuleReport:
    """Per-module statistics for one partition plus cross-method agreement."""

    partition: VertexPartition
    modules: list[ModuleStats]
    agreement: dict = field(default_factory=dict)

    @property
    def all_agree(self) -> bool:
        return all(self.agreement.values())


def module_report(design: SystemDesign, partitions: Mapping[str, VertexPartition],
                  threshold: float = SPLIT_THRESHOLD, reference: str = "oracle") -> ModuleReport:
    """Statistics for ``partitions[reference]`` and pairwise agreement of all partitions."""
    names = list(partitions)
    agreement = {
        (a, b): compare_partitions(partitions[a], partitions[b]).equal
        for i, a in enumerate(names) for b in names[i + 1:]
    }
    part = partitions[reference]
    return ModuleReport(part, [module_stats(design, g, threshold) for g in part.groups], agreement)
