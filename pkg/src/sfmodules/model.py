"""Bipartite Structor/Functional design graph and its exact module oracle.

Vertex layout used everywhere in the package: functionals first, then
structors, each in declaration order. For the Prototype pattern this gives
the row order F1 F2 F3 F4 S1 S2 S3 S4.
"""

from __future__ import annotations

import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .exceptions import DesignError

logger = logging.getLogger(__name__)

ID_PATTERN = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*\Z")

METHODS = ("oracle", "spectral", "projector", "fiedler-split")


class DisjointSet:
    """Union-find over the integers ``0..n-1``.

    Union by size with path halving.

    Examples
    --------
    >>> ds = DisjointSet(4)
    >>> ds.union(0, 2)
    True
    >>> ds.find(2) == ds.find(0)
    True
    >>> ds.groups()
    [[0, 2], [1], [3]]
    """

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.size[rx] < self.size[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        self.size[rx] += self.size[ry]
        return True

    def groups(self) -> list[list[int]]:
        """Members of every set, each sorted, ordered by smallest member."""
        by_root: dict[int, list[int]] = {}
        for x in range(len(self.parent)):
            by_root.setdefault(self.find(x), []).append(x)
        return sorted(by_root.values(), key=lambda g: g[0])


@dataclass(frozen=True)
class SystemDesign:
    """A software design as a bipartite graph of Structors and Functionals.

    Parameters
    ----------
    name : str
        Free-text label, usually the source file stem.
    structors, functionals : sequence of (id, display name)
        Vertex declarations in declaration order.
    provides : sequence of (structor id, functional id)
        Edges, in declaration order. Duplicates are rejected.
    sequence : sequence of structor ids, optional
        Left-to-right box order of a quantum circuit. Metadata only; it
        never enters a matrix.
    """

    name: str
    structors: tuple[tuple[str, str], ...]
    functionals: tuple[tuple[str, str], ...]
    provides: tuple[tuple[str, str], ...]
    sequence: tuple[str, ...] | None = None

    def __post_init__(self):
        # accept lists from callers, store tuples so the design stays hashable
        object.__setattr__(self, "structors", tuple(tuple(s) for s in self.structors))
        object.__setattr__(self, "functionals", tuple(tuple(f) for f in self.functionals))
        object.__setattr__(self, "provides", tuple(tuple(e) for e in self.provides))
        if self.sequence is not None:
            object.__setattr__(self, "sequence", tuple(self.sequence))
        self._validate()

    def _validate(self):
        if not self.structors or not self.functionals:
            raise DesignError("empty design: at least one structor and one functional are required")
        ids = [i for i, _ in self.structors] + [i for i, _ in self.functionals]
        for ident in ids:
            if not ID_PATTERN.match(ident):
                raise DesignError(f"invalid id {ident!r}")
        dupes = sorted(i for i, c in Counter(ids).items() if c > 1)
        if dupes:
            raise DesignError(f"duplicate id {dupes[0]!r}")
        structor_ids = {i for i, _ in self.structors}
        functional_ids = {i for i, _ in self.functionals}
        seen = set()
        for s, f in self.provides:
            if s not in structor_ids:
                raise DesignError(f"edge ({s}, {f}): {s!r} is not a declared structor")
            if f not in functional_ids:
                raise DesignError(f"edge ({s}, {f}): {f!r} is not a declared functional")
            if (s, f) in seen:
                raise DesignError(f"duplicate edge ({s}, {f})")
            seen.add((s, f))
        if self.sequence is not None:
            for s in self.sequence:
                if s not in structor_ids:
                    raise DesignError(f"sequence entry {s!r} is not a declared structor")

    @property
    def n_structors(self) -> int:
        return len(self.structors)

    @property
    def n_functionals(self) -> int:
        return len(self.functionals)

    @property
    def n_edges(self) -> int:
        return len(self.provides)

    @property
    def order(self) -> "VertexOrder":
        return VertexOrder.from_design(self)

    def edge_indices(self) -> list[tuple[int, int]]:
        """Edges as ``(functional index, structor index)`` in vertex order.

        Functionals precede structors, so each pair satisfies ``u < v``.
        """
        order = self.order
        return [(order.index(f), order.index(s)) for s, f in self.provides]

    def display_names(self) -> dict[str, str]:
        return dict(self.functionals + self.structors)

    def isolated(self) -> list[str]:
        """Ids of vertices with no incident edge, in vertex order."""
        touched = {x for e in self.provides for x in e}
        return [i for i in self.order.ids if i not in touched]


@dataclass(frozen=True)
class VertexOrder:
    """Bijection between vertex ids and matrix indices ``0..N-1``."""

    functional_ids: tuple[str, ...]
    structor_ids: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "_index", {ident: k for k, ident in enumerate(self.functional_ids + self.structor_ids)}
        )

    @classmethod
    def from_design(cls, design: SystemDesign) -> "VertexOrder":
        return cls(tuple(i for i, _ in design.functionals), tuple(i for i, _ in design.structors))

    @property
    def ids(self) -> tuple[str, ...]:
        return self.functional_ids + self.structor_ids

    @property
    def n(self) -> int:
        return len(self.functional_ids) + len(self.structor_ids)

    @property
    def n_functionals(self) -> int:
        return len(self.functional_ids)

    def __len__(self):
        return self.n

    def index(self, ident: str) -> int:
        try:
            return self._index[ident]
        except KeyError:
            raise KeyError(f"unknown vertex id {ident!r}") from None

    def id(self, index: int) -> str:
        return self.ids[index]

    def is_structor(self, index: int) -> bool:
        return index >= len(self.functional_ids)


@dataclass(frozen=True)
class VertexPartition:
    """Disjoint vertex groups covering ``0..N-1``, in canonical form.

    Groups are sorted internally and ordered by their smallest member, so two
    partitions of the same vertex set compare equal exactly when they group
    the vertices the same way. ``method`` records how the partition was
    derived and does not take part in equality.
    """

    groups: tuple[tuple[int, ...], ...]
    method: str = field(default="oracle", compare=False)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")
        canon = tuple(sorted((tuple(sorted(set(g))) for g in self.groups), key=lambda g: g[0] if g else -1))
        if any(not g for g in canon):
            raise ValueError("partition groups must be nonempty")
        members = [x for g in canon for x in g]
        if len(members) != len(set(members)):
            raise ValueError("partition groups overlap")
        if sorted(members) != list(range(len(members))):
            raise ValueError("partition groups must cover 0..N-1")
        object.__setattr__(self, "groups", canon)

    @property
    def n_vertices(self) -> int:
        return sum(len(g) for g in self.groups)

    def __len__(self):
        return len(self.groups)

    def labels(self) -> np.ndarray:
        """Module number of every vertex, in vertex order."""
        out = np.empty(self.n_vertices, dtype=int)
        for k, g in enumerate(self.groups):
            out[list(g)] = k
        return out

    def group_of(self, index: int) -> tuple[int, ...]:
        for g in self.groups:
            if index in g:
                return g
        raise IndexError(index)

    def as_ids(self, order: VertexOrder) -> list[list[str]]:
        return [[order.id(i) for i in g] for g in self.groups]


def connected_components(design: SystemDesign) -> VertexPartition:
    """Exact module partition by union-find over the provides edges.

    Isolated vertices come out as singleton groups.
    """
    ds = DisjointSet(design.order.n)
    for u, v in design.edge_indices():
        ds.union(u, v)
    isolated = design.isolated()
    if isolated:
        logger.warning("design %r has isolated vertices: %s", design.name, ", ".join(isolated))
    return VertexPartition(tuple(tuple(g) for g in ds.groups()), method="oracle")


def infer_inheritance(design: SystemDesign) -> list[tuple[str, frozenset[str]]]:
    """Functionals provided by two or more structors, with their providers.

    A functional shared by several structors is read as an inherited method.
    Results follow functional declaration order.
    """
    providers: dict[str, set[str]] = {}
    for s, f in design.provides:
        providers.setdefault(f, set()).add(s)
    return [
        (f, frozenset(providers[f]))
        for f, _ in design.functionals
        if len(providers.get(f, ())) >= 2
    ]


def induced_edges(design: SystemDesign, vertices: Iterable[int]) -> list[tuple[int, int]]:
    """Edges (in vertex indices) with both endpoints inside ``vertices``."""
    vs = set(vertices)
    return [(u, v) for u, v in design.edge_indices() if u in vs and v in vs]


def components_of(vertices: Sequence[int], edges: Iterable[tuple[int, int]]) -> list[list[int]]:
    """Connected components of the subgraph ``(vertices, edges)``.

    Returned groups hold original vertex indices, sorted, ordered by their
    smallest member.
    """
    local = {x: k for k, x in enumerate(sorted(vertices))}
    ds = DisjointSet(len(local))
    for u, v in edges:
        ds.union(local[u], local[v])
    back = sorted(vertices)
    return [[back[k] for k in g] for g in ds.groups()]
