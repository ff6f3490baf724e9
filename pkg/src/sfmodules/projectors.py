"""Ket/bra view of the design density matrix.

Each basis ket ``|i>`` stands for vertex ``i`` and is labelled by ``i`` in
fixed-width binary. Every provides edge ``(u, v)`` contributes the rank-1 term
``(|u> - |v>)(<u| - <v|) / d`` and ``rho`` is the sum of these terms. Terms
that share a ket fall in the same class; classes are the modules.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .model import DisjointSet, SystemDesign, VertexOrder, VertexPartition
from .spectral import DesignMatrices


def ket_width(n: int) -> int:
    """Bits needed to label ``n`` basis kets (at least one)."""
    return max(1, (n - 1).bit_length())


def ket_bits(index: int, n: int) -> str:
    """
    >>> ket_bits(5, 8)
    '101'
    >>> ket_bits(0, 2)
    '0'
    """
    if not 0 <= index < n:
        raise IndexError(f"ket index {index} out of range for {n} basis kets")
    return format(index, f"0{ket_width(n)}b")


@dataclass(frozen=True)
class KetColumnOperator:
    """``rho |j><j|``: column ``j`` of ``rho`` paired with the bra ``<j|``.

    ``coefficients`` maps ket index to the nonzero entries of the column.
    """

    ket: int
    coefficients: dict

    def matrix(self, n: int) -> np.ndarray:
        out = np.zeros((n, n))
        for i, c in self.coefficients.items():
            out[i, self.ket] = c
        return out

    def is_zero(self) -> bool:
        return not self.coefficients


def apply_to_ket(rho, j: int) -> KetColumnOperator:
    """Apply the density matrix to basis ket ``j``."""
    rho = np.asarray(rho)
    n = rho.shape[0]
    if not 0 <= j < n:
        raise IndexError(f"ket index {j} out of range for {n} basis kets")
    col = rho[:, j]
    return KetColumnOperator(j, {int(i): float(col[i]) for i in np.flatnonzero(col)})


def render_ket_column(op: KetColumnOperator, n: int, scale: float = 1.0) -> str:
    """Dirac form of a column operator, e.g. ``(2|000⟩-|100⟩-|101⟩)⟨000|``.

    Coefficients are multiplied by ``scale`` first; pass the degree-sum to
    print integer Laplacian entries.
    """
    parts = []
    for i in sorted(op.coefficients, key=lambda i: (i != op.ket, i)):
        c = op.coefficients[i] * scale
        mag = abs(c)
        num = "" if np.isclose(mag, 1.0) else f"{mag:.12g}"
        sign = "-" if c < 0 else ("+" if parts else "")
        parts.append(f"{sign}{num}|{ket_bits(i, n)}⟩")
    return "(" + "".join(parts) + f")⟨{ket_bits(op.ket, n)}|"


@dataclass(frozen=True)
class EdgeProjector:
    """``coefficient * (|u> - |v>)(<u| - <v|)`` for one design edge, ``u < v``."""

    u: int
    v: int
    coefficient: float

    def __post_init__(self):
        if not self.u < self.v:
            raise ValueError(f"edge projector needs u < v, got ({self.u}, {self.v})")

    def matrix(self, n: int) -> np.ndarray:
        out = np.zeros((n, n))
        c = self.coefficient
        out[self.u, self.u] = out[self.v, self.v] = c
        out[self.u, self.v] = out[self.v, self.u] = -c
        return out

    @property
    def kets(self) -> tuple[int, int]:
        return (self.u, self.v)


def edge_decomposition(m: DesignMatrices) -> list[EdgeProjector]:
    """One projector term per edge, coefficient ``1/d``; the terms sum to ``rho``."""
    rows, cols = np.nonzero(np.triu(m.adjacency, k=1))
    c = 1.0 / m.degree_sum
    return [EdgeProjector(int(u), int(v), c) for u, v in sorted(zip(rows.tolist(), cols.tolist()))]


def partition_terms(terms: Sequence[EdgeProjector]) -> list[frozenset[int]]:
    """Group term indices that are linked through shared basis kets.

    Classes are ordered by their smallest term index.
    """
    if not terms:
        return []
    n = max(t.v for t in terms) + 1
    ds = DisjointSet(n)
    for t in terms:
        ds.union(t.u, t.v)
    by_root: dict[int, list[int]] = {}
    for k, t in enumerate(terms):
        by_root.setdefault(ds.find(t.u), []).append(k)
    return [frozenset(c) for c in sorted(by_root.values(), key=min)]


def modules_from_projectors(design: SystemDesign, terms: Sequence[EdgeProjector],
                            classes: Sequence[frozenset[int]]) -> VertexPartition:
    """Modules as the kets touched by each term class, plus isolated vertices."""
    n = design.order.n
    groups = [tuple(sorted({x for k in cls for x in terms[k].kets})) for cls in classes]
    covered = {x for g in groups for x in g}
    groups += [(i,) for i in range(n) if i not in covered]
    return VertexPartition(tuple(groups), method="projector")


def class_matrices(terms: Sequence[EdgeProjector], classes, n: int) -> list[np.ndarray]:
    """Sum of the term matrices in each class."""
    return [sum((terms[k].matrix(n) for k in sorted(cls)), np.zeros((n, n))) for cls in classes]


def render_dirac(term: EdgeProjector, order: VertexOrder, first: int | None = None,
                 verbose: bool = False) -> str:
    """Text form ``(|u⟩-|v⟩)(⟨u|-⟨v|)`` with binary ket labels.

    Parameters
    ----------
    first : int, optional
        Endpoint to list first. The operator is symmetric in its two
        endpoints, so this only changes the text.
    verbose : bool
        Prefix the ``1/d`` coefficient, e.g. ``0.1 · (...)``.
    """
    a, b = term.u, term.v
    if first is not None:
        if first not in (a, b):
            raise ValueError(f"vertex {first} is not an endpoint of ({a}, {b})")
        if first == b:
            a, b = b, a
    n = order.n
    x, y = ket_bits(a, n), ket_bits(b, n)
    text = f"(|{x}⟩-|{y}⟩)(⟨{x}|-⟨{y}|)"
    if verbose:
        text = f"{term.coefficient:.12g} · {text}"
    return text
