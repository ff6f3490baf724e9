"""Design matrices and their eigenstructure.

The Laplacian ``L = D - A`` of the bipartite design graph, the degree-sum
``d = trace(L) = 2 |E|`` and the design density matrix ``rho = L / d``.
Modules are read off the kernel of ``L`` and sparse modules are bisected
with the Fiedler vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .exceptions import DegenerateDesignError, DisconnectedModuleError, NumericalError
from .model import DisjointSet, SystemDesign, VertexOrder, VertexPartition, induced_edges

#: scale factor for the default zero threshold
ZERO_RTOL = 1e-9
#: kernel-projector entries above this link two vertices
KERNEL_LINK_TOL = 1e-8
#: relative eigenvalue gap below which the Fiedler vector is flagged degenerate
FIEDLER_DEGENERACY_RTOL = 1e-6
SYMMETRY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class DesignMatrices:
    """Degree, adjacency, Laplacian and density matrices in one vertex order."""

    order: VertexOrder
    degree: np.ndarray
    adjacency: np.ndarray
    laplacian: np.ndarray
    degree_sum: int
    density: np.ndarray

    def get(self, which: str) -> np.ndarray:
        names = {"degree": self.degree, "adjacency": self.adjacency,
                 "laplacian": self.laplacian, "density": self.density}
        try:
            return names[which]
        except KeyError:
            raise ValueError(f"unknown matrix {which!r}; expected one of {sorted(names)}") from None


def laplacian_from_edges(n: int, edges) -> np.ndarray:
    """Integer-valued Laplacian of an undirected simple graph on ``n`` vertices."""
    L = np.zeros((n, n))
    for u, v in edges:
        L[u, v] -= 1.0
        L[v, u] -= 1.0
        L[u, u] += 1.0
        L[v, v] += 1.0
    return L


def build_matrices(design: SystemDesign) -> DesignMatrices:
    """Build ``D``, ``A``, ``L = D - A``, ``d`` and ``rho = L / d`` for a design.

    Raises
    ------
    DegenerateDesignError
        If the design has no edges; ``rho`` is undefined when ``d = 0``.
    """
    order = design.order
    n = order.n
    edges = design.edge_indices()
    if not edges:
        raise DegenerateDesignError("degree-sum is zero; density matrix undefined")
    A = np.zeros((n, n))
    for u, v in edges:
        A[u, v] = A[v, u] = 1.0
    D = np.diag(A.sum(axis=1))
    L = D - A
    d = int(round(np.trace(L)))
    rho = L / d

    m = order.n_functionals
    assert not A[:m, :m].any() and not A[m:, m:].any(), "adjacency is not bipartite"
    assert d == 2 * len(edges)
    if abs(np.trace(rho) - 1.0) > 1e-12:
        raise NumericalError(f"trace(rho) = {np.trace(rho)!r}")
    return DesignMatrices(order, D, A, L, d, rho)


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Ascending eigenpairs of a real symmetric matrix.

    ``eigenvectors[:, k]`` belongs to ``eigenvalues[k]``. ``tol`` is the zero
    threshold used by :func:`zero_multiplicity` and the kernel routines.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    tol: float

    @property
    def kernel(self) -> np.ndarray:
        """Columns spanning the (numerical) null space."""
        return self.eigenvectors[:, self.eigenvalues < self.tol]

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.T


def default_tol(eigenvalues) -> float:
    top = float(np.max(np.abs(eigenvalues))) if len(eigenvalues) else 0.0
    return ZERO_RTOL * max(top, 1.0)


def eigendecompose(M, tol: float | None = None) -> EigenSystem:
    """Dense symmetric eigendecomposition.

    Parameters
    ----------
    M : array_like, shape (N, N)
        Real symmetric matrix.
    tol : float, optional
        Zero threshold. Defaults to ``1e-9 * max(|lambda_max|, 1)``.

    Raises
    ------
    ValueError
        If ``M`` is not square or deviates from symmetry by more than 1e-12.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if M.size and np.max(np.abs(M - M.T)) > SYMMETRY_TOL:
        raise ValueError("matrix is not symmetric")
    w, V = np.linalg.eigh(M)
    return EigenSystem(w, V, default_tol(w) if tol is None else float(tol))


def zero_multiplicity(es: EigenSystem) -> int:
    """Number of eigenvalues below the zero threshold, i.e. the number of modules."""
    return int(np.count_nonzero(es.eigenvalues < es.tol))


def kernel_projector(es: EigenSystem) -> np.ndarray:
    K = es.kernel
    return K @ K.T


def modules_from_kernel(es: EigenSystem) -> VertexPartition:
    """Group vertices linked through the kernel projector ``K = sum v v^T``.

    ``K`` does not depend on which orthonormal basis of the kernel the solver
    returned. For a Laplacian it is block diagonal with one constant
    ``1/size`` block per connected component.
    """
    K = kernel_projector(es)
    if es.kernel.shape[1] == 0:
        raise NumericalError("empty kernel: not the spectrum of a Laplacian")
    n = K.shape[0]
    ds = DisjointSet(n)
    rows, cols = np.nonzero(np.abs(K) > KERNEL_LINK_TOL)
    for i, j in zip(rows.tolist(), cols.tolist()):
        if i < j:
            ds.union(i, j)
    return VertexPartition(tuple(tuple(g) for g in ds.groups()), method="spectral")


class FiedlerPair(NamedTuple):
    value: float
    vector: np.ndarray
    degenerate: bool


def fiedler_vector(L_sub, tol: float | None = None) -> FiedlerPair:
    """Eigenvector of the smallest nonzero eigenvalue of a connected Laplacian.

    The sign is fixed so that the first entry that is not (numerically) zero is
    positive. When the next eigenvalue is within a relative gap of 1e-6 the
    vector is not unique; the solver's first choice is kept and
    ``degenerate`` is set.

    Raises
    ------
    ValueError
        For fewer than two vertices.
    DisconnectedModuleError
        If the kernel has dimension above one.
    """
    L_sub = np.asarray(L_sub, dtype=float)
    if L_sub.shape[0] < 2:
        raise ValueError("a Fiedler vector needs at least two vertices")
    es = eigendecompose(L_sub, tol)
    k = zero_multiplicity(es)
    if k != 1:
        raise DisconnectedModuleError(f"sub-Laplacian has {k} zero eigenvalues; partition the module first")
    w = es.eigenvalues
    y = es.eigenvectors[:, 1].copy()
    nz = np.flatnonzero(np.abs(y) > 1e-10)
    if nz.size and y[nz[0]] < 0:
        y = -y
    scale = max(abs(w[-1]), 1.0)
    degenerate = len(w) > 2 and (w[2] - w[1]) <= FIEDLER_DEGENERACY_RTOL * scale
    return FiedlerPair(float(w[1]), y, bool(degenerate))


def sub_laplacian(design: SystemDesign, vertices) -> np.ndarray:
    """Laplacian of the subgraph induced by ``vertices`` (sorted vertex order)."""
    vs = sorted(vertices)
    local = {x: k for k, x in enumerate(vs)}
    return laplacian_from_edges(len(vs), [(local[u], local[v]) for u, v in induced_edges(design, vs)])
