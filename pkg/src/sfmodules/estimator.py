"""scikit-learn style front end.

:class:`ModuleDecomposition` fits a design (a :class:`SystemDesign` or a 0/1
structor-by-functional biadjacency matrix) and derives its modules three
independent ways: union-find over the edges, the Laplacian kernel, and the
density-matrix projector classes.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils import check_array
from sklearn.utils.validation import check_is_fitted

from .exceptions import NumericalError
from .model import SystemDesign, connected_components, infer_inheritance
from .modularity import SPLIT_THRESHOLD, compare_partitions, module_report
from .projectors import edge_decomposition, modules_from_projectors, partition_terms
from .spectral import build_matrices, eigendecompose, modules_from_kernel, zero_multiplicity


def biadjacency_to_design(X, name: str = "design") -> SystemDesign:
    """Design from a structor-by-functional 0/1 matrix.

    Row ``i`` becomes structor ``S{i+1}``, column ``j`` functional ``F{j+1}``
    and every nonzero entry a provides edge.
    """
    X = check_array(X, dtype=float, ensure_min_samples=1, ensure_min_features=1)
    if not np.all((X == 0) | (X == 1)):
        raise ValueError("biadjacency entries must be 0 or 1")
    n_s, n_f = X.shape
    return SystemDesign(
        name,
        [(f"S{i + 1}", f"S{i + 1}") for i in range(n_s)],
        [(f"F{j + 1}", f"F{j + 1}") for j in range(n_f)],
        [(f"S{i + 1}", f"F{j + 1}") for i, j in zip(*np.nonzero(X))],
    )


def check_design(X) -> SystemDesign:
    """Accept a :class:`SystemDesign` as is, convert anything else as a biadjacency matrix."""
    if isinstance(X, SystemDesign):
        return X
    return biadjacency_to_design(X)


def design_to_biadjacency(design: SystemDesign) -> np.ndarray:
    """Inverse of :func:`biadjacency_to_design` up to ids and names."""
    s_idx = {s: i for i, (s, _) in enumerate(design.structors)}
    f_idx = {f: j for j, (f, _) in enumerate(design.functionals)}
    B = np.zeros((design.n_structors, design.n_functionals), dtype=int)
    for s, f in design.provides:
        B[s_idx[s], f_idx[f]] = 1
    return B


class ModuleDecomposition(ClusterMixin, BaseEstimator):
    """Modules of a Structor/Functional design graph.

    Parameters
    ----------
    tol : float, optional
        Zero threshold for Laplacian eigenvalues. Defaults to
        ``1e-9 * max(|lambda_max|, 1)``.
    split_threshold : float, default=0.5
        Modules with a two-sided bridge and density below this value are
        flagged reducible.
    strict : bool, default=False
        Raise :class:`NumericalError` when the three methods disagree
        instead of only setting ``agreement_ = False``.

    Attributes
    ----------
    design_ : SystemDesign
    matrices_ : DesignMatrices
    eigensystem_ : EigenSystem
        Spectrum of the Laplacian.
    density_eigensystem_ : EigenSystem
        Spectrum of the density matrix.
    n_modules_ : int
        Zero multiplicity of the Laplacian.
    partitions_ : dict
        ``{"oracle", "spectral", "projector"}`` to :class:`VertexPartition`.
    agreement_ : bool
        All three partitions identical and ``n_modules_`` equal to the
        number of oracle groups.
    labels_ : ndarray of shape (N,)
        Module number per vertex (oracle partition), in vertex order.
    terms_, term_classes_ : list
        Edge projector terms of ``rho`` and their module classes.
    inheritance_ : list
        Functionals with two or more providers.
    module_report_ : ModuleReport
    warnings_ : list of str

    Examples
    --------
    >>> import numpy as np
    >>> B = np.array([[1, 0, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    >>> est = ModuleDecomposition().fit(B)
    >>> est.n_modules_
    3
    >>> est.labels_.tolist()
    [0, 0, 1, 2, 0, 0, 1, 2]
    """

    def __init__(self, tol=None, split_threshold=SPLIT_THRESHOLD, strict=False):
        self.tol = tol
        self.split_threshold = split_threshold
        self.strict = strict

    def fit(self, X, y=None):
        design = check_design(X)
        warnings = []
        isolated = design.isolated()
        if isolated:
            warnings.append(f"isolated vertices form singleton modules: {', '.join(isolated)}")

        m = build_matrices(design)
        es = eigendecompose(m.laplacian, self.tol)
        rho_tol = None if self.tol is None else self.tol / m.degree_sum
        es_rho = eigendecompose(m.density, rho_tol)
        terms = edge_decomposition(m)
        classes = partition_terms(terms)

        partitions = {
            "oracle": connected_components(design),
            "spectral": modules_from_kernel(es),
            "projector": modules_from_projectors(design, terms, classes),
        }
        k = zero_multiplicity(es)
        agree = (
            all(compare_partitions(partitions["oracle"], p).equal for p in partitions.values())
            and k == len(partitions["oracle"])
            and zero_multiplicity(es_rho) == k
        )
        if not agree:
            msg = (f"module methods disagree: oracle={len(partitions['oracle'])}, "
                   f"spectral={len(partitions['spectral'])}, projector={len(partitions['projector'])}, "
                   f"zero multiplicity={k}")
            if self.strict:
                raise NumericalError(msg)
            warnings.append(msg)

        self.design_ = design
        self.order_ = m.order
        self.matrices_ = m
        self.eigensystem_ = es
        self.density_eigensystem_ = es_rho
        self.n_modules_ = k
        self.partitions_ = partitions
        self.agreement_ = agree
        self.terms_ = terms
        self.term_classes_ = classes
        self.labels_ = partitions["oracle"].labels()
        self.inheritance_ = infer_inheritance(design)
        self.module_report_ = module_report(design, partitions, self.split_threshold)
        self.warnings_ = warnings
        return self

    def modules(self, method="oracle"):
        """Modules as lists of vertex ids."""
        check_is_fitted(self, "partitions_")
        return self.partitions_[method].as_ids(self.order_)
