import itertools
import logging
from typing import Sequence

import numpy as np
from scipy import linalg
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from app.core.exceptions import AlgebraStructureError, RepresentationError
from app.core.models.algebra import (
    AlgebraValidation, LieAlgebra, Mat, NilpotencyResult, Vec, Violation,
)
from app.core.setting import config

logger = logging.getLogger(__name__)


class AlgebraService:
    """
    Structure-constant arithmetic for real Lie algebras.

    Handles:
    - Well-formedness checks (antisymmetry, Jacobi)
    - Bracket, adjoint matrices, Killing form
    - Lower central series / nilpotency step, centre
    - Semidirect and direct sums, basis-aligned direct factors
    """

    @staticmethod
    def _check_shape(alg: LieAlgebra) -> None:
        n = alg.dim
        if n < 1:
            raise AlgebraStructureError(f"Algebra dimension must be >= 1, got {n}")
        if alg.structure.shape != (n, n, n):
            raise AlgebraStructureError(
                f"Structure tensor has shape {alg.structure.shape}, expected ({n}, {n}, {n})"
            )
        if len(alg.labels) != n:
            raise AlgebraStructureError(f"Expected {n} basis labels, got {len(alg.labels)}")

    @staticmethod
    def _check_vec(alg: LieAlgebra, *vecs: Vec) -> None:
        for v in vecs:
            if np.shape(v) != (alg.dim,):
                raise AlgebraStructureError(
                    f"Vector of shape {np.shape(v)} does not live in a {alg.dim}-dimensional algebra"
                )

    @staticmethod
    def validate_algebra(alg: LieAlgebra, tol: float | None = None) -> AlgebraValidation:
        """
        Check antisymmetry and the Jacobi identity of the structure constants.

        Antisymmetry is tested against tol * max|C|, the Jacobi identity
        (quadratic in C) against tol * max|C|^2. Each violated (i, j, k) or
        Jacobi triple is reported with its magnitude.
        """
        tol = config.ALGEBRA_TOL if tol is None else tol
        AlgebraService._check_shape(alg)
        C = alg.structure
        scale = alg.scale
        violations: list[Violation] = []

        sym = C + C.transpose(1, 0, 2)
        for i, j, k in zip(*np.nonzero(np.abs(sym) > tol * scale)):
            if i <= j:
                violations.append(Violation("antisymmetry", (int(i), int(j), int(k)), float(abs(sym[i, j, k]))))

        # J[i,j,l,m] = sum_k C[i,j,k] C[k,l,m]  ->  [[e_i,e_j],e_l]
        J = np.einsum("ijk,klm->ijlm", C, C)
        cyclic = J + J.transpose(1, 2, 0, 3) + J.transpose(2, 0, 1, 3)
        residual = np.linalg.norm(cyclic, axis=3)
        for i, j, l in itertools.combinations(range(alg.dim), 3):
            if residual[i, j, l] > tol * scale ** 2:
                violations.append(Violation("jacobi", (i, j, l), float(residual[i, j, l])))

        if violations:
            logger.debug(f"Algebra validation found {len(violations)} violation(s)")
        return AlgebraValidation(tuple(violations))

    @staticmethod
    def bracket(alg: LieAlgebra, a: Vec, b: Vec) -> Vec:
        AlgebraService._check_vec(alg, a, b)
        return np.einsum("ijk,i,j->k", alg.structure, a, b)

    @staticmethod
    def ad_matrix(alg: LieAlgebra, a: Vec) -> Mat:
        """Matrix of ad_a: column j is [a, e_j]."""
        AlgebraService._check_vec(alg, a)
        return np.einsum("ijk,i->kj", alg.structure, a)

    @staticmethod
    def ad_basis(alg: LieAlgebra) -> np.ndarray:
        """Stack of ad_{e_i}, shape (n, n, n)."""
        return alg.structure.transpose(0, 2, 1).copy()

    @staticmethod
    def _span_rank(vectors: np.ndarray, rtol: float) -> tuple[np.ndarray, bool]:
        """Orthonormal basis (columns) of span(vectors) and an ambiguity flag."""
        if vectors.size == 0:
            return np.zeros((vectors.shape[0], 0)), False
        U, s, _ = np.linalg.svd(vectors, full_matrices=False)
        if s.size == 0 or s[0] == 0.0:
            return np.zeros((vectors.shape[0], 0)), False
        cutoff = rtol * s[0]
        rank = int(np.sum(s > cutoff))
        ambiguous = bool(np.any((s > 0.1 * cutoff) & (s < 10.0 * cutoff)))
        return U[:, :rank], ambiguous

    @staticmethod
    def nilpotency_step(alg: LieAlgebra, tol: float | None = None) -> NilpotencyResult:
        """
        Length of the lower central series g ⊇ [g,g] ⊇ [g,[g,g]] ⊇ ...

        Spans are ranked by singular values relative to the largest one.
        Returns the smallest m whose (m+1)-st term vanishes, or step=None when
        the series stabilises at a nonzero space.
        """
        tol = config.RANK_RTOL if tol is None else tol
        n = alg.dim
        ad = AlgebraService.ad_basis(alg)
        current = np.eye(n)
        dims = [n]
        ambiguous = False
        while True:
            # all [e_i, v] for v in the current term
            images = np.einsum("ikj,jl->kil", ad, current).reshape(n, -1)
            nxt, flag = AlgebraService._span_rank(images, tol)
            ambiguous |= flag
            dims.append(nxt.shape[1])
            if nxt.shape[1] == 0:
                step = len(dims) - 1
                break
            if nxt.shape[1] == current.shape[1]:
                step = None
                break
            current = nxt

        if ambiguous:
            logger.warning(f"Rank decision in lower central series is within tolerance of ambiguity: dims={dims}")
        return NilpotencyResult(step=step, series_dims=tuple(dims), ambiguous=ambiguous)

    @staticmethod
    def killing_form(alg: LieAlgebra) -> Mat:
        """K(i, j) = trace(ad_{e_i} ad_{e_j})."""
        ad = AlgebraService.ad_basis(alg)
        K = np.einsum("akl,blk->ab", ad, ad)
        return 0.5 * (K + K.T)

    @staticmethod
    def center(alg: LieAlgebra, tol: float | None = None) -> np.ndarray:
        """Orthonormal basis (columns) of the centre {z : ad_z = 0}."""
        tol = config.RANK_RTOL if tol is None else tol
        n = alg.dim
        if alg.is_abelian:
            return np.eye(n)
        # ad_z = sum_i z_i ad_{e_i} = 0 is linear in z
        system = AlgebraService.ad_basis(alg).reshape(n, n * n).T
        return linalg.null_space(system, rcond=tol)

    @staticmethod
    def is_compact_type_with_center(alg: LieAlgebra, tol: float | None = None) -> bool:
        """
        Abelian-plus-compact-type test: the Killing form is negative
        semidefinite and its null space is exactly the centre.
        """
        tol = config.RANK_RTOL if tol is None else tol
        if alg.is_abelian:
            return True
        K = AlgebraService.killing_form(alg)
        w = np.linalg.eigvalsh(K)
        scale = max(1.0, float(np.max(np.abs(w))))
        if np.any(w > tol * scale):
            return False
        null_dim = int(np.sum(np.abs(w) <= tol * scale))
        return null_dim == AlgebraService.center(alg, tol).shape[1]

    @staticmethod
    def homomorphism_residual(kAlg: LieAlgebra, rep: np.ndarray) -> float:
        """max over i<j of ‖ρ([u_i,u_j]) − [ρ(u_i), ρ(u_j)]‖_F."""
        p = kAlg.dim
        worst = 0.0
        for i, j in itertools.combinations(range(p), 2):
            lhs = np.einsum("k,kab->ab", kAlg.structure[i, j], rep)
            rhs = rep[i] @ rep[j] - rep[j] @ rep[i]
            worst = max(worst, float(np.linalg.norm(lhs - rhs)))
        return worst

    @staticmethod
    def semidirect_product(
        kAlg: LieAlgebra,
        rep: Sequence[np.ndarray],
        m: int,
        tol: float | None = None,
        labels: Sequence[str] | None = None,
    ) -> LieAlgebra:
        """
        k ⋉_ρ R^m with [(u1,w1),(u2,w2)] = ([u1,u2], ρ(u1)w2 − ρ(u2)w1).

        A trivial (all-zero) representation yields the direct sum k ⊕ R^m.
        """
        tol = config.HOMOMORPHISM_TOL if tol is None else tol
        p = kAlg.dim
        rep = np.array(rep, dtype=np.float64).reshape(len(rep), m, m) if len(rep) else np.zeros((0, m, m))
        if rep.shape != (p, m, m):
            raise AlgebraStructureError(
                f"Representation must supply {p} matrices of size {m}x{m}, got shape {rep.shape}"
            )

        scale = max(1.0, float(np.max(np.abs(rep), initial=0.0)) ** 2, kAlg.scale)
        residual = AlgebraService.homomorphism_residual(kAlg, rep)
        if residual > tol * scale:
            raise RepresentationError(
                f"Representation is not a Lie algebra homomorphism (residual {residual:.3e})",
                residual=residual,
            )

        n = p + m
        C = np.zeros((n, n, n))
        C[:p, :p, :p] = kAlg.structure
        # [u_i, w_a] = ρ(u_i) w_a = column a of rep[i]
        C[:p, p:, p:] = rep.transpose(0, 2, 1)
        C[p:, :p, p:] = -rep.transpose(2, 0, 1)
        if labels is None:
            labels = tuple(kAlg.labels) + tuple(f"w{a + 1}" for a in range(m))
        return LieAlgebra(dim=n, structure=C, labels=tuple(labels))

    @staticmethod
    def direct_sum(first: LieAlgebra, second: LieAlgebra) -> LieAlgebra:
        p, q = first.dim, second.dim
        C = np.zeros((p + q, p + q, p + q))
        C[:p, :p, :p] = first.structure
        C[p:, p:, p:] = second.structure
        return LieAlgebra(dim=p + q, structure=C, labels=tuple(first.labels) + tuple(second.labels))

    @staticmethod
    def direct_factors(alg: LieAlgebra, tol: float = 1e-12) -> list[LieAlgebra]:
        """
        Split alg into ideals spanned by disjoint sets of basis vectors.

        Basis indices are linked when they share a nonzero structure constant;
        each connected component spans an ideal and the algebra is their direct
        sum. Only splittings aligned with the given basis are found.
        """
        n = alg.dim
        links = np.zeros((n, n), dtype=bool)
        for i, j, k in zip(*np.nonzero(np.abs(alg.structure) > tol)):
            links[i, j] = links[j, k] = links[i, k] = True
        count, component = connected_components(csr_matrix(links.astype(np.float64)), directed=False)
        factors = []
        for c in range(count):
            idx = np.flatnonzero(component == c)
            factors.append(LieAlgebra(
                dim=len(idx),
                structure=alg.structure[np.ix_(idx, idx, idx)],
                labels=tuple(alg.labels[i] for i in idx),
            ))
        return factors

    @staticmethod
    def from_brackets(
        dim: int,
        brackets: Sequence[tuple[int, int, Sequence[float]]],
        labels: Sequence[str] | None = None,
    ) -> LieAlgebra:
        """
        Build C from 1-based (i, j, coeffs) entries meaning [e_i, e_j] = Σ coeffs_k e_k.
        Only i < j is given; the antisymmetric completion is automatic.
        """
        C = np.zeros((dim, dim, dim))
        for i, j, coeffs in brackets:
            if not 1 <= i < j <= dim:
                raise AlgebraStructureError(f"Bracket pair ({i}, {j}) must satisfy 1 <= i < j <= {dim}")
            coeffs = np.asarray(coeffs, dtype=np.float64)
            if coeffs.shape != (dim,):
                raise AlgebraStructureError(f"Bracket ({i}, {j}) needs {dim} coefficients, got {coeffs.shape}")
            C[i - 1, j - 1] = coeffs
            C[j - 1, i - 1] = -coeffs
        if labels is None:
            return LieAlgebra(dim=dim, structure=C)
        return LieAlgebra(dim=dim, structure=C, labels=tuple(labels))
