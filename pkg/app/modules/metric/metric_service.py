import logging

import numpy as np

from app.core.exceptions import DegenerateMetricError
from app.core.models.algebra import Mat
from app.core.models.metric import AffOrbit, MetricForm, WickFrame

logger = logging.getLogger(__name__)

ISOTROPY_TOL = 1e-12


class MetricService:
    """
    Bilinear forms on the algebra.

    Handles:
    - Nondegeneracy checks and metric construction
    - Signature decomposition / Wick rotation
    - g_1-adjoints and pushforwards M^T B M
    - Aut(aff) orbit classification
    """

    @staticmethod
    def make_metric(G) -> MetricForm:
        """Validate symmetry and nondegeneracy and wrap the matrix."""
        G = np.asarray(G, dtype=np.float64)
        if G.ndim != 2 or G.shape[0] != G.shape[1]:
            raise DegenerateMetricError(f"Metric must be a square matrix, got shape {G.shape}")
        scale = float(np.max(np.abs(G), initial=0.0))
        if not np.allclose(G, G.T, rtol=0.0, atol=1e-12 * max(scale, 1.0)):
            raise DegenerateMetricError("Metric matrix is not symmetric")
        n = G.shape[0]
        if scale == 0.0 or abs(np.linalg.det(G)) <= 1e-12 * scale ** n:
            raise DegenerateMetricError(f"Metric is degenerate (|det| <= 1e-12 * {scale:.3g}^{n})")
        return MetricForm(0.5 * (G + G.T))

    @staticmethod
    def signature_decompose(metric: MetricForm, tol: float = 1e-12) -> WickFrame:
        """
        Orthonormal frame by symmetric eigendecomposition, columns scaled by
        1/sqrt|λ|, negative directions first. Each column is sign-normalised
        so its largest-magnitude entry (first on ties) is positive.
        """
        G = metric.G
        w, V = np.linalg.eigh(G)
        scale = max(1.0, float(np.max(np.abs(w))))
        if np.any(np.abs(w) < tol * scale):
            raise DegenerateMetricError(f"Metric has an eigenvalue below {tol:.1e} in magnitude: {w}")

        # eigh sorts ascending, so negatives already come first
        pivots = np.argmax(np.abs(V) > np.max(np.abs(V), axis=0) - 1e-12, axis=0)
        signs = np.sign(V[pivots, np.arange(V.shape[1])])
        V = V * signs

        eps = np.sign(w)
        B = V / np.sqrt(np.abs(w))
        gTilde = (V * np.abs(w)) @ V.T
        psi = (B * eps) @ np.linalg.inv(B)
        return WickFrame(B=B, eps=eps, psi=psi, gTilde=0.5 * (gTilde + gTilde.T))

    @staticmethod
    def metric_adjoint(M: Mat, metric: MetricForm) -> Mat:
        """M† = G^{-1} M^T G, so that g_1(Mu, v) = g_1(u, M† v)."""
        return np.linalg.solve(metric.G, M.T @ metric.G)

    @staticmethod
    def is_skew_adjoint(M: Mat, metric: MetricForm, tol: float = 1e-10) -> bool:
        """G M + M^T G = 0 within tol relative to the operand scale."""
        residual = metric.G @ M + M.T @ metric.G
        scale = max(1.0, float(np.max(np.abs(M))) * float(np.max(np.abs(metric.G))))
        return float(np.max(np.abs(residual), initial=0.0)) <= tol * scale

    @staticmethod
    def transform_form(M: Mat, B: Mat) -> Mat:
        """Pushforward action M^T B M on Sym(g)."""
        M = np.asarray(M, dtype=np.float64)
        scale = max(1.0, float(np.max(np.abs(M))))
        if abs(np.linalg.det(M)) <= 1e-12 * scale ** M.shape[0]:
            raise DegenerateMetricError("Transformation matrix is singular")
        out = M.T @ np.asarray(B, dtype=np.float64) @ M
        return 0.5 * (out + out.T)

    @staticmethod
    def aff_orbit_classify(c1: float, c2: float, c3: float) -> AffOrbit:
        """
        Aut(aff) orbit of the form [[c1, c2], [c2, c3]].

        Definite forms make one orbit up to scaling; the Lorentzian ones split
        by whether e_2 is isotropic.
        """
        det = c1 * c3 - c2 ** 2
        if det == 0.0:
            raise DegenerateMetricError(f"Degenerate aff form: c1*c3 - c2^2 = 0 for ({c1}, {c2}, {c3})")
        if det > 0:
            return "Definite"
        if abs(c3) <= ISOTROPY_TOL:
            return "LorentzE2Isotropic"
        return "LorentzE2NonIsotropic"
