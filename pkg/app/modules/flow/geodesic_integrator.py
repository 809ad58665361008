import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np
from scipy.integrate import RK45

from app.core.exceptions import SpecValidationError
from app.core.models.algebra import LieAlgebra, Vec
from app.core.models.flow import (
    Blowup, ChargeDrift, Completed, GeodesicTrajectory, IntegrationOptions,
    ToleranceFailure,
)
from app.core.models.metric import MetricForm
from app.core.monitoring.metrics import track_geodesic
from app.core.setting import config
from app.modules.algebra import AlgebraService
from app.modules.metric import MetricService

logger = logging.getLogger(__name__)


class GeodesicIntegrator:
    """
    Euler-Arnold flow x' = ad_x† x coupled with adjoint transport A' = -ad_x A.

    Handles:
    - Right-hand side evaluation
    - Adaptive Dormand-Prince 5(4) integration with blowup bracketing
    - Energy / Clairaut charge bookkeeping
    - Concurrent ensembles
    """

    @staticmethod
    def euler_arnold_rhs(alg: LieAlgebra, metric: MetricForm, x: Vec) -> Vec:
        ad_x = AlgebraService.ad_matrix(alg, x)
        return MetricService.metric_adjoint(ad_x, metric) @ x

    @staticmethod
    def _energy_and_charges(metric: MetricForm, x: Vec, A: np.ndarray) -> tuple[float, np.ndarray]:
        Gx = metric.G @ x
        # c_i = g_1(A e_i, x)
        return float(x @ Gx), A.T @ Gx

    @staticmethod
    def integrate_geodesic(
        alg: LieAlgebra,
        metric: MetricForm,
        x0: Vec,
        t_max: float | None = None,
        opts: IntegrationOptions | None = None,
    ) -> GeodesicTrajectory:
        """
        Integrate from x(0) = x0, A(0) = I up to t_max.

        Terminates with Completed(t_max); Blowup(last accepted t, watch end)
        when ‖x‖ has crossed the norm threshold and the accepted step then
        falls below the floor before the bracket window closes; or
        ToleranceFailure on step-control failure or a non-finite state.
        The watch end is the threshold crossing time plus blowup_bracket_tol,
        not a time the solver reached.
        """
        t_max = config.T_MAX if t_max is None else float(t_max)
        opts = opts or IntegrationOptions()
        if t_max <= 0:
            raise SpecValidationError(f"tMax must be positive, got {t_max}")
        n = alg.dim
        x0 = np.asarray(x0, dtype=np.float64)
        if x0.shape != (n,):
            raise SpecValidationError(f"x0 must have {n} components, got {x0.shape}")

        G = metric.G
        ad_basis = AlgebraService.ad_basis(alg)

        def rhs(_t, y):
            x = y[:n]
            A = y[n:].reshape(n, n)
            ad_x = np.einsum("i,ikj->kj", x, ad_basis)
            xdot = np.linalg.solve(G, ad_x.T @ (G @ x))
            Adot = -ad_x @ A
            return np.concatenate([xdot, Adot.ravel()])

        y0 = np.concatenate([x0, np.eye(n).ravel()])
        solver = RK45(rhs, 0.0, y0, t_bound=t_max, rtol=opts.rtol, atol=opts.atol, max_step=opts.max_step)

        times, states, derivs, steps = [0.0], [y0], [rhs(0.0, y0)[:n]], [0.0]
        status = None
        watch_until: float | None = None
        started = time.perf_counter()

        while status is None:
            t_prev = solver.t
            with np.errstate(over="ignore", invalid="ignore"):
                message = solver.step()

            if solver.status == "failed" or not np.all(np.isfinite(solver.y)):
                if watch_until is not None:
                    status = Blowup(t_prev, watch_until)
                else:
                    status = ToleranceFailure(t_prev, reason=message or "non-finite state")
                break

            y = solver.y.copy()
            step = solver.t - t_prev
            times.append(solver.t)
            states.append(y)
            derivs.append(rhs(solver.t, y)[:n])
            steps.append(step)

            norm = float(np.linalg.norm(y[:n]))
            if norm > opts.blowup_norm_threshold:
                if watch_until is None:
                    watch_until = min(solver.t + opts.blowup_bracket_tol, t_max)
                    logger.debug(f"‖x‖={norm:.3e} crossed threshold at t={solver.t:.12g}; watching until {watch_until:.12g}")
                if step < opts.blowup_step_floor:
                    status = Blowup(solver.t, watch_until)
                    break
            if watch_until is not None and solver.t >= watch_until:
                watch_until = None

            if solver.status == "finished":
                status = Completed(solver.t)
            elif len(times) > opts.max_steps:
                status = ToleranceFailure(solver.t, reason=f"exceeded {opts.max_steps} steps")

        states = np.array(states)
        xs = states[:, :n]
        As = states[:, n:].reshape(-1, n, n)
        Gx = xs @ G
        energies = np.einsum("ki,ki->k", xs, Gx)
        charges = np.einsum("kji,kj->ki", As, Gx)

        duration = time.perf_counter() - started
        track_geodesic(status.kind.lower(), duration)
        logger.debug(f"Geodesic integration ended with {status} after {len(times)} samples in {duration:.3f}s")

        return GeodesicTrajectory(
            times=np.array(times), xs=xs, As=As, xdots=np.array(derivs),
            energies=energies, charges=charges, steps=np.array(steps),
            status=status, options=opts,
        )

    @staticmethod
    def charge_drift(traj: GeodesicTrajectory) -> ChargeDrift:
        """Max deviation from the initial energy/charges, normalised by max(1, |initial|)."""
        if len(traj) < 2:
            raise SpecValidationError("charge_drift needs at least two samples")
        e0 = traj.energies[0]
        c0 = traj.charges[0]
        energy = float(np.max(np.abs(traj.energies - e0)) / max(1.0, abs(e0)))
        charges = np.max(np.abs(traj.charges - c0), axis=0) / np.maximum(1.0, np.abs(c0))
        return ChargeDrift(energy=energy, charges=charges)

    @staticmethod
    def integrate_ensemble(
        alg: LieAlgebra,
        metric: MetricForm,
        initial_velocities: Sequence[Vec],
        t_max: float | None = None,
        opts: IntegrationOptions | None = None,
        max_workers: int | None = None,
    ) -> list[GeodesicTrajectory]:
        """Independent trajectories computed concurrently; output keeps input order."""
        max_workers = config.MAX_WORKERS if max_workers is None else max_workers
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(
                lambda x0: GeodesicIntegrator.integrate_geodesic(alg, metric, x0, t_max, opts),
                initial_velocities,
            ))
