"""
Frontlab - Barrier Certificates
Projected-gradient minimization of the barrier energy, supersolution verification and
dominance monitoring of simulated runs against a certificate.
"""

import numpy as np
from typing import Dict, List, Optional, Tuple
import logging
from dataclasses import dataclass, field

from config import BARRIER_CONFIG
from exceptions import Infeasible, NotConverged
from geometry.grid import GridDomain, ScalarField
from geometry.obstacles import Reservoir
from simulation.solver import laplacian
from theory.nonlinearity import Nonlinearity

from .energy import BarrierConfig, energy_gradient, energy_values, euler_lagrange_residual

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class BarrierResult:
    """Minimizer of the barrier energy with its certificate diagnostics."""

    w0: ScalarField
    energy: float
    zeta_energy: float
    el_residual: float
    constraint_slack: float
    right_tail: float
    feasible: bool
    ep_ratio: float
    ep_bound: float
    converged: bool
    iterations: int
    energy_history: np.ndarray
    config: BarrierConfig

    @property
    def valid(self) -> bool:
        """Converged, feasible, Poincare check passed, means strictly below delta, stationary."""
        cfg = self.config
        ok = (self.converged and self.feasible and cfg.poincare_ok
              and self.el_residual <= BARRIER_CONFIG['el_tol'])
        if cfg.constrained:
            return bool(ok and self.constraint_slack < 0.0)
        return bool(ok and self.right_tail <= cfg.delta)

    def require_certificate(self) -> 'BarrierResult':
        if not self.feasible:
            raise Infeasible(f"Hole measure exceeds the a-priori bound {self.ep_ratio:.1f} times")
        if not self.valid:
            raise Infeasible(f"No certificate: slack={self.constraint_slack:.3e}, "
                             f"el_residual={self.el_residual:.3e}, converged={self.converged}")
        return self

    def to_dict(self) -> Dict:
        return {
            'variant': self.config.variant,
            'energy': self.energy,
            'zeta_energy': self.zeta_energy,
            'el_residual': self.el_residual,
            'constraint_slack': self.constraint_slack,
            'right_tail': self.right_tail,
            'feasible': self.feasible,
            'ep_ratio': self.ep_ratio,
            'ep_bound': self.ep_bound,
            'valid': self.valid,
            'converged': self.converged,
            'iterations': self.iterations,
            'delta': self.config.delta,
            'mu': self.config.mu,
            'sigma': self.config.sigma,
            'D_min': self.config.D_min,
            'poincare_min_ratio': self.config.poincare_min_ratio,
        }


def _project(values: np.ndarray, cfg: BarrierConfig, max_rounds: int = 50) -> np.ndarray:
    """Pin, then pull each offending subdomain mean down to delta and clip to [0, 1]."""
    w = np.clip(values, 0.0, 1.0)
    w[cfg.pinned] = cfg.pinned_values[cfg.pinned]
    w[~cfg.grid.fluid] = 0.0
    if not cfg.constrained:
        return w
    for _ in range(max_rounds):
        moved = False
        for piece in cfg.subdomains:
            excess = w[piece].mean() - cfg.delta
            if excess > 1e-15:
                w[piece] = np.clip(w[piece] - excess, 0.0, 1.0)
                moved = True
        if not moved:
            break
    return w


def _subdomain_slack(values: np.ndarray, cfg: BarrierConfig) -> float:
    return float(max(values[piece].mean() for piece in cfg.subdomains) - cfg.delta)


def minimize_barrier(cfg: BarrierConfig, nl: Nonlinearity, max_iter: Optional[int] = None,
                     grad_tol: Optional[float] = None) -> BarrierResult:
    """
    Projected gradient descent of J from zeta with Barzilai-Borwein steps and backtracking.

    Every accepted step lowers J. The iteration stops when the projected gradient at the
    base step 1 / (8 / h^2 + Lip f) is below grad_tol in max norm. Infeasible setups are
    returned flagged, without minimizing.

    Raises:
        NotConverged: the iteration cap is reached
    """
    max_iter = int(max_iter or BARRIER_CONFIG['max_iter'])
    grad_tol = float(grad_tol or BARRIER_CONFIG['grad_tol'])
    grid = cfg.grid
    lip = max(abs(nl.df1), abs(nl.df0), nl.dfalpha, 0.5)
    tau0 = 1.0 / (8.0 / grid.h ** 2 + lip)
    tau_max = tau0 * (BARRIER_CONFIG['bb_max_factor'] if cfg.constrained else BARRIER_CONFIG['cylinder_step_factor'])

    w = _project(cfg.zeta, cfg)
    energy = energy_values(w, cfg, nl)
    zeta_energy = energy
    history = [energy]

    if not cfg.feasible:
        logger.warning(f"Barrier setup infeasible (hole measure {cfg.ep_ratio:.1f}x the bound); certificate refused")
        return _result(w, energy, zeta_energy, history, 0, False, cfg, nl)

    try:
        grad = energy_gradient(w, cfg, nl)
        tau = tau0
        converged = False
        n = 0
        for n in range(1, max_iter + 1):
            pg = (w - _project(w - tau0 * grad, cfg)) / tau0
            if np.abs(pg).max() < grad_tol:
                converged = True
                break

            step = tau
            while True:
                candidate = _project(w - step * grad, cfg)
                cand_energy = energy_values(candidate, cfg, nl)
                if cand_energy <= energy or step <= tau0 * 1e-6:
                    break
                step *= 0.5
            if cand_energy > energy:
                # no decrease even at a tiny step: the iterate is stationary to rounding
                converged = np.abs(pg).max() < 100.0 * grad_tol
                break

            cand_grad = energy_gradient(candidate, cfg, nl)
            s = candidate - w
            y = cand_grad - grad
            sy = float(np.sum(s * y))
            tau = float(np.clip(np.sum(s * s) / sy, tau0, tau_max)) if sy > 0 else tau_max
            w, grad, energy = candidate, cand_grad, cand_energy
            history.append(energy)
            if n % 5000 == 0:
                logger.debug(f"Barrier iteration {n}: J={energy:.10f}, |pg|={np.abs(pg).max():.3e}")

        if not converged:
            raise NotConverged(f"Barrier minimization hit the cap of {max_iter} iterations")
        result = _result(w, energy, zeta_energy, history, n, True, cfg, nl)
        logger.info(f"Barrier ({cfg.variant}) converged in {n} iterations: J={energy:.6f}, "
                    f"slack={result.constraint_slack:.4f}, el_residual={result.el_residual:.2e}")
        return result

    except Exception as e:
        logger.error(f"Barrier minimization failed: {e}")
        raise


def _result(w: np.ndarray, energy: float, zeta_energy: float, history: List[float], iterations: int,
            converged: bool, cfg: BarrierConfig, nl: Nonlinearity) -> BarrierResult:
    grid = cfg.grid
    tail_cols = grid.x1 >= cfg.b + BARRIER_CONFIG['tail_offset']
    tail = w[tail_cols[:, None] & grid.fluid]
    return BarrierResult(
        w0=ScalarField(grid, w),
        energy=energy,
        zeta_energy=zeta_energy,
        el_residual=euler_lagrange_residual(w, cfg, nl),
        constraint_slack=_subdomain_slack(w, cfg),
        right_tail=float(tail.max()) if tail.size else 0.0,
        feasible=cfg.feasible,
        ep_ratio=cfg.ep_ratio,
        ep_bound=cfg.ep_bound,
        converged=converged,
        iterations=iterations,
        energy_history=np.asarray(history),
        config=cfg,
    )


def verify_supersolution(w0: ScalarField, nl: Nonlinearity, pinned: Optional[np.ndarray] = None) -> float:
    """min over free fluid cells of -(L_h w0 + f(w0)); >= -1e-5 for a discrete supersolution."""
    grid = w0.grid
    free = grid.fluid if pinned is None else grid.fluid & ~pinned
    defect = -(laplacian(w0.values, grid) + nl.f(w0.values))
    return float(defect[free].min())


def reservoir_barrier(spec: Reservoir, nl: Nonlinearity, grid: GridDomain,
                      rng: Optional[np.random.Generator] = None) -> BarrierResult:
    """Minimize J_res over mouth + entrance + cavity with V = 1 on the mouth and cavity means <= delta."""
    try:
        cfg = BarrierConfig.for_reservoir(spec, grid, nl, rng)
        return minimize_barrier(cfg, nl)
    except Exception as e:
        logger.error(f"Reservoir barrier failed: {e}")
        raise


class DominanceMonitor:
    """
    Run observer recording max over time of (u - w0) on the certificate window.

    Cells pinned by the certificate and cells outside its fluid set are ignored.
    """

    def __init__(self, result: BarrierResult):
        self.result = result
        self.cfg = result.config
        self.max_excess = -np.inf
        self.samples = 0

    def __call__(self, t: float, field: ScalarField):
        window = field.values[self.cfg.columns]
        mask = self.cfg.free
        excess = float(np.max(window[mask] - self.result.w0.values[mask]))
        self.max_excess = max(self.max_excess, excess)
        self.samples += 1

    def holds(self, tol: Optional[float] = None) -> bool:
        tol = BARRIER_CONFIG['dominance_tol'] if tol is None else tol
        return bool(self.max_excess <= tol)


def cavity_mean(field: ScalarField, cfg: BarrierConfig) -> float:
    """Largest subdomain mean of a simulation field over the reservoir cavity pieces."""
    window = field.values[cfg.columns]
    return float(max(window[piece].mean() for piece in cfg.subdomains))
