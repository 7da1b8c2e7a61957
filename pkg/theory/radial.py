"""
Frontlab - Radial Bubbles
Positive radial Dirichlet solutions of Psi'' + ((N-1)/r) Psi' + f(Psi) = 0 on a ball,
the critical radius R0 and the compactly supported subsolution Psi^P.
"""

import numpy as np
from typing import Dict, Optional, Tuple
import logging
from dataclasses import dataclass
from functools import lru_cache

from scipy.integrate import quad, solve_ivp, trapezoid
from scipy.optimize import minimize_scalar
from scipy.special import gamma

from config import RADIAL_CONFIG
from exceptions import BracketFailed, TooCloseToObstacle
from geometry.grid import GridDomain, ScalarField
from theory.nonlinearity import Nonlinearity

logger = logging.getLogger(__name__)

BRANCHES = ('upper', 'lower')


@dataclass(frozen=True, eq=False)
class RadialBubble:
    """Sampled radial bubble on [0, R] with Psi(R) = 0 and Psi'(0) = 0."""

    nl: Nonlinearity
    R: float
    N_dim: int
    r: np.ndarray
    psi: np.ndarray
    dpsi: np.ndarray
    center_value: float
    branch: str
    residual: float

    def __call__(self, r):
        r = np.abs(np.asarray(r, dtype=float))
        return np.interp(r, self.r, self.psi, right=0.0)

    @property
    def energy(self) -> float:
        return bubble_energy(self)


def _check_dim(N_dim: int):
    if int(N_dim) != N_dim or N_dim < 1:
        raise ValueError(f"N_dim must be a positive integer, got {N_dim}")


def _shoot(nl: Nonlinearity, psi0: float, N_dim: int, r_max: float, dense: bool = False):
    cfg = RADIAL_CONFIG
    r0 = cfg['series_radius']
    f0 = float(nl.f(psi0))
    start = [psi0 - f0 * r0 ** 2 / (2.0 * N_dim), -f0 * r0 / N_dim]

    def rhs(r, y):
        return [y[1], -(N_dim - 1) / r * y[1] - float(nl.f(y[0]))]

    def hit_zero(r, y):
        return y[0]
    hit_zero.terminal = True
    hit_zero.direction = -1

    def turn(r, y):
        return y[1]
    turn.terminal = True
    turn.direction = 1

    return solve_ivp(rhs, (r0, r_max), start, method='DOP853', events=[hit_zero, turn],
                     rtol=cfg['rtol'], atol=cfg['atol'], dense_output=dense)


def zero_radius(nl: Nonlinearity, psi0: float, N_dim: int) -> float:
    """Radius of the first zero of the trajectory started at Psi(0) = psi0; inf if it turns first."""
    sol = _shoot(nl, psi0, N_dim, RADIAL_CONFIG['r_max'])
    if sol.t_events[0].size:
        return float(sol.t_events[0][0])
    return np.inf


@lru_cache(maxsize=32)
def _zero_radius_scan(nl: Nonlinearity, N_dim: int) -> Tuple[np.ndarray, np.ndarray, float, float]:
    """Zero radius over a scan of center values, plus the refined minimum (psi0*, r*)."""
    cfg = RADIAL_CONFIG
    a = nl.alpha
    body = np.linspace(a + 1e-3, 1.0 - 1e-3, cfg['scan_points'])
    tail = 1.0 - 10.0 ** -np.asarray(cfg['tail_exponents'], dtype=float)
    psi0 = np.unique(np.concatenate([body, tail]))
    radii = np.array([zero_radius(nl, p, N_dim) for p in psi0])
    if not np.isfinite(radii).any():
        return psi0, radii, np.nan, np.inf

    k = int(np.argmin(radii))
    lo = psi0[max(k - 1, 0)]
    hi = psi0[min(k + 1, psi0.size - 1)]
    best_psi, best_r = psi0[k], radii[k]
    if hi > lo:
        res = minimize_scalar(lambda p: zero_radius(nl, p, N_dim), bounds=(lo, hi), method='bounded',
                              options={'xatol': 1e-12})
        if np.isfinite(res.fun) and res.fun < best_r:
            best_psi, best_r = float(res.x), float(res.fun)
    logger.debug(f"Zero radius scan N={N_dim}: min r*={best_r:.6f} at psi0={best_psi:.6f}")
    return psi0, radii, float(best_psi), float(best_r)


def minimal_zero_radius(nl: Nonlinearity, N_dim: int) -> Tuple[float, float]:
    """(psi0, r*) at the minimum of the zero radius over all center values."""
    _check_dim(N_dim)
    _, _, psi0, r_min = _zero_radius_scan(nl, int(N_dim))
    return psi0, r_min


def solve_bubble(nl: Nonlinearity, R: float, N_dim: int = 2, branch: str = 'upper') -> Optional[RadialBubble]:
    """
    Shoot on Psi(0) in (alpha, 1) for a positive radial solution vanishing at r = R.

    For R above the critical radius two center values reach zero exactly at R;
    branch selects the larger ('upper', default) or the smaller ('lower').

    Args:
        nl: Bistable nonlinearity
        R: Ball radius
        N_dim: Space dimension
        branch: 'upper' or 'lower'

    Returns:
        RadialBubble, or None when no center value reaches zero at R
    """
    if R <= 0:
        raise ValueError(f"R must be positive, got {R}")
    _check_dim(N_dim)
    if branch not in BRANCHES:
        raise ValueError(f"Unknown branch: {branch}")
    cfg = RADIAL_CONFIG
    N_dim = int(N_dim)

    psi_grid, radii, psi_star, r_min = _zero_radius_scan(nl, N_dim)
    if not np.isfinite(r_min) or R < r_min:
        return None

    # bisect "reaches zero before R" between the minimizer and the far end of the branch
    inside = psi_star
    if branch == 'upper':
        candidates = psi_grid[(psi_grid > psi_star) & (radii > R)]
        if not candidates.size:
            return None
        outside = float(candidates.min())
    else:
        candidates = psi_grid[(psi_grid < psi_star) & (radii > R)]
        if not candidates.size:
            return None
        outside = float(candidates.max())

    for _ in range(cfg['bisection_iter']):
        mid = 0.5 * (inside + outside)
        if mid in (inside, outside):
            break
        if zero_radius(nl, mid, N_dim) <= R:
            inside = mid
        else:
            outside = mid
        if abs(outside - inside) < cfg['center_tol']:
            break

    psi0 = inside
    sol = _shoot(nl, psi0, N_dim, cfg['r_max'], dense=True)
    r_edge = float(sol.t_events[0][0])
    r = np.concatenate([[0.0], np.linspace(cfg['series_radius'], r_edge, cfg['samples'] - 1)])
    y = sol.sol(r[1:])
    psi = np.concatenate([[psi0], y[0]])
    dpsi = np.concatenate([[0.0], y[1]])
    psi[-1] = 0.0

    curvature = np.gradient(dpsi, r, edge_order=2)
    with np.errstate(divide='ignore', invalid='ignore'):
        ode = curvature + np.where(r > 0, (N_dim - 1) / r * dpsi, 0.0) + nl.f(psi)
    residual = float(np.max(np.abs(ode[2:-2])))

    bubble = RadialBubble(nl=nl, R=float(R), N_dim=N_dim, r=r, psi=psi, dpsi=dpsi,
                          center_value=float(psi0), branch=branch, residual=residual)
    logger.info(f"Bubble solved: R={R:.4f}, N={N_dim}, branch={branch}, Psi(0)={psi0:.8f}")
    return bubble


def find_R0(nl: Nonlinearity, N_dim: int = 2, tol: Optional[float] = None) -> float:
    """
    Bracket the critical radius by bisection on existence of a bubble.

    Returns:
        R_hi of the final bracket [R_lo, R_hi] with R_hi - R_lo <= tol

    Raises:
        BracketFailed: no bubble exists up to the radius cap
    """
    tol = float(tol or RADIAL_CONFIG['r0_tol'])
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    _check_dim(N_dim)
    cap = RADIAL_CONFIG['r_max']
    try:
        exists = lambda R: solve_bubble(nl, R, N_dim) is not None
        lo, hi = 0.0, 1.0
        while not exists(hi):
            lo = hi
            hi *= 2.0
            if hi > cap:
                if exists(cap):
                    hi = cap
                    break
                raise BracketFailed(f"No bubble exists for R <= {cap} (alpha={nl.alpha}, N={N_dim})")
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if exists(mid):
                hi = mid
            else:
                lo = mid
        logger.info(f"Critical radius for alpha={nl.alpha}, N={N_dim}: R0 in [{lo:.6f}, {hi:.6f}]")
        return hi

    except Exception as e:
        logger.error(f"Critical radius search failed: {e}")
        raise


def bubble_energy(bubble: RadialBubble) -> float:
    """omega_N * integral of (Psi'^2 / 2 - F(Psi)) r^(N-1) dr over [0, R]."""
    N = bubble.N_dim
    omega = 2.0 * np.pi ** (N / 2.0) / gamma(N / 2.0)
    density = (0.5 * bubble.dpsi ** 2 - bubble.nl.F(bubble.psi)) * bubble.r ** (N - 1)
    return float(omega * trapezoid(density, bubble.r))


def first_integral_half_length(nl: Nonlinearity, psi0: float) -> float:
    """
    One-dimensional half length L(psi0) = integral_0^psi0 du / sqrt(2 (F(psi0) - F(u))).

    Infinite unless F(psi0) > 0, i.e. psi0 in (theta, 1).
    """
    if not nl.theta < psi0 < 1.0:
        return np.inf
    level = float(nl.F(psi0))

    # u = psi0 - t^2 removes the inverse square root singularity at u = psi0
    def integrand(t):
        gap = level - float(nl.F(psi0 - t * t))
        if t == 0.0:
            return 2.0 / np.sqrt(2.0 * float(nl.f(psi0)))
        return 2.0 * t / np.sqrt(2.0 * max(gap, 1e-300))

    value, _ = quad(integrand, 0.0, np.sqrt(psi0), limit=200, epsabs=1e-12, epsrel=1e-10)
    return float(value)


def min_half_length_1d(nl: Nonlinearity) -> Tuple[float, float]:
    """(psi0, L) minimizing the one-dimensional half length."""
    res = minimize_scalar(lambda p: first_integral_half_length(nl, p),
                          bounds=(nl.theta + 1e-9, 1.0 - 1e-9), method='bounded',
                          options={'xatol': 1e-10})
    return float(res.x), float(res.fun)


def distance_to_obstacle(grid: GridDomain, P: Tuple[float, float]) -> float:
    """Distance from P to the nearest solid cell center (minimum image when periodic)."""
    solid = ~grid.fluid
    if not solid.any():
        return np.inf
    X, Y = grid.centers()
    dx = X[solid] - P[0]
    dy = Y[solid] - P[1]
    if grid.lateral_bc == 'periodic':
        dy = dy - grid.height * np.round(dy / grid.height)
    return float(np.sqrt(dx ** 2 + dy ** 2).min())


def embed_bubble(bubble: RadialBubble, P: Tuple[float, float], grid: GridDomain) -> ScalarField:
    """
    Psi^P: Psi(|x - P|) inside the ball of radius R around P, zero outside.

    Raises:
        TooCloseToObstacle: the ball reaches the obstacle
    """
    P = (float(P[0]), float(P[1]))
    dist = distance_to_obstacle(grid, P)
    if dist < bubble.R:
        raise TooCloseToObstacle(f"Center {P} is {dist:.4f} from the obstacle, bubble radius {bubble.R:.4f}")
    X, Y = grid.centers()
    dy = Y - P[1]
    if grid.lateral_bc == 'periodic':
        dy = dy - grid.height * np.round(dy / grid.height)
    values = np.where(grid.fluid, bubble(np.hypot(X - P[0], dy)), 0.0)
    return ScalarField(grid, values)


def radial_summary(nl: Nonlinearity, N_dim: int = 2) -> Dict:
    psi0, r_min = minimal_zero_radius(nl, N_dim)
    return {'alpha': nl.alpha, 'N_dim': N_dim, 'critical_center_value': psi0, 'critical_radius': r_min}
