"""
Frontlab - Bistable Nonlinearity and One-Dimensional Profiles
The reaction term f, its primitive and derived constants, the traveling wave (c, phi),
the half-line profiles H and rho, and the sub/supersolution pair w- / w+.
"""

import numpy as np
from typing import Dict, Optional, Tuple
import logging
from dataclasses import dataclass, field

from scipy.integrate import solve_bvp, solve_ivp
from scipy.optimize import brentq

from config import BARRIER_CONSTANTS_CONFIG, NONLINEARITY_CONFIG, PROFILE_CONFIG, SUPERSUB_CONFIG
from exceptions import DeltaTooLarge, NoConvergence, SearchFailed, TimeOutOfRange

logger = logging.getLogger(__name__)

SHAPES = ('cubic',)


@dataclass(frozen=True)
class Nonlinearity:
    """
    Bistable reaction term with zeros 0 < alpha < 1, extended linearly outside [0, 1].

    The cubic shape is u(1 - u)(u - alpha). Extension: f(s) = f'(0) s for s < 0 and
    f(s) = f'(1)(s - 1) for s > 1, which keeps f continuous and C^1 at 0 and 1.
    """

    alpha: float = 0.25
    shape: str = 'cubic'

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise ValueError(f"Unsupported nonlinearity shape: {self.shape}")
        if not 0.0 < self.alpha < 0.5:
            raise ValueError(f"alpha must lie in (0, 1/2) for an unbalanced bistable f, got {self.alpha}")

    @classmethod
    def from_config(cls, **overrides) -> 'Nonlinearity':
        params = dict(NONLINEARITY_CONFIG)
        params.update({k: v for k, v in overrides.items() if v is not None})
        return cls(alpha=float(params['alpha']), shape=params['shape'])

    # -- pointwise evaluation -------------------------------------------------

    def f(self, s):
        s = np.asarray(s, dtype=float)
        a = self.alpha
        inner = s * (1.0 - s) * (s - a)
        return np.where(s < 0.0, self.df0 * s, np.where(s > 1.0, self.df1 * (s - 1.0), inner))

    def df(self, s):
        s = np.asarray(s, dtype=float)
        a = self.alpha
        inner = -3.0 * s ** 2 + 2.0 * (1.0 + a) * s - a
        return np.where(s < 0.0, self.df0, np.where(s > 1.0, self.df1, inner))

    def F(self, s):
        """Primitive of the extended f with F(0) = 0."""
        s = np.asarray(s, dtype=float)
        a = self.alpha
        clipped = np.clip(s, 0.0, 1.0)
        inner = -clipped ** 4 / 4.0 + (1.0 + a) * clipped ** 3 / 3.0 - a * clipped ** 2 / 2.0
        below = self.df0 * s ** 2 / 2.0
        above = self.F1 + self.df1 * (s - 1.0) ** 2 / 2.0
        return np.where(s < 0.0, below, np.where(s > 1.0, above, inner))

    # -- derived constants ----------------------------------------------------

    @property
    def df0(self) -> float:
        return -self.alpha

    @property
    def df1(self) -> float:
        return -(1.0 - self.alpha)

    @property
    def dfalpha(self) -> float:
        return self.alpha * (1.0 - self.alpha)

    @property
    def F1(self) -> float:
        return 1.0 / 12.0 - self.alpha / 6.0

    @property
    def F_alpha(self) -> float:
        a = self.alpha
        return a ** 3 * (a - 2.0) / 12.0

    @property
    def delta0(self) -> float:
        """Largest delta0 with f' < 0 on [0, delta0): the smaller critical point of f."""
        a = self.alpha
        return ((1.0 + a) - np.sqrt((1.0 + a) ** 2 - 3.0 * a)) / 3.0

    @property
    def theta(self) -> float:
        """The zero of F in (alpha, 1)."""
        a = self.alpha
        b = 4.0 * (1.0 + a) / 3.0
        return (b - np.sqrt(b ** 2 - 8.0 * a)) / 2.0

    def stable_zero(self, delta_f: float) -> float:
        """Largest root of f(u) = delta_f in (alpha, 1); raises DeltaTooLarge if none."""
        if delta_f == 0.0:
            return 1.0
        a = self.alpha
        u_peak = ((1.0 + a) + np.sqrt((1.0 + a) ** 2 - 3.0 * a)) / 3.0
        if delta_f < 0.0 or float(self.f(u_peak)) <= delta_f:
            raise DeltaTooLarge(f"f - {delta_f} has no stable zero in (alpha, 1)")
        return brentq(lambda u: float(self.f(u)) - delta_f, u_peak, 1.0, xtol=1e-14)

    def summary(self) -> Dict:
        return {
            'alpha': self.alpha,
            'shape': self.shape,
            'F1': self.F1,
            'F_alpha': self.F_alpha,
            'delta0': self.delta0,
            'theta': self.theta,
            'df0': self.df0,
            'df1': self.df1,
        }


def eval_f(nl: Nonlinearity, s: float) -> float:
    """Extended f at a single point."""
    return float(nl.f(s))


# -- barrier constants --------------------------------------------------------

def _scan_grid() -> np.ndarray:
    cfg = BARRIER_CONSTANTS_CONFIG
    n = int(round((cfg['scan_max'] - cfg['scan_min']) / cfg['scan_step'])) + 1
    return np.linspace(cfg['scan_min'], cfg['scan_max'], n)


def check_barrier_constants(nl: Nonlinearity, delta: float, mu: float, sigma: float) -> Tuple[bool, float]:
    """
    Check -F(s) + mu (s - delta)^2 >= sigma on the dense scan grid.

    The scan endpoints double as the tail check: outside [0, 1] both -F and the
    quadratic term grow quadratically, so the inequality only gets easier there.

    Returns:
        (holds, scan minimum of the left-hand side)
    """
    s = _scan_grid()
    lhs = -nl.F(s) + mu * (s - delta) ** 2
    scan_min = float(lhs.min())
    tails_ok = lhs[0] >= sigma and lhs[-1] >= sigma
    return bool(scan_min >= sigma and tails_ok and 0.0 < delta <= nl.alpha), scan_min


def barrier_constants(nl: Nonlinearity) -> Tuple[float, float, float]:
    """
    Search (delta, mu, sigma) with -F(s) + mu (s - delta)^2 >= sigma > 0 for all s.

    Args:
        nl: Bistable nonlinearity

    Returns:
        (delta, mu, sigma) with the largest sigma found on the search grid
    """
    cfg = BARRIER_CONSTANTS_CONFIG
    s = _scan_grid()
    minus_F = -nl.F(s)
    best = None
    for k in range(1, cfg['delta_steps'] + 1):
        delta = nl.alpha * k / cfg['delta_steps']
        for j in range(cfg['mu_doublings'] + 1):
            mu = cfg['mu_base'] * 2 ** j
            sigma = float((minus_F + mu * (s - delta) ** 2).min())
            if sigma > 0.0 and (best is None or sigma > best[2]):
                best = (delta, mu, sigma)
    if best is None:
        raise SearchFailed(f"No barrier constants found for alpha={nl.alpha}")
    logger.info(f"Barrier constants for alpha={nl.alpha}: delta={best[0]:.4g}, mu={best[1]:.4g}, sigma={best[2]:.4g}")
    return best


# -- traveling wave -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class WaveProfile:
    """Traveling front phi(x1 - c t), decreasing from 1 to 0, with phi(0) = alpha."""

    nl: Nonlinearity
    c: float
    z: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    z_grid_step: float
    residual: float
    mu_tail: float
    nu_tail: float

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        inside = np.interp(z, self.z, self.phi)
        ahead = self.phi[-1] * np.exp(-self.mu_tail * (z - self.z[-1]))
        behind = 1.0 - (1.0 - self.phi[0]) * np.exp(self.nu_tail * (z - self.z[0]))
        return np.where(z > self.z[-1], ahead, np.where(z < self.z[0], behind, inside))

    def derivative(self, z):
        z = np.asarray(z, dtype=float)
        inside = np.interp(z, self.z, self.dphi)
        ahead = -self.mu_tail * self.phi[-1] * np.exp(-self.mu_tail * (z - self.z[-1]))
        behind = -self.nu_tail * (1.0 - self.phi[0]) * np.exp(self.nu_tail * (z - self.z[0]))
        return np.where(z > self.z[-1], ahead, np.where(z < self.z[0], behind, inside))

    def second_derivative(self, z):
        return -self.c * self.derivative(z) - self.nl.f(self(z))

    @property
    def window(self) -> float:
        return float(self.z[-1])


def _tail_rates(nl: Nonlinearity, c: float) -> Tuple[float, float]:
    mu = (c + np.sqrt(c ** 2 - 4.0 * nl.df0)) / 2.0
    nu = (-c + np.sqrt(c ** 2 - 4.0 * nl.df1)) / 2.0
    return mu, nu


def _speed_shot(nl: Nonlinearity, c: float) -> int:
    """+1 if the unstable manifold of 1 overshoots 0 (c too small), -1 if it stays above 0 (c too large)."""
    cfg = PROFILE_CONFIG
    _, nu = _tail_rates(nl, c)
    eps = cfg['saddle_offset']

    def rhs(z, y):
        return [y[1], -c * y[1] - float(nl.f(y[0]))]

    def hit_zero(z, y):
        return y[0]
    hit_zero.terminal = True
    hit_zero.direction = -1

    def turn(z, y):
        return y[1]
    turn.terminal = True
    turn.direction = 1

    # past the node threshold the manifold settles on alpha without turning
    sol = solve_ivp(rhs, (0.0, cfg['shot_horizon']), [1.0 - eps, -nu * eps], events=[hit_zero, turn],
                    method='DOP853', rtol=cfg['shot_rtol'], atol=1e-14)
    if sol.t_events[0].size:
        return 1
    return -1


def _wave_speed(nl: Nonlinearity) -> float:
    """Phase-plane bisection on c within [0, speed_cap)."""
    cfg = PROFILE_CONFIG
    c_lo, c_hi = 0.0, cfg['speed_cap']
    if _speed_shot(nl, c_lo) != 1:
        raise NoConvergence("Speed bracket failed: c = 0 does not overshoot")
    if _speed_shot(nl, c_hi) != -1:
        raise NoConvergence(f"Speed bracket failed: c = {c_hi} still overshoots")
    while c_hi - c_lo > cfg['speed_tol']:
        c_mid = 0.5 * (c_lo + c_hi)
        if _speed_shot(nl, c_mid) > 0:
            c_lo = c_mid
        else:
            c_hi = c_mid
    return 0.5 * (c_lo + c_hi)


def solve_wave_profile(nl: Nonlinearity, window: Optional[float] = None,
                       step: Optional[float] = None) -> WaveProfile:
    """
    Solve phi'' + c phi' + f(phi) = 0, phi(-inf) = 1, phi(+inf) = 0, phi(0) = alpha.

    The speed is bracketed by phase-plane bisection, then (c, phi) is refined as a
    boundary value problem on [-window, window] split at z = 0 with asymptotic
    Robin conditions at both ends. Tails below the switch level are replaced by
    the exact exponential solutions of the linearized equation.

    Args:
        nl: Bistable nonlinearity
        window: Half width of the truncation window
        step: Spacing of the returned samples

    Returns:
        WaveProfile with samples on the uniform z-grid
    """
    cfg = PROFILE_CONFIG
    window = float(window or cfg['window'])
    step = float(step or cfg['step'])
    try:
        c0 = _wave_speed(nl)
        a = nl.alpha

        def fun(s, y, p):
            c = p[0]
            return np.vstack([
                window * y[1],
                window * (-c * y[1] - nl.f(y[0])),
                window * y[3],
                window * (-c * y[3] - nl.f(y[2])),
            ])

        def fun_jac(s, y, p):
            c = p[0]
            df_dy = np.zeros((4, 4, s.size))
            df_dy[0, 1] = window
            df_dy[1, 0] = -window * nl.df(y[0])
            df_dy[1, 1] = -window * c
            df_dy[2, 3] = window
            df_dy[3, 2] = -window * nl.df(y[2])
            df_dy[3, 3] = -window * c
            df_dp = np.zeros((4, 1, s.size))
            df_dp[1, 0] = -window * y[1]
            df_dp[3, 0] = -window * y[3]
            return df_dy, df_dp

        def bc(ya, yb, p):
            mu, nu = _tail_rates(nl, p[0])
            return np.array([
                ya[1] + nu * (1.0 - ya[0]),
                yb[3] + mu * yb[2],
                yb[0] - ya[2],
                yb[1] - ya[3],
                ya[2] - a,
            ])

        s = np.linspace(0.0, 1.0, cfg['bvp_initial_nodes'])
        mu0, nu0 = _tail_rates(nl, c0)
        width = 2.0 / (mu0 + nu0)
        shift = width * np.log((1.0 - a) / a)

        def guess(z):
            g = 1.0 / (1.0 + np.exp((z + shift) / width))
            return g, -g * (1.0 - g) / width

        gl, pl = guess(-window + window * s)
        gr, pr = guess(window * s)
        sol = solve_bvp(fun, bc, s, np.vstack([gl, pl, gr, pr]), p=[c0], fun_jac=fun_jac,
                        tol=cfg['bvp_tol'], max_nodes=cfg['bvp_max_nodes'])
        if not sol.success:
            raise NoConvergence(f"Wave profile boundary value solve failed: {sol.message}")
        c = float(sol.p[0])
        mu, nu = _tail_rates(nl, c)

        n = int(round(2.0 * window / step)) + 1
        z = np.linspace(-window, window, n)
        phi, dphi, ddphi = _evaluate_split(sol, z, window)

        # exact exponential tails where the collocation error would dominate
        switch = 1e-5
        idx_ahead = np.nonzero(phi < switch)[0]
        if idx_ahead.size:
            i0 = idx_ahead[0]
            phi[i0:] = phi[i0] * np.exp(-mu * (z[i0:] - z[i0]))
            dphi[i0:] = -mu * phi[i0:]
            ddphi[i0:] = mu ** 2 * phi[i0:]
        idx_behind = np.nonzero(phi > 1.0 - switch)[0]
        if idx_behind.size:
            i1 = idx_behind[-1]
            gap = (1.0 - phi[i1]) * np.exp(nu * (z[:i1 + 1] - z[i1]))
            phi[:i1 + 1] = 1.0 - gap
            dphi[:i1 + 1] = -nu * gap
            ddphi[:i1 + 1] = -nu ** 2 * gap

        if phi[0] < 1.0 - cfg['tail_tol'] or phi[-1] > cfg['tail_tol']:
            raise NoConvergence(f"Window {window} too small: tails phi(-W)={phi[0]:.3e}, phi(W)={phi[-1]:.3e}")
        residual = float(np.max(np.abs(ddphi + c * dphi + nl.f(phi))[1:-1]))
        if residual > cfg['residual_tol']:
            raise NoConvergence(f"Wave profile residual {residual:.2e} exceeds {cfg['residual_tol']:.0e}")
        profile = WaveProfile(nl=nl, c=c, z=z, phi=phi, dphi=dphi, z_grid_step=step,
                              residual=residual, mu_tail=mu, nu_tail=nu)
        logger.info(f"Wave profile solved for alpha={nl.alpha}: c={c:.7f}, residual={residual:.2e}")
        return profile

    except Exception as e:
        logger.error(f"Wave profile solve failed for alpha={nl.alpha}: {e}")
        raise


def _evaluate_split(sol, z: np.ndarray, window: float):
    left = z <= 0.0
    s = np.where(left, (z + window) / window, z / window)
    y = sol.sol(s)
    yp = sol.sol(s, 1)
    phi = np.where(left, y[0], y[2])
    dphi = np.where(left, y[1], y[3])
    ddphi = np.where(left, yp[1], yp[3]) / window
    return phi.copy(), dphi.copy(), ddphi.copy()


# -- half-line profiles H and rho ---------------------------------------------

@dataclass(frozen=True, eq=False)
class HalfLineProfile:
    """
    Solution of v'' + f(v) = delta_f on x1 < 0, v(0) = 0, v(-inf) = b, extended by 0.

    kind 'H' has delta_f = 0 and b = 1.
    """

    nl: Nonlinearity
    kind: str
    z: np.ndarray
    values: np.ndarray
    delta_f: float
    b_root: float
    slope0: float
    first_integral_residual: float
    ode_residual: float

    def _energy_gap(self, v):
        Fd = lambda u: self.nl.F(u) - self.delta_f * u
        return np.maximum(Fd(self.b_root) - Fd(v), 0.0)

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        inside = np.interp(z, self.z, self.values)
        return np.where(z >= 0.0, 0.0, np.where(z < self.z[0], self.b_root, inside))

    def derivative(self, z):
        z = np.asarray(z, dtype=float)
        slope = -np.sqrt(2.0 * self._energy_gap(self(z)))
        return np.where(z >= 0.0, 0.0, slope)


def _solve_half_line(nl: Nonlinearity, kind: str, delta_f: float, window: float, step: float) -> HalfLineProfile:
    cfg = PROFILE_CONFIG
    b = nl.stable_zero(delta_f)
    Fd = lambda u: nl.F(u) - delta_f * u
    level = float(Fd(b))
    if level <= 0.0:
        raise DeltaTooLarge(f"Primitive of f - {delta_f} is not positive at b={b:.6f}")

    def rhs(z, y):
        return [-np.sqrt(2.0 * max(level - float(Fd(y[0])), 0.0))]

    n = int(round(window / step)) + 1
    z_desc = np.linspace(0.0, -window, n)
    sol = solve_ivp(rhs, (0.0, -window), [0.0], t_eval=z_desc, rtol=cfg['ode_rtol'], atol=cfg['ode_atol'])
    if not sol.success:
        raise NoConvergence(f"{kind} profile integration failed: {sol.message}")
    z = z_desc[::-1]
    values = sol.y[0][::-1]
    if values[0] < b - cfg['tail_tol'] ** 0.5:
        raise NoConvergence(f"{kind} profile did not reach b={b:.6f} within window {window}")

    slope = np.gradient(values, z, edge_order=2)
    gap = np.maximum(level - Fd(values), 0.0)
    fi_residual = float(np.max(np.abs(slope ** 2 / 2.0 - gap)))
    # v'' by the chain rule along the first integral: (f - delta_f) / sqrt(2 gap) * v'
    exact_slope = -np.sqrt(2.0 * gap)
    forcing = nl.f(values) - delta_f
    ratio = np.divide(forcing, exact_slope, out=np.zeros_like(values), where=exact_slope < -1e-12)
    ode_residual = float(np.max(np.abs(ratio * (slope - exact_slope))))
    if max(fi_residual, ode_residual) > cfg['residual_tol']:
        raise NoConvergence(f"{kind} profile residuals {fi_residual:.2e} / {ode_residual:.2e} "
                            f"exceed {cfg['residual_tol']:.0e}")
    return HalfLineProfile(nl=nl, kind=kind, z=z, values=values, delta_f=delta_f, b_root=b,
                           slope0=-np.sqrt(2.0 * level), first_integral_residual=fi_residual,
                           ode_residual=ode_residual)


def solve_H(nl: Nonlinearity, window: Optional[float] = None, step: Optional[float] = None) -> HalfLineProfile:
    """
    Solve H'' + f(H) = 0 on x1 < 0 with H(0) = 0, H(-inf) = 1, integrating the first
    integral H' = -sqrt(2(F(1) - F(H))) backward from z = 0.
    """
    try:
        profile = _solve_half_line(nl, 'H', 0.0, float(window or PROFILE_CONFIG['window']),
                                   float(step or PROFILE_CONFIG['step']))
        logger.info(f"H profile solved for alpha={nl.alpha}: H'(0)={profile.slope0:.7f}")
        return profile
    except Exception as e:
        logger.error(f"H profile failed for alpha={nl.alpha}: {e}")
        raise


def solve_rho(nl: Nonlinearity, delta_f: float, window: Optional[float] = None,
              step: Optional[float] = None) -> HalfLineProfile:
    """Solve rho'' + f(rho) = delta_f on x1 < 0 with rho(0) = 0, rho(-inf) = b."""
    try:
        profile = _solve_half_line(nl, 'rho' if delta_f else 'H', float(delta_f),
                                   float(window or PROFILE_CONFIG['window']),
                                   float(step or PROFILE_CONFIG['step']))
        logger.info(f"rho profile solved for delta_f={delta_f}: b={profile.b_root:.6f}")
        return profile
    except Exception as e:
        logger.error(f"rho profile failed for delta_f={delta_f}: {e}")
        raise


# -- sub/supersolution pair ---------------------------------------------------

@dataclass(frozen=True)
class SuperSubPair:
    """
    Parameters of w-/w+ around the half space x1 < 0.

    xi(t) = log(c / (c - M1 exp(lambda c t))) / lambda on (-inf, T], with
    T = log(c / (c + M1)) / (lambda c) so that c T + xi(T) = 0.
    """

    M1: float
    lambda_exp: float
    c: float
    T: float
    T_prime: float

    def xi(self, t):
        t = np.asarray(t, dtype=float)
        e = self.M1 * np.exp(self.lambda_exp * self.c * t)
        return np.log(self.c / (self.c - e)) / self.lambda_exp

    def xi_prime(self, t):
        t = np.asarray(t, dtype=float)
        return self.M1 * np.exp(self.lambda_exp * (self.c * t + self.xi(t)))

    def front_position(self, t) -> float:
        """x1 where the leading branch of w- sits at phi = alpha."""
        return float(self.c * t - self.xi(t))


def lambda_exponent(nl: Nonlinearity, c: float) -> float:
    """Positive root of lambda^2 - c lambda + f'(0) = 0."""
    return (c + np.sqrt(c ** 2 - 4.0 * nl.df0)) / 2.0


def eval_super_sub(pair: SuperSubPair, wp: WaveProfile, t: float, x1):
    """
    Evaluate (w-, w+) at time t and positions x1.

    Raises:
        TimeOutOfRange: if t > pair.T
    """
    if t > pair.T:
        raise TimeOutOfRange(f"t={t} exceeds the horizon T={pair.T}")
    x1 = np.asarray(x1, dtype=float)
    c, xi = pair.c, float(pair.xi(t))
    inside = x1 <= 0.0
    w_minus = np.where(inside, wp(x1 - c * t + xi) - wp(-x1 - c * t + xi), 0.0)
    w_plus = np.where(inside, wp(x1 - c * t - xi) + wp(-x1 - c * t - xi), 2.0 * wp(-c * t - xi))
    return w_minus, w_plus


def supersub_residuals(pair: SuperSubPair, wp: WaveProfile, t: float, x1) -> Tuple[np.ndarray, np.ndarray]:
    """
    Pointwise defects w_t - w_xx - f(w) of w- (should be <= 0) and w+ (should be >= 0),
    evaluated away from x1 = 0.
    """
    nl = wp.nl
    x1 = np.asarray(x1, dtype=float)
    c, xi, dxi = pair.c, float(pair.xi(t)), float(pair.xi_prime(t))
    inside = x1 < 0.0

    z1, z2 = x1 - c * t + xi, -x1 - c * t + xi
    w = wp(z1) - wp(z2)
    w_t = (-c + dxi) * (wp.derivative(z1) - wp.derivative(z2))
    w_xx = wp.second_derivative(z1) - wp.second_derivative(z2)
    res_minus = np.where(inside, w_t - w_xx - nl.f(w), 0.0)

    z1, z2 = x1 - c * t - xi, -x1 - c * t - xi
    w = wp(z1) + wp(z2)
    w_t = (-c - dxi) * (wp.derivative(z1) + wp.derivative(z2))
    w_xx = wp.second_derivative(z1) + wp.second_derivative(z2)
    plus_inside = w_t - w_xx - nl.f(w)
    z0 = -c * t - xi
    w0 = 2.0 * wp(z0)
    plus_outside = 2.0 * (-c - dxi) * wp.derivative(z0) - nl.f(w0)
    res_plus = np.where(inside, plus_inside, plus_outside)
    return res_minus, res_plus


def build_super_sub_pair(nl: Nonlinearity, wp: WaveProfile, M1: Optional[float] = None) -> SuperSubPair:
    """
    Build the pair, choosing the smallest M1 from the candidate list (and the latest
    T' <= T) for which the sub/supersolution inequalities hold on a sampled lattice.
    """
    cfg = SUPERSUB_CONFIG
    c = wp.c
    lam = lambda_exponent(nl, c)
    x1 = np.linspace(-cfg['x1_half_width'], cfg['x1_half_width'], cfg['x1_points'])
    x1 = x1[x1 != 0.0]
    candidates = [M1] if M1 is not None else cfg['m1_candidates']

    for m1 in candidates:
        T = np.log(c / (c + m1)) / (lam * c)
        for offset in cfg['t_offsets']:
            T_prime = T - offset
            pair = SuperSubPair(M1=float(m1), lambda_exp=lam, c=c, T=float(T), T_prime=float(T_prime))
            if _pair_holds(pair, wp, x1):
                logger.info(f"Sub/supersolution pair built: M1={m1}, T={T:.4f}, T'={T_prime:.4f}")
                return pair

    m1 = candidates[-1]
    T = np.log(c / (c + m1)) / (lam * c)
    logger.warning(f"No M1 candidate satisfied the lattice check; using M1={m1}")
    return SuperSubPair(M1=float(m1), lambda_exp=lam, c=c, T=float(T), T_prime=float(T - cfg['t_offsets'][-1]))


def _pair_holds(pair: SuperSubPair, wp: WaveProfile, x1: np.ndarray) -> bool:
    cfg = SUPERSUB_CONFIG
    tol = cfg['residual_tol'] if wp.residual < cfg['residual_tol'] else 10.0 * wp.residual
    tol = max(tol, 1e-6)
    for t in pair.T_prime - np.linspace(0.0, cfg['t_span'], cfg['t_points']):
        res_minus, res_plus = supersub_residuals(pair, wp, t, x1)
        if res_minus.max() > tol or res_plus.min() < -tol:
            return False
    return True
