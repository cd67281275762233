"""Machinery shared by the Dirac and Klein-Gordon shooting solvers.

Both radial problems are integrated in Pruefer (phase, log-amplitude) form,
outward from r_min and inward from r_max, on a grid uniform in
rho = ln r + r/beta (logarithmic near the origin, linear far out). The phase
defect at the matching radius,

    delta(E) = phase_out(r_match) - phase_in(r_match),

is strictly monotone in E (decreasing for Dirac, increasing for KG on the
positive branch), and the eigenvalue with nu nodes is the root of
delta(E) = -nu*pi (Dirac) or +nu*pi (KG). The node count of the glued
eigenfunction is checked independently afterwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import integrate, optimize

from . import _kernels
from .potentials import PotentialModel, eval_potential

DIRAC, KG = 0, 1
R_MAX_CAP = 1e5


class SolverError(RuntimeError):
    """Integration or root-finding failure."""


class NoBoundState(SolverError):
    """No eigenvalue with the requested node count inside the search bracket."""


class NodeCountError(SolverError):
    """The converged eigenfunction does not carry the requested node count."""


@dataclass(frozen=True)
class SolverConfig:
    """Grid and tolerance settings.

    ``r_max=None`` picks max(r_max_floor, r_max_scale / kappa) from an
    energy estimate, kappa being the asymptotic decay rate; ``e_bracket=None``
    searches the whole gap around the asymptotic value of the potential.
    ``n_steps`` is a floor: long grids get at least 3 m r_max steps so the
    far-field step stays below 0.5/m.
    """

    r_min: float = 1e-6
    r_max: float | None = None
    n_steps: int = 8192
    match_fraction: float = 0.5
    e_tol: float = 1e-8
    max_bisections: int = 200
    e_bracket: tuple[float, float] | None = None
    r_max_floor: float = 50.0
    r_max_scale: float = 30.0
    defect_tol: float = 1e-6

    def __post_init__(self):
        if not self.r_min > 0:
            raise ValueError("r_min must be positive")
        if self.r_max is not None and not self.r_max > self.r_min:
            raise ValueError("r_max must exceed r_min")
        if self.n_steps < 16:
            raise ValueError("n_steps too small")
        if not 0 < self.match_fraction < 1:
            raise ValueError("match_fraction must lie in (0, 1)")
        if not self.e_tol > 0:
            raise ValueError("e_tol must be positive")
        if self.e_bracket is not None and not self.e_bracket[0] < self.e_bracket[1]:
            raise ValueError("e_bracket must be an increasing pair")

    def with_(self, **kw) -> "SolverConfig":
        return replace(self, **kw)


@dataclass
class RadialTrajectory:
    """Sampled Dirac components on the solver grid."""

    grid: np.ndarray
    psi1: np.ndarray
    psi2: np.ndarray
    node_count_psi1: int
    log_derivative_mismatch: float
    outward_nodes: int
    match_radius: float
    norm_check: float  # integral of psi1^2 + psi2^2 from the RK4 accumulator


@dataclass
class KGTrajectory:
    grid: np.ndarray
    psi: np.ndarray
    node_count: int
    log_derivative_mismatch: float
    outward_nodes: int
    match_radius: float
    norm_check: float


@dataclass
class EigenResult:
    energy: float
    channel: object
    nodes_found: int
    iterations: int
    residual: float
    trajectory: RadialTrajectory | KGTrajectory | None = field(default=None, repr=False)
    equation: str = "dirac"
    r_max: float = math.nan
    n_steps: int = 0


def count_sign_changes(y: np.ndarray) -> int:
    """Strict sign changes of ``y``, skipping exact zeros."""
    s = np.sign(y)
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def far_value(model: PotentialModel) -> float:
    """V at the outer end of the model's domain (or at r = 1e8)."""
    hi = model.domain[1]
    return float(eval_potential(model, min(hi, 1e8)))


class Shooter:
    """One (model, channel parameter, grid) combination."""

    def __init__(self, model: PotentialModel, eq: int, kparam: float, m: float,
                 cfg: SolverConfig, r_max: float):
        lo, hi = model.domain
        r_min = max(cfg.r_min, lo)
        r_max = min(r_max, hi)
        if not r_max > r_min:
            raise SolverError("empty radial grid")
        self.model, self.eq, self.k, self.m, self.cfg = model, eq, float(kparam), float(m), cfg
        self.n = steps_for(cfg, r_max, m)
        self.beta = stretch_length(r_min, r_max, self.n, m)
        self.x, self.r = stretched_grid(r_min, r_max, 2 * self.n, self.beta)
        self.h = self.x[2] - self.x[0]
        self.S = self.beta / (self.r + self.beta) if math.isfinite(self.beta) else np.ones_like(self.r)
        self.V = np.asarray(eval_potential(model, self.r), dtype=float)
        if not np.all(np.isfinite(self.V)):
            raise SolverError("potential is not finite on the grid")
        self.nodes = self.r[::2]
        self.v_far = float(self.V[-1])
        self.u0 = -self.r[0] * self.V[0]
        self.p0 = self._start_phase()

    # -- boundary phases -------------------------------------------------
    def _start_phase(self) -> float:
        k, u0 = self.k, self.u0
        if self.eq == DIRAC:
            disc = k * k - u0 * u0
            if disc <= 0:
                raise SolverError(f"supercritical singularity at the origin (u={u0:.4g}, |k|={abs(k)})")
            g = math.sqrt(disc)
            if k < 0:
                return math.atan(-u0 / (g - k))       # psi2/psi1 = -u/(g - k)
            return 0.5 * math.pi - math.atan(u0 / (g + k))  # psi1/psi2 = u/(g + k)
        disc = k + 0.25 - u0 * u0
        if disc <= 0:
            raise SolverError(f"supercritical singularity at the origin (u={u0:.4g})")
        return math.atan2(1.0, 0.5 + math.sqrt(disc))  # psi ~ r^(s+1)

    def kappa(self, E: float) -> float:
        q = self.m**2 - (E - self.v_far) ** 2
        if q <= 0:
            raise SolverError(f"E={E} is not below the continuum at r_max")
        return math.sqrt(q)

    def _end_phase(self, E: float) -> float:
        kap = self.kappa(E)
        if self.eq == DIRAC:
            return math.atan(-kap / (E - self.v_far + self.m))
        return math.pi - math.atan(1.0 / (kap * self.r[-1]))

    # -- matching --------------------------------------------------------
    def match_index(self, E_est: float) -> int:
        r, V = self.nodes, self.V[::2]
        if self.eq == DIRAC:
            allowed = E_est - V - self.m > 0
        else:
            allowed = (E_est - V) ** 2 - self.m**2 - self.k / r**2 > 0
        idx = np.nonzero(allowed)[0]
        if idx.size:
            im = int(idx[-1])
        else:
            im = int(np.searchsorted(r, self.cfg.match_fraction * r[-1]))
        return min(max(im, self.n // 50), self.n - self.n // 50)

    def delta(self, E: float, im: int) -> float:
        po = _kernels.end_phase(self.r, self.S, self.V, self.eq, self.k, E, self.m, self.p0, 0, im, self.h)
        pi_ = _kernels.end_phase(self.r, self.S, self.V, self.eq, self.k, E, self.m,
                                 self._end_phase(E), self.n, im, self.h)
        return po - pi_

    # -- trajectories ----------------------------------------------------
    def trajectory(self, E: float, im: int):
        r, S, V, eq, k, m, h = self.r, self.S, self.V, self.eq, self.k, self.m, self.h
        po, lo, no = _kernels.sweep(r, S, V, eq, k, E, m, self.p0, 0, im, h)
        pi_, li, ni = _kernels.sweep(r, S, V, eq, k, E, m, self._end_phase(E), self.n, im, h)
        delta = po[-1] - pi_[-1]
        turns = round(delta / math.pi)
        mismatch = delta - turns * math.pi
        shift = lo[-1] - li[-1]
        phase = np.concatenate([po, pi_[::-1][1:] + turns * math.pi])
        lnr = np.concatenate([lo, li[::-1][1:] + shift])
        if not np.all(np.isfinite(lnr)):
            raise SolverError("overflow during integration")
        top = lnr.max()
        amp = np.exp(lnr - top)
        rk4_norm = (no[-1] + ni[-1] * math.exp(2 * shift)) * math.exp(-2 * top)
        nodes = self.nodes
        simpson = integrate.simpson(amp**2 * nodes * self.S[::2], x=self.x[::2])
        scale = 1.0 / math.sqrt(simpson)
        amp *= scale
        norm_check = rk4_norm / simpson
        full, _, _ = _kernels.sweep(r, S, V, eq, k, E, m, self.p0, 0, self.n, h)
        if eq == DIRAC:
            psi1 = amp * np.cos(phase)
            psi2 = amp * np.sin(phase)
            return RadialTrajectory(nodes.copy(), psi1, psi2, count_sign_changes(psi1[1:-1]),
                                    mismatch, count_sign_changes(np.cos(full)[1:]),
                                    float(nodes[im]), norm_check)
        psi = amp * np.sin(phase)
        return KGTrajectory(nodes.copy(), psi, count_sign_changes(psi[1:-1]), mismatch,
                            count_sign_changes(np.sin(full)[1:]), float(nodes[im]), norm_check)


def stretch_length(r_min: float, r_max: float, n: int, m: float) -> float:
    """Length beta of the grid map rho = ln r + r/beta.

    The grid is purely logarithmic (beta = inf) unless that would make the
    outermost step exceed 0.5/m, beyond which explicit RK4 loses stability
    in the classically forbidden region.
    """
    L = math.log(r_max / r_min)
    cap = 0.5 / m
    if r_max * L / n <= cap:
        return math.inf
    return max((n * cap - r_max) / L, 0.05 * r_max / L)


def stretched_grid(r_min: float, r_max: float, n: int, beta: float):
    """n+1 points uniform in rho = ln r + r/beta, returned as (rho, r)."""
    if not math.isfinite(beta):
        x = np.linspace(math.log(r_min), math.log(r_max), n + 1)
        r = np.exp(x)
    else:
        x = np.linspace(math.log(r_min) + r_min / beta, math.log(r_max) + r_max / beta, n + 1)
        # Newton on t = ln r for t + exp(t)/beta = rho; monotone from above
        t = np.minimum(x, np.log(beta * (np.abs(x) + 1.0)))
        for _ in range(100):
            e = np.exp(t) / beta
            dt = (t + e - x) / (1.0 + e)
            t -= dt
            if np.max(np.abs(dt)) < 1e-15:
                break
        r = np.exp(t)
    r[0], r[-1] = r_min, r_max
    return x, r


def steps_for(cfg: SolverConfig, r_max: float, m: float) -> int:
    """cfg.n_steps, raised when r_max is too long for steps of 0.5/m.

    Three steps per unit of m*r leave a third of the grid for the
    logarithmic part.
    """
    return max(cfg.n_steps, math.ceil(3 * r_max * m))


def auto_r_max(cfg: SolverConfig, kappa: float) -> float:
    if cfg.r_max is not None:
        return cfg.r_max
    return min(R_MAX_CAP, max(cfg.r_max_floor, cfg.r_max_scale / kappa))


def kappa_at(E: float, v_inf: float, m: float) -> float:
    q = m * m - (E - v_inf) ** 2
    return math.sqrt(q) if q > 0 else math.nan


def shoot(model, eq, kparam, nu, m, cfg, E_est, bracket_fn, channel, equation):
    """Locate the nu-node eigenvalue; shared driver of both solvers."""
    v_inf = far_value(model)
    kap = kappa_at(E_est, v_inf, m)
    r_max = auto_r_max(cfg, kap if kap > 0 else m)
    sign = -1.0 if eq == DIRAC else 1.0
    target = sign * nu * math.pi
    used_turning_point = False
    for _ in range(8):
        sh = Shooter(model, eq, kparam, m, cfg, r_max)
        lo, hi = bracket_fn(sh)
        if not lo < hi:
            raise NoBoundState("empty energy bracket")
        im = sh.match_index(E_est if lo < E_est < hi else 0.5 * (lo + hi))

        def f(E):
            return sign * (sh.delta(E, im) - target)

        f_lo, f_hi = f(lo), f(hi)
        if f_lo > 0:
            raise NoBoundState(f"{channel}: the {nu}-node level lies below the bracket")
        if f_hi < 0:
            grown = min(R_MAX_CAP, r_max * 4, model.domain[1])
            if cfg.r_max is None and grown > r_max * 1.01:
                r_max = grown
                continue
            raise NoBoundState(f"{channel}: no {nu}-node level below E={hi:.9g}")
        E, info = optimize.brentq(f, lo, hi, xtol=min(cfg.e_tol, 1e-10) * 1e-2,
                                  rtol=8.9e-16, maxiter=cfg.max_bisections,
                                  full_output=True, disp=False)
        if not info.converged:
            raise SolverError(f"root finding stagnated: {info.flag}")
        need = auto_r_max(cfg, kappa_at(E, v_inf, m))
        if cfg.r_max is None and need > 1.25 * r_max and r_max < min(R_MAX_CAP, model.domain[1]):
            r_max, E_est = min(need, R_MAX_CAP), E
            continue
        # a poor estimate can put the join deep in the forbidden region,
        # where the defect is nearly discontinuous in E; re-join at the
        # turning point of the converged level
        im_new = sh.match_index(E)
        if abs(math.log(sh.nodes[im_new] / sh.nodes[im])) > 0.1 and not used_turning_point:
            E_est, used_turning_point = E, True
            continue
        break
    traj = sh.trajectory(E, im)
    found = traj.node_count_psi1 if eq == DIRAC else traj.node_count
    if found != nu:
        raise NodeCountError(f"{channel}: converged level has {found} nodes, wanted {nu}")
    if abs(traj.log_derivative_mismatch) > cfg.defect_tol:
        raise SolverError(f"{channel}: matching defect {traj.log_derivative_mismatch:.3g} "
                          f"at E={E:.12g} exceeds {cfg.defect_tol:g}")
    return EigenResult(energy=float(E), channel=channel, nodes_found=found,
                       iterations=info.iterations, residual=float(traj.log_derivative_mismatch),
                       trajectory=traj, equation=equation, r_max=float(sh.r[-1]),
                       n_steps=sh.n)
