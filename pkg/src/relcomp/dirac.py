"""Discrete eigenvalues of the radial Dirac system

    psi1' = -(k/r) psi1 + (E - V + m) psi2
    psi2' =  (k/r) psi2 - (E - V - m) psi1

for an attractive central potential V, labelled by the number of nodes of
the upper component psi1.
"""

from __future__ import annotations

import math

import numpy as np

from . import analytic
from ._shooting import (DIRAC, EigenResult, RadialTrajectory, Shooter, SolverConfig,
                        auto_r_max, far_value, kappa_at, shoot)
from .analytic import DiracChannel
from .potentials import PotentialModel

__all__ = ["integrate_dirac", "solve_dirac", "coulomb_minorant_estimate"]


def coulomb_minorant_estimate(model: PotentialModel, ch: DiracChannel, m: float = 1.0) -> float:
    """Energy of the ``ch.nu``-node level of the smallest Coulomb potential
    (plus the asymptotic constant) lying below ``model`` on a sample grid."""
    v_inf = far_value(model)
    lo, hi = model.domain
    r = np.geomspace(max(lo, 1e-6), min(hi, 1e4), 400)
    u = float(np.max(-r * (model(r) - v_inf)))
    if u <= 0:
        return v_inf + m * (1 - 1e-3)
    if u >= abs(ch.k):
        return v_inf
    return v_inf + analytic.dirac_coulomb_level(u, ch, m)


def _bracket(cfg: SolverConfig, m: float):
    def fn(sh: Shooter):
        eps = 1e-6 * m
        lo, hi = sh.v_far - m + eps, sh.v_far + m - eps
        if cfg.e_bracket is not None:
            lo, hi = max(lo, cfg.e_bracket[0]), min(hi, cfg.e_bracket[1])
        return lo, hi
    return fn


def integrate_dirac(model: PotentialModel, ch: DiracChannel, E: float, m: float = 1.0,
                    cfg: SolverConfig | None = None) -> RadialTrajectory:
    """Two-sided integration at a fixed trial energy.

    The outward branch starts from the Frobenius behaviour at r_min and the
    inward branch from exp(-kappa r) decay at r_max; they are joined at the
    outermost classical turning point. The returned mismatch is the phase
    defect of psi2/psi1 at the join, reduced modulo pi.
    """
    cfg = cfg or SolverConfig()
    kap = kappa_at(E, far_value(model), m)
    if not kap > 0:
        raise ValueError(f"E={E} is not a bound-state energy for this potential")
    sh = Shooter(model, DIRAC, ch.k, m, cfg, auto_r_max(cfg, kap))
    return sh.trajectory(E, sh.match_index(E))


def solve_dirac(model: PotentialModel, ch: DiracChannel, m: float = 1.0,
                cfg: SolverConfig | None = None) -> EigenResult:
    """Eigenvalue whose upper component has exactly ``ch.nu`` nodes.

    Raises `NoBoundState` when no such level lies in the search bracket and
    `NodeCountError` if the converged eigenfunction has the wrong node count.
    """
    cfg = cfg or SolverConfig()
    E_est = coulomb_minorant_estimate(model, ch, m)
    if not math.isfinite(E_est):
        E_est = far_value(model)
    return shoot(model, DIRAC, ch.k, ch.nu, m, cfg, E_est, _bracket(cfg, m), ch, "dirac")
