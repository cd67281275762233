"""Positive-energy eigenvalues of the radial Klein-Gordon equation

    -psi'' + (Q/r^2) psi = ((E - V)^2 - m^2) psi

for potentials with V <= 0. The equation is linear in psi at fixed E, so we
shoot directly on E; on the positive branch the phase defect is increasing
in E and node crossings are one-directional.
"""

from __future__ import annotations

import numpy as np

from . import analytic
from ._shooting import (KG, EigenResult, KGTrajectory, Shooter, SolverConfig, auto_r_max,
                        far_value, kappa_at, shoot)
from .analytic import KGChannel
from .potentials import PotentialModel

__all__ = ["integrate_kg", "solve_kg"]


def _check_channel(ch: KGChannel):
    if ch.ell_d + 1 <= 0:
        raise ValueError(f"unphysical channel {ch}: l_d + 1 <= 0")


def _minorant_estimate(model, ch, m):
    v_inf = far_value(model)
    lo, hi = model.domain
    r = np.geomspace(max(lo, 1e-6), min(hi, 1e4), 400)
    u = float(np.max(-r * (model(r) - v_inf)))
    if u <= 0:
        return v_inf + m * (1 - 1e-3)
    if u >= ch.u_critical:
        return max(v_inf, 0.5 * m)
    return v_inf + analytic.kg_coulomb_energy(u, ch, m)


def _bracket(cfg, m):
    def fn(sh: Shooter):
        if np.any(sh.V > 1e-12):
            raise ValueError("Klein-Gordon solver needs V <= 0 on the grid")
        eps = 1e-6 * m
        lo, hi = eps, sh.v_far + m - eps
        if cfg.e_bracket is not None:
            lo, hi = max(lo, cfg.e_bracket[0]), min(hi, cfg.e_bracket[1])
        return lo, hi
    return fn


def integrate_kg(model: PotentialModel, ch: KGChannel, E: float, m: float = 1.0,
                 cfg: SolverConfig | None = None) -> KGTrajectory:
    _check_channel(ch)
    cfg = cfg or SolverConfig()
    kap = kappa_at(E, far_value(model), m)
    if not kap > 0:
        raise ValueError(f"E={E} is not a bound-state energy for this potential")
    sh = Shooter(model, KG, ch.Q, m, cfg, auto_r_max(cfg, kap))
    return sh.trajectory(E, sh.match_index(E))


def solve_kg(model: PotentialModel, ch: KGChannel, m: float = 1.0,
             cfg: SolverConfig | None = None) -> EigenResult:
    """The positive eigenvalue in (0, m) with exactly ``ch.nu`` nodes.

    Negative-energy solutions are never searched.
    """
    _check_channel(ch)
    cfg = cfg or SolverConfig()
    return shoot(model, KG, ch.Q, ch.nu, m, cfg, _minorant_estimate(model, ch, m),
                 _bracket(cfg, m), ch, "klein_gordon")
