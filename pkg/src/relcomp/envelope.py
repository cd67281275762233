"""Envelope bounds from tangent shifted-Coulomb potentials.

Writing V(r) = g(h(r)) with h(r) = -1/r, the tangent line of g at h(t)
gives the comparison potential -a(t)/r + b(t) with

    a(t) = g'(h(t)),   b(t) = g(h(t)) - h(t) g'(h(t)).

If g is concave the tangent lies above V everywhere, and since a constant
shift moves every level rigidly, E <= D(a(t)) + b(t) for every t. Making the
bound stationary in t is equivalent to making the energy function

    F(u) = D(u) - u D'(u) + V(-1/D'(u))

stationary in u, with contact radius t = -1/D'(u). For convex g the tangent
lies below V and the same construction gives a lower bound. In both cases
the stationary point is a minimum of F(u) (D is concave in u), so both
bounds come from minimizing F.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .analytic import CoulombSpectrum, DiracChannel, KGChannel
from .potentials import (PotentialModel, ShiftedCoulomb, TransformFunction, eval_potential,
                         is_attractive, transform_of)

__all__ = [
    "EnvelopeBound", "EnvelopeError", "KGClosedFormError", "tangent_coefficients",
    "tangent_potential", "tangent_bound", "energy_function", "classify_transform",
    "optimize_bound", "validate_kg_closed_form",
]


class EnvelopeError(RuntimeError):
    """No interior optimum of the energy function could be bracketed."""


class KGClosedFormError(RuntimeError):
    """The Klein-Gordon Coulomb closed form disagrees with the shooting solver."""


@dataclass
class EnvelopeBound:
    """Result of `optimize_bound`.

    ``kind`` is "upper" (concave g), "lower" (convex g), "exact" (linear g)
    or "none" (indefinite curvature; no bound is claimed and ``diagnostic``
    says why). ``certified_value`` is D(a(t*)) + b(t*), which is a bound for
    any contact radius; it agrees with ``bound_value`` to second order in
    the optimizer error.
    """

    kind: str
    u_star: float
    t_star: float
    a_coeff: float
    b_coeff: float
    bound_value: float
    channel: DiracChannel | KGChannel
    equation: str
    evaluations: int
    certified_value: float = math.nan
    heuristic: bool = False
    local_minima: list[tuple[float, float]] = field(default_factory=list)
    diagnostic: str = ""
    m: float = 1.0

    @property
    def claimed(self) -> bool:
        return self.kind != "none"

    def tangent(self) -> ShiftedCoulomb:
        return ShiftedCoulomb(self.a_coeff, self.b_coeff)

    def holds_for(self, energy: float, slack: float = 0.0) -> bool:
        """Whether ``energy`` lies on the claimed side of the bound."""
        if self.kind == "upper":
            return energy <= self.bound_value + slack
        if self.kind == "lower":
            return energy >= self.bound_value - slack
        if self.kind == "exact":
            return abs(energy - self.bound_value) <= slack
        return False


def tangent_coefficients(tf: TransformFunction, t: float) -> tuple[float, float]:
    """(a, b) of the shifted Coulomb potential tangent to g at h = -1/t."""
    if not t > 0:
        raise ValueError("contact radius must be positive")
    h = -1.0 / t
    a = float(tf.first(h))
    return a, float(tf.value(h)) - h * a


def tangent_potential(model: PotentialModel, t: float) -> ShiftedCoulomb:
    a, b = tangent_coefficients(transform_of(model), t)
    return ShiftedCoulomb(a, b)


def tangent_bound(model: PotentialModel, ch: DiracChannel | KGChannel, t: float,
                  m: float = 1.0, tf: TransformFunction | None = None) -> float:
    """D(a(t)) + b(t): the spectrum of the tangent potential at contact radius t."""
    a, b = tangent_coefficients(tf or transform_of(model), t)
    return CoulombSpectrum(ch, m).value(a) + b


def energy_function(u: float, D: CoulombSpectrum, model: PotentialModel) -> float:
    """F(u) = D(u) - u D'(u) + V(-1/D'(u))."""
    d1 = D.derivative(u)
    if not d1 < 0:
        raise ValueError(f"D'({u}) = {d1} is not negative")
    return D.value(u) - u * d1 + float(eval_potential(model, -1.0 / d1))


def classify_transform(tf: TransformFunction, h_range: tuple[float, float],
                       n: int = 512, eps: float = 1e-9) -> str:
    """"concave", "convex", "linear" or "indefinite" on ``h_range``."""
    lo, hi = max(h_range[0], tf.domain[0]), min(h_range[1], tf.domain[1])
    if not lo < hi:
        raise ValueError(f"empty h range {h_range} for domain {tf.domain}")
    if tf.curvature is not None:
        return tf.curvature
    h = np.linspace(lo, hi, n + 2)[1:-1]
    g2 = np.asarray(tf.second(h), dtype=float)
    g1 = np.asarray(tf.first(h), dtype=float)
    # g'' is compared with the curvature scale |g'| / |h| of the range
    scale = float(np.max(np.abs(g1) / np.abs(h)))
    if np.all(np.abs(g2) <= eps * scale):
        return "linear"
    if np.all(g2 < -eps * scale):
        return "concave"
    if np.all(g2 > eps * scale):
        return "convex"
    return "indefinite"


_KIND = {"concave": "upper", "convex": "lower", "linear": "exact"}


@functools.lru_cache(maxsize=1)
def validate_kg_closed_form(tol: float = 1e-6) -> float:
    """Check the KG Coulomb closed form against `solve_kg`.

    Runs d=3, l in {0,1}, nu in {0,1}, u in {0.05, 0.1, 0.3}; returns the
    largest deviation and raises `KGClosedFormError` above ``tol``.
    """
    from .analytic import kg_coulomb_energy
    from .kg import solve_kg
    from .potentials import Coulomb

    worst = 0.0
    for ell in (0, 1):
        for nu in (0, 1):
            ch = KGChannel(3, ell, nu)
            for u in (0.05, 0.1, 0.3):
                dev = abs(solve_kg(Coulomb(u), ch).energy - kg_coulomb_energy(u, ch))
                worst = max(worst, dev)
                if dev > tol:
                    raise KGClosedFormError(f"{ch} u={u}: closed form off by {dev:.3g}")
    return worst


def _golden(fun, lo, mid, hi, xtol):
    res = optimize.minimize_scalar(fun, bracket=(lo, mid, hi), method="golden",
                                   options={"xtol": xtol})
    return float(res.x), float(res.fun)


def optimize_bound(model: PotentialModel, ch: DiracChannel | KGChannel,
                   equation: str | None = None, m: float = 1.0, rtol: float = 1e-8,
                   n_scan: int = 400) -> EnvelopeBound:
    """Optimize the envelope bound for one channel.

    F(u) is scanned on ``n_scan`` points in (1e-3, 0.999) * u_critical, every
    interior local minimum is refined by golden-section search, and the
    best one is polished by solving g'(D'(u)) = u. Probes that leave the
    model's domain are skipped.
    """
    equation = equation or ("dirac" if isinstance(ch, DiracChannel) else "klein_gordon")
    if (equation == "dirac") != isinstance(ch, DiracChannel):
        raise ValueError(f"channel {ch} does not belong to equation {equation!r}")
    if equation == "klein_gordon":
        if not is_attractive(model, monotone=False):
            raise ValueError("the Klein-Gordon bound needs V <= 0")
        validate_kg_closed_form()

    D = CoulombSpectrum(ch, m)
    tf = transform_of(model)
    lo_dom, hi_dom = model.domain
    calls = 0

    def F(u):
        nonlocal calls
        calls += 1
        try:
            r = -1.0 / D.derivative(u)
        except ValueError:
            return math.inf
        if not lo_dom <= r <= hi_dom:
            return math.inf
        return energy_function(u, D, model)

    uc = D.u_critical
    us = np.linspace(1e-3 * uc, 0.999 * uc, n_scan)
    Fs = np.array([F(u) for u in us])
    ok = np.isfinite(Fs)
    if not ok.any():
        raise EnvelopeError("no contact radius inside the potential's domain")
    hs = np.array([D.derivative(u) for u in us[ok]])
    h_range = (float(hs.min()), float(hs.max()))
    curvature = classify_transform(tf, h_range)
    heuristic = not tf.analytic
    if curvature == "indefinite":
        return EnvelopeBound("none", math.nan, math.nan, math.nan, math.nan, math.nan, ch,
                             equation, calls, heuristic=heuristic, m=m,
                             diagnostic=f"g'' changes sign on h in [{h_range[0]:.6g}, {h_range[1]:.6g}]")

    interior = [i for i in range(1, n_scan - 1)
                if ok[i - 1] and ok[i + 1] and Fs[i] < Fs[i - 1] and Fs[i] <= Fs[i + 1]]
    if not interior:
        raise EnvelopeError("energy function has no interior minimum on the scan "
                            f"(u in [{us[0]:.4g}, {us[-1]:.4g}])")
    minima = []
    for i in interior:
        u, val = _golden(F, us[i - 1], us[i], us[i + 1], rtol)
        minima.append((u, val, i))
    minima.sort(key=lambda p: p[1])
    u_star, best, i = minima[0]

    # stationarity is g'(D'(u)) = u; the golden section only locates u to
    # about sqrt(machine eps), so finish on the stationarity condition
    def phi(u):
        return float(tf.first(D.derivative(u))) - u

    a_, b_ = us[i - 1], us[i + 1]
    if phi(a_) * phi(b_) < 0:
        u_star = optimize.brentq(phi, a_, b_, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        best = F(u_star)

    t_star = -1.0 / D.derivative(u_star)
    a, b = tangent_coefficients(tf, t_star)
    certified = D.value(a) + b if a < uc else math.nan
    return EnvelopeBound(_KIND[curvature], float(u_star), float(t_star), a, b, float(best), ch,
                         equation, calls, certified_value=float(certified), heuristic=heuristic,
                         local_minima=[(u, v) for u, v, _ in minima], m=m)
