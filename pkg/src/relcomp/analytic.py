"""
Closed-form Coulomb spectra in d dimensions and the quantum-number algebra.

Energies are in units of the mass m (pass ``m`` to rescale). The Dirac
Coulomb level is

    D(u) = {1 + u^2 [n_r + (k_d^2 - u^2)^(1/2)]^(-2)}^(-1/2)

and the Klein-Gordon Coulomb level is

    E(u) = {1 + u^2 [nu + 1/2 + ((l_d + 1/2)^2 - u^2)^(1/2)]^(-2)}^(-1/2).

Node labels and the radial index n_r
------------------------------------
`dirac_coulomb_energy` evaluates the formula with ``n_r = channel.nu``.
For k_d < 0 this is exactly the state whose upper component has ``nu``
nodes. For k_d > 0 the state with ``nu`` upper-component nodes has
``n_r = nu + 1`` (there is no nodeless-in-both solution when k_d > 0), so
code that needs the energy *of the nu-node state* should call
`dirac_coulomb_level`, which applies that shift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

SPECTROSCOPIC = "spdfghiklmnoqrtuv"


def _as_half_integer(j) -> Fraction:
    f = Fraction(j).limit_denominator(8)
    if f <= 0 or f.denominator != 2:
        raise ValueError(f"j must be a positive half-integer, got {j}")
    return f


@dataclass(frozen=True)
class DiracChannel:
    """Angular sector (d, j, tau) and upper-component node count nu."""

    d: int
    j: float
    tau: int
    nu: int

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise ValueError("dimension must be an integer >= 2")
        _as_half_integer(self.j)
        if self.tau not in (1, -1):
            raise ValueError("tau must be +1 or -1")
        if int(self.nu) != self.nu or self.nu < 0:
            raise ValueError("nu must be a nonnegative integer")
        object.__setattr__(self, "j", float(self.j))
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "nu", int(self.nu))

    @classmethod
    def from_k(cls, d: int, k: float, nu: int) -> "DiracChannel":
        """Channel with k_d = k (k must be +-(j + (d-2)/2) for half-integer j)."""
        j = abs(k) - (d - 2) / 2
        return cls(d, j, 1 if k > 0 else -1, nu)

    @property
    def k(self) -> float:
        """k_d = tau (j + (d-2)/2)."""
        return self.tau * (self.j + (self.d - 2) / 2)

    @property
    def ell(self) -> float:
        return abs(self.k) - (self.d - 1) / 2

    @property
    def n_radial(self) -> int:
        """Radial index n_r of the Coulomb state with ``nu`` upper nodes."""
        return self.nu + (1 if self.k > 0 else 0)

    @property
    def u_critical(self) -> float:
        return abs(self.k)

    def __str__(self):
        return f"d={self.d} j={Fraction(self.j)} tau={self.tau:+d} nu={self.nu}"


@dataclass(frozen=True)
class KGChannel:
    """Klein-Gordon sector (d, l) and radial node count nu."""

    d: int
    ell: int
    nu: int

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise ValueError("dimension must be an integer >= 2")
        if int(self.ell) != self.ell or self.ell < 0:
            raise ValueError("ell must be a nonnegative integer")
        if int(self.nu) != self.nu or self.nu < 0:
            raise ValueError("nu must be a nonnegative integer")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "ell", int(self.ell))
        object.__setattr__(self, "nu", int(self.nu))

    @property
    def ell_d(self) -> float:
        return self.ell + (self.d - 3) / 2

    @property
    def Q(self) -> float:
        """Centrifugal coefficient (2l+d-1)(2l+d-3)/4 = l_d (l_d + 1)."""
        return (2 * self.ell + self.d - 1) * (2 * self.ell + self.d - 3) / 4

    @property
    def u_critical(self) -> float:
        return self.ell_d + 0.5

    def __str__(self):
        return f"d={self.d} l={self.ell} nu={self.nu}"


# ---------------------------------------------------------------------------
# Dirac

def _dirac_check(u, kabs):
    if u < 0:
        raise ValueError("coupling must be nonnegative")
    if u >= kabs:
        raise ValueError(f"supercritical coupling u={u} >= |k_d|={kabs}")


def _dirac_D(u, kabs, nr):
    N = nr + math.sqrt(kabs * kabs - u * u)
    if N == 0.0:
        return 0.0
    return (1.0 + (u / N) ** 2) ** -0.5


def _dirac_D1(u, kabs, nr):
    g = math.sqrt(kabs * kabs - u * u)
    N = nr + g
    X = (u / N) ** 2
    dX = 2 * u / N**2 + 2 * u**3 / (g * N**3)
    return -0.5 * (1.0 + X) ** -1.5 * dX


def dirac_coulomb_energy(u: float, ch: DiracChannel, m: float = 1.0) -> float:
    """Coulomb level D(u) with the radial index set to ``ch.nu``."""
    _dirac_check(u, abs(ch.k))
    return m * _dirac_D(u, abs(ch.k), ch.nu)


def dirac_coulomb_energy_derivative(u: float, ch: DiracChannel, m: float = 1.0,
                                    one_sided: bool = False) -> float:
    """dD/du of `dirac_coulomb_energy`.

    ``u = 0`` is only accepted with ``one_sided=True`` and ``nu > 0``, where
    the limit 0 is returned.
    """
    if u == 0:
        if one_sided and ch.nu > 0:
            return 0.0
        raise ValueError("derivative at u=0 not available for this channel")
    _dirac_check(u, abs(ch.k))
    return m * _dirac_D1(u, abs(ch.k), ch.nu)


def dirac_coulomb_level(u: float, ch: DiracChannel, m: float = 1.0) -> float:
    """Energy of the Coulomb state with ``ch.nu`` nodes in the upper component."""
    _dirac_check(u, abs(ch.k))
    return m * _dirac_D(u, abs(ch.k), ch.n_radial)


def dirac_coulomb_level_derivative(u: float, ch: DiracChannel, m: float = 1.0) -> float:
    if u == 0:
        if ch.n_radial > 0:
            return 0.0
        raise ValueError("derivative at u=0 not available for this channel")
    _dirac_check(u, abs(ch.k))
    return m * _dirac_D1(u, abs(ch.k), ch.n_radial)


def principal_quantum_number(ch: DiracChannel) -> float:
    """n = nu + |k_d| - (d-3)/2."""
    n = ch.nu + abs(ch.k) - (ch.d - 3) / 2
    return int(n) if float(n).is_integer() else n


def spectroscopic_label(ch: DiracChannel) -> str:
    """Label "n<letter>" with l = |k_d| - (d-1)/2; non-integer values are
    written out numerically."""
    n = principal_quantum_number(ch)
    ell = ch.ell
    if float(ell).is_integer() and 0 <= ell < len(SPECTROSCOPIC):
        return f"{n}{SPECTROSCOPIC[int(ell)]}"
    return f"{n}(l={ell:g})"


# ---------------------------------------------------------------------------
# Klein-Gordon

def _kg_check(u, ch):
    if u < 0:
        raise ValueError("coupling must be nonnegative")
    if u >= ch.u_critical:
        raise ValueError(f"supercritical coupling u={u} >= l_d + 1/2 = {ch.u_critical}")


def kg_coulomb_energy(u: float, ch: KGChannel, m: float = 1.0) -> float:
    _kg_check(u, ch)
    N = ch.nu + 0.5 + math.sqrt(ch.u_critical**2 - u * u)
    return m * (1.0 + (u / N) ** 2) ** -0.5


def kg_coulomb_energy_derivative(u: float, ch: KGChannel, m: float = 1.0) -> float:
    if u == 0:
        return 0.0
    _kg_check(u, ch)
    g = math.sqrt(ch.u_critical**2 - u * u)
    N = ch.nu + 0.5 + g
    X = (u / N) ** 2
    dX = 2 * u / N**2 + 2 * u**3 / (g * N**3)
    return -0.5 * m * (1.0 + X) ** -1.5 * dX


# ---------------------------------------------------------------------------
# spectral-function handles for the envelope code

@dataclass(frozen=True)
class CoulombSpectrum:
    """D(u) and D'(u) of one channel, labelled by node count."""

    channel: DiracChannel | KGChannel
    m: float = 1.0

    @property
    def equation(self) -> str:
        return "dirac" if isinstance(self.channel, DiracChannel) else "klein_gordon"

    @property
    def u_critical(self) -> float:
        return self.channel.u_critical

    def value(self, u: float) -> float:
        if self.equation == "dirac":
            return dirac_coulomb_level(u, self.channel, self.m)
        return kg_coulomb_energy(u, self.channel, self.m)

    def derivative(self, u: float) -> float:
        if self.equation == "dirac":
            return dirac_coulomb_level_derivative(u, self.channel, self.m)
        return kg_coulomb_energy_derivative(u, self.channel, self.m)

    def values(self, u) -> np.ndarray:
        return np.array([self.value(x) for x in np.atleast_1d(u)])
