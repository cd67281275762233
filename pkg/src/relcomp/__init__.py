"""Bound states of the radial Dirac and Klein-Gordon equations, Coulomb
spectra, envelope bounds and numerical checks of spectral comparison
theorems."""

from .analytic import (CoulombSpectrum, DiracChannel, KGChannel, dirac_coulomb_energy,
                       dirac_coulomb_energy_derivative, dirac_coulomb_level,
                       kg_coulomb_energy, principal_quantum_number, spectroscopic_label)
from ._shooting import (EigenResult, KGTrajectory, NoBoundState, NodeCountError,
                        RadialTrajectory, SolverConfig, SolverError)
from .dirac import integrate_dirac, solve_dirac
from .envelope import EnvelopeBound, optimize_bound, tangent_coefficients
from .kg import integrate_kg, solve_kg
from .potentials import (Coulomb, GaussianWell, Interpolated, MehtaPatil, PotentialModel,
                         ShiftedCoulomb, Sum, Tabulated, eval_potential, mehta_patil_params,
                         pointwise_leq, transform_of)

__version__ = "0.1.0"
