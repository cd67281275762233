import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from relcomp import Coulomb, DiracChannel, KGChannel, MehtaPatil, solve_dirac, solve_kg
from relcomp.analytic import CoulombSpectrum, dirac_coulomb_level
from relcomp.envelope import (EnvelopeError, classify_transform, energy_function, optimize_bound,
                              tangent_bound, tangent_coefficients, validate_kg_closed_form)
from relcomp.potentials import (GaussianWell, Sum, Tabulated, TransformFunction, eval_potential,
                                transform_of)

GROUND = DiracChannel(3, 0.5, -1, 0)


def test_tangent_of_line_is_line():
    for t in (0.1, 1.0, 30.0):
        assert tangent_coefficients(transform_of(Coulomb(0.4)), t) == (0.4, 0.0)
    with pytest.raises(ValueError):
        tangent_coefficients(transform_of(Coulomb(0.4)), 0.0)


def test_tangent_coefficients_mehta_patil():
    a, b = tangent_coefficients(transform_of(MehtaPatil(1.0, 1.0, 2.0)), 1.0)
    assert a == pytest.approx(0.875, abs=1e-15)
    assert b == pytest.approx(0.125, abs=1e-15)
    r = np.geomspace(1e-2, 1e2, 20001)
    gap = -a / r + b - MehtaPatil(1.0, 1.0, 2.0)(r)
    assert gap.min() >= -1e-15
    assert r[np.argmin(gap)] == pytest.approx(1.0, rel=1e-3)


@settings(max_examples=30, deadline=None)
@given(v=st.floats(0.05, 0.9), lam=st.floats(0.01, 3.0), Z=st.sampled_from([2, 8, 40]),
       t=st.floats(0.05, 50.0))
def test_tangent_majorizes_concave_model(v, lam, Z, t):
    model = MehtaPatil(v, lam, Z)
    a, b = tangent_coefficients(transform_of(model), t)
    r = np.geomspace(1e-3, 1e3, 2000)
    assert np.all(model(r) <= -a / r + b + 1e-12)
    assert float(eval_potential(model, t)) == pytest.approx(-a / t + b, abs=1e-8)


def test_energy_function_on_coulomb():
    D = CoulombSpectrum(GROUND)
    # value at u = v reduces to D(v)
    assert energy_function(0.5, D, Coulomb(0.5)) == pytest.approx(math.sqrt(0.75), abs=1e-15)
    u = np.linspace(0.05, 0.95, 91)
    F = [energy_function(x, D, Coulomb(0.5)) for x in u]
    assert u[int(np.argmin(F))] == pytest.approx(0.5, abs=1e-12)


def test_energy_function_unimodal_for_mehta_patil():
    D = CoulombSpectrum(GROUND)
    for model in (MehtaPatil(0.5, 0.2, 2), MehtaPatil(0.3, 0.05, 40)):
        F = np.array([energy_function(x, D, model) for x in np.linspace(0.01, 0.99, 300)])
        dF = np.sign(np.diff(F))
        assert np.count_nonzero(dF[1:] != dF[:-1]) == 1


def test_classification():
    h = (-50.0, -1e-3)
    assert classify_transform(transform_of(Coulomb(1)), h) == "linear"
    assert classify_transform(transform_of(MehtaPatil(0.5, 0.2, 2)), h) == "concave"
    confinement = TransformFunction(lambda x: -1 / x, lambda x: 1 / x**2, lambda x: -2 / x**3)
    assert classify_transform(confinement, h) == "convex"
    bumpy = transform_of(Sum((Coulomb(0.2), GaussianWell(0.3, 1.0))))
    assert classify_transform(bumpy, (-20.0, -0.05)) == "indefinite"


def test_indefinite_gives_no_bound():
    b = optimize_bound(Sum((Coulomb(0.2), GaussianWell(0.3, 1.0))), GROUND)
    assert b.kind == "none" and not b.claimed and b.diagnostic


@pytest.mark.parametrize("ch", [GROUND, DiracChannel(3, 0.5, -1, 1), DiracChannel(3, 0.5, 1, 0),
                                DiracChannel(5, 1.5, -1, 1)])
def test_exact_on_coulomb(ch):
    b = optimize_bound(Coulomb(0.5), ch)
    assert b.kind == "exact"
    assert b.bound_value == pytest.approx(dirac_coulomb_level(0.5, ch), abs=1e-8)
    assert b.u_star == pytest.approx(0.5, abs=1e-8)


def test_mehta_patil_upper_bound_and_consistency():
    model = MehtaPatil(0.5, 0.2, 2)
    b = optimize_bound(model, GROUND)
    E = solve_dirac(model, GROUND).energy
    assert b.kind == "upper" and E <= b.bound_value
    tf = transform_of(model)
    assert abs(b.u_star - float(tf.first(-1 / b.t_star))) <= 1e-6
    assert b.a_coeff == pytest.approx(b.u_star, abs=1e-6)
    D = CoulombSpectrum(GROUND)
    assert b.bound_value == pytest.approx(energy_function(b.u_star, D, model), abs=1e-15)
    ts = np.geomspace(0.05, 50, 32)
    F = np.array([tangent_bound(model, GROUND, t) for t in ts])
    assert np.all(E <= F + 2e-8)
    assert b.bound_value <= F.min() + 1e-8


def test_klein_gordon_bound():
    validate_kg_closed_form()
    model = MehtaPatil(0.3, 0.1, 8)
    ch = KGChannel(3, 0, 0)
    b = optimize_bound(model, ch, "klein_gordon")
    E = solve_kg(model, ch).energy
    assert b.kind == "upper"
    assert E > b.b_coeff  # the shifted comparison stays on the positive branch
    assert E <= b.bound_value


def test_kg_bound_preconditions():
    from relcomp.potentials import ShiftedCoulomb
    with pytest.raises(ValueError):
        optimize_bound(ShiftedCoulomb(0.2, 0.05), KGChannel(3, 0, 0))
    with pytest.raises(ValueError):
        optimize_bound(Coulomb(0.2), GROUND, "klein_gordon")


def test_convex_lower_bound():
    r = np.geomspace(1e-6, 40.0, 600)
    model = Tabulated.from_function(lambda x: 0.05 * x, r)
    b = optimize_bound(model, GROUND)
    assert b.kind == "lower" and b.heuristic
    assert b.t_star <= 20.0
    assert solve_dirac(model, GROUND).energy >= b.bound_value


def test_supercritical_range_has_no_optimum():
    with pytest.raises(EnvelopeError):
        optimize_bound(Coulomb(0.5), DiracChannel(2, 0.5, -1, 0))
