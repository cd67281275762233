import json
import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from relcomp.potentials import (FINE_STRUCTURE, Coulomb, GaussianWell, Interpolated, MehtaPatil,
                                ShiftedCoulomb, Sum, Tabulated, default_grid, eval_potential,
                                from_spec, is_attractive, mehta_patil_params, parse_inline,
                                pointwise_leq, to_spec, transform_of)
from relcomp.envelope import tangent_coefficients


def mehta_patil_symbolic(v, lam, Z, r):
    # independent evaluation in exact rationals
    v, lam, Z, r = map(sp.nsimplify, (v, lam, Z, r))
    return float(-(v / r) * (1 - (1 - 1 / Z) * lam * r / (1 + lam * r)))


def test_coulomb_value():
    assert eval_potential(Coulomb(0.5), 2.0) == -0.25


def test_mehta_patil_value():
    # frozen from the symbolic oracle
    assert mehta_patil_symbolic(0.5, 1, 2, 1) == -0.375
    assert eval_potential(MehtaPatil(0.5, 1.0, 2.0), 1.0) == pytest.approx(-0.375, abs=1e-15)


@pytest.mark.parametrize("v,lam,Z,r", [(0.3, 0.2, 8, 0.7), (0.9, 2.0, 40, 13.0), (0.1, 0.01, 1, 1e-3)])
def test_mehta_patil_matches_symbolic(v, lam, Z, r):
    assert eval_potential(MehtaPatil(v, lam, Z), r) == pytest.approx(
        mehta_patil_symbolic(v, lam, Z, r), rel=1e-14)


def test_rejects_bad_radius():
    with pytest.raises(ValueError):
        eval_potential(Coulomb(1.0), 0.0)
    with pytest.raises(ValueError):
        eval_potential(Coulomb(1.0), [1.0, -1.0])
    tab = Tabulated([1.0, 2.0, 3.0], [-3.0, -2.0, -1.0])
    with pytest.raises(ValueError):
        eval_potential(tab, 3.5)
    assert eval_potential(tab, 1.5) == -2.5


def test_tabulated_needs_increasing_nodes():
    with pytest.raises(ValueError):
        Tabulated([1.0, 1.0, 2.0], [0.0, 0.0, 0.0])


def test_mehta_patil_params():
    v, lam = mehta_patil_params(1, 1 / 137.035999)
    assert v == pytest.approx(0.0072974, abs=5e-8)
    assert lam == pytest.approx(0.0071514, abs=5e-8)
    assert mehta_patil_params(1, 1.0) == (1.0, 0.98)
    v, lam = mehta_patil_params(8, 1.0)
    assert v == 8 and lam == pytest.approx(1.96, rel=1e-15)
    assert mehta_patil_params(1)[0] == FINE_STRUCTURE


def test_interpolated_endpoints_exact():
    lo, hi = MehtaPatil(0.4, 0.3, 2), Coulomb(0.2)
    r = default_grid()
    assert np.array_equal(Interpolated(lo, hi, 0.0)(r), lo(r))
    assert np.array_equal(Interpolated(lo, hi, 1.0)(r), hi(r))


@settings(max_examples=40, deadline=None)
@given(u1=st.floats(0.05, 0.9), frac=st.floats(0.0, 1.0), a=st.floats(0.0, 1.0), b=st.floats(0.0, 1.0))
def test_interpolation_monotone_in_a(u1, frac, a, b):
    lo, hi = Coulomb(u1), MehtaPatil(u1 * frac + 1e-3, 0.5, 8)
    if not pointwise_leq(lo, hi):
        return
    a, b = sorted((a, b))
    r = default_grid()
    fam = Interpolated(lo, hi, 0.0)
    assert np.all(fam.at(a)(r) <= fam.at(b)(r) + 1e-15)


def test_attractive_models():
    for m in (Coulomb(0.3), ShiftedCoulomb(0.3, -0.1), MehtaPatil(0.3, 0.5, 8)):
        assert is_attractive(m)
    assert not is_attractive(ShiftedCoulomb(0.3, 0.1))


def test_pointwise_leq():
    assert pointwise_leq(Coulomb(0.5), Coulomb(0.4))
    order = pointwise_leq(Coulomb(0.4), Coulomb(0.5))
    assert not order and order.witness > 0


def test_transform_closed_forms():
    tf = transform_of(Coulomb(0.7))
    assert tf.value(-2.0) == -1.4 and tf.first(-2.0) == 0.7 and tf.second(-2.0) == 0.0
    inf = transform_of(MehtaPatil(1.0, 1.0, math.inf))
    assert inf.value(-1.0) == pytest.approx(-0.5, abs=1e-15)
    tf = transform_of(MehtaPatil(1.0, 1.0, 2.0))
    assert tf.second(-1.0) == pytest.approx(-0.125, abs=1e-15)
    with pytest.raises(ValueError):
        tf.value(0.0)


@settings(max_examples=25, deadline=None)
@given(v=st.floats(0.01, 2.0), lam=st.floats(0.01, 5.0), Z=st.sampled_from([2, 8, 20, 40, math.inf]))
def test_mehta_patil_transform_concave_and_increasing(v, lam, Z):
    tf = transform_of(MehtaPatil(v, lam, Z))
    h = np.linspace(-50, -1e-3, 1000)
    assert np.all(tf.second(h) < 0)
    assert np.all(tf.first(h) > 0)


@pytest.mark.parametrize("model", [MehtaPatil(0.5, 0.2, 2), MehtaPatil(0.9, 3.0, 40),
                                   ShiftedCoulomb(0.4, -0.2)])
def test_transform_derivatives_match_finite_differences(model):
    tf = transform_of(model)
    for h in (-20.0, -3.0, -0.7, -0.05):
        s = 1e-5 * abs(h)
        d1 = (tf.value(h + s) - tf.value(h - s)) / (2 * s)
        d2 = (tf.first(h + s) - tf.first(h - s)) / (2 * s)
        assert tf.first(h) == pytest.approx(d1, rel=1e-6)
        assert tf.second(h) == pytest.approx(d2, rel=1e-6, abs=1e-12)


def test_transform_reproduces_potential():
    model = MehtaPatil(0.5, 0.2, 2)
    tf = transform_of(model)
    r = np.geomspace(1e-2, 1e2, 50)
    assert np.allclose(tf.value(-1 / r), model(r), rtol=1e-13)


def test_numeric_transform_of_tabulated():
    r = np.geomspace(1e-3, 50, 400)
    tab = Tabulated.from_function(lambda x: 0.05 * x, r)
    tf = transform_of(tab)
    assert not tf.analytic
    for h in (-10.0, -1.0, -0.2):
        assert tf.first(h) == pytest.approx(0.05 / h**2, rel=1e-6)
        assert tf.second(h) == pytest.approx(-0.1 / h**3, rel=1e-5)


def test_tangent_majorizes_mehta_patil():
    model = MehtaPatil(1.0, 1.0, 2.0)
    a, b = tangent_coefficients(transform_of(model), 1.0)
    assert (a, b) == (pytest.approx(0.875, abs=1e-15), pytest.approx(0.125, abs=1e-15))
    assert pointwise_leq(model, ShiftedCoulomb(a, b), grid=np.geomspace(1e-2, 1e2, 4001))


def test_spec_roundtrip(tmp_path):
    csv = tmp_path / "tab.csv"
    csv.write_text("r,V\n0.5,-2\n1,-1\n2,-0.5\n")
    models = [Coulomb(0.5), ShiftedCoulomb(0.3, -0.1), MehtaPatil(0.5, 0.2, math.inf),
              GaussianWell(0.1, 2.0), Sum((Coulomb(0.2), GaussianWell(0.1, 1.0))),
              Interpolated(Coulomb(0.5), MehtaPatil(0.5, 0.2, 2), 0.25),
              Tabulated.from_csv(csv)]
    r = np.array([0.6, 1.0, 1.7])
    for m in models:
        again = from_spec(json.loads(json.dumps(to_spec(m))))
        assert np.array_equal(again(r), m(r))
    spec = {"kind": "tabulated", "path": "tab.csv"}
    assert np.array_equal(from_spec(spec, base_dir=tmp_path)(r), models[-1](r))


def test_parse_inline():
    m = parse_inline("mehta_patil:v=0.5,lam=0.2,Z=2")
    assert m == MehtaPatil(0.5, 0.2, 2.0)
    with pytest.raises(ValueError):
        parse_inline("coulomb:v")
    with pytest.raises(ValueError):
        parse_inline("coulomb:v=0.5,w=1")
