import numpy as np
import pytest

from relcomp import (Coulomb, KGChannel, MehtaPatil, ShiftedCoulomb, SolverConfig, integrate_kg,
                     solve_kg)
from relcomp.analytic import kg_coulomb_energy
from relcomp.potentials import GaussianWell, Interpolated

S = KGChannel(3, 0, 0)


def test_coulomb_ground_state():
    exact = kg_coulomb_energy(0.1, S)
    res = solve_kg(Coulomb(0.1), S)
    assert res.energy == pytest.approx(exact, abs=1e-6)
    assert res.energy == pytest.approx(0.9949356, abs=1e-6)
    assert res.nodes_found == 0


def test_integrate_at_eigenvalue():
    traj = integrate_kg(Coulomb(0.1), S, kg_coulomb_energy(0.1, S))
    assert abs(traj.log_derivative_mismatch) < 1e-6
    assert traj.node_count == 0


def test_free_equation_never_matches():
    for E in (0.2, 0.5, 0.9, 0.99):
        traj = integrate_kg(GaussianWell(0.0, 1.0), S, E)
        assert abs(traj.log_derivative_mismatch) > 1e-2


def test_centrifugal_term():
    assert S.Q == 0
    assert KGChannel(2, 0, 0).Q == -0.25


def test_deeper_coulomb_is_lower():
    assert solve_kg(Coulomb(0.3), S).energy < solve_kg(Coulomb(0.2), S).energy


def test_interpolated_family_nondecreasing():
    fam = Interpolated(Coulomb(0.3), Coulomb(0.2), 0.0)
    E = [solve_kg(fam.at(a), S).energy for a in (0, 0.25, 0.5, 0.75, 1)]
    assert all(b >= a - 2e-8 for a, b in zip(E, E[1:]))


def test_excited_states_and_nodes():
    for ch in (KGChannel(3, 0, 1), KGChannel(3, 1, 1), KGChannel(5, 2, 2)):
        res = solve_kg(MehtaPatil(0.4, 0.1, 8), ch)
        assert res.trajectory.node_count == ch.nu
        assert abs(res.trajectory.norm_check - 1) < 1e-6


def test_step_doubling():
    cfg = SolverConfig()
    a = solve_kg(MehtaPatil(0.4, 0.1, 8), KGChannel(3, 0, 1), cfg=cfg).energy
    b = solve_kg(MehtaPatil(0.4, 0.1, 8), KGChannel(3, 0, 1), cfg=cfg.with_(n_steps=16384)).energy
    assert abs(a - b) < cfg.e_tol


def test_shift_identity_holds_on_positive_branch():
    # E and V only enter through E - V, so a constant shift moves the level rigidly
    res = solve_kg(ShiftedCoulomb(0.2, -0.1), S)
    assert res.energy == pytest.approx(kg_coulomb_energy(0.2, S) - 0.1, abs=1e-8)


def test_positive_potential_rejected():
    with pytest.raises(ValueError):
        solve_kg(ShiftedCoulomb(0.2, 0.05), S)


def test_even_dimension_channel():
    # d=2, l=1 has l_d = 1/2, critical coupling 1
    ch = KGChannel(2, 1, 0)
    assert solve_kg(Coulomb(0.3), ch).energy == pytest.approx(kg_coulomb_energy(0.3, ch), abs=1e-7)
    assert np.isclose(ch.u_critical, 1.0)
