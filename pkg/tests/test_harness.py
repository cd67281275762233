import json
from pathlib import Path

import numpy as np
import pytest

from relcomp import Coulomb, DiracChannel, KGChannel, MehtaPatil, NoBoundState
from relcomp.analytic import dirac_coulomb_level
from relcomp.envelope import optimize_bound
from relcomp.harness import (PairSpec, compare_pairs, monotonicity_suite, sample_ordered_pairs,
                             theorem2_suite, verify_comparison, verify_monotonicity)
from relcomp.potentials import Interpolated, pointwise_leq, to_spec

GOLDEN = Path(__file__).parent / "golden"
G0, G1 = DiracChannel(3, 0.5, -1, 0), DiracChannel(3, 0.5, -1, 1)


def test_sampler_golden():
    pairs = [[to_spec(a), to_spec(b)] for a, b in sample_ordered_pairs(42, 1)]
    assert pairs == json.loads((GOLDEN / "pairs_seed42_n1.json").read_text())


def test_sampler_basics():
    assert sample_ordered_pairs(1, 0) == []
    a, b = sample_ordered_pairs(5, 30), sample_ordered_pairs(5, 30)
    assert a == b
    for lo, hi in a:
        assert pointwise_leq(lo, hi)
    kinds = {type(lo).__name__ for lo, _ in a}
    assert kinds == {"Coulomb", "MehtaPatil", "Sum"}
    with pytest.raises(ValueError):
        sample_ordered_pairs(0, 1, PairSpec(kinds=("nope",)))


def test_coulomb_pair_energies():
    rep = verify_comparison(Coulomb(0.5), Coulomb(0.4), [G0, G1])
    assert rep.passed
    got = [(r["E1"], r["E2"]) for r in rep.rows]
    want = [(dirac_coulomb_level(u1, c), dirac_coulomb_level(u2, c)) for c in (G0, G1)
            for u1, u2 in [(0.5, 0.4)]]
    assert np.allclose(got, want, atol=1e-6)
    assert np.allclose(want, [(0.8660254, 0.9165151), (0.9659258, 0.9789063)], atol=1e-7)


def test_equal_potentials_have_zero_gap():
    rep = verify_comparison(Coulomb(0.3), Coulomb(0.3), [G0, G1])
    assert rep.passed and all(r["gap"] == 0 for r in rep.rows)


def test_unordered_pair_rejected():
    with pytest.raises(ValueError):
        verify_comparison(Coulomb(0.3), Coulomb(0.4), [G0])


def test_tangent_pair():
    model = MehtaPatil(0.5, 0.2, 2)
    b = optimize_bound(model, G0)
    rep = verify_comparison(model, b.tangent(), [G0])
    assert rep.passed
    assert rep.rows[0]["E2"] == pytest.approx(dirac_coulomb_level(b.a_coeff, G0) + b.b_coeff, abs=1e-8)


def test_nonexistence_is_excluded_not_violated():
    from relcomp import SolverConfig
    cfg = SolverConfig(e_bracket=(-0.99, 0.9))
    rep = verify_comparison(Coulomb(0.5), Coulomb(0.4), [G0], cfg=cfg)
    assert rep.passed and len(rep.excluded) == 1 and not rep.rows


def test_monotonicity_examples():
    fam = Interpolated(Coulomb(0.5), Coulomb(0.4), 0.0)
    rep = verify_monotonicity(fam, [G0])
    assert rep.passed and len(rep.a_grid) == 9
    E = rep.energies[str(G0)]
    assert E[0] == pytest.approx(np.sqrt(0.75), abs=1e-6)
    assert E[-1] == pytest.approx(np.sqrt(1 - 0.16), abs=1e-6)
    assert verify_monotonicity(fam, [G0], a_grid=[0.3]).passed
    kg = verify_monotonicity(Interpolated(Coulomb(0.3), Coulomb(0.1), 0.0), [KGChannel(3, 0, 0)],
                             "klein_gordon")
    assert kg.passed and min(kg.energies["d=3 l=0 nu=0"]) > 0


def test_parametric_family():
    rep = verify_monotonicity(lambda a: MehtaPatil(0.4, 0.1 + a, 8), [G0], a_grid=[0, 0.5, 1])
    assert rep.passed and rep.family["kind"] == "parametric"
    with pytest.raises(ValueError):
        verify_monotonicity(lambda a: Coulomb(0.1 + 0.3 * a), [G0], a_grid=[0, 1])


def test_reports_deterministic():
    a = theorem2_suite(seed=11, n_pairs=2).to_json()
    b = theorem2_suite(seed=11, n_pairs=2).to_json()
    assert a == b and "elapsed" not in json.loads(a)
    s = monotonicity_suite("dirac", seed=3, n_families=1, a_points=3)
    assert s.passed and s.to_json() == monotonicity_suite("dirac", seed=3, n_families=1,
                                                          a_points=3).to_json()
    assert "PASS" in s.to_text()


def test_kg_suite_small():
    rep = compare_pairs(sample_ordered_pairs(9, 3), [KGChannel(3, 0, 0)], "klein_gordon")
    assert rep.passed and rep.rows
