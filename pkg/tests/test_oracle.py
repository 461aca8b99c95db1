import numpy as np
import pytest

from slet import engine, oracle, potentials
from slet.errors import OracleError


def test_effective_potential_examples():
    assert oracle.effective_potential(3, 1, potentials.coulomb(), 1.0) == \
        pytest.approx(0.0, abs=1e-15)
    free = potentials.expression("0*r")
    assert oracle.effective_potential(2, 0, free, 2.0) == pytest.approx(-1.0 / 16.0)
    linear = potentials.power(1.0, 1.0)
    assert oracle.effective_potential(3, 0, linear, 3.0) == pytest.approx(3.0)


def test_effective_potential_vectorized():
    r = np.array([0.5, 1.0, 2.0])
    got = oracle.effective_potential(3, 2, potentials.coulomb(), r)
    assert np.allclose(got, 6.0 / r**2 - 2.0 / r)
    with pytest.raises(ValueError):
        oracle.effective_potential(4, 0, potentials.coulomb(), 1.0)


def test_config_validation():
    with pytest.raises(ValueError):
        oracle.OracleConfig(box_radius=0.0)
    with pytest.raises(ValueError):
        oracle.OracleConfig(grid_points=50)
    with pytest.raises(ValueError):
        oracle.OracleConfig(eig_tol=0.0)
    with pytest.raises(ValueError):
        oracle.eigenvalue(3, 0, -1, potentials.coulomb())


def test_adaptive_config_shrinks_box_with_field():
    assert oracle.for_potential(potentials.donor(100.0, 0)).box_radius == 5.0
    assert oracle.for_potential(potentials.donor(4.0, 0)).box_radius == 6.0
    assert oracle.for_potential(potentials.donor(0.01, 0)).box_radius == 40.0
    assert oracle.for_potential(potentials.donor(0.0, 0)).box_radius == 40.0
    assert oracle.for_potential(potentials.coulomb()).box_radius == 40.0
    assert oracle.for_potential(potentials.coulomb(), eig_tol=1e-8).eig_tol == 1e-8


def test_escaped_index_raises():
    cfg = oracle.OracleConfig(grid_points=100, convergence_check=False)
    with pytest.raises(OracleError):
        oracle.eigenvalue(3, 0, 100, potentials.coulomb(), cfg)


def test_non_finite_effective_potential_raises():
    pot = potentials.expression("ln(r - 20)")
    cfg = oracle.OracleConfig(grid_points=100, convergence_check=False)
    with pytest.raises(OracleError):
        oracle.eigenvalue(3, 0, 0, pot, cfg)


def test_skipping_convergence_check_is_explicit_in_the_result():
    cfg = oracle.OracleConfig(grid_points=500, convergence_check=False)
    res = oracle.eigenvalue(3, 0, 0, potentials.coulomb(), cfg)
    assert res.energy_refined == res.energy
    assert res.box_shift == 0.0
    assert res.converged is False
    assert res.energy_extrapolated == pytest.approx(res.energy, rel=1e-15)


def test_hydrogen_ground_state():
    cfg = oracle.OracleConfig(box_radius=40.0, grid_points=8000)
    res = oracle.eigenvalue(3, 0, 0, potentials.coulomb(), cfg)
    assert res.energy == pytest.approx(-1.0, abs=1e-4)
    assert res.energy_extrapolated == pytest.approx(-1.0, abs=1e-5)
    assert res.converged


def test_linear_potential_ground_state():
    # reduced equation -u'' + r u = E u: lowest level at the first Airy root
    cfg = oracle.OracleConfig(box_radius=30.0, grid_points=6000)
    res = oracle.eigenvalue(3, 0, 0, potentials.power(1.0, 1.0), cfg)
    assert res.energy == pytest.approx(2.33811, abs=1e-4)
    assert res.energy_extrapolated == pytest.approx(2.3381074, abs=1e-5)
    assert res.converged


def test_levels_increase_with_node_count():
    cfg = oracle.OracleConfig(grid_points=2000, convergence_check=False)
    es = [oracle.eigenvalue(3, 0, k, potentials.coulomb(), cfg).energy
          for k in range(3)]
    assert es[0] < es[1] < es[2]
    assert es[1] == pytest.approx(-0.25, abs=1e-3)
    assert es[2] == pytest.approx(-1.0 / 9.0, abs=1e-3)


def test_second_order_grid_convergence():
    cases = [
        (potentials.coulomb(), 40.0, -1.0),
        (potentials.harmonic(2.0), 15.0, 3.0),
    ]
    for pot, radius, exact in cases:
        errs = []
        for n in (1000, 2000):
            cfg = oracle.OracleConfig(box_radius=radius, grid_points=n,
                                      eig_tol=1e-9, convergence_check=False)
            errs.append(oracle.eigenvalue(3, 0, 0, pot, cfg).energy - exact)
        ratio = errs[0] / errs[1]
        assert 2.5 < ratio < 6.0, (pot.family, errs)


def test_small_box_is_reported_unconverged():
    # the n=2 hydrogen state reaches far beyond a 6-Bohr box; the box
    # doubling run must expose that instead of quietly returning garbage
    cfg = oracle.OracleConfig(box_radius=6.0, grid_points=1000)
    res = oracle.eigenvalue(3, 0, 1, potentials.coulomb(), cfg)
    assert not res.converged
    assert abs(res.box_shift) > cfg.eig_tol


def test_zero_field_donor_honesty():
    # m=0 carries the attractive -1/(4 rho^2) centrifugal term; the 3-point
    # scheme converges too slowly there and must say so
    res = oracle.eigenvalue(2, 0, 0, potentials.donor(0.0, 0))
    assert not res.converged
    # |m|=1 converges fine and lands on the -(n+|m|+1/2)^-2 spectrum
    res = oracle.eigenvalue(2, 1, 0, potentials.donor(0.0, 1))
    assert res.energy_extrapolated == pytest.approx(-4.0 / 9.0, abs=1e-4)


@pytest.mark.parametrize("pot,cases", [
    (potentials.coulomb(), [(0, 0), (1, 0), (0, 1)]),
    (potentials.harmonic(2.0), [(0, 0), (1, 0), (0, 1)]),
])
def test_expansion_matches_oracle_on_exact_families(pot, cases):
    for l, n in cases:
        cfg = oracle.OracleConfig(eig_tol=1e-9)
        res = oracle.eigenvalue(3, l, n, pot, cfg)
        br = engine.solve(engine.SletProblem(3, l, n, pot))
        assert br.E_total == pytest.approx(res.energy_extrapolated, rel=1e-8)


@pytest.mark.parametrize("pot", [
    potentials.power(1.0, 1.0),
    potentials.log_potential(1.0, 1.0),
])
def test_expansion_tracks_oracle_on_generic_confining_potentials(pot):
    cfg = oracle.OracleConfig(convergence_check=False)
    for l in range(3):
        for n in range(3):
            res = oracle.eigenvalue(3, l, n, pot, cfg)
            br = engine.solve(engine.SletProblem(3, l, n, pot))
            assert br.E_total == pytest.approx(res.energy, rel=5e-3), (l, n)
