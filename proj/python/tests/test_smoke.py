import math

import pytest

import eprsim as e


def plane(deg):
    return e.UnitAxis.in_plane(math.radians(deg))


def test_singlet_and_fidelity():
    s = e.entangled_pair_state(1.2, 0.3, 0.3)
    r = 1 / math.sqrt(2)
    assert [abs(v - w) < 1e-12 for v, w in zip(s, [0, r, -r, 0])] == [True] * 4
    assert e.singlet_fidelity(e.entangled_pair_state(math.pi / 2, 0, math.pi / 2)) == pytest.approx(0.25)


def test_correlations_and_chsh():
    assert e.entangled_correlation(plane(0), plane(60)) == pytest.approx(-0.5)
    assert e.averaged_correlation(plane(0), plane(60), e.Geometry.PlanePhoton) == pytest.approx(-0.25)
    args = (plane(0), plane(90), plane(45), plane(135))
    assert e.chsh(e.Model.entangled(), e.Geometry.PlanePhoton, *args) == pytest.approx(2 * math.sqrt(2))
    assert e.chsh(e.Model.disentangled(), e.Geometry.PlanePhoton, *args) == pytest.approx(math.sqrt(2))


def test_conditional_collapse_trace():
    rho = e.conditional_collapse(e.UnitAxis(0.4, 1.0), e.Sign.Plus, 2)
    assert rho.trace().real == pytest.approx(0.5)
    with pytest.raises(ValueError):
        e.conditional_collapse(e.UnitAxis(0.4, 1.0), e.Sign.Plus, 3)


def test_monte_carlo_is_deterministic():
    pairs = [(plane(0), plane(60))]
    a = e.run_experiment(e.Model.entangled(), e.Geometry.Sphere3D, pairs, 200000, 7)
    b = e.run_experiment(e.Model.entangled(), e.Geometry.Sphere3D, pairs, 200000, 7, shards=2)
    assert a == b
    eh, se = e.estimate_correlation(*a[0])
    assert abs(eh + 0.5) < 4 * se


def test_synth_and_fit_round_trip():
    x = [i * math.pi / 6 for i in range(13)]
    data = e.synth_dataset(e.ExperimentKind.GisinPhase, e.Model.mixture(0.62), x, 100000, 11)
    fit = e.fit_mixture(e.ExperimentKind.GisinPhase, data)
    assert abs(fit["lambda_hat"] - 0.62) <= 0.05
    with pytest.raises(e.NonIdentifiableFit):
        e.fit_mixture(e.ExperimentKind.GisinPhase, data, fit_background=True)
