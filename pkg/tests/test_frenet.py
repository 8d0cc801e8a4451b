import math

import numpy as np
import pytest

from curvelab.curves import catalog_curve, load_samples, resample_csv
from curvelab.errors import InputError, KappaVanishes, NonRegularCurve
from curvelab.frenet import (
    arclength, frenet_apparatus, param_at_arclength, sample_uniform_arclength, total_length,
)
from conftest import fixture_samples
from oracles import closed_form_helix, fd_frenet


def _rows(a):
    return np.linalg.norm(a, axis=-1)


def test_helix_closed_form(helix_samples):
    k, tau = closed_form_helix(2, 1)
    np.testing.assert_allclose(helix_samples.kappa, k, atol=1e-12)
    np.testing.assert_allclose(helix_samples.tau, tau, atol=1e-12)
    assert helix_samples.length == pytest.approx(4 * math.pi * math.sqrt(5), rel=1e-13)
    np.testing.assert_allclose(np.diff(helix_samples.s), helix_samples.h, rtol=1e-12)


def test_frame_orthonormal_and_right_handed(fixture_label):
    S = fixture_samples(fixture_label)
    F = np.stack([S.T, S.N, S.B], axis=1)
    gram = F @ np.transpose(F, (0, 2, 1))
    assert np.max(np.abs(gram - np.eye(3))) <= 1e-12
    np.testing.assert_allclose(np.cross(S.T, S.N), S.B, atol=1e-12)


def test_frenet_serret_and_norm_identities(fixture_label):
    S = fixture_samples(fixture_label)
    k, t = S.kappa[:, None], S.tau[:, None]
    assert np.max(np.abs(S.dT - k * S.N)) <= 1e-9
    assert np.max(np.abs(S.dN - (-k * S.T + t * S.B))) <= 1e-9
    assert np.max(np.abs(S.dB - (-t * S.N))) <= 1e-9
    np.testing.assert_allclose(_rows(S.dT), S.kappa, atol=1e-9)
    np.testing.assert_allclose(_rows(S.dB), np.abs(S.tau), atol=1e-9)
    np.testing.assert_allclose(_rows(S.dN), _rows(S.W), atol=1e-9)
    np.testing.assert_allclose(_rows(S.W), np.hypot(S.kappa, S.tau), rtol=1e-12)


@pytest.mark.parametrize("name, params", [("twisted_cubic", ()), ("salkowski", (0.5,)), ("circular_helix", (1, -2))])
def test_against_finite_difference_oracle(name, params):
    curve = catalog_curve(name, params)
    position = lambda t: curve.position_jet(np.array([t]), 0).value[0]  # noqa: E731
    span = curve.t_max - curve.t_min
    for t in curve.t_min + span * np.array([0.1, 0.37, 0.5, 0.81]):
        sample = frenet_apparatus(curve, t)
        kappa, tau = fd_frenet(position, t, 1e-3 * span)
        assert sample.kappa == pytest.approx(kappa, rel=1e-6)
        assert sample.tau == pytest.approx(tau, rel=1e-5, abs=1e-7)


def test_arclength_and_inverse():
    circle = catalog_curve("circle", (1,))
    assert total_length(circle) == pytest.approx(2 * math.pi, abs=1e-13)
    helix = catalog_curve("circular_helix", (1, 1))
    assert total_length(helix) == pytest.approx(4 * math.pi * math.sqrt(2), abs=1e-12)
    assert param_at_arclength(helix, 0.0) == helix.t_min
    assert param_at_arclength(helix, total_length(helix)) == pytest.approx(helix.t_max, abs=1e-12)
    cubic = catalog_curve("twisted_cubic")
    s = np.linspace(0, total_length(cubic), 33)
    t = param_at_arclength(cubic, s)
    back = np.array([arclength(cubic, cubic.t_min, ti) for ti in t])
    np.testing.assert_allclose(back, s, atol=1e-11)
    with pytest.raises(InputError):
        arclength(cubic, 0.5, -0.5)


def test_sigma_of_salkowski_is_constant():
    S = fixture_samples("salkowski(0.5)")
    np.testing.assert_allclose(S.sigma, -0.5, atol=1e-10)


def test_sampled_helix_matches_closed_form():
    curve = load_samples(resample_csv(catalog_curve("circular_helix", (2, 1)), 2000), "helix")
    S = sample_uniform_arclength(curve, 256)
    assert not S.exact
    np.testing.assert_allclose(S.kappa, 0.4, atol=1e-3)
    np.testing.assert_allclose(S.tau, 0.2, atol=1e-3)


def test_degenerate_inputs():
    with pytest.raises(KappaVanishes, match="curvature vanishes"):
        sample_uniform_arclength(catalog_curve("line"), 64)
    with pytest.raises(InputError, match="n_samples below minimum"):
        sample_uniform_arclength(catalog_curve("circle", (1,)), 8)
    from curvelab.curves import CurveSpec
    cusp = CurveSpec.from_text("t^3", "t^2", "0", -1, 1, "cusp")
    with pytest.raises(NonRegularCurve):
        frenet_apparatus(cusp, 0.0)
    with pytest.raises(InputError):
        frenet_apparatus(catalog_curve("twisted_cubic"), 3.0)


def test_csv_output_is_stable(helix_samples):
    text = helix_samples.to_csv()
    assert text.splitlines()[0] == "s,t,Tx,Ty,Tz,Nx,Ny,Nz,Bx,By,Bz,kappa,tau"
    assert len(text.splitlines()) == 257
    assert text == sample_uniform_arclength(catalog_curve("circular_helix", (2, 1)), 256).to_csv()
