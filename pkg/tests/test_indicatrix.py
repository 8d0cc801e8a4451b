import numpy as np
import pytest

from curvelab.errors import IndicatrixDegenerate, InputError
from curvelab.indicatrix import (
    IndicatrixKind, axis_locus, axis_tangency_test, darboux_axis_point, indicatrix_csv,
    indicatrix_frame, indicatrix_frames, indicatrix_points,
)
from conftest import fixture_samples


def test_kind_parsing():
    assert IndicatrixKind.parse("normal") is IndicatrixKind.PRINCIPAL_NORMAL
    assert IndicatrixKind.parse("Binormal") is IndicatrixKind.BINORMAL
    with pytest.raises(InputError):
        IndicatrixKind.parse("sideways")


@pytest.mark.parametrize("kind", list(IndicatrixKind))
def test_points_on_unit_sphere(fixture_label, kind):
    pts = indicatrix_points(fixture_samples(fixture_label), kind)
    np.testing.assert_allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-12)


def test_indicatrix_frames_are_orthonormal():
    S = fixture_samples("twisted_cubic")
    for kind in IndicatrixKind:
        F = indicatrix_frames(S, kind)
        M = np.stack([F.T, F.N, F.B], axis=1)
        np.testing.assert_allclose(M @ np.transpose(M, (0, 2, 1)), np.broadcast_to(np.eye(3), M.shape), atol=1e-12)
    # the tangent of the tangent indicatrix is the curve's principal normal
    tangent = indicatrix_frames(S, "tangent")
    np.testing.assert_allclose(tangent.T, S.N, atol=1e-12)
    np.testing.assert_allclose(tangent.speed, S.kappa, rtol=1e-12)
    single = indicatrix_frame(S, "binormal", -1)
    np.testing.assert_allclose(single.B, indicatrix_frames(S, "binormal").B[-1], atol=1e-14)


def test_binormal_indicatrix_of_circle_is_degenerate():
    with pytest.raises(IndicatrixDegenerate):
        indicatrix_frames(fixture_samples("circle(1)"), "binormal")


def test_indicatrix_csv():
    text = indicatrix_csv(fixture_samples("salkowski(0.5)"), "tangent")
    lines = text.splitlines()
    assert lines[0] == "s,x,y,z" and len(lines) == 257


def test_axis_locus_on_helix_is_the_axis():
    S = fixture_samples("circular_helix(2,1)")
    locus = axis_locus(S)
    # the screw axis of a circular helix is offset from the curve by kappa/(kappa^2+tau^2) = 2
    np.testing.assert_allclose(locus.P[:, :2], 0.0, atol=1e-12)
    assert np.nanmax(locus.line_angle) < 1e-12
    assert locus.fd_defect < 1e-8
    p = darboux_axis_point(S[10])
    np.testing.assert_allclose(p.P, locus.P[10], atol=1e-14)
    assert p.line_angle < 1e-12


def test_axis_verdicts_match_mannheim_everywhere(fixture_label):
    report = axis_tangency_test(fixture_samples(fixture_label))
    assert report.consistent
    assert report.fd_defect < 1e-6


def test_axis_examples():
    helix = axis_tangency_test(fixture_samples("circular_helix(2,1)"))
    assert helix.verdict and helix.max_angle < 1e-6
    assert not axis_tangency_test(fixture_samples("twisted_cubic")).verdict
    circle = axis_tangency_test(fixture_samples("circle(1)"))
    assert circle.verdict and "stationary" in circle.note and circle.stationary_count == 256
    assert circle.to_dict()["max_angle"] is None
