import json

import numpy as np
import pytest

from curvelab.classify import (
    anti_salkowski_link, bertrand_fit, classify, constancy, general_helix_test,
    mannheim_partner_torsion, mannheim_test, sigma_slant_test, slant_via_binormal_indicatrix,
    slant_via_tangent_indicatrix,
)
from curvelab.errors import InputError, PartnerTorsionUndefined
from conftest import fixture_samples


def test_constancy_report():
    rep = constancy(np.full(10, 3.0), 1e-6)
    assert rep.verdict and rep.spread == 0.0 and rep.mean == 3.0
    rep = constancy(np.linspace(1.0, 1.1, 10), 1e-6)
    assert not rep.verdict and rep.spread == pytest.approx(0.1 / 1.05)
    # a zero profile with rounding noise is constant once the floor applies
    noise = np.array([0, 1e-17, -1e-17, 0, 0, 2e-17, 0, 0])
    assert not constancy(noise, 1e-6).verdict
    assert constancy(noise, 1e-6, floor=1.0).verdict
    for bad in (np.ones(5), np.array([1.0] * 7 + [np.nan])):
        with pytest.raises(InputError):
            constancy(bad, 1e-6)


@pytest.mark.parametrize("label, expected", [
    ("circular_helix(2,1)", True),
    ("circle(1)", True),
    ("twisted_cubic", False),
    ("salkowski(0.5)", False),
    ("anti_salkowski(0.5)", False),
])
def test_general_helix(label, expected):
    S = fixture_samples(label)
    rep = general_helix_test(S)
    assert rep.verdict is expected
    np.testing.assert_allclose(rep.values, np.abs(S.tau) / S.kappa, atol=1e-9)
    if not expected:
        assert rep.spread > 0.1


def test_twisted_cubic_fails_everything():
    report = classify(fixture_samples("twisted_cubic"))
    assert report.verdicts == {"general_helix": False, "slant_helix": False, "bertrand": False, "mannheim": False}


def test_slant_helix_triple_agreement():
    for label in ("circular_helix(2,1)", "twisted_cubic", "salkowski(0.5)", "anti_salkowski(0.5)"):
        S = fixture_samples(label)
        sigma = sigma_slant_test(S)
        tan = slant_via_tangent_indicatrix(S)
        bin_ = slant_via_binormal_indicatrix(S)
        assert sigma.verdict == tan.verdict == bin_.verdict
        # both indicatrix ratios equal |sigma| pointwise
        np.testing.assert_allclose(tan.values, np.abs(S.sigma), atol=1e-10)
        np.testing.assert_allclose(bin_.values, np.abs(S.sigma), atol=1e-10)
    assert sigma_slant_test(fixture_samples("salkowski(0.5)")).spread < 1e-6


def test_bertrand_fit_matches_dense_lstsq_oracle():
    for label in ("circular_helix(2,1)", "twisted_cubic", "salkowski(0.5)", "circle(1)"):
        S = fixture_samples(label)
        fit = bertrand_fit(S)
        A = np.column_stack([S.kappa, np.abs(S.tau)])
        coef, *_ = np.linalg.lstsq(A, np.ones(len(S)), rcond=1e-6)
        assert fit.lambda_ == pytest.approx(coef[0], abs=1e-8)
        assert fit.eta == pytest.approx(coef[1], abs=1e-8)
    helix = bertrand_fit(fixture_samples("circular_helix(2,1)"))
    assert helix.residual < 1e-8 and helix.rank == 1
    assert 0.4 * helix.lambda_ + 0.2 * helix.eta == pytest.approx(1.0, abs=1e-12)
    assert (helix.lambda_, helix.eta) == (pytest.approx(2.0), pytest.approx(1.0))
    circle = bertrand_fit(fixture_samples("circle(1)"))
    assert (circle.lambda_, circle.eta) == (pytest.approx(1.0), pytest.approx(0.0, abs=1e-12))
    assert bertrand_fit(fixture_samples("twisted_cubic")).residual > 1e-3


def test_mannheim():
    rep = mannheim_test(fixture_samples("circular_helix(2,1)"))
    assert rep.verdict and rep.lambda_ == pytest.approx(2.0, abs=1e-12)
    assert rep.report.spread < 1e-8 and rep.darboux_consistent
    assert not mannheim_test(fixture_samples("twisted_cubic")).verdict


@pytest.mark.parametrize("label", ["circular_helix(2,1)", "salkowski(0.5)", "anti_salkowski(0.5)", "twisted_cubic"])
def test_partner_torsion_formulas_agree(label):
    partner = mannheim_partner_torsion(fixture_samples(label), 2.0)
    assert partner.max_abs_diff < 1e-9


def test_partner_torsion_on_helix_and_errors():
    partner = mannheim_partner_torsion(fixture_samples("circular_helix(2,1)"), 2.0)
    np.testing.assert_allclose(partner.profile_a, 1.0, atol=1e-12)
    with pytest.raises(InputError):
        mannheim_partner_torsion(fixture_samples("circular_helix(2,1)"), 0.0)
    with pytest.raises(PartnerTorsionUndefined):
        mannheim_partner_torsion(fixture_samples("circle(1)"), 1.0)


@pytest.mark.parametrize("label", ["circular_helix(2,1)", "salkowski(0.5)", "anti_salkowski(0.5)", "twisted_cubic"])
def test_anti_salkowski_link(label):
    link = anti_salkowski_link(fixture_samples(label), 1.5)
    assert link.equivalent


def test_report_json_schema():
    report = classify(fixture_samples("salkowski(0.5)"))
    data = json.loads(report.to_json())
    assert data["schema_version"] == 1
    assert data["verdicts"]["general_helix"] is False and data["verdicts"]["slant_helix"] is True
    assert data["constants"]["sigma_value"] == pytest.approx(-0.5, abs=1e-9)
    assert len(data["constants"]["tau_star_profile"]) == 256
    circle = classify(fixture_samples("circle(1)")).to_dict()
    assert circle["tests"]["binormal_indicatrix_slant"] is None
    assert any("binormal" in note for note in circle["notes"])
    assert circle["constants"]["tau_star_profile"] is None
