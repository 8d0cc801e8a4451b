"""Special-curve tests phrased through norms of Frenet-frame derivatives.

Each "X is constant" statement becomes a :class:`ConstancyReport`: the
profile of X over the samples, its relative spread and a verdict.
Dimensionless profiles (``tau/kappa``, ``sigma``, indicatrix ratios) use a
spread floor of 1, so a profile that is identically zero up to rounding is
reported as constant instead of dividing noise by noise.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InputError, PartnerTorsionUndefined
from .frenet import FrenetSamples
from .indicatrix import IndicatrixKind, indicatrix_frames

__all__ = [
    "ConstancyReport", "BertrandFit", "MannheimReport", "PartnerTorsion",
    "AntiSalkowskiLink", "ClassificationReport", "SCHEMA_VERSION",
    "constancy", "default_tol", "general_helix_test", "sigma_slant_test",
    "slant_via_tangent_indicatrix", "slant_via_binormal_indicatrix",
    "bertrand_fit", "mannheim_test", "mannheim_partner_torsion",
    "anti_salkowski_link", "classify",
]

SCHEMA_VERSION = 1
ANALYTIC_TOL = 1e-6
SAMPLED_TOL = 1e-2
DIMENSIONLESS_FLOOR = 1.0
MIN_PROFILE = 8
TAU_THRESHOLD = 1e-10


def default_tol(samples: FrenetSamples) -> float:
    return ANALYTIC_TOL if samples.exact else SAMPLED_TOL


@dataclass(frozen=True, eq=False)
class ConstancyReport:
    values: np.ndarray
    mean: float
    min: float
    max: float
    spread: float
    tol: float
    verdict: bool
    floor: float = 1e-30

    def to_dict(self):
        return {
            "mean": self.mean, "min": self.min, "max": self.max,
            "spread": self.spread, "tol": self.tol, "floor": self.floor,
            "verdict": self.verdict, "n": int(len(self.values)),
        }


def constancy(profile, tol: float, floor: float = 1e-30) -> ConstancyReport:
    """``spread = (max - min) / max(|mean|, floor)``; constant iff ``spread < tol``."""
    values = np.asarray(profile, dtype=float)
    if values.ndim != 1 or len(values) < MIN_PROFILE:
        raise InputError(f"constancy needs a 1-d profile of at least {MIN_PROFILE} values")
    if not np.all(np.isfinite(values)):
        raise InputError("profile contains NaN or infinite values")
    if not tol > 0:
        raise InputError("tolerance must be positive")
    mean = float(values.mean())
    lo, hi = float(values.min()), float(values.max())
    spread = (hi - lo) / max(abs(mean), floor)
    return ConstancyReport(values, mean, lo, hi, spread, float(tol), bool(spread < tol), float(floor))


def _norms(v):
    return np.linalg.norm(v, axis=-1)


def general_helix_test(samples: FrenetSamples, tol=None) -> ConstancyReport:
    """Constancy of ``|B'| / |T'|`` (equal to ``|tau| / kappa``)."""
    tol = default_tol(samples) if tol is None else tol
    return constancy(_norms(samples.dB) / _norms(samples.dT), tol, DIMENSIONLESS_FLOOR)


def sigma_slant_test(samples: FrenetSamples, tol=None) -> ConstancyReport:
    """Constancy of ``sigma = kappa^2 (kappa^2 + tau^2)^(-3/2) (tau/kappa)'``."""
    tol = default_tol(samples) if tol is None else tol
    return constancy(samples.sigma, tol, DIMENSIONLESS_FLOOR)


def _indicatrix_ratio_test(samples, kind, tol):
    tol = default_tol(samples) if tol is None else tol
    fr = indicatrix_frames(samples, kind)
    return constancy(_norms(fr.dB) / _norms(fr.dT), tol, DIMENSIONLESS_FLOOR)


def slant_via_tangent_indicatrix(samples: FrenetSamples, tol=None) -> ConstancyReport:
    """Constancy of ``|B~'| / |T~'|`` for the Frenet frame of the tangent indicatrix."""
    return _indicatrix_ratio_test(samples, IndicatrixKind.TANGENT, tol)


def slant_via_binormal_indicatrix(samples: FrenetSamples, tol=None) -> ConstancyReport:
    """Same ratio for the Frenet frame of the binormal indicatrix."""
    return _indicatrix_ratio_test(samples, IndicatrixKind.BINORMAL, tol)


@dataclass(frozen=True)
class BertrandFit:
    lambda_: float
    eta: float
    residual: float
    tol: float
    verdict: bool
    rank: int

    def to_dict(self):
        return {
            "lambda": self.lambda_, "eta": self.eta, "residual": self.residual,
            "tol": self.tol, "verdict": self.verdict, "rank": self.rank,
        }


def _min_norm_lstsq(A, b, rcond=1e-12):
    """Minimal-norm least squares via the (rank-revealing) normal equations."""
    M = A.T @ A
    rhs = A.T @ b
    w, V = np.linalg.eigh(M)
    keep = w > rcond * max(w.max(), 0.0)
    coef = V[:, keep] @ ((V[:, keep].T @ rhs) / w[keep])
    return coef, int(keep.sum())


def bertrand_fit(samples: FrenetSamples, tol=None) -> BertrandFit:
    """Least-squares ``lambda |T'| + eta |B'| = 1``; Bertrand iff the max residual is small."""
    if len(samples) < MIN_PROFILE:
        raise InputError(f"bertrand fit needs at least {MIN_PROFILE} samples")
    tol = default_tol(samples) if tol is None else tol
    A = np.column_stack([_norms(samples.dT), _norms(samples.dB)])
    coef, rank = _min_norm_lstsq(A, np.ones(len(A)))
    residual = float(np.max(np.abs(A @ coef - 1.0)))
    return BertrandFit(float(coef[0]), float(coef[1]), residual, float(tol), residual < tol, rank)


@dataclass(frozen=True, eq=False)
class MannheimReport:
    report: ConstancyReport
    lambda_: float
    darboux_defect: float

    @property
    def verdict(self):
        return self.report.verdict

    @property
    def darboux_consistent(self):
        """Does ``|N'|`` equal ``|W|`` within 1e-7 at every sample?"""
        return self.darboux_defect <= 1e-7

    def to_dict(self):
        return {
            **self.report.to_dict(),
            "lambda": self.lambda_,
            "darboux_defect": self.darboux_defect,
            "darboux_consistent": self.darboux_consistent,
        }


def mannheim_test(samples: FrenetSamples, tol=None) -> MannheimReport:
    """Constancy of ``|T'| / |W|^2`` (``= kappa / (kappa^2 + tau^2)``)."""
    tol = default_tol(samples) if tol is None else tol
    w = _norms(samples.W)
    if np.any(~(w > 1e-10)):
        raise InputError("Darboux vector vanishes; Mannheim profile undefined")
    report = constancy(_norms(samples.dT) / w**2, tol)
    defect = float(np.max(np.abs(_norms(samples.dN) - w)))
    return MannheimReport(report, report.mean, defect)


@dataclass(frozen=True, eq=False)
class PartnerTorsion:
    """Two routes to the torsion of a Mannheim partner at distance ``lam``.

    ``profile_a = kappa / (lam tau)`` from the curvature and torsion, and
    ``profile_b = |T~'| / (lam |B~'|)`` from the speeds of the tangent and
    binormal indicatrices, signed like ``tau`` (norms lose orientation).
    """

    lam: float
    profile_a: np.ndarray
    profile_b: np.ndarray

    @property
    def max_abs_diff(self):
        return float(np.max(np.abs(self.profile_a - self.profile_b)))


def mannheim_partner_torsion(samples: FrenetSamples, lam: float) -> PartnerTorsion:
    lam = float(lam)
    if lam == 0 or not np.isfinite(lam):
        raise InputError("partner distance lambda must be finite and non-zero")
    bad = np.flatnonzero(~(np.abs(samples.tau) > TAU_THRESHOLD))
    if bad.size:
        raise PartnerTorsionUndefined(float(samples.s[bad[0]]))
    a = samples.kappa / (lam * samples.tau)
    b = np.sign(samples.tau) * _norms(samples.dT) / (lam * _norms(samples.dB))
    return PartnerTorsion(lam, a, b)


@dataclass(frozen=True, eq=False)
class AntiSalkowskiLink:
    tau_star_constant: bool
    general_helix: bool
    tau_star_report: ConstancyReport

    @property
    def equivalent(self):
        return self.tau_star_constant == self.general_helix

    def to_dict(self):
        return {
            "tau_star_constant": self.tau_star_constant,
            "general_helix": self.general_helix,
            "equivalent": self.equivalent,
            "tau_star": self.tau_star_report.to_dict(),
        }


def anti_salkowski_link(samples: FrenetSamples, lam: float, tol=None) -> AntiSalkowskiLink:
    """Partner torsion constant (anti-Salkowski partner) versus general helix."""
    tol = default_tol(samples) if tol is None else tol
    partner = mannheim_partner_torsion(samples, lam)
    rep = constancy(partner.profile_a, tol)
    helix = general_helix_test(samples, tol)
    return AntiSalkowskiLink(rep.verdict, helix.verdict, rep)


# ---------------------------------------------------------------------------


def _clean(value):
    """JSON-safe float (NaN and infinities become null)."""
    if value is None:
        return None
    value = float(value)
    return value if np.isfinite(value) else None


@dataclass(frozen=True, eq=False)
class ClassificationReport:
    label: str
    n_samples: int
    exact: bool
    tol: float
    general_helix_report: ConstancyReport
    sigma_report: ConstancyReport
    tangent_indicatrix_report: Optional[ConstancyReport]
    binormal_indicatrix_report: Optional[ConstancyReport]
    bertrand: BertrandFit
    mannheim: MannheimReport
    partner: Optional[PartnerTorsion]
    notes: tuple = field(default_factory=tuple)

    @property
    def sigma_value(self):
        return self.sigma_report.mean if self.sigma_report.verdict else None

    @property
    def verdicts(self):
        return {
            "general_helix": self.general_helix_report.verdict,
            "slant_helix": self.sigma_report.verdict,
            "bertrand": self.bertrand.verdict,
            "mannheim": self.mannheim.verdict,
        }

    def to_dict(self):
        def rep(r):
            return None if r is None else r.to_dict()

        return {
            "schema_version": SCHEMA_VERSION,
            "label": self.label,
            "n_samples": self.n_samples,
            "source": "analytic" if self.exact else "sampled",
            "tol": self.tol,
            "verdicts": self.verdicts,
            "constants": {
                "lambda_bertrand": _clean(self.bertrand.lambda_),
                "eta_bertrand": _clean(self.bertrand.eta),
                "bertrand_residual": _clean(self.bertrand.residual),
                "lambda_mannheim": _clean(self.mannheim.lambda_),
                "sigma_value": _clean(self.sigma_value),
                "tau_star_lambda": None if self.partner is None else self.partner.lam,
                "tau_star_profile": None if self.partner is None
                else [_clean(v) for v in self.partner.profile_a],
            },
            "tests": {
                "general_helix": rep(self.general_helix_report),
                "sigma_slant": rep(self.sigma_report),
                "tangent_indicatrix_slant": rep(self.tangent_indicatrix_report),
                "binormal_indicatrix_slant": rep(self.binormal_indicatrix_report),
                "bertrand": self.bertrand.to_dict(),
                "mannheim": self.mannheim.to_dict(),
            },
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def classify(samples: FrenetSamples, tol=None, bertrand_tol=None, lam=None) -> ClassificationReport:
    """Run every test on ``samples``.

    Indicatrix tests that hit a degenerate indicatrix (a planar curve's
    binormal image is a point) are recorded as ``None`` with a note. The
    partner-torsion profile uses ``lam`` or, if omitted, the Mannheim
    constant, and is skipped where the torsion vanishes.
    """
    from .errors import DegeneracyError

    tol = default_tol(samples) if tol is None else float(tol)
    bertrand_tol = tol if bertrand_tol is None else float(bertrand_tol)
    notes = []
    indicatrix = {}
    for kind in (IndicatrixKind.TANGENT, IndicatrixKind.BINORMAL):
        try:
            indicatrix[kind] = _indicatrix_ratio_test(samples, kind, tol)
        except DegeneracyError as exc:
            indicatrix[kind] = None
            notes.append(str(exc))
    mannheim = mannheim_test(samples, tol)
    partner = None
    lam_used = mannheim.lambda_ if lam is None else lam
    try:
        partner = mannheim_partner_torsion(samples, lam_used)
    except (DegeneracyError, InputError) as exc:
        notes.append(f"partner torsion skipped: {exc}")
    return ClassificationReport(
        label=samples.label,
        n_samples=len(samples),
        exact=samples.exact,
        tol=tol,
        general_helix_report=general_helix_test(samples, tol),
        sigma_report=sigma_slant_test(samples, tol),
        tangent_indicatrix_report=indicatrix[IndicatrixKind.TANGENT],
        binormal_indicatrix_report=indicatrix[IndicatrixKind.BINORMAL],
        bertrand=bertrand_fit(samples, bertrand_tol),
        mannheim=mannheim,
        partner=partner,
        notes=tuple(notes),
    )
