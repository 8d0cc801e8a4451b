"""Spherical indicatrices and the locus of the Darboux screw axis.

Indicatrix frames are differentiated with respect to the *base* curve's
arclength. Ratios of derivative norms are unaffected by that choice.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _fd
from .errors import DegeneracyError, IndicatrixDegenerate, InputError
from .frenet import FrenetSample, FrenetSamples, frame_jets, vcross, vdot

__all__ = [
    "IndicatrixKind", "IndicatrixFrame", "IndicatrixFrames",
    "indicatrix_points", "indicatrix_frame", "indicatrix_frames",
    "AxisLocusSample", "AxisLocus", "AxisTangencyReport",
    "darboux_axis_point", "axis_locus", "axis_tangency_test",
]

INDICATRIX_THRESHOLD = 1e-10
STATIONARY_THRESHOLD = 1e-9


class IndicatrixKind(str, Enum):
    TANGENT = "tangent"
    PRINCIPAL_NORMAL = "principal_normal"
    BINORMAL = "binormal"

    @classmethod
    def parse(cls, text):
        if isinstance(text, cls):
            return text
        aliases = {"normal": cls.PRINCIPAL_NORMAL, "principal-normal": cls.PRINCIPAL_NORMAL}
        key = str(text).strip().lower()
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise InputError(f"unknown indicatrix kind {text!r}") from None


def indicatrix_points(samples: FrenetSamples, kind) -> np.ndarray:
    """Points of the tangent, normal or binormal image on the unit sphere."""
    kind = IndicatrixKind.parse(kind)
    return {
        IndicatrixKind.TANGENT: samples.T,
        IndicatrixKind.PRINCIPAL_NORMAL: samples.N,
        IndicatrixKind.BINORMAL: samples.B,
    }[kind].copy()


@dataclass(frozen=True)
class IndicatrixFrame:
    kind: IndicatrixKind
    s: float
    T: np.ndarray
    N: np.ndarray
    B: np.ndarray
    dT: np.ndarray
    dN: np.ndarray
    dB: np.ndarray
    speed: float


@dataclass(frozen=True, eq=False)
class IndicatrixFrames:
    """Frenet frames of an indicatrix at every sample, as ``(n, 3)`` arrays.

    ``dT``, ``dN``, ``dB`` are derivatives with respect to the base curve's
    arclength; ``speed`` is the indicatrix's speed in that parameter.
    """

    kind: IndicatrixKind
    s: np.ndarray
    T: np.ndarray
    N: np.ndarray
    B: np.ndarray
    dT: np.ndarray
    dN: np.ndarray
    dB: np.ndarray
    speed: np.ndarray

    def __len__(self):
        return len(self.s)

    def __getitem__(self, i) -> IndicatrixFrame:
        return IndicatrixFrame(
            self.kind, float(self.s[i]), self.T[i], self.N[i], self.B[i],
            self.dT[i], self.dN[i], self.dB[i], float(self.speed[i]),
        )


def _frames_at(samples, kind, idx):
    if samples.curve is None:
        raise InputError("indicatrix frames need samples that keep their source curve")
    kind = IndicatrixKind.parse(kind)
    s = samples.s[idx]
    fj = frame_jets(samples.curve, samples.t[idx], s=s)
    g = {
        IndicatrixKind.TANGENT: fj.T,
        IndicatrixKind.PRINCIPAL_NORMAL: fj.N,
        IndicatrixKind.BINORMAL: fj.B,
    }[kind]
    g1 = fj.d_ds(g)
    g2 = fj.d_ds(g1)
    sp2 = vdot(g1, g1)
    sp0 = np.sqrt(sp2.value)
    c = vcross(g1, g2)
    cc = vdot(c, c)
    bad = np.flatnonzero(~(sp0 > INDICATRIX_THRESHOLD) | ~(np.sqrt(cc.value) > INDICATRIX_THRESHOLD * sp0**3))
    if bad.size:
        raise IndicatrixDegenerate(kind.value, float(s[bad[0]]))
    Tb = g1 * sp2.sqrt().reciprocal()[..., None]
    Bb = c * cc.sqrt().reciprocal()[..., None]
    Nb = vcross(Bb, Tb)
    return IndicatrixFrames(
        kind=kind, s=s,
        T=Tb.value, N=Nb.value, B=Bb.value,
        dT=fj.d_ds(Tb).value, dN=fj.d_ds(Nb).value, dB=fj.d_ds(Bb).value,
        speed=sp0,
    )


def indicatrix_frames(samples: FrenetSamples, kind) -> IndicatrixFrames:
    """Frenet frames of the chosen indicatrix at every sample."""
    return _frames_at(samples, kind, np.arange(len(samples)))


def indicatrix_frame(samples: FrenetSamples, kind, index: int) -> IndicatrixFrame:
    if not -len(samples) <= index < len(samples):
        raise IndexError(f"sample index {index} out of range")
    return _frames_at(samples, kind, np.array([index % len(samples)]))[0]


def indicatrix_csv(samples: FrenetSamples, kind) -> str:
    pts = indicatrix_points(samples, kind)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["s", "x", "y", "z"])
    for s, p in zip(samples.s, pts):
        w.writerow([repr(float(s))] + [repr(float(v)) for v in p])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# screw axis locus  P(s) = c(s) + kappa/(kappa^2 + tau^2) N(s)


@dataclass(frozen=True)
class AxisLocusSample:
    """Axis point ``P``, its arclength derivative ``dP`` and the Darboux vector.

    ``angle`` is the angle in ``[0, pi]`` between ``dP`` and ``W``; it is NaN
    when ``dP`` vanishes (``stationary``), i.e. the axis does not move.
    """

    s: float
    P: np.ndarray
    dP: np.ndarray
    W: np.ndarray
    angle: float
    stationary: bool = False

    @property
    def line_angle(self):
        """Angle between the lines spanned by ``dP`` and ``W`` (sign-blind)."""
        return min(self.angle, np.pi - self.angle)


def _axis_arrays(kappa, tau, T, N, B, W, dmannheim, position):
    d = kappa**2 + tau**2
    if np.any(~(d > 1e-12)):
        raise DegeneracyError("kappa^2 + tau^2 vanishes; screw axis undefined")
    P = position + (kappa / d)[:, None] * N
    dP = (tau**2 / d)[:, None] * T + (kappa * tau / d)[:, None] * B + dmannheim[:, None] * N
    cross = np.linalg.norm(np.cross(dP, W), axis=-1)
    dotp = np.einsum("ij,ij->i", dP, W)
    angle = np.arctan2(cross, dotp)
    stationary = np.linalg.norm(dP, axis=-1) <= STATIONARY_THRESHOLD
    angle = np.where(stationary, np.nan, angle)
    return P, dP, angle, stationary


def darboux_axis_point(sample: FrenetSample, position=None) -> AxisLocusSample:
    pos = sample.position if position is None else np.asarray(position, dtype=float)
    P, dP, angle, stationary = _axis_arrays(
        np.array([sample.kappa]), np.array([sample.tau]),
        sample.T[None], sample.N[None], sample.B[None], sample.W[None],
        np.array([sample.dmannheim]), pos[None],
    )
    return AxisLocusSample(sample.s, P[0], dP[0], sample.W, float(angle[0]), bool(stationary[0]))


@dataclass(frozen=True, eq=False)
class AxisLocus:
    s: np.ndarray
    P: np.ndarray
    dP: np.ndarray
    W: np.ndarray
    angle: np.ndarray
    stationary: np.ndarray
    dP_fd: np.ndarray

    def __len__(self):
        return len(self.s)

    def __getitem__(self, i) -> AxisLocusSample:
        return AxisLocusSample(
            float(self.s[i]), self.P[i], self.dP[i], self.W[i],
            float(self.angle[i]), bool(self.stationary[i]),
        )

    @property
    def line_angle(self):
        return np.minimum(self.angle, np.pi - self.angle)

    @property
    def fd_defect(self):
        """Max gap between analytic ``dP`` and 7-point centred differences of ``P``."""
        inner = slice(3, len(self) - 3)
        return float(np.max(np.abs(self.dP[inner] - self.dP_fd[inner])))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", "Px", "Py", "Pz", "dPx", "dPy", "dPz", "Wx", "Wy", "Wz", "angle"])
        for i in range(len(self)):
            row = [self.s[i], *self.P[i], *self.dP[i], *self.W[i], self.angle[i]]
            w.writerow([repr(float(v)) for v in row])
        return buf.getvalue()


def axis_locus(samples: FrenetSamples, positions=None) -> AxisLocus:
    pos = samples.position if positions is None else np.asarray(positions, dtype=float)
    P, dP, angle, stationary = _axis_arrays(
        samples.kappa, samples.tau, samples.T, samples.N, samples.B, samples.W,
        samples.dmannheim, pos,
    )
    dP_fd = _fd.derivative_on_grid(samples.s, P, 1, width=7)
    return AxisLocus(samples.s, P, dP, samples.W, angle, stationary, dP_fd)


@dataclass(frozen=True)
class AxisTangencyReport:
    max_angle: float
    tol_angle: float
    verdict: bool
    stationary_count: int
    mannheim_verdict: bool
    consistent: bool
    fd_defect: float
    note: str = ""

    def to_dict(self):
        return {
            "max_angle": None if np.isnan(self.max_angle) else self.max_angle,
            "tol_angle": self.tol_angle,
            "verdict": self.verdict,
            "stationary_count": self.stationary_count,
            "mannheim_verdict": self.mannheim_verdict,
            "consistent": self.consistent,
            "fd_defect": self.fd_defect,
            "note": self.note,
        }


def axis_tangency_test(samples: FrenetSamples, positions=None, tol_angle=None,
                       mannheim_tol=None) -> AxisTangencyReport:
    """Is ``P'(s)`` parallel to ``W(s)`` everywhere? Cross-checked with the Mannheim test.

    Stationary samples (``P' = 0``) count as parallel.
    """
    from .classify import mannheim_test

    if len(samples) < 8:
        raise InputError("axis tangency test needs at least 8 samples")
    if tol_angle is None:
        tol_angle = 1e-6 if samples.exact else 1e-2
    locus = axis_locus(samples, positions)
    moving = ~locus.stationary
    n_stat = int(np.count_nonzero(locus.stationary))
    if moving.any():
        max_angle = float(np.max(locus.line_angle[moving]))
        verdict = max_angle < tol_angle
        note = "" if not n_stat else f"{n_stat} stationary sample(s)"
    else:
        max_angle = float("nan")
        verdict = True
        note = "stationary locus: the screw axis is fixed (P' = 0 everywhere)"
    mannheim = mannheim_test(samples, mannheim_tol).verdict
    return AxisTangencyReport(
        max_angle=max_angle, tol_angle=tol_angle, verdict=verdict, stationary_count=n_stat,
        mannheim_verdict=mannheim, consistent=verdict == mannheim,
        fd_defect=locus.fd_defect, note=note,
    )
