"""Arclength, the Frenet apparatus and uniform-arclength sampling.

Frame quantities are computed by pushing position jets through the usual
formulas (``T = r'/|r'|``, ``B = r' x r''/|r' x r''|``, ...) with jet
arithmetic, then differentiating the resulting jets with respect to
arclength via ``d/ds = (1/|r'|) d/dt``. The frame derivatives are therefore
obtained independently of the Frenet-Serret formulas, which makes those
formulas a genuine check rather than an identity.
"""

from __future__ import annotations

import csv
import functools
import io
from dataclasses import dataclass, field

import numpy as np

from . import _fd, _quadrature
from .errors import InputError, KappaVanishes, NonRegularCurve
from .jet import Jet

__all__ = [
    "KAPPA_THRESHOLD", "SPEED_THRESHOLD",
    "FrenetSample", "FrenetSamples", "FrameJets",
    "frame_jets", "speed", "arclength", "param_at_arclength", "frenet_apparatus",
    "sample_uniform_arclength", "vdot", "vcross", "vnorm",
]

KAPPA_THRESHOLD = 1e-10
SPEED_THRESHOLD = 1e-12
MIN_FRENET_SAMPLES = 16
JET_ORDER = 5


# ---------------------------------------------------------------------------
# vector jets: coefficient arrays of shape (K+1, P, 3)


def vdot(a, b):
    return (a * b).sum(-1)


def vcross(a, b):
    ax, ay, az = a[..., 0], a[..., 1], a[..., 2]
    bx, by, bz = b[..., 0], b[..., 1], b[..., 2]
    return Jet.stack([ay * bz - az * by, az * bx - ax * bz, ax * by - ay * bx], axis=-1)


def vnorm(a):
    return vdot(a, a).sqrt()


def _col(scalar):
    return scalar[..., None]


@dataclass(frozen=True)
class FrameJets:
    """Jets (in the curve parameter) of the Frenet apparatus at a batch of points."""

    t: np.ndarray
    position: Jet
    speed: Jet
    T: Jet
    N: Jet
    B: Jet
    kappa: Jet
    tau: Jet

    def d_ds(self, jet):
        """Arclength derivative of a scalar or vector jet (order drops by one)."""
        inv = self.speed.reciprocal()
        if jet.c.ndim == self.speed.c.ndim + 1:
            inv = _col(inv)
        return jet.deriv() * inv


def frame_jets(curve, t, order=JET_ORDER, s=None) -> FrameJets:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    r = curve.position_jet(t, order)
    d1 = r.deriv()
    d2 = d1.deriv()
    d3 = d2.deriv()
    v2 = vdot(d1, d1)
    v0 = np.sqrt(v2.value)
    bad = np.flatnonzero(v0 < SPEED_THRESHOLD)
    if bad.size:
        raise NonRegularCurve(float(t[bad[0]]))
    speed = v2.sqrt()
    c = vcross(d1, d2)
    cc = vdot(c, c)
    k0 = np.sqrt(cc.value) / v0**3
    bad = np.flatnonzero(~(k0 >= KAPPA_THRESHOLD))
    if bad.size:
        i = bad[0]
        raise KappaVanishes(float(t[i]), None if s is None else float(s[i]))
    cn = cc.sqrt()
    T = d1 * _col(speed.reciprocal())
    B = c * _col(cn.reciprocal())
    N = vcross(B, T)
    kappa = cn / speed**3
    tau = vdot(c, d3) / cc
    return FrameJets(t, r, speed, T, N, B, kappa, tau)


# ---------------------------------------------------------------------------
# arclength


def speed(curve, t):
    """``|r'(t)|``; raises :class:`NonRegularCurve` below 1e-12."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    d1 = curve.position_jet(t, 1).deriv().value
    v = np.sqrt(np.einsum("pi,pi->p", d1, d1))
    bad = np.flatnonzero(v < SPEED_THRESHOLD)
    if bad.size:
        raise NonRegularCurve(float(t[bad[0]]))
    return v


def _quad_tol(curve):
    return 1e-12 if curve.is_exact else 1e-9


class _ArclengthTable:
    """Cumulative arclength on adaptively chosen panels, with inversion."""

    def __init__(self, curve):
        self.curve = curve
        self.f = functools.partial(speed, curve)
        self.edges, vals, self.error = _quadrature.adaptive_panels(
            self.f, curve.t_min, curve.t_max, _quad_tol(curve))
        self.cum = np.concatenate([[0.0], np.cumsum(vals)])
        self.total = float(self.cum[-1])

    def _panel(self, t):
        k = np.searchsorted(self.edges, t, side="right") - 1
        return np.clip(k, 0, len(self.edges) - 2)

    def s_of(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        k = self._panel(t)
        part, _ = _quadrature.gk15(self.f, self.edges[k], t)
        return self.cum[k] + part

    def t_of(self, s, tol=1e-13):
        """Invert ``s(t)``: Newton steps safeguarded by bisection."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        k = np.clip(np.searchsorted(self.cum, s, side="right") - 1, 0, len(self.edges) - 2)
        lo, hi = self.edges[k].copy(), self.edges[k + 1].copy()
        base, width = self.cum[k], self.cum[k + 1] - self.cum[k]
        frac = np.divide(s - base, width, out=np.zeros_like(s), where=width > 0)
        t = lo + np.clip(frac, 0.0, 1.0) * (hi - lo)
        start = self.edges[k]
        scale = max(1.0, self.total)
        for _ in range(60):
            resid = base + _quadrature.gk15(self.f, start, t)[0] - s
            if np.all(np.abs(resid) <= tol * scale):
                break
            lo = np.where(resid < 0, t, lo)
            hi = np.where(resid > 0, t, hi)
            step = t - resid / self.f(t)
            outside = ~((step > lo) & (step < hi))
            t = np.where(outside, 0.5 * (lo + hi), step)
        self.last_residual = float(np.max(np.abs(resid)))
        return t


@functools.lru_cache(maxsize=64)
def _table(curve):
    return _ArclengthTable(curve)


def arclength(curve, t0: float, t1: float) -> float:
    """Length of the curve between parameters ``t0 <= t1``."""
    if t0 > t1:
        raise InputError("arclength needs t0 <= t1")
    if t0 < curve.t_min - 1e-12 or t1 > curve.t_max + 1e-12:
        raise InputError("arclength limits outside the curve's range")
    value, _ = _quadrature.integrate(functools.partial(speed, curve), t0, t1, _quad_tol(curve))
    return value


def total_length(curve) -> float:
    return _table(curve).total


def param_at_arclength(curve, s):
    """Parameter ``t`` with ``arclength(t_min, t) == s`` (scalar or array)."""
    table = _table(curve)
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    slack = 1e-12 * max(1.0, table.total)
    if np.any(s_arr < -slack) or np.any(s_arr > table.total + slack):
        raise InputError(f"arclength outside [0, {table.total!r}]")
    s_arr = np.clip(s_arr, 0.0, table.total)
    t = table.t_of(s_arr)
    t = np.where(s_arr == 0.0, curve.t_min, t)
    t = np.where(s_arr == table.total, curve.t_max, t)
    return float(t[0]) if np.ndim(s) == 0 else t


# ---------------------------------------------------------------------------
# Frenet apparatus


@dataclass(frozen=True)
class FrenetSample:
    """Frenet apparatus at one point; derivatives are with respect to arclength."""

    t: float
    s: float
    position: np.ndarray
    T: np.ndarray
    N: np.ndarray
    B: np.ndarray
    kappa: float
    tau: float
    dT: np.ndarray
    dN: np.ndarray
    dB: np.ndarray
    W: np.ndarray
    dtau_kappa: float = float("nan")
    dmannheim: float = float("nan")

    @property
    def sigma(self):
        k, tau = self.kappa, self.tau
        return k * k / (k * k + tau * tau) ** 1.5 * self.dtau_kappa


def _apparatus_arrays(curve, t, s=None):
    fj = frame_jets(curve, t, s=s)
    dT, dN, dB = fj.d_ds(fj.T), fj.d_ds(fj.N), fj.d_ds(fj.B)
    tk = fj.tau / fj.kappa
    mann = fj.kappa / (fj.kappa * fj.kappa + fj.tau * fj.tau)
    kappa, tau = fj.kappa.value, fj.tau.value
    T, B = fj.T.value, fj.B.value
    return dict(
        position=fj.position.value,
        speed=fj.speed.value,
        T=T, N=fj.N.value, B=B,
        kappa=kappa, tau=tau,
        dT=dT.value, dN=dN.value, dB=dB.value,
        W=tau[:, None] * T + kappa[:, None] * B,
        dtau_kappa=fj.d_ds(tk).value,
        dmannheim=fj.d_ds(mann).value,
    )


def frenet_apparatus(curve, t: float) -> FrenetSample:
    t = float(t)
    if not curve.t_min - 1e-12 <= t <= curve.t_max + 1e-12:
        raise InputError(f"t={t!r} outside the curve's range")
    s = arclength(curve, curve.t_min, max(curve.t_min, min(t, curve.t_max)))
    arrs = _apparatus_arrays(curve, np.array([t]), s=np.array([s]))
    return FrenetSample(
        t=t, s=s,
        **{k: (v[0] if np.ndim(v[0]) else float(v[0])) for k, v in arrs.items() if k != "speed"},
    )


@dataclass(frozen=True, eq=False)
class FrenetSamples:
    """Frenet apparatus on a uniform arclength grid (arrays indexed by sample)."""

    label: str
    h: float
    t: np.ndarray
    s: np.ndarray
    position: np.ndarray
    speed: np.ndarray
    T: np.ndarray
    N: np.ndarray
    B: np.ndarray
    kappa: np.ndarray
    tau: np.ndarray
    dT: np.ndarray
    dN: np.ndarray
    dB: np.ndarray
    W: np.ndarray
    dtau_kappa: np.ndarray
    dmannheim: np.ndarray
    exact: bool = True
    curve: object = field(default=None, repr=False)

    def __len__(self):
        return len(self.s)

    def __getitem__(self, i) -> FrenetSample:
        return FrenetSample(
            t=float(self.t[i]), s=float(self.s[i]), position=self.position[i],
            T=self.T[i], N=self.N[i], B=self.B[i],
            kappa=float(self.kappa[i]), tau=float(self.tau[i]),
            dT=self.dT[i], dN=self.dN[i], dB=self.dB[i], W=self.W[i],
            dtau_kappa=float(self.dtau_kappa[i]), dmannheim=float(self.dmannheim[i]),
        )

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    @property
    def sigma(self):
        k2 = self.kappa**2
        return k2 / (k2 + self.tau**2) ** 1.5 * self.dtau_kappa

    @property
    def length(self):
        return float(self.s[-1])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", "t", "Tx", "Ty", "Tz", "Nx", "Ny", "Nz", "Bx", "By", "Bz", "kappa", "tau"])
        for i in range(len(self)):
            row = [self.s[i], self.t[i], *self.T[i], *self.N[i], *self.B[i], self.kappa[i], self.tau[i]]
            w.writerow([repr(float(v)) for v in row])
        return buf.getvalue()


def sample_uniform_arclength(curve, n: int = 256) -> FrenetSamples:
    """Frenet apparatus at ``n`` points equally spaced in arclength."""
    if n < MIN_FRENET_SAMPLES:
        raise InputError(f"n_samples below minimum ({n} < {MIN_FRENET_SAMPLES})")
    table = _table(curve)
    L = table.total
    s = np.linspace(0.0, L, n)
    t = param_at_arclength(curve, s)
    arrs = _apparatus_arrays(curve, t, s=s)
    if not curve.is_exact:
        # sampled data: differentiate the profiles on the arclength grid
        k, tau = arrs["kappa"], arrs["tau"]
        arrs["dtau_kappa"] = _fd.derivative_on_grid(s, tau / k, 1, width=5)
        arrs["dmannheim"] = _fd.derivative_on_grid(s, k / (k * k + tau * tau), 1, width=5)
    return FrenetSamples(
        label=curve.label, h=L / (n - 1), t=t, s=s, exact=curve.is_exact, curve=curve, **arrs,
    )
