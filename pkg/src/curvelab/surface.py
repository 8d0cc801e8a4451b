"""Darboux frames of curves drawn on parametric surfaces.

A surface is ``X(u, v)`` given by three expressions; a curve on it is a
pair ``u(t), v(t)``. The composite ``X(u(t), v(t))`` is expanded as a Taylor
jet, and the surface partials ``X_u, X_v`` along the curve come from dual
jets, so the unit normal ``n`` is a jet too and every frame derivative is
exact up to rounding.

The helix tests follow the squared norm identities of the Darboux frame::

    |T'|^2 = k_g^2 + k_n^2     |Y'|^2 = k_g^2 + t_r^2     |n'|^2 = k_n^2 + t_r^2
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .classify import DIMENSIONLESS_FLOOR, ConstancyReport, constancy
from .curves import _parse_range, parse_key_values
from .errors import InputError, KappaVanishes, NonRegularCurve, SpecFormatError, SurfaceDegenerate
from .expr import Expr, eval_constant, eval_jet, evaluate_ast, parse_expression, to_text, variables_of
from .frenet import MIN_FRENET_SAMPLES, SPEED_THRESHOLD, _col, _table, param_at_arclength, vcross, vdot
from .jet import DualJet, Jet

__all__ = [
    "SurfaceSpec", "UVCurve", "SurfaceCurve", "DarbouxSample", "DarbouxSamples",
    "SurfaceHelixReport", "SURFACE_CATALOG", "catalog_surface", "parse_builtin_surface",
    "load_surface_spec", "load_uv_curve", "darboux_frame", "darboux_samples",
    "geodesic_helix_test", "asymptotic_helix_test",
]

NORMAL_THRESHOLD = 1e-12
FLAG_THRESHOLD = 1e-6
DT_THRESHOLD = 1e-10
JET_ORDER = 3
_RANGE_SLACK = 1e-9


def _within(value, lo, hi):
    slack = _RANGE_SLACK * max(1.0, hi - lo)
    return np.all((value >= lo - slack) & (value <= hi + slack))


@dataclass(frozen=True)
class SurfaceSpec:
    """Parametric surface ``(x(u,v), y(u,v), z(u,v))`` on a coordinate box."""

    x: Expr
    y: Expr
    z: Expr
    u_min: float
    u_max: float
    v_min: float
    v_max: float
    label: str = "surface"

    def __post_init__(self):
        if not (self.u_min < self.u_max and self.v_min < self.v_max):
            raise InputError("surface ranges must satisfy min < max")
        for axis, node in zip("xyz", (self.x, self.y, self.z)):
            extra = variables_of(node) - {"u", "v"}
            if extra:
                raise InputError(f"{axis}(u,v) uses variables other than u, v: {sorted(extra)}")

    @classmethod
    def from_text(cls, x, y, z, u_range, v_range, label="surface"):
        nodes = [parse_expression(e, ["u", "v"]) for e in (x, y, z)]
        return cls(*nodes, float(u_range[0]), float(u_range[1]),
                   float(v_range[0]), float(v_range[1]), label)

    def _eval(self, env):
        return [evaluate_ast(node, env) for node in (self.x, self.y, self.z)]

    def point(self, u, v):
        """Surface point(s) at float or array coordinates."""
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        out = [np.broadcast_to(np.asarray(c, float), u.shape) for c in self._eval({"u": u, "v": v})]
        return np.stack(out, axis=-1)

    def to_text(self):
        return "\n".join([
            f"x = {to_text(self.x)}",
            f"y = {to_text(self.y)}",
            f"z = {to_text(self.z)}",
            f"u = {self.u_min!r}:{self.u_max!r}",
            f"v = {self.v_min!r}:{self.v_max!r}",
            f"label = {self.label}",
        ]) + "\n"


@dataclass(frozen=True)
class UVCurve:
    """Curve ``(u(t), v(t))`` in a surface's coordinate plane."""

    u: Expr
    v: Expr
    t_min: float
    t_max: float
    label: str = "uv"

    def __post_init__(self):
        if not self.t_min < self.t_max:
            raise InputError("uv curve range must satisfy t_min < t_max")
        for axis, node in zip("uv", (self.u, self.v)):
            extra = variables_of(node) - {"t"}
            if extra:
                raise InputError(f"{axis}(t) uses variables other than t: {sorted(extra)}")

    @classmethod
    def from_text(cls, u, v, t_min, t_max, label="uv"):
        return cls(parse_expression(u, ["t"]), parse_expression(v, ["t"]),
                   float(t_min), float(t_max), label)

    def to_text(self):
        return (f"u = {to_text(self.u)}\nv = {to_text(self.v)}\n"
                f"t = {self.t_min!r}:{self.t_max!r}\nlabel = {self.label}\n")


@dataclass(frozen=True)
class SurfaceCurve:
    """The space curve ``X(u(t), v(t))``; usable wherever a curve is expected."""

    surface: SurfaceSpec
    uv: UVCurve

    is_exact = True

    @property
    def t_min(self):
        return self.uv.t_min

    @property
    def t_max(self):
        return self.uv.t_max

    @property
    def label(self):
        return f"{self.surface.label}:{self.uv.label}"

    def _uv_jets(self, t, order):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        uj = eval_jet(self.uv.u, {"t": t}, "t", order)
        vj = eval_jet(self.uv.v, {"t": t}, "t", order)
        sf = self.surface
        if not (_within(uj.value, sf.u_min, sf.u_max) and _within(vj.value, sf.v_min, sf.v_max)):
            raise InputError(f"uv curve {self.uv.label!r} leaves the coordinate box of {sf.label!r}")
        return t, uj, vj

    @staticmethod
    def _as_jet(value, like):
        if isinstance(value, Jet):
            return value
        return like * 0.0 + value

    def position_jet(self, t, order):
        _, uj, vj = self._uv_jets(t, order)
        comps = self.surface._eval({"u": uj, "v": vj})
        return Jet.stack([self._as_jet(c, uj) for c in comps], axis=-1)

    def partial_jets(self, t, order):
        """Jets of ``X_u`` and ``X_v`` along the curve."""
        _, uj, vj = self._uv_jets(t, order)
        one, zero = uj * 0.0 + 1.0, uj * 0.0
        out = []
        for du, dv in ((one, zero), (zero, one)):
            comps = self.surface._eval({"u": DualJet(uj, du), "v": DualJet(vj, dv)})
            out.append(Jet.stack([c.b if isinstance(c, DualJet) else zero for c in comps], axis=-1))
        return out[0], out[1]


# ---------------------------------------------------------------------------
# Darboux frame


@dataclass(frozen=True)
class DarbouxSample:
    s: float
    t: float
    T: np.ndarray
    n: np.ndarray
    Y: np.ndarray
    kappa_g: float
    kappa_n: float
    t_r: float
    dT: np.ndarray
    dY: np.ndarray
    dn: np.ndarray


@dataclass(frozen=True, eq=False)
class DarbouxSamples:
    label: str
    s: np.ndarray
    t: np.ndarray
    T: np.ndarray
    n: np.ndarray
    Y: np.ndarray
    kappa_g: np.ndarray
    kappa_n: np.ndarray
    t_r: np.ndarray
    dT: np.ndarray
    dY: np.ndarray
    dn: np.ndarray

    def __len__(self):
        return len(self.s)

    def __getitem__(self, i) -> DarbouxSample:
        return DarbouxSample(
            float(self.s[i]), float(self.t[i]), self.T[i], self.n[i], self.Y[i],
            float(self.kappa_g[i]), float(self.kappa_n[i]), float(self.t_r[i]),
            self.dT[i], self.dY[i], self.dn[i],
        )


def _darboux_arrays(curve: SurfaceCurve, t, s):
    t = np.atleast_1d(np.asarray(t, dtype=float))
    r = curve.position_jet(t, JET_ORDER)
    d1 = r.deriv()
    v2 = vdot(d1, d1)
    v0 = np.sqrt(v2.value)
    bad = np.flatnonzero(~(v0 >= SPEED_THRESHOLD))
    if bad.size:
        raise NonRegularCurve(float(t[bad[0]]))
    Xu, Xv = curve.partial_jets(t, JET_ORDER - 1)
    c = vcross(Xu, Xv)
    cc = vdot(c, c)
    bad = np.flatnonzero(~(np.sqrt(cc.value) > NORMAL_THRESHOLD))
    if bad.size:
        i = bad[0]
        u0 = eval_jet(curve.uv.u, {"t": t[i:i + 1]}, "t", 0).value[0]
        w0 = eval_jet(curve.uv.v, {"t": t[i:i + 1]}, "t", 0).value[0]
        raise SurfaceDegenerate(
            f"surface {curve.surface.label!r} is not regular at (u, v) = ({u0!r}, {w0!r}), t={t[i]!r}")
    inv_speed = v2.sqrt().reciprocal()
    T = d1 * _col(inv_speed)
    n = c * _col(cc.sqrt().reciprocal())
    Y = vcross(n, T)

    def d_ds(j):
        return j.deriv() * _col(inv_speed.truncate(j.order - 1))

    dT, dY, dn = d_ds(T), d_ds(Y), d_ds(n)
    T0, n0, Y0 = T.value, n.value, Y.value
    dT0, dY0, dn0 = dT.value, dY.value, dn.value

    def dot(a, b):
        return np.einsum("ij,ij->i", a, b)

    return DarbouxSamples(
        label=curve.label, s=np.asarray(s, dtype=float), t=t,
        T=T0, n=n0, Y=Y0,
        kappa_g=dot(dT0, Y0), kappa_n=dot(dT0, n0), t_r=dot(dY0, n0),
        dT=dT0, dY=dY0, dn=dn0,
    )


def darboux_frame(surface: SurfaceSpec, uv_curve: UVCurve, t: float) -> DarbouxSample:
    """Darboux frame ``{T, Y, n}`` and invariants at parameter ``t``."""
    from .frenet import arclength

    curve = SurfaceCurve(surface, uv_curve)
    t = float(t)
    if not _within(np.array([t]), curve.t_min, curve.t_max):
        raise InputError(f"t={t!r} outside the uv curve's range")
    s = arclength(curve, curve.t_min, min(max(t, curve.t_min), curve.t_max))
    return _darboux_arrays(curve, np.array([t]), np.array([s]))[0]


def darboux_samples(surface: SurfaceSpec, uv_curve: UVCurve, n: int = 256) -> DarbouxSamples:
    """Darboux frames at ``n`` points equally spaced in arclength."""
    if n < MIN_FRENET_SAMPLES:
        raise InputError(f"n_samples below minimum ({n} < {MIN_FRENET_SAMPLES})")
    curve = SurfaceCurve(surface, uv_curve)
    L = _table(curve).total
    s = np.linspace(0.0, L, n)
    return _darboux_arrays(curve, param_at_arclength(curve, s), s)


# ---------------------------------------------------------------------------
# helix tests


@dataclass(frozen=True, eq=False)
class SurfaceHelixReport:
    """Ratio profile constancy plus the geodesic or asymptotic flag.

    ``flag_value`` is ``max|k_g|`` (geodesic test) or ``max|k_n|``
    (asymptotic test); ``identity_defect`` is the worst violation of the
    squared Darboux norm identities.
    """

    kind: str
    report: ConstancyReport
    flag: bool
    flag_value: float
    identity_defect: float

    @property
    def verdict(self):
        return self.report.verdict

    def to_dict(self):
        return {
            self.kind: self.flag,
            f"max_abs_{'kappa_g' if self.kind == 'geodesic' else 'kappa_n'}": self.flag_value,
            "helix_test": self.verdict,
            "ratio": self.report.to_dict(),
            "identity_defect": self.identity_defect,
        }


def _identity_defect(d: DarbouxSamples):
    def sq(v):
        return np.einsum("ij,ij->i", v, v)

    kg2, kn2, tr2 = d.kappa_g**2, d.kappa_n**2, d.t_r**2
    return float(max(
        np.max(np.abs(sq(d.dT) - (kg2 + kn2))),
        np.max(np.abs(sq(d.dY) - (kg2 + tr2))),
        np.max(np.abs(sq(d.dn) - (kn2 + tr2))),
    ))


def _helix_test(surface, uv_curve, n_samples, tol, kind):
    d = darboux_samples(surface, uv_curve, n_samples)
    den = d.kappa_n**2 + d.kappa_g**2
    bad = np.flatnonzero(~(np.sqrt(den) > DT_THRESHOLD))
    if bad.size:
        i = bad[0]
        raise KappaVanishes(float(d.t[i]), float(d.s[i]))
    if kind == "geodesic":
        num = d.kappa_n**2 + d.t_r**2
        flag_value = float(np.max(np.abs(d.kappa_g)))
    else:
        num = d.kappa_g**2 + d.t_r**2
        flag_value = float(np.max(np.abs(d.kappa_n)))
    report = constancy(np.sqrt(num / den), tol, DIMENSIONLESS_FLOOR)
    return SurfaceHelixReport(kind, report, flag_value < FLAG_THRESHOLD, flag_value, _identity_defect(d))


def geodesic_helix_test(surface, uv_curve, n_samples=256, tol=1e-6) -> SurfaceHelixReport:
    """Constancy of ``sqrt((k_n^2 + t_r^2) / (k_n^2 + k_g^2))`` with the geodesic flag.

    The profile equals ``|n'| / |T'|``; along a geodesic (``k_g = 0``) the
    curve's Frenet normal is the surface normal, so constancy is the
    general-helix condition.
    """
    return _helix_test(surface, uv_curve, n_samples, tol, "geodesic")


def asymptotic_helix_test(surface, uv_curve, n_samples=256, tol=1e-6) -> SurfaceHelixReport:
    """Constancy of ``sqrt((k_g^2 + t_r^2) / (k_n^2 + k_g^2))`` with the asymptotic flag.

    The profile equals ``|Y'| / |T'|``; along an asymptotic curve ``Y`` is
    the curve's binormal up to sign.
    """
    return _helix_test(surface, uv_curve, n_samples, tol, "asymptotic")


# ---------------------------------------------------------------------------
# catalog and file formats

_BIG = 100.0


def _sphere(r):
    if r <= 0:
        raise InputError("sphere needs radius r > 0")
    return ((f"{r!r}*cos(u)*sin(v)", f"{r!r}*sin(u)*sin(v)", f"{r!r}*cos(v)"),
            (-2 * math.pi, 2 * math.pi), (0.0, math.pi))


def _cylinder(r):
    if r <= 0:
        raise InputError("cylinder needs radius r > 0")
    return ((f"{r!r}*cos(u)", f"{r!r}*sin(u)", "v"), (-_BIG, _BIG), (-_BIG, _BIG))


def _helicoid(c):
    if c == 0:
        raise InputError("helicoid pitch c must be non-zero")
    return (("u*cos(v)", "u*sin(v)", f"{c!r}*v"), (-_BIG, _BIG), (-_BIG, _BIG))


def _plane():
    return (("u", "v", "0"), (-_BIG, _BIG), (-_BIG, _BIG))


SURFACE_CATALOG = {
    "sphere": (_sphere, 1),
    "cylinder": (_cylinder, 1),
    "helicoid": (_helicoid, 1),
    "plane": (_plane, 0),
}


def catalog_surface(name: str, params: Sequence[float] = ()) -> SurfaceSpec:
    try:
        builder, arity = SURFACE_CATALOG[name]
    except KeyError:
        raise InputError(f"unknown catalog surface {name!r}; known: {', '.join(SURFACE_CATALOG)}") from None
    params = [float(p) for p in params]
    if len(params) != arity:
        raise InputError(f"{name} takes {arity} parameter(s), got {len(params)}")
    (x, y, z), ur, vr = builder(*params)
    label = f"{name}({','.join(format(p, 'g') for p in params)})" if arity else name
    return SurfaceSpec.from_text(x, y, z, ur, vr, label)


_BUILTIN_RE = re.compile(r"^\s*([A-Za-z_]\w*)\s*(?:\((.*)\))?\s*$")


def parse_builtin_surface(text: str) -> SurfaceSpec:
    m = _BUILTIN_RE.match(text)
    if not m:
        raise InputError(f"cannot parse builtin surface {text!r}")
    args = m.group(2)
    params = [eval_constant(parse_expression(p, [])) for p in args.split(",")] if args and args.strip() else []
    return catalog_surface(m.group(1), params)


def _parse_exprs(kv, keys, variables):
    out = {}
    for key in keys:
        lineno, value = kv[key]
        try:
            out[key] = parse_expression(value, variables)
        except InputError as exc:
            raise SpecFormatError(f"line {lineno}: {exc}") from None
    return out


def load_surface_spec(text: str) -> SurfaceSpec:
    """Read ``x = ..., y = ..., z = ..., u = a:b, v = a:b[, label = ...]``."""
    kv = parse_key_values(text, {"x", "y", "z", "u", "v", "label"}, ("x", "y", "z", "u", "v"))
    asts = _parse_exprs(kv, "xyz", ["u", "v"])
    ur = _parse_range(kv["u"][1], f"line {kv['u'][0]}")
    vr = _parse_range(kv["v"][1], f"line {kv['v'][0]}")
    label = kv["label"][1] if "label" in kv else "surface"
    return SurfaceSpec(asts["x"], asts["y"], asts["z"], *ur, *vr, label)


def load_uv_curve(text: str) -> UVCurve:
    """Read ``u = <expr(t)>, v = <expr(t)>, t = a:b[, label = ...]``.

    Entries may be separated by newlines or semicolons.
    """
    text = text.replace(";", "\n")
    kv = parse_key_values(text, {"u", "v", "t", "label"}, ("u", "v", "t"))
    asts = _parse_exprs(kv, "uv", ["t"])
    tr = _parse_range(kv["t"][1], f"line {kv['t'][0]}")
    label = kv["label"][1] if "label" in kv else "uv"
    return UVCurve(asts["u"], asts["v"], *tr, label)
