"""Analytic and sampled space curves, plus a catalog of test curves.

Every curve object exposes ``t_min``, ``t_max``, ``label``, ``is_exact`` and
``position_jet(t, order)``, which returns a :class:`~curvelab.jet.Jet` with
coefficient array of shape ``(order + 1, len(t), 3)``. Everything
downstream (arclength, Frenet frames, indicatrices) only uses that method.

Salkowski and anti-Salkowski curves follow J. Monterde, "Salkowski curves
revisited: A family of curves with constant curvature and non-constant
torsion", CAGD 26 (2009). With ``n = m / sqrt(1 + m^2)`` the Salkowski
curve has curvature 1 and torsion ``-tan(n t)``; the anti-Salkowski curve
used here is the integral of its binormal and has torsion 1 and curvature
``tan(n t)``.
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _fd
from .errors import InputError, SpecFormatError
from .expr import Expr, eval_constant, eval_jet, parse_expression, to_text, variables_of
from .jet import Jet

__all__ = [
    "CurveSpec", "SampledCurve", "CATALOG", "catalog_curve", "parse_builtin",
    "evaluate", "load_samples", "load_curve_spec", "resample_csv",
]

MIN_SAMPLES = 7
_RANGE_SLACK = 1e-9


def _check_range(curve, t):
    t = np.asarray(t, dtype=float)
    span = curve.t_max - curve.t_min
    lo = curve.t_min - _RANGE_SLACK * max(1.0, span)
    hi = curve.t_max + _RANGE_SLACK * max(1.0, span)
    if np.any(t < lo) or np.any(t > hi):
        raise InputError(f"t outside [{curve.t_min!r}, {curve.t_max!r}] for curve {curve.label!r}")
    return t


@dataclass(frozen=True)
class CurveSpec:
    """Closed-form curve ``(x(t), y(t), z(t))`` on ``[t_min, t_max]``."""

    x: Expr
    y: Expr
    z: Expr
    t_min: float
    t_max: float
    label: str = "curve"

    is_exact = True

    def __post_init__(self):
        if not self.t_min < self.t_max:
            raise InputError(f"t_min must be < t_max, got {self.t_min!r}:{self.t_max!r}")
        for axis, node in zip("xyz", (self.x, self.y, self.z)):
            extra = variables_of(node) - {"t"}
            if extra:
                raise InputError(f"{axis}(t) uses variables other than t: {sorted(extra)}")

    @classmethod
    def from_text(cls, x, y, z, t_min, t_max, label="curve"):
        return cls(
            parse_expression(x, ["t"]),
            parse_expression(y, ["t"]),
            parse_expression(z, ["t"]),
            float(t_min),
            float(t_max),
            label,
        )

    def position_jet(self, t, order):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        comps = [eval_jet(node, {"t": t}, "t", order) for node in (self.x, self.y, self.z)]
        return Jet.stack(comps, axis=-1)

    def to_text(self):
        return "\n".join([
            f"x = {to_text(self.x)}",
            f"y = {to_text(self.y)}",
            f"z = {to_text(self.z)}",
            f"t = {self.t_min!r}:{self.t_max!r}",
            f"label = {self.label}",
        ]) + "\n"


@dataclass(frozen=True, eq=False)
class SampledCurve:
    """Curve known only at ordered samples ``(t_i, p_i)``.

    Derivatives come from local interpolating polynomials: 5-point stencils
    for orders 0-2 and 7-point stencils for orders 3-5, one-sided near the
    ends.
    """

    t: np.ndarray
    points: np.ndarray
    label: str = "samples"

    is_exact = False

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        p = np.asarray(self.points, dtype=float)
        if t.ndim != 1 or p.shape != (len(t), 3):
            raise InputError("sampled curve needs t of shape (n,) and points of shape (n, 3)")
        if len(t) < MIN_SAMPLES:
            raise InputError(f"fewer than {MIN_SAMPLES} samples ({len(t)} given)")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(p))):
            raise InputError("sampled curve contains non-finite values")
        if np.any(np.diff(t) <= 0):
            raise InputError("sample parameters t must be strictly increasing")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "points", p)

    def __len__(self):
        return len(self.t)

    @property
    def t_min(self):
        return float(self.t[0])

    @property
    def t_max(self):
        return float(self.t[-1])

    def position_jet(self, t, order):
        if order > 5:
            raise ValueError("sampled curves provide derivatives up to order 5")
        z = np.atleast_1d(np.asarray(t, dtype=float))
        derivs = np.empty((order + 1, len(z), 3))
        for width, orders in ((5, range(0, min(order, 2) + 1)), (7, range(3, order + 1))):
            if not len(orders):
                continue
            start = _fd.stencil_starts(self.t, z, width)
            cols = start[:, None] + np.arange(width)[None, :]
            w = _fd.fornberg_weights(z, self.t[cols], orders[-1])
            for k in orders:
                derivs[k] = np.einsum("pj,pjd->pd", w[k], self.points[cols])
        return Jet.from_derivatives(derivs)


def evaluate(curve, t: float, order: int):
    """Jets of ``x``, ``y``, ``z`` at a single parameter value."""
    if not 0 <= order <= 5:
        raise ValueError(f"order must be in [0, 5], got {order}")
    t = _check_range(curve, t)
    jet = curve.position_jet(np.atleast_1d(t), order)
    return tuple(Jet(jet.c[:, 0, i]) for i in range(3))


# ---------------------------------------------------------------------------
# catalog


def _fmt(v):
    return repr(float(v))


def _circular_helix(a, b):
    if a <= 0:
        raise InputError("circular_helix needs radius a > 0")
    return (f"{_fmt(a)}*cos(t)", f"{_fmt(a)}*sin(t)", f"{_fmt(b)}*t"), 0.0, 4 * math.pi


def _circle(r):
    if r <= 0:
        raise InputError("circle needs radius r > 0")
    return (f"{_fmt(r)}*cos(t)", f"{_fmt(r)}*sin(t)", "0"), 0.0, 2 * math.pi


def _line():
    return ("1 + t", "2*t", "-t"), 0.0, 1.0


def _twisted_cubic():
    return ("t", "t^2", "t^3"), -1.0, 1.0


def _salkowski_constants(m):
    if m == 0 or not math.isfinite(m):
        raise InputError("salkowski parameter m must be finite and non-zero")
    n = m / math.sqrt(1 + m * m)
    if abs(abs(2 * n) - 1) < 1e-9:
        raise InputError("salkowski parameter m = +-1/sqrt(3) makes a denominator vanish")
    k = 1 / math.sqrt(1 + m * m)
    half_period = math.pi / (2 * abs(n))
    # keep clear of the zeros of torsion (t = 0) and speed (|n t| = pi/2)
    return n, k, 0.07 * half_period, 0.8 * half_period


def _salkowski(m):
    n, k, lo, hi = _salkowski_constants(m)
    p, q = 1 + 2 * n, 1 - 2 * n
    a, b = (1 - n) / (4 * p), (1 + n) / (4 * q)
    x = f"{_fmt(k)}*(-{_fmt(a)}*sin({_fmt(p)}*t) - {_fmt(b)}*sin({_fmt(q)}*t) - 0.5*sin(t))"
    y = f"{_fmt(k)}*({_fmt(a)}*cos({_fmt(p)}*t) + {_fmt(b)}*cos({_fmt(q)}*t) + 0.5*cos(t))"
    z = f"{_fmt(k / (4 * m))}*cos({_fmt(2 * n)}*t)"
    return (x, y, z), lo, hi


def _anti_salkowski(m):
    n, k, lo, hi = _salkowski_constants(m)
    p, q = 1 + 2 * n, 1 - 2 * n
    a, b = (1 - n) / (4 * p), (1 + n) / (4 * q)
    x = f"{_fmt(k)}*(-{_fmt(n / 2)}*cos(t) + {_fmt(a)}*cos({_fmt(p)}*t) - {_fmt(b)}*cos({_fmt(q)}*t))"
    y = f"{_fmt(k)}*(-{_fmt(n / 2)}*sin(t) + {_fmt(a)}*sin({_fmt(p)}*t) - {_fmt(b)}*sin({_fmt(q)}*t))"
    z = f"{_fmt(k * k / 2)}*(t + sin({_fmt(2 * n)}*t)/{_fmt(2 * n)})"
    return (x, y, z), lo, hi


CATALOG = {
    "circular_helix": (_circular_helix, 2),
    "circle": (_circle, 1),
    "line": (_line, 0),
    "twisted_cubic": (_twisted_cubic, 0),
    "salkowski": (_salkowski, 1),
    "anti_salkowski": (_anti_salkowski, 1),
}


def catalog_curve(name: str, params: Sequence[float] = (), t_min=None, t_max=None) -> CurveSpec:
    """Closed-form test curve ``name(params)``; see ``CATALOG`` for names."""
    try:
        builder, arity = CATALOG[name]
    except KeyError:
        raise InputError(f"unknown catalog curve {name!r}; known: {', '.join(CATALOG)}") from None
    params = [float(p) for p in params]
    if len(params) != arity:
        raise InputError(f"{name} takes {arity} parameter(s), got {len(params)}")
    (x, y, z), lo, hi = builder(*params)
    label = f"{name}({','.join(format(p, 'g') for p in params)})" if arity else name
    return CurveSpec.from_text(
        x, y, z,
        lo if t_min is None else t_min,
        hi if t_max is None else t_max,
        label,
    )


_BUILTIN_RE = re.compile(r"^\s*([A-Za-z_]\w*)\s*(?:\((.*)\))?\s*$")


def parse_builtin(text: str) -> CurveSpec:
    """Parse ``"name(p1, p2)"`` (or a bare ``"name"``) into a catalog curve."""
    m = _BUILTIN_RE.match(text)
    if not m:
        raise InputError(f"cannot parse builtin curve {text!r}")
    name, args = m.group(1), m.group(2)
    params = []
    if args and args.strip():
        for part in args.split(","):
            params.append(eval_constant(parse_expression(part, [])))
    return catalog_curve(name, params)


# ---------------------------------------------------------------------------
# file formats


def load_samples(csv_text: str, label: str = "samples") -> SampledCurve:
    """Parse CSV text with header ``t,x,y,z`` into a :class:`SampledCurve`."""
    reader = csv.reader(io.StringIO(csv_text))
    rows = []
    header = None
    for lineno, row in enumerate(reader, start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        if header is None:
            header = [cell.strip() for cell in row]
            if header != ["t", "x", "y", "z"]:
                raise InputError(f"line {lineno}: expected header 't,x,y,z', got {','.join(row)!r}")
            continue
        if len(row) != 4:
            raise InputError(f"line {lineno}: expected 4 fields, got {len(row)}")
        try:
            values = [float(cell) for cell in row]
        except ValueError:
            raise InputError(f"line {lineno}: non-numeric field in {','.join(row)!r}") from None
        if not all(math.isfinite(v) for v in values):
            raise InputError(f"line {lineno}: non-finite value")
        rows.append((lineno, values))
    if header is None:
        raise InputError("empty sample file")
    if len(rows) < MIN_SAMPLES:
        raise InputError(f"fewer than {MIN_SAMPLES} samples ({len(rows)} rows)")
    seen = {}
    for lineno, values in rows:
        t = values[0]
        if t in seen:
            raise InputError(f"duplicate t = {t!r} on lines {seen[t]} and {lineno}")
        seen[t] = lineno
    for (_, prev), (lineno, cur) in zip(rows, rows[1:]):
        if cur[0] <= prev[0]:
            raise InputError(f"line {lineno}: t is not increasing ({cur[0]!r} after {prev[0]!r})")
    data = np.array([values for _, values in rows])
    return SampledCurve(data[:, 0], data[:, 1:], label)


def resample_csv(curve, n: int) -> str:
    """CSV text with ``n`` rows sampled uniformly in ``t`` from ``curve``."""
    t = np.linspace(curve.t_min, curve.t_max, n)
    p = curve.position_jet(t, 0).value
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "x", "y", "z"])
    for ti, pi in zip(t, p):
        w.writerow([repr(float(ti))] + [repr(float(v)) for v in pi])
    return buf.getvalue()


def _parse_range(text, where):
    if ":" not in text:
        raise SpecFormatError(f"{where}: range must look like '<min>:<max>'")
    lo, hi = text.split(":", 1)
    try:
        return eval_constant(parse_expression(lo, [])), eval_constant(parse_expression(hi, []))
    except InputError as exc:
        raise SpecFormatError(f"{where}: {exc}") from None


def parse_key_values(text, allowed, required):
    """Shared reader for ``key = value`` spec files (``#`` starts a comment)."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SpecFormatError(f"line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in allowed:
            raise SpecFormatError(f"line {lineno}: unknown key {key!r}")
        if key in out:
            raise SpecFormatError(f"line {lineno}: duplicate key {key!r}")
        out[key] = (lineno, value)
    missing = [k for k in required if k not in out]
    if missing:
        raise SpecFormatError(f"missing key(s): {', '.join(missing)}")
    return out


def load_curve_spec(text: str) -> CurveSpec:
    """Read the ``x = ..., y = ..., z = ..., t = a:b, label = ...`` format."""
    kv = parse_key_values(text, {"x", "y", "z", "t", "label"}, ("x", "y", "z", "t"))
    asts = {}
    for key in "xyz":
        lineno, value = kv[key]
        try:
            asts[key] = parse_expression(value, ["t"])
        except InputError as exc:
            raise SpecFormatError(f"line {lineno}: {exc}") from None
    lineno, value = kv["t"]
    t_min, t_max = _parse_range(value, f"line {lineno}")
    label = kv["label"][1] if "label" in kv else "curve"
    return CurveSpec(asts["x"], asts["y"], asts["z"], t_min, t_max, label)
