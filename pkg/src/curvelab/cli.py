"""``curvelab`` command-line front end.

Exit codes: 0 success, 1 input or parse error, 2 geometric degeneracy,
3 I/O error. Output files go to ``--out`` and are named after the curve's
label, so repeated runs with the same arguments overwrite identical bytes.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _svg
from .classify import (
    anti_salkowski_link, bertrand_fit, classify, constancy, default_tol,
    mannheim_partner_torsion, mannheim_test,
)
from .curves import load_curve_spec, load_samples, parse_builtin
from .errors import CurvelabError, DegeneracyError, ExprDomainError, InputError
from .frenet import MIN_FRENET_SAMPLES, sample_uniform_arclength
from .indicatrix import IndicatrixKind, axis_locus, axis_tangency_test, indicatrix_csv, indicatrix_points
from .surface import (
    asymptotic_helix_test, darboux_samples, geodesic_helix_test, load_surface_spec,
    load_uv_curve, parse_builtin_surface,
)

COMMANDS = ("analyze", "classify", "indicatrix", "axis", "partner", "surface", "plot")
FORMATS = ("csv", "json", "svg")
PROFILES = ("kappa", "tau", "tau_kappa", "sigma", "mannheim", "bertrand_residual")
DEFAULT_FORMATS = {
    "analyze": ("csv",),
    "classify": ("json",),
    "indicatrix": ("csv",),
    "axis": ("csv", "json"),
    "partner": ("csv", "json"),
    "surface": ("json",),
    "plot": ("svg",),
}
ENV_TOL = "CURVELAB_TOL"


class UsageError(InputError):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse, but bad usage exits with status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    command: str
    curve: str | None
    builtin: str | None
    points: str | None
    surface: str | None
    builtin_surface: str | None
    uv: str | None
    uv_text: str | None
    n_samples: int
    tol: float | None
    lam: float | None
    kind: IndicatrixKind
    out: Path
    formats: tuple
    profiles: tuple


def _positive_float(text, what):
    try:
        value = float(text)
    except ValueError:
        raise UsageError(f"{what} must be a number, got {text!r}") from None
    if not (value > 0 and math.isfinite(value)):
        raise UsageError(f"{what} must be positive and finite, got {text!r}")
    return value


def _split_list(text, allowed, what):
    items = tuple(dict.fromkeys(p.strip() for p in text.split(",") if p.strip()))
    bad = [p for p in items if p not in allowed]
    if bad or not items:
        raise UsageError(f"unknown {what} {', '.join(bad) or repr(text)}; choose from {', '.join(allowed)}")
    return items


def build_parser():
    p = _Parser(prog="curvelab", description="Frenet apparatus and special-curve tests for space curves.")
    p.add_argument("command", choices=COMMANDS)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--curve", metavar="FILE", help="curve spec file (x = ..., y = ..., z = ..., t = a:b)")
    src.add_argument("--builtin", metavar="NAME(args)", help="catalog curve, e.g. 'circular_helix(2,1)'")
    src.add_argument("--points", metavar="CSV", help="sampled curve with header t,x,y,z")
    surf = p.add_mutually_exclusive_group()
    surf.add_argument("--surface", metavar="FILE", help="surface spec file (x, y, z in u, v; u = a:b; v = a:b)")
    surf.add_argument("--builtin-surface", metavar="NAME(args)", help="catalog surface, e.g. 'cylinder(1)'")
    uv = p.add_mutually_exclusive_group()
    uv.add_argument("--uv", metavar="FILE", help="curve on the surface (u = ..., v = ..., t = a:b)")
    uv.add_argument("--uv-text", metavar="SPEC", help="inline uv curve, e.g. 'u=t; v=t; t=0:4*pi'")
    p.add_argument("--samples", type=int, default=256, metavar="N", help="arclength samples (default 256)")
    p.add_argument("--tol", metavar="X", help=f"constancy tolerance (overrides ${ENV_TOL})")
    p.add_argument("--lambda", dest="lam", metavar="X", help="Mannheim partner distance")
    p.add_argument("--kind", default="tangent", help="indicatrix: tangent, normal or binormal")
    p.add_argument("--out", default=".", metavar="DIR", help="output directory (default .)")
    p.add_argument("--format", dest="formats", metavar="LIST", help="comma list from csv,json,svg")
    p.add_argument("--profiles", default="kappa,tau", metavar="LIST",
                   help=f"plot profiles, comma list from {','.join(PROFILES)}")
    return p


def make_config(args, environ) -> RunConfig:
    if args.samples < MIN_FRENET_SAMPLES:
        raise UsageError(f"n_samples below minimum ({args.samples} < {MIN_FRENET_SAMPLES})")
    tol = args.tol if args.tol is not None else environ.get(ENV_TOL)
    tol = None if tol is None else _positive_float(tol, "tolerance")
    lam = None
    if args.lam is not None:
        try:
            lam = float(args.lam)
        except ValueError:
            raise UsageError(f"--lambda must be a number, got {args.lam!r}") from None
    formats = DEFAULT_FORMATS[args.command] if args.formats is None else _split_list(args.formats, FORMATS, "format")
    return RunConfig(
        command=args.command, curve=args.curve, builtin=args.builtin, points=args.points,
        surface=args.surface, builtin_surface=args.builtin_surface, uv=args.uv, uv_text=args.uv_text,
        n_samples=args.samples, tol=tol, lam=lam, kind=IndicatrixKind.parse(args.kind),
        out=Path(args.out), formats=formats, profiles=_split_list(args.profiles, PROFILES, "profile"),
    )


# ---------------------------------------------------------------------------
# helpers


def _read(path):
    return Path(path).read_text(encoding="utf-8")


def load_curve(cfg: RunConfig):
    if cfg.builtin is not None:
        return parse_builtin(cfg.builtin)
    if cfg.curve is not None:
        return load_curve_spec(_read(cfg.curve))
    if cfg.points is not None:
        return load_samples(_read(cfg.points), label=Path(cfg.points).stem)
    raise UsageError("one of --curve, --builtin or --points is required")


def stem(label: str) -> str:
    """File-name-safe version of a label: ``circular_helix(2,1)`` -> ``circular_helix_2_1``."""
    return re.sub(r"[^A-Za-z0-9.-]+", "_", label).strip("_") or "curve"


def _json_safe(obj):
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    return obj


def dumps(obj) -> str:
    return json.dumps(_json_safe(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _csv(header, columns) -> str:
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


class _Writer:
    def __init__(self, cfg, label):
        self.cfg = cfg
        self.stem = stem(label)
        self.written = []

    def want(self, fmt):
        return fmt in self.cfg.formats

    def write(self, suffix, text):
        self.cfg.out.mkdir(parents=True, exist_ok=True)
        path = self.cfg.out / f"{self.stem}_{suffix}"
        path.write_text(text, encoding="utf-8", newline="\n")
        self.written.append(path)
        return path


def _tol(cfg, samples):
    return default_tol(samples) if cfg.tol is None else cfg.tol


def _profile_columns(samples, tol):
    k, tau = samples.kappa, samples.tau
    fit = bertrand_fit(samples, tol)
    return {
        "kappa": k,
        "tau": tau,
        "tau_kappa": tau / k,
        "sigma": samples.sigma,
        "mannheim": k / (k * k + tau * tau),
        "bertrand_residual": fit.lambda_ * k + fit.eta * np.abs(tau) - 1.0,
    }


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(cfg: RunConfig):
    curve = load_curve(cfg)
    samples = sample_uniform_arclength(curve, cfg.n_samples)
    w = _Writer(cfg, curve.label)
    cols = _profile_columns(samples, _tol(cfg, samples))
    names = ("kappa", "tau", "tau_kappa", "sigma", "mannheim")
    if w.want("csv"):
        w.write("frenet.csv", samples.to_csv())
        w.write("profiles.csv", _csv(("s",) + names, [samples.s] + [cols[n] for n in names]))
    if w.want("json"):
        summary = {
            "schema_version": 1, "label": curve.label, "n_samples": len(samples),
            "length": samples.length,
            "profiles": {n: {"min": float(np.min(cols[n])), "max": float(np.max(cols[n])),
                             "mean": float(np.mean(cols[n]))} for n in names},
        }
        w.write("analyze.json", dumps(summary))
    if w.want("svg"):
        w.write("profiles.svg", _svg.line_chart(
            [(n, samples.s, cols[n]) for n in ("kappa", "tau")], title=f"{curve.label}: curvature and torsion"))
    return w


def cmd_classify(cfg: RunConfig):
    curve = load_curve(cfg)
    samples = sample_uniform_arclength(curve, cfg.n_samples)
    report = classify(samples, tol=cfg.tol, lam=cfg.lam)
    w = _Writer(cfg, curve.label)
    if w.want("json"):
        w.write("classify.json", dumps(report.to_dict()))
    if w.want("csv"):
        w.write("verdicts.csv", "test,verdict\n" + "".join(
            f"{k},{str(v).lower()}\n" for k, v in sorted(report.verdicts.items())))
    if w.want("svg"):
        cols = _profile_columns(samples, report.tol)
        w.write("classify.svg", _svg.line_chart(
            [("tau/kappa", samples.s, cols["tau_kappa"]), ("sigma", samples.s, cols["sigma"])],
            title=f"{curve.label}: helix and slant-helix profiles"))
    print(" ".join(f"{k}={str(v).lower()}" for k, v in sorted(report.verdicts.items())))
    return w


def cmd_indicatrix(cfg: RunConfig):
    from .indicatrix import indicatrix_frames

    curve = load_curve(cfg)
    samples = sample_uniform_arclength(curve, cfg.n_samples)
    # the frame computation raises if the indicatrix degenerates to a point
    indicatrix_frames(samples, cfg.kind)
    w = _Writer(cfg, curve.label)
    if w.want("csv"):
        w.write(f"{cfg.kind.value}_indicatrix.csv", indicatrix_csv(samples, cfg.kind))
    if w.want("svg"):
        x, y = _svg.stereographic(indicatrix_points(samples, cfg.kind))
        w.write(f"{cfg.kind.value}_indicatrix.svg", _svg.line_chart(
            [(f"{cfg.kind.value} indicatrix", x, y)],
            title=f"{curve.label}: {cfg.kind.value} indicatrix (stereographic)", xlabel="", equal_aspect=True))
    if w.want("json"):
        w.write(f"{cfg.kind.value}_indicatrix.json", dumps({
            "schema_version": 1, "label": curve.label, "kind": cfg.kind.value, "n_samples": len(samples),
        }))
    return w


def cmd_axis(cfg: RunConfig):
    curve = load_curve(cfg)
    samples = sample_uniform_arclength(curve, cfg.n_samples)
    report = axis_tangency_test(samples, tol_angle=cfg.tol, mannheim_tol=cfg.tol)
    w = _Writer(cfg, curve.label)
    locus = axis_locus(samples)
    if w.want("csv"):
        w.write("axis.csv", locus.to_csv())
    if w.want("json"):
        w.write("axis.json", dumps({"schema_version": 1, "label": curve.label, **report.to_dict()}))
    if w.want("svg"):
        w.write("axis.svg", _svg.line_chart(
            [("angle(P', W)", samples.s, locus.line_angle)], title=f"{curve.label}: screw-axis tangency"))
    if report.note:
        print(f"note: {report.note}", file=sys.stderr)
    print(f"axis_tangent={str(report.verdict).lower()} mannheim={str(report.mannheim_verdict).lower()}")
    return w


def cmd_partner(cfg: RunConfig):
    curve = load_curve(cfg)
    samples = sample_uniform_arclength(curve, cfg.n_samples)
    tol = _tol(cfg, samples)
    lam = cfg.lam if cfg.lam is not None else mannheim_test(samples, tol).lambda_
    partner = mannheim_partner_torsion(samples, lam)
    link = anti_salkowski_link(samples, lam, tol)
    w = _Writer(cfg, curve.label)
    if w.want("csv"):
        w.write("partner.csv", _csv(("s", "tau_star_curvature", "tau_star_indicatrix"),
                                    [samples.s, partner.profile_a, partner.profile_b]))
    if w.want("json"):
        w.write("partner.json", dumps({
            "schema_version": 1, "label": curve.label, "lambda": lam,
            "lambda_source": "argument" if cfg.lam is not None else "mannheim_mean",
            "max_abs_diff": partner.max_abs_diff,
            "anti_salkowski": link.to_dict(),
        }))
    if w.want("svg"):
        w.write("partner.svg", _svg.line_chart(
            [("tau* from kappa, tau", samples.s, partner.profile_a),
             ("tau* from indicatrices", samples.s, partner.profile_b)],
            title=f"{curve.label}: partner torsion, lambda={lam:g}"))
    return w


def cmd_surface(cfg: RunConfig):
    if cfg.builtin_surface is not None:
        surface = parse_builtin_surface(cfg.builtin_surface)
    elif cfg.surface is not None:
        surface = load_surface_spec(_read(cfg.surface))
    else:
        raise UsageError("surface needs --surface or --builtin-surface")
    if cfg.uv is not None:
        uv = load_uv_curve(_read(cfg.uv))
    elif cfg.uv_text is not None:
        uv = load_uv_curve(cfg.uv_text)
    else:
        raise UsageError("surface needs --uv or --uv-text")
    tol = 1e-6 if cfg.tol is None else cfg.tol
    geo = geodesic_helix_test(surface, uv, cfg.n_samples, tol)
    asy = asymptotic_helix_test(surface, uv, cfg.n_samples, tol)
    w = _Writer(cfg, f"{surface.label}_{uv.label}")
    if w.want("json"):
        w.write("surface.json", dumps({
            "schema_version": 1, "surface": surface.label, "uv_curve": uv.label,
            "n_samples": cfg.n_samples, "tol": tol,
            "geodesic": geo.to_dict(), "asymptotic": asy.to_dict(),
        }))
    if w.want("csv") or w.want("svg"):
        d = darboux_samples(surface, uv, cfg.n_samples)
        if w.want("csv"):
            w.write("darboux.csv", _csv(("s", "t", "kappa_g", "kappa_n", "t_r"),
                                        [d.s, d.t, d.kappa_g, d.kappa_n, d.t_r]))
        if w.want("svg"):
            w.write("darboux.svg", _svg.line_chart(
                [("kappa_g", d.s, d.kappa_g), ("kappa_n", d.s, d.kappa_n), ("t_r", d.s, d.t_r)],
                title=f"{surface.label} / {uv.label}: Darboux invariants"))
    print(f"geodesic={str(geo.flag).lower()} geodesic_helix_test={str(geo.verdict).lower()} "
          f"asymptotic={str(asy.flag).lower()} asymptotic_helix_test={str(asy.verdict).lower()}")
    return w


def cmd_plot(cfg: RunConfig):
    curve = load_curve(cfg)
    samples = sample_uniform_arclength(curve, cfg.n_samples)
    cols = _profile_columns(samples, _tol(cfg, samples))
    w = _Writer(cfg, curve.label)
    name = "_".join(cfg.profiles)
    if w.want("svg"):
        w.write(f"plot_{name}.svg", _svg.line_chart(
            [(p, samples.s, cols[p]) for p in cfg.profiles], title=f"{curve.label}: {', '.join(cfg.profiles)}"))
    if w.want("csv"):
        w.write(f"plot_{name}.csv", _csv(("s",) + cfg.profiles, [samples.s] + [cols[p] for p in cfg.profiles]))
    return w


HANDLERS = {
    "analyze": cmd_analyze, "classify": cmd_classify, "indicatrix": cmd_indicatrix,
    "axis": cmd_axis, "partner": cmd_partner, "surface": cmd_surface, "plot": cmd_plot,
}


def main(argv=None, environ=None) -> int:
    environ = os.environ if environ is None else environ
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = make_config(args, environ)
        writer = HANDLERS[cfg.command](cfg)
    except DegeneracyError as exc:
        print(f"curvelab: degenerate: {exc}", file=sys.stderr)
        return 2
    except (InputError, ExprDomainError) as exc:
        print(f"curvelab: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"curvelab: I/O error: {exc}", file=sys.stderr)
        return 3
    except CurvelabError as exc:
        print(f"curvelab: error: {exc}", file=sys.stderr)
        return 1
    for path in writer.written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
