"""Frenet apparatus of space curves and norm-based tests for special curves."""

from .classify import (
    ClassificationReport, ConstancyReport, anti_salkowski_link, bertrand_fit, classify,
    constancy, general_helix_test, mannheim_partner_torsion, mannheim_test, sigma_slant_test,
    slant_via_binormal_indicatrix, slant_via_tangent_indicatrix,
)
from .curves import (
    CATALOG, CurveSpec, SampledCurve, catalog_curve, evaluate, load_curve_spec, load_samples,
    parse_builtin, resample_csv,
)
from .errors import (
    ArityError, CurvelabError, DegeneracyError, ExprDomainError, ExprSyntaxError,
    IndicatrixDegenerate, InputError, KappaVanishes, NonRegularCurve, PartnerTorsionUndefined,
    SpecFormatError, SurfaceDegenerate, UnknownIdentifierError,
)
from .expr import eval_jet, evaluate_ast, parse_expression, to_text
from .frenet import (
    FrenetSample, FrenetSamples, arclength, frenet_apparatus, param_at_arclength,
    sample_uniform_arclength, total_length,
)
from .indicatrix import (
    IndicatrixKind, axis_locus, axis_tangency_test, darboux_axis_point, indicatrix_frame,
    indicatrix_frames, indicatrix_points,
)
from .jet import DualJet, Jet
from .surface import (
    SurfaceSpec, UVCurve, asymptotic_helix_test, catalog_surface, darboux_frame, darboux_samples,
    geodesic_helix_test, load_surface_spec, load_uv_curve,
)

__version__ = "0.1.0"
