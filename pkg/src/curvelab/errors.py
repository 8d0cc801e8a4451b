"""Exception hierarchy.

Two families matter to callers (and map onto CLI exit codes): ``InputError``
for malformed user input and ``DegeneracyError`` for geometry that is valid
input but where the requested quantity does not exist.
"""


class CurvelabError(Exception):
    pass


class InputError(CurvelabError, ValueError):
    pass


class ExprSyntaxError(InputError):
    """Malformed expression text. ``offset`` is a 0-based byte offset."""

    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.reason = message


class UnknownIdentifierError(ExprSyntaxError):
    pass


class ArityError(ExprSyntaxError):
    pass


class ExprDomainError(CurvelabError, ArithmeticError):
    """Evaluation left the real domain of a function."""

    def __init__(self, reason, subexpression):
        super().__init__(f"{reason} in '{subexpression}'")
        self.reason = reason
        self.subexpression = subexpression


class SpecFormatError(InputError):
    pass


class DegeneracyError(CurvelabError):
    pass


class NonRegularCurve(DegeneracyError):
    def __init__(self, t):
        super().__init__(f"curve is not regular (speed below 1e-12) at t={t!r}")
        self.t = t


class KappaVanishes(DegeneracyError):
    """The curvature vanishes, so the principal normal is undefined."""

    def __init__(self, t, s=None):
        where = f"t={t!r}" if s is None else f"s={s!r} (t={t!r})"
        super().__init__(f"curvature vanishes at {where}; Frenet frame undefined")
        self.t = t
        self.s = s


class IndicatrixDegenerate(DegeneracyError):
    def __init__(self, kind, s):
        super().__init__(f"{kind} indicatrix is stationary at s={s!r}; its frame is undefined")
        self.kind = kind
        self.s = s


class PartnerTorsionUndefined(DegeneracyError):
    def __init__(self, s):
        super().__init__(f"torsion vanishes at s={s!r}; Mannheim partner torsion undefined")
        self.s = s


class SurfaceDegenerate(DegeneracyError):
    pass
