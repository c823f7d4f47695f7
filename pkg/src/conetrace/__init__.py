"""Heat-trace expansion of the Laplacian on a manifold with a conic singularity."""

from .cross_section import (Circle, Custom, FlatTorus, ModelCrossSection, ProjectiveSpace,
                            Sphere, SpectrumSlice, heat_coefficients, nu_of, spectrum)
from .errors import ConetraceError, NumericFailure, Unsupported, ValidationError
from .expansion import (HeatTraceExpansion, assemble_expansion, b_direct, b_formula,
                        c_coefficient, mellin_bessel_value, resolvent_to_heat)
from .laurent import LaurentValue
from .oracle import compare_report, dirichlet_cone_spectrum, fit_expansion, oracle_b
from .regint import TaggedFunction, mellin, regularized_integral
from .zeta import ZetaContext, zeta_eval, zeta_laurent, zeta_residue_formula

__version__ = "0.1.0"

__all__ = [
    "Circle", "Custom", "FlatTorus", "ModelCrossSection", "ProjectiveSpace", "Sphere",
    "SpectrumSlice", "heat_coefficients", "nu_of", "spectrum",
    "ConetraceError", "NumericFailure", "Unsupported", "ValidationError",
    "HeatTraceExpansion", "assemble_expansion", "b_direct", "b_formula", "c_coefficient",
    "mellin_bessel_value", "resolvent_to_heat", "LaurentValue",
    "compare_report", "dirichlet_cone_spectrum", "fit_expansion", "oracle_b",
    "TaggedFunction", "mellin", "regularized_integral",
    "ZetaContext", "zeta_eval", "zeta_laurent", "zeta_residue_formula",
    "__version__",
]
