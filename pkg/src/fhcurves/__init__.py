"""Entire curves built from translated rational curves, with finite-horizon verification."""

from .assembler import TruncatedCurve, assemble
from .catalogue import CurveCatalogue, RationalCurve, build_catalogue, validate_curve
from .config import RunConfig, load_config
from .exact import GaussianRational, Poly
from .nevanlinna import (PolynomialCurveEvaluator, characteristic_area, characteristic_fmt,
                         proximity)

__all__ = [
    "GaussianRational", "Poly", "RationalCurve", "CurveCatalogue", "build_catalogue",
    "validate_curve", "TruncatedCurve", "assemble", "PolynomialCurveEvaluator",
    "characteristic_fmt", "characteristic_area", "proximity", "RunConfig", "load_config",
]
