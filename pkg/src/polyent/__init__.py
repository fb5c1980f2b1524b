"""Exact polynomial entropy of piecewise-linear interval maps."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source checkout
    __version__ = "0.1.0"

from .classify import polynomial_entropy, sharkovskii_type, zero_entropy_check
from .exactnum import Rational, RInterval
from .families import double, f0, gn, plateau, tent
from .fixstruct import essential_intervals, is_type1, max_chain, orbit_closure
from .horseshoe import HorseshoeCertificate, horseshoe_from_chain, verify_horseshoe
from .plmap import PLMap, compose, load_map

__all__ = [
    "HorseshoeCertificate",
    "PLMap",
    "RInterval",
    "Rational",
    "compose",
    "double",
    "essential_intervals",
    "f0",
    "gn",
    "horseshoe_from_chain",
    "is_type1",
    "load_map",
    "max_chain",
    "orbit_closure",
    "plateau",
    "polynomial_entropy",
    "sharkovskii_type",
    "tent",
    "verify_horseshoe",
    "zero_entropy_check",
]
