"""Certified free subgroups of two-generator hyperbolic isometry groups."""

from . import certifier, cli, constants, errors, geometry, isometry, pingpong, propcheck, tubes
from .certifier import FreenessCertificate, certify_free, oracle_free_up_to, verify_certificate
from .constants import PipelineConstants
from .geometry import GeodesicLine, HalfSpace, IdealPoint, SpacePoint
from .isometry import Isometry

__all__ = [
    "certifier",
    "cli",
    "constants",
    "errors",
    "geometry",
    "isometry",
    "pingpong",
    "propcheck",
    "tubes",
    "FreenessCertificate",
    "certify_free",
    "oracle_free_up_to",
    "verify_certificate",
    "PipelineConstants",
    "GeodesicLine",
    "HalfSpace",
    "IdealPoint",
    "SpacePoint",
    "Isometry",
]

__version__ = "0.1.0"
