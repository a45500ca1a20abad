"""Exact computation of the mu-ordinary Hasse invariant on unitary Dieudonne modules.

The ring layer (``arith``, ``matrix``, ``semilinear``) does truncated Witt
vector arithmetic over F_{l^{2k}}; ``dieudonne`` builds polarized graded
modules, ``newton`` and ``hasse`` compute the two sides of the comparison, and
``census`` runs it over many modules.
"""
from .arith import RingElement, WittRing, make_ring
from .census import run_exhaustive_bt1, run_random_census, verify_rigidity
from .dieudonne import (
    DieudonneModule,
    PelParams,
    canonical_mu_ordinary,
    format_module,
    from_F_block,
    hodge,
    parse_module,
    random_module,
    validate,
)
from .hasse import ell_rank, mu_hasse
from .newton import NewtonPolygon, mu_ordinary_polygon, newton_polygon

__version__ = "0.1.0"

__all__ = [
    "RingElement",
    "WittRing",
    "make_ring",
    "DieudonneModule",
    "PelParams",
    "canonical_mu_ordinary",
    "format_module",
    "from_F_block",
    "hodge",
    "parse_module",
    "random_module",
    "validate",
    "ell_rank",
    "mu_hasse",
    "NewtonPolygon",
    "mu_ordinary_polygon",
    "newton_polygon",
    "run_exhaustive_bt1",
    "run_random_census",
    "verify_rigidity",
]
