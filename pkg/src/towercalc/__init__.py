"""Exact tower calculus for bounded chain complexes of finitely presented
abelian groups: truncations, tower sections, limits, fracture squares, and
homotopy-fiber bookkeeping, all over arbitrary-precision integers."""

from .certificates import Certificate
from .complexes import (
    ChainComplex,
    ChainMap,
    hom_complex,
    homology,
    homology_group,
    moore_complex,
    sphere_complex,
    zero_complex,
)
from .errors import ParseError, ValidationError
from .exactalg import (
    FpAbelianGroup,
    GroupMap,
    IntegerMatrix,
    Presentation,
    smith_normal_form,
)
from .fracture import PrimePartition, arithmetic_square_check, fracture_cospan
from .gen import GenProfile, generate, random_complex
from .hofib import build_hofib_section, hofib_factorization
from .holim import hypercomplete_check, milnor_check, tower_limit, uct_ladder
from .sections import CospanSection, TowerSection, free_postnikov_tower, postnikov_tower
from .serialize import load, save
from .trunc import connective_cover, layer, postnikov_section

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "ChainComplex",
    "ChainMap",
    "CospanSection",
    "FpAbelianGroup",
    "GenProfile",
    "GroupMap",
    "IntegerMatrix",
    "ParseError",
    "Presentation",
    "PrimePartition",
    "TowerSection",
    "ValidationError",
    "arithmetic_square_check",
    "build_hofib_section",
    "connective_cover",
    "fracture_cospan",
    "free_postnikov_tower",
    "generate",
    "hofib_factorization",
    "hom_complex",
    "homology",
    "homology_group",
    "hypercomplete_check",
    "layer",
    "load",
    "milnor_check",
    "moore_complex",
    "postnikov_section",
    "postnikov_tower",
    "random_complex",
    "save",
    "smith_normal_form",
    "sphere_complex",
    "tower_limit",
    "uct_ladder",
    "zero_complex",
]
