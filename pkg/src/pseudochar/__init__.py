"""Exact pseudocharacters, determinants and Lafforgue pseudocharacters of finite groups."""

from .correspondence import (ConversionReport, alpha, alpha_inverse, char_p_separation_demo, roundtrip_check,
                             semisimple_bijection_check, taylor_bridge)
from .determinants import (Determinant, amitsur_table, check_multiplicative_homogeneous, det_from_letters,
                           det_from_rep, det_from_theta, det_product, det_pullback, evaluate, generic_determinant,
                           is_gl_valued, lambda_of)
from .groups_words import (FiniteGroup, FreeAlgebraElement, GroupAlgebraElement, GroupMorphism, Representation,
                           builtin_group, cyclic, symmetric)
from .lafforgue import (DetInv, DonkinExpression, LafforguePC, LambdaGen, harvest_theta, invariance_pit, lpc1_defect,
                        lpc2_defect, lpc_from_rep, lpc_from_theta, theta_evaluate)
from .matrices import SquareMatrix, charpoly, det, exterior_trace
from .rings import finite_field, ring_from_name
from .taylor import TaylorPC, is_taylor_pc, taylor_defect, taylor_from_rep

__version__ = "0.1.0"
