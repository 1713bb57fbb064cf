"""Class-preserving automorphisms of truncated unitriangular groups over finite fields."""
from .errors import *  # noqa: F401,F403
from .field import FieldCtx, FieldElement, field_add, field_create, field_inv, field_mul
from .group import (GroupCtx, GroupElement, center, commutator, conjugate, elem_decode,
                    elem_encode, group_create, inverse, lower_central_series, multiply,
                    transvection)
from .conjugacy import ClassTable, class_table, find_conjugator, is_camina
from .morphisms import (Automorphism, GenMap, closure, compose, extend_genmap,
                        inner_automorphism, inner_automorphisms, invert, is_central,
                        is_class_preserving, is_inner, is_normal_automorphism)
from .enumeration import (AutcParams, AutcResult, autc_from_params, burnside_generators,
                          construct_thm27, enumerate_autc_brute, enumerate_autc_generated,
                          enumerate_autc_structured, verify_theorem_a, verify_theorem_b)

__version__ = "0.1.0"
