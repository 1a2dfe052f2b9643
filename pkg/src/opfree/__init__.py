"""Relative free algebras over finite operads, computed as colimits over
truncated monoidal envelopes."""

__version__ = "0.1.0"

from .fincat import FiniteCategory, SetDiagram, StructuralError, colimit_set, finality_check
from .operad import (CapError, Op, OperadMorphism, OperadSpec, builder_assoc, builder_cocartesian,
                     builder_com, builder_e0, builder_triv, check_operad_laws, e0_to_assoc, product,
                     terminal_map)
from .target import (AlgebraTable, Monoid, algebra_check, finset_cartesian, monoid_algebra,
                     pointed_set_algebra, ptdfinset_cartesian)
from .envelope import Envelope, build_envelope, check_envelope_iso
from .freealg import (TruncatedAlgebra, adjunction_check, classic_free, colim_universal_property_check,
                      compare_free, free_algebra)
from .algcolim import (AlgebraDiagram, colim_algebras, contractible_compat_check, pushout_commutative,
                       sifted_preservation_check)

__all__ = [
    "AlgebraDiagram",
    "AlgebraTable",
    "CapError",
    "Envelope",
    "FiniteCategory",
    "Monoid",
    "Op",
    "OperadMorphism",
    "OperadSpec",
    "SetDiagram",
    "StructuralError",
    "TruncatedAlgebra",
    "adjunction_check",
    "algebra_check",
    "build_envelope",
    "builder_assoc",
    "builder_cocartesian",
    "builder_com",
    "builder_e0",
    "builder_triv",
    "check_envelope_iso",
    "check_operad_laws",
    "classic_free",
    "colim_algebras",
    "colim_universal_property_check",
    "colimit_set",
    "compare_free",
    "contractible_compat_check",
    "e0_to_assoc",
    "finality_check",
    "finset_cartesian",
    "free_algebra",
    "monoid_algebra",
    "pointed_set_algebra",
    "product",
    "ptdfinset_cartesian",
    "pushout_commutative",
    "sifted_preservation_check",
    "terminal_map",
]
