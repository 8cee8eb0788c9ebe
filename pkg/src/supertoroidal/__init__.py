"""Exact constructions and mechanical verification of classical toroidal
Lie superalgebra presentations and their free-field realizations."""

from .scalars import GaussianRational, parse_scalar
from .rootdata import (AmbientVector, RootDatum, build_root_datum, inner,
                       cartan_entry, cartan_matrix, positive_roots,
                       serre_exponent, appendix_crosscheck,
                       reference_cartan_pattern)
from .oscillator import FieldSymbol, GeneratorSet, COMBINATION, IDENTIFIED
from .wick import (LocalField, DistributionExpr, normal_order,
                   bracket_quadratic, bracket_nested, bracket_elementary,
                   simplify)
from .realize import (FieldAssignment, RelationTemplate, RelationCheck,
                      realize_fields, relation_suite, verify, extract_level,
                      central_tower, run_verification, classify_residual,
                      EXACT, MOD_NULL, FAIL)

__all__ = [
    "GaussianRational", "parse_scalar",
    "AmbientVector", "RootDatum", "build_root_datum", "inner", "cartan_entry",
    "cartan_matrix", "positive_roots", "serre_exponent", "appendix_crosscheck",
    "reference_cartan_pattern",
    "FieldSymbol", "GeneratorSet", "COMBINATION", "IDENTIFIED",
    "LocalField", "DistributionExpr", "normal_order", "bracket_quadratic",
    "bracket_nested", "bracket_elementary", "simplify",
    "FieldAssignment", "RelationTemplate", "RelationCheck", "realize_fields",
    "relation_suite", "verify", "extract_level", "central_tower",
    "run_verification", "classify_residual", "EXACT", "MOD_NULL", "FAIL",
]

__version__ = "0.1.0"
