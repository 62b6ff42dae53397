"""Secant degeneracy index of strata of binary forms.

Exact certificates (relations among forms with prescribed root
multiplicities), combinatorial bounds and a numerical search for new
relations.
"""
from .exactalg import QQ, FieldElement, NumberField, quadratic_field
from .forms import BinaryForm, FactoredForm, ProjRoot, expand
from .partitions import Partition
from .relations import CertificateLibrary, SecantRelation, verify_relation
from .bounds import BoundsBracket, bracket
from .orbits import Classification, classify_index

__all__ = [
    "QQ", "FieldElement", "NumberField", "quadratic_field",
    "BinaryForm", "FactoredForm", "ProjRoot", "expand",
    "Partition",
    "CertificateLibrary", "SecantRelation", "verify_relation",
    "BoundsBracket", "bracket",
    "Classification", "classify_index",
]
