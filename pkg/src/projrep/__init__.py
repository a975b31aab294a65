"""Exact projective-representation toolkit for special p-groups."""

from .pcgroup import (
    BudgetError,
    Element,
    PcPresentation,
    PresentationError,
    SubgroupSpec,
    check_homomorphism,
    collect,
    conjugacy_classes,
    consistency_check,
    enumerate_elements,
    group_order,
    quotient_by_central,
    structure,
)
from . import families, cohomology, reps, oracle

__version__ = "0.1.0"
