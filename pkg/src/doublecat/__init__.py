"""Double-categorical toolkit over four finitely representable instances.

Collages (lax colimits), two-stage glueing equivalences, and exponentials of
locally closed inclusions, for finite posets, finite topological spaces,
finite frames and finite categories, all verified by exhaustive desk-scale
enumeration.
"""
from . import cat_instance, order_instances  # noqa: F401  (registers instances)
from .core import (BoundaryMismatch, Cell, CompanionData, ConditionFails,
                   ConjointData, HMor, LawReport, LawViolation, NoMediator,
                   NonUnique, NotNatural, Obj, SizeBoundExceeded, Tag, VMor,
                   ZeroObject, companion, compose_cells, compose_horizontal,
                   compose_vertical, conjoint, identity_cell_of_hmor,
                   identity_cell_of_vmor, identity_h, identity_v, instance,
                   make_cell, make_hmor, make_obj, make_vmor, terminal_object,
                   validate_framed, zero_object)

__all__ = [
    "Tag", "Obj", "HMor", "VMor", "Cell", "CompanionData", "ConjointData",
    "ZeroObject", "LawReport", "LawViolation", "BoundaryMismatch",
    "ConditionFails", "NotNatural", "SizeBoundExceeded", "NoMediator",
    "NonUnique", "make_obj", "make_hmor", "make_vmor", "make_cell",
    "identity_h", "identity_v", "identity_cell_of_hmor",
    "identity_cell_of_vmor", "compose_horizontal", "compose_vertical",
    "compose_cells", "companion", "conjoint", "zero_object",
    "terminal_object", "validate_framed", "instance",
]
