"""Beauville structures and their orbits on 2-generator p-groups of small class."""
from __future__ import annotations

from .action import a_u_order, au_generators, j_group_order, orbit_of, orbit_partition
from .automorphism import AutMap, aut_order, enumerate_aut, out_order
from .beauville import (
    Structure,
    Triple,
    count_structures,
    enumerate_structure_keys,
    is_beauville_direct,
    is_beauville_fast,
    random_structure,
)
from .formulas import theorem_A, theorem_B, theorem_C
from .groups import Element, Family, Group, GroupSpec

__version__ = "0.1.0"

__all__ = [
    "AutMap", "Element", "Family", "Group", "GroupSpec", "Structure", "Triple",
    "a_u_order", "au_generators", "aut_order", "count_structures", "enumerate_aut",
    "enumerate_structure_keys", "is_beauville_direct", "is_beauville_fast", "j_group_order",
    "orbit_of", "orbit_partition", "out_order", "random_structure", "theorem_A", "theorem_B", "theorem_C",
]
