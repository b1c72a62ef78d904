"""Finite multiple group racks and coloring counts of spatial trivalent graph diagrams."""

__version__ = "0.1.0"

from .coloring import (Coloring, StarResult, assert_move_invariance, brute_force_count, check_property_star,
                       count_colorings, enumerate_colorings, is_coloring)
from .diagram import Arc, Crossing, Diagram, Vertex, isomorphic, parse, serialize, validate
from .errors import CocycleInvalid, ConstructionError, DiagramError, FormatError, MgrackError, MoveError
from .finite_group import (FiniteGroup, SubgroupWitness, commutator, conjugate, cyclic_group, is_normal_subgroup,
                           normal_subgroups, s3_presented, semidirect_right_conj, verify_group_axioms)
from .mgr import (CocycleData, MultipleGroupRack, abelian_extension, associated_mgr, extension_projection,
                  is_mcq, is_mgr_homomorphism, semidirect_mgr, star_inverse, verify_mgr_axioms)
from .moves import MoveSpec, apply_move, connected_sum
from .rack import (GFamilyOfRacks, Rack, dihedral_quandle, example_z3_s3, gfamily_from_rack, is_quandle, rack_type,
                   verify_gfamily_axioms, verify_rack_axioms)

__all__ = [
    "Arc",
    "CocycleData",
    "CocycleInvalid",
    "Coloring",
    "ConstructionError",
    "Crossing",
    "Diagram",
    "DiagramError",
    "FiniteGroup",
    "FormatError",
    "GFamilyOfRacks",
    "MgrackError",
    "MoveError",
    "MoveSpec",
    "MultipleGroupRack",
    "Rack",
    "StarResult",
    "SubgroupWitness",
    "Vertex",
    "abelian_extension",
    "apply_move",
    "assert_move_invariance",
    "associated_mgr",
    "brute_force_count",
    "check_property_star",
    "commutator",
    "conjugate",
    "connected_sum",
    "count_colorings",
    "cyclic_group",
    "dihedral_quandle",
    "enumerate_colorings",
    "example_z3_s3",
    "extension_projection",
    "gfamily_from_rack",
    "is_coloring",
    "is_mcq",
    "is_mgr_homomorphism",
    "is_normal_subgroup",
    "is_quandle",
    "isomorphic",
    "normal_subgroups",
    "parse",
    "rack_type",
    "s3_presented",
    "semidirect_mgr",
    "semidirect_right_conj",
    "serialize",
    "star_inverse",
    "validate",
    "verify_gfamily_axioms",
    "verify_group_axioms",
    "verify_mgr_axioms",
    "verify_rack_axioms",
]
