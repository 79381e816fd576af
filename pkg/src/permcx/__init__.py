"""Bounded complexes of permutation modules over elementary abelian p-groups.

Exactness and contractibility are decided by exact linear algebra over
GF(p^e).  Collections with an index-p containment come with certified
counterexamples.
"""

from .exactla import GF, Field, Matrix, Scalar
from .groups import (ElemAbGroup, Subgroup, SubgroupCollection, all_subgroups, check_chain_condition,
                     coset_reps, lattice_ops, parse_group, subgroup_from_generators)
from .gmod import (EquivariantMap, GModule, direct_sum, fixed_points, hom_space, induce, inflate,
                   make_free, make_permutation, make_trivial, radical, restrict)
from .complexes import (BoundedComplex, check_theorem31, is_contractible, is_exact, random_addS_complex,
                        split_via_rank_two_subgroup, validate)
from .counterexamples import chain_pair_counterexample, necessity_report, periodicity_complex
from .cohomology import PolyClass, find_avoidance_pair, restrict_class, verify_avoidance_pair
from .resolution import cohomology_dims, e1_dimension_table, minimal_free_resolution

__all__ = [
    "GF", "Field", "Matrix", "Scalar",
    "ElemAbGroup", "Subgroup", "SubgroupCollection", "all_subgroups", "check_chain_condition", "coset_reps",
    "lattice_ops", "parse_group", "subgroup_from_generators",
    "EquivariantMap", "GModule", "direct_sum", "fixed_points", "hom_space", "induce", "inflate", "make_free",
    "make_permutation", "make_trivial", "radical", "restrict",
    "BoundedComplex", "check_theorem31", "is_contractible", "is_exact", "random_addS_complex",
    "split_via_rank_two_subgroup", "validate",
    "chain_pair_counterexample", "necessity_report", "periodicity_complex",
    "PolyClass", "find_avoidance_pair", "restrict_class", "verify_avoidance_pair",
    "cohomology_dims", "e1_dimension_table", "minimal_free_resolution",
]

__version__ = "0.1.0"
