"""Good semigroups of plane curve singularities: Apéry levels, blow-ups,
multiplicity trees and value semigroups of parametrized curves."""

from .semigroup import GoodSemigroup, make_semigroup, numerical, full_lattice, verify_good, fine_multiplicity
from .apery import apery_set, levels_of, level_function
from .blowup import blow_up_semigroup, blow_down_semigroup, semigroup_tree, semigroup_from_tree, split_product
from .branch import PlaneSequence, semigroup_from_sequence, sequence_from_semigroup
from .curve import BranchParam, CurveParam
from .valuation import value_semigroup
from .tree import build_tree, read_tree, validate_tree, is_admissible

__version__ = "0.1.0"
