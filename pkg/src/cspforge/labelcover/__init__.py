from .consistency import (arc_consistent_sets, enforce_arc_consistency, ignored_constraint_count,
                          k_consistency_test, sigma_k)
from .instance import (Constraint, LabelCoverInstance, constraint, label_cover_template, label_set,
                       pi_of_symbol)
from .reductions import arc_consistency_reduce, has_falsity_symbol, k_consistency_reduce

__all__ = [
    "Constraint", "LabelCoverInstance", "arc_consistency_reduce", "arc_consistent_sets", "constraint",
    "enforce_arc_consistency", "has_falsity_symbol", "ignored_constraint_count", "k_consistency_reduce",
    "k_consistency_test", "label_cover_template", "label_set", "pi_of_symbol", "sigma_k",
]
