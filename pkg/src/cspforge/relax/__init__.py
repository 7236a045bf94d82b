from .intlin import (GroupSystem, GroupSystemError, brute_force_group_system, export_group_system,
                     parse_group_system, solve_group_system)
from .lp import (LinearSystem, LinearSystemError, LPResult, export_linear_system, lp_feasible,
                 parse_linear_system)
from .sherali import (affine_system, group_signature, group_template, lambda_conv, partial_hom_sets,
                      sa_via_label_cover, sherali_adams_system, structure_to_group_system, tseitin_instance,
                      uniform_witness)
from .tensor import tensor_interpretation, tensor_power, tensor_test

__all__ = [
    "GroupSystem", "GroupSystemError", "LPResult", "LinearSystem", "LinearSystemError", "affine_system",
    "brute_force_group_system", "export_group_system", "export_linear_system", "group_signature",
    "group_template", "lambda_conv", "lp_feasible", "parse_group_system", "parse_linear_system",
    "partial_hom_sets", "sa_via_label_cover", "sherali_adams_system", "solve_group_system",
    "structure_to_group_system", "tensor_interpretation", "tensor_power", "tensor_test", "tseitin_instance",
    "uniform_witness",
]
