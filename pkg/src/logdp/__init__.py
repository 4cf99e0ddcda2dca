"""Exact combinatorics of log terminal surface singularities and four-point baskets."""
from .graph import CurveNode, DualGraph, MalformedGraphError, build_matrix, is_negative_definite
from .discrepancy import (
    DegreeReport,
    NotContractibleError,
    is_log_terminal_numeric,
    solve_discrepancies,
    surface_degree,
)
from .taxonomy import (
    Fork,
    NotLogTerminal,
    Rod,
    classify,
    duval_label,
    fundamental_group_order,
    hj_contract,
    hj_expand,
)
from .basket import Basket, Bounds, bmy_sum, cross_check_theorem, enumerate_baskets, verify_basket
from .families import RksParams, case3_variants, rks_sequence, theorem_case
from .surgery import blow_up_edge, blow_up_point, contract, fiber_class, hurwitz_ramification, minimalize

__version__ = "0.1.0"
