"""Quantum N-switch simulation and Holevo information of switched depolarizing channels."""
from .channels import KrausSet, apply_channel, depolarizing_kraus, weyl_operator
from .holevo import HolevoResult, OptimizerOptions, PureStateChart, control_output, holevo_chi, min_output_entropy
from .orders import (
    CausalOrder,
    OrderCombination,
    PairClass,
    PairKind,
    Prediction,
    classify_pair,
    enumerate_combinations,
    global_pair_count,
    label_from_order,
    order_from_label,
    predict_class,
)
from .qmath import eig_hermitian, kron, matmul, partial_trace, von_neumann_entropy
from .switch import (
    ControlMode,
    SwitchOutput,
    SwitchSpec,
    branch_operator,
    control_state,
    switch_cptp_check,
    switch_output,
)

__version__ = "0.1.0"
