"""Autodiff Module - minimal reverse-mode differentiation over float64 tensors."""

from src.autodiff.tensor import Tensor, constant, parameter
from src.autodiff.tape import Tape, TapeNode, backward, active_tape
from src.autodiff.ops import (
    matmul,
    add,
    mul,
    scale,
    sigmoid,
    relu,
    log,
    elementwise,
    softmax_rows,
    transpose,
    reshape,
    concat_rows,
    sum_all,
    scalar_node,
    add_bias,
)
from src.autodiff.gradcheck import finite_difference_check
from src.autodiff.checkpoint import save_tensors, load_tensors, encode_tensors, decode_tensors

__all__ = [
    "Tensor",
    "constant",
    "parameter",
    "Tape",
    "TapeNode",
    "backward",
    "active_tape",
    "matmul",
    "add",
    "mul",
    "scale",
    "sigmoid",
    "relu",
    "log",
    "elementwise",
    "softmax_rows",
    "transpose",
    "reshape",
    "concat_rows",
    "sum_all",
    "scalar_node",
    "add_bias",
    "finite_difference_check",
    "save_tensors",
    "load_tensors",
    "encode_tensors",
    "decode_tensors",
]
