"""Differentiable primitives.

Each primitive computes its forward value with numpy, rejects non-finite
results, and (when a tape is active and an input needs a gradient) records
a vector-Jacobian product on the tape. Broadcasting is limited to
scalar-tensor pairs in add and mul.
"""

from typing import Optional, Sequence, Tuple

import numpy as np

from src.autodiff.tape import BackwardFn, active_tape
from src.autodiff.tensor import Tensor
from src.common.exceptions import NumericDomainError, ParameterError, ShapeError

ELEMENTWISE_KINDS = ("add", "mul", "sigmoid", "relu", "log", "scale")

# Sigmoid outputs stay in the open interval (0, 1)
SIGMOID_FLOOR = float(np.finfo(np.float64).tiny)
SIGMOID_CEILING = float(np.nextafter(1.0, 0.0))


def _emit(
    op: str,
    values: np.ndarray,
    inputs: Tuple[Tensor, ...],
    backward_fn: BackwardFn,
) -> Tensor:
    if not np.all(np.isfinite(values)):
        raise NumericDomainError(f"{op}: non-finite result (overflow)")
    requires_grad = any(t.requires_grad for t in inputs)
    out = Tensor.__new__(Tensor)
    out.values = values
    out.requires_grad = requires_grad
    out.grad = np.zeros_like(values) if requires_grad else None
    out.name = None
    tape = active_tape()
    if requires_grad and tape is not None:
        tape.record(op, out, inputs, backward_fn)
    return out


def _as_tensor(value) -> Tensor:
    return value if isinstance(value, Tensor) else Tensor(value)


def _reduce_to(grad: np.ndarray, like: Tensor) -> np.ndarray:
    """Collapse a gradient onto a scalar operand that was broadcast."""
    if like.values.shape == grad.shape:
        return grad
    return np.full(like.values.shape, grad.sum())


def _check_elementwise_pair(a: Tensor, b: Tensor, op: str) -> None:
    if a.shape != b.shape and a.size != 1 and b.size != 1:
        raise ShapeError(f"{op}: shapes {a.shape} and {b.shape} differ (only scalar broadcast)")


def matmul(a: Tensor, b: Tensor) -> Tensor:
    """Matrix product of an m×k and a k×n tensor."""
    if a.values.ndim != 2 or b.values.ndim != 2:
        raise ShapeError(f"matmul needs 2-D operands, got {a.shape} and {b.shape}")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"matmul inner extents differ: {a.shape} · {b.shape}")
    a_values, b_values = a.values, b.values

    def backward_fn(g: np.ndarray):
        return g @ b_values.T, a_values.T @ g

    return _emit("matmul", a_values @ b_values, (a, b), backward_fn)


def add(a: Tensor, b: Tensor) -> Tensor:
    a, b = _as_tensor(a), _as_tensor(b)
    _check_elementwise_pair(a, b, "add")

    def backward_fn(g: np.ndarray):
        return _reduce_to(g, a), _reduce_to(g, b)

    return _emit("add", a.values + b.values, (a, b), backward_fn)


def mul(a: Tensor, b: Tensor) -> Tensor:
    a, b = _as_tensor(a), _as_tensor(b)
    _check_elementwise_pair(a, b, "mul")
    a_values, b_values = a.values, b.values

    def backward_fn(g: np.ndarray):
        return _reduce_to(g * b_values, a), _reduce_to(g * a_values, b)

    return _emit("mul", a_values * b_values, (a, b), backward_fn)


def scale(x: Tensor, factor: float) -> Tensor:
    """Multiply by a constant."""
    factor = float(factor)

    def backward_fn(g: np.ndarray):
        return (g * factor,)

    return _emit("scale", x.values * factor, (x,), backward_fn)


def sigmoid(x: Tensor) -> Tensor:
    """Logistic function, evaluated without overflow for large |x| and kept inside (0, 1)."""
    e = np.exp(-np.abs(x.values))
    s = np.where(x.values >= 0, 1.0 / (1.0 + e), e / (1.0 + e))
    s = np.clip(s, SIGMOID_FLOOR, SIGMOID_CEILING)

    def backward_fn(g: np.ndarray):
        return (g * s * (1.0 - s),)

    return _emit("sigmoid", s, (x,), backward_fn)


def relu(x: Tensor) -> Tensor:
    mask = x.values > 0

    def backward_fn(g: np.ndarray):
        return (g * mask,)

    return _emit("relu", np.where(mask, x.values, 0.0), (x,), backward_fn)


def log(x: Tensor) -> Tensor:
    """Natural log; input must be strictly positive."""
    if np.any(x.values <= 0):
        raise NumericDomainError("log requires strictly positive input")
    x_values = x.values

    def backward_fn(g: np.ndarray):
        return (g / x_values,)

    return _emit("log", np.log(x_values), (x,), backward_fn)


def elementwise(
    x: Tensor,
    kind: str,
    other: Optional[Tensor] = None,
    factor: Optional[float] = None,
) -> Tensor:
    """
    Dispatch a pointwise primitive by name.

    Args:
        x: Input tensor
        kind: One of add, mul, sigmoid, relu, log, scale
        other: Second operand for add/mul
        factor: Constant for scale

    Raises:
        ParameterError: Unknown kind or missing operand
    """
    if kind in ("add", "mul"):
        if other is None:
            raise ParameterError(f"{kind} needs a second operand")
        return add(x, other) if kind == "add" else mul(x, other)
    if kind == "scale":
        if factor is None:
            raise ParameterError("scale needs a factor")
        return scale(x, factor)
    if kind == "sigmoid":
        return sigmoid(x)
    if kind == "relu":
        return relu(x)
    if kind == "log":
        return log(x)
    raise ParameterError(f"unknown elementwise kind {kind!r}; expected one of {ELEMENTWISE_KINDS}")


def softmax_rows(x: Tensor) -> Tensor:
    """Row-wise softmax with row-max subtraction."""
    if x.values.ndim != 2:
        raise ShapeError(f"softmax_rows needs a 2-D tensor, got {x.shape}")
    shifted = x.values - x.values.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    s = exp / exp.sum(axis=1, keepdims=True)

    def backward_fn(g: np.ndarray):
        inner = np.sum(g * s, axis=1, keepdims=True)
        return (s * (g - inner),)

    return _emit("softmax_rows", s, (x,), backward_fn)


def transpose(x: Tensor) -> Tensor:
    if x.values.ndim != 2:
        raise ShapeError(f"transpose needs a 2-D tensor, got {x.shape}")

    def backward_fn(g: np.ndarray):
        return (g.T,)

    return _emit("transpose", x.values.T.copy(), (x,), backward_fn)


def reshape(x: Tensor, shape: Sequence[int]) -> Tensor:
    shape = tuple(int(s) for s in shape)
    if int(np.prod(shape)) != x.size:
        raise ShapeError(f"cannot reshape {x.shape} into {shape}")
    original = x.shape

    def backward_fn(g: np.ndarray):
        return (g.reshape(original),)

    return _emit("reshape", x.values.reshape(shape).copy(), (x,), backward_fn)


def concat_rows(parts: Sequence[Tensor]) -> Tensor:
    """Stack 2-D tensors with equal column counts vertically."""
    parts = tuple(parts)
    if not parts:
        raise ShapeError("concat_rows needs at least one tensor")
    widths = {p.shape[1] for p in parts if p.values.ndim == 2}
    if len(widths) != 1 or any(p.values.ndim != 2 for p in parts):
        raise ShapeError(f"concat_rows needs 2-D tensors of equal width, got {[p.shape for p in parts]}")
    bounds = np.cumsum([0] + [p.shape[0] for p in parts])

    def backward_fn(g: np.ndarray):
        return tuple(g[bounds[i]:bounds[i + 1]] for i in range(len(parts)))

    return _emit("concat_rows", np.concatenate([p.values for p in parts], axis=0), parts, backward_fn)


def sum_all(x: Tensor) -> Tensor:
    """Sum of every entry, as a 1×1 tensor."""
    shape = x.values.shape

    def backward_fn(g: np.ndarray):
        return (np.full(shape, float(g.reshape(-1)[0])),)

    return _emit("sum_all", np.array([[x.values.sum()]]), (x,), backward_fn)


def scalar_node(x: Tensor, value: float, gradient: np.ndarray, op: str = "scalar_node") -> Tensor:
    """
    A 1×1 tensor whose value and gradient w.r.t. x are supplied analytically.

    Used to attach closed-form loss terms to the tape.

    Args:
        x: Input tensor the value depends on
        value: Forward value
        gradient: d(value)/dx, same shape as x
        op: Name recorded on the tape
    """
    gradient = np.asarray(gradient, dtype=np.float64)
    if gradient.shape != x.values.shape:
        raise ShapeError(f"{op}: gradient shape {gradient.shape} differs from input {x.shape}")

    def backward_fn(g: np.ndarray):
        return (float(g.reshape(-1)[0]) * gradient,)

    return _emit(op, np.array([[float(value)]]), (x,), backward_fn)


def add_bias(x: Tensor, bias: Tensor) -> Tensor:
    """x (m×n) plus a 1×n bias row, expressed as x + ones(m×1)·bias."""
    ones = Tensor(np.ones((x.shape[0], 1)))
    return add(x, matmul(ones, bias))
