"""Dense float64 tensor used by the reverse-mode engine."""

from typing import Optional, Sequence, Tuple

import numpy as np

from src.common.exceptions import NumericDomainError, ShapeError


class Tensor:
    """Row-major float64 values with an optional accumulated gradient."""

    __slots__ = ("values", "requires_grad", "grad", "name")

    def __init__(self, values, requires_grad: bool = False, name: Optional[str] = None):
        """
        Args:
            values: Array-like data (copied to float64)
            requires_grad: Whether backward accumulates a gradient into .grad
            name: Optional name (parameter tensors are named)
        """
        array = np.array(values, dtype=np.float64)
        if not np.all(np.isfinite(array)):
            raise NumericDomainError(f"tensor {name or ''} holds non-finite values".strip())
        self.values = array
        self.requires_grad = requires_grad
        self.grad = np.zeros_like(array) if requires_grad else None
        self.name = name

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(self.values.shape)

    @property
    def size(self) -> int:
        return int(self.values.size)

    def item(self) -> float:
        """Value of a one-element tensor."""
        if self.values.size != 1:
            raise ShapeError(f"item() needs a one-element tensor, got shape {self.shape}")
        return float(self.values.reshape(-1)[0])

    def zero_grad(self) -> None:
        if self.requires_grad:
            self.grad = np.zeros_like(self.values)

    def detach(self) -> "Tensor":
        """Copy of the values with no gradient tracking."""
        return Tensor(self.values.copy(), requires_grad=False, name=self.name)

    def __repr__(self) -> str:
        label = f" name={self.name!r}" if self.name else ""
        return f"Tensor(shape={self.shape}{label}, requires_grad={self.requires_grad})"


def constant(values) -> Tensor:
    """A tensor that never receives gradients."""
    return Tensor(values, requires_grad=False)


def parameter(values, name: str) -> Tensor:
    """A named tensor that receives gradients."""
    return Tensor(values, requires_grad=True, name=name)


def check_shapes(expected: Sequence[int], actual: Sequence[int], what: str) -> None:
    """Raise ShapeError unless two shapes agree."""
    if tuple(expected) != tuple(actual):
        raise ShapeError(f"{what}: expected shape {tuple(expected)}, got {tuple(actual)}")
