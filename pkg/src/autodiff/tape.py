"""Operation tape and reverse accumulation.

Nodes are appended in execution order, which is a topological order of the
computation; backward walks them in exact reverse.
"""

import contextvars
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from src.autodiff.tensor import Tensor
from src.common.exceptions import ParameterError, ShapeError

logger = logging.getLogger(__name__)

BackwardFn = Callable[[np.ndarray], Tuple[Optional[np.ndarray], ...]]

_active_tape: contextvars.ContextVar[Optional["Tape"]] = contextvars.ContextVar(
    "afford3d_active_tape", default=None
)


@dataclass
class TapeNode:
    """One recorded primitive: its output, inputs and vector-Jacobian product."""

    op: str
    output: Tensor
    inputs: Tuple[Tensor, ...]
    backward_fn: BackwardFn


class Tape:
    """Ordered record of primitive operations for one computation."""

    def __init__(self):
        self.nodes: List[TapeNode] = []
        self._outputs: Dict[int, TapeNode] = {}
        self._token: Optional[contextvars.Token] = None

    def __enter__(self) -> "Tape":
        self._token = _active_tape.set(self)
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        if self._token is not None:
            _active_tape.reset(self._token)
            self._token = None

    def __len__(self) -> int:
        return len(self.nodes)

    def record(
        self,
        op: str,
        output: Tensor,
        inputs: Tuple[Tensor, ...],
        backward_fn: BackwardFn,
    ) -> None:
        node = TapeNode(op=op, output=output, inputs=inputs, backward_fn=backward_fn)
        self.nodes.append(node)
        self._outputs[id(output)] = node

    def produced(self, tensor: Tensor) -> bool:
        """Whether a tensor is the output of a recorded node."""
        return id(tensor) in self._outputs


def active_tape() -> Optional[Tape]:
    """The tape currently recording, if any."""
    return _active_tape.get()


def backward(tape: Tape, loss: Tensor) -> List[Tensor]:
    """
    Accumulate d(loss)/d(leaf) into .grad of every requires-grad leaf on the tape.

    Repeated calls without zeroing accumulate additively.

    Args:
        tape: Tape the loss was computed on
        loss: One-element tensor produced on the tape

    Returns:
        The leaf tensors that received a gradient, in first-use order

    Raises:
        ShapeError: If loss is not a scalar
        ParameterError: If loss was not produced on this tape
    """
    if loss.size != 1:
        raise ShapeError(f"backward needs a scalar loss, got shape {loss.shape}")
    if not tape.produced(loss):
        raise ParameterError("loss was not produced on this tape")

    grads: Dict[int, np.ndarray] = {id(loss): np.ones_like(loss.values)}
    leaves: Dict[int, Tensor] = {}

    for node in reversed(tape.nodes):
        upstream = grads.pop(id(node.output), None)
        if upstream is None:
            continue
        input_grads = node.backward_fn(upstream)
        for tensor, grad in zip(node.inputs, input_grads):
            if grad is None or not tensor.requires_grad:
                continue
            key = id(tensor)
            if key in grads:
                grads[key] = grads[key] + grad
            else:
                grads[key] = grad
            if not tape.produced(tensor):
                leaves[key] = tensor

    ordered: List[Tensor] = []
    for key, leaf in leaves.items():
        leaf.grad = leaf.grad + grads[key]
        ordered.append(leaf)

    logger.debug(f"Backward over {len(tape.nodes)} nodes reached {len(ordered)} leaves")
    return ordered
