"""Importance weights for the hindsight/uniform goal mixture."""

from typing import Union

import numpy as np

from ..exceptions import ContractViolationError

ArrayLike = Union[float, np.ndarray]


def importance_weight(f_here: float, h_next: float, alpha: float) -> float:
    """``W = f / (alpha f + (1 - alpha) h)``.

    Args:
        f_here: ``f(g_r | s, a, g_p, T)``
        h_next: Density of ``g_r`` given the realised next state
        alpha: Uniform-goal mixture fraction in ``(0, 1]``

    Returns:
        The weight; 1 when numerator and denominator both vanish

    Raises:
        ContractViolationError: On negative densities or ``alpha`` outside ``(0, 1]``
    """
    if f_here < 0.0 or h_next < 0.0:
        raise ContractViolationError("densities must be non-negative")
    if not 0.0 < alpha <= 1.0:
        raise ContractViolationError("alpha must lie in (0, 1]")
    denominator = alpha * f_here + (1.0 - alpha) * h_next
    if denominator == 0.0:
        return 1.0
    return f_here / denominator


def importance_weights(f_here: ArrayLike, h_next: ArrayLike, alpha: float) -> np.ndarray:
    """Vectorised ``importance_weight`` with the same zero convention."""
    f_here = np.asarray(f_here, dtype=np.float64)
    h_next = np.asarray(h_next, dtype=np.float64)
    if (f_here < 0).any() or (h_next < 0).any():
        raise ContractViolationError("densities must be non-negative")
    if not 0.0 < alpha <= 1.0:
        raise ContractViolationError("alpha must lie in (0, 1]")
    denominator = alpha * f_here + (1.0 - alpha) * h_next
    numerator, denominator = np.broadcast_arrays(f_here, denominator)
    out = np.ones(denominator.shape)
    np.divide(numerator, denominator, out=out, where=denominator > 0.0)
    return out


def clip_ratio(w: float, c: float) -> float:
    """Clamp ``w`` to ``[1 / (1 + c), 1 + c]``."""
    if c <= 0.0:
        raise ContractViolationError("clip c must be positive")
    if w < 0.0:
        raise ContractViolationError("weights must be non-negative")
    return min(max(w, 1.0 / (1.0 + c)), 1.0 + c)
