"""GA-LMS: error, cost, gradient and the update ``w_i = w_{i-1} + μ u_i f(e(i))``.

The same code path serves every subalgebra.  Masks are only checked on the
inputs; the recursion never projects, so leakage outside a closed
subalgebra would surface as nonzero coefficients instead of being hidden.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .algebra import Multivector, Signature, SubalgebraMask, algebra
from .arrays import MultivectorArray, reversed_product_coeffs
from .errors import LengthMismatch, MaskViolation, SignatureMismatch, UnsupportedSignature

ErrorShaping = Callable[[Multivector], Multivector]


def error_coeffs(sig: Signature, d: np.ndarray, u: np.ndarray, w: np.ndarray) -> np.ndarray:
    """``d - ~u* w`` on raw arrays; ``u``, ``w`` are ``(..., M, 2**n)``."""
    return d - reversed_product_coeffs(sig, u, w)


def update_coeffs(sig: Signature, w: np.ndarray, u: np.ndarray, fe: np.ndarray, mu: float) -> np.ndarray:
    """``W_j + μ U_j f(e)`` for every tap; ``fe`` is ``(..., 2**n)``."""
    return w + mu * (u @ algebra(sig).right_matrix(fe))


def _pair(u: MultivectorArray, w: MultivectorArray) -> None:
    if u.sig != w.sig:
        raise SignatureMismatch(f"{u.sig} vs {w.sig}")
    if len(u) != len(w):
        raise LengthMismatch(f"regressor has {len(u)} taps, weights have {len(w)}")


def compute_error(d: Multivector, u: MultivectorArray, w: MultivectorArray) -> Multivector:
    _pair(u, w)
    if d.sig != u.sig:
        raise SignatureMismatch(f"{d.sig} vs {u.sig}")
    return Multivector(d.sig, error_coeffs(d.sig, d.coeffs, u.coeffs, w.coeffs))


def cost(d: Multivector, u: MultivectorArray, w: MultivectorArray) -> float:
    """Instantaneous least-squares cost ``|d - ~u* w|²`` (sum of squared coefficients)."""
    if not d.sig.is_euclidean:
        raise UnsupportedSignature("cost uses the Euclidean magnitude")
    e = compute_error(d, u, w).coeffs
    return float(e @ e)


def gradient(u: MultivectorArray, e: Multivector) -> MultivectorArray:
    """Gradient of the cost with respect to ``w``: entries ``-2 U_j e``."""
    if u.sig != e.sig:
        raise SignatureMismatch(f"{u.sig} vs {e.sig}")
    return MultivectorArray(u.sig, -2.0 * algebra(u.sig).gp(u.coeffs, e.coeffs))


@dataclass(frozen=True)
class FilterState:
    w: MultivectorArray
    mu: float
    mask: SubalgebraMask
    iteration: int = 0

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError(f"step size must be positive, got {self.mu}")
        if self.mask.n != self.w.sig.n:
            raise SignatureMismatch("mask and weights live in different algebras")
        if not self.mask.contains(self.w.coeffs):
            raise MaskViolation("initial weights leave the configured subalgebra")

    @classmethod
    def initial(cls, sig: Signature, taps: int, mu: float, mask: SubalgebraMask) -> FilterState:
        """Zero weights, iteration 0."""
        return cls(MultivectorArray.zeros(sig, taps), mu, mask)

    @property
    def taps(self) -> int:
        return len(self.w)


def general_step(
    state: FilterState, u: MultivectorArray, d: Multivector, f: ErrorShaping
) -> tuple[FilterState, Multivector]:
    """One GAAF iteration with error shaping ``f``; returns the new state and the
    a-priori error ``e(i) = d - ~u* w_{i-1}``."""
    _pair(u, state.w)
    if not (state.mask.contains(u.coeffs) and state.mask.contains(d.coeffs)):
        raise MaskViolation(f"inputs leave the {state.mask.name} subalgebra")
    e = compute_error(d, u, state.w)
    fe = f(e)
    w = update_coeffs(u.sig, state.w.coeffs, u.coeffs, fe.coeffs, state.mu)
    return replace(state, w=MultivectorArray(u.sig, w), iteration=state.iteration + 1), e


def _identity(e: Multivector) -> Multivector:
    return e


def lms_step(state: FilterState, u: MultivectorArray, d: Multivector) -> tuple[FilterState, Multivector]:
    # the factor 2 of the gradient is absorbed into mu
    return general_step(state, u, d, _identity)
