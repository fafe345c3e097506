"""Closed-form steady-state predictions for GA-LMS with white circular inputs.

With ``dim`` real coefficients per multivector entry, per-coefficient
variances ``σ²_u``/``σ²_v`` and ``M`` taps:

    E <~v v>   = dim σ²_v
    E <~u* u>  = M dim σ²_u
    EMSE       = μ M dim² σ²_u σ²_v / (2 - μ M dim σ²_u)
    MSE        = EMSE + dim σ²_v

``dim`` = 8, 4, 2, 1 gives the full G(R³), rotor (quaternion), complex and
real filters respectively.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .algebra import Multivector, SubalgebraMask
from .errors import LengthMismatch, Unstable, UnsupportedSignature


@dataclass(frozen=True)
class AlgebraDims:
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")

    @classmethod
    def full(cls, n: int) -> AlgebraDims:
        return cls(2**n)

    @classmethod
    def even(cls, n: int) -> AlgebraDims:
        return cls(sum(math.comb(n, 2 * k) for k in range(n // 2 + 1)))

    @classmethod
    def grade(cls, n: int, g: int) -> AlgebraDims:
        return cls(math.comb(n, g))

    @classmethod
    def of(cls, mask: SubalgebraMask) -> AlgebraDims:
        return cls(mask.dim)


@dataclass(frozen=True)
class TheoryInputs:
    taps: int
    mu: float
    sigma_u2: float
    sigma_v2: float
    dims: AlgebraDims

    def __post_init__(self):
        if self.taps < 1 or self.mu <= 0 or self.sigma_u2 <= 0 or self.sigma_v2 < 0:
            raise ValueError(f"invalid theory inputs {self}")

    @property
    def stability_margin(self) -> float:
        """``2 - μ M dim σ²_u``; must be positive for a finite prediction."""
        return 2.0 - self.mu * self.taps * self.dims.dim * self.sigma_u2

    def check_stable(self) -> None:
        if self.stability_margin <= 0:
            raise Unstable(
                f"2 - mu*M*dim*sigma_u2 = {self.stability_margin:.6g} <= 0 "
                f"(mu={self.mu}, M={self.taps}, dim={self.dims.dim}, sigma_u2={self.sigma_u2})"
            )


def noise_energy(dims: AlgebraDims, sigma_v2: float) -> float:
    return dims.dim * sigma_v2


def regressor_energy(dims: AlgebraDims, taps: int, sigma_u2: float) -> float:
    return taps * dims.dim * sigma_u2


def emse_theory(t: TheoryInputs) -> float:
    t.check_stable()
    d = t.dims.dim
    return t.mu * t.taps * d * d * t.sigma_u2 * t.sigma_v2 / t.stability_margin


def mse_theory(t: TheoryInputs) -> float:
    return emse_theory(t) + noise_energy(t.dims, t.sigma_v2)


def emse_full_r3(taps: int, mu: float, sigma_u2: float, sigma_v2: float) -> float:
    """The n = 3 complete-algebra form ``32 μ M σ²_u σ²_v / (1 - 4 μ M σ²_u)``."""
    den = 1.0 - 4.0 * mu * taps * sigma_u2
    if den <= 0:
        raise Unstable(f"1 - 4*mu*M*sigma_u2 = {den:.6g} <= 0")
    return 32.0 * mu * taps * sigma_u2 * sigma_v2 / den


def db(x: float) -> float:
    """Power ratio in decibels, ``10 log10 x``."""
    return 10.0 * math.log10(x) if x > 0 else -math.inf


def general_cost(
    d: Multivector, a: Sequence[Multivector], x: Multivector, b: Sequence[Multivector]
) -> float:
    """``|D - Σ_k A_k X B_k|²``."""
    if len(a) != len(b):
        raise LengthMismatch(f"{len(a)} left factors vs {len(b)} right factors")
    if not d.sig.is_euclidean:
        raise UnsupportedSignature("general cost uses the Euclidean magnitude")
    residual = d
    for ak, bk in zip(a, b):
        residual = residual - ak * x * bk
    c = residual.coeffs
    return float(c @ c)
