"""Fixed-length arrays of multivectors and their products.

An array ``u = [U_1 ... U_M]`` is stored as an ``(M, 2**n)`` coefficient
matrix.  Row versus column semantics live in the operations, not the type:
``array_product_reversed(u, w)`` is ``Σ_j ~U_j W_j`` and
``array_product_transpose(u, w)`` is ``Σ_j U_j W_j``.
"""
from __future__ import annotations

from typing import Iterator, Sequence

import numpy as np

from .algebra import Multivector, Signature, algebra
from .errors import LengthMismatch, SignatureMismatch


class MultivectorArray:
    __slots__ = ("sig", "coeffs")
    # numpy scalars on the left defer to our reflected operators
    __array_ufunc__ = None

    def __init__(self, sig: Signature, coeffs):
        arr = np.array(coeffs, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != sig.size or arr.shape[0] < 1:
            raise ValueError(f"expected shape (M >= 1, {sig.size}), got {arr.shape}")
        arr.flags.writeable = False
        object.__setattr__(self, "sig", sig)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("MultivectorArray is immutable")

    @classmethod
    def from_entries(cls, entries: Sequence[Multivector]) -> MultivectorArray:
        if not entries:
            raise ValueError("an array needs at least one entry")
        sig = entries[0].sig
        for e in entries:
            if e.sig != sig:
                raise SignatureMismatch("array entries must share one signature")
        return cls(sig, np.stack([e.coeffs for e in entries]))

    @classmethod
    def zeros(cls, sig: Signature, m: int) -> MultivectorArray:
        return cls(sig, np.zeros((m, sig.size)))

    @classmethod
    def repeat(cls, entry: Multivector, m: int) -> MultivectorArray:
        return cls(entry.sig, np.tile(entry.coeffs, (m, 1)))

    def __len__(self) -> int:
        return self.coeffs.shape[0]

    def __getitem__(self, j: int) -> Multivector:
        return Multivector(self.sig, self.coeffs[j])

    def __iter__(self) -> Iterator[Multivector]:
        return (self[j] for j in range(len(self)))

    def _check(self, other: MultivectorArray) -> None:
        if other.sig != self.sig:
            raise SignatureMismatch(f"{self.sig} vs {other.sig}")
        if len(other) != len(self):
            raise LengthMismatch(f"lengths {len(self)} and {len(other)}")

    def __add__(self, other: MultivectorArray) -> MultivectorArray:
        self._check(other)
        return MultivectorArray(self.sig, self.coeffs + other.coeffs)

    def __sub__(self, other: MultivectorArray) -> MultivectorArray:
        self._check(other)
        return MultivectorArray(self.sig, self.coeffs - other.coeffs)

    def __neg__(self) -> MultivectorArray:
        return MultivectorArray(self.sig, -self.coeffs)

    def __mul__(self, k: float) -> MultivectorArray:
        if isinstance(k, (int, float, np.floating, np.integer)):
            return MultivectorArray(self.sig, self.coeffs * float(k))
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, MultivectorArray):
            return NotImplemented
        return self.sig == other.sig and bool(np.array_equal(self.coeffs, other.coeffs))

    __hash__ = None

    def allclose(self, other: MultivectorArray, atol: float = 1e-12) -> bool:
        self._check(other)
        return bool(np.allclose(self.coeffs, other.coeffs, atol=atol, rtol=0.0))

    def __repr__(self):
        return "MultivectorArray([" + ", ".join(str(e) for e in self) + "])"


def _pair(u: MultivectorArray, w: MultivectorArray) -> None:
    if u.sig != w.sig:
        raise SignatureMismatch(f"{u.sig} vs {w.sig}")
    if len(u) != len(w):
        raise LengthMismatch(f"array lengths {len(u)} and {len(w)} differ")


def reverse_array(u: MultivectorArray) -> MultivectorArray:
    return MultivectorArray(u.sig, algebra(u.sig).reverse(u.coeffs))


def reversed_product_coeffs(sig: Signature, u: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Batched ``Σ_j ~U_j W_j`` on raw ``(..., M, 2**n)`` coefficient arrays."""
    alg = algebra(sig)
    return alg.pair_sum(alg.reverse(u), w)


def array_product_reversed(u: MultivectorArray, w: MultivectorArray) -> Multivector:
    """``~u* w = Σ_j ~U_j W_j``."""
    _pair(u, w)
    return Multivector(u.sig, reversed_product_coeffs(u.sig, u.coeffs, w.coeffs))


def array_product_transpose(u: MultivectorArray, w: MultivectorArray) -> Multivector:
    """``u^T w = Σ_j U_j W_j``; in general not equal to ``w^T u``."""
    _pair(u, w)
    return Multivector(u.sig, algebra(u.sig).gp(u.coeffs, w.coeffs).sum(axis=0))


def array_norm_sq(u: MultivectorArray) -> Multivector:
    """``||u||² = ~u* u``, a multivector equal to its own reverse."""
    return array_product_reversed(u, u)


def scale_left(a: Multivector, w: MultivectorArray) -> MultivectorArray:
    """Entries ``A W_j``."""
    if a.sig != w.sig:
        raise SignatureMismatch(f"{a.sig} vs {w.sig}")
    return MultivectorArray(w.sig, algebra(w.sig).gp(a.coeffs, w.coeffs))


def scale_right(w: MultivectorArray, a: Multivector) -> MultivectorArray:
    """Entries ``W_j A``."""
    if a.sig != w.sig:
        raise SignatureMismatch(f"{a.sig} vs {w.sig}")
    return MultivectorArray(w.sig, algebra(w.sig).gp(w.coeffs, a.coeffs))
