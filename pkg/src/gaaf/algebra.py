"""Dense multivector arithmetic for real geometric algebras G(R^{p,q,r}).

Blades are indexed by bitsets: bit k set means basis vector ``γ_{k+1}``
participates, factors in ascending order.  A multivector stores all ``2**n``
coefficients in a float64 array indexed by that bitset.

Every product is driven by a single table built from :func:`blade_product`,
so the Cayley table of G(R³) is reproduced by construction and the batched
kernels (:meth:`Algebra.gp`) are what the adaptive filters run on.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from .errors import (
    FactorizationMismatch,
    GradeOutOfRange,
    NotEven,
    NotUnit,
    NotUnitRotor,
    NullVector,
    SignatureMismatch,
    UnsupportedSignature,
)

MAX_DIM = 6
EPS = 1e-12


@dataclass(frozen=True)
class Signature:
    """Metric of the generating vector space.

    Basis vectors ``γ_1 .. γ_p`` square to +1, the next ``q`` to -1 and the
    last ``r`` to 0.
    """

    p: int
    q: int = 0
    r: int = 0

    def __post_init__(self):
        if min(self.p, self.q, self.r) < 0:
            raise ValueError(f"negative signature entry in {self}")
        if not 1 <= self.n <= MAX_DIM:
            raise ValueError(f"n = p+q+r must lie in [1, {MAX_DIM}], got {self.n}")

    @property
    def n(self) -> int:
        return self.p + self.q + self.r

    @property
    def size(self) -> int:
        """Dimension of the algebra, 2**n."""
        return 1 << self.n

    @property
    def metric(self) -> tuple[int, ...]:
        return (1,) * self.p + (-1,) * self.q + (0,) * self.r

    @property
    def is_euclidean(self) -> bool:
        return self.q == 0 and self.r == 0


def euclidean(n: int) -> Signature:
    return Signature(n)


G3 = Signature(3)


def grade_of(bits: int) -> int:
    return bin(bits).count("1")


def blade_product(a: int, b: int, sig: Signature) -> tuple[int, int]:
    """Product of two basis blades: returns ``(sign, a ^ b)``.

    The sign collects one factor -1 per transposition needed to merge the two
    ascending factor lists, times the square of every basis vector shared by
    both blades (which may be 0 for a null direction).
    """
    size = sig.size
    if not (0 <= a < size and 0 <= b < size):
        raise ValueError(f"blade index out of range for n={sig.n}: {a}, {b}")
    swaps = 0
    x = a >> 1
    while x:
        swaps += grade_of(x & b)
        x >>= 1
    sign = -1 if swaps & 1 else 1
    common = a & b
    metric = sig.metric
    k = 0
    while common:
        if common & 1:
            sign *= metric[k]
        common >>= 1
        k += 1
    return sign, a ^ b


class Algebra:
    """Product tables for one signature plus batched kernels on raw arrays.

    Kernels accept arrays whose last axis has length ``2**n``; leading axes
    broadcast.  Obtain instances through :func:`algebra` so tables are built
    once per signature.
    """

    def __init__(self, sig: Signature):
        self.sig = sig
        self.size = size = sig.size
        self.grades = np.array([grade_of(b) for b in range(size)])
        signs = np.zeros((size, size))
        index = np.zeros((size, size), dtype=np.intp)
        for a in range(size):
            for b in range(size):
                signs[a, b], index[a, b] = blade_product(a, b, sig)
        self.signs = signs
        self.index = index
        g = self.grades
        result_grade = g[index]
        self._gp = self._tensor(np.ones_like(signs, dtype=bool))
        self._inner = self._tensor(result_grade == np.abs(g[:, None] - g[None, :]))
        self._outer = self._tensor(result_grade == g[:, None] + g[None, :])
        self._right = (
            self._gp.reshape(size, size, size).transpose(1, 0, 2).reshape(size, size * size)
        )
        k = self.grades
        self.reverse_signs = np.where((k * (k - 1) // 2) % 2 == 0, 1.0, -1.0)

    def _tensor(self, keep: np.ndarray) -> np.ndarray:
        # flattened (a, b) -> c table so a product is one matmul
        size = self.size
        t = np.zeros((size, size, size))
        a, b = np.meshgrid(np.arange(size), np.arange(size), indexing="ij")
        t[a, b, self.index] = np.where(keep, self.signs, 0.0)
        return t.reshape(size * size, size)

    @staticmethod
    def _bilinear(x: np.ndarray, y: np.ndarray, table: np.ndarray) -> np.ndarray:
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        outer = x[..., :, None] * y[..., None, :]
        return outer.reshape(*x.shape[:-1], -1) @ table

    def gp(self, x, y) -> np.ndarray:
        return self._bilinear(x, y, self._gp)

    def inner(self, x, y) -> np.ndarray:
        return self._bilinear(x, y, self._inner)

    def outer(self, x, y) -> np.ndarray:
        return self._bilinear(x, y, self._outer)

    def reverse(self, x) -> np.ndarray:
        return np.asarray(x, float) * self.reverse_signs

    def right_matrix(self, y) -> np.ndarray:
        """Matrices ``R`` with ``x @ R == gp(x, y)``; shape ``(..., N, N)``."""
        y = np.asarray(y, float)
        n = self.size
        return (y @ self._right).reshape(*y.shape[:-1], n, n)

    def pair_sum(self, x, y) -> np.ndarray:
        """``Σ_j x_j y_j`` over axis -2, contracting taps before the product table."""
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        pairs = np.swapaxes(x, -1, -2) @ y
        return pairs.reshape(*pairs.shape[:-2], -1) @ self._gp

    def grade_mask(self, g: int) -> np.ndarray:
        return self.grades == g

    def scalar_product(self, x, y) -> np.ndarray:
        """Scalar part of ``x y`` without forming the full product."""
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        # <x y> only pairs blade b with itself; its sign is b*b
        diag = self.signs[np.arange(self.size), np.arange(self.size)]
        return np.sum(x * y * diag, axis=-1)


@lru_cache(maxsize=None)
def algebra(sig: Signature) -> Algebra:
    return Algebra(sig)


class Multivector:
    """Immutable element of G(R^{p,q,r}) with dense coefficients.

    Operators: ``*`` geometric product (or scaling by a real), ``|`` inner
    product, ``^`` outer product, ``~`` reversion.
    """

    __slots__ = ("sig", "coeffs")
    # numpy scalars on the left defer to our reflected operators
    __array_ufunc__ = None

    def __init__(self, sig: Signature, coeffs):
        arr = np.array(coeffs, dtype=float)
        if arr.shape != (sig.size,):
            raise ValueError(f"expected {sig.size} coefficients, got shape {arr.shape}")
        arr.flags.writeable = False
        object.__setattr__(self, "sig", sig)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    @classmethod
    def zero(cls, sig: Signature) -> Multivector:
        return cls(sig, np.zeros(sig.size))

    @classmethod
    def scalar(cls, sig: Signature, value: float) -> Multivector:
        c = np.zeros(sig.size)
        c[0] = value
        return cls(sig, c)

    @classmethod
    def basis(cls, sig: Signature, bits: int) -> Multivector:
        c = np.zeros(sig.size)
        c[bits] = 1.0
        return cls(sig, c)

    @classmethod
    def from_terms(cls, sig: Signature, terms: dict[int, float]) -> Multivector:
        c = np.zeros(sig.size)
        for bits, value in terms.items():
            c[bits] += value
        return cls(sig, c)

    def __getitem__(self, bits: int) -> float:
        return float(self.coeffs[bits])

    def _coerce(self, other) -> Multivector:
        if isinstance(other, Multivector):
            if other.sig != self.sig:
                raise SignatureMismatch(f"{self.sig} vs {other.sig}")
            return other
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Multivector.scalar(self.sig, float(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Multivector(self.sig, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Multivector(self.sig, self.coeffs - other.coeffs)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Multivector(self.sig, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return geometric_product(self, other)
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Multivector(self.sig, self.coeffs * float(other))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Multivector(self.sig, float(other) * self.coeffs)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Multivector(self.sig, self.coeffs / float(other))
        return NotImplemented

    def __or__(self, other):
        return inner_product(self, other)

    def __xor__(self, other):
        return outer_product(self, other)

    def __invert__(self):
        return reverse(self)

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.sig == other.sig and bool(np.array_equal(self.coeffs, other.coeffs))

    __hash__ = None

    def allclose(self, other, atol: float = 1e-12, rtol: float = 0.0) -> bool:
        other = self._coerce(other)
        return bool(np.allclose(self.coeffs, other.coeffs, atol=atol, rtol=rtol))

    def grade(self, g: int) -> Multivector:
        return grade_projection(self, g)

    def grades_present(self, tol: float = 0.0) -> set[int]:
        alg = algebra(self.sig)
        return {int(g) for g in alg.grades[np.abs(self.coeffs) > tol]}

    def __repr__(self):
        return f"Multivector({render(self)})"

    def __str__(self):
        return render(self)


def _check_same(a: Multivector, b: Multivector) -> None:
    if a.sig != b.sig:
        raise SignatureMismatch(f"{a.sig} vs {b.sig}")


def basis_vector(sig: Signature, k: int) -> Multivector:
    """``γ_k`` with 1-based ``k``."""
    if not 1 <= k <= sig.n:
        raise ValueError(f"basis vector index {k} out of range for n={sig.n}")
    return Multivector.basis(sig, 1 << (k - 1))


def blade(sig: Signature, *indices: int) -> Multivector:
    """Geometric product ``γ_i γ_j ...`` of the listed 1-based basis vectors.

    ``blade(G3, 3, 1)`` is ``γ31 = -γ13``.
    """
    out = Multivector.scalar(sig, 1.0)
    for k in indices:
        out = out * basis_vector(sig, k)
    return out


def pseudoscalar(sig: Signature) -> Multivector:
    return Multivector.basis(sig, sig.size - 1)


def vector(sig: Signature, components: Sequence[float]) -> Multivector:
    if len(components) != sig.n:
        raise ValueError(f"need {sig.n} components")
    c = np.zeros(sig.size)
    for k, x in enumerate(components):
        c[1 << k] = x
    return Multivector(sig, c)


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    _check_same(a, b)
    return Multivector(a.sig, algebra(a.sig).gp(a.coeffs, b.coeffs))


def inner_product(a: Multivector, b: Multivector) -> Multivector:
    """Grade-wise ``<A_p B_q>_{|p-q|}`` summed over all grade pairs."""
    _check_same(a, b)
    return Multivector(a.sig, algebra(a.sig).inner(a.coeffs, b.coeffs))


def outer_product(a: Multivector, b: Multivector) -> Multivector:
    _check_same(a, b)
    return Multivector(a.sig, algebra(a.sig).outer(a.coeffs, b.coeffs))


def grade_projection(a: Multivector, g: int) -> Multivector:
    if not 0 <= g <= a.sig.n:
        raise GradeOutOfRange(f"grade {g} not in [0, {a.sig.n}]")
    return Multivector(a.sig, np.where(algebra(a.sig).grade_mask(g), a.coeffs, 0.0))


def reverse(a: Multivector) -> Multivector:
    return Multivector(a.sig, algebra(a.sig).reverse(a.coeffs))


def scalar_product(a: Multivector, b: Multivector) -> float:
    _check_same(a, b)
    return float(algebra(a.sig).scalar_product(a.coeffs, b.coeffs))


def magnitude(a: Multivector) -> float:
    """``sqrt(A * ~A)``; only defined here for Euclidean signatures."""
    if not a.sig.is_euclidean:
        raise UnsupportedSignature(f"magnitude undefined for {a.sig}")
    return math.sqrt(max(scalar_product(a, reverse(a)), 0.0))


def _require_vector(a: Multivector, what: str = "argument") -> None:
    off = np.abs(a.coeffs[algebra(a.sig).grades != 1])
    if off.size and off.max() > EPS:
        raise ValueError(f"{what} must be a pure 1-vector")


def vector_inverse(a: Multivector) -> Multivector:
    _require_vector(a)
    square = scalar_product(a, a)
    if abs(square) <= EPS:
        raise NullVector(f"a^2 = {square!r} is not invertible")
    return a / square


def versor_inverse(v: Multivector, factors: Sequence[Multivector]) -> Multivector:
    """Inverse of ``v = a_1 a_2 ... a_k`` as ``a_k^-1 ... a_1^-1``."""
    if not factors:
        raise ValueError("at least one factor is required")
    inverses = [vector_inverse(f) for f in factors]
    product = Multivector.scalar(v.sig, 1.0)
    for f in factors:
        product = product * f
    scale = max(1.0, float(np.abs(v.coeffs).max()))
    if np.abs(product.coeffs - v.coeffs).max() > EPS * scale:
        raise FactorizationMismatch("product of factors differs from the versor")
    out = Multivector.scalar(v.sig, 1.0)
    for inv in reversed(inverses):
        out = out * inv
    return out


def rotor_from_vectors(a: Multivector, b: Multivector) -> Multivector:
    """Rotor ``ab = cos θ + I_ab sin θ`` from two unit vectors.

    Sandwiching with this rotor turns vectors by twice the angle between
    ``a`` and ``b``.
    """
    for x, name in ((a, "a"), (b, "b")):
        _require_vector(x, name)
        if abs(magnitude(x) ** 2 - 1.0) > EPS:
            raise NotUnit(f"{name} is not a unit vector")
    return a * b


def rotate(r: Multivector, x: Multivector) -> Multivector:
    """Sandwich ``r x ~r`` of a 1-vector; roundoff in other grades is dropped."""
    _check_same(r, x)
    _require_vector(x, "x")
    rr = r * reverse(r)
    if np.abs(rr.coeffs - Multivector.scalar(r.sig, 1.0).coeffs).max() > EPS:
        raise NotUnitRotor("r ~r != 1")
    return grade_projection(r * x * reverse(r), 1)


# -- subalgebras -----------------------------------------------------------


@dataclass(frozen=True)
class SubalgebraMask:
    """Set of blades spanning a subspace of G(R^n)."""

    name: str
    n: int
    allowed: frozenset[int]

    @cached_property
    def indices(self) -> np.ndarray:
        return np.array(sorted(self.allowed), dtype=np.intp)

    @cached_property
    def flags(self) -> np.ndarray:
        f = np.zeros(1 << self.n, dtype=bool)
        f[self.indices] = True
        return f

    @property
    def dim(self) -> int:
        return len(self.allowed)

    def project(self, a: Multivector) -> Multivector:
        return project_subalgebra(a, self)

    def contains(self, a: Multivector | np.ndarray) -> bool:
        coeffs = a.coeffs if isinstance(a, Multivector) else np.asarray(a)
        return not np.any(coeffs[..., ~self.flags])

    def is_closed(self, sig: Signature | None = None) -> bool:
        """Exhaustively check closure under the geometric product."""
        sig = sig or Signature(self.n)
        for a in self.allowed:
            for b in self.allowed:
                sign, c = blade_product(a, b, sig)
                if sign != 0 and c not in self.allowed:
                    return False
        return True


def FULL(n: int) -> SubalgebraMask:
    return SubalgebraMask(f"full{n}", n, frozenset(range(1 << n)))


def EVEN(n: int) -> SubalgebraMask:
    return SubalgebraMask(
        f"even{n}", n, frozenset(b for b in range(1 << n) if grade_of(b) % 2 == 0)
    )


def COMPLEX(n: int = 3) -> SubalgebraMask:
    """G+(R²) embedded in G(R^n) as span{1, γ12}."""
    if n < 2:
        raise ValueError("complex subalgebra needs n >= 2")
    return SubalgebraMask("complex", n, frozenset({0, 0b11}))


def REAL(n: int = 3) -> SubalgebraMask:
    return SubalgebraMask("real", n, frozenset({0}))


NAMED_MASKS = {
    "full3": FULL(3),
    "rotor3": SubalgebraMask("rotor3", 3, EVEN(3).allowed),
    "complex": COMPLEX(3),
    "real": REAL(3),
}


def mask_by_name(name: str) -> SubalgebraMask:
    try:
        return NAMED_MASKS[name]
    except KeyError:
        raise KeyError(f"unknown mask {name!r}; available: {', '.join(NAMED_MASKS)}") from None


def project_subalgebra(a: Multivector, mask: SubalgebraMask) -> Multivector:
    if mask.n != a.sig.n:
        raise SignatureMismatch(f"mask over n={mask.n} applied to n={a.sig.n}")
    return Multivector(a.sig, np.where(mask.flags, a.coeffs, 0.0))


# -- isomorphisms ------------------------------------------------------------

_G12, _G13, _G23 = 0b011, 0b101, 0b110


def quaternion_map(h: Sequence[float]) -> Multivector:
    """Quaternion ``w + xi + yj + zk`` as the rotor ``w - xγ12 - yγ23 - zγ31``."""
    w, x, y, z = (float(t) for t in h)
    # γ31 = -γ13, so k lands on +γ13
    return Multivector.from_terms(G3, {0: w, _G12: -x, _G23: -y, _G13: z})


def quaternion_unmap(a: Multivector, tol: float = EPS) -> tuple[float, float, float, float]:
    if a.sig != G3:
        raise SignatureMismatch("quaternion map lives in G(R3)")
    odd = a.coeffs[algebra(G3).grades % 2 == 1]
    if np.abs(odd).max() > tol:
        raise NotEven("multivector has odd-grade components")
    return (a[0], -a[_G12], -a[_G23], a[_G13])


def complex_map(z: complex, sig: Signature = G3) -> Multivector:
    """``a + bj`` as ``a + bγ12``."""
    return Multivector.from_terms(sig, {0: z.real, _G12: z.imag})


def complex_unmap(a: Multivector, tol: float = EPS) -> complex:
    if not COMPLEX(a.sig.n).contains(np.where(np.abs(a.coeffs) > tol, a.coeffs, 0.0)):
        raise NotEven("multivector is outside span{1, γ12}")
    return complex(a[0], a[_G12])


# -- rendering ----------------------------------------------------------------


@lru_cache(maxsize=None)
def display_basis(n: int) -> tuple[tuple[int, int, str], ...]:
    """``(bits, sign, label)`` in display order.

    For n = 3 this is {1, γ1, γ2, γ3, γ12, γ23, γ31, I}; γ31 carries sign -1
    relative to the canonical γ13.  Other n use ascending labels ordered by
    grade.
    """
    if n == 3:
        return (
            (0, 1, "1"), (1, 1, "γ1"), (2, 1, "γ2"), (4, 1, "γ3"),
            (3, 1, "γ12"), (6, 1, "γ23"), (5, -1, "γ31"), (7, 1, "I"),
        )
    blades = sorted(range(1 << n), key=lambda b: (grade_of(b), _factors(b)))
    return tuple(
        (b, 1, "1" if b == 0 else "γ" + "".join(str(k) for k in _factors(b))) for b in blades
    )


def _factors(bits: int) -> tuple[int, ...]:
    return tuple(k + 1 for k in range(bits.bit_length()) if bits >> k & 1)


def _fmt(x: float, precision: int | None) -> str:
    if precision is not None:
        return f"{x:.{precision}g}"
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def render(a: Multivector, precision: int | None = None) -> str:
    """Text form in the display basis, e.g. ``0.55 + 1γ2 - 4.5γ31 + 3I``."""
    parts: list[str] = []
    for bits, sign, label in display_basis(a.sig.n):
        c = sign * a.coeffs[bits]
        if c == 0:
            continue
        body = _fmt(abs(c), precision) + ("" if bits == 0 else label)
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts) if parts else "0"


def blade_label(sign: float, bits: int, n: int) -> str:
    """Label of ``sign * blade`` in the display basis, e.g. ``-γ31`` or ``-1``."""
    for b, s, label in display_basis(n):
        if b == bits:
            total = sign * s
            if total == 0:
                return "0"
            return ("-" if total < 0 else "") + label
    raise ValueError(bits)


def cayley_table(sig: Signature | int) -> list[list[str]]:
    """Blade product table in display order; row blade times column blade."""
    if isinstance(sig, int):
        sig = Signature(sig)
    order = display_basis(sig.n)
    rows = []
    for a, sa, _ in order:
        row = []
        for b, sb, _ in order:
            sign, c = blade_product(a, b, sig)
            row.append(blade_label(sign * sa * sb, c, sig.n))
        rows.append(row)
    return rows


def format_cayley_table(sig: Signature | int) -> str:
    if isinstance(sig, int):
        sig = Signature(sig)
    header = [label for _, _, label in display_basis(sig.n)]
    rows = cayley_table(sig)
    width = max(len(s) for s in header + [c for r in rows for c in r]) + 1
    lines = [" " * width + "".join(h.rjust(width) for h in header)]
    for label, row in zip(header, rows):
        lines.append(label.rjust(width) + "".join(c.rjust(width) for c in row))
    return "\n".join(lines)


_TERM = re.compile(r"\s*([+-])?\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*([γI][0-9]*)?\s*")


def parse(text: str, sig: Signature = G3) -> Multivector:
    """Inverse of :func:`render`, e.g. ``parse("0.55 + 1γ2 - 4.5γ31 + 3I")``."""
    labels = {label: (bits, sign) for bits, sign, label in display_basis(sig.n)}
    coeffs = np.zeros(sig.size)
    pos = 0
    text = text.strip()
    if text == "0":
        return Multivector(sig, coeffs)
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or (pos > 0 and m.group(1) is None):
            raise ValueError(f"cannot parse multivector near {text[pos:]!r}")
        value = float(m.group(2)) * (-1.0 if m.group(1) == "-" else 1.0)
        label = m.group(3) or "1"
        if label not in labels:
            raise ValueError(f"unknown blade {label!r} for n={sig.n}")
        bits, sign = labels[label]
        coeffs[bits] += sign * value
        pos = m.end()
    return Multivector(sig, coeffs)
