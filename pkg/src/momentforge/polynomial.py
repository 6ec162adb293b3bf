"""Exact sparse multivariate polynomials over the rationals.

A polynomial is a finite set of (coefficient, exponent-tuple) terms with
``Fraction`` coefficients, so construction-time algebra (products, partial
derivatives, substitution) is exact.  Only point evaluation rounds, and it
accumulates terms in one canonical order (sorted exponent tuples) so repeated
runs on the same platform agree bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

Exponents = tuple[int, ...]


class DimensionMismatch(ValueError):
    """Raised when operands or points disagree on the number of variables."""


def _canonical(acc: Mapping[Exponents, Fraction]) -> tuple[tuple[Fraction, Exponents], ...]:
    """Sort by exponent tuple and drop zero coefficients."""
    return tuple((acc[e], e) for e in sorted(acc) if acc[e] != 0)


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)  # exact: every double is rational
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


@dataclass(frozen=True)
class Polynomial:
    """Immutable sparse polynomial in ``nvars`` variables.

    ``terms`` holds (coefficient, exponents) pairs sorted by exponent tuple,
    with no zero coefficients and no repeated exponent tuple.  The zero
    polynomial has an empty term tuple and degree -1.
    """

    nvars: int
    terms: tuple[tuple[Fraction, Exponents], ...]

    def __post_init__(self):
        if self.nvars <= 0:
            raise ValueError("nvars must be positive")
        for coeff, exps in self.terms:
            if len(exps) != self.nvars:
                raise DimensionMismatch("exponent tuple length != nvars")
            if coeff == 0:
                raise ValueError("zero coefficient stored in term list")

    # -- construction ------------------------------------------------------

    @staticmethod
    def from_terms(nvars: int, terms: Iterable[tuple[object, Sequence[int]]]) -> "Polynomial":
        acc: dict[Exponents, Fraction] = {}
        for coeff, exps in terms:
            key = tuple(int(e) for e in exps)
            if len(key) != nvars:
                raise DimensionMismatch("exponent tuple length != nvars")
            if any(e < 0 for e in key):
                raise ValueError("negative exponent")
            acc[key] = acc.get(key, Fraction(0)) + _as_fraction(coeff)
        return Polynomial(nvars, _canonical(acc))

    @staticmethod
    def zero(nvars: int) -> "Polynomial":
        return Polynomial(nvars, ())

    @staticmethod
    def constant(nvars: int, value) -> "Polynomial":
        c = _as_fraction(value)
        if c == 0:
            return Polynomial.zero(nvars)
        return Polynomial(nvars, ((c, (0,) * nvars),))

    @staticmethod
    def variable(nvars: int, index: int) -> "Polynomial":
        """x_index as a polynomial; ``index`` is 0-based."""
        if not 0 <= index < nvars:
            raise DimensionMismatch(f"variable index {index} out of range")
        exps = tuple(1 if i == index else 0 for i in range(nvars))
        return Polynomial(nvars, ((Fraction(1), exps),))

    # -- structure ---------------------------------------------------------

    @property
    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for _, e in self.terms)

    def as_dict(self) -> dict[Exponents, Fraction]:
        return {e: c for c, e in self.terms}

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- arithmetic (exact) -------------------------------------------------

    def _check_same_dim(self, other: "Polynomial"):
        if self.nvars != other.nvars:
            raise DimensionMismatch("operands have different nvars")

    def __add__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.nvars, other)
        self._check_same_dim(other)
        acc = dict(self.as_dict())
        for c, e in other.terms:
            acc[e] = acc.get(e, Fraction(0)) + c
        return Polynomial(self.nvars, _canonical(acc))

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.nvars, tuple((-c, e) for c, e in self.terms))

    def __sub__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.nvars, other)
        return p_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        out = Polynomial.constant(self.nvars, 1)
        for _ in range(k):
            out = p_mul(out, self)
        return out

    # -- calculus / substitution (exact) -------------------------------------

    def partial(self, index: int) -> "Polynomial":
        if not 0 <= index < self.nvars:
            raise DimensionMismatch(f"variable index {index} out of range")
        acc: dict[Exponents, Fraction] = {}
        for c, e in self.terms:
            if e[index] == 0:
                continue
            new = list(e)
            new[index] -= 1
            key = tuple(new)
            acc[key] = acc.get(key, Fraction(0)) + c * e[index]
        return Polynomial(self.nvars, _canonical(acc))

    def restrict(self, fixed: Mapping[int, object]) -> "Polynomial":
        """Substitute exact values for the 0-based variables in ``fixed``,
        returning a polynomial in the remaining variables (in index order)."""
        vals = {i: _as_fraction(v) for i, v in fixed.items()}
        keep = [i for i in range(self.nvars) if i not in vals]
        if not keep:
            raise DimensionMismatch("restriction must leave at least one variable")
        acc: dict[Exponents, Fraction] = {}
        for c, e in self.terms:
            factor = c
            for i, v in vals.items():
                if e[i]:
                    factor *= v ** e[i]
            if factor == 0:
                continue
            key = tuple(e[i] for i in keep)
            acc[key] = acc.get(key, Fraction(0)) + factor
        return Polynomial(len(keep), _canonical(acc))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for c, e in self.terms:
            mono = "*".join(f"x{i+1}^{k}" if k > 1 else f"x{i+1}"
                            for i, k in enumerate(e) if k)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


# -- module-level operations -------------------------------------------------

def p_eval(p: Polynomial, x: Sequence[float]) -> float:
    """Evaluate at a point of doubles, accumulating terms in canonical order."""
    if len(x) != p.nvars:
        raise DimensionMismatch(f"point has {len(x)} coordinates, expected {p.nvars}")
    total = 0.0
    for c, e in p.terms:
        term = float(c)
        for xi, k in zip(x, e):
            if k:
                term *= xi ** k
        total += term
    return total


def p_eval_many(p: Polynomial, pts: np.ndarray) -> np.ndarray:
    """Vectorized evaluation at an (m, nvars) array of doubles."""
    pts = np.asarray(pts, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.shape[1] != p.nvars:
        raise DimensionMismatch(f"points have {pts.shape[1]} coordinates, expected {p.nvars}")
    total = np.zeros(len(pts))
    for c, e in p.terms:
        term = np.full(len(pts), float(c))
        for i, k in enumerate(e):
            if k:
                term = term * pts[:, i] ** k
        total = total + term
    return total


def p_eval_exact(p: Polynomial, x: Sequence[object]) -> Fraction:
    """Evaluate exactly; coordinates may be Fractions, ints or doubles."""
    if len(x) != p.nvars:
        raise DimensionMismatch(f"point has {len(x)} coordinates, expected {p.nvars}")
    coords = [_as_fraction(v) for v in x]
    pow2 = []
    for v in coords:
        s = v.denominator.bit_length() - 1
        pow2.append(s if v.denominator == 1 << s else None)
    if not p.terms:
        return Fraction(0)
    if any(s is None for s in pow2):
        total = Fraction(0)
        for c, e in p.terms:
            term = c
            for v, k in zip(coords, e):
                if k:
                    term *= v ** k
            total += term
        return total
    # Integer fast path for power-of-two denominators (every double qualifies):
    # coordinate i is n_i / 2^{s_i}; clear coefficient denominators via lcm,
    # align all terms to a common power-of-two shift, sum integers once.
    nums = [v.numerator for v in coords]
    den_lcm = 1
    for c, _ in p.terms:
        den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
    shifts = [sum(s * k for s, k in zip(pow2, e)) for _, e in p.terms]
    S = max(shifts)
    pow_cache: list[list[int]] = [[1] for _ in range(p.nvars)]
    num_total = 0
    for (c, e), shift in zip(p.terms, shifts):
        val = c.numerator * (den_lcm // c.denominator)
        for i, k in enumerate(e):
            if k:
                cache = pow_cache[i]
                while len(cache) <= k:
                    cache.append(cache[-1] * nums[i])
                val *= cache[k]
        num_total += val << (S - shift)
    return Fraction(num_total, den_lcm << S)


def p_grad(p: Polynomial) -> tuple[Polynomial, ...]:
    """Exact gradient as a tuple of partial derivatives."""
    return tuple(p.partial(i) for i in range(p.nvars))


def p_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    """Exact product with merged terms and zero terms dropped."""
    if p.nvars != q.nvars:
        raise DimensionMismatch("operands have different nvars")
    acc: dict[Exponents, Fraction] = {}
    for c1, e1 in p.terms:
        for c2, e2 in q.terms:
            key = tuple(a + b for a, b in zip(e1, e2))
            acc[key] = acc.get(key, Fraction(0)) + c1 * c2
    return Polynomial(p.nvars, _canonical(acc))


def grad_eval_many(grads: Sequence[Polynomial], pts: np.ndarray) -> np.ndarray:
    """Stack gradient values at points into an (m, nvars) array."""
    pts = np.asarray(pts, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    return np.column_stack([p_eval_many(g, pts) for g in grads])
