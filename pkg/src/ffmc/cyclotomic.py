"""Exact cyclotomic integer arithmetic: Z[zeta_n] and its mod-l^N quotients.

Elements of Z[zeta_n] are residues modulo the n-th cyclotomic polynomial,
stored as integer coefficient tuples of length phi(n).  Mixed-order
arithmetic lifts both operands into Z[zeta_lcm] via zeta_m -> zeta_n^(n/m).
No embedding into an l-adic field is ever chosen: reduction to the modular
ring is plain coefficientwise reduction.
"""

from __future__ import annotations

import functools
import math
from typing import Sequence

from .base import factorize


def euler_phi(n: int) -> int:
    out = n
    for p in factorize(n):
        out = out // p * (p - 1)
    return out


def _int_poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    while out and out[-1] == 0:
        out.pop()
    return out


def _int_poly_exact_div(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Exact division of integer polynomials; b must be monic here."""
    a = list(a)
    assert b[-1] == 1
    q = [0] * (len(a) - len(b) + 1)
    while len(a) >= len(b):
        c = a[-1]
        d = len(a) - len(b)
        q[d] = c
        for i in range(len(b)):
            a[d + i] -= c * b[i]
        while a and a[-1] == 0:
            a.pop()
    if a:
        raise ValueError("division not exact")
    return q


@functools.cache
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, little-endian, computed by exact division."""
    if n == 1:
        return (-1, 1)
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    den = [1]
    for d in range(1, n):
        if n % d == 0:
            den = _int_poly_mul(den, list(cyclotomic_polynomial(d)))
    return tuple(_int_poly_exact_div(num, den))


def _reduce_mod_phi(coeffs: list[int], n: int) -> list[int]:
    phi = euler_phi(n)
    if len(coeffs) <= phi:
        return coeffs + [0] * (phi - len(coeffs))
    phi_n = cyclotomic_polynomial(n)
    out = list(coeffs)
    for i in range(len(out) - 1, phi - 1, -1):
        c = out[i]
        if c:
            out[i] = 0
            for j in range(phi):  # x^i = x^(i-phi) * (x^phi mod Phi_n)
                out[i - phi + j] -= c * phi_n[j]
    return out[:phi]


class Cyc:
    """An element of Z[zeta_n], reduced modulo Phi_n."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Sequence[int]):
        phi = euler_phi(order)
        lst = _reduce_mod_phi(list(coeffs), order)
        self.order = order
        self.coeffs = tuple(lst[:phi])

    @classmethod
    def from_int(cls, k: int, order: int = 1) -> "Cyc":
        return cls(order, [k])

    @classmethod
    def zeta(cls, n: int) -> "Cyc":
        if n == 1:
            return cls(1, [1])
        return cls(n, [0, 1])

    def lift(self, order: int) -> "Cyc":
        """Image under zeta_m -> zeta_order^(order/m); m must divide order."""
        if order == self.order:
            return self
        if order % self.order != 0:
            raise ValueError("can only lift to a multiple of the order")
        step = order // self.order
        out = [0] * (euler_phi(self.order) * step)
        for k, c in enumerate(self.coeffs):
            out[k * step] = c
        return Cyc(order, out)

    def _pair(self, other) -> tuple["Cyc", "Cyc"]:
        if isinstance(other, int):
            other = Cyc.from_int(other)
        n = math.lcm(self.order, other.order)
        return self.lift(n), other.lift(n)

    def __add__(self, other):
        a, b = self._pair(other)
        return Cyc(a.order, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._pair(other)
        return Cyc(a.order, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return Cyc.from_int(other) - self

    def __neg__(self):
        return Cyc(self.order, [-c for c in self.coeffs])

    def __mul__(self, other):
        a, b = self._pair(other)
        return Cyc(a.order, _int_poly_mul(list(a.coeffs), list(b.coeffs)))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.root_inverse() ** (-k)
        result = Cyc.from_int(1, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = Cyc.from_int(other)
        if not isinstance(other, Cyc):
            return NotImplemented
        a, b = self._pair(other)
        return a.coeffs == b.coeffs

    # equality lifts across orders, so no consistent hash is available
    __hash__ = None

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def to_int(self) -> int:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not a rational integer")
        return self.coeffs[0]

    def root_order(self) -> int | None:
        """Multiplicative order if this is a root of unity, else None.

        Roots of unity in Z[zeta_n] have order dividing lcm(2, n) * n-ish;
        searching up to 2n covers them all.
        """
        if self.is_zero():
            return None
        power = self
        for k in range(1, 2 * self.order + 1):
            if power == 1:
                return k
            power = power * self
        return None

    def root_inverse(self) -> "Cyc":
        k = self.root_order()
        if k is None:
            raise ValueError("inverse only available for roots of unity")
        return self ** (k - 1)

    def divide_exact_int(self, d: int) -> "Cyc":
        """Divide by a rational integer, requiring exact divisibility."""
        if any(c % d for c in self.coeffs):
            raise ValueError(f"coefficients not divisible by {d}")
        return Cyc(self.order, [c // d for c in self.coeffs])

    def reduce_mod(self, ell: int, N: int) -> "CycMod":
        return CycMod(self.order, ell, N, self.coeffs)

    def __repr__(self):
        if self.is_rational():
            return str(self.coeffs[0])
        return f"Cyc(n={self.order}, {list(self.coeffs)})"


def galois_conjugate(a: Cyc, k: int) -> Cyc:
    """Image of a under the automorphism zeta_n -> zeta_n^k, gcd(k, n) = 1."""
    n = a.order
    if math.gcd(k, n) != 1:
        raise ValueError(f"{k} is not a unit modulo {n}")
    raw = [0] * n
    for i, c in enumerate(a.coeffs):
        raw[(i * k) % n] += c
    return Cyc(n, raw)


def field_norm(a: Cyc) -> tuple[int, Cyc]:
    """The rational norm N(a) and the product of the other conjugates.

    Returns (N, adj) with a * adj = N, so exact quotients x / a can be
    computed as x * adj / N without a full cyclotomic division routine.
    """
    n = a.order
    adj = Cyc.from_int(1, n)
    for k in range(2, n):
        if math.gcd(k, n) == 1:
            adj = adj * galois_conjugate(a, k)
    norm = a * adj
    if not norm.is_rational():
        raise ArithmeticError("conjugate product is not rational")
    return norm.to_int(), adj


def root_of_unity_power_decomposition(a: Cyc, q: int) -> tuple[Cyc, int] | None:
    """Write a = u * q^s with u a root of unity, or return None.

    Used when extracting epsilon-constants from functional equations.
    """
    s = 0
    cur = a
    while True:
        if cur.root_order() is not None:
            return cur, s
        try:
            cur = cur.divide_exact_int(q)
        except ValueError:
            return None
        s += 1
        if s > 10_000:  # cannot happen for nonzero a; guard anyway
            return None


class CycMod:
    """An element of (Z/l^N)[zeta_n] = Z[x]/(Phi_n, l^N)."""

    __slots__ = ("order", "ell", "N", "modulus", "coeffs")

    def __init__(self, order: int, ell: int, N: int, coeffs: Sequence[int]):
        if N < 1:
            raise ValueError("modulus exponent N must be >= 1")
        m = ell ** N
        lst = _reduce_mod_phi(list(coeffs), order)
        self.order = order
        self.ell = ell
        self.N = N
        self.modulus = m
        self.coeffs = tuple(c % m for c in lst[: euler_phi(order)])

    def _check(self, other: "CycMod"):
        if (other.order, other.ell, other.N) != (self.order, self.ell, self.N):
            raise ValueError("mixed CycMod parameters")

    def __add__(self, other):
        if isinstance(other, int):
            other = CycMod(self.order, self.ell, self.N, [other])
        self._check(other)
        return CycMod(self.order, self.ell, self.N,
                      [x + y for x, y in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = CycMod(self.order, self.ell, self.N, [other])
        self._check(other)
        return CycMod(self.order, self.ell, self.N,
                      [x - y for x, y in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return CycMod(self.order, self.ell, self.N, [-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, int):
            other = CycMod(self.order, self.ell, self.N, [other])
        self._check(other)
        return CycMod(self.order, self.ell, self.N,
                      _int_poly_mul(list(self.coeffs), list(other.coeffs)))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = CycMod(self.order, self.ell, self.N, [1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = CycMod(self.order, self.ell, self.N, [other])
        if not isinstance(other, CycMod):
            return NotImplemented
        return (self.order, self.ell, self.N, self.coeffs) == (
            other.order, other.ell, other.N, other.coeffs)

    def __hash__(self):
        return hash(("cycmod", self.order, self.ell, self.N, self.coeffs))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def lift(self, order: int) -> "CycMod":
        """Image under zeta_m -> zeta_order^(order/m); m must divide order."""
        if order == self.order:
            return self
        if order % self.order != 0:
            raise ValueError("can only lift to a multiple of the order")
        step = order // self.order
        out = [0] * (euler_phi(self.order) * step)
        for k, c in enumerate(self.coeffs):
            out[k * step] = c
        return CycMod(order, self.ell, self.N, out)

    def __repr__(self):
        return f"CycMod(n={self.order}, mod {self.ell}^{self.N}, {list(self.coeffs)})"


def reduction_map(n: int, ell: int, N: int):
    """The ring homomorphism Z[zeta_n] -> (Z/l^N)[zeta_n]."""
    if N < 1:
        raise ValueError("modulus exponent N must be >= 1")

    def reduce(a: Cyc) -> CycMod:
        return a.lift(n).reduce_mod(ell, N)

    return reduce
