"""Point counting on superelliptic covers y^m = f(t) and zeta bookkeeping.

This is the algebraic-side oracle: everything here comes from exhaustive
evaluation over finite fields plus Newton-identity conversion, with the
Weil functional equation asserted as an internal self-check.  Nothing in
this module consumes Euler products; the cross-check against the
analytic side lives in mc_verify.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .base import ExtField, FqPolynomial, PrimeField, finite_field
from .cyclotomic import Cyc
from .errors import InternalCountError, ResourceLimitError

DEFAULT_COUNT_CAP = 10 ** 7
_NUMPY_THRESHOLD = 50_000


@dataclass(frozen=True)
class SuperellipticCurve:
    """Smooth projective model of y^m = f(t) over F_q, with m | q - 1."""

    field: object
    m: int
    f: FqPolynomial

    def __post_init__(self):
        q = self.field.q
        if self.m < 1 or (q - 1) % self.m != 0:
            raise ValueError(f"m = {self.m} must divide q - 1 = {q - 1}")
        if self.m > 1:
            if self.f.degree < 1:
                raise ValueError("f must be non-constant")
            if not self.f.is_squarefree():
                raise ValueError("f must be squarefree")

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def genus(self) -> int:
        if self.m == 1:
            return 0
        d = self.f.degree
        two_g = (d - 1) * (self.m - 1) + 1 - math.gcd(self.m, d)
        assert two_g % 2 == 0
        return two_g // 2


def extension_field(base, n: int):
    """F_{q^n} over the prime field, plus the embedding of F_q into it."""
    if n == 1:
        return base, lambda c: c
    big = finite_field(base.p, base.e * n)
    if isinstance(base, PrimeField):
        return big, big.embed
    # find a root of the defining modulus of `base` inside `big`
    mod_ints = [base.base.element_to_int(c) for c in base.modulus]
    root = None
    for k in range(big.q):
        x = big.element_from_int(k)
        acc = big.zero()
        for c in reversed(mod_ints):
            acc = big.add(big.mul(acc, x), big.from_int(c))
        if acc == big.zero():
            root = x
            break
    if root is None:
        raise RuntimeError("no embedding root found")  # unreachable

    def embed(c):
        acc = big.zero()
        for ci in reversed(c):
            acc = big.add(big.mul(acc, root), big.from_int(ci))
        return acc

    return big, embed


def base_change_curve(curve: SuperellipticCurve, r: int) -> SuperellipticCurve:
    big, embed = extension_field(curve.field, r)
    coeffs = [embed(c) for c in curve.f.coeffs]
    return SuperellipticCurve(big, curve.m, FqPolynomial(big, coeffs))


# ---------------------------------------------------------------------------
# counting kernels


class _BulkField:
    """Vectorized arithmetic for F_{p^e}: rows of digit arrays mod p."""

    def __init__(self, K):
        self.p = K.p
        self.e = K.e
        self.Q = K.q
        if isinstance(K, PrimeField):
            self.red = np.zeros((0, 1), dtype=np.int64)
        else:
            self.red = np.array(
                [[K.base.element_to_int(c) for c in row] for row in K._red],
                dtype=np.int64) % self.p
        self.radix = np.array([self.p ** i for i in range(self.e)],
                              dtype=np.int64)

    def all_elements(self) -> np.ndarray:
        idx = np.arange(self.Q, dtype=np.int64)
        digits = np.empty((self.Q, self.e), dtype=np.int64)
        for i in range(self.e):
            digits[:, i] = idx % self.p
            idx //= self.p
        return digits

    def from_element(self, K, a, n_rows: int) -> np.ndarray:
        if isinstance(K, PrimeField):
            row = np.array([a], dtype=np.int64)
        else:
            row = np.array([K.base.element_to_int(c) for c in a],
                           dtype=np.int64)
        return np.broadcast_to(row, (n_rows, self.e))

    def mul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        e = self.e
        if e == 1:
            return (A * B) % self.p
        conv = np.zeros((A.shape[0], 2 * e - 1), dtype=np.int64)
        for i in range(e):
            ai = A[:, i]
            for j in range(e):
                conv[:, i + j] += ai * B[:, j]
        conv %= self.p
        res = conv[:, :e] + conv[:, e:] @ self.red
        return res % self.p

    def pow(self, A: np.ndarray, n: int) -> np.ndarray:
        result = np.zeros_like(A)
        result[:, 0] = 1
        base = A
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def encode(self, A: np.ndarray) -> np.ndarray:
        return A @ self.radix


def _count_affine_bulk(K, f_coeffs, m: int, blocks: int) -> int:
    bulk = _BulkField(K)
    X = bulk.all_elements()
    n = X.shape[0]
    # set of nonzero m-th powers, encoded
    powers = bulk.encode(bulk.pow(X, m))
    power_set = np.unique(powers)
    power_set = power_set[power_set != 0]

    block = max(1, -(-n // max(1, blocks)))
    total = 0
    for start in range(0, n, block):
        xs = X[start:start + block]
        fx = np.zeros_like(xs)
        for c in reversed(f_coeffs):
            fx = bulk.mul(fx, xs)
            fx = (fx + bulk.from_element(K, c, xs.shape[0])) % bulk.p
        codes = bulk.encode(fx)
        total += int(np.count_nonzero(codes == 0))
        total += m * int(np.count_nonzero(np.isin(codes, power_set)))
    return total


def _count_affine_plain(K, f_coeffs, m: int, blocks: int) -> int:
    # encoded set of nonzero m-th powers
    power_set = set()
    for z in K.elements():
        power_set.add(K.element_to_int(K.pow(z, m)))
    power_set.discard(K.element_to_int(K.zero()))

    elems = list(K.elements())
    block = max(1, -(-len(elems) // max(1, blocks)))
    total = 0
    for start in range(0, len(elems), block):
        sub = 0
        for x in elems[start:start + block]:
            acc = K.zero()
            for c in reversed(f_coeffs):
                acc = K.add(K.mul(acc, x), c)
            if acc == K.zero():
                sub += 1
            elif K.element_to_int(acc) in power_set:
                sub += m
        total += sub
    return total


def count_points(curve: SuperellipticCurve, n: int, *,
                 cap: int = DEFAULT_COUNT_CAP, blocks: int = 1) -> int:
    """#C(F_{q^n}) of the smooth projective model, by exhaustive evaluation."""
    Q = curve.q ** n
    if Q > cap:
        raise ResourceLimitError(
            f"counting over a field of size {Q} exceeds the evaluation cap "
            f"{cap}")
    if curve.m == 1:
        return Q + 1
    K, embed = extension_field(curve.field, n)
    f_coeffs = [embed(c) for c in curve.f.coeffs]

    if Q > _NUMPY_THRESHOLD:
        affine = _count_affine_bulk(K, f_coeffs, curve.m, blocks)
    else:
        affine = _count_affine_plain(K, f_coeffs, curve.m, blocks)

    # points over infinity: local analysis of y^m = f gives the solutions
    # of z^gcd(m, deg f) = leading(f) in F_Q
    g_inf = math.gcd(curve.m, curve.f.degree)
    lc = embed(curve.f.leading())
    if K.pow(lc, (Q - 1) // g_inf) == K.one():
        at_infinity = g_inf
    else:
        at_infinity = 0
    return affine + at_infinity


# ---------------------------------------------------------------------------
# zeta numerators and class numbers


@dataclass(frozen=True)
class ZetaData:
    counts: tuple[int, ...]
    P: tuple[int, ...]  # numerator of zeta, degree 2g, P(0) = 1
    h: int              # class number P(1)
    fe_sign: int

    @property
    def genus(self) -> int:
        return (len(self.P) - 1) // 2


def _power_sums_from_counts(q: int, counts: Sequence[int]) -> list[int]:
    return [q ** (i + 1) + 1 - c for i, c in enumerate(counts)]


def _coeffs_from_power_sums(s: Sequence[int], degree: int) -> list[int]:
    """Newton identities for P(t) = prod(1 - alpha_i t) = sum c_k t^k."""
    c = [1]
    for k in range(1, degree + 1):
        total = sum(c[i] * s[k - 1 - i] for i in range(k))
        if total % k != 0:
            raise InternalCountError(
                f"Newton identity gave a non-integer coefficient at k={k}")
        c.append(-total // k)
    return c


def _power_sums_from_coeffs(c: Sequence[int], upto: int) -> list[int]:
    deg = len(c) - 1
    s: list[int] = []
    for k in range(1, upto + 1):
        val = -k * (c[k] if k <= deg else 0)
        val -= sum(c[i] * s[k - 1 - i] for i in range(1, min(k - 1, deg) + 1))
        s.append(val)
    return s


def zeta_numerator(curve: SuperellipticCurve, *,
                   cap: int = DEFAULT_COUNT_CAP) -> ZetaData:
    """P(t) of degree 2g from counts over F_{q^n}, n = 1..2g.

    All 2g counts are computed independently so the functional equation
    remains a genuine self-check rather than an input.
    """
    g = curve.genus
    q = curve.q
    counts = tuple(count_points(curve, i + 1, cap=cap) for i in range(2 * g))
    s = _power_sums_from_counts(q, counts)
    c = _coeffs_from_power_sums(s, 2 * g)
    for k in range(g + 1):
        if c[2 * g - k] != q ** (g - k) * c[k]:
            raise InternalCountError(
                f"functional equation failed at coefficient {k}: "
                f"{c[2*g-k]} != {q**(g-k)} * {c[k]}; counts {counts}")
    h = sum(c)
    if h <= 0:
        raise InternalCountError(f"nonpositive class number {h}")
    return ZetaData(counts, tuple(c), h, 1)


def base_change_numerator(P: Sequence[int], r: int) -> list[int]:
    """P_r(t) = prod(1 - alpha_i^r t) for the roots alpha_i of reversed P."""
    if not P or P[0] != 1:
        raise ValueError("P(0) must be 1")
    if r == 1:
        return list(P)
    deg = len(P) - 1
    s = _power_sums_from_coeffs(list(P), deg * r)
    s_r = [s[r * k - 1] for k in range(1, deg + 1)]
    return _coeffs_from_power_sums(s_r, deg)


def evaluate_at_one(P: Sequence[int]) -> int:
    return sum(P)


def jacobian_order_direct(curve: SuperellipticCurve, *,
                          cap: int = DEFAULT_COUNT_CAP) -> Optional[int]:
    """Second counting method for tiny genus: |Jac(F_q)| without zeta.

    Genus 0 has trivial Jacobian; for genus 1 the Jacobian is the curve
    itself.  Returns None for genus >= 2 (no independent method here).
    """
    g = curve.genus
    if g == 0:
        return 1
    if g == 1:
        return count_points(curve, 1, cap=cap)
    return None


@dataclass(frozen=True)
class ArtinCheck:
    ok: bool
    p_from_counts: tuple[int, ...]
    p_from_characters: tuple[int, ...]


def artin_factorization_check(curve: SuperellipticCurve,
                              l_polynomials: Sequence[Sequence[Cyc]], *,
                              cap: int = DEFAULT_COUNT_CAP) -> ArtinCheck:
    """Raw-count zeta numerator against a product of given L-polynomials.

    The factors are the nontrivial character L-polynomials of the cover,
    supplied precomputed so this module stays independent of the Euler
    product code.  Both sides are fully expanded and compared exactly.
    """
    zeta = zeta_numerator(curve, cap=cap)
    product = [Cyc.from_int(1)]
    for poly in l_polynomials:
        out = [Cyc.from_int(0)] * (len(product) + len(poly) - 1)
        for i, a in enumerate(product):
            for j, b in enumerate(poly):
                out[i + j] = out[i + j] + a * b
        product = out
    while product and product[-1].is_zero():
        product.pop()
    ints = []
    for c in product:
        if not c.is_rational():
            return ArtinCheck(False, zeta.P, ())
        ints.append(c.to_int())
    return ArtinCheck(tuple(ints) == zeta.P, zeta.P, tuple(ints))
