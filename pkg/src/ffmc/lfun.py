"""Truncated, modified L-functions over F_q(t) and their Iwasawa avatars.

The Euler product is folded as an exact power series with cyclotomic
integer coefficients up to a conductor-derived degree bound plus a guard
band; the guard coefficients must vanish, which certifies both the
conductor and the exactness of the reconstructed polynomial.  Truncation
(factors omitted) and modification (two-term local factors inserted) are
applied inside the fold, not bolted on afterwards.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

from .base import MAX_PLACE_DEGREE, Place, enumerate_places, place_count
from .cyclotomic import Cyc, CycMod, field_norm
from .errors import ConductorMismatchError
from .reps import RAMIFIED, CharacterGroup, CharacterRep, constant_field_twist, tensor

DEFAULT_GUARD = 2

# ---------------------------------------------------------------------------
# polynomial helpers over Z[zeta]

ZERO = Cyc.from_int(0)
ONE = Cyc.from_int(1)


def cpoly_trim(a: list[Cyc]) -> list[Cyc]:
    while a and a[-1].is_zero():
        a.pop()
    return a


def cpoly_mul(a: Sequence[Cyc], b: Sequence[Cyc]) -> list[Cyc]:
    if not a or not b:
        return []
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return cpoly_trim(out)


def cpoly_eval(a: Sequence[Cyc], z: Cyc) -> Cyc:
    acc = ZERO
    for c in reversed(a):
        acc = acc * z + c
    return acc


def atom_poly(beta: Cyc, d: int) -> list[Cyc]:
    """The polynomial 1 - beta * t^d."""
    out = [ONE] + [ZERO] * d
    out[d] = -beta
    return out


def _divide_by_atom(num: list[Cyc], beta: Cyc, d: int) -> Optional[list[Cyc]]:
    """Exact quotient num / (1 - beta t^d), or None if it does not divide."""
    if len(num) <= d:
        return None
    h = [ZERO] * len(num)
    for k in range(len(num)):
        h[k] = num[k] + (beta * h[k - d] if k >= d else ZERO)
    quotient = cpoly_trim(h[: len(num) - d])
    # verify exactness by multiplying back
    if cpoly_mul(quotient, atom_poly(beta, d)) == cpoly_trim(list(num)):
        return quotient
    return None


@dataclass(frozen=True)
class TruncationSpec:
    """Sigma_W (Euler factors omitted) and Sigma_V (D_v factors inserted)."""

    sigma_w: tuple[Place, ...] = ()
    sigma_v: tuple[Place, ...] = ()

    def __post_init__(self):
        if set(self.sigma_w) & set(self.sigma_v):
            raise ValueError("sigma_w and sigma_v must be disjoint")

    @classmethod
    def empty(cls) -> "TruncationSpec":
        return cls((), ())

    def swapped(self) -> "TruncationSpec":
        return TruncationSpec(self.sigma_v, self.sigma_w)


class LPolynomial:
    """An exact rational function in t over Z[zeta], unit at t = 0.

    The denominator is kept as a product of atoms (1 - alpha t^d); atoms
    dividing the numerator exactly are cancelled at construction, so the
    representation is gcd-free for everything built here.
    """

    __slots__ = ("num", "den_atoms", "provenance", "_den_cache")

    def __init__(self, num: Sequence[Cyc], den_atoms: Sequence = (),
                 provenance: Sequence[str] = ()):
        num = cpoly_trim(list(num)) or [ONE]
        if not num[0] == 1:
            raise ValueError("numerator must be 1 at t = 0")
        atoms = []
        for beta, d in den_atoms:
            reduced = _divide_by_atom(num, beta, d)
            if reduced is not None and reduced:
                num = reduced
            else:
                atoms.append((beta, d))
        self.num = tuple(num)
        self.den_atoms = tuple(atoms)
        self.provenance = tuple(provenance)
        self._den_cache = None

    def denominator(self) -> tuple[Cyc, ...]:
        if self._den_cache is None:
            den = [ONE]
            for beta, d in self.den_atoms:
                den = cpoly_mul(den, atom_poly(beta, d))
            self._den_cache = tuple(den)
        return self._den_cache

    @property
    def is_polynomial(self) -> bool:
        return not self.den_atoms

    @property
    def numerator_degree(self) -> int:
        return len(self.num) - 1

    def times_atom(self, beta: Cyc, d: int) -> "LPolynomial":
        """Multiply by (1 - beta t^d), cancelling a matching pole if any."""
        atoms = list(self.den_atoms)
        for i, (b, dd) in enumerate(atoms):
            if dd == d and b == beta:
                del atoms[i]
                return LPolynomial(self.num, atoms, self.provenance)
        return LPolynomial(cpoly_mul(self.num, atom_poly(beta, d)), atoms,
                           self.provenance)

    def over_atom(self, beta: Cyc, d: int) -> "LPolynomial":
        """Divide by (1 - beta t^d)."""
        return LPolynomial(self.num, list(self.den_atoms) + [(beta, d)],
                           self.provenance)

    def __mul__(self, other: "LPolynomial") -> "LPolynomial":
        return LPolynomial(cpoly_mul(self.num, other.num),
                           list(self.den_atoms) + list(other.den_atoms),
                           self.provenance + other.provenance)

    def __eq__(self, other):
        if not isinstance(other, LPolynomial):
            return NotImplemented
        left = cpoly_mul(self.num, list(other.denominator()))
        right = cpoly_mul(other.num, list(self.denominator()))
        return left == right

    __hash__ = None

    def evaluate(self, z: Cyc) -> tuple[Cyc, Cyc]:
        """Value as a (numerator, denominator) pair at t = z."""
        return cpoly_eval(self.num, z), cpoly_eval(list(self.denominator()), z)

    def substitute_scaled(self, zeta: Cyc) -> "LPolynomial":
        """The rational function L(zeta * t)."""
        num = [c * zeta ** k for k, c in enumerate(self.num)]
        atoms = [(beta * zeta ** d, d) for beta, d in self.den_atoms]
        return LPolynomial(num, atoms, self.provenance)

    def series(self, length: int) -> list[Cyc]:
        """Power-series expansion to the given number of coefficients."""
        s = list(self.num[:length]) + [ZERO] * max(0, length - len(self.num))
        for beta, d in self.den_atoms:
            for k in range(d, length):
                s[k] = s[k] + beta * s[k - d]
        return s

    def __repr__(self):
        return (f"LPolynomial(num={[list(c.coeffs) for c in self.num]}, "
                f"poles={len(self.den_atoms)})")


# ---------------------------------------------------------------------------
# local factors


def euler_factor(chi: CharacterRep, v: Place) -> list[Cyc]:
    """det(1 - Frob_v t^deg(v) | T^{I_v}) as a polynomial in t."""
    frob = chi.frobenius(v)
    if frob is RAMIFIED:
        return [ONE]
    return atom_poly(frob, v.degree)


class LocalFactorComplex:
    """Finite-level two-term complex D_v(T) for a rank-1 tame character.

    Both degrees carry T^{I_v}; phi acts in degree 0 as Frob_v and in
    degree 1 as Frob_v composed with sum(tau^m, m < q^deg v).  For tame
    inertia of order c the degree-1 action collapses to Frob_v * q^deg(v)
    when c = 1 and both degrees vanish when c > 1.
    """

    def __init__(self, frobenius_value, inertia_order: int, q: int, degree: int):
        if inertia_order < 1:
            raise ValueError("inertia order must be positive")
        self.q = q
        self.degree = degree
        self.inertia_order = inertia_order
        if inertia_order == 1:
            self.d0 = frobenius_value
            # geometric sum of tau^m over m < q^deg collapses to q^deg
            self.d1 = frobenius_value * q ** degree
        else:
            self.d0 = None
            self.d1 = None

    def tau_sum_collapses(self) -> bool:
        """Check phi|D1 = phi * sum(tau^m): the tame closed-form identity.

        tau acts by a primitive c-th root of unity on the rank-1 module,
        so the sum over m < q^deg is q^deg for c = 1 and 0 for c > 1
        (c divides q^deg - 1 in the tame case).
        """
        c = self.inertia_order
        if c == 1:
            return self.d1 == self.d0 * self.q ** self.degree
        # sum_{m < q^deg} zc^m splits into full mu_c-orbits (each summing
        # to 0) plus a partial sum over m < q^deg mod c; tameness means
        # c | q^deg - 1, so the partial sum is the single term 1
        zc = Cyc.zeta(c)
        reps = self.q ** self.degree % c
        total = ZERO
        power = ONE
        for _ in range(reps):
            total = total + power
            power = power * zc
        return reps == 1 and total == 1

    def ratio(self) -> LPolynomial:
        if self.d0 is None:
            return LPolynomial([ONE], (), ("local factor: rank 0",))
        num = atom_poly(self.d1, self.degree)
        return LPolynomial(num, [(self.d0, self.degree)],
                           ("local factor: rank 1",))


def modified_local_factor(chi: CharacterRep, v: Place) -> LPolynomial:
    """The two-term D_v ratio det(1-(tq)^d Frob | D^1) / det(1-t^d Frob | D^0)."""
    if chi.value_order % chi.field.p == 0 and chi.is_ramified_at(v):
        raise ValueError(
            "wildly ramified modification factors are out of scope; "
            "the character must be tame or unramified at v")
    frob = chi.frobenius(v)
    if frob is RAMIFIED:
        cplx = LocalFactorComplex(None, chi.value_order, chi.field.q, v.degree)
    else:
        cplx = LocalFactorComplex(frob, 1, chi.field.q, v.degree)
    return cplx.ratio()


# ---------------------------------------------------------------------------
# the Euler product engine


def _series_mul_poly(series: list[Cyc], poly: Sequence[Cyc]) -> list[Cyc]:
    length = len(series)
    out = [ZERO] * length
    for j, c in enumerate(poly):
        if c.is_zero() or j >= length:
            continue
        for k in range(length - j):
            if not series[k].is_zero():
                out[k + j] = out[k + j] + c * series[k]
    return out


def _series_div_atom(series: list[Cyc], beta: Cyc, d: int) -> list[Cyc]:
    out = list(series)
    for k in range(d, len(out)):
        out[k] = out[k] + beta * out[k - d]
    return out


def _series_inv_atom_power(series: list[Cyc], beta: Cyc, d: int,
                           count: int) -> list[Cyc]:
    """Multiply by (1 - beta t^d)^(-count) using the binomial series."""
    length = len(series)
    terms = [ONE]
    power = ONE
    for j in range(1, (length - 1) // d + 1):
        power = power * beta
        terms.append(math.comb(count + j - 1, j) * power)
    out = [ZERO] * length
    for j, c in enumerate(terms):
        for k in range(length - j * d):
            if not series[k].is_zero():
                out[k + j * d] = out[k + j * d] + c * series[k]
    return out


def _fold_generic(chi: CharacterRep, spec: TruncationSpec, length: int,
                  workers: int, place_cap: int) -> list[Cyc]:
    places = enumerate_places(chi.field, length - 1, cap=place_cap)
    skip = set(spec.sigma_w)
    modified = set(spec.sigma_v)

    def place_series(chunk: list[Place]) -> list[Cyc]:
        s = [ONE] + [ZERO] * (length - 1)
        for v in chunk:
            if v in skip:
                continue
            frob = chi.frobenius(v)
            if frob is RAMIFIED:
                continue
            s = _series_div_atom(s, frob, v.degree)
            if v in modified:
                q_d = chi.field.q ** v.degree
                s = _series_mul_poly(s, atom_poly(frob * q_d, v.degree))
        return s

    if workers <= 1:
        return place_series(places)
    chunks = [places[i::workers] for i in range(workers)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        partials = list(pool.map(place_series, chunks))
    out = [ONE] + [ZERO] * (length - 1)
    for part in partials:  # fixed merge order: bit-identical for any workers
        out = _series_mul_poly(out, part)
    return out


def _fold_constant_type(chi: CharacterRep, spec: TruncationSpec,
                        length: int) -> list[Cyc]:
    q = chi.field.q
    c = chi.constant_value
    w = chi.weight
    special = {}
    for v in spec.sigma_w + spec.sigma_v:
        special[v.degree] = special.get(v.degree, 0) + 1
    s = [ONE] + [ZERO] * (length - 1)
    for d in range(1, length):
        count = place_count(q, d) + (1 if d == 1 else 0)  # finite + infinity
        count -= special.get(d, 0)
        if count > 0:
            s = _series_inv_atom_power(s, c ** d * q ** (w * d), d, count)
    for v in spec.sigma_v:
        d = v.degree
        frob = c ** d * q ** (w * d)
        s = _series_div_atom(s, frob, d)
        s = _series_mul_poly(s, atom_poly(frob * q ** d, d))
    return s


def degree_bound(chi: CharacterRep) -> int:
    """Exact degree of the primitive L-polynomial: deg(conductor) - 2."""
    if chi.is_constant_type:
        raise ValueError(
            "degree bound undefined for everywhere-unramified characters; "
            "their L-function is the rational zeta-type function")
    return chi.conductor.degree - 2


def l_function(chi: CharacterRep, spec: Optional[TruncationSpec] = None, *,
               guard: int = DEFAULT_GUARD, workers: int = 1,
               place_cap: int = MAX_PLACE_DEGREE) -> LPolynomial:
    """The Sigma_W-truncated Sigma_V-modified L-function, exactly.

    Nontrivial primitive characters yield polynomials; constant-type
    characters yield rational functions with the two zeta-type poles.
    A nonvanishing guard coefficient raises ConductorMismatchError.
    """
    spec = spec or TruncationSpec.empty()
    q = chi.field.q
    extra = sum(v.degree for v in spec.sigma_w + spec.sigma_v
                if not chi.is_ramified_at(v))
    prov = [f"sigma_w={len(spec.sigma_w)}", f"sigma_v={len(spec.sigma_v)}"]

    if chi.is_constant_type:
        core = 0
        c = chi.constant_value
        den_atoms = [(c * q ** chi.weight, 1), (c * q ** (chi.weight + 1), 1)]
        target = core + extra
        series = _fold_constant_type(chi, spec, target + guard + 1)
    else:
        core = degree_bound(chi)
        if core < 0:
            raise ConductorMismatchError(
                f"conductor degree {chi.conductor.degree} too small for a "
                "nontrivial character")
        den_atoms = []
        target = core + extra
        series = _fold_generic(chi, spec, target + guard + 1, workers,
                               place_cap)
        prov.append(f"euler product over places of degree <= {target + guard}")

    num = list(series)
    for beta, d in den_atoms:
        num = _series_mul_poly(num, atom_poly(beta, d))
    for k in range(target + 1, target + guard + 1):
        if not num[k].is_zero():
            raise ConductorMismatchError(
                f"guard coefficient at degree {k} is nonzero (expected the "
                f"series to stabilise at degree {target}); the conductor "
                f"{chi.conductor!r} is inconsistent with the character")
    return LPolynomial(num[: target + 1], den_atoms, prov)


def euler_product_series(chi: CharacterRep, length: int,
                         spec: Optional[TruncationSpec] = None, *,
                         workers: int = 1,
                         place_cap: int = MAX_PLACE_DEGREE) -> list[Cyc]:
    """Raw Euler-product power series, for oracle-style comparisons."""
    spec = spec or TruncationSpec.empty()
    if chi.is_constant_type:
        return _fold_constant_type(chi, spec, length)
    return _fold_generic(chi, spec, length, workers, place_cap)


# ---------------------------------------------------------------------------
# functional equation


def _q_unit_quotient(num: Cyc, den: Cyc, q: int) -> Optional[tuple[Cyc, int]]:
    """Write num/den = root * q^s with root a cyclotomic integer.

    The quotient is taken in Z[zeta, 1/q]; the root carries no rational
    factor of q.  For higher-order characters the root is a Gauss-sum-like
    Weil number (root * conj(root) = q), not a root of unity, so the two
    leading constants must be divided as a pair rather than decomposed
    one at a time.
    """
    order = math.lcm(num.order, den.order)
    n_norm, adj = field_norm(den.lift(order))
    if n_norm == 0:
        return None
    root = num.lift(order) * adj
    if n_norm < 0:
        n_norm, root = -n_norm, -root
    s = 0
    while n_norm % q == 0:
        n_norm //= q
        s -= 1
    if n_norm != 1:
        try:
            root = root.divide_exact_int(n_norm)
        except ValueError:
            return None
    while not root.is_zero():
        try:
            root = root.divide_exact_int(q)
        except ValueError:
            break
        s += 1
    return root, s


@dataclass(frozen=True)
class Epsilon:
    """The monomial eps = root * q^q_power * t^t_power."""

    root: Cyc
    q_power: int
    t_power: int
    q: int

    def inverse(self) -> "Epsilon":
        dec = _q_unit_quotient(Cyc.from_int(1), self.root, self.q)
        if dec is None:
            raise ValueError("epsilon root is not invertible in Z[zeta, 1/q]")
        root, s = dec
        return Epsilon(root, s - self.q_power, -self.t_power, self.q)

    def __repr__(self):
        return f"Epsilon({self.root!r} * q^{self.q_power} * t^{self.t_power})"


@dataclass(frozen=True)
class FEResult:
    ok: bool
    epsilon: Optional[Epsilon]
    diagnostic: str = ""


def _q_reversal(poly: Sequence[Cyc], q: int) -> list[Cyc]:
    """(qt)^deg * P(1/(qt)): coefficient j is p_{deg-j} * q^j."""
    deg = len(poly) - 1
    return [poly[deg - j] * q ** j for j in range(deg + 1)]


def functional_equation_check(L: LPolynomial, Ldual: LPolynomial, q: int,
                              expected_degree: Optional[int] = None) -> FEResult:
    """Verify Ldual(1/(qt)) * eps = L(t) for a unique monomial eps.

    Returns the monomial that multiplies Ldual(1/(qt)); its inverse is
    the classically quoted constant of the functional equation.
    """
    n_l, d_l = list(L.num), list(L.denominator())
    n_d, d_d = list(Ldual.num), list(Ldual.denominator())
    if len(n_l) != len(n_d) or len(d_l) != len(d_d):
        return FEResult(False, None,
                        f"degree mismatch: numerators {len(n_l)-1} vs "
                        f"{len(n_d)-1}, denominators {len(d_l)-1} vs {len(d_d)-1}")
    if expected_degree is not None and len(n_l) - len(d_l) != expected_degree:
        return FEResult(False, None,
                        f"degree {len(n_l)-len(d_l)} != expected {expected_degree}")
    a = cpoly_mul(n_l, _q_reversal(d_d, q))
    b = cpoly_mul(_q_reversal(n_d, q), d_l)
    if cpoly_mul(a, [b[0]]) != cpoly_mul(b, [a[0]]):
        return FEResult(False, None, "no monomial relates the two sides")
    dec = _q_unit_quotient(a[0], b[0], q)
    if dec is None:
        return FEResult(False, None,
                        "leading constants have no monomial quotient "
                        "in Z[zeta, 1/q]")
    root, s = dec
    e = (len(d_d) - 1) - (len(n_d) - 1)
    eps = Epsilon(root, s - e, -e, q)
    return FEResult(True, eps)


def swap_product_is_one(e1: Epsilon, e2: Epsilon) -> bool:
    """Whether eps1(t) * eps2(1/(qt)) = 1, the double-swap consistency."""
    if e1.t_power != e2.t_power or e1.q != e2.q:
        return False
    prod = e1.root * e2.root
    p = e1.q_power + e2.q_power - e1.t_power
    if p >= 0:
        return prod * e1.q ** p == 1
    return prod == e1.q ** (-p)


# ---------------------------------------------------------------------------
# Iwasawa-algebra substitution t -> gamma^{-1}


class IwasawaElement:
    """num/den pair in (Z/l^N)[zeta_n][Gamma/Gamma^(l^M)].

    Vectors are indexed by the exponent of gamma.  Denominators are kept
    as-is; ``den_is_unit`` records invertibility (tested modulo l via the
    multiplication matrix).
    """

    def __init__(self, ell: int, N: int, M: int, order: int,
                 num: Sequence[CycMod], den: Sequence[CycMod],
                 den_is_unit: Optional[bool] = None):
        size = ell ** M
        if len(num) != size or len(den) != size:
            raise ValueError("group-ring vectors must have length l^M")
        self.ell = ell
        self.N = N
        self.M = M
        self.order = order
        self.num = tuple(num)
        self.den = tuple(den)
        if den_is_unit is None:
            den_is_unit = self._is_unit(self.den)
        self.den_is_unit = den_is_unit

    def _zero(self) -> CycMod:
        return CycMod(self.order, self.ell, self.N, [0])

    def _convolve(self, a, b):
        size = self.ell ** self.M
        out = [self._zero()] * size
        for i, x in enumerate(a):
            if x.is_zero():
                continue
            for j, y in enumerate(b):
                k = (i + j) % size
                out[k] = out[k] + x * y
        return tuple(out)

    def _is_unit(self, vec) -> bool:
        """Unit test modulo l: the multiplication matrix must be invertible."""
        from .cyclotomic import cyclotomic_polynomial, euler_phi
        ell = self.ell
        phi = euler_phi(self.order)
        size = ell ** self.M
        dim = phi * size
        # basis zeta^i gamma^j; columns are vec * basis element
        cols = []
        for j in range(size):
            for i in range(phi):
                basis_num = [self._zero()] * size
                basis_num[j] = CycMod(self.order, ell, self.N,
                                      [0] * i + [1])
                prod = self._convolve(vec, basis_num)
                col = []
                for g in range(size):
                    col.extend(c % ell for c in prod[g].coeffs)
                cols.append(col)
        # Gaussian elimination mod ell on the dim x dim matrix
        mat = [[cols[c][r] for c in range(dim)] for r in range(dim)]
        rank = 0
        for col in range(dim):
            pivot = next((r for r in range(rank, dim) if mat[r][col] % ell), None)
            if pivot is None:
                return False
            mat[rank], mat[pivot] = mat[pivot], mat[rank]
            inv = pow(mat[rank][col], -1, ell)
            mat[rank] = [x * inv % ell for x in mat[rank]]
            for r in range(dim):
                if r != rank and mat[r][col]:
                    f = mat[r][col]
                    mat[r] = [(x - f * y) % ell for x, y in zip(mat[r], mat[rank])]
            rank += 1
        return True

    def __mul__(self, other: "IwasawaElement") -> "IwasawaElement":
        if (self.ell, self.N, self.M, self.order) != (
                other.ell, other.N, other.M, other.order):
            raise ValueError("mixed Iwasawa parameters")
        return IwasawaElement(self.ell, self.N, self.M, self.order,
                              self._convolve(self.num, other.num),
                              self._convolve(self.den, other.den),
                              self.den_is_unit and other.den_is_unit)

    def __eq__(self, other):
        if not isinstance(other, IwasawaElement):
            return NotImplemented
        # compare as fractions: num1 * den2 == num2 * den1
        return self._convolve(self.num, other.den) == self._convolve(
            other.num, self.den)

    __hash__ = None

    def evaluate(self, zeta: CycMod) -> tuple[CycMod, CycMod]:
        """Substitute gamma -> zeta (a root of unity of order dividing l^M)."""
        n = math.lcm(self.order, zeta.order)
        z = zeta.lift(n)

        def ev(vec):
            acc = CycMod(n, self.ell, self.N, [0])
            power = CycMod(n, self.ell, self.N, [1])
            for c in vec:
                acc = acc + c.lift(n) * power
                power = power * z
            return acc
        return ev(self.num), ev(self.den)

    def __repr__(self):
        return (f"IwasawaElement(l={self.ell}^{self.N}, M={self.M}, "
                f"n={self.order}, unit_den={self.den_is_unit})")


def substitute_gamma(L: LPolynomial, ell: int, N: int, M: int,
                     order: Optional[int] = None) -> IwasawaElement:
    """Apply t^k -> gamma^(-k mod l^M) with coefficients reduced mod l^N."""
    coeff_order = order or math.lcm(*(c.order for c in
                                      list(L.num) + list(L.denominator())))
    size = ell ** M
    zero = CycMod(coeff_order, ell, N, [0])

    def to_vector(poly):
        vec = [zero] * size
        for k, c in enumerate(poly):
            idx = (-k) % size
            vec[idx] = vec[idx] + c.lift(coeff_order).reduce_mod(ell, N)
        return vec

    return IwasawaElement(ell, N, M, coeff_order,
                          to_vector(L.num), to_vector(L.denominator()))


# ---------------------------------------------------------------------------
# the abelian non-commutative L-function as a character tuple


class NcL:
    """Character tuple chi -> L(base tensor chi, spec): the abelian ncL."""

    def __init__(self, group: CharacterGroup, base: CharacterRep,
                 spec: TruncationSpec, entries: dict[int, LPolynomial]):
        self.group = group
        self.base = base
        self.spec = spec
        self._entries = entries

    def entry(self, index: int) -> LPolynomial:
        return self._entries[index]

    def character(self, index: int) -> CharacterRep:
        return self.group[index]

    def __len__(self):
        return len(self._entries)


def assemble_ncl(group: CharacterGroup, base: CharacterRep,
                 spec: Optional[TruncationSpec] = None, *,
                 workers: int = 1) -> NcL:
    """Materialize the tuple chi -> l_function(base ⊗ chi, spec)."""
    spec = spec or TruncationSpec.empty()
    entries = {}
    for i, chi in enumerate(group):
        full = tensor(chi, base) if not chi.is_constant_type else tensor(base, chi)
        entries[i] = l_function(full, spec, workers=workers)
    return NcL(group, base, spec, entries)


def interpolation_check(ncl: NcL, index: int, psi_value: Cyc,
                        ell: int, N: int, M: int) -> tuple[bool, dict]:
    """Compare the group-ring specialization against a fresh Euler product.

    Side A reduces the stored entry into (Z/l^N)[zeta][Gamma/Gamma^(l^M)]
    via t -> gamma^{-1} and then evaluates gamma -> psi(gamma).  Side B
    twists the character by the constant-field character with value
    psi(gamma)^{-1} and re-expands its Euler product from scratch,
    evaluating at t = 1.  Both sides equal L(chi, psi(gamma)^{-1}).
    """
    order_psi = psi_value.root_order()
    if order_psi is None or (ell ** M) % order_psi != 0:
        raise ValueError(f"psi must have order dividing {ell}^{M}")
    entry = ncl.entry(index)
    chi = ncl.character(index)
    full = tensor(chi, ncl.base) if not chi.is_constant_type else tensor(ncl.base, chi)

    coeff_order = math.lcm(*(c.order for c in
                             list(entry.num) + list(entry.denominator())))
    n_eval = math.lcm(coeff_order, psi_value.order, full.value_order)

    # side A: Iwasawa reduction, then gamma -> psi(gamma)
    iw = substitute_gamma(entry, ell, N, M, order=n_eval)
    psi_mod = psi_value.lift(n_eval).reduce_mod(ell, N)
    num_a, den_a = iw.evaluate(psi_mod)

    # side B: fresh Euler product of the twisted character at t = 1
    twisted = constant_field_twist(full, psi_value.root_inverse())
    l_twisted = l_function(twisted)
    num_c, den_c = l_twisted.evaluate(Cyc.from_int(1))
    num_b = num_c.lift(n_eval).reduce_mod(ell, N)
    den_b = den_c.lift(n_eval).reduce_mod(ell, N)

    ok = (num_a * den_b) == (num_b * den_a)
    detail = {
        "side_a": {"num": list(num_a.coeffs), "den": list(den_a.coeffs)},
        "side_b": {"num": list(num_b.coeffs), "den": list(den_b.coeffs)},
        "order": n_eval,
    }
    return ok, detail
