"""Picard 1-motives on P^1: relative Picard groups and motive torsion.

The motive M = [Div^0_{Z1} -> Pic^0(P^1, Z2)] is truncated to a finite
field F_{q^j} large enough to contain mu_n and all points of Z1, Z2.
The multiplicative group of the algebraic closure is modelled by the
ambient cyclic group Z/L with L = (q^j - 1) * n, into which F_{q^j}^x
embeds with index n; this restores the divisibility of the geometric
torus that a bare F_{q^j}^x would lack, so the n-torsion comes out with
its geometric order n^((r-1)+(s-1)).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .base import ExtField, FqPolynomial, Place, primitive_root
from .errors import InternalCountError
from .geom import extension_field
from .reps import Modulus


# ---------------------------------------------------------------------------
# integer linear algebra helpers


def smith_invariants(rows: Sequence[Sequence[int]], cols: int) -> list[int]:
    """Invariant factors of Z^cols modulo the row span (0 = free factor)."""
    a = [list(r) for r in rows]
    m = len(a)
    invs = []
    top = 0
    left = 0
    while top < m and left < cols:
        # find pivot of least nonzero absolute value
        pivot = None
        for i in range(top, m):
            for j in range(left, cols):
                if a[i][j] and (pivot is None
                                or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        i0, j0 = pivot
        a[top], a[i0] = a[i0], a[top]
        for row in a:
            row[left], row[j0] = row[j0], row[left]
        # reduce column and row until clean
        dirty = True
        while dirty:
            dirty = False
            for i in range(top + 1, m):
                if a[i][left]:
                    f = a[i][left] // a[top][left]
                    a[i] = [x - f * y for x, y in zip(a[i], a[top])]
                    if a[i][left]:
                        a[top], a[i] = a[i], a[top]
                        dirty = True
            for j in range(left + 1, cols):
                if a[top][j]:
                    f = a[top][j] // a[top][left]
                    for row in a:
                        row[j] -= f * row[left]
                    if a[top][j]:
                        for row in a:
                            row[left], row[j] = row[j], row[left]
                        dirty = True
        d = abs(a[top][left])
        # ensure divisibility of the remaining block
        offending = None
        for i in range(top + 1, m):
            for j in range(left + 1, cols):
                if a[i][j] % d:
                    offending = i
                    break
            if offending is not None:
                break
        if offending is not None:
            a[top] = [x + y for x, y in zip(a[top], a[offending])]
            continue
        invs.append(d)
        top += 1
        left += 1
    invs += [0] * (cols - len(invs))
    return invs


def kernel_order_mod_n(matrix: Sequence[Sequence[int]], n: int) -> int:
    """#{x in (Z/n)^k : M x = 0}, via the Smith form of M."""
    k = len(matrix)
    if k == 0:
        return 1
    cols = len(matrix[0])
    invs = smith_invariants(matrix, cols)
    out = 1
    for d in invs:
        out *= math.gcd(n, d) if d else n
    return out


def charpoly_int(matrix: Sequence[Sequence[int]]) -> list[int]:
    """det(x I - M) over Z, little-endian, by cofactor expansion."""
    k = len(matrix)

    def poly_mul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] += x * y
        return out

    def det(entries):
        # entries[i][j] is a polynomial in x
        size = len(entries)
        if size == 0:
            return [1]
        if size == 1:
            return entries[0][0]
        acc = [0]
        for i in range(size):
            minor = [row[1:] for r, row in enumerate(entries) if r != i]
            term = poly_mul(entries[i][0], det(minor))
            sign = 1 if i % 2 == 0 else -1
            length = max(len(acc), len(term))
            acc = [(acc[t] if t < len(acc) else 0)
                   + sign * (term[t] if t < len(term) else 0)
                   for t in range(length)]
        return acc

    entries = [[([-matrix[i][j], 1] if i == j else [-matrix[i][j]])
                for j in range(k)] for i in range(k)]
    return det(entries)


# ---------------------------------------------------------------------------
# relative Picard groups


@dataclass(frozen=True)
class RelativePicard:
    """Degree-0 relative Picard group of P^1 with the given modulus."""

    modulus: Modulus
    j: int
    field_size: int
    invariants: tuple[int, ...]  # nontrivial invariant factors

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariants:
            out *= d
        return out

    def n_torsion_order(self, n: int) -> int:
        out = 1
        for d in self.invariants:
            out *= math.gcd(n, d)
        return out

    def __repr__(self):
        return f"RelativePicard({self.modulus!r}, F_{self.field_size}, {self.invariants})"


@functools.cache
def _dlog_table(field):
    gen = primitive_root(field)
    table = {}
    cur = field.one()
    for k in range(field.q - 1):
        table[cur] = k
        cur = field.mul(cur, gen)
    return table


def relative_picard(modulus: Modulus, j: int) -> RelativePicard:
    """Pic^0(P^1, modulus) over F_{q^j}: unit groups modulo the constants."""
    base = modulus.field
    F, embed = extension_field(base, j)
    # refactor the (reduced) finite part over the larger field
    comps: list[tuple[int, int]] = []  # (cyclic order, dlog of g0)
    g0 = primitive_root(F)
    if not modulus.finite_part.is_one():
        lifted = FqPolynomial(F, [embed(c) for c in modulus.finite_part.coeffs])
        for p_i, mult in lifted.factor():
            if mult != 1:
                raise ValueError("modulus must be reduced")
            R = F if p_i.degree == 1 else ExtField(F, p_i.coeffs)
            order = R.q - 1
            image = g0 if R is F else R.embed(g0)
            dlog = _dlog_table(R)[image]
            comps.append((order, dlog))
    if modulus.infinity_mult:
        comps.append((F.q - 1, 1))
    if not comps:
        return RelativePicard(modulus, j, F.q, ())
    k = len(comps)
    rows = [[comps[i][0] if c == i else 0 for c in range(k)] for i in range(k)]
    rows.append([d for _, d in comps])
    invs = [d for d in smith_invariants(rows, k) if d not in (0, 1)]
    return RelativePicard(modulus, j, F.q, tuple(invs))


# ---------------------------------------------------------------------------
# motive torsion


_INF = object()  # geometric point at infinity


def _geometric_points(places: Sequence[Place], F, embed) -> list:
    pts = []
    for v in places:
        if v.is_infinity:
            pts.append(_INF)
            continue
        coeffs = [embed(c) for c in v.poly.coeffs]
        found = []
        for k in range(F.q):
            x = F.element_from_int(k)
            acc = F.zero()
            for c in reversed(coeffs):
                acc = F.add(F.mul(acc, x), c)
            if acc == F.zero():
                found.append(x)
        if len(found) != v.degree:
            raise InternalCountError(
                f"place of degree {v.degree} has {len(found)} points over "
                f"F_{F.q}; the working field is too small")
        pts.extend(found)
    return pts


@dataclass(frozen=True)
class MotiveTorsion:
    """n-torsion of the Picard 1-motive for (Z1, Z2), with Frobenius."""

    z1: tuple[Place, ...]
    z2: tuple[Place, ...]
    n: int
    j: int
    field_size: int
    r: int  # geometric points of Z1
    s: int  # geometric points of Z2
    frobenius: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return (self.r - 1) + (self.s - 1)

    @property
    def order(self) -> int:
        return self.n ** self.rank

    def fixed_point_order(self) -> int:
        """Order of the Frobenius-fixed subgroup, ker(Frob - 1)."""
        k = self.rank
        m = [[(self.frobenius[i][j] - (1 if i == j else 0))
              for j in range(k)] for i in range(k)]
        return kernel_order_mod_n(m, self.n)


def minimal_field_exponent(places: Sequence[Place], n: int, q: int) -> int:
    """Least j with mu_n in F_{q^j} and all given places split rationally."""
    j = 1
    for v in places:
        j = math.lcm(j, v.degree)
    if n > 1:
        ordn = 1
        power = q % n
        while power != 1:
            power = power * q % n
            ordn += 1
            if ordn > n:
                raise ValueError(f"q = {q} is not invertible mod {n}")
        j = math.lcm(j, ordn)
    return j


def motive_torsion(z1: Sequence[Place], z2: Sequence[Place], n: int,
                   j: Optional[int] = None) -> MotiveTorsion:
    """The group M_{Z1,Z2,n} with its Frobenius matrix.

    Basis: e_i = (P_i - P_0, dlog lift of (t-x_i)/(t-x_0) at Z2) for the
    lattice part and f_k = (L/n) * (unit coordinate k) for the torus
    n-torsion, in coordinates relative to the first Z2 point.  The group
    is free of rank (r-1)+(s-1) over Z/n in this presentation.
    """
    z1, z2 = tuple(z1), tuple(z2)
    if not z1 or not z2:
        raise ValueError("Z1 and Z2 must both be nonempty")
    if set(z1) & set(z2):
        raise ValueError("Z1 and Z2 must be disjoint")
    base = z1[0].field
    q = base.q
    if n < 1 or n % base.p == 0:
        raise ValueError(f"torsion level n = {n} must be positive and prime to p")
    j_min = minimal_field_exponent(list(z1) + list(z2), n, q)
    if j is None:
        j = j_min
    elif j % j_min:
        raise ValueError(f"working field exponent must be a multiple of {j_min}")

    F, embed = extension_field(base, j)
    Q = F.q
    big = (Q - 1) * n  # ambient truncation of the geometric torus
    unit = Q - 1       # f-generators live at index L/n = Q-1
    dlog = _dlog_table(F)

    pts1 = _geometric_points(z1, F, embed)
    pts2 = _geometric_points(z2, F, embed)
    r, s = len(pts1), len(pts2)
    if _INF in pts1:
        pts1.remove(_INF)
        pts1.insert(0, _INF)
    p0 = pts1[0]

    def pair_value(xi, z):
        """Value of the degree-0 function with divisor P_i - P_0 at z."""
        if z is _INF:
            return F.one()  # ratio of leading coefficients
        if p0 is _INF:
            return F.sub(z, xi)
        if xi is _INF:
            return F.inv(F.sub(z, p0))
        return F.mul(F.sub(z, xi), F.inv(F.sub(z, p0)))

    # dlog lifts of u(a_i) in full Z2 coordinates (values in Z/big / n = Z/(Q-1)
    # lifted as plain dlogs; u(a_i) itself is n * these coordinates)
    lifts = []
    for i in range(1, r):
        lifts.append([dlog[pair_value(pts1[i], z)] for z in pts2])

    def frob_perm(pts):
        perm = []
        for x in pts:
            fx = _INF if x is _INF else F.pow(x, q)
            perm.append(pts.index(fx))
        return perm

    perm1 = frob_perm(pts1)
    perm2 = frob_perm(pts2)

    rank = (r - 1) + (s - 1)
    matrix = [[0] * rank for _ in range(rank)]

    def add_f_column(col: int, target_index: int, coeff: int):
        """Add coeff * f_{target} to a column, in reduced coordinates."""
        if target_index == 0:  # epsilon_1 reduces to (-1, ..., -1)
            for k in range(s - 1):
                matrix[(r - 1) + k][col] = (matrix[(r - 1) + k][col] - coeff) % n
        else:
            matrix[(r - 1) + (target_index - 1)][col] = (
                matrix[(r - 1) + (target_index - 1)][col] + coeff) % n

    # columns for the lattice generators e_i
    for i in range(1, r):
        col = i - 1
        ti, t0 = perm1[i], perm1[0]
        if ti != 0:
            matrix[ti - 1][col] = (matrix[ti - 1][col] + 1) % n
        if t0 != 0:
            matrix[t0 - 1][col] = (matrix[t0 - 1][col] - 1) % n
        # discrepancy between phi(c_i) and c_{perm(i)} - c_{perm(0)},
        # an n-torsion element of the torus
        phi_c = [0] * s
        for k in range(s):
            phi_c[perm2[k]] = q * lifts[i - 1][k]
        ref = [0] * s
        if ti != 0:
            ref = [x + y for x, y in zip(ref, lifts[ti - 1])]
        if t0 != 0:
            ref = [x - y for x, y in zip(ref, lifts[t0 - 1])]
        delta_full = [(a - b) % big for a, b in zip(phi_c, ref)]
        for k in range(1, s):
            delta = (delta_full[k] - delta_full[0]) % big
            if delta % unit:
                raise InternalCountError(
                    "Frobenius discrepancy is not n-torsion; the ambient "
                    "model is inconsistent")
            matrix[(r - 1) + (k - 1)][col] = (
                matrix[(r - 1) + (k - 1)][col] + delta // unit) % n

    # columns for the torus generators f_k
    for k in range(1, s):
        col = (r - 1) + (k - 1)
        add_f_column(col, perm2[k], q % n if n > 1 else 0)

    return MotiveTorsion(z1, z2, n, j, Q, r, s,
                         tuple(tuple(row) for row in matrix))


# ---------------------------------------------------------------------------
# the order-level duality and fixed-point checks


def tower_compatibility_check(z1: Sequence[Place], z2: Sequence[Place],
                              ell: int, N: int) -> bool:
    """Level l^(N+1) must reduce to level l^N over a common working field.

    Both levels are computed over F_{q^j} with j chosen for the larger
    level, so the Frobenius matrices are literally congruent mod l^N and
    the transition kernel has order l^rank.
    """
    q = z1[0].field.q if z1 else z2[0].field.q
    j = minimal_field_exponent(list(z1) + list(z2), ell ** (N + 1), q)
    big = motive_torsion(z1, z2, ell ** (N + 1), j=j)
    small = motive_torsion(z1, z2, ell ** N, j=j)
    mod = ell ** N
    if big.order != small.order * ell ** big.rank:
        return False
    return all((big.frobenius[i][k] - small.frobenius[i][k]) % mod == 0
               for i in range(big.rank) for k in range(big.rank))


@dataclass(frozen=True)
class DualityResult:
    ok: bool
    order_forward: int
    order_backward: int
    detail: str = ""


def duality_order_check(z1: Sequence[Place], z2: Sequence[Place],
                        n: int) -> DualityResult:
    """Order symmetry plus the q-reversal relation of Frobenius charpolys."""
    fwd = motive_torsion(z1, z2, n)
    bwd = motive_torsion(z2, z1, n)
    if fwd.order != bwd.order:
        return DualityResult(False, fwd.order, bwd.order, "orders differ")
    if n == 1:
        return DualityResult(True, 1, 1)
    g = fwd.rank
    p1 = [c % n for c in charpoly_int(fwd.frobenius)]
    p2 = [c % n for c in charpoly_int(bwd.frobenius)]
    q = fwd.z1[0].field.q
    # x^g * p2(q/x) compared against u * p1 for some unit u mod n
    twisted = [(p2[g - k] * pow(q, g - k, n)) % n for k in range(g + 1)]
    for u in range(1, n):
        if math.gcd(u, n) != 1:
            continue
        if all((u * a - b) % n == 0 for a, b in zip(p1, twisted)):
            return DualityResult(True, fwd.order, bwd.order)
    return DualityResult(False, fwd.order, bwd.order,
                         f"no unit relates charpolys {p1} and {p2}")


@dataclass(frozen=True)
class FixedPointResult:
    ok: bool
    motive_side: int
    picard_side: int


def fixed_points_check(z2: Sequence[Place], n: int) -> FixedPointResult:
    """Frobenius-fixed motive torsion against rational relative Picard torsion.

    Z1 = {infinity}; Z2 must consist of finite rational places.  The two
    sides are computed by unrelated code paths: a Frobenius kernel over
    the geometric model versus unit groups over F_q.
    """
    z2 = tuple(z2)
    if not z2 or any(v.is_infinity or v.degree != 1 for v in z2):
        raise ValueError("Z2 must be a nonempty set of finite rational places")
    field = z2[0].field
    inf = Place.infinity(field)
    mt = motive_torsion((inf,), z2, n)
    motive_side = mt.fixed_point_order()

    poly = FqPolynomial.one(field)
    for v in z2:
        poly = poly * v.poly
    pic = relative_picard(Modulus(poly), 1)
    picard_side = pic.n_torsion_order(n)
    return FixedPointResult(motive_side == picard_side, motive_side, picard_side)
