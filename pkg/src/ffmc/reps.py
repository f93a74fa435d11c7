"""Abelian finitely ramified characters of F_q(t).

Two constructions are provided: Kummer characters via power residue
symbols (m | q-1), and ray class characters for a squarefree modulus.
Characters carry their exact conductor, a Tate-twist weight, and a
place -> root-of-unity oracle; everywhere-unramified twists by constants
are tracked with a ``constant_value`` so downstream Euler products can
group places by degree.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Callable, Optional

from .base import (
    ExtField,
    FqPolynomial,
    Place,
    format_polynomial,
    multiplicative_order,
    primitive_root,
    residue_field,
    residue_value,
)
from .cyclotomic import Cyc
from .errors import ResourceLimitError


class _Ramified:
    """Sentinel for places dividing the conductor (T^{I_v} = 0)."""

    def __repr__(self):
        return "RAMIFIED"


RAMIFIED = _Ramified()

MAX_GROUP_ENUMERATION = 10 ** 6


@dataclass(frozen=True)
class Modulus:
    """A squarefree effective divisor on P^1: finite part times infinity."""

    finite_part: FqPolynomial
    infinity_mult: int = 0

    def __post_init__(self):
        if not self.finite_part.is_monic() and not self.finite_part.is_one():
            raise ValueError("finite part must be monic (or 1)")
        if not self.finite_part.is_one() and not self.finite_part.is_squarefree():
            raise ValueError("modulus must be squarefree")
        if self.infinity_mult not in (0, 1):
            raise ValueError("infinity multiplicity must be 0 or 1")

    @classmethod
    def one(cls, field) -> "Modulus":
        return cls(FqPolynomial.one(field))

    @property
    def field(self):
        return self.finite_part.field

    @property
    def degree(self) -> int:
        d = self.finite_part.degree if not self.finite_part.is_one() else 0
        return d + self.infinity_mult

    def is_trivial(self) -> bool:
        return self.finite_part.is_one() and self.infinity_mult == 0

    def finite_support(self) -> list[FqPolynomial]:
        if self.finite_part.is_one():
            return []
        return [p for p, _ in self.finite_part.factor()]

    def contains(self, v: Place) -> bool:
        if v.is_infinity:
            return self.infinity_mult == 1
        return (not self.finite_part.is_one()
                and (self.finite_part % v.poly).is_zero())

    def __repr__(self):
        inf = "*inf" if self.infinity_mult else ""
        return f"Modulus({format_polynomial(self.finite_part)}{inf})"


class CharacterRep:
    """A rank-1 finitely ramified representation chi * chi_cyc^w.

    ``oracle`` returns the bare root-of-unity value chi(Frob_v) (without
    the cyclotomic weight) or RAMIFIED.  Values are memoized behind a
    lock so oracles are safe for concurrent lookup.
    """

    def __init__(self, field, value_order: int, oracle: Callable,
                 conductor: Modulus, weight: int = 0,
                 constant_value: Optional[Cyc] = None, name: str = "chi"):
        self.field = field
        self.value_order = value_order
        self.conductor = conductor
        self.weight = weight
        self.constant_value = constant_value
        self.name = name
        self._oracle = oracle
        self._memo: dict[Place, object] = {}
        self._lock = threading.Lock()

    @property
    def is_constant_type(self) -> bool:
        """True when chi(v) depends only on deg(v) (so chi is unramified)."""
        return self.constant_value is not None

    def value(self, v: Place):
        """chi(Frob_v) as a root of unity in Z[zeta], or RAMIFIED."""
        with self._lock:
            if v in self._memo:
                return self._memo[v]
        if self.constant_value is not None:
            val = self.constant_value ** v.degree
        else:
            val = self._oracle(v)
        with self._lock:
            self._memo[v] = val
        return val

    def frobenius(self, v: Place):
        """Full Frobenius eigenvalue chi(v) * q^(w deg v), or RAMIFIED."""
        val = self.value(v)
        if val is RAMIFIED:
            return RAMIFIED
        return val * self.field.q ** (self.weight * v.degree)

    def is_ramified_at(self, v: Place) -> bool:
        return self.value(v) is RAMIFIED

    def is_trivial(self) -> bool:
        return self.is_constant_type and self.constant_value == 1 and self.weight == 0

    def inverse(self) -> "CharacterRep":
        """chi^{-1} at the same weight (values are roots of unity)."""
        const = (self.constant_value.root_inverse()
                 if self.constant_value is not None else None)

        def oracle(v):
            val = self.value(v)
            return val if val is RAMIFIED else val.root_inverse()

        return CharacterRep(self.field, self.value_order, oracle,
                            self.conductor, self.weight, const,
                            name=f"{self.name}^-1")

    def __repr__(self):
        w = f"*cyc^{self.weight}" if self.weight else ""
        return f"CharacterRep({self.name}{w}, order {self.value_order})"


def trivial_character(field, weight: int = 0) -> CharacterRep:
    return CharacterRep(field, 1, None, Modulus.one(field), weight,
                        constant_value=Cyc.from_int(1), name="1")


def constant_field_twist(chi: CharacterRep, zeta: Cyc) -> CharacterRep:
    """Twist by the unramified character Frob_v -> zeta^(deg v)."""
    order = zeta.root_order()
    if order is None:
        raise ValueError("twist value must be a root of unity")
    n = math.lcm(chi.value_order, order)
    const = (chi.constant_value * zeta
             if chi.constant_value is not None else None)

    def oracle(v):
        val = chi.value(v)
        return val if val is RAMIFIED else val * zeta ** v.degree

    return CharacterRep(chi.field, n, oracle, chi.conductor, chi.weight,
                        const, name=f"{chi.name}*tw{order}")


def dual_tate_twist(chi: CharacterRep) -> CharacterRep:
    """chi^{-1} with the cyclotomic weight incremented: T -> T^dual(1)."""
    dual = chi.inverse()
    return CharacterRep(dual.field, dual.value_order, dual.value,
                        dual.conductor, chi.weight + 1, dual.constant_value,
                        name=f"{chi.name}^d(1)")


def tensor(chi: CharacterRep, psi: CharacterRep) -> CharacterRep:
    """Product character; one factor must be everywhere unramified."""
    if not (chi.is_constant_type or psi.is_constant_type):
        raise ValueError("tensor requires one everywhere-unramified factor")
    if chi.is_constant_type and not psi.is_constant_type:
        chi, psi = psi, chi
    # now psi is constant-type
    n = math.lcm(chi.value_order, psi.value_order)
    c = psi.constant_value
    const = (chi.constant_value * c if chi.constant_value is not None else None)

    def oracle(v):
        val = chi.value(v)
        return val if val is RAMIFIED else val * c ** v.degree

    return CharacterRep(chi.field, n, oracle, chi.conductor,
                        chi.weight + psi.weight, const,
                        name=f"{chi.name}*{psi.name}")


def _symbol_exponent(field, c, m: int) -> int:
    """Discrete log of c in the fixed generator of mu_m inside F_q^x."""
    g = primitive_root(field)
    gen = field.pow(g, (field.q - 1) // m)
    cur = field.one()
    for j in range(m):
        if cur == c:
            return j
        cur = field.mul(cur, gen)
    raise ValueError("value is not an m-th root of unity")


def kummer_character(f: FqPolynomial, m: int, power: int = 1) -> CharacterRep:
    """The m-th power residue character chi_f^power.

    chi_f(v) is the index j with (f mod v)^((q^d-1)/m) = g_m^j for the
    fixed generator g_m of mu_m in F_q.  Requires squarefree f; a
    non-squarefree f would have a smaller conductor than radical(f) and
    is rejected rather than silently re-normalized.
    """
    field = f.field
    q = field.q
    if m < 1 or (q - 1) % m != 0:
        raise ValueError(f"m = {m} does not divide q - 1 = {q - 1}")
    if f.is_zero():
        raise ValueError("f must be nonzero")
    if not f.is_squarefree():
        raise ValueError("f must be squarefree")
    f = f.monic() if not f.is_monic() else f

    e = math.gcd(power % m, m) if power % m else m
    order = m // e
    if order == 1:
        return trivial_character(field)

    ram_at_infinity = f.degree % order != 0
    conductor = Modulus(f, 1 if ram_at_infinity else 0)
    zeta = Cyc.zeta(order)

    def oracle(v: Place):
        if v.is_infinity:
            if ram_at_infinity:
                return RAMIFIED
            j = _symbol_exponent(field, f.leading(), m)
            return zeta ** ((j * (power % m) // e) % order)
        a = residue_value(f, v)
        R = residue_field(v)
        if a == R.zero():
            return RAMIFIED
        s = R.pow(a, (R.q - 1) // m)
        # the symbol lies in mu_m inside the constants F_q
        assert all(c == field.zero() for c in s[1:]), "symbol not constant"
        j = _symbol_exponent(field, s[0], m)
        return zeta ** ((j * (power % m) // e) % order)

    name = f"kummer({format_polynomial(f)},{m})^{power}"
    return CharacterRep(field, order, oracle, conductor, 0, None, name)


class CharacterGroup:
    """A finite abelian character group with materialized CharacterReps."""

    def __init__(self, field, characters: list[CharacterRep],
                 description: str):
        self.field = field
        self.characters = characters
        self.description = description

    @property
    def order(self) -> int:
        return len(self.characters)

    def __iter__(self):
        return iter(self.characters)

    def __getitem__(self, i: int) -> CharacterRep:
        return self.characters[i]

    def nontrivial(self) -> list[CharacterRep]:
        return [chi for chi in self.characters if not chi.is_trivial()]

    def __repr__(self):
        return f"CharacterGroup({self.description}, order {self.order})"


def kummer_group(f: FqPolynomial, m: int) -> CharacterGroup:
    """The cyclic group {chi_f^j : 0 <= j < m} of a degree-m Kummer cover."""
    chars = [kummer_character(f, m, power=j) for j in range(m)]
    return CharacterGroup(f.field, chars,
                          f"kummer({format_polynomial(f)}, m={m})")


class _Component:
    """One cyclic factor of (F_q[t]/P)^x (or the constants at infinity)."""

    def __init__(self, field, poly: Optional[FqPolynomial]):
        self.poly = poly  # None marks the infinity component
        if poly is None:
            self.ring = field
        else:
            self.ring = residue_field(Place.finite(poly))
        self.order = self.ring.q - 1
        gen = primitive_root(self.ring)
        table = {}
        cur = self.ring.one()
        for k in range(self.order):
            table[cur] = k
            cur = self.ring.mul(cur, gen)
        self._dlog = table

    def dlog(self, x) -> int:
        return self._dlog[x]

    def dlog_constant(self, c) -> int:
        """Discrete log of a constant-field element inside this component."""
        if self.poly is None:
            return self._dlog[c]
        return self._dlog[self.ring.embed(c)]

    def reduce(self, f: FqPolynomial):
        r = f % self.poly
        coeffs = list(r.coeffs)
        coeffs += [f.field.zero()] * (self.ring.degree - len(coeffs))
        return tuple(coeffs[: self.ring.degree])


def character_group(modulus: Modulus) -> CharacterGroup:
    """All characters of the ray class group of a squarefree modulus.

    The group is [prod_i (F_q[t]/P_i)^x  x  (F_q^x at infinity)] modulo
    the diagonal constants; finite places map to their monic generator,
    and the place at infinity (the divisor base point) maps to 1.  Each
    character is materialized primitively: components on which it is
    trivial are dropped from its conductor and its oracle.
    """
    field = modulus.field
    q = field.q
    comps: list[_Component] = [
        _Component(field, p) for p in modulus.finite_support()
    ]
    if modulus.infinity_mult:
        comps.append(_Component(field, None))
    if not comps:
        return CharacterGroup(field, [trivial_character(field)], "trivial")

    total = 1
    for c in comps:
        total *= c.order
    if total > MAX_GROUP_ENUMERATION:
        raise ResourceLimitError(
            f"ray class group of size {total} exceeds the enumeration cap "
            f"{MAX_GROUP_ENUMERATION}")

    g0 = primitive_root(field)
    diag = [c.dlog_constant(g0) for c in comps]
    big = math.lcm(*(c.order for c in comps))

    def exponent_tuples():
        idx = [0] * len(comps)
        while True:
            yield tuple(idx)
            for i in range(len(comps) - 1, -1, -1):
                idx[i] += 1
                if idx[i] < comps[i].order:
                    break
                idx[i] = 0
            else:
                return

    chars = []
    for e in exponent_tuples():
        if sum((big // c.order) * ei * ki
               for c, ei, ki in zip(comps, e, diag)) % big != 0:
            continue
        chars.append(_ray_class_character(field, modulus, comps, e, big))
    return CharacterGroup(field, chars, f"rayclass({modulus!r})")


def _ray_class_character(field, modulus: Modulus, comps: list[_Component],
                         exponents: tuple[int, ...], big: int) -> CharacterRep:
    active = [(c, e) for c, e in zip(comps, exponents) if e % c.order != 0]
    if not active:
        return trivial_character(field)

    order = math.lcm(*(c.order // math.gcd(c.order, e) for c, e in active))
    fin = [(c, e) for c, e in active if c.poly is not None]
    ram_inf = any(c.poly is None for c, _ in active)
    cond_poly = FqPolynomial.one(field)
    for c, _ in fin:
        cond_poly = cond_poly * c.poly
    conductor = Modulus(cond_poly, 1 if ram_inf else 0)
    sub_lcm = math.lcm(*(c.order for c, _ in fin)) if fin else 1
    zeta = Cyc.zeta(order)

    def oracle(v: Place):
        if v.is_infinity:
            return RAMIFIED if ram_inf else Cyc.from_int(1)
        total = 0
        for c, e in fin:
            if (v.poly % c.poly).is_zero():
                return RAMIFIED
            total += (sub_lcm // c.order) * e * c.dlog(c.reduce(v.poly))
        total %= sub_lcm
        assert total % (sub_lcm // order) == 0, "character value outside mu_n"
        return zeta ** (total // (sub_lcm // order))

    name = f"ray{exponents}"
    return CharacterRep(field, order, oracle, conductor, 0, None, name)


def inertia_invariants(chi: CharacterRep, v: Place):
    """Rank of T^{I_v} (0 or 1) and the Frobenius eigenvalue on it."""
    val = chi.frobenius(v)
    if val is RAMIFIED:
        return 0, None
    return 1, val


def is_tame_everywhere(chi: CharacterRep) -> bool:
    """All ramification is tame: the character order is prime to p."""
    return chi.value_order % chi.field.p != 0
