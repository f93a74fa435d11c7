"""Exact arithmetic substrate: finite fields, polynomials over F_q, places of F_q(t).

Fields are immutable objects; elements are plain ints (prime fields) or
tuples of base-field elements (extensions), so every value is hashable
and safe to share across threads.  Polynomials are little-endian
coefficient tuples wrapped in :class:`FqPolynomial`.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field as dc_field
from typing import Iterator, Optional, Sequence

from .errors import ConfigError, ResourceLimitError

MAX_PLACE_DEGREE = 16


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization, adequate for desk-scale group orders."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def moebius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


class PrimeField:
    """The field Z/p.  Elements are ints in range(p)."""

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.e = 1
        self.q = p

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero in prime field")
        return pow(a, self.p - 2, self.p)

    def pow(self, a, n: int):
        if n < 0:
            return pow(self.inv(a), -n, self.p)
        return pow(a, n, self.p)

    def from_int(self, k: int):
        return k % self.p

    def element_to_int(self, a) -> int:
        return a % self.p

    def element_from_int(self, k: int):
        if not 0 <= k < self.p:
            raise ValueError("element index out of range")
        return k

    def elements(self) -> Iterator:
        return iter(range(self.p))

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"F_{self.p}"


class ExtField:
    """Extension field base[x]/(modulus); elements are tuples over the base.

    ``modulus`` is a monic little-endian coefficient tuple of base-field
    elements of length degree+1.  Used both for F_{p^e} over Z/p and for
    residue fields F_q[t]/(v).
    """

    def __init__(self, base, modulus: tuple):
        n = len(modulus) - 1
        if n < 1:
            raise ValueError("modulus must have degree >= 1")
        if modulus[-1] != base.one():
            raise ValueError("modulus must be monic")
        self.base = base
        self.modulus = tuple(modulus)
        self.degree = n
        self.p = base.p
        self.e = base.e * n
        self.q = base.q ** n
        # rows of x^(n+k) reduced mod modulus, for schoolbook reduction
        self._red = self._reduction_rows()

    def _reduction_rows(self):
        n = self.degree
        rows = []
        # x^n = -(m_0 + ... + m_{n-1} x^{n-1})
        cur = tuple(self.base.neg(c) for c in self.modulus[:n])
        rows.append(cur)
        for _ in range(n - 2):
            # multiply by x and reduce using rows[0]
            shifted = (self.base.zero(),) + cur[: n - 1]
            top = cur[n - 1]
            cur = tuple(
                self.base.add(shifted[i], self.base.mul(top, rows[0][i]))
                for i in range(n)
            )
            rows.append(cur)
        return rows

    def zero(self):
        return (self.base.zero(),) * self.degree

    def one(self):
        return (self.base.one(),) + (self.base.zero(),) * (self.degree - 1)

    def gen(self):
        """The class of x, a root of the modulus."""
        n = self.degree
        if n == 1:
            return (self.base.neg(self.modulus[0]),)
        return tuple(
            self.base.one() if i == 1 else self.base.zero() for i in range(n)
        )

    def add(self, a, b):
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(self.base.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        n = self.degree
        base = self.base
        prod = [base.zero()] * (2 * n - 1)
        for i, ai in enumerate(a):
            if ai == base.zero():
                continue
            for j, bj in enumerate(b):
                prod[i + j] = base.add(prod[i + j], base.mul(ai, bj))
        res = list(prod[:n])
        for k in range(n - 1):
            c = prod[n + k]
            if c == base.zero():
                continue
            row = self._red[k]
            for i in range(n):
                res[i] = base.add(res[i], base.mul(c, row[i]))
        return tuple(res)

    def inv(self, a):
        if a == self.zero():
            raise ZeroDivisionError("inverse of zero in extension field")
        # extended Euclid on coefficient lists over the base field
        base = self.base
        r0, r1 = list(self.modulus), _trim(list(a), base)
        s0, s1 = [base.zero()], [base.one()]
        while len(r1) > 1 or (r1 and r1[0] != base.zero()):
            if len(r1) == 1:
                break
            q, r = _poly_divmod_lists(r0, r1, base)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub_lists(s0, _poly_mul_lists(q, s1, base), base)
        if not r1:
            raise ZeroDivisionError("element not invertible")
        c_inv = base.inv(r1[0])
        s1 = [base.mul(c_inv, c) for c in s1]
        s1 += [base.zero()] * (self.degree - len(s1))
        return tuple(s1[: self.degree])

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        result = self.one()
        b = a
        while n:
            if n & 1:
                result = self.mul(result, b)
            b = self.mul(b, b)
            n >>= 1
        return result

    def from_int(self, k: int):
        return (self.base.from_int(k),) + (self.base.zero(),) * (self.degree - 1)

    def embed(self, a):
        """Embed a base-field element as a constant."""
        return (a,) + (self.base.zero(),) * (self.degree - 1)

    def element_to_int(self, a) -> int:
        radix = self.base.q
        out = 0
        for c in reversed(a):
            out = out * radix + self.base.element_to_int(c)
        return out

    def element_from_int(self, k: int):
        radix = self.base.q
        if not 0 <= k < self.q:
            raise ValueError("element index out of range")
        coeffs = []
        for _ in range(self.degree):
            coeffs.append(self.base.element_from_int(k % radix))
            k //= radix
        return tuple(coeffs)

    def elements(self) -> Iterator:
        for k in range(self.q):
            yield self.element_from_int(k)

    def __eq__(self, other):
        return (
            isinstance(other, ExtField)
            and other.base == self.base
            and other.modulus == self.modulus
        )

    def __hash__(self):
        return hash(("ExtField", self.base, self.modulus))

    def __repr__(self):
        return f"F_{self.q}"


def _trim(coeffs: list, base) -> list:
    while coeffs and coeffs[-1] == base.zero():
        coeffs.pop()
    return coeffs


def _poly_sub_lists(a: list, b: list, base) -> list:
    n = max(len(a), len(b))
    out = []
    z = base.zero()
    for i in range(n):
        x = a[i] if i < len(a) else z
        y = b[i] if i < len(b) else z
        out.append(base.sub(x, y))
    return _trim(out, base)


def _poly_mul_lists(a: list, b: list, base) -> list:
    if not a or not b:
        return []
    z = base.zero()
    out = [z] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == z:
            continue
        for j, y in enumerate(b):
            out[i + j] = base.add(out[i + j], base.mul(x, y))
    return _trim(out, base)


def _poly_divmod_lists(a: list, b: list, base) -> tuple[list, list]:
    b = _trim(list(b), base)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = _trim(list(a), base)
    inv_lead = base.inv(b[-1])
    q = [base.zero()] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b):
        c = base.mul(a[-1], inv_lead)
        d = len(a) - len(b)
        q[d] = c
        for i in range(len(b)):
            a[d + i] = base.sub(a[d + i], base.mul(c, b[i]))
        a = _trim(a, base)
    return _trim(q, base), a


@functools.cache
def finite_field(p: int, e: int = 1):
    """F_{p^e} with the lexicographically least monic irreducible modulus."""
    if e == 1:
        return PrimeField(p)
    base = PrimeField(p)
    for k in range(p ** e):
        coeffs = []
        kk = k
        for _ in range(e):
            coeffs.append(kk % p)
            kk //= p
        modulus = tuple(coeffs) + (1,)
        if _irreducible_over(base, modulus):
            return ExtField(base, modulus)
    raise RuntimeError("no irreducible modulus found")  # unreachable


def field_of_order(q: int):
    fac = factorize(q)
    if len(fac) != 1:
        raise ValueError(f"{q} is not a prime power")
    (p, e), = fac.items()
    return finite_field(p, e)


def _irreducible_over(base, coeffs: tuple) -> bool:
    """Rabin irreducibility test for a monic polynomial over any field here."""
    d = len(coeffs) - 1
    if d == 0:
        return False
    if d == 1:
        return True
    q = base.q
    f = list(coeffs)
    # quick linear-root rejection
    if q <= 256:
        for a in base.elements():
            acc = base.zero()
            for c in reversed(f):
                acc = base.add(base.mul(acc, a), c)
            if acc == base.zero():
                return False
        if d <= 3:
            return True
    x = [base.zero(), base.one()]

    def frob_power(k: int) -> list:
        h = list(x)
        for _ in range(k):
            h = _poly_powmod(h, q, f, base)
        return h

    for r in sorted(factorize(d)):
        h = frob_power(d // r)
        g = _poly_gcd_lists(_poly_sub_lists(h, x, base), f, base)
        if len(g) - 1 > 0:
            return False
    h = frob_power(d)
    return _poly_sub_lists(h, x, base) == []


def _poly_powmod(a: list, n: int, mod: list, base) -> list:
    result = [base.one()]
    b = _poly_divmod_lists(list(a), mod, base)[1]
    while n:
        if n & 1:
            result = _poly_divmod_lists(_poly_mul_lists(result, b, base), mod, base)[1]
        b = _poly_divmod_lists(_poly_mul_lists(b, b, base), mod, base)[1]
        n >>= 1
    return result


def _poly_gcd_lists(a: list, b: list, base) -> list:
    a, b = _trim(list(a), base), _trim(list(b), base)
    while b:
        a, b = b, _poly_divmod_lists(a, b, base)[1]
    if a:
        inv = base.inv(a[-1])
        a = [base.mul(inv, c) for c in a]
    return a


class FqPolynomial:
    """Polynomial over a finite field, little-endian coefficient tuple.

    The zero polynomial has an empty coefficient tuple; otherwise the
    leading coefficient is nonzero.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs: Sequence):
        lst = list(coeffs)
        while lst and lst[-1] == field.zero():
            lst.pop()
        self.field = field
        self.coeffs = tuple(lst)

    @classmethod
    def from_ints(cls, field, ints: Sequence[int]) -> "FqPolynomial":
        return cls(field, [field.from_int(k) for k in ints])

    @classmethod
    def zero(cls, field) -> "FqPolynomial":
        return cls(field, [])

    @classmethod
    def one(cls, field) -> "FqPolynomial":
        return cls(field, [field.one()])

    @classmethod
    def x(cls, field) -> "FqPolynomial":
        return cls(field, [field.zero(), field.one()])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (self.field.one(),)

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one()

    def leading(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def monic(self) -> "FqPolynomial":
        if self.is_zero():
            return self
        inv = self.field.inv(self.coeffs[-1])
        return FqPolynomial(self.field, [self.field.mul(inv, c) for c in self.coeffs])

    def __add__(self, other):
        return FqPolynomial(
            self.field, _poly_sub_lists(list(self.coeffs),
                                        [self.field.neg(c) for c in other.coeffs],
                                        self.field))

    def __sub__(self, other):
        return FqPolynomial(
            self.field,
            _poly_sub_lists(list(self.coeffs), list(other.coeffs), self.field))

    def __mul__(self, other):
        return FqPolynomial(
            self.field,
            _poly_mul_lists(list(self.coeffs), list(other.coeffs), self.field))

    def __divmod__(self, other):
        q, r = _poly_divmod_lists(list(self.coeffs), list(other.coeffs), self.field)
        return FqPolynomial(self.field, q), FqPolynomial(self.field, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        return (
            isinstance(other, FqPolynomial)
            and other.field == self.field
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def gcd(self, other) -> "FqPolynomial":
        return FqPolynomial(
            self.field,
            _poly_gcd_lists(list(self.coeffs), list(other.coeffs), self.field))

    def derivative(self) -> "FqPolynomial":
        F = self.field
        out = []
        for i, c in enumerate(self.coeffs[1:], start=1):
            out.append(F.mul(F.from_int(i), c))
        return FqPolynomial(F, out)

    def is_squarefree(self) -> bool:
        if self.is_zero():
            return False
        g = self.gcd(self.derivative())
        return g.degree == 0

    def radical(self) -> "FqPolynomial":
        """Product of distinct monic irreducible factors."""
        out = FqPolynomial.one(self.field)
        for p, _ in self.factor():
            out = out * p
        return out

    def factor(self) -> list[tuple["FqPolynomial", int]]:
        """Full factorization by trial division over enumerated irreducibles.

        Adequate for the small degrees used here.
        """
        if self.is_zero():
            raise ValueError("cannot factor the zero polynomial")
        rem = self.monic()
        out: list[tuple[FqPolynomial, int]] = []
        d = 1
        while rem.degree > 0:
            if 2 * d > rem.degree:
                out.append((rem, 1))
                break
            for irr in monic_irreducibles(self.field, d):
                mult = 0
                while True:
                    q, r = divmod(rem, irr)
                    if not r.is_zero():
                        break
                    rem = q
                    mult += 1
                if mult:
                    out.append((irr, mult))
                if rem.degree == 0:
                    break
            d += 1
        return out

    def evaluate(self, a):
        F = self.field
        acc = F.zero()
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, a), c)
        return acc

    def is_irreducible(self) -> bool:
        if not self.is_monic():
            raise ValueError("irreducibility test expects a monic polynomial")
        return _irreducible_over(self.field, self.coeffs)

    def to_ints(self) -> tuple[int, ...]:
        return tuple(self.field.element_to_int(c) for c in self.coeffs)

    def __repr__(self):
        return f"FqPolynomial({self.field!r}, {format_polynomial(self)!r})"


def parse_polynomial(s: str, field) -> FqPolynomial:
    """Parse sums of integer-coefficient monomials in t, e.g. ``t^3-2*t+1``."""
    s = s.replace(" ", "").replace("**", "^")
    if not s:
        raise ValueError("empty polynomial string")
    # split into signed terms
    terms = []
    cur = ""
    for i, ch in enumerate(s):
        if ch in "+-" and i > 0 and s[i - 1] not in "+-^*":
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    terms.append(cur)
    coeffs: dict[int, int] = {}
    for term in terms:
        if not term or term in "+-":
            raise ValueError(f"malformed term in {s!r}")
        sign = 1
        while term and term[0] in "+-":
            if term[0] == "-":
                sign = -sign
            term = term[1:]
        if "t" in term:
            head, _, tail = term.partition("t")
            coef = int(head.rstrip("*")) if head.rstrip("*") else 1
            if tail.startswith("^"):
                exp = int(tail[1:])
            elif tail == "":
                exp = 1
            else:
                raise ValueError(f"malformed term in {s!r}")
        else:
            coef = int(term)
            exp = 0
        coeffs[exp] = coeffs.get(exp, 0) + sign * coef
    n = max(coeffs) + 1
    return FqPolynomial.from_ints(field, [coeffs.get(i, 0) for i in range(n)])


def format_polynomial(f: FqPolynomial) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for i in range(f.degree, -1, -1):
        c = f.field.element_to_int(f.coeffs[i])
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            var = "t" if i == 1 else f"t^{i}"
            parts.append(var if c == 1 else f"{c}*{var}")
    return "+".join(parts).replace("+-", "-")


@dataclass(frozen=True)
class Place:
    """A closed point of P^1 over F_q: a monic irreducible polynomial or infinity."""

    field: object
    poly: Optional[FqPolynomial]  # None for the place at infinity
    degree: int = dc_field(default=0)

    def __post_init__(self):
        if self.poly is None:
            object.__setattr__(self, "degree", 1)
        else:
            if not self.poly.is_monic():
                raise ValueError("finite place polynomial must be monic")
            object.__setattr__(self, "degree", self.poly.degree)

    @classmethod
    def infinity(cls, field) -> "Place":
        return cls(field, None)

    @classmethod
    def finite(cls, poly: FqPolynomial) -> "Place":
        if not poly.is_irreducible():
            raise ValueError("finite place polynomial must be irreducible")
        return cls(poly.field, poly)

    @property
    def is_infinity(self) -> bool:
        return self.poly is None

    def sort_key(self):
        if self.poly is None:
            return (self.degree, (-1,))
        return (self.degree, tuple(reversed(self.poly.to_ints())))

    def __repr__(self):
        return "Place(inf)" if self.poly is None else f"Place({format_polynomial(self.poly)})"


def monic_irreducibles(field, degree: int) -> Iterator[FqPolynomial]:
    """Monic irreducibles of exactly this degree, in lexicographic order."""
    q = field.q
    for k in range(q ** degree):
        coeffs = []
        kk = k
        for _ in range(degree):
            coeffs.append(field.element_from_int(kk % q))
            kk //= q
        coeffs.append(field.one())
        if _irreducible_over(field, tuple(coeffs)):
            yield FqPolynomial(field, coeffs)


def least_irreducible(field, degree: int) -> FqPolynomial:
    return next(monic_irreducibles(field, degree))


def enumerate_places(field, max_degree: int,
                     cap: int = MAX_PLACE_DEGREE) -> list[Place]:
    """Infinity plus every monic irreducible of degree <= max_degree.

    Sorted by (degree, lexicographic coefficients), infinity first.
    """
    if max_degree < 1:
        raise ValueError("max_degree must be >= 1")
    if max_degree > cap:
        raise ResourceLimitError(
            f"max_degree {max_degree} exceeds the place-degree cap {cap}")
    places = [Place.infinity(field)]
    for d in range(1, max_degree + 1):
        for poly in monic_irreducibles(field, d):
            places.append(Place(field, poly))
    return places


def place_count(q: int, degree: int) -> int:
    """Number of monic irreducibles of this degree over F_q (necklace formula)."""
    total = sum(moebius(e) * q ** (degree // e)
                for e in range(1, degree + 1) if degree % e == 0)
    return total // degree


def residue_field(v: Place) -> ExtField:
    if v.is_infinity:
        raise ValueError("the place at infinity has no residue ring F_q[t]/(v)")
    return ExtField(v.field, v.poly.coeffs)


def residue_value(f: FqPolynomial, v: Place):
    """Image of f in the residue field F_q[t]/(v).  Rejects v = infinity."""
    if v.is_infinity:
        raise ValueError(
            "residue_value is undefined at infinity; handle it via "
            "leading-coefficient logic in the representation layer")
    R = residue_field(v)
    r = f % v.poly
    coeffs = list(r.coeffs) + [v.field.zero()] * (R.degree - len(r.coeffs))
    return tuple(coeffs[: R.degree])


def multiplicative_order(field, a) -> int:
    if a == field.zero():
        raise ValueError("zero has no multiplicative order")
    n = field.q - 1
    order = n
    for p in factorize(n):
        while order % p == 0 and field.pow(a, order // p) == field.one():
            order //= p
    return order


@functools.cache
def primitive_root(field) -> object:
    """The least generator of the multiplicative group, by element encoding."""
    for k in range(1, field.q):
        a = field.element_from_int(k)
        if multiplicative_order(field, a) == field.q - 1:
            return a
    raise RuntimeError("no primitive root found")  # unreachable


# ---------------------------------------------------------------------------
# Place cache persistence


def write_place_cache(path, field, places: Sequence[Place]) -> None:
    modulus = (
        ",".join(str(field.base.element_to_int(c)) for c in field.modulus)
        if isinstance(field, ExtField)
        else "1"
    )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# ffmc-places p={field.p} e={field.e} modulus={modulus}\n")
        for v in places:
            if v.is_infinity:
                fh.write("1\tinf\n")
            else:
                coeffs = ",".join(str(c) for c in v.poly.to_ints())
                fh.write(f"{v.degree}\t{coeffs}\n")


def read_place_cache(path, field) -> list[Place]:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        expected_mod = (
            ",".join(str(field.base.element_to_int(c)) for c in field.modulus)
            if isinstance(field, ExtField)
            else "1"
        )
        expected = f"# ffmc-places p={field.p} e={field.e} modulus={expected_mod}"
        if header != expected:
            raise ConfigError(
                f"place cache header mismatch in {path}: got {header!r}, "
                f"expected {expected!r}")
        places = []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            deg_s, _, payload = line.partition("\t")
            if payload == "inf":
                places.append(Place.infinity(field))
                continue
            ints = [int(x) for x in payload.split(",")]
            poly = FqPolynomial(
                field, [field.element_from_int(k) for k in ints])
            if poly.degree != int(deg_s):
                raise ConfigError(f"corrupt place cache record in {path}: {line!r}")
            places.append(Place(field, poly))
    return places
