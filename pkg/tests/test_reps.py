"""Characters: Kummer symbols, ray class groups, twists, inertia."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffmc.base import (
    FqPolynomial,
    Place,
    enumerate_places,
    finite_field,
    parse_polynomial,
    primitive_root,
)
from ffmc.cyclotomic import Cyc
from ffmc.reps import (
    Modulus,
    character_group,
    constant_field_twist,
    dual_tate_twist,
    inertia_invariants,
    is_tame_everywhere,
    kummer_character,
    kummer_group,
    tensor,
    trivial_character,
)


def _flagship():
    F = finite_field(5)
    f = parse_polynomial("t^3-t", F)
    return F, f, kummer_character(f, 2)


def _legendre_oracle(F, f, c):
    """Independent quadratic symbol at t - c: f(c)^((q-1)/2)."""
    val = f.evaluate(F.element_from_int(c))
    if val == F.zero():
        return None
    return F.pow(val, (F.q - 1) // 2) == F.one()


class TestKummerCharacter:
    def test_flagship_values_match_legendre_oracle(self):
        F, f, chi = _flagship()
        t = FqPolynomial.x(F)
        for c in range(5):
            v = Place.finite(t - FqPolynomial.from_ints(F, [c]))
            square = _legendre_oracle(F, f, c)
            if square is None:
                assert chi.is_ramified_at(v)
            else:
                expected = Cyc.from_int(1) if square else Cyc.zeta(2)
                assert chi.value(v) == expected

    def test_values_are_roots_of_unity(self):
        F, f, chi = _flagship()
        for v in enumerate_places(F, 2):
            if not chi.is_ramified_at(v):
                assert chi.value(v) ** 2 == 1

    def test_conductor_includes_infinity_for_odd_degree(self):
        F, f, chi = _flagship()
        # deg f = 3 is odd, so the quadratic cover ramifies at infinity
        assert chi.is_ramified_at(Place.infinity(F))
        assert chi.conductor.degree == 4

    def test_even_degree_unramified_at_infinity(self):
        F = finite_field(5)
        f = parse_polynomial("t^2-2", F)
        chi = kummer_character(f, 2)
        assert not chi.is_ramified_at(Place.infinity(F))
        assert chi.conductor.degree == 2

    def test_requires_squarefree(self):
        F = finite_field(5)
        with pytest.raises(ValueError):
            kummer_character(parse_polynomial("t^2", F), 2)

    def test_requires_m_dividing_q_minus_1(self):
        F = finite_field(5)
        with pytest.raises(ValueError):
            kummer_character(parse_polynomial("t", F), 3)

    def test_group_structure(self):
        F = finite_field(5)
        f = parse_polynomial("t^2-2", F)
        group = kummer_group(f, 4)
        assert group.order == 4
        assert group[0].is_trivial()
        assert len(group.nontrivial()) == 3
        v = Place.finite(parse_polynomial("t", F))
        # chi^j at v is chi(v)^j
        base = group[1].value(v)
        for j in (2, 3):
            assert group[j].value(v) == base ** j


class TestRayClassGroup:
    def test_order_for_two_rational_places_with_infinity(self):
        F = finite_field(3)
        f = parse_polynomial("t^2-t", F)  # (t)(t-1)
        group = character_group(Modulus(f, 1))
        # (2 * 2 * 2) / diagonal constants of order 2
        assert group.order == 4

    def test_orthogonality_at_split_place(self):
        F = finite_field(3)
        group = character_group(Modulus(parse_polynomial("t^2-t", F), 1))
        v = Place.finite(parse_polynomial("t+1", F))
        total = sum((chi.value(v) for chi in group), Cyc.from_int(0))
        # character sum vanishes unless v is trivial in the ray class group
        assert total == 0 or total == group.order

    def test_true_conductor_shrinks(self):
        F = finite_field(3)
        group = character_group(Modulus(parse_polynomial("t^2-t", F), 1))
        assert any(chi.conductor.degree < 3 for chi in group)


class TestTwists:
    def test_dual_tate_twist(self):
        F, f, chi = _flagship()
        dual = dual_tate_twist(chi)
        assert dual.weight == chi.weight + 1
        v = Place.finite(parse_polynomial("t-2", F))
        assert chi.value(v) * dual.value(v) == 1
        assert dual.frobenius(v) == chi.value(v) ** (-1) * 5

    def test_constant_field_twist_frobenius(self):
        F, f, chi = _flagship()
        tw = constant_field_twist(chi, Cyc.zeta(3))
        v = Place.finite(parse_polynomial("t^2+2", F))
        assert tw.value(v) == chi.value(v) * Cyc.zeta(3) ** v.degree

    def test_tensor_with_constant_type(self):
        F, f, chi = _flagship()
        psi = constant_field_twist(trivial_character(F), Cyc.zeta(4))
        both = tensor(chi, psi)
        v = Place.finite(parse_polynomial("t-3", F))
        assert both.value(v) == chi.value(v) * psi.value(v)


class TestInertia:
    def test_invariants_dimension(self):
        F, f, chi = _flagship()
        ramified = Place.finite(parse_polynomial("t", F))
        split = Place.finite(parse_polynomial("t-2", F))
        assert inertia_invariants(chi, ramified) == (0, None)
        rank, eigen = inertia_invariants(chi, split)
        assert rank == 1 and eigen == chi.frobenius(split)

    def test_tameness(self):
        F, f, chi = _flagship()
        assert is_tame_everywhere(chi)  # m = 2 is prime to p = 5


@given(q=st.sampled_from([3, 5, 7]), seed=st.integers(0, 10 ** 6))
@settings(max_examples=25, deadline=None)
def test_character_multiplicativity_under_power(q, seed):
    """chi^j (v) = chi(v)^j on unramified places, for random Kummer data."""
    import random

    rng = random.Random(seed)
    F = finite_field(q)
    m = rng.choice([d for d in (2, 3, 4) if (q - 1) % d == 0])
    while True:
        coeffs = [rng.randrange(q) for _ in range(rng.randint(2, 4))] + [1]
        f = FqPolynomial.from_ints(F, coeffs)
        if f.is_squarefree() and f.degree >= 1:
            break
    chi = kummer_character(f, m)
    j = rng.randrange(1, m)
    chi_j = kummer_character(f, m, power=j)
    for v in enumerate_places(F, 2):
        if not chi.is_ramified_at(v):
            assert chi_j.value(v) == chi.value(v) ** j
