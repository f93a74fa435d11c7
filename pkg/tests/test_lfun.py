"""Euler products, functional equations, and Iwasawa specializations."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffmc.base import (
    FqPolynomial,
    Place,
    enumerate_places,
    finite_field,
    parse_polynomial,
)
from ffmc.cyclotomic import Cyc, CycMod
from ffmc.errors import ConductorMismatchError
from ffmc.lfun import (
    Epsilon,
    IwasawaElement,
    LPolynomial,
    TruncationSpec,
    assemble_ncl,
    atom_poly,
    degree_bound,
    euler_factor,
    euler_product_series,
    functional_equation_check,
    interpolation_check,
    l_function,
    modified_local_factor,
    substitute_gamma,
    swap_product_is_one,
)
from ffmc.reps import (
    CharacterRep,
    Modulus,
    kummer_character,
    kummer_group,
    trivial_character,
)

ONE = Cyc.from_int(1)


def _flagship():
    F = finite_field(5)
    f = parse_polynomial("t^3-t", F)
    return F, kummer_character(f, 2)


def _random_kummer(rng, q):
    F = finite_field(q)
    m = rng.choice([d for d in (2, 3, 4) if (q - 1) % d == 0])
    while True:
        coeffs = [rng.randrange(q) for _ in range(rng.randint(2, 3))] + [1]
        f = FqPolynomial.from_ints(F, coeffs)
        if f.is_squarefree():
            return kummer_character(f, m)


class TestLocalFactors:
    def test_euler_factor_unramified(self):
        F, chi = _flagship()
        v = Place.finite(parse_polynomial("t-2", F))
        assert euler_factor(chi, v) == atom_poly(chi.value(v), 1)

    def test_euler_factor_ramified_is_one(self):
        F, chi = _flagship()
        v = Place.finite(parse_polynomial("t", F))
        assert euler_factor(chi, v) == [ONE]

    def test_modified_factor_unramified(self):
        F, chi = _flagship()
        v = Place.finite(parse_polynomial("t-3", F))
        D = modified_local_factor(chi, v)
        # (1 - chi(v) q t) / (1 - chi(v) t) at weight 0, degree 1
        assert list(D.num) == atom_poly(chi.value(v) * 5, 1)
        assert D.den_atoms == ((chi.value(v), 1),)

    def test_modified_factor_ramified_is_one(self):
        F, chi = _flagship()
        v = Place.finite(parse_polynomial("t", F))
        D = modified_local_factor(chi, v)
        assert D.is_polynomial and list(D.num) == [ONE]


class TestLFunction:
    def test_flagship_polynomial(self):
        F, chi = _flagship()
        assert degree_bound(chi) == 2
        L = l_function(chi)
        assert L.is_polynomial
        assert [c.to_int() for c in L.num] == [1, 2, 5]

    def test_zeta_of_p1_series(self):
        for q in (2, 3, 5):
            F = finite_field(q)
            series = euler_product_series(trivial_character(F), 7)
            expected = [(q ** (n + 1) - 1) // (q - 1) for n in range(7)]
            assert [c.to_int() for c in series] == expected

    def test_conductor_mismatch_detected(self):
        F, chi = _flagship()
        # lie about the conductor: claim it is only the finite part
        liar = CharacterRep(F, 2, chi.value,
                            Modulus(parse_polynomial("t^2-1", F)), 0,
                            None, "liar")
        with pytest.raises(ConductorMismatchError):
            l_function(liar)

    def test_worker_count_does_not_change_result(self):
        F, chi = _flagship()
        assert l_function(chi, workers=1) == l_function(chi, workers=4)

    def test_truncation_multiplicativity(self):
        F, chi = _flagship()
        v = Place.finite(parse_polynomial("t^2+2", F))
        plain = l_function(chi)
        truncated = l_function(chi, TruncationSpec((v,), ()))
        assert truncated == plain * LPolynomial(euler_factor(chi, v))

    def test_modification_factorization(self):
        F, chi = _flagship()
        v = Place.finite(parse_polynomial("t-2", F))
        plain = l_function(chi)
        modified = l_function(chi, TruncationSpec((), (v,)))
        expected = (plain * LPolynomial(euler_factor(chi, v))
                    * modified_local_factor(chi, v))
        assert modified == expected

    @given(seed=st.integers(0, 10 ** 6))
    @settings(max_examples=10, deadline=None)
    def test_truncation_identities_randomized(self, seed):
        rng = random.Random(seed)
        q = rng.choice([3, 5])
        chi = _random_kummer(rng, q)
        places = enumerate_places(chi.field, 2)
        v = rng.choice(places)
        plain = l_function(chi)
        ef = LPolynomial(euler_factor(chi, v))
        assert l_function(chi, TruncationSpec((v,), ())) == plain * ef
        assert (l_function(chi, TruncationSpec((), (v,)))
                == plain * ef * modified_local_factor(chi, v))


class TestFunctionalEquation:
    def test_flagship_epsilon(self):
        F, chi = _flagship()
        L = l_function(chi)
        Ldual = l_function(chi.inverse())
        fe = functional_equation_check(L, Ldual, 5)
        assert fe.ok
        assert fe.epsilon.root == 1
        assert (fe.epsilon.q_power, fe.epsilon.t_power) == (1, 2)

    def test_zeta_functional_equation(self):
        F = finite_field(3)
        triv = trivial_character(F)
        L = l_function(triv)
        fe = functional_equation_check(L, L, 3)
        assert fe.ok
        assert (fe.epsilon.q_power, fe.epsilon.t_power) == (-1, -2)

    def test_double_swap_product(self):
        F, chi = _flagship()
        v = Place.finite(parse_polynomial("t-2", F))
        spec = TruncationSpec((v,), ())
        L = l_function(chi, spec)
        Ldual = l_function(chi.inverse(), spec.swapped())
        fe = functional_equation_check(L, Ldual, 5)
        fe_back = functional_equation_check(Ldual, L, 5)
        assert fe.ok and fe_back.ok
        assert swap_product_is_one(fe.epsilon, fe_back.epsilon)

    def test_gauss_sum_epsilon_roots(self):
        # characters of order > 2 have Weil-number epsilon constants with
        # root * conj(root) = q, which are not roots of unity times q-powers
        cases = [(3, 7, "t^3-t"), (4, 5, "t^2+2")]
        for m, q, f_text in cases:
            F = finite_field(q)
            f = parse_polynomial(f_text, F)
            for chi in kummer_group(f, m).nontrivial():
                L = l_function(chi)
                Ldual = l_function(chi.inverse())
                fe = functional_equation_check(L, Ldual, q)
                fe_back = functional_equation_check(Ldual, L, q)
                assert fe.ok and fe_back.ok, fe.diagnostic
                assert swap_product_is_one(fe.epsilon, fe_back.epsilon)
                # the two roots are complex conjugates with product q^t_power
                prod = fe.epsilon.root * fe_back.epsilon.root
                total = (fe.epsilon.q_power + fe_back.epsilon.q_power
                         - fe.epsilon.t_power)
                assert prod == Cyc.from_int(q ** -total)

    def test_epsilon_inverse(self):
        F, chi = _flagship()
        L = l_function(chi)
        fe = functional_equation_check(L, l_function(chi.inverse()), 5)
        inv = fe.epsilon.inverse()
        assert (inv.root, inv.q_power, inv.t_power) == (Cyc.from_int(1), -1, -2)

    def test_mismatched_pair_fails(self):
        F, chi = _flagship()
        L = l_function(chi)
        wrong = LPolynomial([ONE, Cyc.from_int(3)])
        assert not functional_equation_check(L, wrong, 5).ok


class TestIwasawa:
    def test_unit_detection(self):
        # 1 is a unit; gamma - 1 is not (it dies at the trivial character)
        one = CycMod(1, 3, 2, [1])
        zero = CycMod(1, 3, 2, [0])
        unit = IwasawaElement(3, 2, 1, 1, [one, zero, zero],
                              [one, zero, zero])
        assert unit._is_unit([one, zero, zero])
        assert not unit._is_unit([one - CycMod(1, 3, 2, [2]), one, zero][::1])

    def test_substitute_gamma_at_trivial_psi(self):
        F, chi = _flagship()
        L = l_function(chi)
        iw = substitute_gamma(L, 3, 2, 1)
        num, den = iw.evaluate(CycMod(1, 3, 2, [1]))
        # evaluating gamma -> 1 is evaluating the polynomial at t = 1
        assert num == CycMod(num.order, 3, 2, [8])
        assert den == CycMod(den.order, 3, 2, [1])

    def test_interpolation_flagship(self):
        F = finite_field(5)
        f = parse_polynomial("t^3-t", F)
        group = kummer_group(f, 2)
        ncl = assemble_ncl(group, trivial_character(F))
        ok, detail = interpolation_check(ncl, 1, Cyc.zeta(3), 3, 2, 2)
        assert ok
