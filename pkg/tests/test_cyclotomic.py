"""Exact arithmetic in Z[zeta_n] and its mod-l^N quotients."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffmc.cyclotomic import (
    Cyc,
    CycMod,
    _int_poly_mul,
    cyclotomic_polynomial,
    euler_phi,
    field_norm,
    galois_conjugate,
    reduction_map,
    root_of_unity_power_decomposition,
)


class TestCyclotomicPolynomials:
    def test_known_values(self):
        assert cyclotomic_polynomial(1) == (-1, 1)
        assert cyclotomic_polynomial(2) == (1, 1)
        assert cyclotomic_polynomial(4) == (1, 0, 1)
        assert cyclotomic_polynomial(6) == (1, -1, 1)
        assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)

    @given(n=st.integers(min_value=1, max_value=40))
    @settings(max_examples=40, deadline=None)
    def test_product_over_divisors_is_xn_minus_1(self, n):
        prod = [1]
        for d in range(1, n + 1):
            if n % d == 0:
                prod = _int_poly_mul(prod, list(cyclotomic_polynomial(d)))
        assert prod == [-1] + [0] * (n - 1) + [1]


class TestCyc:
    def test_zeta4_squared_is_minus_one(self):
        z = Cyc.zeta(4)
        assert z * z == -1
        assert z ** 4 == 1

    def test_mixed_order_equality(self):
        assert Cyc.zeta(6) ** 3 == Cyc.zeta(2)
        assert Cyc.zeta(2) == -1
        assert Cyc.zeta(3) + Cyc.zeta(3) ** 2 == -1

    def test_root_order(self):
        assert Cyc.zeta(9).root_order() == 9
        assert (Cyc.zeta(9) ** 3).root_order() == 3
        assert (-Cyc.zeta(3)).root_order() == 6
        assert Cyc.from_int(2).root_order() is None

    def test_root_inverse(self):
        z = Cyc.zeta(8)
        assert z * z.root_inverse() == 1

    def test_divide_exact(self):
        a = Cyc(4, [6, 10])
        assert a.divide_exact_int(2) == Cyc(4, [3, 5])
        with pytest.raises(ValueError):
            a.divide_exact_int(4)

    def test_power_decomposition(self):
        a = Cyc.zeta(3) * 25
        u, s = root_of_unity_power_decomposition(a, 5)
        assert u == Cyc.zeta(3) and s == 2
        assert root_of_unity_power_decomposition(Cyc.from_int(6), 5) is None

    def test_galois_conjugate(self):
        a = 1 + Cyc.zeta(5) * 2
        assert galois_conjugate(a, 2) == 1 + Cyc.zeta(5) ** 2 * 2
        with pytest.raises(ValueError):
            galois_conjugate(Cyc.zeta(6), 2)

    def test_field_norm(self):
        # N(1 + 3 zeta_3) = (1 + 3z)(1 + 3z^2) = 1 - 3 + 9 = 7
        a = 1 + Cyc.zeta(3) * 3
        n, adj = field_norm(a)
        assert n == 7
        assert a * adj == Cyc.from_int(7)
        # rational elements are their own norm
        assert field_norm(Cyc.from_int(-6))[0] == -6

    @given(order=st.sampled_from([1, 2, 3, 4, 6, 8, 9, 12]),
           k=st.integers(1, 12),
           coeffs=st.lists(st.integers(-9, 9), min_size=1, max_size=4))
    @settings(max_examples=60, deadline=None)
    def test_conjugation_is_a_ring_map(self, order, k, coeffs):
        import math

        if math.gcd(k, order) != 1:
            k = 1
        x = Cyc(order, coeffs)
        y = Cyc(order, coeffs[::-1])
        assert galois_conjugate(x * y, k) == (
            galois_conjugate(x, k) * galois_conjugate(y, k))
        assert galois_conjugate(x + y, k) == (
            galois_conjugate(x, k) + galois_conjugate(y, k))

    @given(order=st.sampled_from([1, 2, 3, 4, 6, 8, 9, 12]),
           a=st.lists(st.integers(-9, 9), min_size=1, max_size=4),
           b=st.lists(st.integers(-9, 9), min_size=1, max_size=4))
    @settings(max_examples=60, deadline=None)
    def test_ring_laws(self, order, a, b):
        x, y = Cyc(order, a), Cyc(order, b)
        assert x + y == y + x
        assert x * y == y * x
        assert x * (y + 1) == x * y + x
        assert (x - y) + y == x


class TestCycMod:
    def test_reduction_is_ring_hom(self):
        red = reduction_map(6, 3, 2)
        x, y = Cyc(6, [2, 5]), Cyc(3, [1, 7])
        assert red(x * y) == red(x) * red(y)
        assert red(x + y) == red(x) + red(y)

    def test_coefficients_reduced(self):
        a = CycMod(4, 2, 3, [9, 17])
        assert a.coeffs == (1, 1)

    def test_lift_preserves_value(self):
        a = CycMod(3, 5, 1, [2, 3])
        lifted = a.lift(6)
        # zeta_3 = zeta_6^2, so the lift of 2 + 3 zeta_3 is 2 + 3 zeta_6^2
        assert lifted == CycMod(6, 5, 1, [2, 0, 3])
