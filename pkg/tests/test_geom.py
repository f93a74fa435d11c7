"""Point counts, zeta numerators, base change, and Artin factorization."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffmc.base import FqPolynomial, finite_field, parse_polynomial
from ffmc.errors import InternalCountError, ResourceLimitError
from ffmc.geom import (
    SuperellipticCurve,
    _count_affine_bulk,
    _count_affine_plain,
    artin_factorization_check,
    base_change_curve,
    base_change_numerator,
    count_points,
    evaluate_at_one,
    extension_field,
    zeta_numerator,
)
from ffmc.lfun import l_function
from ffmc.reps import kummer_group


def _flagship_curve():
    F = finite_field(5)
    return SuperellipticCurve(F, 2, parse_polynomial("t^3-t", F))


class TestCounting:
    def test_flagship_counts(self):
        curve = _flagship_curve()
        assert count_points(curve, 1) == 8
        assert count_points(curve, 2) == 32

    def test_projective_line(self):
        F = finite_field(3)
        line = SuperellipticCurve(F, 1, FqPolynomial.one(F))
        assert count_points(line, 1) == 4
        assert count_points(line, 2) == 10

    def test_rational_quartic_cover(self):
        # y^4 = t is rational: 6 points over F_5 (4 affine pairs + 0 + inf?)
        F = finite_field(5)
        curve = SuperellipticCurve(F, 4, parse_polynomial("t", F))
        assert curve.genus == 0
        assert count_points(curve, 1) == 6

    def test_plain_and_bulk_kernels_agree(self):
        F = finite_field(5)
        f = parse_polynomial("t^3-t", F)
        big, embed = extension_field(F, 4)
        coeffs = [embed(c) for c in f.coeffs]
        assert (_count_affine_plain(big, coeffs, 2, 1)
                == _count_affine_bulk(big, coeffs, 2, 1))

    def test_cap_error_names_cap(self):
        curve = _flagship_curve()
        with pytest.raises(ResourceLimitError, match="100"):
            count_points(curve, 9, cap=100)

    def test_genus_values(self):
        F = finite_field(5)
        cases = [(2, "t^3-t", 1), (2, "t^4+t+1", 1), (4, "t^2+1", 1),
                 (2, "t^5+2*t+2", 2), (4, "t^3+t+1", 3)]
        for m, f, g in cases:
            assert SuperellipticCurve(F, m, parse_polynomial(f, F)).genus == g


class TestZetaNumerator:
    def test_flagship(self):
        data = zeta_numerator(_flagship_curve())
        assert data.P == (1, 2, 5)
        assert data.h == 8
        assert data.counts == (8, 32)

    def test_genus_two_over_f3(self):
        F = finite_field(3)
        curve = SuperellipticCurve(F, 2, parse_polynomial("t^5+2*t+1", F))
        data = zeta_numerator(curve)
        assert data.P == (1, 3, 7, 9, 9)
        assert data.h == 29

    def test_functional_equation_is_rechecked(self):
        # zeta_numerator recomputes all 2g counts, so the Weil FE is a
        # real cross-check; randomized curves must never trip it
        rng = random.Random(7)
        for _ in range(5):
            q = rng.choice([3, 5])
            F = finite_field(q)
            while True:
                f = FqPolynomial.from_ints(
                    F, [rng.randrange(q) for _ in range(4)] + [1])
                if f.is_squarefree():
                    break
            zeta_numerator(SuperellipticCurve(F, 2, f))  # must not raise


class TestBaseChange:
    def test_frozen_tower_values(self):
        # alpha = -1 +- 2i, so alpha^2 = -3 -+ 4i gives trace 6 over F_25
        P = [1, 2, 5]
        assert base_change_numerator(P, 1) == [1, 2, 5]
        assert base_change_numerator(P, 2) == [1, 6, 25]
        assert base_change_numerator(P, 3) == [1, -22, 125]
        assert base_change_numerator(P, 4) == [1, 14, 625]

    def test_tower_class_numbers(self):
        P = [1, 2, 5]
        assert evaluate_at_one(base_change_numerator(P, 1)) == 8
        assert evaluate_at_one(base_change_numerator(P, 2)) == 32
        assert evaluate_at_one(base_change_numerator(P, 3)) == 104
        assert evaluate_at_one(base_change_numerator(P, 4)) == 640

    def test_base_change_matches_recount(self):
        curve = _flagship_curve()
        P = list(zeta_numerator(curve).P)
        big = base_change_curve(curve, 2)
        assert big.q == 25
        assert list(zeta_numerator(big).P) == base_change_numerator(P, 2)

    @given(r=st.integers(1, 5), s=st.integers(1, 5))
    @settings(max_examples=20, deadline=None)
    def test_base_change_is_transitive(self, r, s):
        P = [1, 2, 5]
        assert (base_change_numerator(base_change_numerator(P, r), s)
                == base_change_numerator(P, r * s))


class TestArtin:
    def test_flagship_factorization(self):
        F = finite_field(5)
        f = parse_polynomial("t^3-t", F)
        curve = SuperellipticCurve(F, 2, f)
        lpolys = [list(l_function(chi).num)
                  for chi in kummer_group(f, 2).nontrivial()]
        check = artin_factorization_check(curve, lpolys)
        assert check.ok
        assert check.p_from_counts == (1, 2, 5)
        assert check.p_from_characters == (1, 2, 5)

    def test_wrong_factors_rejected(self):
        F = finite_field(5)
        f = parse_polynomial("t^3-t", F)
        curve = SuperellipticCurve(F, 2, f)
        from ffmc.cyclotomic import Cyc
        wrong = [[Cyc.from_int(1), Cyc.from_int(1), Cyc.from_int(5)]]
        assert not artin_factorization_check(curve, wrong).ok
