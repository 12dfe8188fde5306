from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dymart.dyadic import (Dyadic, GridPoint, Word, affine_transform,
                           all_words, clamp_unit, fmt_rational, gamma,
                           lex_successor, minimal_cover, parse_rational,
                           round_to_grid, word_value)
from dymart.errors import ParseError

from helpers import brute_force_cover

W = Word.parse


def F(d):
    return Fraction(d)


dyadics = st.builds(Dyadic, st.integers(-2**40, 2**40), st.integers(0, 40))


class TestDyadic:
    def test_canonical_form(self):
        d = Dyadic(12, 4)
        assert (d.num, d.exp) == (3, 2)
        assert (Dyadic(0, 7).num, Dyadic(0, 7).exp) == (0, 0)
        assert (Dyadic(2, 0).num, Dyadic(2, 0).exp) == (2, 0)
        assert (Dyadic(-8, 5).num, Dyadic(-8, 5).exp) == (-1, 2)

    @given(dyadics, dyadics)
    def test_arithmetic_matches_fraction(self, a, b):
        assert F(a + b) == F(a) + F(b)
        assert F(a - b) == F(a) - F(b)
        assert F(a * b) == F(a) * F(b)
        assert (a < b) == (F(a) < F(b))
        assert (a == b) == (F(a) == F(b))

    @given(dyadics)
    def test_canonical_invariant(self, a):
        assert a.exp == 0 or a.num % 2 == 1

    @given(dyadics, st.integers(-20, 20))
    def test_pow2_scaling(self, a, j):
        assert F(a.scale_pow2(j)) == F(a) * Fraction(2) ** j

    def test_fraction_interop(self):
        assert Dyadic(1, 1) + Fraction(1, 3) == Fraction(5, 6)
        assert Fraction(1, 3) + Dyadic(1, 1) == Fraction(5, 6)
        assert Fraction(1, 2) == Dyadic(1, 1)
        assert Dyadic(1, 1) < Fraction(2, 3)
        assert hash(Dyadic(3, 2)) == hash(Fraction(3, 4))

    def test_no_floats(self):
        with pytest.raises(TypeError):
            float(Dyadic(1, 1))

    def test_parse_and_print(self):
        assert Dyadic.parse("5/8") == Dyadic(5, 3)
        assert Dyadic.parse("-3/4") == Dyadic(-3, 2)
        assert Dyadic.parse("7") == Dyadic(7)
        assert Dyadic.parse("0.101") == Dyadic(5, 3)
        assert str(Dyadic(5, 3)) == "5/8"
        assert Dyadic(5, 3).binary() == "0.101"
        assert Dyadic(1).binary() == "1"
        with pytest.raises(ParseError):
            Dyadic.parse("1/3")
        with pytest.raises(ParseError):
            Dyadic.parse("1/6")

    def test_parse_rational_general(self):
        assert parse_rational("3/10") == Fraction(3, 10)
        assert fmt_rational(Fraction(1)) == "1/1"
        assert fmt_rational(Dyadic(5, 3)) == "5/8"


class TestWord:
    def test_word_value(self):
        assert word_value(W("λ")) == Dyadic(0)
        assert word_value(W("101")) == Dyadic(5, 3)
        assert word_value(W("0011")) == Dyadic(3, 4)

    def test_leading_zeros_matter(self):
        assert W("0") != W("00")
        assert gamma(W("0")) != gamma(W("00"))

    def test_gamma(self):
        assert gamma(W("01")) == (Dyadic(1, 2), Dyadic(1, 1))
        assert gamma(W("λ")) == (Dyadic(0), Dyadic(1))
        assert gamma(W("111")) == (Dyadic(7, 3), Dyadic(1))

    def test_lex_successor(self):
        assert lex_successor(W("011")) == W("100")
        assert lex_successor(W("11")) is None
        assert lex_successor(W("000")) == W("001")

    def test_gamma_partition_to_depth_12(self):
        for w in all_words(12):
            lo, hi = gamma(w)
            l0, h0 = gamma(w.append(0))
            l1, h1 = gamma(w.append(1))
            assert l0 == lo and h1 == hi and h0 == l1

    def test_prefix_and_strip(self):
        assert W("01").is_prefix_of(W("0110"))
        assert not W("10").is_prefix_of(W("0110"))
        assert W("0100").strip_trailing_zeros() == W("01")
        assert W("000").strip_trailing_zeros() == W("λ")

    def test_from_point(self):
        assert Word.from_point(Dyadic(5, 3)) == W("101")
        assert Word.from_point(Dyadic(5, 3), 5) == W("10100")
        assert Word.from_point(Dyadic(0)) == W("λ")


class TestRounding:
    def test_examples(self):
        assert round_to_grid(Fraction(3, 10), 2).value == Dyadic(1, 2)
        # tie at distance exactly 2^-(m+1) resolves upward
        g = round_to_grid(Fraction(3, 8), 2)
        assert g.value == Dyadic(1, 1)
        assert abs(Fraction(3, 8) - F(g.value)) == Fraction(1, 8)
        assert round_to_grid(Fraction(1), 5).value == Dyadic(1)

    def test_exhaustive_error_bound(self):
        for q_den in range(1, 65):
            for p in range(-64, 65):
                q = Fraction(p, q_den)
                for m in range(0, 9):
                    g = round_to_grid(q, m)
                    assert abs(q - F(g.value)) <= Fraction(1, 1 << (m + 1))

    @given(st.fractions(), st.integers(0, 12))
    def test_grid_membership(self, q, m):
        g = round_to_grid(q, m)
        assert g.grid == m and g.value.exp <= m


class TestClamp:
    def test_examples(self):
        def gp(s, m):
            return GridPoint(Dyadic.parse(s), m)

        a, b = clamp_unit(gp("-1/8", 3), gp("9/8", 3))
        assert (a.value, b.value) == (Dyadic(0), Dyadic(1))
        a, b = clamp_unit(gp("1/4", 2), gp("3/4", 2))
        assert (a.value, b.value) == (Dyadic(1, 2), Dyadic(3, 2))
        a, b = clamp_unit(gp("3/4", 2), gp("1/4", 2))
        assert (a.value, b.value) == (Dyadic(3, 2), Dyadic(3, 2))


class TestCover:
    def test_examples(self):
        got = minimal_cover(Dyadic(1, 3), Dyadic(7, 3), 3)
        assert got == [W("001"), W("01"), W("10"), W("110")]
        assert minimal_cover(Dyadic(0), Dyadic(1), 4) == [W("λ")]
        assert minimal_cover(Dyadic(1, 1), Dyadic(1, 1), 1) == []

    def test_exhaustive_vs_brute_force(self):
        for m in range(0, 7):
            denom = 1 << m
            for ka in range(denom + 1):
                for kb in range(ka, denom + 1):
                    a, b = Dyadic(ka, m), Dyadic(kb, m)
                    got = minimal_cover(a, b, m)
                    assert got == brute_force_cover(a, b, m), (a, b, m)
                    self._check_shape(got, a, b, m)

    @staticmethod
    def _check_shape(cover, a, b, m):
        assert len(cover) <= 2 * m + 1
        lengths = [len(w) for w in cover]
        assert all(n <= m for n in lengths)
        assert all(lengths.count(n) <= 2 for n in set(lengths))
        assert sum(Fraction(1, 1 << n) for n in lengths) == F(b) - F(a)
        # tiles: consecutive intervals meet exactly at endpoints
        pos = F(a)
        for w in cover:
            lo, hi = gamma(w)
            assert F(lo) == pos
            pos = F(hi)
        if cover:
            assert pos == F(b)


class TestAffine:
    def test_examples(self):
        assert affine_transform(Dyadic(1, 2), 1, Dyadic(0)) == Dyadic(1, 1)
        assert affine_transform(Dyadic(5, 3), 0, Dyadic(-1, 1)) == Dyadic(1, 3)
        assert affine_transform(Dyadic(1), -3, Dyadic(3, 2)) == Dyadic(7, 3)

    def test_negation_is_exact(self):
        assert -Dyadic(5, 3) == Dyadic(-5, 3)
