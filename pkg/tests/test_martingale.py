from fractions import Fraction

import pytest

from dymart.dyadic import Word
from dymart.errors import PrecisionContractError
from dymart.martingale import (ApproxMartingale, ExactMartingale, allin_zeros,
                               as_approx, by_name, capital_trace,
                               conservative_transform, pattern_bettor,
                               savings_wrapper, uniform, verify_conservative,
                               verify_martingale)
from dymart.tightness import z_bettor

W = Word.parse

F = Fraction


def zoo():
    base = [uniform(), allin_zeros(), pattern_bettor("01"),
            pattern_bettor("110"), z_bettor("1"), z_bettor("0,2,4"),
            z_bettor("pow2")]
    return base + [conservative_transform(d) for d in base]


class TestVerify:
    def test_uniform_passes(self):
        assert verify_martingale(uniform(), 10).ok

    def test_allin_passes(self):
        # d(w) = 2^|w| on all-zero prefixes, 0 elsewhere
        d = allin_zeros()
        assert d.at(W("000")) == 8
        assert d.at(W("0010")) == 0
        assert verify_martingale(d, 10).ok

    def test_corrupted_table_fails_at_root_only(self):
        table = {W("λ"): F(9, 10)}
        d = ExactMartingale("corrupt", lambda w: table.get(w, F(1)))
        report = verify_martingale(d, 6)
        assert not report.ok
        assert len(report.violations) == 1
        assert report.violations[0].where == "λ"
        assert report.violations[0].kind == "identity"

    def test_zoo_passes_depth_8(self):
        for d in zoo():
            assert verify_martingale(d, 8).ok, d.name


class TestConservativeTransform:
    def test_uniform_fixed_point(self):
        d = conservative_transform(uniform())
        for w in [W("λ"), W("0"), W("0110"), W("111111")]:
            assert d.at(w) == 1

    def test_allin_spine(self):
        d = conservative_transform(allin_zeros())
        for n in range(12):
            assert d.at(Word(0, n)) == F(3, 2) ** n

    def test_ratio_bounds_and_cap(self):
        for base in (allin_zeros(), z_bettor("0,2,4"), pattern_bettor("10")):
            d = conservative_transform(base)
            assert verify_conservative(d, 8).ok, d.name
            assert verify_martingale(d, 8).ok, d.name

    def test_nonconservative_flagged(self):
        rep = verify_conservative(allin_zeros(), 5)
        assert not rep.ok
        assert any(v.kind == "ratio" for v in rep.violations)

    def test_halfbet_domination(self):
        # d'(w)^2 >= d(w) * d(λ) exactly, all |w| <= 10
        for base in (allin_zeros(), z_bettor("1"), pattern_bettor("01")):
            d = conservative_transform(base)
            for n in range(11):
                for k in range(1 << n):
                    w = Word(k, n)
                    assert d.at(w) ** 2 >= base.at(w) * base.at(W("λ"))

    def test_generic_path_matches_product_form(self):
        base = z_bettor("1")
        via_pf = conservative_transform(base)
        generic = conservative_transform(
            ExactMartingale(base.name, base.at))
        for n in range(7):
            for k in range(1 << n):
                assert via_pf.at(Word(k, n)) == generic.at(Word(k, n))

    def test_nondyadic_ratio_stays_exact(self):
        # a martingale whose bet ratios leave the dyadics
        table = {W("λ"): F(1), W("0"): F(3, 2), W("1"): F(1, 2),
                 W("00"): F(1), W("01"): F(2)}

        def fn(w):
            if w in table:
                return table[w]
            if W("00").is_prefix_of(w) or W("01").is_prefix_of(w):
                return table[w.prefix(2)]
            return table[w.prefix(1)]

        d = conservative_transform(ExactMartingale("mixed", fn))
        # ρ("00") = 2/3, so d'("00") = (5/4)(5/6) = 25/24: not dyadic
        assert d.at(W("00")) == F(25, 24)
        assert verify_martingale(d, 4).ok


class TestSavings:
    def test_uniform_unchanged(self):
        d = savings_wrapper(uniform())
        for w in [W("λ"), W("010"), W("11")]:
            assert d.at(w) == 1

    def test_allin_monotone_along_zeros(self):
        d = savings_wrapper(allin_zeros())
        trace = [d.at(Word(0, n)) for n in range(6)]
        assert trace == [1, 2, 3, 4, 5, 6]
        assert all(a <= b for a, b in zip(trace, trace[1:]))

    def test_reserve_survives_crash(self):
        d = savings_wrapper(allin_zeros())
        # after two doublings the reserve holds 2 units forever
        assert d.at(W("001")) == 2
        assert d.at(W("001101")) == 2

    def test_is_martingale(self):
        assert verify_martingale(savings_wrapper(allin_zeros()), 10).ok
        assert verify_martingale(savings_wrapper(z_bettor("0,1,2")), 8).ok


class TestTrace:
    def test_uniform(self):
        got = capital_trace(as_approx(uniform()), W("0110"), 10)
        assert got == [1, 1, 1, 1, 1]

    def test_zbettor_inserted_prefix(self):
        got = capital_trace(as_approx(z_bettor("1")), W("10100"), 5)
        assert got == [1, 1, 2, 2, 2, 2]

    def test_allin(self):
        got = capital_trace(as_approx(allin_zeros()), W("01"), 4)
        assert got == [1, 2, 0]

    def test_trivial_wrapper_is_exact(self):
        d = conservative_transform(z_bettor("0,2,4"))
        approx = as_approx(d)
        s = W("0101010")
        exact = [d.at(p) for p in s.prefixes()]
        for r in (1, 10, 30):
            assert capital_trace(approx, s, r) == exact

    def test_contract_violation_detected(self):
        bad = ApproxMartingale("bad", lambda w, r: F(-1, 1 << (r - 1)))
        with pytest.raises(PrecisionContractError):
            bad.query(W("0"), 8)


class TestNames:
    def test_round_trip(self):
        for name in ("uniform", "allin_zeros", "pattern:01", "zbettor:1",
                     "conservative:allin_zeros", "savings:zbettor:pow2",
                     "conservative:zbettor:0,2,4"):
            assert by_name(name) is not None

    def test_unknown(self):
        with pytest.raises(ValueError):
            by_name("martin")
