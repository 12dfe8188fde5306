"""Backend agreement: the compiled kernel must be bit-identical to the pure
one, and both must match direct per-cell evaluation."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dymart import _shiftcore_py as pure
from dymart import kernels
from dymart.dyadic import Word
from dymart.martingale import ExactMartingale, ProductForm, allin_zeros, \
    conservative_transform, pattern_bettor, uniform
from dymart.tightness import z_bettor

try:
    from dymart import _shiftcore as compiled
except ImportError:
    compiled = None

MARTS = [uniform(), allin_zeros(), pattern_bettor("011"), z_bettor("1"),
         z_bettor("0,2,4"), z_bettor("pow2"),
         conservative_transform(allin_zeros()),
         conservative_transform(z_bettor("pow2")),
         conservative_transform(pattern_bettor("01"))]


def as_fraction(num, dexp):
    return Fraction(num, 1 << dexp)


class TestPureKernel:
    def test_validate_rejects_unfair(self):
        bad = (1, 0, ((((2, 0, 0), (1, 0, 0)),),), 2, 0)
        with pytest.raises(ValueError):
            pure.validate(bad)

    @pytest.mark.parametrize("mart", MARTS, ids=lambda m: m.name)
    def test_cell_value_matches_direct(self, mart):
        desc = mart.product_form.descriptor()
        for n in (0, 1, 3, 6):
            classes = mart.product_form.classes(n)
            for k in range(1 << n):
                got = as_fraction(*pure.cell_value(desc, classes, n, k))
                assert got == mart.at(Word(k, n))

    @pytest.mark.parametrize("mart", MARTS, ids=lambda m: m.name)
    def test_range_sum_max_matches_loop(self, mart):
        desc = mart.product_form.descriptor()
        n = 7
        classes = mart.product_form.classes(n)
        for a, b in [(0, 128), (0, 0), (5, 6), (17, 100), (127, 128),
                     (64, 64)]:
            sn, sd, mn, md = pure.range_sum_max(desc, classes, n, a, b)
            vals = [mart.at(Word(k, n)) for k in range(a, b)]
            assert as_fraction(sn, sd) == sum(vals, Fraction(0))
            assert as_fraction(mn, md) == max(vals, default=Fraction(0))

    @pytest.mark.parametrize("mart", MARTS, ids=lambda m: m.name)
    def test_subtree_equals_scan(self, mart):
        desc = mart.product_form.descriptor()
        for n in (0, 1, 5, 9):
            classes = mart.product_form.classes(n)
            cells = 1 << n
            for a, b in [(0, cells), (cells // 3, (2 * cells) // 3 + 1),
                         (1, cells - 1) if cells > 2 else (0, cells)]:
                sn, sd, _, _ = pure.range_sum_max(desc, classes, n, a, b,
                                                  want_max=False)
                tn, td = pure.subtree_sum(desc, classes, n, a, b)
                assert as_fraction(sn, sd) == as_fraction(tn, td)

    def test_subtree_far_beyond_enumeration(self):
        # depth 80 block sums stay exact
        mart = conservative_transform(z_bettor("pow2"))
        desc = mart.product_form.descriptor()
        n = 80
        classes = mart.product_form.classes(n)
        full, dexp = pure.subtree_sum(desc, classes, n, 0, 1 << n)
        assert as_fraction(full, dexp) == 1 << n  # total mass 2^n * d(λ)


@pytest.mark.skipif(compiled is None, reason="compiled kernel not built")
class TestCompiledKernel:
    @pytest.mark.parametrize("mart", MARTS, ids=lambda m: m.name)
    def test_bit_identical_results(self, mart):
        desc = mart.product_form.descriptor()
        for n in (0, 1, 4, 8, 11):
            classes = mart.product_form.classes(n)
            cells = 1 << n
            ranges = [(0, cells), (cells // 5, cells // 2 + 1), (0, 1)]
            for a, b in ranges:
                got = compiled.range_sum_max(desc, classes, n, a, b)
                want = pure.range_sum_max(desc, classes, n, a, b)
                assert as_fraction(got[0], got[1]) == \
                    as_fraction(want[0], want[1])
                assert as_fraction(got[2], got[3]) == \
                    as_fraction(want[2], want[3])
            for k in (0, cells - 1, cells // 2):
                assert as_fraction(*compiled.cell_value(desc, classes, n, k)) \
                    == as_fraction(*pure.cell_value(desc, classes, n, k))

    def test_guard_accepts_deep_builtin(self):
        mart = conservative_transform(z_bettor("pow2"))
        desc = mart.product_form.descriptor()
        assert kernels.fits_compiled(desc, 22)

    def test_guard_rejects_monster_factors(self):
        desc = (1, 0, ((((127, 6, 0), (1, 6, 0)),),), 127, 6)
        assert not kernels.fits_compiled(desc, 60)


def fair_factor_pairs():
    """Dyadic (f0, f1) with f0 + f1 == 2, factors in [0, 2]."""
    def build(num, dexp):
        # f0 = num / 2^dexp <= 2, f1 = 2 - f0
        f0 = (num, dexp)
        f1 = ((2 << dexp) - num, dexp)
        return f0, f1
    return st.tuples(st.integers(0, 8), st.just(2)).map(
        lambda t: build(min(t[0], 8), t[1]))


@st.composite
def random_product_forms(draw):
    n_states = draw(st.integers(1, 3))
    n_classes = draw(st.integers(1, 2))
    edges = []
    for _ in range(n_states):
        per_state = []
        for _ in range(n_classes):
            (n0, d0), (n1, d1) = draw(fair_factor_pairs())
            nxt0 = draw(st.integers(0, n_states - 1))
            nxt1 = draw(st.integers(0, n_states - 1))
            per_state.append(((n0, d0, nxt0), (n1, d1, nxt1)))
        edges.append(tuple(per_state))
    period = draw(st.integers(1, 4))
    cls_of = lambda i: (i % period) % n_classes
    return ProductForm(tuple(edges), 0, cls_of)


class TestRandomDescriptors:
    @settings(max_examples=60, deadline=None)
    @given(random_product_forms(), st.integers(0, 8), st.data())
    def test_kernel_matches_direct_product(self, pf, n, data):
        desc = pf.descriptor()  # validates fairness exactly
        mart = ExactMartingale("random", product_form=pf)
        assert mart.at(Word(0, 0)) == 1
        cells = 1 << n
        a = data.draw(st.integers(0, cells))
        b = data.draw(st.integers(a, cells))
        classes = pf.classes(n)
        sn, sd, mn, md = kernels.range_sum_max(desc, classes, n, a, b)
        tn, td = pure.subtree_sum(desc, classes, n, a, b)
        vals = [mart.at(Word(k, n)) for k in range(a, b)]
        assert Fraction(sn, 1 << sd) == sum(vals, Fraction(0))
        assert Fraction(tn, 1 << td) == sum(vals, Fraction(0))
        assert Fraction(mn, 1 << md) == max(vals, default=Fraction(0))

    @settings(max_examples=30, deadline=None)
    @given(random_product_forms())
    def test_random_product_form_is_a_martingale(self, pf):
        from dymart.martingale import verify_martingale
        mart = ExactMartingale("random", product_form=pf)
        assert verify_martingale(mart, 5).ok


class TestDispatch:
    def test_backend_reported(self):
        assert kernels.BACKEND in ("cython", "python")

    def test_dispatch_matches_pure(self):
        mart = conservative_transform(allin_zeros())
        desc = mart.product_form.descriptor()
        n = 10
        classes = mart.product_form.classes(n)
        got = kernels.range_sum_max(desc, classes, n, 3, 900)
        want = pure.range_sum_max(desc, classes, n, 3, 900)
        assert as_fraction(got[0], got[1]) == as_fraction(want[0], want[1])
