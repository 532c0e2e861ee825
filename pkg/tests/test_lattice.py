from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import A2_LATTICE, LINE, trigpolys
from todaprep.exact import RatFn, ZERO, var
from todaprep.lattice import (LatticeData, NotInImageError, TrigPoly, a_drift, apply_D,
                              constant_term, d_eigenvalue, directional_derivative,
                              gradient_pairing, invert_D, invert_transport, laplacian, trig_mul)

a, h, k = RatFn.var("a1"), RatFn.var("hbar"), RatFn.var("kappa")


def line(d):
    return TrigPoly(LINE, {(w,): c for w, c in d.items()})


class TestLatticeData:
    def test_rejects_indefinite(self):
        with pytest.raises(ValueError):
            LatticeData([[0]])
        with pytest.raises(ValueError):
            LatticeData([[1, 2], [2, 1]])

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            LatticeData([[1, 0], [1, 1]])

    def test_pairings(self):
        assert A2_LATTICE.pair((1, 0), (0, 1)) == Fraction(-1, 2)
        assert A2_LATTICE.norm((1, 1)) == 1
        assert A2_LATTICE.pair_with_a((1, 0)) == var("a1") - var("a2") / 2

    def test_integrality_diagnostic(self):
        assert LatticeData([[2, -1], [-1, 2]]).is_integral()
        assert not A2_LATTICE.is_integral()

    def test_weight_length(self):
        with pytest.raises(ValueError):
            A2_LATTICE.check_weight((1,))


class TestTrigMul:
    def test_exponents_add(self):
        assert trig_mul(line({1: 2}), line({-1: 2})) == line({0: 4})

    def test_identity(self):
        f = line({1: a, -2: h})
        assert f * f.one_like() == f

    def test_binomial(self):
        f = line({1: 1, -1: 1})
        assert f * f == line({2: 1, 0: 2, -2: 1})

    def test_lattice_mismatch(self):
        with pytest.raises(ValueError):
            line({1: 1}) * TrigPoly(A2_LATTICE, {(1, 0): 1})

    @given(trigpolys(), trigpolys(), trigpolys())
    def test_ring(self, f, g, e):
        assert f * (g + e) == f * g + f * e
        assert f * g == g * f


class TestConstantTerm:
    def test_examples(self):
        assert constant_term(line({1: 2, -1: 2})) == ZERO
        assert constant_term(line({2: 1, 0: 2, -2: 1})) == RatFn(2)
        assert constant_term(TrigPoly(LINE)) == ZERO


class TestD:
    def test_rank_one_action(self):
        for m in (1, 2, -3):
            out = apply_D(line({m: 1}), 0)
            assert out == line({m: h * h * m * m + 2 * h * a * m})

    def test_constant(self):
        assert apply_D(line({0: a}), 3) == line({0: -3 * k * a})

    def test_norm_two_direction(self):
        lat = LatticeData([[2]])
        out = apply_D(TrigPoly(lat, {(1,): 1}), 1)
        assert out[(1,)] == 2 * h * h + 2 * h * (2 * a) - k

    def test_paper_scale(self):
        assert d_eigenvalue(LINE, (0,), 2, paper_scale=True) == -2 * h * k

    def test_inverse_examples(self):
        assert invert_D(line({1: 1}), 0) == line({1: 1 / (h * h + 2 * h * a)})
        assert invert_D(line({0: a}), 1) == line({0: -a / k})
        with pytest.raises(NotInImageError):
            invert_D(line({0: 5}), 0)

    @given(trigpolys(zero_constant=True))
    def test_inverse_n0(self, f):
        g = invert_D(f, 0)
        assert apply_D(g, 0) == f
        assert constant_term(g).is_zero()

    @given(trigpolys(), st.integers(1, 3))
    def test_inverse_shifted(self, f, n):
        assert apply_D(invert_D(f, n), n) == f

    @given(trigpolys(zero_constant=True))
    def test_transport_inverse(self, f):
        assert a_drift(invert_transport(f)) * 2 == f

    @given(trigpolys(max_terms=2), trigpolys(max_terms=2))
    def test_leibniz(self, f, g):
        lhs = apply_D(f * g, 0)
        rhs = (laplacian(f) * g + gradient_pairing(f, g) * 2 + f * laplacian(g)) * (h * h) \
            + (a_drift(f) * g + f * a_drift(g)) * (2 * h)
        assert lhs == rhs


class TestGradient:
    def test_examples(self):
        assert gradient_pairing(line({1: 1}), line({-1: 1})) == line({0: -1})
        assert gradient_pairing(line({1: 1, 3: a}), line({0: 7})).is_zero()
        assert gradient_pairing(line({1: 1}), line({1: 1})) == line({2: 1})

    @given(trigpolys(), trigpolys(), trigpolys())
    def test_symmetric_bilinear(self, f, g, e):
        assert gradient_pairing(f, g) == gradient_pairing(g, f)
        assert gradient_pairing(f + e, g) == gradient_pairing(f, g) + gradient_pairing(e, g)

    @given(trigpolys(), st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
    def test_directional_derivative_has_no_constant_term(self, f, direction):
        assert constant_term(directional_derivative(f, direction)).is_zero()
