from fractions import Fraction

import pytest
import sympy

from conftest import LINE
from todaprep.exact import QSeries, RatFn, ZERO, parse_ratfn
from todaprep.lattice import LatticeData, TrigPoly, directional_derivative
from todaprep.periods import (CurveSpec, branch_form, classical_momentum, invert_a_of_u,
                              laurent, residue_identity_check, u_residual)
from todaprep.spectral import solve_classical
from todaprep.toda import custom_spec, preset

a, a0, u = RatFn.var("a1"), RatFn.var("a0"), RatFn.var("u")
P_A1 = laurent({1: 2, -1: 2})


@pytest.fixture(scope="module")
def a1():
    return solve_classical(preset("A1"), 8)


def test_momentum_first_orders(a1):
    m = classical_momentum(a1.v, P_A1, 3)
    assert m[0].is_zero()
    assert m[1] == laurent({1: -1 / a, -1: -1 / a})


def test_momentum_matches_classical_phi(a1):
    m = classical_momentum(a1.v, P_A1, 8)
    for n in range(9):
        assert m[n] == directional_derivative(a1.phi[n], (1,))


def test_momentum_trivial():
    zero = QSeries([ZERO] * 4)
    assert all(c.is_zero() for c in classical_momentum(zero, TrigPoly(LINE), 3))


def test_residue_a1(a1):
    assert residue_identity_check(a1.v, P_A1, 8)


def test_residue_generic_curve():
    spec = custom_spec([[1]], [((1,), 1, 1), ((-1,), 1, 1), ((2,), 1, 1)])
    v = solve_classical(spec, 6).v
    assert residue_identity_check(v, laurent({1: 1, -1: 1, 2: 1}), 6)


def test_residue_one_sided():
    assert residue_identity_check(QSeries([ZERO] * 5), laurent({1: 1}), 4)


@pytest.mark.parametrize("k", [2, 4, 6])
def test_perturbation_detected(a1, k):
    bad = QSeries([c + 1 if i == k else c for i, c in enumerate(a1.v)])
    res = residue_identity_check(bad, P_A1, 8)
    assert not res and res.first_failure == k


def test_hand_value_order_two(a1):
    # w^0 of the q^2 term: v_2/(2a) - 8/(8 a^3)
    assert a1.v[2] / (2 * a) - 1 / a ** 3 == ZERO


class TestInversion:
    def test_a2_coefficient(self, a1):
        s = invert_a_of_u(a1.v, 4)
        assert s[0] == a0
        assert s[2] == -1 / a0 ** 3

    def test_resubstitution(self, a1):
        s = invert_a_of_u(a1.v, 8)
        assert all(c.is_zero() for c in u_residual(s, a1.v))

    def test_zero_v(self):
        s = invert_a_of_u(QSeries([ZERO] * 5), 4)
        assert s == QSeries([a0] + [ZERO] * 4)

    def test_closed_form(self, a1):
        # a = sqrt(u) * [w^0] sqrt(1 - q P(w)/u), P = 2(w + 1/w)
        s = invert_a_of_u(a1.v, 8)
        for k in range(5):
            c = sympy.binomial(sympy.Rational(1, 2), 2 * k) * 4 ** k * sympy.binomial(2 * k, k)
            want = RatFn(Fraction(int(c.p), int(c.q))) / a0 ** (4 * k - 1)
            assert s[2 * k] == want

    def test_branch_form(self, a1):
        s = invert_a_of_u(a1.v, 4)
        bf = branch_form(s[2])
        assert bf.even.is_zero() and bf.odd == -1 / (u * u)
        assert bf.odd.free_of("a0")

    def test_branch_form_mixed(self):
        f = (a0 + 1) / (a0 - 1)
        bf = branch_form(f)
        assert bf.even == (u + 1) / (u - 1) and bf.odd == 2 / (u - 1)
        assert bf.to_ratfn().substitute("u", (a0 * a0).num) == f

    def test_requires_v0_zero(self):
        with pytest.raises(ValueError):
            invert_a_of_u(QSeries([a]), 2)


def test_curve_spec_lattice():
    CurveSpec(P_A1)
    with pytest.raises(ValueError):
        CurveSpec(TrigPoly(LatticeData([[2]]), {(1,): 1}))
