from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from todaprep.exact import QSeries, RatFn, ZERO, parse_ratfn, series_qdq
from todaprep.lattice import TrigPoly
from todaprep.spectral import (FullPrepotential, GradingError, classical_limit_check,
                               classical_residual, eigen_residual, full_prepotential,
                               grading_check, log_residual, phi_from_psi, prepotential,
                               psi_from_phi, solve_classical, solve_log_quantum,
                               solve_stationary_quantum, u_series)
from todaprep.toda import custom_spec, preset

a, h = RatFn.var("a1"), RatFn.var("hbar")

A1_V = {2: "2/a1^2", 4: "(5/2)/a1^6", 6: "9/a1^10", 8: "(1469/32)/a1^14"}


@pytest.fixture(scope="module")
def a1_quantum():
    return solve_stationary_quantum(preset("A1"), 8)


@pytest.fixture(scope="module")
def a1_classical():
    return solve_classical(preset("A1"), 8)


def test_b2_golden(a1_quantum):
    assert a1_quantum.b[2] == 8 / (4 * a * a - h * h)
    assert a1_quantum.b[1] == ZERO


def test_psi1(a1_quantum):
    lat = a1_quantum.spec.lattice
    want = TrigPoly(lat, {(1,): -2 / (h * h + 2 * h * a), (-1,): -2 / (h * h - 2 * h * a)})
    assert a1_quantum.psi[1] == want


def test_psi_has_no_constant_term(a1_quantum):
    for n in range(1, 9):
        assert a1_quantum.psi[n][(0,)].is_zero()


@pytest.mark.parametrize("name,n", [("A1", 8), ("A2", 5), ("A3", 3)])
def test_eigen_residual_vanishes(name, n):
    sr = solve_stationary_quantum(preset(name), n)
    assert all(r.is_zero() for r in eigen_residual(sr))


def test_classical_values(a1_classical):
    for m, text in A1_V.items():
        assert a1_classical.v[m] == parse_ratfn(text)
    assert all(r.is_zero() for r in classical_residual(a1_classical))


@pytest.mark.parametrize("name,n", [("A1", 6), ("A2", 4)])
def test_log_route_agrees(name, n):
    spec = preset(name)
    phi, b = solve_log_quantum(spec, n)
    sr = solve_stationary_quantum(spec, n)
    assert b == sr.b
    assert all(r.is_zero() for r in log_residual(phi, b, spec))
    # hbar log psi differs from phi only by an x-independent series
    other = phi_from_psi(sr.psi)
    for m in range(n + 1):
        assert _drop_constant(other[m]) == phi[m]
    back = psi_from_phi(phi)
    assert all(r.is_zero() for r in eigen_residual(type(sr)(back, sr.b, sr.spec, n)))


def _drop_constant(f):
    zero = (0,) * f.lattice.rank
    return TrigPoly(f.lattice, {w: c for w, c in f.items() if w != zero})


@pytest.mark.parametrize("name,n", [("A1", 8), ("A2", 6)])
def test_classical_limit(name, n):
    assert classical_limit_check(solve_stationary_quantum(preset(name), n))


def test_classical_limit_detects_mismatch(a1_quantum, a1_classical):
    v = a1_classical.v
    broken = type(a1_classical)(a1_classical.phi, QSeries([c + (1 if k == 4 else 0)
                                                           for k, c in enumerate(v)]),
                                a1_classical.spec, a1_classical.order)
    res = classical_limit_check(a1_quantum, broken)
    assert not res and res.first_failure == 4


def test_classical_limit_matches_phi_limit(a1_quantum):
    # hbar -> 0 of hbar log psi is the classical phi, away from the constant term
    from todaprep.exact import substitute
    phi_q = phi_from_psi(a1_quantum.psi)
    phi_c = solve_classical(preset("A1"), 8).phi
    for n in range(9):
        for w, c in _drop_constant(phi_q[n]).items():
            assert substitute(c, "hbar", 0) == phi_c[n][w]


class TestGrading:
    @pytest.mark.parametrize("name,n", [("A1", 8), ("A2", 6), ("A3", 8)])
    def test_presets(self, name, n):
        spec = preset(name)
        assert grading_check(solve_classical(spec, n).v, spec.grading_h)

    def test_violation(self):
        v = QSeries([ZERO, ZERO, a, a])
        res = grading_check(v, 2)
        assert not res and res.first_failure == 3

    def test_ungraded_potential(self):
        spec = custom_spec([[1]], [((1,), 1, 1), ((-1,), 1, 1), ((2,), 1, 1)])
        v = solve_classical(spec, 4).v
        assert not v[3].is_zero()


class TestPrepotential:
    def test_q_convention(self, a1_classical):
        F = prepotential(a1_classical.v)
        assert F[2] == 1 / (a * a)
        assert series_qdq(F) == a1_classical.v

    def test_Q_convention(self, a1_classical):
        F = prepotential(a1_classical.v, 2, "Q")
        assert F[1] == 2 / (a * a)
        assert F[2] == parse_ratfn("(5/4)/a1^6")
        assert F.order == 4

    def test_grading_error(self):
        with pytest.raises(GradingError):
            prepotential(QSeries([ZERO, a, ZERO]), 2, "Q")

    def test_order_zero(self):
        assert prepotential(solve_classical(preset("A1"), 0).v) == QSeries([ZERO])

    def test_bad_convention(self, a1_classical):
        with pytest.raises(ValueError):
            prepotential(a1_classical.v, 2, "x")

    def test_full_euler(self, a1_classical):
        spec = preset("A1")
        v = a1_classical.v
        norm = spec.lattice.a_norm()
        full = full_prepotential(prepotential(v), norm)
        assert full.euler() == u_series(v, norm)
        fq = FullPrepotential(norm, prepotential(v, 2, "Q"), "Q", 2)
        u = u_series(v, norm)
        assert fq.euler() == QSeries([u[2 * k] for k in range(5)])
        assert fq.euler("q") == QSeries([u[2 * k] * 2 for k in range(5)])

    def test_a2_renormalisation(self):
        v = solve_classical(preset("A2"), 6).v
        assert series_qdq(prepotential(v)) == v


def test_negative_order():
    with pytest.raises(ValueError):
        solve_stationary_quantum(preset("A1"), -1)


@given(st.fractions(min_value=1, max_value=4, max_denominator=3))
def test_coefficient_scaling(c):
    # v_m is homogeneous of degree m in the potential coefficient
    v = solve_classical(preset("A1", c), 4).v
    base = solve_classical(preset("A1"), 4).v
    for m in (2, 4):
        assert v[m] == base[m] * (Fraction(c) / 2) ** m
