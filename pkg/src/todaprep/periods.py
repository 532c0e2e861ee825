"""
Rank-one period identities for ``z^2 + q P(w) = u``.

With ``w = e^x`` the classical momentum is

    dphi/dx = -a + sqrt(a^2 + v - q P(w)),

the branch being the one equal to 0 at ``q = 0``.  Since ``phi`` is a
trigonometric polynomial, its derivative has no ``w^0`` term, i.e. the
contour integral of ``z dw/w`` over the unit circle returns ``a``.  Every
q-order of the integrand is a Laurent polynomial in ``w``, so the contour
integral is the exact ``w^0`` coefficient.

``a`` is the variable ``a1``; the branch point ``a0`` of ``a(u, q)`` obeys
``a0^2 = u``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .exact import CTX, QSeries, RatFn, ZERO, series_sqrt, var
from .lattice import LatticeData, TrigPoly, constant_term
from .spectral import CheckResult

LINE = LatticeData([[1]])


def laurent(coeffs: dict[int, object]) -> TrigPoly:
    """Laurent polynomial ``sum c_k w^k`` as a rank-one trigonometric polynomial."""
    return TrigPoly(LINE, {(k,): c for k, c in coeffs.items()})


@dataclass(frozen=True)
class CurveSpec:
    P: TrigPoly

    def __post_init__(self):
        if self.P.lattice != LINE:
            raise ValueError("P must be a Laurent polynomial in w (rank-one lattice, <1,1> = 1)")


def _a() -> RatFn:
    return RatFn.var("a1")


def momentum_sqrt(v: QSeries, P: TrigPoly, order: int) -> QSeries:
    """``sqrt(a^2 + v - q P(w))`` on the branch ``a + O(q)``."""
    if not v[0].is_zero():
        raise ValueError("v must vanish at q = 0")
    a = _a()
    inv_a2 = RatFn(1) / (a * a)
    n = min(order, v.order)
    one = TrigPoly.constant(LINE, 1)
    terms = [one]
    for k in range(1, n + 1):
        t = TrigPoly.constant(LINE, v[k] * inv_a2)
        if k == 1:
            t = t - P * inv_a2
        terms.append(t)
    return series_sqrt(QSeries(terms)).map(lambda c: c * a)


def classical_momentum(v: QSeries, P: TrigPoly, order: int) -> QSeries:
    """``dphi/dx = sqrt(a^2 + v - qP) - a`` as a q-series of Laurent polynomials."""
    s = momentum_sqrt(v, P, order)
    a = _a()
    return QSeries([s[0] - TrigPoly.constant(LINE, a), *s.coeffs[1:]])


def residue_identity_check(v: QSeries, P: TrigPoly, order: int) -> CheckResult:
    """The ``w^0`` coefficient of ``sqrt(a^2 + v - qP)`` is ``a`` at q^0 and 0 after."""
    s = momentum_sqrt(v, P, order)
    a = _a()
    for k, c in enumerate(s):
        want = a if k == 0 else ZERO
        got = constant_term(c)
        if got != want:
            return CheckResult(False, k, f"order {k}: residue {got}, expected {want}")
    return CheckResult(True, None, f"contour integral of z dw/w equals a through order {s.order}")


# -- a as a function of u ------------------------------------------------------

def compose_series(f: RatFn, name: str, s: QSeries) -> QSeries:
    """``f(name = s(q))`` by Taylor expansion about the free term ``s_0``."""
    s0 = s[0]
    if not s0.is_polynomial():
        raise ValueError("expansion point must be polynomial")
    delta = QSeries([ZERO, *s.coeffs[1:]])
    out = QSeries.zeros(ZERO, s.order)
    power = QSeries([RatFn(1)] + [ZERO] * s.order)
    deriv = f
    for j in range(s.order + 1):
        if j:
            power = power * delta
            deriv = deriv.derivative(name)
        if deriv.is_zero():
            break
        coeff = deriv.substitute(name, s0.num) * Fraction(1, factorial(j))
        out = out + power * coeff
    return out


def _v_at(v: QSeries, a_series: QSeries) -> QSeries:
    """``sum_m v_m(a(q)) q^m`` truncated at the order of ``a_series``."""
    n = a_series.order
    total = QSeries.zeros(ZERO, n)
    for m in range(1, min(n, v.order) + 1):
        if v[m].is_zero():
            continue
        inner = compose_series(v[m], "a1", a_series.truncate(n - m))
        total = total + QSeries([ZERO] * m + list(inner.coeffs))
    return total


def invert_a_of_u(v: QSeries, order: int) -> QSeries:
    """Series ``a(u, q) = a0 + a_1 q + ...`` solving ``u = a^2 + v(a, q)``, ``a0^2 = u``.

    Coefficients are rational functions of ``a0``; see :func:`branch_form` for
    the presentation with ``a0^2`` rewritten as ``u``.
    """
    if not v[0].is_zero():
        raise ValueError("v must vanish at q = 0")
    n = min(order, v.order)
    a0 = RatFn.var("a0")
    coeffs = [a0] + [ZERO] * n
    for k in range(1, n + 1):
        trial = QSeries(coeffs[: k + 1])
        resid = (trial * trial + _v_at(v, trial))[k]
        coeffs[k] = -resid / (a0 * 2)
    return QSeries(coeffs)


def u_residual(a_series: QSeries, v: QSeries) -> QSeries:
    """``a(u,q)^2 + v(a(u,q), q) - u`` with ``u = a0^2``; zero for a true inverse."""
    a0 = RatFn.var("a0")
    s = a_series * a_series + _v_at(v, a_series)
    return QSeries([s[0] - a0 * a0, *s.coeffs[1:]])


@dataclass(frozen=True)
class BranchForm:
    """``even + a0 * odd`` with ``even``, ``odd`` free of ``a0`` (uses ``a0^2 = u``)."""

    even: RatFn
    odd: RatFn

    def to_ratfn(self) -> RatFn:
        return self.even + RatFn.var("a0") * self.odd

    def __str__(self) -> str:
        return f"{self.even} + a0*({self.odd})"


_A0 = CTX.variable_to_index("a0")
_U = CTX.variable_to_index("u")


def _parity_split(p):
    even, odd = {}, {}
    for exps, c in p.terms():
        e = list(exps)
        k = e[_A0]
        e[_A0] = 0
        e[_U] += k // 2
        (odd if k % 2 else even)[tuple(e)] = c
    return CTX.from_dict(even), CTX.from_dict(odd)


def branch_form(f: RatFn) -> BranchForm:
    """Rewrite a rational function of ``a0`` using ``a0^2 = u``."""
    n0, n1 = _parity_split(f.num)
    d0, d1 = _parity_split(f.den)
    u = var("u")
    den = d0 * d0 - u * d1 * d1
    if den.is_zero():
        raise ZeroDivisionError(f"denominator of {f} vanishes on the branch a0^2 = u")
    return BranchForm(RatFn(n0 * d0 - u * n1 * d1, den), RatFn(n1 * d0 - n0 * d1, den))
