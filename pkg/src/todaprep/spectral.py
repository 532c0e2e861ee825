"""
Stationary eigenproblem ``T^a psi = b psi`` for a uniform-q Toda potential.

``T^a = hbar^2 Lap + 2 hbar <grad, a> + q U``.  Writing ``psi = sum psi_n q^n``
the q^n equation reads

    D psi_n = -U psi_{n-1} + sum_{i<n} b_{n-i} psi_i,    D = hbar^2 Lap + 2 hbar <grad, a>,

and ``b_n`` is the unique value killing the constant term of the right-hand
side.  Three routes are provided: the direct (quantum) recursion, the same
problem for ``phi = hbar log psi`` and the ``hbar -> 0`` (classical)
recursion for the limit of ``phi``.  The prepotential is assembled from the
classical eigenvalue ``v``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import (ONE, ZERO, PoleError, QSeries, RatFn, series_exp, series_log,
                    series_qdq, substitute)
from .lattice import (TrigPoly, apply_D, constant_term, gradient_pairing, invert_D,
                      invert_transport, laplacian, a_drift)
from .toda import TodaSpec


@dataclass(frozen=True)
class StationaryResult:
    psi: QSeries  # of TrigPoly over Q(a, hbar)
    b: QSeries    # of RatFn
    spec: TodaSpec
    order: int


@dataclass(frozen=True)
class ClassicalResult:
    phi: QSeries  # limit of hbar*log(psi)
    v: QSeries
    spec: TodaSpec
    order: int


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    first_failure: "int | None" = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.passed


def _zero_tp(spec: TodaSpec) -> TrigPoly:
    return TrigPoly(spec.lattice)


def _without_constant(f: TrigPoly) -> tuple[TrigPoly, RatFn]:
    zero = (0,) * f.lattice.rank
    c = f.terms.get(zero, ZERO)
    if c.is_zero():
        return f, c
    rest = {mu: x for mu, x in f.terms.items() if mu != zero}
    return TrigPoly(f.lattice, rest), c


def solve_stationary_quantum(spec: TodaSpec, order: int) -> StationaryResult:
    if order < 0:
        raise ValueError("order must be non-negative")
    spec = spec.uniform()
    U = spec.potential()
    lat = spec.lattice
    psi = [TrigPoly.constant(lat, 1)]
    b = [ZERO]
    for n in range(1, order + 1):
        rhs = -(U * psi[n - 1])
        for i in range(1, n):
            if not b[n - i].is_zero():
                rhs = rhs + psi[i] * b[n - i]
        rhs, ct = _without_constant(rhs)
        b.append(-ct)
        psi.append(invert_D(rhs, 0))
    return StationaryResult(QSeries(psi), QSeries(b), spec, order)


def solve_log_quantum(spec: TodaSpec, order: int) -> tuple[QSeries, QSeries]:
    """``phi = hbar log psi`` and ``b`` from the log-derivative recursion.

    ``hbar Lap phi_n + 2 <a, grad phi_n> = b_n - [n=1] U - sum <grad phi_i, grad phi_{n-i}>``;
    the operator on the left is ``D / hbar``.
    """
    spec = spec.uniform()
    U = spec.potential()
    lat = spec.lattice
    hbar = RatFn.var("hbar")
    phi = [_zero_tp(spec)]
    b = [ZERO]
    for n in range(1, order + 1):
        rhs = -U if n == 1 else _zero_tp(spec)
        for i in range(1, n):
            rhs = rhs - gradient_pairing(phi[i], phi[n - i])
        rhs, ct = _without_constant(rhs)
        b.append(-ct)
        phi.append(invert_D(rhs, 0) * hbar)
    return QSeries(phi), QSeries(b)


def solve_classical(spec: TodaSpec, order: int) -> ClassicalResult:
    """``2 <a, grad phi_n> + sum_{0<i<n} <grad phi_i, grad phi_{n-i}> = v_n - [n=1] U``."""
    spec = spec.uniform()
    U = spec.potential()
    phi = [_zero_tp(spec)]
    v = [ZERO]
    for n in range(1, order + 1):
        rhs = -U if n == 1 else _zero_tp(spec)
        for i in range(1, n):
            rhs = rhs - gradient_pairing(phi[i], phi[n - i])
        rhs, ct = _without_constant(rhs)
        v.append(-ct)
        phi.append(invert_transport(rhs))
    return ClassicalResult(QSeries(phi), QSeries(v), spec, order)


def eigen_residual(sr: StationaryResult) -> QSeries:
    """``(T^a - b) psi`` order by order; identically zero for a true solution."""
    U = sr.spec.potential()
    psi, b = sr.psi, sr.b
    out = []
    for n in range(sr.order + 1):
        r = apply_D(psi[n], 0)
        if n:
            r = r + U * psi[n - 1]
        for i in range(n):
            if not b[n - i].is_zero():
                r = r - psi[i] * b[n - i]
        out.append(r)
    return QSeries(out)


def classical_residual(cr: ClassicalResult) -> QSeries:
    """``<grad phi, grad phi> + 2 <a, grad phi> + q U - v`` order by order."""
    U = cr.spec.potential()
    phi, v = cr.phi, cr.v
    out = []
    for n in range(cr.order + 1):
        r = a_drift(phi[n]) * 2
        for i in range(1, n):
            r = r + gradient_pairing(phi[i], phi[n - i])
        if n == 1:
            r = r + U
        r = r - TrigPoly.constant(cr.spec.lattice, v[n])
        out.append(r)
    return QSeries(out)


def log_residual(phi: QSeries, b: QSeries, spec: TodaSpec) -> QSeries:
    """``<grad phi, grad phi> + hbar Lap phi + 2 <a, grad phi> + q U - b``."""
    spec = spec.uniform()
    U = spec.potential()
    hbar = RatFn.var("hbar")
    out = []
    for n in range(phi.order + 1):
        r = laplacian(phi[n]) * hbar + a_drift(phi[n]) * 2
        for i in range(1, n):
            r = r + gradient_pairing(phi[i], phi[n - i])
        if n == 1:
            r = r + U
        r = r - TrigPoly.constant(spec.lattice, b[n])
        out.append(r)
    return QSeries(out)


def psi_from_phi(phi: QSeries) -> QSeries:
    """``exp(phi / hbar)`` as a q-series."""
    inv = ONE / RatFn.var("hbar")
    return series_exp(phi.map(lambda c: c * inv))


def phi_from_psi(psi: QSeries) -> QSeries:
    hbar = RatFn.var("hbar")
    return series_log(psi).map(lambda c: c * hbar)


def classical_limit_check(sr: StationaryResult, cr: "ClassicalResult | None" = None) -> CheckResult:
    """``b`` is regular at ``hbar = 0`` and its value there is ``v``."""
    if cr is None:
        cr = solve_classical(sr.spec, sr.order)
    for n in range(sr.order + 1):
        try:
            lim = substitute(sr.b[n], "hbar", 0)
        except PoleError as e:
            return CheckResult(False, n, f"b_{n} has a pole at hbar = 0: {e}")
        if lim != cr.v[n]:
            return CheckResult(False, n, f"b_{n}|hbar=0 = {lim} but v_{n} = {cr.v[n]}")
    return CheckResult(True, None, f"lim b = v through order {sr.order}")


def grading_check(v: QSeries, h: int) -> CheckResult:
    """``v_m == 0`` unless ``h`` divides ``m``."""
    for m, c in enumerate(v):
        if m % h and not c.is_zero():
            return CheckResult(False, m, f"v_{m} = {c} is nonzero but {h} does not divide {m}")
    return CheckResult(True, None, f"v supported on multiples of {h} through order {v.order}")


class GradingError(ValueError):
    pass


def prepotential(v: QSeries, h: int = 1, convention: str = "q") -> QSeries:
    """Instanton prepotential with ``Q dF/dQ = v``.

    ``convention="q"`` returns ``F_m = v_m / m`` in powers of ``q``;
    ``convention="Q"`` re-expresses it in ``Q = q**h``, where the coefficient
    of ``Q**k`` is ``h * v_{kh} / (kh) = v_{kh} / k``.
    """
    if not v[0].is_zero():
        raise ValueError("v must vanish at q = 0")
    if convention == "q":
        return QSeries([ZERO] + [v[m] * Fraction(1, m) for m in range(1, v.order + 1)])
    if convention != "Q":
        raise ValueError(f"unknown convention {convention!r}")
    bad = grading_check(v, h)
    if not bad:
        raise GradingError(f"grading violation: {bad.detail}")
    return QSeries([ZERO] + [v[k * h] * Fraction(1, k) for k in range(1, v.order // h + 1)])


@dataclass(frozen=True)
class FullPrepotential:
    """``log_coefficient * ln(Q) + instanton`` as a formal pair."""

    log_coefficient: RatFn
    instanton: QSeries
    convention: str = "q"
    h: int = 1

    def euler(self, variable: "str | None" = None) -> QSeries:
        """Apply ``X d/dX`` for ``X`` = ``q`` or ``Q``, returned in the pair's own variable.

        In its own variable this is ``u = <a,a> + v``; applying ``q d/dq`` to a
        pair written in ``Q = q**h`` multiplies by ``h``.
        """
        variable = variable or self.convention
        s = series_qdq(self.instanton)
        s = QSeries([s[0] + self.log_coefficient, *s.coeffs[1:]])
        if variable == self.convention:
            return s
        if self.convention == "Q" and variable == "q":
            return s * self.h
        if self.convention == "q" and variable == "Q":
            return s * Fraction(1, self.h)
        raise ValueError(f"unknown variable {variable!r}")


def full_prepotential(F_inst: QSeries, a_norm: RatFn, convention: str = "q", h: int = 1) -> FullPrepotential:
    return FullPrepotential(a_norm, F_inst, convention, h)


def u_series(v: QSeries, a_norm: RatFn) -> QSeries:
    return QSeries([v[0] + a_norm, *v.coeffs[1:]])
