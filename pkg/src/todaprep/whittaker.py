"""
Non-stationary equation ``(T^a - kappa q d/dq) Psi = 0`` and its kappa -> 0 asymptotics.

The q^n equation ``D_n Psi_n = -U Psi_{n-1}`` with
``D_n = hbar^2 Lap + 2 hbar <grad, a> - n kappa`` is solved by one diagonal
inversion per order.  ``log Psi`` then has at most a simple pole at
``kappa = 0`` in every q-order, with an ``x``-independent residue ``Phi``.

Two scalings of ``kappa`` are supported.  ``"operator"`` uses the operator
exactly as written above; then ``q dPhi/dq = b`` and ``F_inst = Phi|hbar=0``.
``"paper"`` replaces ``kappa`` by ``hbar*kappa``; then ``hbar q dPhi/dq = b``
and ``F_inst = (hbar Phi)|hbar=0``.  The two residues are related by
``Phi_operator = hbar * Phi_paper``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .exact import (ExcessPoleError, PoleError, QSeries, RatFn, ZERO, laurent_at_kappa,
                    series_log, series_qdq, substitute)
from .lattice import TrigPoly, apply_D, invert_D
from .spectral import CheckResult
from .toda import TodaSpec

CONVENTIONS = ("operator", "paper")


class StructureError(ArithmeticError):
    """``log Psi`` violates the simple-pole / x-independence structure."""


@dataclass(frozen=True)
class WhittakerResult:
    Psi: QSeries        # TrigPoly over Q(a, hbar, kappa)
    Phi: QSeries        # RatFn over Q(a, hbar)
    g_regular: QSeries  # TrigPoly, kappa-regular part of log Psi
    kappa_convention: str


def _check_convention(c: str) -> bool:
    if c not in CONVENTIONS:
        raise ValueError(f"kappa convention must be one of {CONVENTIONS}, got {c!r}")
    return c == "paper"


def solve_nonstationary(spec: TodaSpec, order: int, kappa_convention: str = "operator") -> QSeries:
    """Unique ``Psi = 1 + O(q)``; ``Psi_n = D_n^{-1}(-U Psi_{n-1})``."""
    paper = _check_convention(kappa_convention)
    spec = spec.uniform()
    U = spec.potential()
    psi = [TrigPoly.constant(spec.lattice, 1)]
    for n in range(1, order + 1):
        psi.append(invert_D(-(U * psi[n - 1]), n, paper_scale=paper))
    return QSeries(psi)


def nonstationary_residual(Psi: QSeries, spec: TodaSpec, kappa_convention: str = "operator") -> QSeries:
    """``(hbar^2 Lap + 2 hbar <grad,a> + q U - kappa q d/dq) Psi`` per order."""
    paper = _check_convention(kappa_convention)
    spec = spec.uniform()
    U = spec.potential()
    k = RatFn.var("kappa") * (RatFn.var("hbar") if paper else 1)
    out = []
    for n in range(Psi.order + 1):
        r = apply_D(Psi[n], 0) - Psi[n] * (k * n)
        if n:
            r = r + U * Psi[n - 1]
        out.append(r)
    return QSeries(out)


def extract_Phi(Psi: QSeries, kappa_convention: str = "operator") -> WhittakerResult:
    """Split ``log Psi`` into ``Phi / kappa`` plus a kappa-regular remainder.

    Raises :class:`StructureError` if some q-order has a pole of order > 1
    at ``kappa = 0`` or a residue depending on ``x``.
    """
    _check_convention(kappa_convention)
    if not Psi[0] == Psi[0].one_like():
        raise ValueError("Psi must start with 1")
    F = series_log(Psi)
    zero = (0,) * Psi[0].lattice.rank
    Phi, g = [], []
    for n, Fn in enumerate(F):
        residue, regular = {}, {}
        for mu, c in Fn.terms.items():
            try:
                split = laurent_at_kappa(c, 1)
            except ExcessPoleError as e:
                raise StructureError(
                    f"q^{n} coefficient of log Psi at weight {mu} has a kappa-pole "
                    f"of order {e.order}") from e
            if not split.principal[0].is_zero():
                residue[mu] = split.principal[0]
            if not split.regular.is_zero():
                regular[mu] = split.regular
        stray = [mu for mu in residue if mu != zero]
        if stray:
            raise StructureError(f"q^{n} kappa-residue depends on x (weights {stray})")
        Phi.append(residue.get(zero, ZERO))
        g.append(TrigPoly(Fn.lattice, regular))
    return WhittakerResult(Psi, QSeries(Phi), QSeries(g), kappa_convention)


def verify_b_relation(Phi: QSeries, b: QSeries, kappa_convention: str = "operator") -> CheckResult:
    """``q dPhi/dq = b`` (operator scale) or ``hbar q dPhi/dq = b`` (paper scale)."""
    paper = _check_convention(kappa_convention)
    lhs = series_qdq(Phi)
    if paper:
        h = RatFn.var("hbar")
        lhs = lhs.map(lambda c: c * h)
    n = min(lhs.order, b.order)
    for m in range(n + 1):
        if lhs[m] != b[m]:
            return CheckResult(False, m, f"order {m}: {lhs[m]} != {b[m]}")
    return CheckResult(True, None, f"{'hbar ' if paper else ''}q dPhi/dq = b through order {n}")


def instanton_from_whittaker(Phi: QSeries, kappa_convention: str = "operator") -> QSeries:
    """``Phi|hbar=0`` (operator scale) or ``(hbar Phi)|hbar=0`` (paper scale)."""
    paper = _check_convention(kappa_convention)
    h = RatFn.var("hbar")
    out = []
    for n, c in enumerate(Phi):
        try:
            out.append(substitute(c * h if paper else c, "hbar", 0))
        except PoleError as e:
            raise PoleError(f"order {n}: {e}", e.factor) from e
    return QSeries(out)


def whittaker_pipeline(spec: TodaSpec, order: int, kappa_convention: str = "operator") -> WhittakerResult:
    return extract_Phi(solve_nonstationary(spec, order, kappa_convention), kappa_convention)
