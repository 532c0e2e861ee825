import pytest

from todaprep.exact import QSeries, RatFn
from todaprep.lattice import TrigPoly
from todaprep.spectral import prepotential, solve_classical, solve_stationary_quantum
from todaprep.toda import preset
from todaprep.whittaker import (StructureError, extract_Phi, instanton_from_whittaker,
                                nonstationary_residual, solve_nonstationary, verify_b_relation,
                                whittaker_pipeline)

a, h, k = RatFn.var("a1"), RatFn.var("hbar"), RatFn.var("kappa")


@pytest.mark.parametrize("conv", ["operator", "paper"])
@pytest.mark.parametrize("name,n", [("A1", 5), ("A2", 4)])
def test_relations(name, n, conv):
    spec = preset(name)
    Psi = solve_nonstationary(spec, n, conv)
    assert all(r.is_zero() for r in nonstationary_residual(Psi, spec, conv))
    res = extract_Phi(Psi, conv)
    assert verify_b_relation(res.Phi, solve_stationary_quantum(spec, n).b, conv)
    assert instanton_from_whittaker(res.Phi, conv) == prepotential(solve_classical(spec, n).v)


def test_scale_relation():
    op = whittaker_pipeline(preset("A1"), 4, "operator").Phi
    pa = whittaker_pipeline(preset("A1"), 4, "paper").Phi
    assert all(op[n] == pa[n] * h for n in range(5))
    assert op[2] == 4 / (4 * a * a - h * h)


def test_wrong_scale_fails():
    spec = preset("A1")
    Phi = whittaker_pipeline(spec, 2, "operator").Phi
    res = verify_b_relation(Phi, solve_stationary_quantum(spec, 2).b, "paper")
    assert not res and res.first_failure == 2


def test_order_zero():
    res = whittaker_pipeline(preset("A1"), 0)
    assert res.Phi == QSeries([RatFn(0)])


def test_regular_part_has_no_pole():
    from todaprep.exact import substitute
    res = whittaker_pipeline(preset("A1"), 3)
    for g in res.g_regular:
        for _, c in g.items():
            substitute(c, "kappa", 0)


def _tp(d):
    from conftest import LINE
    return TrigPoly(LINE, d)


def test_double_pole_detected():
    Psi = QSeries([_tp({(0,): 1}), _tp({(0,): 1 / (k * k)})])
    with pytest.raises(StructureError, match="order 2"):
        extract_Phi(Psi)


def test_x_dependent_residue_detected():
    Psi = QSeries([_tp({(0,): 1}), _tp({(1,): 1 / k})])
    with pytest.raises(StructureError, match="depends on x"):
        extract_Phi(Psi)


def test_bad_convention():
    with pytest.raises(ValueError):
        solve_nonstationary(preset("A1"), 2, "other")
