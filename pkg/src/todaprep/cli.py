"""
Command-line front end.

    todaprep prepotential --algebra A1 --order 4
    todaprep whittaker --algebra A2 --order 3 --kappa-scale paper
    todaprep period-check --algebra A1 --order 8
    todaprep nekrasov --n 2 --order 3
    todaprep compare --algebra A1 --n 2 --order 3
    todaprep acceptance

Exit codes: 0 success, 1 usage error, 2 a mathematical check failed.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import sympy

from .exact import PoleError, QSeries, RatFn, parse_ratfn
from .nekrasov import (calibrate_and_compare, f_inst_from_Z, nekrasov_Z, symmetry_check,
                       write_golden)
from .periods import invert_a_of_u, residue_identity_check, u_residual
from .spectral import (CheckResult, GradingError, classical_limit_check, grading_check,
                       prepotential, solve_classical, solve_stationary_quantum)
from .toda import TodaSpec, resolve_algebra
from .whittaker import (CONVENTIONS, StructureError, extract_Phi, instanton_from_whittaker,
                        solve_nonstationary, verify_b_relation)

EXIT_OK, EXIT_USAGE, EXIT_CHECK = 0, 1, 2
FORMATS = ("text", "json", "latex")


@dataclass
class Report:
    command: str
    config: dict
    series: list[tuple[str, int, RatFn]] = field(default_factory=list)
    checks: list[tuple[str, bool, str]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def add_series(self, name: str, s: QSeries) -> None:
        self.series += [(name, k, c) for k, c in enumerate(s)]

    def add_check(self, name: str, result: "CheckResult | bool", detail: str = "") -> None:
        if isinstance(result, CheckResult):
            self.checks.append((name, result.passed, result.detail))
        else:
            self.checks.append((name, bool(result), detail))

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "config": self.config,
            "series": [{"name": n, "order": k, "coefficient": str(c)} for n, k, c in self.series],
            "checks": [{"name": n, "pass": ok, "detail": d} for n, ok, d in self.checks],
        }


def to_json(report: Report) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"


def report_from_json(text: str) -> Report:
    data = json.loads(text)
    r = Report(data["command"], data["config"])
    r.series = [(s["name"], s["order"], parse_ratfn(s["coefficient"])) for s in data["series"]]
    r.checks = [(c["name"], c["pass"], c["detail"]) for c in data["checks"]]
    return r


def to_text(report: Report) -> str:
    lines = [f"# {report.command} " + " ".join(f"{k}={v}" for k, v in sorted(report.config.items()))]
    for name, k, c in report.series:
        lines.append(f"{name}[{k}] = {c}")
    for name, ok, detail in report.checks:
        lines.append(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return "\n".join(lines) + "\n"


_LATEX_NAMES = {"hbar": r"\hbar", "kappa": r"\kappa", "eps1": r"\varepsilon_1",
                "eps2": r"\varepsilon_2", "a0": "a_0", "u": "u",
                **{f"a{i}": f"a_{i}" for i in range(1, 7)}}


def latex_of(c: RatFn) -> str:
    expr = sympy.sympify(str(c).replace("^", "**"))
    names = {sympy.Symbol(k): v for k, v in _LATEX_NAMES.items()}
    return sympy.latex(expr, symbol_names=names)


def to_latex(report: Report) -> str:
    lines = [f"% {report.command}", r"\begin{align*}"]
    body = [f"{name}_{{{k}}} &= {latex_of(c)}" for name, k, c in report.series
            if not c.is_zero()]
    lines.append(" \\\\\n".join(body))
    lines.append(r"\end{align*}")
    for name, ok, detail in report.checks:
        lines.append(f"% {'PASS' if ok else 'FAIL'} {name}: {detail}")
    return "\n".join(lines) + "\n"


EMITTERS = {"text": to_text, "json": to_json, "latex": to_latex}


# -- commands ------------------------------------------------------------------

def _config(args, *keys) -> dict:
    return {"algebra" if k == "algebra_name" else k: getattr(args, k) for k in keys}


def cmd_prepotential(args) -> Report:
    spec: TodaSpec = args.algebra
    r = Report("prepotential", _config(args, "algebra_name", "order", "convention"))
    cr = solve_classical(spec, args.order)
    sr = solve_stationary_quantum(spec, args.order)
    r.add_series("v", cr.v)
    h = spec.grading_h
    try:
        F = prepotential(cr.v, h, args.convention)
    except GradingError as e:
        r.add_check("grading", False, str(e))
        return r
    r.add_series("F_inst", F)
    r.add_check("classical limit of b", classical_limit_check(sr, cr))
    r.add_check("grading", grading_check(cr.v, h))
    return r


def cmd_whittaker(args) -> Report:
    spec: TodaSpec = args.algebra
    conv = args.kappa_scale
    r = Report("whittaker", _config(args, "algebra_name", "order", "kappa_scale"))
    sr = solve_stationary_quantum(spec, args.order)
    try:
        res = extract_Phi(solve_nonstationary(spec, args.order, conv), conv)
    except StructureError as e:
        r.add_check("simple kappa pole, x-independent residue", False, str(e))
        return r
    r.add_check("simple kappa pole, x-independent residue", True,
                f"log Psi has the expected structure through order {args.order}")
    r.add_series("Phi", res.Phi)
    r.add_check("b relation", verify_b_relation(res.Phi, sr.b, conv))
    try:
        F_w = instanton_from_whittaker(res.Phi, conv)
    except PoleError as e:
        r.add_check("hbar -> 0 limit", False, str(e))
        return r
    r.add_series("F_inst", F_w)
    F_c = prepotential(solve_classical(spec, args.order).v)
    bad = [k for k in range(args.order + 1) if F_w[k] != F_c[k]]
    r.add_check("agrees with classical prepotential", not bad,
                f"first mismatch at q^{bad[0]}" if bad else f"equal through q^{args.order}")
    if args.compare_scales:
        other = "paper" if conv == "operator" else "operator"
        cross = verify_b_relation(res.Phi, sr.b, other)
        alt = extract_Phi(solve_nonstationary(spec, args.order, other), other).Phi
        op, pa = (res.Phi, alt) if conv == "operator" else (alt, res.Phi)
        hbar = RatFn.var("hbar")
        ok = all(op[k] == pa[k] * hbar for k in range(args.order + 1))
        note = "fails as expected" if not cross.passed else "holds"
        r.add_check("Phi_operator = hbar * Phi_paper", ok,
                    f"the {other}-scale b relation applied to this Phi {note}"
                    + (f" (order {cross.first_failure})" if not cross.passed else ""))
    return r


def cmd_period_check(args) -> Report:
    spec = args.algebra.uniform()
    if spec.rank != 1:
        raise UsageError("period-check needs a rank-one algebra")
    r = Report("period-check", _config(args, "algebra_name", "order", "perturb"))
    v = solve_classical(spec, args.order).v
    if args.perturb is not None:
        k = args.perturb
        if not 1 <= k <= args.order:
            raise UsageError("--perturb must lie between 1 and --order")
        v = QSeries([c + 1 if i == k else c for i, c in enumerate(v)])
    P = _as_line(spec)
    r.add_check("contour integral of z dw/w equals a", residue_identity_check(v, P, args.order))
    a = invert_a_of_u(v, args.order)
    r.add_series("a_of_u", a)
    resid = u_residual(a, v)
    bad = [k for k, c in enumerate(resid) if not c.is_zero()]
    r.add_check("a(u)^2 + v(a(u)) = u", not bad,
                f"first failure at q^{bad[0]}" if bad else f"exact through q^{args.order}")
    return r


def _as_line(spec: TodaSpec):
    from .periods import laurent
    if spec.lattice.gram[0][0] != 1:
        raise UsageError("period-check expects the normalisation <e, e> = 1")
    return laurent({w[0]: c for w, c in spec.potential().terms.items()})


def cmd_nekrasov(args) -> Report:
    r = Report("nekrasov", _config(args, "n", "order"))
    Z = nekrasov_Z(args.n, args.order)
    if args.with_z:
        r.add_series("Z", Z)
    ok, detail = symmetry_check(Z, args.n)
    r.add_check("symmetry", ok, detail)
    try:
        F = f_inst_from_Z(Z)
    except PoleError as e:
        r.add_check("eps1 eps2 log Z regular at eps = 0", False, str(e))
        return r
    r.add_check("eps1 eps2 log Z regular at eps = 0", True, f"through Q^{args.order}")
    r.add_series("F_inst", F)
    if args.golden:
        write_golden(args.golden, args.n, args.order)
    return r


def cmd_compare(args) -> Report:
    spec = args.algebra
    if spec.rank != 1 or args.n != 2:
        raise UsageError("compare supports rank-one Toda against the n = 2 oracle")
    h = spec.grading_h
    r = Report("compare", _config(args, "algebra_name", "n", "order", "real_only"))
    F_t = prepotential(solve_classical(spec, args.order * h).v)
    F_z = f_inst_from_Z(nekrasov_Z(args.n, args.order))
    rep = calibrate_and_compare(F_t, F_z, args.order, h=h, imaginary=not args.real_only)
    r.add_series("F_oracle", F_z)
    r.add_check("Toda prepotential matches the instanton limit", rep.passed, rep.summary())
    return r


def cmd_acceptance(args) -> Report:
    from .acceptance import run_all
    r = Report("acceptance", {})
    for res in run_all():
        r.add_check(f"criterion {res.number}: {res.title}", res.passed,
                    f"{res.detail} [{res.seconds:.2f}s, limit {res.limit}s]")
    return r


COMMANDS = {
    "prepotential": cmd_prepotential,
    "whittaker": cmd_whittaker,
    "period-check": cmd_period_check,
    "nekrasov": cmd_nekrasov,
    "compare": cmd_compare,
    "acceptance": cmd_acceptance,
}


# -- parsing -------------------------------------------------------------------

class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _order(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"order must be an integer, got {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError("order must be >= 0")
    return n


def _algebra(text: str):
    try:
        return text, resolve_algebra(text)
    except KeyError as e:
        raise argparse.ArgumentTypeError(e.args[0]) from None
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"bad algebra file {text}: {e}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="todaprep", description="Toda prepotentials and instanton-counting checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, algebra=True, default_algebra="A1"):
        if algebra:
            sp.add_argument("--algebra", type=_algebra, default=default_algebra,
                            help="preset (A1, A2, A3) or path of an algebra file")
        sp.add_argument("--order", type=_order, default=4, help="truncation order")
        sp.add_argument("--format", choices=FORMATS, default="text")
        sp.add_argument("--output", type=Path, help="write the report here instead of stdout")

    sp = sub.add_parser("prepotential", help="v and the instanton prepotential")
    common(sp)
    sp.add_argument("--convention", choices=("q", "Q"), default="q")

    sp = sub.add_parser("whittaker", help="non-stationary route to the prepotential")
    common(sp)
    sp.add_argument("--kappa-scale", choices=CONVENTIONS, default="operator")
    sp.add_argument("--compare-scales", action="store_true",
                    help="also relate Phi across the two kappa scales")

    sp = sub.add_parser("period-check", help="rank-one contour identity and a(u)")
    common(sp)
    sp.add_argument("--perturb", type=int, help="add 1 to v at this order")

    sp = sub.add_parser("nekrasov", help="instanton partition function oracle")
    common(sp, algebra=False)
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--with-z", action="store_true", help="also print Z itself")
    sp.add_argument("--golden", type=Path, help="write a golden file")

    sp = sub.add_parser("compare", help="calibrate Toda against the oracle")
    common(sp)
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--real-only", action="store_true",
                    help="restrict the variable map to real scales 1, 1/2, 2")

    sp = sub.add_parser("acceptance", help="run the acceptance criteria")
    sp.add_argument("--format", choices=FORMATS, default="text")
    sp.add_argument("--output", type=Path)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "algebra"):
        args.algebra_name, args.algebra = args.algebra
    if getattr(args, "n", 1) < 1:
        parser.error("--n must be >= 1")
    try:
        report = COMMANDS[args.command](args)
    except UsageError as e:
        parser.error(str(e))
    text = EMITTERS[args.format](report)
    if args.output:
        args.output.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report.passed else EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
