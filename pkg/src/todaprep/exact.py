"""
Exact rational functions and truncated power series.

All symbolic quantities of the package live in one polynomial ring over the
rationals whose generators are fixed once and for all (``VARIABLES``).  The
heavy lifting (multiplication, exact division, multivariate gcd) is delegated
to FLINT through ``python-flint``; this module adds the canonical reduced
fraction type :class:`RatFn`, the truncated series type :class:`QSeries`
and the handful of formal operations the solvers need (log/exp/sqrt of a
series, the Euler operator ``q d/dq``, Laurent splitting at a variable).

Monomials are ordered graded-lexicographically with
``a1 < a2 < ... < hbar < kappa``; this fixes both the normalisation of
denominators and the printed form of every coefficient.
"""
from __future__ import annotations

import ast
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Callable, Iterable, NamedTuple, Sequence, Union

import flint

__all__ = [
    "ZERO", "ONE",
    "VARIABLES", "CTX", "MPoly", "Rat", "RatFn", "QSeries",
    "PoleError", "ExcessPoleError", "SeriesDomainError",
    "var", "poly", "mpoly_gcd", "ratfn_arith", "rsum", "substitute",
    "series_compose", "series_log", "series_exp", "series_sqrt", "series_qdq",
    "laurent_split", "laurent_at_kappa", "LaurentSplit", "parse_ratfn",
]

MAX_RANK = 6
# most significant generator first
VARIABLES = ("kappa", "hbar", "eps2", "eps1", "u", "a0") + tuple(
    f"a{i}" for i in range(MAX_RANK, 0, -1))
CTX = flint.fmpq_mpoly_ctx.get(VARIABLES, "deglex")
_GENS = dict(zip(VARIABLES, CTX.gens()))
_INDEX = {name: i for i, name in enumerate(VARIABLES)}

MPoly = flint.fmpq_mpoly
Rat = Fraction
Scalar = Union[int, Fraction]

_ZERO = CTX.from_dict({})
_ONE = CTX.constant(1)


class PoleError(ArithmeticError):
    """A specialisation hit a zero of the reduced denominator."""

    def __init__(self, message: str, factor: "MPoly | None" = None):
        super().__init__(message)
        self.factor = factor


class ExcessPoleError(ArithmeticError):
    """Laurent expansion found a pole deeper than the caller allowed."""

    def __init__(self, message: str, order: int):
        super().__init__(message)
        self.order = order


class SeriesDomainError(ValueError):
    """Series function applied outside its formal domain (wrong free term)."""


def var(name: str) -> MPoly:
    try:
        return _GENS[name]
    except KeyError:
        raise KeyError(f"unknown variable {name!r}; known: {VARIABLES}") from None


def poly(value: "Scalar | MPoly") -> MPoly:
    if isinstance(value, MPoly):
        return value
    if isinstance(value, Fraction):
        return CTX.constant(flint.fmpq(value.numerator, value.denominator))
    if isinstance(value, int):
        return CTX.constant(value)
    raise TypeError(f"cannot convert {type(value).__name__} to a polynomial")


def _fmpq_to_fraction(c) -> Fraction:
    return Fraction(int(c.p), int(c.q))


def _content(p: MPoly) -> Fraction:
    """Rational content: gcd of numerators over lcm of denominators, signed
    so that dividing by it leaves a positive leading coefficient."""
    coeffs = p.coeffs()
    if not coeffs:
        return Fraction(0)
    num = reduce(gcd, (abs(int(c.p)) for c in coeffs))
    den = reduce(lcm, (int(c.q) for c in coeffs))
    c = Fraction(num, den)
    return -c if coeffs[0] < 0 else c


def _primitive(p: MPoly) -> MPoly:
    c = _content(p)
    if c == 1:
        return p
    return p * flint.fmpq(c.denominator, c.numerator)


def mpoly_gcd(p: MPoly, q: MPoly) -> MPoly:
    """Greatest common divisor with integer-style content.

    The primitive part has integer coefficients and a positive leading
    coefficient; the content factor is gcd of the rational contents, so
    ``mpoly_gcd(4*a1, 6*hbar) == 2``.
    """
    if p.is_zero() and q.is_zero():
        return _ZERO
    cp, cq = abs(_content(p)), abs(_content(q))
    c = Fraction(gcd(cp.numerator, cq.numerator), lcm(cp.denominator, cq.denominator))
    g = _primitive(p.gcd(q))
    return g * flint.fmpq(c.numerator, c.denominator)


def _coerce(x) -> "RatFn":
    if isinstance(x, RatFn):
        return x
    if isinstance(x, (int, Fraction, MPoly)):
        return RatFn(x)
    return NotImplemented


class RatFn:
    """Reduced quotient ``num/den`` of polynomials over the rationals.

    The denominator is a primitive integer polynomial with positive leading
    coefficient and ``gcd(num, den) == 1``, so two equal rational functions
    have identical representations.  Instances are immutable.
    """

    __slots__ = ("num", "den", "_key")

    def __init__(self, num: "Scalar | MPoly" = 0, den: "Scalar | MPoly" = 1,
                 *, _reduced: bool = False):
        num, den = poly(num), poly(den)
        if not _reduced:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den
        self._key = None

    @classmethod
    def var(cls, name: str) -> "RatFn":
        return cls(var(name), _ONE, _reduced=True)

    @classmethod
    def const(cls, c: Scalar) -> "RatFn":
        return cls(c)

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        if self.num.is_zero():
            return Fraction(0)
        return _fmpq_to_fraction(self.num.coeffs()[0]) / _fmpq_to_fraction(self.den.coeffs()[0])

    def variables(self) -> tuple[str, ...]:
        dn, dd = self.num.degrees(), self.den.degrees()
        return tuple(v for v, a, b in zip(VARIABLES, dn, dd) if a > 0 or b > 0)

    def free_of(self, name: str) -> bool:
        i = _INDEX[name]
        return self.num.degrees()[i] <= 0 and self.den.degrees()[i] <= 0

    def one_like(self) -> "RatFn":
        return ONE

    def zero_like(self) -> "RatFn":
        return ZERO

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return _add(self, other)

    __radd__ = __add__

    def __neg__(self) -> "RatFn":
        return RatFn(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return _add(self, -other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return _add(other, -self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return ZERO
            return RatFn(self.num * flint.fmpq(Fraction(other).numerator,
                                               Fraction(other).denominator),
                         self.den, _reduced=True)
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return _mul(self, other)

    __rmul__ = __mul__

    def inverse(self) -> "RatFn":
        if self.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFn(self.den, self.num)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return _mul(self, other.inverse())

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return _mul(other, self.inverse())

    def __pow__(self, k: int) -> "RatFn":
        if k < 0:
            return self.inverse() ** (-k)
        return RatFn(self.num ** k, self.den ** k, _reduced=True)

    def derivative(self, name: str) -> "RatFn":
        n, d = self.num, self.den
        return RatFn(n.derivative(name) * d - n * d.derivative(name), d * d)

    def substitute(self, name: str, value) -> "RatFn":
        return substitute(self, name, value)

    # -- identity ---------------------------------------------------------
    def key(self) -> str:
        if self._key is None:
            self._key = str(self)
        return self._key

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash(self.key())

    def __str__(self) -> str:
        num = self.num.str()
        if self.den.is_one():
            return num
        den = self.den.str()
        if len(self.num.coeffs()) > 1 or "/" in num:
            num = f"({num})"
        if len(self.den.coeffs()) > 1 or "*" in den:
            den = f"({den})"
        return f"{num}/{den}"

    def _renormalised(self) -> "RatFn":
        # fix the unit: integer primitive denominator, positive leading coefficient
        den = self.den
        if den.is_constant():
            return RatFn(self.num / den.coeffs()[0], _ONE, _reduced=True)
        c = _content(den)
        if c == 1:
            return self
        s = flint.fmpq(c.denominator, c.numerator)
        return RatFn(self.num * s, den * s, _reduced=True)

    def __repr__(self) -> str:
        return f"RatFn({str(self)!r})"


def _reduce(num: MPoly, den: MPoly) -> tuple[MPoly, MPoly]:
    if den.is_zero():
        raise ZeroDivisionError("rational function with zero denominator")
    if num.is_zero():
        return _ZERO, _ONE
    if den.is_constant():
        return num / den.coeffs()[0], _ONE
    g = num.gcd(den)
    if not g.is_one():
        num, den = num / g, den / g
    c = _content(den)
    if c != 1:
        s = flint.fmpq(c.denominator, c.numerator)
        num, den = num * s, den * s
    return num, den


def _add(x: RatFn, y: RatFn) -> RatFn:
    if x.num.is_zero():
        return y
    if y.num.is_zero():
        return x
    if x.den == y.den:
        if x.den.is_one():
            return RatFn(x.num + y.num, _ONE, _reduced=True)
        return RatFn(x.num + y.num, x.den)
    if x.den.is_one():
        return RatFn(x.num * y.den + y.num, y.den, _reduced=True)
    if y.den.is_one():
        return RatFn(y.num * x.den + x.num, x.den, _reduced=True)
    g = x.den.gcd(y.den)
    if g.is_one():
        return RatFn(x.num * y.den + y.num * x.den, x.den * y.den, _reduced=True) \
            ._renormalised()
    xd, yd = x.den / g, y.den / g
    num = x.num * yd + y.num * xd
    if num.is_zero():
        return ZERO
    # reduced inputs: only factors of g can cancel
    h = num.gcd(g)
    if not h.is_one():
        num, g = num / h, g / h
    return RatFn(num, xd * yd * g, _reduced=True)._renormalised()


def _mul(x: RatFn, y: RatFn) -> RatFn:
    if x.num.is_zero() or y.num.is_zero():
        return ZERO
    if x.den.is_one() and y.den.is_one():
        return RatFn(x.num * y.num, _ONE, _reduced=True)
    g1 = x.num.gcd(y.den) if not y.den.is_one() else _ONE
    g2 = y.num.gcd(x.den) if not x.den.is_one() else _ONE
    num = (x.num / g1 if not g1.is_one() else x.num) * (y.num / g2 if not g2.is_one() else y.num)
    den = (x.den / g2 if not g2.is_one() else x.den) * (y.den / g1 if not g1.is_one() else y.den)
    return RatFn(num, den, _reduced=True)._renormalised()


ZERO = RatFn(0)
ONE = RatFn(1)


def ratfn_arith(x: RatFn, y: RatFn, op: str) -> RatFn:
    """Binary arithmetic by name (``add``, ``sub``, ``mul``, ``div``)."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def rsum(terms: Iterable[RatFn]) -> RatFn:
    """Sum many rational functions.

    Terms sharing a denominator are added numerator-wise first; the distinct
    denominators are then combined pairwise in a balanced tree, which keeps
    the gcd work far below that of a left fold.
    """
    groups: dict[str, list] = {}
    dens: dict[str, MPoly] = {}
    for t in terms:
        if t.num.is_zero():
            continue
        k = t.den.str()
        if k in groups:
            groups[k].append(t.num)
        else:
            groups[k] = [t.num]
            dens[k] = t.den
    parts = []
    for k, nums in groups.items():
        n = nums[0]
        for m in nums[1:]:
            n = n + m
        if n.is_zero():
            continue
        d = dens[k]
        parts.append(RatFn(n, d, _reduced=d.is_one()))
    if not parts:
        return ZERO
    while len(parts) > 1:
        nxt = [parts[i] + parts[i + 1] for i in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            nxt.append(parts[-1])
        parts = nxt
    return parts[0]


def substitute(f: RatFn, name: str, value) -> RatFn:
    """Specialise one variable to a rational number or a polynomial.

    Raises :class:`PoleError` when the reduced denominator vanishes under the
    specialisation; the error carries the offending factor ``name - value``.
    """
    if isinstance(value, RatFn):
        if not value.is_polynomial():
            raise TypeError("substitution value must be a polynomial")
        value = value.num
    if isinstance(value, (int, Fraction)):
        fv = Fraction(value)
        sub = {name: flint.fmpq(fv.numerator, fv.denominator)}
        num, den = f.num.subs(sub), f.den.subs(sub)
    elif isinstance(value, MPoly):
        args = [value if v == name else _GENS[v] for v in VARIABLES]
        num, den = f.num.compose(*args), f.den.compose(*args)
    else:
        raise TypeError(f"unsupported substitution value {value!r}")
    if den.is_zero():
        factor = var(name) - poly(value)
        raise PoleError(f"pole at specialization {name} = {value} in {f}", factor)
    return RatFn(num, den)


class LaurentSplit(NamedTuple):
    principal: tuple  # coefficients of name^-max_pole ... name^-1
    regular: RatFn


def _split_by_var(p: MPoly, i: int) -> dict[int, MPoly]:
    out: dict[int, dict] = {}
    for exps, c in p.terms():
        e = list(exps)
        k = e[i]
        e[i] = 0
        out.setdefault(k, {})[tuple(e)] = c
    return {k: CTX.from_dict(d) for k, d in out.items()}


def laurent_split(f: RatFn, name: str, max_pole: int) -> LaurentSplit:
    """Principal part and regular remainder of ``f`` at ``name = 0``.

    ``f == sum(c_j * name**(-j)) + regular`` with ``regular`` finite at 0.
    """
    i = _INDEX[name]
    if f.is_zero():
        return LaurentSplit((ZERO,) * max_pole, ZERO)
    dparts = _split_by_var(f.den, i)
    m = min(dparts)
    if m > max_pole:
        raise ExcessPoleError(
            f"pole of order {m} at {name} = 0 exceeds the allowed {max_pole}", m)
    if m == 0:
        return LaurentSplit((ZERO,) * max_pole, f)
    nparts = _split_by_var(f.num, i)
    d = [RatFn(dparts.get(m + j, _ZERO)) for j in range(m)]
    e: list[RatFn] = []
    for j in range(m):
        acc = RatFn(nparts.get(j, _ZERO))
        acc = acc - rsum(d[k] * e[j - k] for k in range(1, j + 1))
        e.append(acc / d[0])
    t = var(name)
    principal_sum = rsum(e[j] * RatFn(_ONE, t ** (m - j)) for j in range(m))
    principal = (ZERO,) * (max_pole - m) + tuple(e)
    return LaurentSplit(principal, f - principal_sum)


def laurent_at_kappa(f: RatFn, max_pole: int) -> LaurentSplit:
    return laurent_split(f, "kappa", max_pole)


# -- canonical text ------------------------------------------------------

_ALLOWED = (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Constant, ast.Name,
            ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow, ast.USub, ast.UAdd)


def parse_ratfn(text: str) -> RatFn:
    """Parse the canonical printed form (``^`` for powers) back to a RatFn."""
    tree = ast.parse(text.replace("^", "**"), mode="eval")
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED + (ast.Load,)):
            raise ValueError(f"unsupported syntax in {text!r}")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant):
            if not isinstance(node.value, int):
                raise ValueError(f"non-integer literal in {text!r}")
            return RatFn(node.value)
        if isinstance(node, ast.Name):
            if node.id not in _INDEX:
                raise ValueError(f"unknown variable {node.id!r} in {text!r}")
            return RatFn.var(node.id)
        if isinstance(node, ast.UnaryOp):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        left, right = ev(node.left), node.right
        if isinstance(node.op, ast.Pow):
            if not (isinstance(right, ast.Constant) and isinstance(right.value, int)):
                raise ValueError("exponents must be integer literals")
            return left ** right.value
        right = ev(right)
        op = {ast.Add: "add", ast.Sub: "sub", ast.Mult: "mul", ast.Div: "div"}[type(node.op)]
        return ratfn_arith(left, right, op)

    return ev(tree)


# -- truncated series ----------------------------------------------------

class QSeries:
    """Power series in ``q`` known through order ``N`` (inclusive).

    Coefficients are any ring elements supporting ``+ - *``, multiplication
    by ``Fraction`` and ``is_zero``/``one_like``/``zero_like`` (here
    :class:`RatFn` and :class:`~todaprep.lattice.TrigPoly`).  Binary
    operations truncate to the smaller of the two orders.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ValueError("a series needs at least its q^0 coefficient")
        self.coeffs = coeffs

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def zeros(cls, zero, order: int) -> "QSeries":
        return cls([zero] * (order + 1))

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n: int):
        if not 0 <= n <= self.order:
            raise IndexError(f"order {n} outside the known range 0..{self.order}")
        return self.coeffs[n]

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, order: int) -> "QSeries":
        if order > self.order:
            raise ValueError(f"cannot extend a series known to order {self.order} to {order}")
        return QSeries(self.coeffs[: order + 1])

    def map(self, fn: Callable) -> "QSeries":
        return QSeries([fn(c) for c in self.coeffs])

    def __add__(self, other: "QSeries") -> "QSeries":
        n = min(self.order, other.order)
        return QSeries([self.coeffs[i] + other.coeffs[i] for i in range(n + 1)])

    def __sub__(self, other: "QSeries") -> "QSeries":
        n = min(self.order, other.order)
        return QSeries([self.coeffs[i] - other.coeffs[i] for i in range(n + 1)])

    def __neg__(self) -> "QSeries":
        return QSeries([-c for c in self.coeffs])

    def __mul__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            return QSeries([c * other for c in self.coeffs])
        n = min(self.order, other.order)
        out = []
        for k in range(n + 1):
            acc = None
            for i in range(k + 1):
                x, y = self.coeffs[i], other.coeffs[k - i]
                if x.is_zero() or y.is_zero():
                    continue
                t = x * y
                acc = t if acc is None else acc + t
            out.append(acc if acc is not None else self.coeffs[0].zero_like())
        return QSeries(out)

    def __rmul__(self, other) -> "QSeries":
        return QSeries([other * c for c in self.coeffs])

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    __hash__ = None  # type: ignore[assignment]

    def first_nonzero(self) -> "int | None":
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                return i
        return None

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*q^{i}" for i, c in enumerate(self.coeffs) if not c.is_zero())
        return f"QSeries({body or '0'}, order={self.order})"


def _check_free_term(s: QSeries, want_one: bool, what: str) -> None:
    c0 = s.coeffs[0]
    ok = (c0 == c0.one_like()) if want_one else c0.is_zero()
    if not ok:
        need = "1" if want_one else "0"
        raise SeriesDomainError(f"{what} needs free term {need}, got {c0}")


def series_log(s: QSeries) -> QSeries:
    _check_free_term(s, True, "log")
    c = s.coeffs
    out = [c[0].zero_like()]
    for n in range(1, len(c)):
        acc = c[n] * n
        for k in range(1, n):
            if out[k].is_zero() or c[n - k].is_zero():
                continue
            acc = acc - out[k] * c[n - k] * k
        out.append(acc * Fraction(1, n))
    return QSeries(out)


def series_exp(s: QSeries) -> QSeries:
    _check_free_term(s, False, "exp")
    c = s.coeffs
    out = [c[0].one_like()]
    for n in range(1, len(c)):
        acc = c[0].zero_like()
        for k in range(1, n + 1):
            if c[k].is_zero() or out[n - k].is_zero():
                continue
            acc = acc + c[k] * out[n - k] * k
        out.append(acc * Fraction(1, n))
    return QSeries(out)


def series_sqrt(s: QSeries) -> QSeries:
    """Square root with free term 1 (the branch equal to 1 at q = 0)."""
    _check_free_term(s, True, "sqrt")
    c = s.coeffs
    out = [c[0].one_like()]
    for n in range(1, len(c)):
        acc = c[n]
        for k in range(1, n):
            if out[k].is_zero() or out[n - k].is_zero():
                continue
            acc = acc - out[k] * out[n - k]
        out.append(acc * Fraction(1, 2))
    return QSeries(out)


_COMPOSE = {"log": series_log, "exp": series_exp, "sqrt": series_sqrt}


def series_compose(s: QSeries, f: str) -> QSeries:
    try:
        return _COMPOSE[f](s)
    except KeyError:
        raise ValueError(f"unknown series function {f!r}") from None


def series_qdq(s: QSeries) -> QSeries:
    """Euler operator ``q d/dq``: the n-th coefficient is multiplied by n."""
    return QSeries([c * n for n, c in enumerate(s.coeffs)])
