"""
Instanton partition function of pure U(n) gauge theory by fixed-point sums.

The weight of an n-tuple of Young diagrams ``Y`` is ``1 / prod_{i,j} N_ij``
with

    N_ij = prod_{s in Y_i} (-leg_{Y_j}(s) e1 + (arm_{Y_i}(s) + 1) e2 + a_j - a_i)
         * prod_{s in Y_j} ((leg_{Y_i}(s) + 1) e1 - arm_{Y_j}(s) e2 + a_j - a_i),

arm and leg lengths being measured against the indicated diagram (they may
be negative for boxes outside it).  ``Z = sum_Y Q^|Y| weight(Y)``.

The formula is checked internally (n = 1 closed form, symmetries) rather
than trusted; :func:`calibrate_and_compare` then matches ``e1 e2 log Z`` at
``e = 0`` against a rank-one Toda prepotential up to a finite set of
normalisation choices.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from sympy.utilities.iterables import partitions as _sympy_partitions

from .exact import (ONE, ZERO, PoleError, QSeries, RatFn, parse_ratfn, poly, rsum,
                    series_log, substitute, var)


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...] = ()

    def __post_init__(self):
        p = self.parts
        if any(x <= 0 for x in p) or any(p[i] < p[i + 1] for i in range(len(p) - 1)):
            raise ValueError(f"not a partition: {p}")

    @property
    def size(self) -> int:
        return sum(self.parts)

    def row(self, i: int) -> int:
        return self.parts[i] if i < len(self.parts) else 0

    @property
    def transpose(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for x in self.parts if x > j) for j in range(self.parts[0])))

    def boxes(self):
        for i, r in enumerate(self.parts):
            for j in range(r):
                yield i, j

    def arm(self, i: int, j: int) -> int:
        return self.row(i) - j - 1

    def leg(self, i: int, j: int) -> int:
        return self.transpose.row(j) - i - 1

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


@lru_cache(maxsize=None)
def partitions_of(d: int) -> tuple[Partition, ...]:
    """All partitions of ``d`` in a fixed order (reverse lexicographic)."""
    if d == 0:
        return (Partition(),)
    out = []
    for mult in _sympy_partitions(d):
        parts = sorted((k for k, m in mult.items() for _ in range(m)), reverse=True)
        out.append(Partition(tuple(parts)))
    return tuple(sorted(out, reverse=True))


def partition_tuples(n: int, d: int):
    """n-tuples of partitions with total size ``d``."""
    for sizes in itertools.product(range(d + 1), repeat=n):
        if sum(sizes) == d:
            yield from itertools.product(*(partitions_of(k) for k in sizes))


def _coulomb(n: int):
    if not 1 <= n <= 6:
        raise ValueError("the variable set supports 1 <= n <= 6")
    return [var(f"a{i + 1}") for i in range(n)]


def _pair_factor(Yi: Partition, Yj: Partition, diff, e1, e2):
    out = poly(1)
    for s in Yi.boxes():
        out *= -Yj.leg(*s) * e1 + (Yi.arm(*s) + 1) * e2 + diff
    for s in Yj.boxes():
        out *= (Yi.leg(*s) + 1) * e1 - Yj.arm(*s) * e2 + diff
    return out


@dataclass(frozen=True)
class InstantonTerm:
    diagrams: tuple[Partition, ...]
    contribution: RatFn = field(compare=False)

    @property
    def size(self) -> int:
        return sum(p.size for p in self.diagrams)


def contribution(diagrams, n: "int | None" = None) -> RatFn:
    n = n or len(diagrams)
    a = _coulomb(n)
    e1, e2 = var("eps1"), var("eps2")
    den = poly(1)
    for i in range(n):
        for j in range(n):
            den *= _pair_factor(diagrams[i], diagrams[j], a[j] - a[i], e1, e2)
    return RatFn(1, den)


def instanton_terms(n: int, d: int) -> list[InstantonTerm]:
    return [InstantonTerm(t, contribution(t, n)) for t in partition_tuples(n, d)]


def nekrasov_Z(n: int, order: int) -> QSeries:
    """``Z = 1 + sum_{d <= order} Q^d Z_d`` over ``Q(a1..an, eps1, eps2)``."""
    if n < 1 or order < 0:
        raise ValueError("need n >= 1 and order >= 0")
    _coulomb(n)
    return QSeries([ONE] + [rsum(t.contribution for t in instanton_terms(n, d))
                            for d in range(1, order + 1)])


def eps_log(Z: QSeries) -> QSeries:
    """``eps1 eps2 log Z``."""
    e = RatFn.var("eps1") * RatFn.var("eps2")
    return series_log(Z).map(lambda c: c * e)


def f_inst_from_Z(Z: QSeries) -> QSeries:
    """``eps1 eps2 log Z`` at ``eps2 = 0`` then ``eps1 = 0``.

    A pole at either specialisation raises :class:`PoleError` naming the order.
    """
    if not Z[0].is_one():
        raise ValueError("Z must start with 1")
    out = []
    for d, c in enumerate(eps_log(Z)):
        try:
            out.append(substitute(substitute(c, "eps2", 0), "eps1", 0))
        except PoleError as e:
            raise PoleError(f"order {d}: eps1 eps2 log Z is singular at eps = 0 ({e})", e.factor) from e
    return QSeries(out)


def rename(f: RatFn, mapping: dict[str, str]) -> RatFn:
    """Simultaneous renaming of variables (a permutation of names is allowed)."""
    gens = {name: var(name) for name in mapping}
    num, den = f.num, f.den
    ctx = num.context()
    images = [gens[mapping[n]] if n in mapping else g
              for n, g in zip(ctx.names(), ctx.gens())]
    return RatFn(num.compose(*images), den.compose(*images))


def swap_eps(f: RatFn) -> RatFn:
    return rename(f, {"eps1": "eps2", "eps2": "eps1"})


def symmetry_check(Z: QSeries, n: int) -> tuple[bool, str]:
    """Invariance of every ``Z_d`` under ``eps1 <-> eps2`` and permutations of ``a``."""
    names = [f"a{i + 1}" for i in range(n)]
    for d, c in enumerate(Z):
        if swap_eps(c) != c:
            return False, f"Q^{d} not symmetric in eps1, eps2"
        for perm in itertools.permutations(names):
            if rename(c, dict(zip(names, perm))) != c:
                return False, f"Q^{d} not invariant under a -> {perm}"
    return True, f"symmetric in eps1, eps2 and in a1..a{n} through Q^{Z.order}"


# -- calibration ---------------------------------------------------------------

REAL_SCALES = (Fraction(1), Fraction(1, 2), Fraction(2))


def scale_even(f: RatFn, name: str, sigma) -> RatFn:
    """``f(sqrt(sigma) * x)`` for ``f`` even in ``x``; ``sigma`` may be negative.

    In reduced form the numerator and denominator of an even function share
    a parity in ``x``, so ``x^e -> sigma^(e // 2) x^e`` termwise is exact.
    """
    flipped = substitute(f, name, -var(name))
    if flipped != f:
        raise ValueError(f"{f} is not even in {name}")
    i = f.num.context().variable_to_index(name)
    sigma = Fraction(sigma)

    def scale(p):
        return p.context().from_dict(
            {e: c * poly(sigma ** (int(e[i]) // 2)).leading_coefficient() for e, c in p.terms()})

    return RatFn(scale(f.num), scale(f.den))


@dataclass(frozen=True)
class Scale:
    """``a -> s (a1 - a2)`` with ``s = root`` or ``s = i * root``."""

    root: Fraction
    imaginary: bool = False

    @property
    def square(self) -> Fraction:
        return -self.root ** 2 if self.imaginary else self.root ** 2

    def __str__(self) -> str:
        if not self.imaginary:
            return str(self.root)
        num = "" if self.root.numerator == 1 else str(self.root.numerator)
        den = "" if self.root.denominator == 1 else f"/{self.root.denominator}"
        return f"{num}i{den}"


def candidate_scales(imaginary: bool = True) -> tuple[Scale, ...]:
    real = tuple(Scale(s) for s in REAL_SCALES)
    return real + (tuple(Scale(s, True) for s in REAL_SCALES) if imaginary else ())


@dataclass
class Attempt:
    scale: Scale
    c: "RatFn | None"
    first_mismatch: "int | None"
    diffs: dict[int, str]


@dataclass
class CalibrationReport:
    passed: bool
    scale: "Scale | None"
    c: "RatFn | None"
    order: int
    first_mismatch: "int | None"
    attempts: list[Attempt]

    def __bool__(self) -> bool:
        return self.passed

    @property
    def variable_map(self) -> str:
        return f"a -> {self.scale}*(a1 - a2)" if self.scale is not None else "none"

    def summary(self) -> str:
        if self.passed:
            return (f"match through Q^{self.order}: {self.variable_map}, "
                    f"Q_Z = ({self.c}) * q^h")
        lines = [f"no convention matches through Q^{self.order}"]
        for t in self.attempts:
            lines.append(f"  s = {t.scale}: first mismatch at Q^{t.first_mismatch}")
            lines += [f"    Q^{d}: {msg}" for d, msg in sorted(t.diffs.items())]
        return "\n".join(lines)


def toda_in_Q(F_toda: QSeries, h: int, convention: str = "q") -> QSeries:
    """Re-express a q-convention Toda prepotential in ``Q = q^h`` with ``Q dF/dQ = v``."""
    if convention == "Q":
        return F_toda
    if convention != "q":
        raise ValueError(f"unknown convention {convention!r}")
    return QSeries([ZERO] + [F_toda[k * h] * h for k in range(1, F_toda.order // h + 1)])


def _rescale(f: RatFn, scale: Scale) -> RatFn:
    # a -> s (a1 - a2) = 2 s a1 once a2 = -a1
    if not scale.imaginary:
        return substitute(f, "a1", var("a1") * poly(2 * scale.root))
    return scale_even(f, "a1", scale.square * 4)


def calibrate_and_compare(F_toda: QSeries, F_Z: QSeries, order: int, h: int = 2,
                          toda_convention: str = "q", imaginary: bool = True) -> CalibrationReport:
    """Search ``a -> s (a1 - a2)``, ``Q_Z = c q^h`` for exact agreement through ``Q^order``.

    ``F_toda`` is a series in the rank-one variable ``a1``; ``F_Z`` lives in
    ``a1, a2`` and gets ``a2 = -a1``.  ``c`` is fixed by the first order.
    ``s`` runs over 1, 1/2, 2 and, if ``imaginary``, over i, i/2, 2i; the
    latter need ``F_toda`` even in ``a1``.
    """
    T = toda_in_Q(F_toda, h, toda_convention)
    if T.order < order or F_Z.order < order:
        raise ValueError(f"both series must reach order {order}")
    a1 = var("a1")
    Zs = [substitute(F_Z[d], "a2", -a1) for d in range(order + 1)]
    attempts = []
    for scale in candidate_scales(imaginary):
        try:
            Ts = [_rescale(T[d], scale) for d in range(order + 1)]
        except ValueError as e:
            attempts.append(Attempt(scale, None, 0, {0: str(e)}))
            continue
        diffs: dict[int, str] = {}
        c = None
        if order >= 1:
            if Zs[1].is_zero() or Ts[1].is_zero():
                if Zs[1] != Ts[1]:
                    diffs[1] = f"toda {Ts[1]} vs oracle {Zs[1]}"
            else:
                ratio = Ts[1] / Zs[1]
                if ratio.is_constant():
                    c = ratio
                else:
                    diffs[1] = f"ratio {ratio} is not constant"
        if not diffs:
            cp = c if c is not None else ZERO
            for d in range(2, order + 1):
                cp = cp * c if c is not None else ZERO
                if Zs[d] * cp != Ts[d]:
                    diffs[d] = f"toda {Ts[d]} vs oracle*c^{d} {Zs[d] * cp}"
        first = min(diffs) if diffs else None
        attempts.append(Attempt(scale, c, first, diffs))
        if first is None:
            return CalibrationReport(True, scale, c, order, None, attempts)
    worst = max(t.first_mismatch for t in attempts)
    return CalibrationReport(False, None, None, order, worst, attempts)


# -- golden files --------------------------------------------------------------

def golden_lines(n: int, order: int) -> list[str]:
    """``Z d <coef>`` and ``F d <coef>`` lines in canonical text form."""
    Z = nekrasov_Z(n, order)
    F = f_inst_from_Z(Z)
    return ([f"Z {d} {Z[d]}" for d in range(1, order + 1)]
            + [f"F {d} {F[d]}" for d in range(1, order + 1)])


def write_golden(path: "str | Path", n: int, order: int) -> None:
    Path(path).write_text("\n".join(golden_lines(n, order)) + "\n")


def read_golden(path: "str | Path") -> dict[tuple[str, int], RatFn]:
    out = {}
    for line in Path(path).read_text().splitlines():
        if line.strip():
            kind, d, text = line.split(" ", 2)
            out[kind, int(d)] = parse_ratfn(text)
    return out
