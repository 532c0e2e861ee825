"""
Lattices, trigonometric polynomials and the diagonal operators acting on them.

A trigonometric polynomial is a finite sum ``sum_mu c_mu exp(<mu, x>)`` with
exponents ``mu`` given by integer coordinate vectors and coefficients in
:class:`~todaprep.exact.RatFn`.  Pairings go through the Gram matrix of the
:class:`LatticeData`.  The symbolic point ``a`` is expanded in the same basis
as the exponents, ``a = a1 e_1 + ... + ar e_r``, so that

    <mu, a> = sum_ij mu_i G_ij a_j.

Every operator built from the Laplacian and ``<grad, a>`` is diagonal on
exponentials; that is what makes the recursions exactly solvable.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from .exact import CTX, MPoly, RatFn, ZERO, poly, rsum, var

Weight = tuple[int, ...]


@dataclass(frozen=True)
class LatticeData:
    """Exponent lattice ``Z^r`` with a positive definite symmetric Gram form."""

    gram: tuple[tuple[Fraction, ...], ...]

    def __init__(self, gram: Sequence[Sequence]):
        g = tuple(tuple(Fraction(x) for x in row) for row in gram)
        r = len(g)
        if r == 0 or any(len(row) != r for row in g):
            raise ValueError("Gram matrix must be square and non-empty")
        if any(g[i][j] != g[j][i] for i in range(r) for j in range(r)):
            raise ValueError("Gram matrix must be symmetric")
        if not _positive_definite(g):
            raise ValueError(f"Gram matrix {[[str(x) for x in row] for row in g]} "
                             "is not positive definite")
        object.__setattr__(self, "gram", g)

    @property
    def rank(self) -> int:
        return len(self.gram)

    def pair(self, mu: Weight, nu: Weight) -> Fraction:
        g = self.gram
        return sum((mu[i] * g[i][j] * nu[j] for i in range(len(g)) for j in range(len(g))
                    if mu[i] and nu[j]), Fraction(0))

    def norm(self, mu: Weight) -> Fraction:
        return self.pair(mu, mu)

    def pair_with_a(self, mu: Weight) -> MPoly:
        """The linear form ``<mu, a>`` in the variables ``a1 .. ar``."""
        return _pair_with_a(self, tuple(mu))

    def a_norm(self) -> RatFn:
        """``<a, a>`` as a quadratic form in ``a1 .. ar``."""
        r = self.rank
        terms = [RatFn(poly(self.gram[i][j]) * var(f"a{i + 1}") * var(f"a{j + 1}"))
                 for i in range(r) for j in range(r) if self.gram[i][j]]
        return rsum(terms)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self.gram for x in row)

    def check_weight(self, mu: Weight) -> Weight:
        mu = tuple(int(m) for m in mu)
        if len(mu) != self.rank:
            raise ValueError(f"weight {mu} has length {len(mu)}, lattice rank is {self.rank}")
        return mu


def _positive_definite(g) -> bool:
    # Gaussian elimination without pivoting: all pivots positive iff PD
    m = [list(row) for row in g]
    n = len(m)
    for k in range(n):
        if m[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            for j in range(k, n):
                m[i][j] -= f * m[k][j]
    return True


@lru_cache(maxsize=None)
def _pair_with_a(lat: LatticeData, mu: Weight) -> MPoly:
    out = CTX.from_dict({})
    for j in range(lat.rank):
        c = sum((mu[i] * lat.gram[i][j] for i in range(lat.rank)), Fraction(0))
        if c:
            out = out + poly(c) * var(f"a{j + 1}")
    return out


def _scalar(c) -> RatFn:
    return c if isinstance(c, RatFn) else RatFn(c)


class TrigPoly:
    """Finite map from weights to nonzero rational-function coefficients."""

    __slots__ = ("lattice", "terms")

    def __init__(self, lattice: LatticeData, terms: Mapping[Weight, object] = ()):
        self.lattice = lattice
        clean = {}
        for mu, c in dict(terms).items():
            c = _scalar(c)
            if not c.is_zero():
                clean[lattice.check_weight(mu)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, lattice: LatticeData, terms: dict) -> "TrigPoly":
        self = object.__new__(cls)
        self.lattice = lattice
        self.terms = terms
        return self

    @classmethod
    def constant(cls, lattice: LatticeData, c=1) -> "TrigPoly":
        return cls(lattice, {(0,) * lattice.rank: c})

    @classmethod
    def monomial(cls, lattice: LatticeData, mu: Weight, c=1) -> "TrigPoly":
        return cls(lattice, {tuple(mu): c})

    # -- container protocol -------------------------------------------------
    def __getitem__(self, mu: Weight) -> RatFn:
        return self.terms.get(tuple(mu), ZERO)

    def items(self) -> Iterator[tuple[Weight, RatFn]]:
        return iter(sorted(self.terms.items()))

    def support(self) -> list[Weight]:
        return sorted(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def one_like(self) -> "TrigPoly":
        return TrigPoly.constant(self.lattice, 1)

    def zero_like(self) -> "TrigPoly":
        return TrigPoly._raw(self.lattice, {})

    def map_coeffs(self, fn) -> "TrigPoly":
        return TrigPoly(self.lattice, {mu: fn(c) for mu, c in self.terms.items()})

    def _check(self, other: "TrigPoly") -> None:
        if other.lattice != self.lattice:
            raise ValueError("trigonometric polynomials live on different lattices")

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, TrigPoly):
            other = TrigPoly.constant(self.lattice, other)
        self._check(other)
        out = dict(self.terms)
        for mu, c in other.terms.items():
            s = out[mu] + c if mu in out else c
            if s.is_zero():
                out.pop(mu, None)
            else:
                out[mu] = s
        return TrigPoly._raw(self.lattice, out)

    __radd__ = __add__

    def __neg__(self) -> "TrigPoly":
        return TrigPoly._raw(self.lattice, {mu: -c for mu, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TrigPoly):
            return trig_mul(self, other)
        c = _scalar(other) if not isinstance(other, (int, Fraction)) else other
        if (isinstance(c, RatFn) and c.is_zero()) or (not isinstance(c, RatFn) and c == 0):
            return self.zero_like()
        return TrigPoly._raw(self.lattice, {mu: v * c for mu, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self.lattice == other.lattice and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        if not self.terms:
            return "TrigPoly(0)"
        body = " + ".join(f"({c})*e^{list(mu)}" for mu, c in self.items())
        return f"TrigPoly({body})"


def _collect(lattice: LatticeData, pieces: Iterable[tuple[Weight, RatFn]]) -> TrigPoly:
    acc: dict[Weight, list[RatFn]] = {}
    for mu, c in pieces:
        acc.setdefault(mu, []).append(c)
    out = {}
    for mu, cs in acc.items():
        s = cs[0] if len(cs) == 1 else rsum(cs)
        if not s.is_zero():
            out[mu] = s
    return TrigPoly._raw(lattice, out)


def _add_weights(mu: Weight, nu: Weight) -> Weight:
    return tuple(x + y for x, y in zip(mu, nu))


def trig_mul(f: TrigPoly, g: TrigPoly) -> TrigPoly:
    f._check(g)
    return _collect(f.lattice, ((_add_weights(mu, nu), c * d)
                                for mu, c in f.terms.items() for nu, d in g.terms.items()))


def constant_term(f: TrigPoly) -> RatFn:
    """Coefficient of the weight-0 exponential."""
    return f[(0,) * f.lattice.rank]


def d_eigenvalue(lattice: LatticeData, mu: Weight, kappa_shift: int = 0,
                 paper_scale: bool = False) -> MPoly:
    """``hbar^2 <mu,mu> + 2 hbar <mu,a> - n*kappa``.

    With ``paper_scale`` the shift is ``n*hbar*kappa`` instead.
    """
    return _d_eigenvalue(lattice, tuple(mu), kappa_shift, paper_scale)


@lru_cache(maxsize=None)
def _d_eigenvalue(lattice: LatticeData, mu: Weight, n: int, paper_scale: bool) -> MPoly:
    h = var("hbar")
    ev = poly(lattice.norm(mu)) * h * h + 2 * h * lattice.pair_with_a(mu)
    if n:
        k = var("kappa") * h if paper_scale else var("kappa")
        ev = ev - n * k
    return ev


def apply_D(f: TrigPoly, kappa_shift: int = 0, *, paper_scale: bool = False) -> TrigPoly:
    """Apply ``hbar^2 Lap + 2 hbar <grad, a> - n kappa`` termwise."""
    lat = f.lattice
    out = {}
    for mu, c in f.terms.items():
        ev = d_eigenvalue(lat, mu, kappa_shift, paper_scale)
        if not ev.is_zero():
            out[mu] = c * RatFn(ev)
    return TrigPoly._raw(lat, out)


class NotInImageError(ValueError):
    """The right-hand side has a constant term that ``D`` cannot produce."""


def invert_D(f: TrigPoly, kappa_shift: int = 0, *, paper_scale: bool = False) -> TrigPoly:
    """Unique preimage under :func:`apply_D`.

    For ``kappa_shift == 0`` the kernel is the constants, so the preimage is
    normalised to have zero constant term and ``f`` itself must have none.
    """
    lat = f.lattice
    zero = (0,) * lat.rank
    if kappa_shift == 0 and zero in f.terms:
        raise NotInImageError(f"not in image of D: constant term {f.terms[zero]}")
    out = {}
    for mu, c in f.terms.items():
        ev = d_eigenvalue(lat, mu, kappa_shift, paper_scale)
        if ev.is_zero():
            raise ZeroDivisionError(f"D has zero eigenvalue on weight {mu}")
        out[mu] = c / RatFn(ev)
    return TrigPoly._raw(lat, out)


def transport_eigenvalue(lattice: LatticeData, mu: Weight) -> MPoly:
    """``2 <mu, a>``: the hbar -> 0 leading part of ``D / hbar``."""
    return 2 * lattice.pair_with_a(tuple(mu))


def invert_transport(f: TrigPoly) -> TrigPoly:
    """Solve ``2 <a, grad g> = f`` with zero constant term in ``g``."""
    lat = f.lattice
    zero = (0,) * lat.rank
    if zero in f.terms:
        raise NotInImageError(f"not in image of <a, grad>: constant term {f.terms[zero]}")
    return TrigPoly._raw(lat, {mu: c / RatFn(transport_eigenvalue(lat, mu))
                               for mu, c in f.terms.items()})


def laplacian(f: TrigPoly) -> TrigPoly:
    lat = f.lattice
    return TrigPoly._raw(lat, {mu: c * lat.norm(mu) for mu, c in f.terms.items()
                               if lat.norm(mu)})


def a_drift(f: TrigPoly) -> TrigPoly:
    """``<grad f, a>``."""
    lat = f.lattice
    return TrigPoly(lat, {mu: c * RatFn(lat.pair_with_a(mu)) for mu, c in f.terms.items()})


def gradient_pairing(f: TrigPoly, g: TrigPoly) -> TrigPoly:
    """``<grad f, grad g>``: bilinear extension of ``<mu,nu> e^(mu+nu)``."""
    f._check(g)
    lat = f.lattice
    return _collect(lat, ((_add_weights(mu, nu), c * d * p)
                          for mu, c in f.terms.items() for nu, d in g.terms.items()
                          for p in [lat.pair(mu, nu)] if p))


def directional_derivative(f: TrigPoly, direction: Sequence[int]) -> TrigPoly:
    """Derivative along a co-character ``direction`` (natural pairing mu . lambda)."""
    lam = tuple(direction)
    if len(lam) != f.lattice.rank:
        raise ValueError("direction has the wrong length")
    return TrigPoly(f.lattice, {mu: c * sum(m * l for m, l in zip(mu, lam))
                                for mu, c in f.terms.items()})
