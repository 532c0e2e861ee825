"""
Affine Toda potentials.

A :class:`TodaSpec` lists potential terms ``coeff * Q**q_power * exp(<mu, x>)``
on a lattice.  In the *pre-change* form the finite simple roots carry ``Q**0``
and the affine root carries ``Q``; shifting ``x`` by a multiple of ``ln q``
puts every term at ``q**1`` with ``Q = q**h`` (*uniform* form), which is the
frame the solvers work in.

Presets cover the untwisted A series.  Other algebras are described by a small
text format (see :func:`parse_spec`)::

    # affine C2
    name C2
    gram
    1 -1
    -1 2
    terms
    1 0 2 0
    0 1 2 0
    -2 -1 2 1
    cone
    1 0
    0 1
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import sympy

from .lattice import LatticeData, TrigPoly, Weight

PRESETS = ("A1", "A2", "A3")


@dataclass(frozen=True)
class PotentialTerm:
    weight: Weight
    coeff: Fraction
    q_power: int = 0


@dataclass(frozen=True)
class TodaSpec:
    lattice: LatticeData
    terms: tuple[PotentialTerm, ...]
    grading_h: int
    cone: tuple[tuple[int, ...], ...] = ()
    name: str = "custom"
    marks: tuple[int, ...] = field(default=(), compare=False)
    # x-shift (in units of ln q) applied by change_of_variables
    shift: tuple[Fraction, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.grading_h < 1:
            raise ValueError("grading exponent h must be a positive integer")
        for t in self.terms:
            self.lattice.check_weight(t.weight)
            if t.q_power < 0:
                raise ValueError(f"negative q power in {t}")
        for row in self.cone:
            if len(row) != self.lattice.rank:
                raise ValueError(f"cone row {row} has the wrong length")

    @property
    def rank(self) -> int:
        return self.lattice.rank

    @property
    def is_uniform(self) -> bool:
        return all(t.q_power == 1 for t in self.terms)

    def potential(self) -> TrigPoly:
        """``U(x)`` of the uniform form (the coefficient of ``q``)."""
        if not self.is_uniform:
            raise ValueError("potential() needs the uniform-q form; "
                             "call change_of_variables first")
        out: dict = {}
        for t in self.terms:
            out[t.weight] = out.get(t.weight, Fraction(0)) + t.coeff
        return TrigPoly(self.lattice, out)

    def uniform(self) -> "TodaSpec":
        return self if self.is_uniform else change_of_variables(self)


def custom_spec(gram: Sequence[Sequence], terms: Iterable[Sequence], cone: Sequence[Sequence[int]] = (),
                name: str = "custom", grading_h: "int | None" = None) -> TodaSpec:
    """Build a spec from raw data; ``terms`` rows are ``(weight, coeff, q_power)``."""
    lat = LatticeData(gram)
    ts = tuple(PotentialTerm(lat.check_weight(w), Fraction(c), int(p)) for w, c, p in terms)
    cone_rows = tuple(tuple(int(x) for x in row) for row in cone)
    marks = affine_marks(ts)
    if grading_h is None:
        grading_h = _grading_from_marks(ts, marks)
    return TodaSpec(lat, ts, grading_h, cone_rows, name, marks)


def affine_a(n: int, coeff=2) -> TodaSpec:
    """Periodic Toda for ``sl_n`` in simple-root coordinates (pre-change form).

    Gram form is half the Cartan matrix (``<alpha_i, alpha_i> = 1``), i.e. the
    kinetic term ``hbar^2/2`` times the standard Laplacian on ``C^n/C(1,..,1)``;
    for ``n = 2`` this is exactly ``hbar^2 d^2/dx^2`` with ``U = 2e^x + 2e^-x``.
    """
    if n < 2:
        raise ValueError("affine A series needs n >= 2")
    r = n - 1
    gram = [[Fraction(1) if i == j else Fraction(-1, 2) if abs(i - j) == 1 else Fraction(0)
             for j in range(r)] for i in range(r)]
    terms = [(tuple(int(i == j) for j in range(r)), coeff, 0) for i in range(r)]
    terms.append(((-1,) * r, coeff, 1))
    cone = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    return custom_spec(gram, terms, cone, name=f"A{r}", grading_h=n)


def preset(algebra: str, coeff=2) -> TodaSpec:
    """``A1``, ``A2`` or ``A3`` periodic Toda data (pre-change form)."""
    if algebra not in PRESETS:
        raise KeyError(f"unknown preset {algebra!r}; choose from {', '.join(PRESETS)}")
    return affine_a(int(algebra[1:]) + 1, coeff)


def affine_marks(terms: Sequence[PotentialTerm]) -> tuple[int, ...]:
    """Positive integer marks ``m`` with ``sum m_j weight_j = 0`` (empty if none)."""
    if not terms:
        return ()
    m = sympy.Matrix([list(t.weight) for t in terms]).T
    null = m.nullspace()
    if len(null) != 1:
        return ()
    vec = list(null[0])
    den = sympy.ilcm(*[sympy.fraction(x)[1] for x in vec])
    ints = [int(x * den) for x in vec]
    g = sympy.igcd(*ints) if len(ints) > 1 else abs(ints[0])
    ints = [x // g for x in ints]
    if all(x < 0 for x in ints):
        ints = [-x for x in ints]
    if not all(x > 0 for x in ints):
        return ()
    return tuple(ints)


def _grading_from_marks(terms, marks) -> int:
    if not marks:
        return 1
    weighted = sum(m * t.q_power for m, t in zip(marks, terms))
    if weighted == 0:
        return 1  # already uniform or no affine coupling recorded
    h = Fraction(sum(marks), weighted)
    if h.denominator != 1:
        raise ValueError(f"affine relation gives non-integral grading {h}")
    return int(h)


@dataclass(frozen=True)
class ConeReport:
    valid: bool
    diagnostics: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.valid


def validate_cone(spec: TodaSpec) -> ConeReport:
    """Every ``Q**0`` term must sit at a nonzero weight inside the cone."""
    problems = []
    for t in spec.terms:
        if t.q_power != 0:
            continue
        if not any(t.weight):
            problems.append(f"term at weight 0 with coefficient {t.coeff}")
            continue
        bad = [row for row in spec.cone if sum(r * w for r, w in zip(row, t.weight)) < 0]
        if bad:
            problems.append(f"weight {t.weight} violates cone rows {bad}")
    if not spec.cone:
        problems.append("no cone inequalities supplied")
    return ConeReport(not problems, tuple(problems))


def change_of_variables(spec: TodaSpec) -> TodaSpec:
    """Shift ``x -> x + t ln q`` so every term carries ``q**1``, ``Q = q**h``.

    The shift solves ``weight_j . t = 1 - h * q_power_j`` for all terms.
    """
    if spec.is_uniform:
        return spec
    h = spec.grading_h
    rows = [list(t.weight) for t in spec.terms]
    rhs = [1 - h * t.q_power for t in spec.terms]
    a, b = sympy.Matrix(rows), sympy.Matrix(rhs)
    try:
        sol, params = a.gauss_jordan_solve(b)
    except ValueError:
        raise ValueError(f"no shift makes {spec.name} uniform with h = {h}") from None
    sol = sol.subs({p: 0 for p in params})
    shift = tuple(Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in sol)
    terms = tuple(replace(t, q_power=1) for t in spec.terms)
    return replace(spec, terms=terms, shift=shift)


# -- text format -----------------------------------------------------------

_SECTIONS = ("name", "gram", "terms", "cone", "h")


def parse_spec(text: str) -> TodaSpec:
    """Read the declarative format shown in the module docstring.

    Sections start with a bare keyword line (``gram``, ``terms``, ``cone``)
    or ``name <label>`` / ``h <int>``.  A term row is the weight coordinates
    followed by the coefficient (integer or ``p/q``) and the ``Q`` power.
    """
    sections: dict[str, list[list[str]]] = {}
    name, h, current = "custom", None, None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if head in _SECTIONS:
            if head == "name":
                name = " ".join(rest) or name
                current = None
            elif head == "h":
                h = int(rest[0])
                current = None
            else:
                current = head
                sections.setdefault(head, [])
            continue
        if current is None:
            raise ValueError(f"line {lineno}: data outside a section: {raw!r}")
        sections[current].append(line.split())
    if "gram" not in sections or "terms" not in sections:
        raise ValueError("spec file needs 'gram' and 'terms' sections")
    gram = [[Fraction(x) for x in row] for row in sections["gram"]]
    r = len(gram)
    terms = []
    for row in sections["terms"]:
        if len(row) != r + 2:
            raise ValueError(f"term row {row} should have {r} weight entries, coeff, q power")
        terms.append((tuple(int(x) for x in row[:r]), Fraction(row[r]), int(row[r + 1])))
    cone = [[int(x) for x in row] for row in sections.get("cone", [])]
    return custom_spec(gram, terms, cone, name=name, grading_h=h)


def load_spec(path: "str | Path") -> TodaSpec:
    return parse_spec(Path(path).read_text())


def format_spec(spec: TodaSpec) -> str:
    """Inverse of :func:`parse_spec`."""
    lines = [f"name {spec.name}", f"h {spec.grading_h}", "gram"]
    lines += [" ".join(str(x) for x in row) for row in spec.lattice.gram]
    lines.append("terms")
    lines += [" ".join([*map(str, t.weight), str(t.coeff), str(t.q_power)]) for t in spec.terms]
    if spec.cone:
        lines.append("cone")
        lines += [" ".join(map(str, row)) for row in spec.cone]
    return "\n".join(lines) + "\n"


def resolve_algebra(name_or_path: str, coeff=2) -> TodaSpec:
    """A preset name, or the path of a spec file."""
    if name_or_path in PRESETS:
        return preset(name_or_path, coeff)
    p = Path(name_or_path)
    if p.is_file():
        return load_spec(p)
    raise KeyError(f"unknown preset {name_or_path!r} (and no such spec file)")


def weights_sum_with_marks(spec: TodaSpec) -> Weight:
    marks = spec.marks or (1,) * len(spec.terms)
    return tuple(sum(m * t.weight[i] for m, t in zip(marks, spec.terms)) for i in range(spec.rank))
