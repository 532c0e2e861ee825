from fractions import Fraction

import pytest

from todaprep.toda import (ConeReport, PotentialTerm, affine_marks, change_of_variables,
                           custom_spec, format_spec, load_spec, parse_spec, preset,
                           resolve_algebra, validate_cone, weights_sum_with_marks)
from todaprep.spectral import solve_stationary_quantum

C2_TEXT = """\
# affine C2: short root a1, long root a2 with <a2, a2> = 1, affine root -(2 a1 + a2)
name C2
gram
1/2 -1/2
-1/2 1
terms
1 0 2 0
0 1 2 0
-2 -1 2 1
cone
1 0
0 1
"""


class TestPresets:
    def test_a1(self):
        s = preset("A1")
        assert s.grading_h == 2
        assert [(t.weight, t.coeff, t.q_power) for t in s.terms] == [((1,), 2, 0), ((-1,), 2, 1)]
        assert s.lattice.norm((1,)) == 1

    def test_a2(self):
        s = preset("A2")
        assert len(s.terms) == 3 and s.grading_h == 3
        assert weights_sum_with_marks(s) == (0, 0)

    def test_coefficient_parameter(self):
        assert all(t.coeff == 3 for t in preset("A2", 3).terms)

    def test_unknown(self):
        with pytest.raises(KeyError, match="unknown preset"):
            preset("A9")

    def test_definiteness(self):
        with pytest.raises(ValueError):
            custom_spec([[0]], [((1,), 1, 0)])

    @pytest.mark.parametrize("name", ["A1", "A2", "A3"])
    def test_marks_and_cone(self, name):
        s = preset(name)
        assert s.marks == (1,) * len(s.terms)
        assert weights_sum_with_marks(s) == (0,) * s.rank
        assert validate_cone(s)


class TestCone:
    def test_weight_zero_rejected(self):
        s = custom_spec([[1]], [((0,), 1, 0), ((1,), 1, 1)], cone=[[1]])
        rep = validate_cone(s)
        assert not rep and "weight 0" in rep.diagnostics[0]

    def test_outside_cone(self):
        s = custom_spec([[1]], [((-1,), 1, 0), ((1,), 1, 1)], cone=[[1]])
        assert not validate_cone(s)

    def test_report_is_truthy(self):
        assert bool(ConeReport(True)) and not ConeReport(False, ("x",))


class TestChangeOfVariables:
    def test_a1(self):
        u = change_of_variables(preset("A1"))
        assert u.is_uniform
        assert [(t.weight, t.coeff) for t in u.terms] == [((1,), 2), ((-1,), 2)]
        assert u.shift == (Fraction(1),)

    def test_a2(self):
        u = change_of_variables(preset("A2"))
        assert u.is_uniform and u.grading_h == 3 and len(u.terms) == 3

    def test_identity_on_uniform(self):
        u = change_of_variables(preset("A2"))
        assert change_of_variables(u) is u

    @pytest.mark.parametrize("name", ["A1", "A2", "A3"])
    def test_preserves_norms(self, name):
        s = preset(name)
        u = change_of_variables(s)
        norms = sorted(s.lattice.norm(t.weight) for t in s.terms)
        assert norms == sorted(u.lattice.norm(t.weight) for t in u.terms)

    def test_inconsistent(self):
        s = custom_spec([[1]], [((1,), 1, 0), ((1,), 1, 1)], grading_h=2)
        with pytest.raises(ValueError):
            change_of_variables(s)

    def test_potential_needs_uniform(self):
        with pytest.raises(ValueError):
            preset("A1").potential()

    @pytest.mark.parametrize("name,n", [("A1", 6), ("A2", 4)])
    def test_support_bound(self, name, n):
        # support of psi_n lies among n-fold sums of term weights
        spec = preset(name).uniform()
        psi = solve_stationary_quantum(spec, n).psi
        sums = {(0,) * spec.rank}
        for m in range(1, n + 1):
            sums = {tuple(x + y for x, y in zip(s, t.weight)) for s in sums for t in spec.terms} | sums
            assert set(psi[m].support()) <= sums
        assert len(sums) < 10 ** 4


class TestTextFormat:
    def test_round_trip(self):
        s = parse_spec(C2_TEXT)
        assert s.name == "C2" and s.marks == (2, 1, 1)
        assert parse_spec(format_spec(s)) == s

    def test_c2_grading(self):
        s = parse_spec(C2_TEXT)
        assert s.grading_h == 4
        assert validate_cone(s)
        assert change_of_variables(s).is_uniform

    def test_presets_round_trip(self):
        for name in ("A1", "A2", "A3"):
            s = preset(name)
            assert parse_spec(format_spec(s)) == s

    def test_file(self, tmp_path):
        p = tmp_path / "c2.txt"
        p.write_text(C2_TEXT)
        assert load_spec(p) == resolve_algebra(str(p))

    def test_bad_rows(self):
        with pytest.raises(ValueError):
            parse_spec("gram\n1\nterms\n1 2\n")
        with pytest.raises(ValueError):
            parse_spec("1 2 3\n")
        with pytest.raises(KeyError):
            resolve_algebra("no/such/file")

    def test_marks_none_when_ambiguous(self):
        terms = [PotentialTerm((1,), Fraction(1)), PotentialTerm((-1,), Fraction(1)),
                 PotentialTerm((2,), Fraction(1))]
        assert affine_marks(terms) == ()
