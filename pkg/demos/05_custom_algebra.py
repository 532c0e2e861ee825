"""A non-A algebra from a text file: affine C2, Q = q^4."""
from pathlib import Path

from todaprep.spectral import (classical_limit_check, grading_check, prepotential,
                               solve_classical, solve_stationary_quantum)
from todaprep.toda import change_of_variables, load_spec, validate_cone

spec = load_spec(Path(__file__).with_name("affine_c2.txt"))
print(spec.name, "marks", spec.marks, "h =", spec.grading_h)
print(validate_cone(spec))
print("shift:", change_of_variables(spec).shift)

cr = solve_classical(spec, 8)
print(grading_check(cr.v, spec.grading_h))
print(classical_limit_check(solve_stationary_quantum(spec, 8), cr))
F = prepotential(cr.v, spec.grading_h, "Q")
print("F_1 =", F[1])
