"""Instanton counting for U(2) against the A1 Toda prepotential."""
from todaprep.nekrasov import (calibrate_and_compare, eps_log, f_inst_from_Z, nekrasov_Z,
                               symmetry_check)
from todaprep.spectral import prepotential, solve_classical
from todaprep.toda import preset

# U(1): eps1 eps2 log Z is exactly Q
print([str(c) for c in eps_log(nekrasov_Z(1, 5))])

Z = nekrasov_Z(2, 3)
print(symmetry_check(Z, 2))
F_oracle = f_inst_from_Z(Z)
for d in range(1, 4):
    print(f"oracle Q^{d}:", F_oracle[d])

F_toda = prepotential(solve_classical(preset("A1"), 6).v)
print(calibrate_and_compare(F_toda, F_oracle, 3).summary())

# with the variable map restricted to real multiples of a1 - a2
print(calibrate_and_compare(F_toda, F_oracle, 3, imaginary=False).summary())
