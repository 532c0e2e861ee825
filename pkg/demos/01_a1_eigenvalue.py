"""A1 periodic Toda: eigenvalue, its classical limit and the prepotential."""
from todaprep.exact import substitute
from todaprep.spectral import (classical_limit_check, grading_check, prepotential,
                               solve_classical, solve_stationary_quantum)
from todaprep.toda import preset

spec = preset("A1")          # 2 e^x + 2 Q e^{-x}, Q = q^2
print(spec.uniform().potential())

# quantum recursion: psi = 1 + O(q), b = b_2 q^2 + ...
sr = solve_stationary_quantum(spec, 6)
for n in range(0, 7, 2):
    print(f"b_{n} =", sr.b[n])

# b is regular at hbar = 0; the limit is the classical eigenvalue v
cr = solve_classical(spec, 6)
print(classical_limit_check(sr, cr))
print("b_4 at hbar = 0:", substitute(sr.b[4], "hbar", 0), "  v_4:", cr.v[4])

# only even powers of q survive (Q = q^2)
print(grading_check(cr.v, spec.grading_h))

# Q dF/dQ = v, written in q and in Q
print("F in q:", [str(c) for c in prepotential(cr.v)])
print("F in Q:", [str(c) for c in prepotential(cr.v, 2, "Q")])
