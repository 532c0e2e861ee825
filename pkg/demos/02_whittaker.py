"""Non-stationary route: log Psi has a simple kappa pole with constant residue Phi."""
from todaprep.exact import RatFn
from todaprep.spectral import prepotential, solve_classical, solve_stationary_quantum
from todaprep.toda import preset
from todaprep.whittaker import (instanton_from_whittaker, verify_b_relation,
                                whittaker_pipeline)

spec = preset("A2")
N = 4

res = whittaker_pipeline(spec, N, "operator")
print("Phi_3 =", res.Phi[3])

b = solve_stationary_quantum(spec, N).b
print(verify_b_relation(res.Phi, b))                      # q dPhi/dq = b

F = instanton_from_whittaker(res.Phi)
print(F == prepotential(solve_classical(spec, N).v))      # Phi at hbar = 0

# rescaling kappa -> hbar kappa divides the residue by hbar
paper = whittaker_pipeline(spec, N, "paper")
hbar = RatFn.var("hbar")
print(all(res.Phi[n] == paper.Phi[n] * hbar for n in range(N + 1)))
print(verify_b_relation(paper.Phi, b, "paper"))
