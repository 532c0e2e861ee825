"""Rank one: the unit-circle integral of z dw/w returns a, and a(u) by inversion."""
from todaprep.periods import (branch_form, classical_momentum, invert_a_of_u, laurent,
                              residue_identity_check)
from todaprep.spectral import solve_classical
from todaprep.toda import custom_spec, preset

v = solve_classical(preset("A1"), 8).v
P = laurent({1: 2, -1: 2})            # U(x) = P(e^x)

m = classical_momentum(v, P, 3)
print("dphi/dx at q^1:", m[1])
print(residue_identity_check(v, P, 8))

# break v at one order and watch the identity fail there
bad = type(v)([c + 1 if k == 4 else c for k, c in enumerate(v)])
print(residue_identity_check(bad, P, 8))

# a generic Laurent polynomial, with v from its own Toda recursion
spec = custom_spec([[1]], [((1,), 1, 1), ((-1,), 1, 1), ((2,), 1, 1)])
print(residue_identity_check(solve_classical(spec, 6).v, laurent({1: 1, -1: 1, 2: 1}), 6))

# u = a^2 + v(a) solved for a, with a0^2 = u
a = invert_a_of_u(v, 6)
for k in (2, 4, 6):
    print(f"a_{k} = {a[k]}  =  {branch_form(a[k])}")
