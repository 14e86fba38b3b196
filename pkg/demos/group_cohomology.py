"""Cohomology of cyclic groups from the cobar cosimplicial object.

The cobar object of a group G acting on a module M has cohomotopy equal to
group cohomology H^s(G, M). For G = Z/n acting trivially on Z the answer is
Z, 0, Z/n, 0, Z/n, ...; with the sign action of Z/2 the pattern shifts.
"""
from specseq.cosimplicial import cobar, cohomotopy, cyclic_group, pi1_pointed_set, abelian_as_fin, trivial_action
from specseq.exact_linalg import AbHom, FgAbGroup, IntMatrix

Z = FgAbGroup.free(1)

print("trivial action on Z, degrees 0..2")
for n in (2, 3, 4, 6):
    G = cyclic_group(n)
    A = cobar(G, Z, trivial_action(G, Z), 3)
    print("  Z/%d:" % n, ", ".join(str(cohomotopy(A, s)) for s in range(3)))

# the generator of Z/2 acts by -1
G = cyclic_group(2)
sign = [AbHom(Z, Z, IntMatrix([[1 if g == G.identity else -1]])) for g in G.elements()]
A = cobar(G, Z, sign, 3)
print("sign action of Z/2 on Z:", ", ".join(str(cohomotopy(A, s)) for s in range(3)))

# with finite coefficients, pi^1 can also be read as a set of orbits
M = FgAbGroup.cyclic(4)
A = cobar(G, M, trivial_action(G, M), 2)
orbits = pi1_pointed_set(abelian_as_fin(A))
print("Z/2 acting trivially on Z/4: H^1 = %s, orbit count %d" % (cohomotopy(A, 1), len(orbits)))
