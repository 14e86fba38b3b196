"""Period divides the index computed by the twisted tower.

A class alpha in H^2 of a cover with cyclic coefficients twists the tower
used to compute descent. Its d2 sends the unit class to alpha, so the
generator of the surviving E_infinity^{0,1} term is a multiple of the
period. Here the two numbers agree on nerves of cyclic groups, and the
sphere-shaped cover shows a class of infinite order.
"""
from specseq.cech_brauer import (
    AbPresheaf,
    cech_cohomology,
    check_divisibility,
    cyclic_nerve_cover,
    d2_on_rank,
    h2_generators,
    period,
    sphere_cover,
    twisted_tower,
)
from specseq.exact_linalg import FgAbGroup

covers = [("nerve of Z/%d, coefficients Z/%d" % (n, m), cyclic_nerve_cover(n), m)
          for n, m in ((2, 2), (4, 6), (6, 4), (6, 9))]
covers.append(("sphere, coefficients Z", sphere_cover(), 0))

for name, H, m in covers:
    F = AbPresheaf.constant(H.site, FgAbGroup.cyclic(m))
    print("%s: H^2 = %s" % (name, cech_cohomology(H, F, 2)))
    for alpha in h2_generators(H, F):
        T = twisted_tower(H, F, alpha)
        v = check_divisibility(T)
        print("  class %s  d2(1) = %s  period %d  index %d  divides: %s"
              % (alpha.cls(), d2_on_rank(T, 1), period(alpha), v.eti, v.ok))
print("(period and index 0 mean infinite order)")
