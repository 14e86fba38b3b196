"""The skeletal and truncation spectral sequences of a cosimplicial chain complex.

Both start from different E1 pages. From E2 on, after reindexing the
truncation side, they agree term by term and their differentials match. The
d2 fixture has a nonzero d2 and the d3 fixture has a nonzero d3, so the
comparison sees real differentials.
"""
import random

from specseq.ss_compare import (
    compare_from_E2,
    d2_fixture,
    d3_fixture,
    e1_pages_differ,
    has_nonzero_differential,
    holim_ss,
    random_cosimplicial_chain_complex,
)

for name, X in (("d2 fixture", d2_fixture()), ("d3 fixture", d3_fixture())):
    nonzero = [r for r in (2, 3, 4) if has_nonzero_differential(X, r)]
    print("%s: nonzero d_r for r in %s" % (name, nonzero))
    for P in holim_ss(X, 4)[1:]:
        terms = ", ".join("%s:%s" % (k, G) for k, G in sorted(P.terms.items()) if not G.is_trivial())
        print("  E%d  %s" % (P.r, terms))
    rep = compare_from_E2(X, 5)
    print("  %d verdicts, all pass: %s" % (len(rep.verdicts), rep.all_pass))

rng = random.Random(11)
samples = [random_cosimplicial_chain_complex(rng) for _ in range(20)]
print("random inputs whose E1 pages differ: %d of %d" % (sum(map(e1_pages_differ, samples)), len(samples)))
print("random inputs agreeing from E2 on: %d of %d" % (sum(compare_from_E2(X, 4).all_pass for X in samples),
                                                       len(samples)))
