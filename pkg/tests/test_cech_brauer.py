import math

import pytest
from hypothesis import given, strategies as st

from generators import cover_corpus
from specseq.cech_brauer import (
    AbPresheaf,
    CechComplex,
    Cocycle2,
    CocycleError,
    DivisibilityVerdict,
    FiniteSite,
    OneHypercover,
    carry_theta,
    cech_cohomology,
    cech_complex,
    check_divisibility,
    class_multiple,
    cocycle_from_gluing,
    cohomologous,
    cyclic_lift,
    cyclic_nerve_cover,
    d2_on_rank,
    eti_from_pages,
    eti_model,
    h2_generators,
    lift_to_gluing,
    nerve_cover,
    period,
    sphere_cover,
    twisted_tower,
)
from specseq.cosimplicial import cobar, cohomotopy, cyclic_group, direct_product, symmetric_group, trivial_action
from specseq.exact_linalg import AbHom, FgAbGroup, IntMatrix

CORPUS = {name: (H, F) for name, H, F in cover_corpus()}
# the largest nerves are left to the acceptance suite
SMALL = sorted(name for name, (H, F) in CORPUS.items() if len(H.level(3)) <= 512)


def test_site_closes_under_meets():
    S = FiniteSite([{0, 1}, {1, 2}])
    assert frozenset({1}) in S
    assert frozenset() in S
    assert S.top == frozenset({0, 1, 2})
    with pytest.raises(ValueError):
        FiniteSite([{0, 5}], top={0})


def test_presheaf_composition_checked():
    S = FiniteSite([{0}], top={0, 1})
    Z = FgAbGroup.free(1)
    groups = {o: Z if o else FgAbGroup.trivial() for o in S.opens}
    top, pt, empty = frozenset({0, 1}), frozenset({0}), frozenset()
    res = {(top, pt): AbHom(Z, Z, IntMatrix([[2]])),
           (top, empty): AbHom.zero(Z, groups[empty]),
           (pt, empty): AbHom.zero(Z, groups[empty])}
    AbPresheaf(S, groups, res)
    bad = dict(res)
    bad[(top, top)] = AbHom(Z, Z, IntMatrix([[-1]]))
    with pytest.raises(ValueError):
        AbPresheaf(S, groups, bad)


def test_cover_rejects_oversized_piece():
    S = FiniteSite([{0}, {1}], top={0, 1})
    U = [{0}, {1}]
    V = {(i, j): {0: frozenset(U[i]) & frozenset(U[j])} for i in range(2) for j in range(2)}
    OneHypercover(S, U, V)
    V[(0, 1)] = {0: frozenset({0})}
    with pytest.raises(ValueError, match="not inside"):
        OneHypercover(S, U, V)
    del V[(0, 1)]
    with pytest.raises(ValueError, match="no pieces"):
        OneHypercover(S, U, V)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_nerve_level_sizes(n):
    H = cyclic_nerve_cover(n)
    assert [len(H.level(k)) for k in range(4)] == [1, n, n * n, n ** 3]
    with pytest.raises(ValueError):
        H.level(4)


@pytest.mark.parametrize("G,A", [
    (cyclic_group(2), FgAbGroup.free(1)),
    (cyclic_group(3), FgAbGroup.cyclic(6)),
    (cyclic_group(4), FgAbGroup.cyclic(2)),
    (direct_product(cyclic_group(2), cyclic_group(2)), FgAbGroup.cyclic(2)),
    (symmetric_group(3), FgAbGroup.free(1)),
    (symmetric_group(3), FgAbGroup.cyclic(3)),
])
def test_nerve_cech_equals_bar_cohomology(G, A):
    H = nerve_cover(G)
    F = AbPresheaf.constant(H.site, A)
    bar = cobar(G, A, trivial_action(G, A), 3)
    for s in range(3):
        assert cech_cohomology(H, F, s) == cohomotopy(bar, s)


@given(st.integers(2, 8), st.integers(0, 8))
def test_cyclic_nerve_closed_form(n, m):
    H = cyclic_nerve_cover(n)
    F = AbPresheaf.constant(H.site, FgAbGroup.cyclic(m) if m != 1 else FgAbGroup.trivial())
    g = math.gcd(n, m)
    expect = (g,) if g > 1 else ()
    if m == 0:
        expect = (n,)
    assert cech_cohomology(H, F, 2).invariants() == expect


@pytest.mark.parametrize("m", [0, 2, 6])
def test_sphere_cover(m):
    H = sphere_cover()
    A = FgAbGroup.cyclic(m)
    F = AbPresheaf.constant(H.site, A)
    assert [cech_cohomology(H, F, s) for s in range(3)] == [A, FgAbGroup.trivial(), A]


def test_top_degree_is_out_of_window():
    H = cyclic_nerve_cover(2)
    F = AbPresheaf.constant(H.site, FgAbGroup.cyclic(2))
    with pytest.raises(ValueError):
        cech_complex(H, F).cohomology_subquotient(3)
    with pytest.raises(ValueError):
        CechComplex(H, F, smax=4)


def test_non_cocycle_rejected():
    H = cyclic_nerve_cover(2)
    F = AbPresheaf.constant(H.site, FgAbGroup.cyclic(3))
    n = cech_complex(H, F).group(2).ngens
    with pytest.raises(CocycleError):
        Cocycle2(H, F, [1] + [0] * (n - 1))
    with pytest.raises(ValueError):
        Cocycle2(H, F, [0] * (n + 1))


@pytest.mark.parametrize("name", SMALL)
def test_divisibility_model(name):
    H, F = CORPUS[name]
    for alpha in h2_generators(H, F):
        for a in (alpha, alpha.scaled(2)):
            T = twisted_tower(H, F, a)
            per = period(a)
            assert d2_on_rank(T, 1) == a.cls()
            assert d2_on_rank(T, 0) == class_multiple(a, 0)
            assert d2_on_rank(T, 3) == class_multiple(a, 3)
            assert eti_model(T) == per == eti_from_pages(T)
            assert check_divisibility(T).ok


def test_twisted_e2_page():
    H, F = CORPUS["nerve Z/4, Z/6"]
    alpha = h2_generators(H, F)[0]
    T = twisted_tower(H, F, alpha)
    Z = AbPresheaf.constant(H.site, FgAbGroup.free(1))
    P = T.page(2)
    for s in range(3):
        assert P.term(s, 1) == cech_cohomology(H, Z, s)
        assert P.term(s, 2) == cech_cohomology(H, F, s)


def test_zero_class_has_full_index():
    H = cyclic_nerve_cover(3)
    F = AbPresheaf.constant(H.site, FgAbGroup.cyclic(3))
    zero = Cocycle2(H, F, [0] * cech_complex(H, F).group(2).ngens)
    T = twisted_tower(H, F, zero)
    assert period(zero) == 1 and eti_model(T) == 1
    assert d2_on_rank(T, 1) == [0]


def test_disconnected_cover_rejected():
    S = FiniteSite([{0}, {1}], top={0, 1})
    U = [{0}, {1}]
    V = {(i, j): {0: frozenset(U[i]) & frozenset(U[j])} for i in range(2) for j in range(2)}
    H = OneHypercover(S, U, V)
    F = AbPresheaf.constant(S, FgAbGroup.cyclic(2))
    T = twisted_tower(H, F, Cocycle2(H, F, [0] * cech_complex(H, F).group(2).ngens))
    with pytest.raises(ValueError, match="H\\^0"):
        eti_model(T)


@pytest.mark.parametrize("period_, eti, ok", [(2, 4, True), (3, 4, False), (0, 0, True), (0, 2, False), (1, 5, True)])
def test_divisibility_verdict(period_, eti, ok):
    assert DivisibilityVerdict(period_, eti).ok is ok


@pytest.mark.parametrize("n,m", [(2, 2), (3, 6), (4, 6), (6, 4), (5, 5)])
def test_gluing_round_trip(n, m):
    H = cyclic_nerve_cover(n)
    F, Fl, iota = cyclic_lift(H.site, m, n)
    alpha = cocycle_from_gluing(H, Fl, carry_theta(n, H, Fl), F, iota)
    assert period(alpha) == math.gcd(n, m)
    theta = lift_to_gluing(alpha, Fl, iota)
    assert theta is not None
    again = cocycle_from_gluing(H, Fl, theta, F, iota)
    assert cohomologous(again, alpha)
    # every class, not just the carry class, comes back from its lift
    for a in h2_generators(H, F):
        th = lift_to_gluing(a, Fl, iota)
        assert cocycle_from_gluing(H, Fl, th, F, iota).cls() == a.cls()


def test_sphere_class_has_no_cyclic_lift():
    H = sphere_cover()
    F, Fl, iota = cyclic_lift(H.site, 2, 2)
    alpha = h2_generators(H, F)[0]
    assert lift_to_gluing(alpha, Fl, iota) is None


def test_gluing_defect_outside_coefficients():
    H = cyclic_nerve_cover(2)
    F, Fl, iota = cyclic_lift(H.site, 2, 3)
    theta = carry_theta(2, H, Fl)
    with pytest.raises(ValueError, match="does not come from"):
        cocycle_from_gluing(H, Fl, theta, F, iota)
    with pytest.raises(ValueError):
        cocycle_from_gluing(H, Fl, theta[:-1])


def test_cocycle_arithmetic():
    H = cyclic_nerve_cover(4)
    F = AbPresheaf.constant(H.site, FgAbGroup.cyclic(4))
    (a,) = h2_generators(H, F)
    assert (a + a).cls() == a.scaled(2).cls() == class_multiple(a, 2)
    assert period(a.scaled(2)) == 2
    assert len(a.values()) == len(H.level(2))
