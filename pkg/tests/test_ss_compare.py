import random

import pytest
from hypothesis import given, settings, strategies as st

from specseq.complexes import Page, skeletal_filtration, truncation_filtration, two_step_e2
from specseq.cosimplicial import cyclic_group
from specseq.exact_linalg import FgAbGroup, IntMatrix
from specseq.ss_compare import (
    ComparisonReport,
    Verdict,
    average,
    compare_abutment,
    compare_from_E2,
    compare_pages,
    d2_fixture,
    d3_fixture,
    e1_pages_differ,
    from_module_complex,
    has_nonzero_differential,
    holim_ss,
    is_equivariant,
    postnikov_ss,
    random_cosimplicial_chain_complex,
    regular_module,
    trivial_module,
)


@pytest.mark.parametrize("fixture", [d2_fixture, d3_fixture])
def test_fixtures_agree_from_e2(fixture):
    rep = compare_from_E2(fixture(), 5)
    assert rep.all_pass, rep.to_text()
    assert {"term", "d-image", "phi", "commute", "abutment", "E2-oracle"} <= rep.kinds()


def test_d2_fixture_has_nonzero_d2():
    X = d2_fixture()
    assert has_nonzero_differential(X, 2)
    assert not has_nonzero_differential(X, 3)


def test_d3_fixture_has_nonzero_d3():
    X = d3_fixture()
    assert has_nonzero_differential(X, 3)
    assert not has_nonzero_differential(X, 2)


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_random_inputs_agree(seed):
    X = random_cosimplicial_chain_complex(random.Random(seed))
    rep = compare_from_E2(X, 4)
    assert rep.all_pass, rep.to_text()


def test_e1_pages_differ_somewhere():
    rng = random.Random(11)
    assert any(e1_pages_differ(random_cosimplicial_chain_complex(rng)) for _ in range(20))


def test_e2_matches_two_step_homology():
    X = d3_fixture()
    hl = holim_ss(X, 2)
    P = hl[-1]
    for k, G in two_step_e2(X.double_complex()).items():
        assert P.term(*k) == G


def test_postnikov_pages_have_standard_bidegree():
    po = postnikov_ss(d2_fixture(), 4)
    for P in po:
        for (s, t), f in P.d.items():
            assert f.target == P.term(s + P.r, t + P.r - 1) or f.target.is_trivial()


def test_mismatched_pages_are_reported():
    hl = holim_ss(d2_fixture(), 2)[-1]
    po = postnikov_ss(d2_fixture(), 2)[-1]
    assert all(v.ok for v in compare_pages(hl, po))
    key = po.support()[0]
    doctored = Page(po.r, dict(po.terms), po.d, po.reps)
    doctored.terms[key] = FgAbGroup.cyclic(7)
    bad = [v for v in compare_pages(hl, doctored) if not v.ok]
    assert bad and bad[0].kind == "term" and bad[0].position == key


def test_abutment_filtrations_coincide():
    D = d3_fixture().double_complex()
    verdicts = compare_abutment(skeletal_filtration(D), truncation_filtration(D))
    assert verdicts and all(v.ok for v in verdicts)


def test_verdict_lines():
    v = Verdict("terms", 2, (0, 1), True, "Z")
    assert v.line().split() == ["terms", "r=2", "(0,1)", "PASS", "Z"]
    rep = ComparisonReport([v, Verdict("commute", 3, (1, 1), False, "")])
    assert not rep.all_pass
    assert len(rep.failures()) == 1
    assert "FAIL" in rep.to_text()


def test_averaging_gives_equivariant_maps():
    G = cyclic_group(3)
    R, T = regular_module(G), trivial_module(G)
    rng = random.Random(2)
    X = IntMatrix([[rng.randint(-3, 3) for _ in range(3)]], 3)
    f = average(G, R, T, X)
    assert is_equivariant(G, R, T, f)


def test_non_equivariant_differential_rejected():
    G = cyclic_group(2)
    R = regular_module(G)
    with pytest.raises(ValueError, match="equivariant"):
        from_module_complex(G, [R, R], [IntMatrix([[1, 0], [0, 0]])], 2)


def test_vertical_square_checked():
    G = cyclic_group(2)
    R = regular_module(G)
    one = IntMatrix.identity(2)
    with pytest.raises(ValueError):
        from_module_complex(G, [R, R, R], [one, one], 2)
