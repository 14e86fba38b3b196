"""Headline criteria, one test each; every test prints a single PASS/FAIL line."""
import math
import random
import re
import time

import pytest

import oracles
from cli_cases import CASES, FIXTURES, check_golden, run_case
from conftest import ACCEPTANCE_LINES
from generators import cover_corpus, pi1_fixtures, random_complex, tensor_double_complex
from specseq import textio
from specseq.cech_brauer import (
    check_divisibility,
    class_multiple,
    cocycle_from_gluing,
    cyclic_lift,
    d2_on_rank,
    eti_from_pages,
    eti_model,
    h2_generators,
    lift_to_gluing,
    period,
    twisted_tower,
)
from specseq.complexes import cohomology, filtered_page, skeletal_filtration, truncation_filtration
from specseq.cosimplicial import (
    CosimplicialAbGroup,
    check_pi_quasi_iso,
    cobar,
    cohomotopy,
    cyclic_group,
    pi1_pointed_set,
    trivial_action,
)
from specseq.exact_couple import couple_from_tower, couple_pages, tower_from_filtration
from specseq.exact_linalg import AbHom, FgAbGroup, IntMatrix, smith_normal_form
from specseq.ss_compare import (
    compare_from_E2,
    d2_fixture,
    d3_fixture,
    e1_pages_differ,
    has_nonzero_differential,
    random_cosimplicial_chain_complex,
)

pytestmark = pytest.mark.acceptance

Z = FgAbGroup.free(1)


def report(number: int, title: str, failures: list[str], detail: str = "") -> None:
    line = "C%d %s %s%s" % (number, "PASS" if not failures else "FAIL", title,
                            " (%s)" % detail if detail else "")
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert not failures, "\n".join(failures[:10])


def test_c1_normal_forms():
    rng = random.Random(20240601)
    bad = []
    start = time.perf_counter()
    for k in range(200):
        m, n = rng.randint(1, 6), rng.randint(1, 6)
        M = IntMatrix([[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)], n)
        D, L, R = smith_normal_form(M)
        diag = [D[i, i] for i in range(min(m, n))]
        nz = [d for d in diag if d]
        checks = [
            L @ M @ R == D,
            L.is_unimodular() and R.is_unimodular(),
            all(D[i, j] == 0 for i in range(m) for j in range(n) if i != j),
            all(d > 0 for d in nz) and diag[:len(nz)] == nz,
            all(b % a == 0 for a, b in zip(nz, nz[1:])),
            nz == [d for d in oracles.matrix_invariants(M.rows(), m, n) if d],
        ]
        if not all(checks):
            bad.append("matrix %d: %s" % (k, M.rows()))
    elapsed = time.perf_counter() - start
    if elapsed >= 5:
        bad.append("took %.2f s" % elapsed)
    report(1, "normal forms on 200 seeded matrices", bad, "%.2f s" % elapsed)


def test_c2_homology_oracle():
    bad = []
    for seed in range(100):
        C = random_complex(random.Random(seed))
        groups = [(G.ngens, G.relation_columns()) for G in C.groups]
        diffs = [f.matrix.rows() for f in C.diffs]
        for k, n in enumerate(C.degrees()):
            if cohomology(C, n).invariants() != oracles.cohomology_invariants(groups, diffs, k):
                bad.append("seed %d degree %d" % (seed, n))
    report(2, "cohomology of 100 random complexes equals the lattice oracle", bad)


def test_c3_cohomotopy():
    bad = []
    for inv in ([0], [6], [2, 0, 0], [3, 12]):
        A = FgAbGroup.from_invariants(inv)
        X = CosimplicialAbGroup.constant(A, 4)
        if cohomotopy(X, 0) != A or not all(cohomotopy(X, s).is_trivial() for s in range(1, 4)):
            bad.append("constant %s" % A)
    for n in (2, 3, 4, 6):
        G = cyclic_group(n)
        X = cobar(G, Z, trivial_action(G, Z), 3)
        got = [cohomotopy(X, s).invariants() for s in range(3)]
        if got != [(0,), (), (n,)] or got != [oracles.cyclic_group_cohomology(n, 0, s) for s in range(3)]:
            bad.append("cobar Z/%d: %s" % (n, got))
    report(3, "cohomotopy of constant objects and cyclic cobar", bad)


def test_c4_nonabelian_pi1():
    bad = []
    fixtures = pi1_fixtures()
    for name, G in sorted(fixtures.items()):
        if G.levels[1].order > 24:
            bad.append("%s exceeds the size bound" % name)
        orbits = pi1_pointed_set(G)
        count, base = oracles.brute_force_pi1(G)
        if len(orbits) != count or orbits[0] != base:
            bad.append("%s: %d orbits, enumeration gives %d" % (name, len(orbits), count))
        if name.startswith("const") and len(orbits) != 1:
            bad.append("%s is not a point" % name)
    report(4, "pi^1 orbits equal exhaustive enumeration", bad, "%d fixtures" % len(fixtures))


def _sign_action(G, M):
    return [AbHom(M, M, IntMatrix.identity(M.ngens).scale(1 if g == G.identity else -1))
            for g in G.elements()]


def _quasi_iso_corpus():
    Z2, Z4 = cyclic_group(2), cyclic_group(4)
    C2 = FgAbGroup.cyclic(2)
    return [
        ("constant Z", lambda N: CosimplicialAbGroup.constant(Z, N), (2, 3)),
        ("constant Z/6+Z", lambda N: CosimplicialAbGroup.constant(FgAbGroup.from_invariants([6, 0]), N), (2, 3)),
        ("cobar Z/2, Z", lambda N: cobar(Z2, Z, trivial_action(Z2, Z), N), (2, 3)),
        ("cobar Z/2, sign Z", lambda N: cobar(Z2, Z, _sign_action(Z2, Z), N), (2, 3)),
        ("cobar Z/3, Z", lambda N: cobar(cyclic_group(3), Z, trivial_action(cyclic_group(3), Z), N), (2,)),
        ("cobar Z/4, Z/2", lambda N: cobar(Z4, C2, trivial_action(Z4, C2), N), (2,)),
    ]


def test_c5_replacement_quasi_iso():
    bad = []
    runs = 0
    for name, build, bounds in _quasi_iso_corpus():
        for M in bounds:
            A = build(M)
            verdicts = check_pi_quasi_iso(A, M)
            runs += 1
            if [v.degree for v in verdicts] != list(range(M - 1)):
                bad.append("%s M=%d: degrees %s" % (name, M, [v.degree for v in verdicts]))
            for v in verdicts:
                if not (v.iso and v.source == v.target):
                    bad.append("%s M=%d degree %d" % (name, M, v.degree))
    report(5, "unit map into the replacement is a quasi-isomorphism", bad, "%d checks" % runs)


def test_c6_comparison():
    bad = []
    start = time.perf_counter()
    inputs = [("d2 fixture", d2_fixture()), ("d3 fixture", d3_fixture())]
    inputs += [("seed %d" % s, random_cosimplicial_chain_complex(random.Random(s))) for s in range(100)]
    needed = {"term", "d-image", "phi", "commute", "abutment", "E2-oracle"}
    for name, X in inputs:
        if X.S > 4 or X.T > 4:
            bad.append("%s is larger than S, T <= 4" % name)
        rep = compare_from_E2(X, 5)
        if not rep.all_pass:
            bad.append("%s: %s" % (name, rep.failures()[0].line()))
    for name, X in inputs[:2]:
        if not needed <= compare_from_E2(X, 5).kinds():
            bad.append("%s: missing verdict kinds" % name)
    if not (has_nonzero_differential(inputs[0][1], 2) and has_nonzero_differential(inputs[1][1], 3)):
        bad.append("fixtures lack their nonzero differential")
    if not any(e1_pages_differ(X) for _, X in inputs[2:]):
        bad.append("E1 pages never differ")
    elapsed = time.perf_counter() - start
    if elapsed >= 60:
        bad.append("took %.1f s" % elapsed)
    report(6, "holim and Postnikov spectral sequences agree for r = 2..5", bad,
           "%d inputs, %.1f s" % (len(inputs), elapsed))


def test_c7_divisibility_model():
    bad = []
    corpus = cover_corpus()
    classes = trips = 0
    if len(corpus) < 20:
        bad.append("corpus has only %d covers" % len(corpus))
    for name, H, F in corpus:
        for alpha in h2_generators(H, F):
            for a in (alpha, alpha.scaled(2)):
                classes += 1
                T = twisted_tower(H, F, a)
                per = period(a)
                ok = d2_on_rank(T, 1) == a.cls()
                ok = ok and all(d2_on_rank(T, k) == class_multiple(a, k) for k in (0, 2, 3))
                ok = ok and eti_model(T) == per == eti_from_pages(T)
                ok = ok and check_divisibility(T).ok
                if not ok:
                    bad.append("%s, class %s" % (name, a.cls()))
        cyclic = re.match(r"nerve Z/(\d+)(?: doubled)?, ", name)
        if not cyclic:
            continue
        # round trip through a gluing datum in Z/mn, with n the order of the cyclic group
        n = int(cyclic.group(1))
        invs = F.group(H.site.top).invariants()
        m = invs[0] if invs else 1
        Fc, Fl, iota = cyclic_lift(H.site, m, n)
        for alpha in h2_generators(H, Fc):
            theta = lift_to_gluing(alpha, Fl, iota)
            trips += 1
            if theta is None or cocycle_from_gluing(H, Fl, theta, Fc, iota).cls() != alpha.cls():
                bad.append("%s: round trip" % name)
            if math.gcd(n, m) != period(alpha):
                bad.append("%s: period %d" % (name, period(alpha)))
    report(7, "d2([1]) = alpha and per | eti over the cover corpus", bad,
           "%d covers, %d classes, %d round trips" % (len(corpus), classes, trips))


def _chain_fixtures():
    out = [("d2 fixture", d2_fixture()), ("d3 fixture", d3_fixture())]
    for name in ("ss_d2", "ss_d3", "ss_bar", "ss_random"):
        text = (FIXTURES / (name + ".txt")).read_text(encoding="utf-8")
        out.append((name, textio.read_cosimplicial(textio.parse(text)).chain))
    return out


def test_c8_couple_matches_filtered_pages():
    bad = []
    doubles = [(name, X.double_complex()) for name, X in _chain_fixtures()]
    doubles += [("tensor seed %d" % s, tensor_double_complex(random.Random(s))) for s in range(15)]
    doubles += [("random seed %d" % s, random_cosimplicial_chain_complex(random.Random(s)).double_complex())
                for s in range(15)]
    for name, D in doubles:
        for label, F in (("skeletal", skeletal_filtration(D)), ("truncation", truncation_filtration(D))):
            pages = couple_pages(couple_from_tower(tower_from_filtration(F)), 5)
            for r, P in enumerate(pages, start=1):
                if P.signature() != filtered_page(F, r).signature():
                    bad.append("%s, %s filtration, r=%d" % (name, label, r))
    report(8, "exact couple pages equal filtered-complex pages for r = 1..5", bad,
           "%d double complexes" % len(doubles))


def test_c9_cli_determinism():
    bad = []
    for name, argv, fixture, code in CASES:
        first, second = run_case(argv, fixture), run_case(argv, fixture)
        if first != second:
            bad.append("%s differs between runs" % name)
        if first[0] != code:
            bad.append("%s exit %d" % (name, first[0]))
        if not check_golden(name, first[1]):
            bad.append("%s differs from its golden file" % name)
    errs = [run_case(["cech"], "bad_cover.txt") for _ in range(2)]
    if errs[0] != errs[1] or errs[0][0] != 2:
        bad.append("bad_cover error output")
    report(9, "CLI output is byte-identical and matches golden files", bad, "%d cases" % len(CASES))
