"""Seeded random inputs shared by the test modules."""
from __future__ import annotations

import functools
import math
import random

from specseq.complexes import CochainComplex, DoubleComplex
from specseq.cosimplicial import (
    CosimplicialFinGroup,
    FinGroup,
    abelian_as_fin,
    cobar,
    cyclic_group,
    direct_product,
    fin_product,
    permutation_group,
    symmetric_group,
    trivial_action,
)
from specseq.exact_linalg import AbHom, FgAbGroup, IntMatrix, element_order, integer_kernel, smith_normal_form


def random_matrix(rng: random.Random, m: int, n: int, bound: int = 9) -> IntMatrix:
    return IntMatrix([[rng.randint(-bound, bound) for _ in range(n)] for _ in range(m)], n)


def random_group(rng: random.Random, max_rank: int = 4, max_torsion: int = 12) -> FgAbGroup:
    """``Z^r`` plus up to two cyclic summands of order at most ``max_torsion``."""
    orders = [0] * rng.randint(0, max_rank)
    orders += [rng.randint(2, max_torsion) for _ in range(rng.randint(0, 2))]
    rng.shuffle(orders)
    rels = [{i: d} for i, d in enumerate(orders) if d]
    return FgAbGroup(len(orders), sparse_relations=rels)


def random_hom(rng: random.Random, src: FgAbGroup, tgt: FgAbGroup, kill=(), bound: int = 3) -> AbHom:
    """A random homomorphism ``src -> tgt`` that also vanishes on the vectors ``kill``.

    With ``D = L R Q`` for the relations ``R`` (plus ``kill``), the map is
    ``sum_i y_i L_i`` where each ``y_i`` has order dividing ``D_ii``.
    """
    rels = src.relation_columns() + [list(v) for v in kill]
    n = src.ngens
    R = IntMatrix.from_columns(rels, n) if rels else IntMatrix.zeros(n, 0)
    D, L, _ = smith_normal_form(R)
    diag = [D[i, i] if i < min(D.shape) else 0 for i in range(n)]
    Y = [[0] * n for _ in range(tgt.ngens)]
    for i, d in enumerate(diag):
        if d in (1, -1):
            continue
        y = [rng.randint(-bound, bound) for _ in range(tgt.ngens)]
        if d:
            o = element_order(tgt, y)
            y = [0] * tgt.ngens if o == math.inf else [v * (o // math.gcd(o, d)) for v in y]
        for a in range(tgt.ngens):
            for j in range(n):
                Y[a][j] += y[a] * L[i, j]
    return AbHom(src, tgt, IntMatrix(Y, n))


def random_complex(rng: random.Random, length: int | None = None) -> CochainComplex:
    """Random bounded complex with levels ``<= Z^4 + torsion of order <= 12``."""
    L = length if length is not None else rng.randint(1, 4)
    groups = [random_group(rng) for _ in range(L)]
    diffs = []
    for k in range(L - 1):
        kill = diffs[-1].columns() if diffs else ()
        d = random_hom(rng, groups[k], groups[k + 1], kill=kill)
        if rng.random() < 0.1:
            d = AbHom.zero(groups[k], groups[k + 1])
        diffs.append(d)
    return CochainComplex(rng.randint(-2, 2), groups, diffs)


def _free_complex(rng: random.Random, n: int, r: int = 2):
    """Free cochain complex ``Z^{a_0} -> .. -> Z^{a_n}`` with small random maps."""
    dims = [rng.randint(0, r) for _ in range(n + 1)]
    maps = []
    prev = None
    for k in range(n):
        m, nn = dims[k + 1], dims[k]
        if prev is None:
            M = random_matrix(rng, m, nn, 2)
        else:
            K = integer_kernel(prev.T).columns() if prev.nrows else []
            rows = [[0] * nn for _ in range(m)]
            for i in range(m):
                for v in K:
                    c = rng.randint(-1, 1)
                    rows[i] = [a + c * b for a, b in zip(rows[i], v)]
            M = IntMatrix(rows, nn)
        prev = M
        maps.append(M)
    return dims, maps


def _kron(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    rows = [[A[i, j] * B[k, l] for j in range(A.ncols) for l in range(B.ncols)]
            for i in range(A.nrows) for k in range(B.nrows)]
    return IntMatrix(rows, A.ncols * B.ncols)


def tensor_double_complex(rng: random.Random, S: int = 2, T: int = 2) -> DoubleComplex:
    """``A^{s,t} = X^s ⊗ Y^(T-t)`` for random free complexes X and Y."""
    a, hs = _free_complex(rng, S)
    b, vs = _free_complex(rng, T)
    groups, dh, dv = {}, {}, {}
    for s in range(S + 1):
        for t in range(T + 1):
            groups[(s, t)] = FgAbGroup.free(a[s] * b[T - t])
    for s in range(S):
        for t in range(T + 1):
            dh[(s, t)] = _kron(hs[s], IntMatrix.identity(b[T - t]))
    for s in range(S + 1):
        for t in range(1, T + 1):
            dv[(s, t)] = _kron(IntMatrix.identity(a[s]), vs[T - t])
    return DoubleComplex(groups, dh, dv, S, T)


# ---------------------------------------------------------------------------
# Finite cosimplicial groups with |G^1| <= 24


def dihedral_group(n: int):
    rot = [tuple((i + k) % n for i in range(n)) for k in range(n)]
    ref = [tuple((k - i) % n for i in range(n)) for k in range(n)]
    return permutation_group(rot + ref)


def quaternion_group():
    # units ±1, ±i, ±j, ±k as signed basis indices: (sign, index) with index 0..3 for 1, i, j, k
    mul = {(0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
           (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
           (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
           (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0)}
    elems = [(s, i) for s in (1, -1) for i in range(4)]
    idx = {e: n for n, e in enumerate(elems)}
    table = []
    for (s1, i1) in elems:
        row = []
        for (s2, i2) in elems:
            s, i = mul[(i1, i2)]
            row.append(idx[(s1 * s2 * s, i)])
        table.append(row)
    return FinGroup(table)


def _fin_cobar(n: int, m: int, sign: bool = False, N: int = 2) -> CosimplicialFinGroup:
    G = cyclic_group(n)
    M = FgAbGroup.cyclic(m)
    if sign:
        action = [AbHom(M, M, IntMatrix([[1 if g == 0 else -1]])) for g in G.elements()]
    else:
        action = trivial_action(G, M)
    return abelian_as_fin(cobar(G, M, action, N))


def _klein_swap() -> CosimplicialFinGroup:
    G = cyclic_group(2)
    M = FgAbGroup.from_invariants([2, 2])
    action = [AbHom.identity(M), AbHom(M, M, IntMatrix([[0, 1], [1, 0]]))]
    return abelian_as_fin(cobar(G, M, action, 2))


@functools.lru_cache(maxsize=None)
def pi1_fixtures() -> dict[str, CosimplicialFinGroup]:
    const = CosimplicialFinGroup.constant
    S3 = symmetric_group(3)
    return {
        "const Z/6": const(cyclic_group(6)),
        "const S3": const(S3),
        "const D4": const(dihedral_group(4)),
        "const Q8": const(quaternion_group()),
        "const S4": const(symmetric_group(4)),
        "const Z/2xZ/2": const(direct_product(cyclic_group(2), cyclic_group(2))),
        "bar Z/2 in Z/2": _fin_cobar(2, 2),
        "bar Z/2 in Z/3 sign": _fin_cobar(2, 3, sign=True),
        "bar Z/2 in Z/4 sign": _fin_cobar(2, 4, sign=True),
        "bar Z/3 in Z/2": _fin_cobar(3, 2),
        "bar Z/4 in Z/2": _fin_cobar(4, 2),
        "bar Z/2 in (Z/2)^2 swap": _klein_swap(),
        "S3 x bar Z/2 in Z/2": fin_product(const(S3), _fin_cobar(2, 2)),
        "Z/3 x bar Z/2 in Z/2": fin_product(const(cyclic_group(3)), _fin_cobar(2, 2)),
        "bar Z/2 in Z/2 x const Z/2": fin_product(_fin_cobar(2, 2), const(cyclic_group(2))),
    }


# ---------------------------------------------------------------------------
# Covers and coefficients for the divisibility model

NERVE_PAIRS = [(2, 2), (2, 3), (2, 4), (3, 3), (3, 6), (4, 2), (4, 4), (4, 6), (5, 5), (5, 10),
               (6, 4), (6, 9), (7, 7), (8, 12), (9, 6), (10, 4), (12, 8), (12, 9), (11, 2), (12, 12)]


@functools.lru_cache(maxsize=None)
def cover_corpus():
    """``(name, cover, coefficients)`` triples: cyclic nerves, a Klein-four nerve, S3, a sphere."""
    from specseq.cech_brauer import AbPresheaf, cyclic_nerve_cover, nerve_cover, sphere_cover

    out = []
    for n, m in NERVE_PAIRS:
        H = cyclic_nerve_cover(n)
        out.append(("nerve Z/%d, Z/%d" % (n, m), H, AbPresheaf.constant(H.site, FgAbGroup.cyclic(m))))
    H = cyclic_nerve_cover(3, copies=2)
    out.append(("nerve Z/3 doubled, Z/3", H, AbPresheaf.constant(H.site, FgAbGroup.cyclic(3))))
    H = nerve_cover(direct_product(cyclic_group(2), cyclic_group(2)))
    out.append(("nerve Z/2xZ/2, Z/2", H, AbPresheaf.constant(H.site, FgAbGroup.cyclic(2))))
    H = nerve_cover(symmetric_group(3))
    out.append(("nerve S3, Z/2", H, AbPresheaf.constant(H.site, FgAbGroup.cyclic(2))))
    H = sphere_cover()
    for m in (0, 2, 5):
        out.append(("sphere, Z/%d" % m if m else "sphere, Z", H, AbPresheaf.constant(H.site, FgAbGroup.cyclic(m))))
    return tuple(out)
