"""Independent reference computations used to check the engine.

Everything here goes through sympy's Smith form or plain enumeration, never
through ``specseq.exact_linalg``.
"""
from __future__ import annotations

import math

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_decomp


def _snf(rows, m: int, n: int):
    """``(diag, U, V)`` with ``diag = U A V`` for the ``m x n`` integer matrix ``rows``."""
    if m == 0 or n == 0:
        return [], Matrix.eye(m), Matrix.eye(n)
    A = Matrix(m, n, [int(x) for r in rows for x in r])
    D, U, V = smith_normal_decomp(A, domain=ZZ)
    return [abs(int(D[i, i])) for i in range(min(m, n))], U, V


def matrix_invariants(rows, m: int, n: int) -> list[int]:
    """Nonzero Smith diagonal entries of an integer matrix, ascending."""
    diag, _, _ = _snf(rows, m, n)
    return sorted(d for d in diag if d)


def coker_invariants(cols, n: int) -> tuple[int, ...]:
    """Invariant factors of ``Z^n / span(cols)``: torsion ascending, then zeros."""
    cols = [list(c) for c in cols]
    rows = [[c[i] for c in cols] for i in range(n)]
    diag = matrix_invariants(rows, n, len(cols))
    torsion = [d for d in diag if d > 1]
    return tuple(torsion + [0] * (n - len(diag)))


def kernel_lattice(rows, m: int, n: int) -> list[list[int]]:
    """A basis of ``{x in Z^n : A x = 0}``."""
    if n == 0:
        return []
    if m == 0:
        return [[int(i == j) for i in range(n)] for j in range(n)]
    diag, _, V = _snf(rows, m, n)
    rank = sum(1 for d in diag if d)
    return [[int(V[i, j]) for i in range(n)] for j in range(rank, n)]


def lattice_basis(vectors, n: int) -> list[list[int]]:
    """A basis of the lattice spanned by ``vectors`` in ``Z^n``."""
    vectors = [list(v) for v in vectors if any(v)]
    if not vectors:
        return []
    rows = [[v[i] for v in vectors] for i in range(n)]
    diag, U, _ = _snf(rows, n, len(vectors))
    Uinv = U.inv()
    return [[int(diag[j] * Uinv[i, j]) for i in range(n)] for j in range(len(diag)) if diag[j]]


def quotient_invariants(big, small, n: int) -> tuple[int, ...]:
    """Invariant factors of ``span(big) / span(small)`` (``small`` must lie in ``span(big)``)."""
    basis = lattice_basis(big, n)
    if not basis:
        return ()
    B = Matrix([[b[i] for b in basis] for i in range(n)])
    coords = []
    for v in small:
        if not any(v):
            continue
        sol, params = B.gauss_jordan_solve(Matrix(v))
        if params.shape[0] or any(x.q != 1 for x in sol):
            raise AssertionError("vector is not in the lattice")
        coords.append([int(x) for x in sol])
    return coker_invariants(coords, len(basis))


def cohomology_invariants(groups, diffs, k: int) -> tuple[int, ...]:
    """``H`` at position ``k`` of ``G_0 -> G_1 -> ..`` given by presentations.

    ``groups[i] = (ngens, relation columns)``; ``diffs[i]`` is a row-list matrix
    ``G_i -> G_(i+1)`` on generators.
    """
    n, R = groups[k]
    if k + 1 < len(groups):
        m, R1 = groups[k + 1]
        d = diffs[k]
        # x is a cycle iff d x + R1 y = 0 for some y
        block = [list(d[i]) + [c[i] for c in R1] for i in range(m)]
        cycles = [v[:n] for v in kernel_lattice(block, m, n + len(R1))]
    else:
        cycles = [[int(i == j) for i in range(n)] for j in range(n)]
    bounds = [list(c) for c in R]
    if k > 0:
        d = diffs[k - 1]
        n0 = groups[k - 1][0]
        bounds += [[d[i][j] for i in range(n)] for j in range(n0)]
    return quotient_invariants(cycles + bounds, bounds, n)


def cyclic_group_cohomology(n: int, m: int, s: int) -> tuple[int, ...]:
    """``H^s(Z/n; Z/m)`` with trivial action (``m = 0`` means ``Z``)."""
    if m == 0:
        if s == 0:
            return (0,)
        return () if s % 2 else ((n,) if n > 1 else ())
    if s == 0:
        return (m,) if m > 1 else ()
    g = math.gcd(n, m)
    return (g,) if g > 1 else ()


def brute_force_pi1(G) -> tuple[int, tuple[int, ...]]:
    """Orbit count and basepoint orbit of ``Z^1`` under ``G^0`` by exhaustive union-find.

    A 1-cocycle satisfies ``∂^1 x = ∂^2 x · ∂^0 x``; ``g`` acts by
    ``x -> ∂^1 g · x · (∂^0 g)^(-1)``.
    """
    G0, G1, G2 = G.levels[:3]
    c0 = [G.cofaces[0][i] for i in range(2)]
    c1 = [G.cofaces[1][i] for i in range(3)]
    Z = [x for x in range(G1.order)
         if c1[1][x] == G2.mul(c1[2][x], c1[0][x])]
    parent = {x: x for x in Z}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in range(G0.order):
        b = G1.inv(c0[0][g])
        for x in Z:
            y = G1.mul(G1.mul(c0[1][g], x), b)
            parent[find(x)] = find(y)
    roots = {find(x) for x in Z}
    e = G1.identity
    base = tuple(sorted(x for x in Z if find(x) == find(e)))
    return len(roots), base
