"""Truncated cosimplicial abelian groups and finite cosimplicial groups.

A cosimplicial object is stored up to a level ``N``: cofaces
``∂^i : A^n -> A^(n+1)`` for ``n < N`` and codegeneracies
``s^i : A^n -> A^(n-1)`` for ``n >= 1``.  Each operation states which degrees
it can be trusted in: cohomotopy ``π^s`` needs ``A^(s+1)``, so ``s <= N - 1``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from math import comb
from typing import Sequence

from .complexes import CochainComplex, _block_matrix, cohomology
from .exact_linalg import AbHom, FgAbGroup, IntMatrix, Subquotient, _self_subquotient, direct_sum, induced_map


class CosimplicialIdentityError(ValueError):
    """A cosimplicial identity fails; ``instance`` names the offending equation."""

    def __init__(self, instance: str):
        self.instance = instance
        super().__init__("cosimplicial identity fails: " + instance)


def _identity_instances(N: int):
    """Yield ``(label, lhs, rhs)`` index triples for every identity up to level N.

    Each side is a list of ("d"|"s", index, source_level) steps applied left to right.
    """
    for n in range(N - 1):
        for j in range(n + 2 + 1):
            for i in range(j):
                # ∂^j ∂^i = ∂^i ∂^(j-1) on A^n
                yield ("d%d d%d = d%d d%d on level %d" % (j, i, i, j - 1, n),
                       [("d", i, n), ("d", j, n + 1)], [("d", j - 1, n), ("d", i, n + 1)])
    for n in range(N):
        # s^j ∂^i : A^n -> A^(n+1) -> A^n with 0 <= j <= n
        for j in range(n + 1):
            for i in range(n + 2):
                label = "s%d d%d on level %d" % (j, i, n)
                lhs = [("d", i, n), ("s", j, n + 1)]
                if i < j:
                    yield (label, lhs, [("s", j - 1, n), ("d", i, n - 1)])
                elif i in (j, j + 1):
                    yield (label, lhs, [])
                else:
                    yield (label, lhs, [("s", j, n), ("d", i - 1, n - 1)])
    for n in range(2, N + 1):
        # s^j s^i = s^i s^(j+1) for i <= j, on A^n
        for j in range(n - 1):
            for i in range(j + 1):
                yield ("s%d s%d = s%d s%d on level %d" % (j, i, i, j + 1, n),
                       [("s", i, n), ("s", j, n - 1)], [("s", j + 1, n), ("s", i, n - 1)])


class CosimplicialAbGroup:
    """Levels ``A^0 .. A^N`` with coface and codegeneracy homomorphisms.

    ``cofaces[n][i]`` is ``∂^i : A^n -> A^(n+1)`` and ``codegeneracies[n][i]``
    is ``s^i : A^n -> A^(n-1)`` (so ``codegeneracies[0]`` is empty).
    """

    def __init__(self, levels: Sequence[FgAbGroup], cofaces, codegeneracies, check: bool = True):
        self.levels = list(levels)
        self.N = len(levels) - 1
        N = self.N
        if len(cofaces) != N:
            raise ValueError("need cofaces out of levels 0..%d" % (N - 1))
        if len(codegeneracies) != N + 1:
            raise ValueError("need codegeneracies out of levels 0..%d" % N)
        self.cofaces: list[list[AbHom]] = []
        for n, maps in enumerate(cofaces):
            if len(maps) != n + 2:
                raise ValueError("level %d needs %d cofaces, got %d" % (n, n + 2, len(maps)))
            self.cofaces.append([m if isinstance(m, AbHom) else AbHom(levels[n], levels[n + 1], m, check=check)
                                 for m in maps])
        self.codegeneracies: list[list[AbHom]] = []
        for n, maps in enumerate(codegeneracies):
            if len(maps) != n:
                raise ValueError("level %d needs %d codegeneracies, got %d" % (n, n, len(maps)))
            self.codegeneracies.append([m if isinstance(m, AbHom) else AbHom(levels[n], levels[n - 1], m, check=check)
                                        for m in maps])
        self._C = None
        if check:
            self.check()

    def coface(self, n: int, i: int) -> AbHom:
        return self.cofaces[n][i]

    def codegeneracy(self, n: int, i: int) -> AbHom:
        return self.codegeneracies[n][i]

    def _run(self, steps, n0: int) -> AbHom:
        f = AbHom.identity(self.levels[n0])
        for kind, i, n in steps:
            g = self.coface(n, i) if kind == "d" else self.codegeneracy(n, i)
            f = g.compose(f)
        return f

    def check(self) -> None:
        for label, lhs, rhs in _identity_instances(self.N):
            n0 = lhs[0][2]
            a = self._run(lhs, n0)
            b = self._run(rhs, n0)
            if a.matrix.shape != b.matrix.shape or not a.equals(b):
                raise CosimplicialIdentityError(label)

    @classmethod
    def constant(cls, A: FgAbGroup, N: int) -> "CosimplicialAbGroup":
        """Every level ``A`` and every structure map the identity."""
        I = AbHom.identity(A)
        return cls([A] * (N + 1), [[I] * (n + 2) for n in range(N)],
                   [[I] * n for n in range(N + 1)], check=False)

    @classmethod
    def zero(cls, N: int) -> "CosimplicialAbGroup":
        return cls.constant(FgAbGroup.trivial(), N)

    def truncate(self, N: int) -> "CosimplicialAbGroup":
        if N > self.N:
            raise ValueError("cannot extend a truncation from %d to %d" % (self.N, N))
        return CosimplicialAbGroup(self.levels[:N + 1], self.cofaces[:N], self.codegeneracies[:N + 1],
                                   check=False)


def product(A: CosimplicialAbGroup, B: CosimplicialAbGroup) -> CosimplicialAbGroup:
    """Levelwise direct sum (truncated at the smaller level)."""
    N = min(A.N, B.N)

    def blk(f: AbHom, g: AbHom, src, tgt) -> AbHom:
        M = _block_matrix(tgt.ngens, src.ngens,
                          [(0, 0, f.matrix), (f.target.ngens, f.source.ngens, g.matrix)])
        return AbHom(src, tgt, M, check=False)

    levels = [direct_sum(A.levels[n], B.levels[n]) for n in range(N + 1)]
    cof = [[blk(A.coface(n, i), B.coface(n, i), levels[n], levels[n + 1]) for i in range(n + 2)]
           for n in range(N)]
    cod = [[blk(A.codegeneracy(n, i), B.codegeneracy(n, i), levels[n], levels[n - 1]) for i in range(n)]
           for n in range(N + 1)]
    return CosimplicialAbGroup(levels, cof, cod, check=False)


def unnormalized_complex(A: CosimplicialAbGroup) -> CochainComplex:
    """``C^s = A^s`` with ``d = Σ (-1)^i ∂^i``."""
    if A._C is None:
        diffs = []
        for n in range(A.N):
            M = None
            for i, f in enumerate(A.cofaces[n]):
                term = f.matrix if i % 2 == 0 else -f.matrix
                M = term if M is None else M + term
            diffs.append(AbHom(A.levels[n], A.levels[n + 1], M, check=False))
        A._C = CochainComplex(0, A.levels, diffs, check=False)
    return A._C


def normalized_subgroups(A: CosimplicialAbGroup) -> list[Subquotient]:
    """``N^s = ∩ ker s^i`` as subgroups of ``A^s``."""
    out = []
    for n in range(A.N + 1):
        G = A.levels[n]
        if n == 0:
            lat = [[int(i == j) for i in range(G.ngens)] for j in range(G.ngens)]
        else:
            # kernel of the stacked map A^n -> ⊕ A^(n-1)
            tgt = direct_sum(*[A.levels[n - 1]] * n)
            mats = [f.matrix for f in A.codegeneracies[n]]
            stacked = mats[0].vstack(*mats[1:])
            lat = AbHom(G, tgt, stacked, check=False).kernel_lattice()
        out.append(Subquotient(G, lat, check=False))
    return out


def normalized_complex(A: CosimplicialAbGroup) -> CochainComplex:
    """The normalized cochain complex; its inclusion into ``C^*`` is a quasi-isomorphism."""
    C = unnormalized_complex(A)
    subs = normalized_subgroups(A)
    diffs = [induced_map(C.diff(n), subs[n], subs[n + 1]) for n in range(A.N)]
    return CochainComplex(0, [q.group for q in subs], diffs, check=False)


def normalized_inclusion_on_cohomology(A: CosimplicialAbGroup, s: int) -> AbHom:
    """The map ``H^s(N^*) -> H^s(C^*)`` induced by inclusion."""
    C = unnormalized_complex(A)
    Nc = normalized_complex(A)
    subs = normalized_subgroups(A)
    src = Nc.cohomology_subquotient(s)
    tgt = C.cohomology_subquotient(s)
    cols = []
    for g in src.gens:
        x = [0] * A.levels[s].ngens
        for c, v in zip(g, subs[s].gens):
            if c:
                for k, y in enumerate(v):
                    x[k] += c * y
        cols.append(tgt.coords(x))
    return AbHom(src.group, tgt.group, IntMatrix.from_columns(cols, tgt.group.ngens), check=False)


class TruncationWindowError(ValueError):
    """A degree outside the window that a truncated object can answer for."""

    def __init__(self, what: str, requested: int, bound: int):
        self.requested = requested
        self.bound = bound
        super().__init__("%s: degree %d needs truncation level >= %d" % (what, requested, bound))


def cohomotopy(A: CosimplicialAbGroup, s: int) -> FgAbGroup:
    """``π^s A = H^s(C^* A)`` for ``0 <= s <= N - 1``."""
    if s < 0:
        raise ValueError("cohomotopy degree must be nonnegative")
    if s > A.N - 1:
        raise TruncationWindowError("cohomotopy", s, s + 1)
    return cohomology(unnormalized_complex(A), s)


# ---------------------------------------------------------------------------
# Group cohomology via the bar construction


class FinGroup:
    """A finite group given by its multiplication table on ``0 .. n-1``."""

    def __init__(self, table: Sequence[Sequence[int]], check: bool = True):
        self.table = tuple(tuple(r) for r in table)
        self.order = len(self.table)
        n = self.order
        if any(len(r) != n for r in self.table):
            raise ValueError("multiplication table must be square")
        ids = [e for e in range(n) if all(self.table[e][x] == x and self.table[x][e] == x for x in range(n))]
        if len(ids) != 1:
            raise ValueError("table has no two-sided identity")
        self.identity = ids[0]
        inv = []
        for x in range(n):
            ys = [y for y in range(n) if self.table[x][y] == self.identity]
            if len(ys) != 1:
                raise ValueError("element %d has no unique inverse" % x)
            inv.append(ys[0])
        self.inverses = tuple(inv)
        if check:
            for a, b, c in itertools.product(range(n), repeat=3):
                if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                    raise ValueError("table is not associative at (%d, %d, %d)" % (a, b, c))

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def elements(self) -> range:
        return range(self.order)

    def is_homomorphism_to(self, target: "FinGroup", images: Sequence[int]) -> bool:
        return all(images[self.mul(a, b)] == target.mul(images[a], images[b])
                   for a in self.elements() for b in self.elements())

    def subgroup(self, elements: Sequence[int]) -> "FinGroup":
        """The subgroup on ``elements`` (relabelled 0..k-1 in the given order)."""
        idx = {g: i for i, g in enumerate(elements)}
        table = [[idx[self.mul(a, b)] for b in elements] for a in elements]
        G = FinGroup(table, check=False)
        G.embedding = tuple(elements)
        return G

    def __eq__(self, other) -> bool:
        return isinstance(other, FinGroup) and self.table == other.table

    def __hash__(self) -> int:
        return hash(self.table)


def cyclic_group(n: int) -> FinGroup:
    return FinGroup([[(a + b) % n for b in range(n)] for a in range(n)], check=False)


def permutation_group(perms: Sequence[Sequence[int]]) -> FinGroup:
    """Group table for a list of permutations closed under composition (``(p q)(x) = p(q(x))``)."""
    perms = [tuple(p) for p in perms]
    idx = {p: i for i, p in enumerate(perms)}
    table = [[idx[tuple(p[q[x]] for x in range(len(q)))] for q in perms] for p in perms]
    return FinGroup(table)


def symmetric_group(k: int) -> FinGroup:
    return permutation_group(sorted(itertools.permutations(range(k))))


def direct_product(G: FinGroup, H: FinGroup) -> FinGroup:
    """Elements ``(g, h)`` encoded as ``g * |H| + h``."""
    m = H.order
    table = [[G.mul(a // m, b // m) * m + H.mul(a % m, b % m) for b in range(G.order * m)]
             for a in range(G.order * m)]
    return FinGroup(table, check=False)


def cobar(G: FinGroup, M: FgAbGroup, action: Sequence, N: int) -> CosimplicialAbGroup:
    """Inhomogeneous bar cochains ``C^n(G; M) = Maps(G^n, M)`` as a cosimplicial group.

    ``action[g]`` is the matrix of ``g`` acting on ``M``.  Cofaces::

        (∂^0 f)(g1..g_{n+1})   = g1 · f(g2..g_{n+1})
        (∂^i f)(g1..g_{n+1})   = f(.., g_i g_{i+1}, ..)     0 < i < n+1
        (∂^{n+1} f)(g1..g_{n+1}) = f(g1..g_n)

    and ``(s^i f)(g1..g_{n-1}) = f(g1..g_i, 1, g_{i+1}..)``.
    """
    rho = [a if isinstance(a, AbHom) else AbHom(M, M, a) for a in action]
    if len(rho) != G.order:
        raise ValueError("need one action matrix per group element")
    e = G.identity
    if not rho[e].equals(AbHom.identity(M)):
        raise ValueError("the identity element does not act trivially")
    for a in G.elements():
        for b in G.elements():
            if not rho[G.mul(a, b)].equals(rho[a].compose(rho[b])):
                raise ValueError("action is not multiplicative at (%d, %d)" % (a, b))
    m = M.ngens
    k = G.order
    levels = [direct_sum(*[M] * (k ** n)) for n in range(N + 1)]

    def tuples(n):
        return list(itertools.product(range(k), repeat=n))

    index = [{g: i for i, g in enumerate(tuples(n))} for n in range(N + 2)]
    def place(rows, r, c, block):
        for a in range(m):
            for b in range(m):
                if block[a][b]:
                    rows[r * m + a][c * m + b] += block[a][b]

    ident = [[int(a == b) for b in range(m)] for a in range(m)]
    cofaces = []
    for n in range(N):
        maps = []
        for i in range(n + 2):
            rows = [[0] * (m * k ** n) for _ in range(m * k ** (n + 1))]
            for g, r in index[n + 1].items():
                if i == 0:
                    place(rows, r, index[n][g[1:]], rho[g[0]].matrix.rows())
                elif i == n + 1:
                    place(rows, r, index[n][g[:n]], ident)
                else:
                    h = g[:i - 1] + (G.mul(g[i - 1], g[i]),) + g[i + 1:]
                    place(rows, r, index[n][h], ident)
            maps.append(AbHom(levels[n], levels[n + 1], IntMatrix(rows, m * k ** n), check=False))
        cofaces.append(maps)
    codeg = [[]]
    for n in range(1, N + 1):
        maps = []
        for i in range(n):
            rows = [[0] * (m * k ** n) for _ in range(m * k ** (n - 1))]
            for g, r in index[n - 1].items():
                h = g[:i] + (e,) + g[i:]
                place(rows, r, index[n][h], ident)
            maps.append(AbHom(levels[n], levels[n - 1], IntMatrix(rows, m * k ** n), check=False))
        codeg.append(maps)
    return CosimplicialAbGroup(levels, cofaces, codeg, check=False)


def trivial_action(G: FinGroup, M: FgAbGroup) -> list[AbHom]:
    return [AbHom.identity(M)] * G.order


# ---------------------------------------------------------------------------
# Finite (possibly nonabelian) cosimplicial groups


class CosimplicialFinGroup:
    """Finite groups ``G^0 .. G^N`` with structure maps given as image tuples."""

    def __init__(self, levels: Sequence[FinGroup], cofaces, codegeneracies, check: bool = True):
        self.levels = list(levels)
        self.N = len(levels) - 1
        if self.N < 2:
            raise ValueError("a finite cosimplicial group needs levels up to at least 2")
        self.cofaces = [[tuple(m) for m in maps] for maps in cofaces]
        self.codegeneracies = [[tuple(m) for m in maps] for maps in codegeneracies]
        if check:
            self.check()

    def coface(self, n: int, i: int) -> tuple[int, ...]:
        return self.cofaces[n][i]

    def codegeneracy(self, n: int, i: int) -> tuple[int, ...]:
        return self.codegeneracies[n][i]

    def check(self) -> None:
        N = self.N
        if len(self.cofaces) != N or len(self.codegeneracies) != N + 1:
            raise ValueError("structure maps do not match truncation level %d" % N)
        for n in range(N):
            if len(self.cofaces[n]) != n + 2:
                raise ValueError("level %d needs %d cofaces" % (n, n + 2))
            for i, f in enumerate(self.cofaces[n]):
                if len(f) != self.levels[n].order or not self.levels[n].is_homomorphism_to(self.levels[n + 1], f):
                    raise CosimplicialIdentityError("d%d on level %d is not a homomorphism" % (i, n))
        for n in range(N + 1):
            if len(self.codegeneracies[n]) != n:
                raise ValueError("level %d needs %d codegeneracies" % (n, n))
            for i, f in enumerate(self.codegeneracies[n]):
                if len(f) != self.levels[n].order or not self.levels[n].is_homomorphism_to(self.levels[n - 1], f):
                    raise CosimplicialIdentityError("s%d on level %d is not a homomorphism" % (i, n))
        for label, lhs, rhs in _identity_instances(N):
            n0 = lhs[0][2]
            for x in self.levels[n0].elements():
                if self._run(lhs, x) != self._run(rhs, x):
                    raise CosimplicialIdentityError(label)

    def _run(self, steps, x: int) -> int:
        for kind, i, n in steps:
            x = (self.coface(n, i) if kind == "d" else self.codegeneracy(n, i))[x]
        return x

    @classmethod
    def constant(cls, G: FinGroup, N: int = 2) -> "CosimplicialFinGroup":
        ident = tuple(G.elements())
        return cls([G] * (N + 1), [[ident] * (n + 2) for n in range(N)],
                   [[ident] * n for n in range(N + 1)], check=False)


def fin_product(A: CosimplicialFinGroup, B: CosimplicialFinGroup) -> CosimplicialFinGroup:
    """Levelwise direct product, with ``(a, b)`` encoded as ``a * |B^n| + b``."""
    N = min(A.N, B.N)
    levels = [direct_product(A.levels[n], B.levels[n]) for n in range(N + 1)]

    def pair(f, g, m):
        return tuple(f[x // len(g)] * m + g[x % len(g)] for x in range(len(f) * len(g)))

    cof = [[pair(A.coface(n, i), B.coface(n, i), B.levels[n + 1].order) for i in range(n + 2)]
           for n in range(N)]
    cod = [[pair(A.codegeneracy(n, i), B.codegeneracy(n, i), B.levels[n - 1].order) for i in range(n)]
           for n in range(N + 1)]
    return CosimplicialFinGroup(levels, cof, cod, check=False)


def pi0_group(G: CosimplicialFinGroup) -> FinGroup:
    """The equalizer ``{g in G^0 : ∂^0 g = ∂^1 g}`` (``.embedding`` lists its elements)."""
    d0, d1 = G.coface(0, 0), G.coface(0, 1)
    elems = [g for g in G.levels[0].elements() if d0[g] == d1[g]]
    return G.levels[0].subgroup(elems)


def cocycles_z1(G: CosimplicialFinGroup) -> list[int]:
    """``Z^1 = {g in G^1 : (∂^0 g)(∂^1 g)^(-1)(∂^2 g) = 1}``."""
    G2 = G.levels[2]
    d0, d1, d2 = (G.coface(1, i) for i in range(3))
    return [g for g in G.levels[1].elements()
            if G2.mul(G2.mul(d0[g], G2.inv(d1[g])), d2[g]) == G2.identity]


def pi1_action(G: CosimplicialFinGroup, g0: int, g1: int) -> int:
    """``(g0, g1) -> (∂^1 g0) g1 (∂^0 g0)^(-1)``."""
    G1 = G.levels[1]
    a = G.coface(0, 1)[g0]
    b = G.coface(0, 0)[g0]
    return G1.mul(G1.mul(a, g1), G1.inv(b))


def pi1_pointed_set(G: CosimplicialFinGroup) -> list[tuple[int, ...]]:
    """Orbits of ``Z^1`` under ``G^0``; the basepoint orbit (of 1) comes first."""
    Z = cocycles_z1(G)
    zset = set(Z)
    seen: dict[int, int] = {}
    orbits: list[list[int]] = []
    for z in Z:
        if z in seen:
            continue
        orb = {z}
        frontier = [z]
        while frontier:
            x = frontier.pop()
            for g0 in G.levels[0].elements():
                y = pi1_action(G, g0, x)
                if y not in zset:
                    raise AssertionError("the action leaves Z^1")
                if y not in orb:
                    orb.add(y)
                    frontier.append(y)
        for x in orb:
            seen[x] = len(orbits)
        orbits.append(sorted(orb))
    e = G.levels[1].identity
    base = orbits[seen[e]]
    rest = sorted(o for o in orbits if o is not base)
    return [tuple(base)] + [tuple(o) for o in rest]


class AbelianFinGroup(FinGroup):
    """A finite abelian group ``Z/m_1 + .. + Z/m_k`` with elements numbered in mixed radix.

    Multiplication is computed from coordinates, so no table is stored; this
    keeps large levels (needed only for a few products) cheap.
    """

    def __init__(self, mods: Sequence[int]):
        self.mods = tuple(mods)
        self.order = math.prod(self.mods)
        self.identity = 0

    def decode(self, x: int) -> list[int]:
        out = []
        for m in reversed(self.mods):
            x, r = divmod(x, m)
            out.append(r)
        return out[::-1]

    def encode(self, c: Sequence[int]) -> int:
        x = 0
        for v, m in zip(c, self.mods):
            x = x * m + v % m
        return x

    def mul(self, a: int, b: int) -> int:
        return self.encode([u + v for u, v in zip(self.decode(a), self.decode(b))])

    def inv(self, a: int) -> int:
        return self.encode([-u for u in self.decode(a)])

    @property
    def table(self):
        return tuple(tuple(self.mul(a, b) for b in self.elements()) for a in self.elements())

    @property
    def inverses(self):
        return tuple(self.inv(a) for a in self.elements())

    def __eq__(self, other) -> bool:
        if isinstance(other, AbelianFinGroup):
            return self.mods == other.mods
        return FinGroup.__eq__(self, other)

    def __hash__(self) -> int:
        return hash(self.mods)


def abelian_as_fin(A: CosimplicialAbGroup) -> CosimplicialFinGroup:
    """A finite cosimplicial abelian group (levels 0..2) as finite groups, elements in mixed radix."""
    levels, sqs = [], []
    for n in range(3):
        G = A.levels[n]
        if not G.is_finite():
            raise ValueError("level %d is infinite" % n)
        sq = _self_subquotient(G)
        levels.append(AbelianFinGroup(sq.group.invariants()))
        sqs.append(sq)

    def as_map(f: AbHom, src: int, tgt: int):
        S, T = levels[src], levels[tgt]
        # f is additive: images of the generators determine everything
        gen_imgs = []
        for g in sqs[src].gens:
            gen_imgs.append(sqs[tgt].coords(f(g)))
        out = []
        for x in S.elements():
            c = S.decode(x)
            y = [0] * len(T.mods)
            for a, img in zip(c, gen_imgs):
                if a:
                    for k, v in enumerate(img):
                        y[k] += a * v
            out.append(T.encode(y))
        return tuple(out)

    cof = [[as_map(A.coface(n, i), n, n + 1) for i in range(n + 2)] for n in range(2)]
    cod = [[as_map(A.codegeneracy(n, i), n, n - 1) for i in range(n)] for n in range(3)]
    return CosimplicialFinGroup(levels, cof, cod, check=False)


# ---------------------------------------------------------------------------
# Cosimplicial replacement over the truncated simplex category


def monotone_maps(a: int, b: int) -> list[tuple[int, ...]]:
    """All order-preserving maps ``[a] -> [b]`` as value tuples (``C(a+b+1, a+1)`` of them)."""
    return list(itertools.combinations_with_replacement(range(b + 1), a + 1))


@dataclass(frozen=True)
class NerveSimplex:
    """A chain ``[i_0] -> [i_1] -> ... -> [i_n]`` of order-preserving maps."""

    objects: tuple[int, ...]
    maps: tuple[tuple[int, ...], ...]

    @property
    def length(self) -> int:
        return len(self.objects) - 1

    @property
    def last(self) -> int:
        return self.objects[-1]

    def face(self, j: int) -> "NerveSimplex":
        """Drop object ``j`` (composing the two maps around it when it is interior)."""
        n = self.length
        obj, mp = self.objects, self.maps
        if j == 0:
            return NerveSimplex(obj[1:], mp[1:])
        if j == n:
            return NerveSimplex(obj[:-1], mp[:-1])
        first, second = mp[j - 1], mp[j]
        comp = tuple(second[x] for x in first)
        return NerveSimplex(obj[:j] + obj[j + 1:], mp[:j - 1] + (comp,) + mp[j + 1:])

    def degeneracy(self, j: int) -> "NerveSimplex":
        """Repeat object ``j`` with an identity map."""
        o = self.objects[j]
        ident = tuple(range(o + 1))
        return NerveSimplex(self.objects[:j + 1] + self.objects[j:], self.maps[:j] + (ident,) + self.maps[j:])

    def unit_map(self) -> tuple[int, ...]:
        """``[n] -> [i_n]``, ``k ↦`` image of the last vertex of ``[i_k]``."""
        n = self.length
        out = []
        for k in range(n + 1):
            v = self.objects[k]
            for f in self.maps[k:]:
                v = f[v]
            out.append(v)
        return tuple(out)


def nerve_simplices(M: int, n: int) -> list[NerveSimplex]:
    """All n-chains in the nerve of ``Δ_{<=M}``, degenerate ones included, in a fixed order."""
    out = []
    for objs in itertools.product(range(M + 1), repeat=n + 1):
        hom_lists = [monotone_maps(objs[k], objs[k + 1]) for k in range(n)]
        for maps in itertools.product(*hom_lists):
            out.append(NerveSimplex(tuple(objs), tuple(maps)))
    return out


def count_nerve_simplices(M: int, n: int) -> int:
    """Closed-form count via ``|hom([a], [b])| = C(a+b+1, a+1)``."""
    if n == 0:
        return M + 1
    vec = [1] * (M + 1)
    for _ in range(n):
        vec = [sum(vec[a] * comb(a + b + 1, a + 1) for a in range(M + 1)) for b in range(M + 1)]
    return sum(vec)


class _MonotoneAction:
    """``A(φ)`` for order-preserving ``φ: [a] -> [b]``, built from cofaces and codegeneracies."""

    def __init__(self, A: CosimplicialAbGroup):
        self.A = A
        self.cache: dict[tuple[int, tuple[int, ...]], AbHom] = {}

    def __call__(self, b: int, phi: tuple[int, ...]) -> AbHom:
        key = (b, phi)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        A = self.A
        a = len(phi) - 1
        image = set(phi)
        missing = [v for v in range(b + 1) if v not in image]
        if missing:
            # φ = δ^i ∘ φ' with φ' : [a] -> [b-1]
            i = missing[-1]
            inner = tuple(v if v < i else v - 1 for v in phi)
            f = A.coface(b - 1, i).compose(self(b - 1, inner))
        else:
            rep = [j for j in range(a) if phi[j] == phi[j + 1]]
            if rep:
                # φ = φ' ∘ σ^j with σ^j : [a] -> [a-1] hitting j twice
                j = rep[0]
                inner = phi[:j + 1] + phi[j + 2:]
                f = self(b, inner).compose(A.codegeneracy(a, j))
            else:
                f = AbHom.identity(A.levels[a])
        self.cache[key] = f
        return f


class _ProductLevel:
    """One level of ``ΠA``: the factors in chain order with their offsets."""

    def __init__(self, A: CosimplicialAbGroup, chains: list[NerveSimplex]):
        self.chains = chains
        self.index = {c: i for i, c in enumerate(chains)}
        self.offsets = []
        off = 0
        rels = []
        for c in chains:
            G = A.levels[c.last]
            self.offsets.append(off)
            for r in G.relation_vectors():
                rels.append({off + i: x for i, x in r.items()})
            off += G.ngens
        self.group = FgAbGroup(off, sparse_relations=rels)


def _assemble(rows_n: int, cols_n: int, pieces) -> IntMatrix:
    return _block_matrix(rows_n, cols_n, pieces)


def cosimplicial_replacement(A: CosimplicialAbGroup, M: int, top: int | None = None) -> CosimplicialAbGroup:
    """``Π^n A = ∏_{chains i_0 -> .. -> i_n in Δ_{<=M}} A^{i_n}`` for ``n <= top``.

    ``top`` defaults to ``M - 1``: enough for cohomology in degrees ``<= M - 2``.
    The coface ``∂^j`` for ``j < n + 1`` reindexes along the ``j``-th face of
    the chain; the last one also applies ``A(i_n -> i_(n+1))``.  Codegeneracies
    insert identity maps.
    """
    if M > A.N:
        raise TruncationWindowError("cosimplicial replacement", M, M)
    if top is None:
        top = max(M - 1, 0)
    act = _MonotoneAction(A)
    levels = [_ProductLevel(A, nerve_simplices(M, n)) for n in range(top + 1)]
    cofaces = []
    for n in range(top):
        src, tgt = levels[n], levels[n + 1]
        maps = []
        for j in range(n + 2):
            pieces = []
            for r, c in enumerate(tgt.chains):
                face = c.face(j)
                col = src.offsets[src.index[face]]
                if j == n + 1:
                    blk = act(c.last, c.maps[-1]).matrix
                else:
                    blk = IntMatrix.identity(A.levels[c.last].ngens)
                pieces.append((tgt.offsets[r], col, blk))
            maps.append(AbHom(src.group, tgt.group,
                              _assemble(tgt.group.ngens, src.group.ngens, pieces), check=False))
        cofaces.append(maps)
    codeg = [[]]
    for n in range(1, top + 1):
        src, tgt = levels[n], levels[n - 1]
        maps = []
        for j in range(n):
            pieces = []
            for r, c in enumerate(tgt.chains):
                deg = c.degeneracy(j)
                pieces.append((tgt.offsets[r], src.offsets[src.index[deg]],
                               IntMatrix.identity(A.levels[c.last].ngens)))
            maps.append(AbHom(src.group, tgt.group,
                              _assemble(tgt.group.ngens, src.group.ngens, pieces), check=False))
        codeg.append(maps)
    P = CosimplicialAbGroup([L.group for L in levels], cofaces, codeg, check=False)
    P.chains = [L.chains for L in levels]
    P.offsets = [L.offsets for L in levels]
    P.nerve_bound = M
    return P


def unit_map(A: CosimplicialAbGroup, P: CosimplicialAbGroup) -> list[AbHom]:
    """Levelwise ``A^n -> Π^n A``; the component at a chain is ``A`` of its unit map."""
    act = _MonotoneAction(A)
    out = []
    for n, chains in enumerate(P.chains):
        pieces = []
        for c, off in zip(chains, P.offsets[n]):
            pieces.append((off, 0, act(c.last, c.unit_map()).matrix))
        out.append(AbHom(A.levels[n], P.levels[n],
                         _assemble(P.levels[n].ngens, A.levels[n].ngens, pieces), check=False))
    return out


@dataclass
class QuasiIsoVerdict:
    degree: int
    source: tuple[int, ...]
    target: tuple[int, ...]
    iso: bool


def check_pi_quasi_iso(A: CosimplicialAbGroup, M: int) -> list[QuasiIsoVerdict]:
    """Compare ``H^s(C^*A)`` with ``H^s(C^*ΠA)`` through the unit map for ``s <= M - 2``."""
    P = cosimplicial_replacement(A, M)
    u = unit_map(A, P)
    CA = unnormalized_complex(A)
    CP = unnormalized_complex(P)
    out = []
    for s in range(0, M - 1):
        src = CA.cohomology_subquotient(s)
        tgt = CP.cohomology_subquotient(s)
        f = induced_map(u[s], src, tgt)
        out.append(QuasiIsoVerdict(s, src.group.invariants(), tgt.group.invariants(), f.is_isomorphism()))
    return out
