"""Exact couples of towers, derived couples, pages and abutment filtrations.

Conventions
-----------
A tower ``... -> X_2 -> X_1 -> X_0`` of cochain complexes with surjective
structure maps has fibers ``F_s = ker(X_s -> X_(s-1))`` (``F_0 = X_0``).
With ``n = s - t`` we set

    D^{s,t} = H^n(X_s),    E^{s,t} = H^n(F_s)

and the long exact sequences give

    i : D^{s+1,t+1} -> D^{s,t}     bidegree (-1, -1)
    j : D^{s,t}     -> E^{s+1,t}   bidegree ( 1,  0)  (connecting map)
    k : E^{s,t}     -> D^{s,t}     bidegree ( 0,  0)

After ``r - 1`` derivations ``j`` has bidegree ``(r, r - 1)`` and so does
``d_r = j k``.  Everything on later pages is expressed through the first
couple: ``D_r`` is a subgroup of ``D_1`` and ``E_r`` a subquotient of ``E_1``,
which is what makes element chasing across pages possible.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .complexes import CochainComplex, FilteredComplex, Page
from .exact_linalg import (
    AbHom,
    FgAbGroup,
    IntMatrix,
    Subquotient,
    induced_map,
    is_exact,
)

_TRIVIAL = FgAbGroup.trivial()


def _identity_vectors(n: int) -> list[list[int]]:
    return [[int(i == j) for i in range(n)] for j in range(n)]


class Tower:
    """Stages ``X_0 .. X_m`` (all over the same degree range) with maps ``X_(s+1) -> X_s``.

    ``maps[s][n]`` is the degree-``n`` component of ``X_(s+1) -> X_s``.
    Structure maps must be surjective chain maps; the last stage is the limit.
    """

    def __init__(self, stages: Sequence[CochainComplex], maps: Sequence[dict[int, AbHom]],
                 check: bool = True):
        if len(maps) != len(stages) - 1:
            raise ValueError("need one structure map between consecutive stages")
        lo, hi = stages[0].lo, stages[0].hi
        for X in stages:
            if (X.lo, X.hi) != (lo, hi):
                raise ValueError("all stages must share one degree range")
        self.stages = list(stages)
        self.maps = [dict(m) for m in maps]
        self.lo, self.hi = lo, hi
        if check:
            self.check()
        self._fibers: dict[int, tuple[CochainComplex, list[Subquotient]]] = {}

    @property
    def top(self) -> int:
        return len(self.stages) - 1

    def map(self, s: int, n: int) -> AbHom:
        """``X_(s+1)^n -> X_s^n``."""
        return self.maps[s][n]

    def check(self) -> None:
        for s in range(self.top):
            for n in range(self.lo, self.hi + 1):
                f = self.map(s, n)
                if not f.is_surjective():
                    raise ValueError("structure map X_%d -> X_%d is not surjective in degree %d"
                                     % (s + 1, s, n))
                if n < self.hi:
                    lhs = self.stages[s].diff(n).compose(f)
                    rhs = self.map(s, n + 1).compose(self.stages[s + 1].diff(n))
                    if not lhs.equals(rhs):
                        raise ValueError("structure map X_%d -> X_%d is not a chain map in degree %d"
                                         % (s + 1, s, n))

    def fiber(self, s: int) -> tuple[CochainComplex, list[Subquotient]]:
        """The fiber complex ``F_s`` and, per degree, its embedding as a subgroup of ``X_s``."""
        if s not in self._fibers:
            X = self.stages[s]
            subs = []
            for n in range(self.lo, self.hi + 1):
                G = X.group(n)
                if s == 0:
                    lat = _identity_vectors(G.ngens)
                else:
                    lat = self.map(s - 1, n).kernel_lattice()
                subs.append(Subquotient(G, lat, check=False))
            diffs = [induced_map(X.diff(n), subs[n - self.lo], subs[n - self.lo + 1])
                     for n in range(self.lo, self.hi)]
            C = CochainComplex(self.lo, [q.group for q in subs], diffs, check=False)
            self._fibers[s] = (C, subs)
        return self._fibers[s]


def tower_from_filtration(F: FilteredComplex) -> Tower:
    """``X_s = C / F^(s+1)`` for ``s = 0 .. p_max`` with identity structure maps."""
    C = F.complex
    stages = []
    for s in range(0, F.p_max + 1):
        groups = []
        for n in C.degrees():
            G = C.group(n)
            rel = G.relation_columns() + F.F(s + 1, n)
            groups.append(FgAbGroup(G.ngens, IntMatrix.from_columns(rel, G.ngens)))
        diffs = [AbHom(groups[k], groups[k + 1], C.diffs[k].matrix, check=False)
                 for k in range(len(groups) - 1)]
        stages.append(CochainComplex(C.lo, groups, diffs, check=False))
    maps = []
    for s in range(F.p_max):
        maps.append({n: AbHom(stages[s + 1].group(n), stages[s].group(n),
                              IntMatrix.identity(C.group(n).ngens), check=False)
                     for n in C.degrees()})
    return Tower(stages, maps, check=False)


class _Base:
    """First-couple data computed from a tower; shared by all derived couples."""

    def __init__(self, tower: Tower):
        self.tower = tower
        self.s_hi = tower.top
        self.n_lo, self.n_hi = tower.lo, tower.hi
        self.D: dict[tuple[int, int], Subquotient] = {}
        self.E: dict[tuple[int, int], Subquotient] = {}
        for s in range(self.s_hi + 1):
            X = tower.stages[s]
            Fc, _ = tower.fiber(s)
            for n in range(self.n_lo, self.n_hi + 1):
                self.D[(s, s - n)] = X.cohomology_subquotient(n)
                self.E[(s, s - n)] = Fc.cohomology_subquotient(n)
        self._i: dict = {}
        self._j: dict = {}
        self._k: dict = {}
        self._ipow: dict = {}

    # D is constant above the top stage; clamp back to it
    def clamp(self, s: int, t: int) -> tuple[int, int]:
        if s > self.s_hi:
            return (self.s_hi, t - (s - self.s_hi))
        return (s, t)

    def Dgroup(self, s: int, t: int) -> FgAbGroup:
        key = self.clamp(s, t)
        sq = self.D.get(key)
        return sq.group if sq is not None else _TRIVIAL

    def Egroup(self, s: int, t: int) -> FgAbGroup:
        sq = self.E.get((s, t))
        return sq.group if sq is not None else _TRIVIAL

    def i(self, s: int, t: int) -> AbHom:
        """``D^{s,t} -> D^{s-1,t-1}``."""
        key = (s, t)
        if key not in self._i:
            src, tgt = self.Dgroup(s, t), self.Dgroup(s - 1, t - 1)
            if s > self.s_hi:
                f = AbHom.identity(src)
            elif s - 1 < 0 or (s, t) not in self.D:
                f = AbHom.zero(src, tgt)
            else:
                n = s - t
                g = self.tower.map(s - 1, n)
                f = induced_map(g, self.D[(s, t)], self.D[(s - 1, t - 1)])
            self._i[key] = f
        return self._i[key]

    def k(self, s: int, t: int) -> AbHom:
        """``E^{s,t} -> D^{s,t}`` induced by the fiber inclusion."""
        key = (s, t)
        if key not in self._k:
            src, tgt = self.Egroup(s, t), self.Dgroup(s, t)
            if key not in self.E:
                f = AbHom.zero(src, tgt)
            else:
                n = s - t
                _, subs = self.tower.fiber(s)
                emb = subs[n - self.n_lo]
                cols = []
                for g in self.E[key].gens:
                    x = [0] * emb.ambient.ngens
                    for c, v in zip(g, emb.gens):
                        if c:
                            for a, b in enumerate(v):
                                x[a] += c * b
                    cols.append(self.D[key].coords(x))
                f = AbHom(src, tgt, IntMatrix.from_columns(cols, tgt.ngens), check=False)
            self._k[key] = f
        return self._k[key]

    def j(self, s: int, t: int) -> AbHom:
        """Connecting map ``D^{s,t} -> E^{s+1,t}``: lift, apply d, land in the fiber."""
        key = (s, t)
        if key not in self._j:
            src, tgt = self.Dgroup(s, t), self.Egroup(s + 1, t)
            n = s - t
            if (s, t) not in self.D or (s + 1, t) not in self.E or n >= self.n_hi:
                f = AbHom.zero(src, tgt)
            else:
                up = self.tower.stages[s + 1]
                lift = self.tower.map(s, n)
                _, subs = self.tower.fiber(s + 1)
                emb = subs[n + 1 - self.n_lo]
                Eq = self.E[(s + 1, t)]
                cols = []
                for z in self.D[key].gens:
                    y = lift.preimage(z)
                    dy = up.diff(n)(y)
                    c = emb.coords(dy)
                    cols.append(Eq.coords(c))
                f = AbHom(src, tgt, IntMatrix.from_columns(cols, tgt.ngens), check=False)
            self._j[key] = f
        return self._j[key]

    def ipow(self, s: int, t: int, m: int) -> AbHom:
        """The m-fold composite ``D^{s+m,t+m} -> D^{s,t}``."""
        key = (s, t, m)
        if key not in self._ipow:
            f = AbHom.identity(self.Dgroup(s, t))
            for a in range(1, m + 1):
                f = f.compose(self.i(s + a, t + a))
            self._ipow[key] = f
        return self._ipow[key]


class ExactCouple:
    """The ``r``-th derived couple of a tower (``r = 1`` is the original).

    ``D_r^{s,t} = im(i^(r-1))`` inside ``D_1^{s,t}`` and ``E_r^{s,t}`` is a
    subquotient of ``E_1^{s,t}``; see the module docstring for bidegrees.
    """

    def __init__(self, base: _Base, r: int = 1, Esq: dict | None = None):
        self.base = base
        self.r = r
        self._Esq = Esq
        self._Dsq: dict[tuple[int, int], Subquotient] = {}

    @classmethod
    def from_tower(cls, tower: Tower) -> "ExactCouple":
        return cls(_Base(tower))

    @property
    def s_hi(self) -> int:
        return self.base.s_hi

    def keys(self) -> list[tuple[int, int]]:
        return sorted(self.base.E)

    def j_bidegree(self) -> tuple[int, int]:
        return (self.r, self.r - 1)

    # --- terms -----------------------------------------------------------
    def Esq(self, s: int, t: int) -> Subquotient | None:
        if self._Esq is None:
            return self.base.E.get((s, t)) and Subquotient(
                self.base.Egroup(s, t), _identity_vectors(self.base.Egroup(s, t).ngens), check=False)
        return self._Esq.get((s, t))

    def E(self, s: int, t: int) -> FgAbGroup:
        sq = self.Esq(s, t)
        return sq.group if sq else _TRIVIAL

    def Dsq(self, s: int, t: int) -> Subquotient:
        key = self.base.clamp(s, t)
        if key not in self._Dsq:
            G = self.base.Dgroup(*key)
            if s < 0 or key not in self.base.D:
                self._Dsq[key] = Subquotient(G, [], check=False)
            else:
                self._Dsq[key] = Subquotient(G, self.base.ipow(key[0], key[1], self.r - 1).columns(),
                                             check=False)
        return self._Dsq[key]

    def D(self, s: int, t: int) -> FgAbGroup:
        return self.Dsq(s, t).group

    # --- maps ------------------------------------------------------------
    def i(self, s: int, t: int) -> AbHom:
        """``D_r^{s,t} -> D_r^{s-1,t-1}``, the restriction of the first-couple i."""
        src, tgt = self.Dsq(s, t), self.Dsq(s - 1, t - 1)
        f = self.base.i(*self.base.clamp(s, t)) if s <= self.s_hi else None
        cols = []
        for g in src.gens:
            y = f(g) if f is not None else g
            cols.append(tgt.coords(y))
        return AbHom(src.group, tgt.group, IntMatrix.from_columns(cols, tgt.group.ngens), check=False)

    def k(self, s: int, t: int) -> AbHom:
        src, tgt = self.Esq(s, t), self.Dsq(s, t)
        if not src:
            return AbHom.zero(_TRIVIAL, tgt.group)
        k1 = self.base.k(s, t)
        cols = []
        for g in src.gens:
            c = tgt.coords(k1(g))
            if c is None:
                raise AssertionError("k of an E_%d cycle is not in D_%d at %r" % (self.r, self.r, (s, t)))
            cols.append(c)
        return AbHom(src.group, tgt.group, IntMatrix.from_columns(cols, tgt.group.ngens), check=False)

    def j(self, s: int, t: int) -> AbHom:
        """``D_r^{s,t} -> E_r^{s+r,t+r-1}``: pull back along ``i^(r-1)`` then apply the first j."""
        a, b = self.j_bidegree()
        src = self.Dsq(s, t)
        tgt = self.Esq(s + a, t + b)
        if not tgt or s < 0:
            return AbHom.zero(src.group, tgt.group if tgt else _TRIVIAL)
        m = self.r - 1
        key = self.base.clamp(s, t)
        up = (key[0] + m, key[1] + m)
        ip = self.base.ipow(key[0], key[1], m)
        j1 = self.base.j(*self.base.clamp(*up))
        if up[0] > self.s_hi:
            return AbHom.zero(src.group, tgt.group)
        cols = []
        for g in src.gens:
            x = ip.preimage(g)
            c = tgt.coords(j1(x))
            if c is None:
                raise AssertionError("j lands outside E_%d at %r" % (self.r, (s + a, t + b)))
            cols.append(c)
        return AbHom(src.group, tgt.group, IntMatrix.from_columns(cols, tgt.group.ngens), check=False)

    def d(self, s: int, t: int) -> AbHom:
        """``d_r = j k`` of bidegree ``(r, r - 1)``."""
        return self.j(s, t).compose(self.k(s, t))

    # --- derivation ------------------------------------------------------
    def derive(self) -> "ExactCouple":
        """``D' = im i``, ``E' = H(E, jk)``, with ``E'`` kept as a subquotient of ``E_1``."""
        a, b = self.j_bidegree()
        new = {}
        for (s, t) in self.keys():
            sq = self.Esq(s, t)
            out = self.d(s, t)
            inc_src = (s - a, t - b)
            inc = self.d(*inc_src) if self.Esq(*inc_src) else None
            gens = sq.gens
            base_quot = sq.quot

            def lift(y):
                v = [0] * sq.ambient.ngens
                for c, g in zip(y, gens):
                    if c:
                        for q, x in enumerate(g):
                            v[q] += c * x
                return v

            sub = [lift(y) for y in out.kernel_lattice()] + list(base_quot)
            quot = list(base_quot)
            if inc is not None:
                quot += [lift(y) for y in inc.columns() if any(y)]
            new[(s, t)] = Subquotient(sq.ambient, sub, quot, check=False)
        return ExactCouple(self.base, self.r + 1, new)

    def page(self) -> Page:
        terms, d, reps = {}, {}, {}
        for key in self.keys():
            sq = self.Esq(*key)
            terms[key] = sq.group
            reps[key] = sq
            d[key] = self.d(*key)
        return Page(self.r, terms, d, reps)

    # --- checks ----------------------------------------------------------
    def exactness_failures(self) -> list[tuple[str, tuple[int, int]]]:
        """Positions where the triangle fails to be exact (empty for a valid couple)."""
        a, b = self.j_bidegree()
        bad = []
        for (s, t) in self.keys():
            # at D^{s,t}: E --k--> D --i--> D
            if not is_exact(self.k(s, t), self.i(s, t)):
                bad.append(("D:k,i", (s, t)))
            # at D^{s,t}: D --i--> D --j--> E
            if not is_exact(self.i(s + 1, t + 1), self.j(s, t)):
                bad.append(("D:i,j", (s, t)))
            # at E^{s,t}: D --j--> E --k--> D
            if not is_exact(self.j(s - a, t - b), self.k(s, t)):
                bad.append(("E:j,k", (s, t)))
        return bad


def couple_from_tower(T: Tower) -> ExactCouple:
    return ExactCouple.from_tower(T)


def derive(C: ExactCouple) -> ExactCouple:
    return C.derive()


def page(C: ExactCouple, r: int) -> Page:
    """The ``E_r`` page: derive ``r - 1`` times starting from ``C``'s own index."""
    if r < C.r:
        raise ValueError("cannot go back from page %d to page %d" % (C.r, r))
    while C.r < r:
        C = C.derive()
    return C.page()


def couple_pages(C: ExactCouple, rmax: int) -> list[Page]:
    out = []
    while True:
        out.append(C.page())
        if C.r >= rmax:
            return out
        C = C.derive()


def reindex_tilde(P: Page) -> Page:
    """``Ẽ_(r+1)^{s,t} = E_r^{t, 2t-s}``; differentials are carried along.

    Keys move as ``(a, b) -> (s, t) = (2a - b, a)``.
    """
    def fwd(a, b):
        return (2 * a - b, a)

    terms = {fwd(*k): G for k, G in P.terms.items()}
    d = {fwd(*k): f for k, f in P.d.items()}
    reps = {fwd(*k): sq for k, sq in P.reps.items()}
    return Page(P.r + 1, terms, d, reps)


def reindex_tilde_inverse(P: Page) -> Page:
    """Undo :func:`reindex_tilde`."""
    if P.r < 2:
        raise ValueError("a reindexed page has r >= 2")

    def back(s, t):
        return (t, 2 * t - s)

    return Page(P.r - 1, {back(*k): G for k, G in P.terms.items()},
                {back(*k): f for k, f in P.d.items()},
                {back(*k): sq for k, sq in P.reps.items()})


# ---------------------------------------------------------------------------
# Abutment


@dataclass
class AbutmentFiltration:
    """``Q_s H^n = ker(H^n(X_top) -> H^n(X_s))`` and the injections ``e_∞ -> E_∞``.

    ``injections[(s, t)]`` maps ``Q_(s-1) / Q_s`` (in degree ``n = s - t``)
    into ``E_∞^{s,t}``; ``complete`` records that every injection is onto.
    """

    abutment: dict[int, FgAbGroup]
    Q: dict[tuple[int, int], Subquotient]
    graded: dict[tuple[int, int], FgAbGroup]
    injections: dict[tuple[int, int], AbHom]
    stable: dict[tuple[int, int], bool]
    complete: bool


def abutment(C: ExactCouple, bound: int | None = None) -> AbutmentFiltration:
    """Filtration of ``H(X_top)`` by the ``Q_s``, compared with ``E_bound`` (default: E_∞)."""
    base = C.base
    top = base.s_hi
    if bound is None:
        bound = top + 2
    X = base.tower.stages[top]
    Cinf = C
    while Cinf.r < bound:
        Cinf = Cinf.derive()
    ab, Q, graded, inj, stable = {}, {}, {}, {}, {}
    for n in range(base.n_lo, base.n_hi + 1):
        H = X.cohomology_subquotient(n)
        ab[n] = H.group

        def kernel_to(s):
            if s < 0:
                return _identity_vectors(H.group.ngens)
            f = base.ipow(s, s - n, top - s)
            return f.kernel_lattice()

        for s in range(-1, top + 1):
            Q[(s, n)] = Subquotient(H.group, kernel_to(s), check=False)
        for s in range(0, top + 1):
            t = s - n
            piece = Subquotient(H.group, kernel_to(s - 1), kernel_to(s), check=False)
            graded[(s, t)] = piece.group
            Einf = Cinf.Esq(s, t)
            cols = []
            for g in piece.gens:
                # image in H(X_s) comes from the fiber: pull back along k
                y = base.ipow(s, t, top - s)(g)
                e = base.k(s, t).preimage(y)
                if e is None:
                    raise AssertionError("graded piece does not come from the fiber at %r" % ((s, t),))
                c = Einf.coords(e) if Einf else []
                if c is None:
                    raise AssertionError("fiber class is not a permanent cycle at %r" % ((s, t),))
                cols.append(c)
            tgt = Einf.group if Einf else _TRIVIAL
            inj[(s, t)] = AbHom(piece.group, tgt, IntMatrix.from_columns(cols, tgt.ngens), check=False)
            stable[(s, t)] = _is_stable(Cinf, s, t)
    complete = all(f.is_isomorphism() for f in inj.values())
    return AbutmentFiltration(ab, Q, graded, inj, stable, complete)


def _is_stable(C: ExactCouple, s: int, t: int) -> bool:
    a, b = C.j_bidegree()
    return C.d(s, t).is_zero() and (not C.Esq(s - a, t - b) or C.d(s - a, t - b).is_zero())
