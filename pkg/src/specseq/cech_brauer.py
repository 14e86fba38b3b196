"""Čech cohomology on finite sites and a two-layer model of the twisted descent tower.

Opens of a :class:`FiniteSite` are frozensets of points closed under
intersection, so a fibre product of opens over the site is their meet.  A
:class:`OneHypercover` chooses opens ``U_i`` and, for each ordered pair, a
family of pieces ``V_ij^a <= U_i ∧ U_j``.  Level-2 simplices are triangles of
compatible labels and level-3 simplices are the tetrahedra all of whose faces
are level-2 simplices (the combinatorial coskeleton).

The twisted tower glues the constant ``Z`` presheaf (weight 1) to a coefficient
presheaf ``F`` (weight 2) along cup product with a 2-cocycle ``α``.  Its first
nontrivial differential sends the rank class ``n`` to ``n·[α]``, and the
positive generator of the surviving ranks is the model's index.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .complexes import CochainComplex, FilteredComplex, Page, _block_matrix, _unit_vectors, filtered_page
from .cosimplicial import FinGroup, cyclic_group
from .exact_couple import reindex_tilde
from .exact_linalg import (
    AbHom,
    FgAbGroup,
    IntMatrix,
    Subquotient,
    _Echelon,
    direct_sum,
    element_order,
)

Open = frozenset


class FiniteSite:
    """A finite family of opens (sets of points) closed under intersection, with top ``U``."""

    def __init__(self, opens: Iterable[Iterable], top: Iterable | None = None):
        ops = {frozenset(o) for o in opens}
        if top is None:
            top = frozenset().union(*ops) if ops else frozenset()
        self.top = frozenset(top)
        ops.add(self.top)
        ops.add(frozenset())
        # close under meets
        grew = True
        while grew:
            grew = False
            for a, b in itertools.combinations(list(ops), 2):
                m = a & b
                if m not in ops:
                    ops.add(m)
                    grew = True
        for o in ops:
            if not o <= self.top:
                raise ValueError("open %s is not contained in the top element" % sorted(o))
        self.opens = sorted(ops, key=lambda o: (len(o), sorted(map(repr, o))))

    def meet(self, *opens) -> frozenset:
        out = self.top
        for o in opens:
            out = out & o
        return out

    def __contains__(self, o) -> bool:
        return frozenset(o) in set(self.opens)

    @classmethod
    def point(cls) -> "FiniteSite":
        return cls([{0}])


class AbPresheaf:
    """An abelian group per open and restriction maps ``F(W) -> F(V)`` for ``V <= W``.

    ``restriction(W, V)`` defaults to the identity when ``W == V``.
    """

    def __init__(self, site: FiniteSite, groups: dict, restrictions: dict | None = None,
                 check: bool = True):
        self.site = site
        self.groups = {frozenset(k): v for k, v in groups.items()}
        self.restrictions = {(frozenset(a), frozenset(b)): f for (a, b), f in (restrictions or {}).items()}
        if check:
            self.check()

    def group(self, V) -> FgAbGroup:
        V = frozenset(V)
        try:
            return self.groups[V]
        except KeyError:
            raise KeyError("presheaf has no value on the open %s" % sorted(V)) from None

    def restriction(self, W, V) -> AbHom:
        W, V = frozenset(W), frozenset(V)
        if not V <= W:
            raise ValueError("no restriction from %s to the non-subset %s" % (sorted(W), sorted(V)))
        if W == V:
            return self.restrictions.get((W, V)) or AbHom.identity(self.group(W))
        try:
            return self.restrictions[(W, V)]
        except KeyError:
            raise KeyError("missing restriction %s -> %s" % (sorted(W), sorted(V))) from None

    def check(self) -> None:
        for o in self.site.opens:
            self.group(o)
        for W in self.site.opens:
            if not self.restriction(W, W).equals(AbHom.identity(self.group(W))):
                raise ValueError("restriction to itself is not the identity on %s" % sorted(W))
        for W, V, X in itertools.product(self.site.opens, repeat=3):
            if X <= V <= W:
                a = self.restriction(V, X).compose(self.restriction(W, V))
                if not a.equals(self.restriction(W, X)):
                    raise ValueError("restrictions %s -> %s -> %s do not compose"
                                     % (sorted(W), sorted(V), sorted(X)))

    @classmethod
    def constant(cls, site: FiniteSite, A: FgAbGroup) -> "AbPresheaf":
        """``A`` on every nonempty open, zero on the empty open."""
        zero = FgAbGroup.trivial()
        groups = {o: (A if o else zero) for o in site.opens}
        res = {}
        for W in site.opens:
            for V in site.opens:
                if V <= W and V != W:
                    res[(W, V)] = AbHom.identity(A) if V else AbHom.zero(groups[W], zero)
        return cls(site, groups, res, check=False)


# ---------------------------------------------------------------------------
# Hypercovers


def _edges(k: int) -> list[tuple[int, int]]:
    return [(a, b) for a in range(k + 1) for b in range(a + 1, k + 1)]


@dataclass(frozen=True)
class Piece:
    """A simplex of the hypercover: vertex indices plus one label per edge (lexicographic edges)."""

    vertices: tuple
    labels: tuple
    open: frozenset

    @property
    def level(self) -> int:
        return len(self.vertices) - 1

    def edge(self, a: int, b: int):
        return self.labels[_edges(self.level).index((a, b))]

    def key(self) -> tuple:
        """Stable ordering key; level-2 labels are listed as (ij, jk, ik)."""
        if self.level == 2:
            ij, ik, jk = self.labels
            return (self.vertices, (ij, jk, ik))
        return (self.vertices, tuple(self.labels))

    def face_key(self, m: int) -> tuple:
        """(vertices, labels) of the face opposite vertex ``m``."""
        keep = [a for a in range(self.level + 1) if a != m]
        verts = tuple(self.vertices[a] for a in keep)
        labels = tuple(self.edge(keep[a], keep[b]) for a, b in _edges(len(keep) - 1))
        return (verts, labels)


class OneHypercover:
    """Opens ``U_i`` and pieces ``V_ij^a``; higher levels are meets of compatible pieces.

    ``compatible(i, j, k, a, b, c)`` decides whether the labels ``a`` on ``ij``,
    ``b`` on ``jk`` and ``c`` on ``ik`` span a triangle.  When it is omitted every
    triple is allowed.  A group nerve uses ``c == a·b``, which reproduces the
    decomposition of iterated fibre products of a Galois cover.
    """

    def __init__(self, site: FiniteSite, U: Sequence, V: dict, compatible: Callable | None = None):
        if not U:
            raise ValueError("a cover needs at least one open")
        self.site = site
        self.U = [frozenset(u) for u in U]
        self.V = {}
        for i in range(len(self.U)):
            for j in range(len(self.U)):
                fam = V.get((i, j))
                if not fam:
                    raise ValueError("no pieces over the pair (%d, %d)" % (i, j))
                self.V[(i, j)] = {a: frozenset(o) for a, o in fam.items()}
                for a, o in self.V[(i, j)].items():
                    if not o <= self.U[i] & self.U[j]:
                        raise ValueError("piece V_%d%d^%r is not inside U_%d ∧ U_%d" % (i, j, a, i, j))
        self.compatible = compatible or (lambda *args: True)
        self._levels: dict[int, list[Piece]] = {}

    @property
    def indices(self) -> range:
        return range(len(self.U))

    def level(self, k: int) -> list[Piece]:
        if k in self._levels:
            return self._levels[k]
        if k == 0:
            out = [Piece((i,), (), self.U[i]) for i in self.indices]
        elif k == 1:
            out = [Piece((i, j), (a,), o) for i in self.indices for j in self.indices
                   for a, o in sorted(self.V[(i, j)].items(), key=lambda t: repr(t[0]))]
        elif k == 2:
            out = []
            for i, j, k2 in itertools.product(self.indices, repeat=3):
                for a, oa in self._fam(i, j):
                    for b, ob in self._fam(j, k2):
                        for c, oc in self._fam(i, k2):
                            if self.compatible(i, j, k2, a, b, c):
                                out.append(Piece((i, j, k2), (a, c, b), oa & ob & oc))
        elif k == 3:
            # glue the faces opposite vertices 3 and 1 along edge 02, then choose edge 13
            tri = {(p.vertices, p.labels) for p in self.level(2)}
            by_edge: dict = {}
            for p in self.level(2):
                by_edge.setdefault((p.vertices[0], p.vertices[1], p.labels[0]), []).append(p)
            out = []
            for t1 in self.level(2):
                i, j, k2 = t1.vertices
                a, c, b = t1.labels
                for t2 in by_edge.get((i, k2, c), ()):
                    l = t2.vertices[2]
                    e, f = t2.labels[1], t2.labels[2]
                    for x, ox in self._fam(j, l):
                        if ((j, k2, l), (b, x, f)) in tri and ((i, j, l), (a, e, x)) in tri:
                            labels = (a, c, e, b, x, f)
                            out.append(Piece((i, j, k2, l), labels, t1.open & t2.open & ox))
        else:
            raise ValueError("levels above 3 are not generated")
        out.sort(key=Piece.key)
        self._levels[k] = out
        return out

    def _fam(self, i: int, j: int):
        return sorted(self.V[(i, j)].items(), key=lambda t: repr(t[0]))


def nerve_cover(G: FinGroup, copies: int = 1, site: FiniteSite | None = None) -> OneHypercover:
    """The Čech nerve of a ``G``-Galois cover of the top element.

    Every piece is the whole top open and the labels on a triangle multiply,
    so the Čech complex of a constant presheaf is the bar complex of ``G`` with
    trivial coefficients.  ``copies > 1`` repeats the covering open.
    """
    site = site or FiniteSite.point()
    U = [site.top] * copies
    V = {(i, j): {g: site.top for g in G.elements()} for i in range(copies) for j in range(copies)}
    return OneHypercover(site, U, V, compatible=lambda i, j, k, a, b, c: c == G.mul(a, b))


def cyclic_nerve_cover(n: int, copies: int = 1) -> OneHypercover:
    return nerve_cover(cyclic_group(n), copies)


def sphere_cover() -> OneHypercover:
    """Four opens on four points whose nerve is the boundary of a tetrahedron."""
    faces = [frozenset(f) for f in itertools.combinations(range(4), 3)]
    pts = {f: n for n, f in enumerate(faces)}
    U = [frozenset(pts[f] for f in faces if i in f) for i in range(4)]
    site = FiniteSite(U)
    V = {(i, j): {0: U[i] & U[j]} for i in range(4) for j in range(4)}
    return OneHypercover(site, U, V)


# ---------------------------------------------------------------------------
# Čech complexes


class CechComplex:
    """``C^s = ∏ F(piece)`` over level-``s`` pieces for ``s = 0 .. smax``."""

    def __init__(self, H: OneHypercover, F: AbPresheaf, smax: int = 3):
        if not 0 <= smax <= 3:
            raise ValueError("smax must lie in 0..3")
        self.H, self.F, self.smax = H, F, smax
        self.pieces = [H.level(s) for s in range(smax + 1)]
        self.index = [{(p.vertices, p.labels): n for n, p in enumerate(ps)} for ps in self.pieces]
        self.offsets = []
        for ps in self.pieces:
            off, acc = [], 0
            for p in ps:
                off.append(acc)
                acc += F.group(p.open).ngens
            self.offsets.append(off)
        groups = [direct_sum(*[F.group(p.open) for p in ps]) if ps else FgAbGroup.trivial()
                  for ps in self.pieces]
        diffs = [self._diff(s, groups) for s in range(smax)]
        self.complex = CochainComplex(0, groups, diffs, check=False)

    def _diff(self, s: int, groups) -> AbHom:
        blocks = []
        for tgt_n, p in enumerate(self.pieces[s + 1]):
            for m in range(s + 2):
                face = self.index[s][p.face_key(m)]
                q = self.pieces[s][face]
                r = self.F.restriction(q.open, p.open).matrix
                if m % 2:
                    r = -r
                blocks.append((self.offsets[s + 1][tgt_n], self.offsets[s][face], r))
        M = _block_matrix(groups[s + 1].ngens, groups[s].ngens, blocks)
        return AbHom(groups[s], groups[s + 1], M, check=False)

    def group(self, s: int) -> FgAbGroup:
        return self.complex.group(s)

    def slot(self, s: int, piece_index: int) -> range:
        off = self.offsets[s][piece_index]
        return range(off, off + self.F.group(self.pieces[s][piece_index].open).ngens)

    def value(self, s: int, vec: Sequence[int], piece_index: int) -> list[int]:
        return [vec[k] for k in self.slot(s, piece_index)]

    def cohomology_subquotient(self, s: int) -> Subquotient:
        if s > self.smax - 1:
            raise ValueError("degree %d needs pieces up to level %d; only %d are built"
                             % (s, s + 1, self.smax))
        return self.complex.cohomology_subquotient(s)

    def class_of(self, s: int, vec: Sequence[int]) -> list[int]:
        c = self.cohomology_subquotient(s).coords(list(vec))
        if c is None:
            raise ValueError("cochain is not a cocycle")
        return c


_CACHE: dict = {}


def cech_complex(H: OneHypercover, F: AbPresheaf, smax: int = 3) -> CechComplex:
    key = (id(H), id(F), smax)
    hit = _CACHE.get(key)
    if hit is not None and hit.H is H and hit.F is F:
        return hit
    C = CechComplex(H, F, smax)
    if len(_CACHE) > 64:
        _CACHE.clear()
    _CACHE[key] = C
    return C


def cech_cohomology(H: OneHypercover, F: AbPresheaf, s: int) -> FgAbGroup:
    if s < 0:
        return FgAbGroup.trivial()
    return cech_complex(H, F).cohomology_subquotient(s).group


class CocycleError(ValueError):
    def __init__(self, piece: Piece):
        super().__init__("cocycle condition fails on the piece %r %r" % (piece.vertices, piece.labels))
        self.piece = piece


class Cocycle2:
    """A degree-2 Čech cocycle; ``vector`` lists the values piece by piece."""

    def __init__(self, H: OneHypercover, F: AbPresheaf, vector: Sequence[int], check: bool = True):
        self.H, self.F = H, F
        self.C = cech_complex(H, F)
        self.vector = list(vector)
        if len(self.vector) != self.C.group(2).ngens:
            raise ValueError("cochain has %d entries, expected %d" % (len(self.vector), self.C.group(2).ngens))
        if check:
            bad = _first_nonzero_piece(self.C, 3, self.C.complex.diff(2)(self.vector))
            if bad is not None:
                raise CocycleError(bad)

    def cls(self) -> list[int]:
        """Coordinates of the class in :func:`cech_cohomology` degree 2."""
        return self.C.class_of(2, self.vector)

    def values(self) -> list[tuple[Piece, list[int]]]:
        return [(p, self.C.value(2, self.vector, n)) for n, p in enumerate(self.C.pieces[2])]

    def scaled(self, k: int) -> "Cocycle2":
        return Cocycle2(self.H, self.F, [k * x for x in self.vector], check=False)

    def __add__(self, other: "Cocycle2") -> "Cocycle2":
        return Cocycle2(self.H, self.F, [a + b for a, b in zip(self.vector, other.vector)], check=False)


def _first_nonzero_piece(C: CechComplex, s: int, vec: Sequence[int]) -> Piece | None:
    for n, p in enumerate(C.pieces[s]):
        if not C.F.group(p.open).is_zero(C.value(s, vec, n)):
            return p
    return None


def cohomologous(a: Cocycle2, b: Cocycle2) -> bool:
    return a.cls() == b.cls()


def period(alpha: Cocycle2) -> int:
    """Order of ``[α]`` in ``Ȟ²``; 0 when the order is infinite (the annihilator is then 0)."""
    G = alpha.C.cohomology_subquotient(2).group
    o = element_order(G, alpha.cls())
    return 0 if o == math.inf else o


def cocycle_from_gluing(H: OneHypercover, F_lift: AbPresheaf, theta: Sequence[int],
                        F: AbPresheaf | None = None, iota: dict | None = None) -> Cocycle2:
    """The defect ``θ_ij + θ_jk - θ_ik`` of transition data, read back in ``F``.

    ``theta`` lists values of ``F_lift`` on the level-1 pieces.  Without ``F``
    the defect is returned as a cocycle in ``F_lift`` itself.  Otherwise ``iota``
    maps each open to an injective ``F(V) -> F_lift(V)`` and the defect must lie
    in its image; the result is the unique preimage.
    """
    L = cech_complex(H, F_lift)
    if len(theta) != L.group(1).ngens:
        raise ValueError("theta has %d entries, expected %d" % (len(theta), L.group(1).ngens))
    defect = L.complex.diff(1)(list(theta))
    if F is None:
        return Cocycle2(H, F_lift, defect)
    C = cech_complex(H, F)
    out = [0] * C.group(2).ngens
    for n, p in enumerate(C.pieces[2]):
        y = L.value(2, defect, n)
        x = iota[p.open].preimage(y)
        if x is None:
            raise ValueError("gluing defect on %r %r does not come from the coefficients"
                             % (p.vertices, p.labels))
        for k, v in zip(C.slot(2, n), x):
            out[k] = v
    return Cocycle2(H, F, out)


def lift_to_gluing(alpha: Cocycle2, F_lift: AbPresheaf, iota: dict) -> list[int] | None:
    """Transition data ``θ`` in ``F_lift`` whose gluing defect is ``ι(α)``, or None.

    Solves ``δθ ≡ ι(α)`` modulo the relations of ``C^2(F_lift)``.
    """
    H = alpha.H
    L = cech_complex(H, F_lift)
    C = alpha.C
    target = [0] * L.group(2).ngens
    for n, p in enumerate(C.pieces[2]):
        y = iota[p.open](C.value(2, alpha.vector, n))
        for k, v in zip(L.slot(2, n), y):
            target[k] = v
    n1 = L.group(1).ngens
    rel = L.group(2).relation_columns()
    E = _Echelon(L.group(2).ngens, n1 + len(rel))
    for j, col in enumerate(L.complex.diff(1).columns()):
        E.insert(col, {j: 1})
    for j, col in enumerate(rel):
        E.insert(col, {n1 + j: 1})
    sol = E.reduce(target)
    if sol is None:
        return None
    return sol[:n1]


def cyclic_lift(site: FiniteSite, m: int, n: int) -> tuple[AbPresheaf, AbPresheaf, dict]:
    """Constant ``Z/m`` inside constant ``Z/mn`` via multiplication by ``n``."""
    F = AbPresheaf.constant(site, FgAbGroup.cyclic(m))
    Fl = AbPresheaf.constant(site, FgAbGroup.cyclic(m * n))
    iota = {}
    for o in site.opens:
        if o:
            iota[o] = AbHom(F.group(o), Fl.group(o), IntMatrix([[n]]))
        else:
            iota[o] = AbHom.zero(F.group(o), Fl.group(o))
    return F, Fl, iota


def carry_theta(G_order: int, H: OneHypercover, F_lift: AbPresheaf) -> list[int]:
    """``θ(a) = a`` on the nerve of ``Z/n``: its defect is ``n`` times the carry cocycle."""
    L = cech_complex(H, F_lift)
    out = [0] * L.group(1).ngens
    for k, p in enumerate(L.pieces[1]):
        for j in L.slot(1, k):
            out[j] = p.labels[0] % G_order
    return out


# ---------------------------------------------------------------------------
# The twisted tower


def _cup_matrix(CZ: CechComplex, CF: CechComplex, alpha: Cocycle2, k: int) -> IntMatrix:
    """``x -> α ∪ x`` from ``C^k(Z)`` to ``C^(k+2)(F)`` (Alexander-Whitney: front 2-face, back k-face)."""
    s = k + 2
    cols: list[dict[int, int]] = [{} for _ in range(CZ.group(k).ngens)]
    for n, p in enumerate(CF.pieces[s]):
        front = p
        for m in range(s, 2, -1):
            front = _face(CF, front, m)
        back = p
        for _ in range(2):
            back = _face(CF, back, 0)
        fi = CF.index[2][(front.vertices, front.labels)]
        a = alpha.C.value(2, alpha.vector, fi)
        a = CF.F.restriction(front.open, p.open)(a)
        bi = CZ.index[k][(back.vertices, back.labels)]
        if not CZ.F.group(back.open).ngens or not CF.F.group(p.open).ngens:
            continue
        col = cols[CZ.offsets[k][bi]]
        for off, v in zip(CF.slot(s, n), a):
            if v:
                col[off] = col.get(off, 0) + v
    return IntMatrix.from_sparse_columns(cols, CF.group(s).ngens)


def _face(C: CechComplex, p: Piece, m: int) -> Piece:
    key = p.face_key(m)
    lvl = p.level - 1
    return C.pieces[lvl][C.index[lvl][key]]


class TwistedTower:
    """``Tot^n = C^(n+1)(Z) ⊕ C^(n+2)(F)`` with ``d(x, y) = (-δx, δy + α ∪ x)``.

    Filtration weights: 1 on everything, 2 on the ``F`` part.  Pages of this
    two-step filtration, shifted and reindexed as for a Postnikov tower, have
    ``E_2^{s,1} = Ȟ^s(Z)`` and ``E_2^{s,2} = Ȟ^s(F)`` for ``s <= 2``.
    """

    LO, HI = -2, 2

    def __init__(self, H: OneHypercover, F: AbPresheaf, alpha: Cocycle2):
        self.H, self.F, self.alpha = H, F, alpha
        bad = _first_nonzero_piece(alpha.C, 3, alpha.C.complex.diff(2)(alpha.vector))
        if bad is not None:
            raise CocycleError(bad)
        self.Z = AbPresheaf.constant(H.site, FgAbGroup.free(1))
        self.CZ = cech_complex(H, self.Z)
        self.CF = alpha.C
        CZ, CF = self.CZ.complex, self.CF.complex
        groups, parts = [], []
        for n in range(self.LO, self.HI + 1):
            a = CZ.group(n + 1) if 0 <= n + 1 <= 3 else FgAbGroup.trivial()
            b = CF.group(n + 2) if 0 <= n + 2 <= 3 else FgAbGroup.trivial()
            groups.append(direct_sum(a, b))
            parts.append((a.ngens, b.ngens))
        diffs = []
        for k, n in enumerate(range(self.LO, self.HI)):
            (za, fa), (zb, fb) = parts[k], parts[k + 1]
            blocks = []
            if za and zb:
                blocks.append((0, 0, -CZ.diff(n + 1).matrix))
            if fa and fb:
                blocks.append((zb, za, CF.diff(n + 2).matrix))
            if za and fb:
                blocks.append((zb, 0, _cup_matrix(self.CZ, self.CF, alpha, n + 1)))
            M = _block_matrix(zb + fb, za + fa, blocks)
            diffs.append(AbHom(groups[k], groups[k + 1], M, check=False))
        self.parts = dict(zip(range(self.LO, self.HI + 1), parts))
        self.complex = CochainComplex(self.LO, groups, diffs, check=True)
        filt = {1: {}, 2: {}}
        for n in self.complex.degrees():
            za, fa = self.parts[n]
            filt[1][n] = _unit_vectors(za + fa, range(za + fa))
            filt[2][n] = _unit_vectors(za + fa, range(za, za + fa))
        # the F part is a subcomplex by construction
        self.filtration = FilteredComplex(self.complex, filt, 1, 2, check=False)
        self._pages: dict[int, Page] = {}

    def page(self, r: int, keys=None) -> Page:
        """The reindexed page ``Ẽ_r`` (``r >= 2``), optionally only at the given ``(s, t)``."""
        if r < 2:
            raise ValueError("reindexed pages start at r = 2")
        if keys is not None:
            raw = {reindex_tilde_inverse_key(*k) for k in keys}
            return reindex_tilde(filtered_page(self.filtration, r - 1, keys=raw))
        if r not in self._pages:
            self._pages[r] = reindex_tilde(filtered_page(self.filtration, r - 1))
        return self._pages[r]

    def unit(self, n: int = 1) -> list[int]:
        """``(n·1, 0)`` in ``Tot^-1``: the rank class ``n``."""
        za, fa = self.parts[-1]
        v = [0] * (za + fa)
        for k, p in enumerate(self.CZ.pieces[0]):
            for j in self.CZ.slot(0, k):
                v[j] = n
        return v

    def f_part(self, n: int, v: Sequence[int]) -> list[int]:
        za, _ = self.parts[n]
        return list(v[za:])

    def z_part(self, n: int, v: Sequence[int]) -> list[int]:
        za, _ = self.parts[n]
        return list(v[:za])


def reindex_tilde_inverse_key(s: int, t: int) -> tuple[int, int]:
    return (t, 2 * t - s)


def twisted_tower(H: OneHypercover, F: AbPresheaf, alpha: Cocycle2) -> TwistedTower:
    return TwistedTower(H, F, alpha)


def _require_connected(T: TwistedTower) -> None:
    h0 = T.CZ.cohomology_subquotient(0)
    if h0.group.invariants() != (0,):
        raise ValueError("model needs H^0(Z) = Z, got %s" % h0.group)
    c = h0.coords(T.z_part(-1, T.unit(1)))
    if c is None or h0.group.ngens != 1 or abs(c[0]) != 1:
        raise ValueError("the constant section does not generate H^0(Z)")


def d2_on_rank(T: TwistedTower, n: int) -> list[int]:
    """``d_2(n)`` for the rank class ``n`` in ``Ẽ_2^{0,1}``, as a class in ``Ȟ²(F)``.

    The class is chased through the page: coordinates in ``Ẽ_2^{0,1}``, the
    page differential, then ambient representatives in ``Tot^0`` whose ``F``
    part is a 2-cocycle.
    """
    _require_connected(T)
    P = T.page(2, keys={(0, 1), (2, 2)})
    src = P.reps[(0, 1)]
    tgt = P.reps[(2, 2)]
    c = src.coords(T.unit(n))
    if c is None:
        raise AssertionError("the rank class is not a cycle of the first page")
    image = P.differential(0, 1)(c)
    amb = [0] * tgt.ambient.ngens
    for coeff, g in zip(image, tgt.gens):
        if coeff:
            for k, v in enumerate(g):
                amb[k] += coeff * v
    if any(T.z_part(0, amb)):
        raise AssertionError("d_2 representative has a rank component")
    return T.CF.class_of(2, T.f_part(0, amb))


def eti_model(T: TwistedTower) -> int:
    """Nonnegative generator of the ranks of degree ``-1`` cycles of the tower.

    This is the image of ``H^-1(Tot) -> Ȟ^0(Z) = Z``, equivalently the
    subgroup ``E_∞^{0,1}`` of ``Ẽ_2^{0,1}``.  It is 0 when no rank survives.
    """
    _require_connected(T)
    h0 = T.CZ.cohomology_subquotient(0)
    unit = h0.coords(T.z_part(-1, T.unit(1)))[0]
    g = 0
    for z in T.filtration.abutment_subgroup(1, -1):
        c = h0.coords(T.z_part(-1, z))
        if c is None:
            raise AssertionError("rank part of a cycle is not a Čech cocycle")
        g = math.gcd(g, c[0] * unit)
    return g


def eti_from_pages(T: TwistedTower) -> int:
    """The same generator read off ``Ẽ_3^{0,1}`` inside ``Ẽ_2^{0,1}`` (two layers: ``E_3 = E_∞``)."""
    _require_connected(T)
    e2 = T.page(2, keys={(0, 1)}).reps[(0, 1)]
    e3 = T.page(3, keys={(0, 1)}).reps[(0, 1)]
    u = e2.coords(T.unit(1))
    if e2.group.ngens != 1 or abs(u[0]) != 1:
        raise AssertionError("E_2^{0,1} is not generated by the rank class")
    g = 0
    for z in e3.gens:
        g = math.gcd(g, e2.coords(z)[0])
    return g


@dataclass
class DivisibilityVerdict:
    period: int
    eti: int

    @property
    def ok(self) -> bool:
        """``period | eti`` in Z (so 0 divides only 0)."""
        if self.period == 0:
            return self.eti == 0
        return self.eti % self.period == 0


def check_divisibility(T: TwistedTower) -> DivisibilityVerdict:
    return DivisibilityVerdict(period(T.alpha), eti_model(T))


# ---------------------------------------------------------------------------
# Generators for tests and the command line


def h2_generators(H: OneHypercover, F: AbPresheaf) -> list[Cocycle2]:
    """Cocycle representatives of the generators of ``Ȟ²(F)``."""
    C = cech_complex(H, F)
    sq = C.cohomology_subquotient(2)
    return [Cocycle2(H, F, g, check=False) for g in sq.gens]


def class_multiple(alpha: Cocycle2, k: int) -> list[int]:
    """Coordinates of ``k·[α]`` in ``Ȟ²``, reduced."""
    return alpha.C.class_of(2, [k * x for x in alpha.vector])
