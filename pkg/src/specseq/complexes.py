"""Cochain complexes, double complexes, filtrations and their spectral sequences.

Page coordinates
----------------
A filtered complex is graded by a single cohomological degree ``n`` and a
decreasing filtration index ``p``.  Pages are reported in the coordinates

    (s, t) = (p, p - n)

so that ``d_r`` has bidegree ``(r, r - 1)`` and the abutment degree is
``t - s = -n``.  For the skeletal filtration of a double complex this makes
``s`` the horizontal (cosimplicial) index and ``t`` the vertical (homotopy)
index, and ``E_1^{s,t}`` is the vertical homology ``H_t`` of column ``s``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .exact_linalg import (
    AbHom,
    FgAbGroup,
    IntMatrix,
    Subquotient,
    _Echelon,
    _relative_kernel,
    direct_sum,
    induced_map,
)

_TRIVIAL = FgAbGroup.trivial()


class ChainConditionError(ValueError):
    """Raised when d∘d ≠ 0 or a map fails to commute with differentials."""

    def __init__(self, message: str, degree=None):
        self.degree = degree
        super().__init__(message)


def _unit_vectors(n: int, idx: Iterable[int] | None = None) -> list[list[int]]:
    out = []
    for i in range(n) if idx is None else idx:
        v = [0] * n
        v[i] = 1
        out.append(v)
    return out


# ---------------------------------------------------------------------------
# Cochain complexes


class CochainComplex:
    """A bounded cochain complex ``C^lo -> ... -> C^hi``.

    ``diffs[k]`` is the differential out of degree ``lo + k``; the list has
    one entry fewer than ``groups``.  Outside ``[lo, hi]`` the complex is zero.
    """

    def __init__(self, lo: int, groups: Sequence[FgAbGroup], diffs: Sequence, check: bool = True):
        if not groups:
            raise ValueError("a complex needs at least one level")
        if len(diffs) != len(groups) - 1:
            raise ValueError("expected %d differentials, got %d" % (len(groups) - 1, len(diffs)))
        self.lo = lo
        self.hi = lo + len(groups) - 1
        self.groups = list(groups)
        ds = []
        for k, d in enumerate(diffs):
            if not isinstance(d, AbHom):
                d = AbHom(groups[k], groups[k + 1], d, check=check)
            ds.append(d)
        self.diffs = ds
        self._cohom: dict[int, Subquotient] = {}
        if check:
            self.check()

    def check(self) -> None:
        for k in range(len(self.diffs) - 1):
            if not self.diffs[k + 1].compose(self.diffs[k]).is_zero():
                raise ChainConditionError("d∘d is nonzero out of degree %d" % (self.lo + k),
                                          self.lo + k)

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def group(self, n: int) -> FgAbGroup:
        if self.lo <= n <= self.hi:
            return self.groups[n - self.lo]
        return _TRIVIAL

    def diff(self, n: int) -> AbHom:
        """The differential C^n -> C^(n+1) (zero outside the stored range)."""
        if self.lo <= n < self.hi:
            return self.diffs[n - self.lo]
        return AbHom.zero(self.group(n), self.group(n + 1))

    def cohomology_subquotient(self, n: int) -> Subquotient:
        """``ker d^n / im d^(n-1)`` as a subquotient of ``C^n``; representatives are cycles."""
        if n not in self._cohom:
            if not self.lo <= n <= self.hi:
                raise ValueError("degree %d outside [%d, %d]" % (n, self.lo, self.hi))
            ker = self.diff(n).kernel_lattice()
            im = self.diff(n - 1).columns() if n > self.lo else []
            self._cohom[n] = Subquotient(self.group(n), ker, im, check=False)
        return self._cohom[n]

    def __repr__(self) -> str:
        return "CochainComplex(%d..%d: %s)" % (self.lo, self.hi, ", ".join(str(g) for g in self.groups))


def cohomology(C: CochainComplex, n: int) -> FgAbGroup:
    """``H^n(C)``; raises ValueError outside the degree range."""
    return C.cohomology_subquotient(n).group


@dataclass
class ChainMap:
    """Degreewise maps ``source^n -> target^n`` keyed by degree (missing = zero)."""

    source: CochainComplex
    target: CochainComplex
    maps: dict[int, AbHom]

    def __post_init__(self):
        for n, f in list(self.maps.items()):
            if not isinstance(f, AbHom):
                self.maps[n] = AbHom(self.source.group(n), self.target.group(n), f)
        self.check()

    def at(self, n: int) -> AbHom:
        f = self.maps.get(n)
        return f if f is not None else AbHom.zero(self.source.group(n), self.target.group(n))

    def check(self) -> None:
        lo = min(self.source.lo, self.target.lo)
        hi = max(self.source.hi, self.target.hi)
        for n in range(lo, hi):
            lhs = self.target.diff(n).compose(self.at(n))
            rhs = self.at(n + 1).compose(self.source.diff(n))
            if not lhs.equals(rhs):
                raise ChainConditionError("map does not commute with d in degree %d" % n, n)

    def on_cohomology(self, n: int) -> AbHom:
        return induced_map(self.at(n), self.source.cohomology_subquotient(n),
                           self.target.cohomology_subquotient(n))


def _block_matrix(rows: int, cols: int, blocks) -> IntMatrix:
    """Assemble ``(row_offset, col_offset, M)`` blocks into one sparse matrix."""
    out: list[dict[int, int]] = [{} for _ in range(cols)]
    for r0, c0, M in blocks:
        for j, c in enumerate(M.sparse_columns()):
            dst = out[c0 + j]
            for i, v in c.items():
                w = dst.get(r0 + i, 0) + v
                if w:
                    dst[r0 + i] = w
                else:
                    dst.pop(r0 + i, None)
    return IntMatrix.from_sparse_columns(out, rows)


def cone(f: ChainMap) -> CochainComplex:
    """Mapping cone: ``cone^n = A^(n+1) + B^n`` with ``d(a, b) = (-d a, f a + d b)``.

    Fits in the long exact sequence ``H^n B -> H^n cone -> H^(n+1) A -> H^(n+1) B``.
    """
    A, B = f.source, f.target
    lo = min(A.lo - 1, B.lo)
    hi = max(A.hi - 1, B.hi)
    groups = [direct_sum(A.group(n + 1), B.group(n)) for n in range(lo, hi + 1)]
    diffs = []
    for n in range(lo, hi):
        a0, b0 = A.group(n + 1).ngens, B.group(n).ngens
        a1, b1 = A.group(n + 2).ngens, B.group(n + 1).ngens
        M = _block_matrix(a1 + b1, a0 + b0, [
            (0, 0, -A.diff(n + 1).matrix),
            (a1, 0, f.at(n + 1).matrix),
            (a1, a0, B.diff(n).matrix),
        ])
        diffs.append(AbHom(groups[n - lo], groups[n - lo + 1], M, check=False))
    return CochainComplex(lo, groups, diffs)


# ---------------------------------------------------------------------------
# Double complexes


class DoubleComplex:
    """Groups ``A^{s,t}`` for ``0 <= s <= S``, ``0 <= t <= T`` with commuting differentials.

    ``dh[(s, t)]`` maps ``(s, t) -> (s+1, t)`` and ``dv[(s, t)]`` maps
    ``(s, t) -> (s, t-1)``.  Missing groups are trivial and missing maps zero.
    """

    def __init__(self, groups: Mapping[tuple[int, int], FgAbGroup], dh: Mapping = None,
                 dv: Mapping = None, S: int | None = None, T: int | None = None,
                 check: bool = True):
        self.groups = dict(groups)
        self.S = max((s for s, _ in self.groups), default=0) if S is None else S
        self.T = max((t for _, t in self.groups), default=0) if T is None else T
        self.dh: dict[tuple[int, int], AbHom] = {}
        self.dv: dict[tuple[int, int], AbHom] = {}
        for key, M in (dh or {}).items():
            s, t = key
            self.dh[key] = M if isinstance(M, AbHom) else AbHom(self.group(s, t), self.group(s + 1, t), M)
        for key, M in (dv or {}).items():
            s, t = key
            self.dv[key] = M if isinstance(M, AbHom) else AbHom(self.group(s, t), self.group(s, t - 1), M)
        self._tot = None
        if check:
            self.check()

    def group(self, s: int, t: int) -> FgAbGroup:
        return self.groups.get((s, t), _TRIVIAL)

    def h(self, s: int, t: int) -> AbHom:
        f = self.dh.get((s, t))
        return f if f is not None else AbHom.zero(self.group(s, t), self.group(s + 1, t))

    def v(self, s: int, t: int) -> AbHom:
        f = self.dv.get((s, t))
        return f if f is not None else AbHom.zero(self.group(s, t), self.group(s, t - 1))

    def check(self) -> None:
        for s in range(self.S + 1):
            for t in range(self.T + 1):
                if not self.h(s + 1, t).compose(self.h(s, t)).is_zero():
                    raise ChainConditionError("horizontal d∘d nonzero at (%d, %d)" % (s, t), (s, t))
                if not self.v(s, t - 1).compose(self.v(s, t)).is_zero():
                    raise ChainConditionError("vertical d∘d nonzero at (%d, %d)" % (s, t), (s, t))
                if not self.v(s + 1, t).compose(self.h(s, t)).equals(self.h(s, t - 1).compose(self.v(s, t))):
                    raise ChainConditionError("differentials do not commute at (%d, %d)" % (s, t), (s, t))

    def column(self, s: int) -> CochainComplex:
        """Column ``s`` as a cochain complex in degree ``-t``."""
        T = self.T
        groups = [self.group(s, t) for t in range(T, -1, -1)]
        diffs = [self.v(s, t) for t in range(T, 0, -1)]
        return CochainComplex(-T, groups, diffs, check=False)

    def row(self, t: int) -> CochainComplex:
        groups = [self.group(s, t) for s in range(self.S + 1)]
        diffs = [self.h(s, t) for s in range(self.S)]
        return CochainComplex(0, groups, diffs, check=False)

    def total(self) -> "TotalComplex":
        if self._tot is None:
            self._tot = total_complex(self)
        return self._tot


class TotalComplex(CochainComplex):
    """A total complex that remembers which block each coordinate came from."""

    blocks: dict[int, list[tuple[tuple[int, int], int, int]]]
    source: DoubleComplex

    def block_of(self, n: int, s: int, t: int) -> tuple[int, int]:
        """``(offset, size)`` of ``A^{s,t}`` inside ``Tot^n``."""
        for key, off, size in self.blocks[n]:
            if key == (s, t):
                return off, size
        raise KeyError((s, t))

    def component(self, x: Sequence[int], n: int, s: int) -> list[int]:
        off, size = self.block_of(n, s, s - n)
        return list(x[off:off + size])


def total_complex(D: DoubleComplex) -> TotalComplex:
    """``Tot^n = ⊕_{s - t = n} A^{s,t}`` with ``d = d_h + (-1)^s d_v``."""
    lo, hi = -D.T, D.S
    blocks = {}
    groups = []
    for n in range(lo, hi + 1):
        bl = []
        off = 0
        parts = []
        for s in range(D.S + 1):
            t = s - n
            if 0 <= t <= D.T:
                G = D.group(s, t)
                bl.append(((s, t), off, G.ngens))
                parts.append(G)
                off += G.ngens
        blocks[n] = bl
        groups.append(direct_sum(*parts))
    diffs = []
    for n in range(lo, hi):
        src, dst = blocks[n], blocks[n + 1]
        where = {key: off for key, off, _ in dst}
        pieces = []
        for (s, t), c0, _ in src:
            if (s + 1, t) in where:
                pieces.append((where[(s + 1, t)], c0, D.h(s, t).matrix))
            if (s, t - 1) in where:
                M = D.v(s, t).matrix
                pieces.append((where[(s, t - 1)], c0, M if s % 2 == 0 else -M))
        g0, g1 = groups[n - lo], groups[n - lo + 1]
        diffs.append(AbHom(g0, g1, _block_matrix(g1.ngens, g0.ngens, pieces), check=False))
    C = TotalComplex.__new__(TotalComplex)
    CochainComplex.__init__(C, lo, groups, diffs)
    C.blocks = blocks
    C.source = D
    return C


# ---------------------------------------------------------------------------
# Filtrations


class FilteredComplex:
    """A complex with a decreasing filtration ``F^p``, stored as generator lists.

    ``F^p C^n`` is everything for ``p <= p_min`` and zero for ``p > p_max``;
    in between ``filt[p][n]`` lists ambient generators (relations are implied).
    """

    def __init__(self, complex: CochainComplex, filt: Mapping[int, Mapping[int, list]],
                 p_min: int, p_max: int, check: bool = True):
        self.complex = complex
        self.p_min = p_min
        self.p_max = p_max
        self.filt = {p: {n: [list(v) for v in vs] for n, vs in d.items()} for p, d in filt.items()}
        self._z: dict[tuple[int, int, int], list[list[int]]] = {}
        if check:
            self.check()

    def F(self, p: int, n: int) -> list[list[int]]:
        C = self.complex
        if not C.lo <= n <= C.hi or p > self.p_max:
            return []
        k = C.group(n).ngens
        if p <= self.p_min:
            return _unit_vectors(k)
        return self.filt.get(p, {}).get(n, [])

    def check(self) -> None:
        C = self.complex
        for p in range(self.p_min, self.p_max + 2):
            for n in C.degrees():
                G = C.group(n)
                span = _span(self.F(p, n) + G.relation_vectors(), G.ngens)
                if any(span.reduce(v) is None for v in self.F(p + 1, n)):
                    raise ValueError("F^%d is not contained in F^%d in degree %d" % (p + 1, p, n))
                if n < C.hi:
                    H = C.group(n + 1)
                    tgt = _span(self.F(p, n + 1) + H.relation_vectors(), H.ngens)
                    d = C.diff(n)
                    if any(tgt.reduce(d(v)) is None for v in self.F(p, n)):
                        raise ValueError("d does not preserve F^%d in degree %d" % (p, n))

    def Z(self, r: int, p: int, n: int) -> list[list[int]]:
        """Generators of ``{x in F^p C^n : dx in F^(p+r) C^(n+1)}`` (modulo relations)."""
        p_eff = max(p, self.p_min - r)
        key = (r, p_eff, n)
        hit = self._z.get(key)
        if hit is not None:
            return hit
        C = self.complex
        gens = self.F(p_eff, n)
        if r <= 0 or not gens or n >= C.hi:
            out = gens
        else:
            d = C.diff(n)
            tgt = C.group(n + 1)
            _, K = _relative_kernel(tgt.ngens, [d(g) for g in gens],
                                    self.F(p_eff + r, n + 1) + tgt.relation_vectors())
            m = C.group(n).ngens
            out = []
            for y in K:
                v = [0] * m
                for c, g in zip(y, gens):
                    if c:
                        for i, gi in enumerate(g):
                            if gi:
                                v[i] += c * gi
                if any(v):
                    out.append(v)
        self._z[key] = out
        return out

    def term(self, r: int, p: int, n: int) -> Subquotient:
        """``E_r^{p,n} = Z_r^p / (Z_(r-1)^(p+1) + d Z_(r-1)^(p-r+1))`` inside ``C^n``."""
        C = self.complex
        sub = self.Z(r, p, n)
        quot = list(self.Z(r - 1, p + 1, n))
        if n > C.lo:
            d = C.diff(n - 1)
            quot += [w for w in (d(x) for x in self.Z(r - 1, p - r + 1, n - 1)) if any(w)]
        return Subquotient(C.group(n), sub, quot, check=False)

    def filtration_jumps(self) -> range:
        return range(self.p_min, self.p_max + 1)

    def abutment_subgroup(self, p: int, n: int) -> list[list[int]]:
        """Cycle generators of ``F^p H^n`` (the image of ``H^n(F^p)``)."""
        return self.Z(self.p_max - self.p_min + 2, p, n)


def _span(gens, n) -> _Echelon:
    E = _Echelon(n)
    for g in gens:
        if any(g):
            E.insert(g)
    return E


def skeletal_filtration(D: DoubleComplex) -> FilteredComplex:
    """``F^p Tot`` = columns with horizontal index ``>= p``."""
    Tot = D.total()
    filt = {}
    for p in range(0, D.S + 1):
        filt[p] = {}
        for n in Tot.degrees():
            idx = []
            for (s, t), off, size in Tot.blocks[n]:
                if s >= p:
                    idx.extend(range(off, off + size))
            filt[p][n] = _unit_vectors(Tot.group(n).ngens, idx)
    return FilteredComplex(Tot, filt, 0, D.S, check=False)


def truncation_filtration(D: DoubleComplex) -> FilteredComplex:
    """Columnwise canonical truncation ``G^q = τ_{≥q}`` of every column, totalized.

    In column ``s``, ``G^q`` keeps all rows ``t > q`` and the vertical cycles
    of row ``q``.  The graded piece ``G^q / G^(q+1)`` has vertical homology
    only in row ``q``, where it equals ``H_q`` of the column.
    """
    Tot = D.total()
    filt = {}
    for q in range(0, D.T + 1):
        filt[q] = {}
        for n in Tot.degrees():
            k = Tot.group(n).ngens
            gens = []
            for (s, t), off, size in Tot.blocks[n]:
                if t > q:
                    gens.extend(_unit_vectors(k, range(off, off + size)))
                elif t == q:
                    for z in D.v(s, t).kernel_lattice():
                        v = [0] * k
                        v[off:off + size] = z
                        gens.append(v)
            filt[q][n] = gens
    return FilteredComplex(Tot, filt, 0, D.T, check=False)


# ---------------------------------------------------------------------------
# Pages


def _zero_hom(G: FgAbGroup) -> AbHom:
    return AbHom.zero(G, _TRIVIAL)


@dataclass
class Page:
    """Terms ``E_r^{s,t}`` with ``d_r`` of bidegree ``(r, r-1)``.

    ``reps`` optionally records each term as a subquotient of an ambient
    group so that elements can be chased between pages and filtrations.
    """

    r: int
    terms: dict[tuple[int, int], FgAbGroup]
    d: dict[tuple[int, int], AbHom]
    reps: dict[tuple[int, int], Subquotient] = field(default_factory=dict)

    @property
    def bidegree(self) -> tuple[int, int]:
        return (self.r, self.r - 1)

    def term(self, s: int, t: int) -> FgAbGroup:
        return self.terms.get((s, t), _TRIVIAL)

    def differential(self, s: int, t: int) -> AbHom:
        f = self.d.get((s, t))
        if f is not None:
            return f
        a, b = self.bidegree
        return AbHom.zero(self.term(s, t), self.term(s + a, t + b))

    def incoming(self, s: int, t: int) -> AbHom:
        a, b = self.bidegree
        return self.differential(s - a, t - b)

    def support(self) -> list[tuple[int, int]]:
        return sorted(k for k, G in self.terms.items() if not G.is_trivial())

    def image_of_d(self, s: int, t: int) -> FgAbGroup:
        return self.differential(s, t).image_subgroup().group

    def homology(self, s: int, t: int) -> FgAbGroup:
        """``ker d_r / im d_r`` at ``(s, t)``; should match the next page."""
        G = self.term(s, t)
        ker = self.differential(s, t).kernel_lattice()
        im = self.incoming(s, t).columns()
        return Subquotient(G, ker, im, check=False).group

    def check_d_squared(self) -> list[tuple[int, int]]:
        """Positions where ``d_r ∘ d_r`` fails to vanish (empty when all is well)."""
        a, b = self.bidegree
        bad = []
        for (s, t) in sorted(self.terms):
            if not self.differential(s + a, t + b).compose(self.differential(s, t)).is_zero():
                bad.append((s, t))
        return bad

    def dump_lines(self) -> list[str]:
        """One line per nonzero term: ``E_r^{s,t}`` invariants and ``im d_r`` invariants."""
        lines = []
        for (s, t) in self.support():
            im = self.image_of_d(s, t)
            lines.append("E%d[s=%d,t=%d] = %s ; im d%d = %s"
                         % (self.r, s, t, self.term(s, t), self.r, im))
        return lines

    def signature(self) -> dict[tuple[int, int], tuple]:
        """Comparable summary: invariants of each term and of the image of ``d_r``."""
        return {k: (self.term(*k).invariants(), self.image_of_d(*k).invariants())
                for k in self.support()}


def filtered_page(F: FilteredComplex, r: int, keys=None) -> Page:
    """The ``r``-th page of the spectral sequence of a filtered complex.

    ``keys`` restricts the computation to the listed positions; differentials
    are then only recorded between listed positions.
    """
    if r < 1:
        raise ValueError("pages start at r = 1")
    C = F.complex
    reps: dict[tuple[int, int], Subquotient] = {}
    for p in F.filtration_jumps():
        for n in C.degrees():
            if keys is None or (p, p - n) in keys:
                reps[(p, p - n)] = F.term(r, p, n)
    terms = {k: sq.group for k, sq in reps.items()}
    d = {}
    for (s, t), sq in reps.items():
        tgt_key = (s + r, t + r - 1)
        n = s - t
        tgt = reps.get(tgt_key)
        if tgt is None or n >= C.hi:
            d[(s, t)] = AbHom.zero(sq.group, terms.get(tgt_key, _TRIVIAL))
            continue
        dn = C.diff(n)
        cols = []
        for g in sq.gens:
            c = tgt.coords(dn(g))
            if c is None:
                raise AssertionError("d of a representative left Z_r at %r" % ((s, t),))
            cols.append(c)
        d[(s, t)] = AbHom(sq.group, tgt.group,
                          IntMatrix.from_columns(cols, tgt.group.ngens), check=False)
    return Page(r, terms, d, reps)


def infinity_page_index(F: FilteredComplex) -> int:
    """A page index past which every differential vanishes."""
    return F.p_max - F.p_min + 2


def two_step_e2(D: DoubleComplex) -> dict[tuple[int, int], FgAbGroup]:
    """``H^s`` of the rows of vertical homology: ``(s, t) -> H^s_h(H_t^v(D))``."""
    out = {}
    for t in range(D.T + 1):
        hs = []
        for s in range(D.S + 1):
            col = D.column(s)
            hs.append(col.cohomology_subquotient(-t))
        maps = []
        for s in range(D.S):
            maps.append(induced_map(D.h(s, t), hs[s], hs[s + 1]))
        row = CochainComplex(0, [h.group for h in hs], maps, check=False)
        for s in range(D.S + 1):
            out[(s, t)] = cohomology(row, s)
    return out
