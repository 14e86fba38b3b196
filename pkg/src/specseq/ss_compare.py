"""Homotopy-limit versus Postnikov spectral sequences of a cosimplicial chain complex.

A cosimplicial chain complex has one cosimplicial abelian group per vertical
degree ``t`` and vertical differentials that commute with all structure maps.
Its unnormalized double complex carries two filtrations of the same total
complex:

* the skeletal filtration ``F^s`` (columns ``>= s``), whose pages form the
  homotopy-limit spectral sequence;
* the columnwise canonical truncation ``G^q``, whose pages, shifted one step
  and reindexed by ``Ẽ^{s,t} = E^{t,2t-s}``, form the Postnikov spectral sequence.

Since ``Z_(r-1)(G)`` sits inside ``Z_r(F)`` at matching positions, a cycle
representing a Postnikov class also represents a homotopy-limit class; that
inclusion is the comparison map checked here page by page.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .complexes import (
    DoubleComplex,
    FilteredComplex,
    Page,
    filtered_page,
    skeletal_filtration,
    truncation_filtration,
    two_step_e2,
)
from .cosimplicial import CosimplicialAbGroup, FinGroup, cobar, cyclic_group, unnormalized_complex
from .exact_couple import reindex_tilde
from .exact_linalg import AbHom, FgAbGroup, IntMatrix, _Echelon, integer_kernel


class CosimplicialChainComplex:
    """Rows ``t = 0 .. T`` of cosimplicial abelian groups with vertical maps ``row_t -> row_(t-1)``.

    ``vertical[t][s]`` is the level-``s`` component of the map out of row ``t``
    (``vertical[0]`` is empty).
    """

    def __init__(self, rows: Sequence[CosimplicialAbGroup], vertical: Sequence[Sequence[AbHom]],
                 check: bool = True):
        self.rows = list(rows)
        self.T = len(rows) - 1
        self.S = min(R.N for R in rows)
        self.vertical = [list(v) for v in vertical]
        if len(self.vertical) != len(self.rows):
            raise ValueError("need a vertical map list per row (empty for row 0)")
        self._D = None
        if check:
            self.check()

    def v(self, t: int, s: int) -> AbHom:
        return self.vertical[t][s]

    def check(self) -> None:
        for t in range(1, self.T + 1):
            for s in range(self.S + 1):
                if t >= 2 and not self.v(t - 1, s).compose(self.v(t, s)).is_zero():
                    raise ValueError("vertical d∘d nonzero at row %d, level %d" % (t, s))
            for s in range(self.S):
                for i in range(s + 2):
                    a = self.rows[t - 1].coface(s, i).compose(self.v(t, s))
                    b = self.v(t, s + 1).compose(self.rows[t].coface(s, i))
                    if not a.equals(b):
                        raise ValueError("vertical map out of row %d does not commute with d%d on level %d"
                                         % (t, i, s))
            for s in range(1, self.S + 1):
                for i in range(s):
                    a = self.rows[t - 1].codegeneracy(s, i).compose(self.v(t, s))
                    b = self.v(t, s - 1).compose(self.rows[t].codegeneracy(s, i))
                    if not a.equals(b):
                        raise ValueError("vertical map out of row %d does not commute with s%d on level %d"
                                         % (t, i, s))

    def double_complex(self) -> DoubleComplex:
        """Unnormalized columns: ``A^{s,t} = row_t^s``, ``d_h = Σ(-1)^i ∂^i``."""
        if self._D is None:
            groups, dh, dv = {}, {}, {}
            for t, R in enumerate(self.rows):
                C = unnormalized_complex(R)
                for s in range(self.S + 1):
                    groups[(s, t)] = R.levels[s]
                    if s < self.S:
                        dh[(s, t)] = C.diff(s)
                    if t >= 1:
                        dv[(s, t)] = self.v(t, s)
            self._D = DoubleComplex(groups, dh, dv, self.S, self.T, check=False)
        return self._D


# ---------------------------------------------------------------------------
# The two spectral sequences


class _Both:
    """Both filtrations of one total complex, computed once and shared."""

    def __init__(self, X: CosimplicialChainComplex):
        self.X = X
        self.D = X.double_complex()
        self.F = skeletal_filtration(self.D)
        self.G = truncation_filtration(self.D)


def holim_ss(X: CosimplicialChainComplex, rmax: int) -> list[Page]:
    """Pages ``E_1 .. E_rmax`` of the skeletal filtration."""
    if rmax < 2:
        raise ValueError("rmax must be at least 2")
    F = skeletal_filtration(X.double_complex())
    return [filtered_page(F, r) for r in range(1, rmax + 1)]


def postnikov_ss(X: CosimplicialChainComplex, rmax: int) -> list[Page]:
    """Pages ``Ẽ_2 .. Ẽ_rmax``: truncation pages ``r - 1``, reindexed."""
    if rmax < 2:
        raise ValueError("rmax must be at least 2")
    G = truncation_filtration(X.double_complex())
    return [reindex_tilde(filtered_page(G, r - 1)) for r in range(2, rmax + 1)]


@dataclass
class Verdict:
    kind: str
    r: int | None
    position: tuple
    ok: bool
    detail: str = ""

    def line(self) -> str:
        pos = ",".join(str(x) for x in self.position)
        r = "-" if self.r is None else str(self.r)
        return "%-8s r=%s (%s) %s%s" % (self.kind, r, pos, "PASS" if self.ok else "FAIL",
                                       " " + self.detail if self.detail else "")


@dataclass
class ComparisonReport:
    verdicts: list[Verdict] = field(default_factory=list)

    @property
    def all_pass(self) -> bool:
        return all(v.ok for v in self.verdicts)

    def failures(self) -> list[Verdict]:
        return [v for v in self.verdicts if not v.ok]

    def to_text(self) -> str:
        return "\n".join(v.line() for v in self.verdicts) + "\n"

    def kinds(self) -> set[str]:
        return {v.kind for v in self.verdicts}


def _comparison_map(hl: Page, po: Page, key) -> AbHom:
    """Send each Postnikov representative to its class on the homotopy-limit page."""
    src = po.reps[key]
    tgt = hl.reps[key]
    cols = []
    for g in src.gens:
        c = tgt.coords(g)
        if c is None:
            raise AssertionError("Postnikov representative at %r is not a homotopy-limit cycle" % (key,))
        cols.append(c)
    return AbHom(src.group, tgt.group, IntMatrix.from_columns(cols, tgt.group.ngens), check=True)


def compare_pages(hl: Page, po: Page) -> list[Verdict]:
    r = hl.r
    out = []
    keys = sorted(set(hl.support()) | set(po.support()))
    for key in keys:
        a, b = hl.term(*key), po.term(*key)
        out.append(Verdict("term", r, key, a == b, "%s | %s" % (a, b)))
        ia, ib = hl.image_of_d(*key), po.image_of_d(*key)
        out.append(Verdict("d-image", r, key, ia == ib, "%s | %s" % (ia, ib)))
        if key not in hl.reps or key not in po.reps:
            out.append(Verdict("phi", r, key, a.is_trivial() and b.is_trivial(), "missing representatives"))
            continue
        phi = _comparison_map(hl, po, key)
        out.append(Verdict("phi", r, key, phi.is_isomorphism(), ""))
        # φ ∘ d_Po = d_HL ∘ φ, checked on generators
        a_, b_ = hl.bidegree
        tkey = (key[0] + a_, key[1] + b_)
        if tkey in hl.reps and tkey in po.reps and not hl.term(*tkey).is_trivial():
            phi_t = _comparison_map(hl, po, tkey)
            lhs = phi_t.compose(po.differential(*key))
            rhs = hl.differential(*key).compose(phi)
            diff = lhs - rhs
            bad = [j for j, c in enumerate(diff.columns()) if not diff.target.is_zero(c)]
            out.append(Verdict("commute", r, key, not bad,
                               "" if not bad else "generator %d" % bad[0]))
    return out


def _span_contains(gens_a, gens_b, n: int) -> int | None:
    """Index of the first vector of ``gens_b`` outside ``span(gens_a)``, else None."""
    E = _Echelon(n)
    for g in gens_a:
        E.insert(g)
    for k, g in enumerate(gens_b):
        if E.reduce(g) is None:
            return k
    return None


def compare_abutment(F: FilteredComplex, G: FilteredComplex) -> list[Verdict]:
    """``F^s H^n = G^(s-n) H^n`` as subgroups of ``H^n(Tot)``."""
    C = F.complex
    out = []
    for n in C.degrees():
        grp = C.group(n)
        bnd = [w for w in (C.diff(n - 1)(x) for x in _units(C.group(n - 1).ngens)) if any(w)] if n > C.lo else []
        base = bnd + grp.relation_columns()
        for s in range(F.p_min, F.p_max + 2):
            zf = F.abutment_subgroup(s, n)
            zg = G.abutment_subgroup(s - n, n)
            k1 = _span_contains(zf + base, zg, grp.ngens)
            k2 = _span_contains(zg + base, zf, grp.ngens)
            ok = k1 is None and k2 is None
            detail = ""
            if k1 is not None:
                detail = "Postnikov generator %d not in holim filtration" % k1
            elif k2 is not None:
                detail = "holim generator %d not in Postnikov filtration" % k2
            out.append(Verdict("abutment", None, (s, n), ok, detail))
    return out


def _units(n: int) -> list[list[int]]:
    return [[int(i == j) for i in range(n)] for j in range(n)]


def compare_from_E2(X: CosimplicialChainComplex, rmax: int = 5) -> ComparisonReport:
    """Page-by-page comparison for ``2 <= r <= rmax`` plus the abutment filtrations."""
    if rmax < 2:
        raise ValueError("rmax must be at least 2")
    both = _Both(X)
    rep = ComparisonReport()
    e2 = two_step_e2(both.D)
    for r in range(2, rmax + 1):
        hl = filtered_page(both.F, r)
        po = reindex_tilde(filtered_page(both.G, r - 1))
        if r == 2:
            for key, H in sorted(e2.items()):
                ok = hl.term(*key) == H and po.term(*key) == H
                if not H.is_trivial() or not ok:
                    rep.verdicts.append(Verdict("E2-oracle", 2, key, ok, str(H)))
        rep.verdicts.extend(compare_pages(hl, po))
    rep.verdicts.extend(compare_abutment(both.F, both.G))
    return rep


def e1_pages_differ(X: CosimplicialChainComplex) -> bool:
    """Whether the two ``E_1`` pages (each in its own tower indexing) differ."""
    D = X.double_complex()
    a = filtered_page(skeletal_filtration(D), 1).signature()
    b = filtered_page(truncation_filtration(D), 1).signature()
    return a != b


def has_nonzero_differential(X: CosimplicialChainComplex, r: int) -> bool:
    P = filtered_page(skeletal_filtration(X.double_complex()), r)
    return any(not P.differential(*k).is_zero() for k in P.support())


# ---------------------------------------------------------------------------
# Inputs built from complexes of group modules


@dataclass
class GroupModule:
    """A free abelian group with a group action (one matrix per element)."""

    rank: int
    action: list[IntMatrix]

    @property
    def group(self) -> FgAbGroup:
        return FgAbGroup.free(self.rank)


def trivial_module(G: FinGroup) -> GroupModule:
    return GroupModule(1, [IntMatrix.identity(1)] * G.order)


def sign_module(G: FinGroup, sign: Sequence[int]) -> GroupModule:
    return GroupModule(1, [IntMatrix([[e]]) for e in sign])


def regular_module(G: FinGroup) -> GroupModule:
    """``ZG`` with ``g`` acting by left multiplication on the basis."""
    mats = []
    for g in G.elements():
        cols = [{G.mul(g, h): 1} for h in G.elements()]
        mats.append(IntMatrix.from_sparse_columns(cols, G.order))
    return GroupModule(G.order, mats)


def module_sum(mods: Sequence[GroupModule], order: int) -> GroupModule:
    rank = sum(m.rank for m in mods)
    mats = []
    for g in range(order):
        off = 0
        cols = []
        for m in mods:
            for c in m.action[g].sparse_columns():
                cols.append({i + off: v for i, v in c.items()})
            off += m.rank
        mats.append(IntMatrix.from_sparse_columns(cols, rank))
    return GroupModule(rank, mats)


def _inverse_index(G: FinGroup) -> list[int]:
    return [G.inv(g) for g in G.elements()]


def average(G: FinGroup, src: GroupModule, tgt: GroupModule, X: IntMatrix) -> IntMatrix:
    """``Σ_g g·X·g^(-1)``, an equivariant map ``src -> tgt``."""
    total = IntMatrix.zeros(tgt.rank, src.rank)
    inv = _inverse_index(G)
    for g in G.elements():
        total = total + tgt.action[g] @ X @ src.action[inv[g]]
    return total


def is_equivariant(G: FinGroup, src: GroupModule, tgt: GroupModule, f: IntMatrix) -> bool:
    return all(tgt.action[g] @ f == f @ src.action[g] for g in G.elements())


def cobar_map(G: FinGroup, src: GroupModule, tgt: GroupModule, f: IntMatrix, N: int) -> list[AbHom]:
    """Levelwise ``Maps(G^n, M) -> Maps(G^n, M')`` given by post-composition with ``f``."""
    out = []
    for n in range(N + 1):
        copies = G.order ** n
        cols = []
        for c in range(copies):
            for col in f.sparse_columns():
                cols.append({i + c * tgt.rank: v for i, v in col.items()})
        M = IntMatrix.from_sparse_columns(cols, copies * tgt.rank)
        out.append(AbHom(FgAbGroup.free(copies * src.rank), FgAbGroup.free(copies * tgt.rank), M,
                         check=False))
    return out


def from_module_complex(G: FinGroup, modules: Sequence[GroupModule], diffs: Sequence[IntMatrix],
                        N: int, check: bool = True) -> CosimplicialChainComplex:
    """Apply the bar construction to a chain complex ``M_T -> .. -> M_0`` of G-modules.

    ``diffs[t - 1]`` is the map ``M_t -> M_(t-1)``; it must be equivariant.
    """
    if len(diffs) != len(modules) - 1:
        raise ValueError("need one differential between consecutive modules")
    for t, d in enumerate(diffs, start=1):
        if not is_equivariant(G, modules[t], modules[t - 1], d):
            raise ValueError("differential out of degree %d is not equivariant" % t)
    rows = [cobar(G, m.group, list(m.action), N) for m in modules]
    vertical = [[]]
    for t in range(1, len(modules)):
        vertical.append(cobar_map(G, modules[t], modules[t - 1], diffs[t - 1], N))
    return CosimplicialChainComplex(rows, vertical, check=check)


def random_module_complex(rng: random.Random, G: FinGroup, T: int, max_summands: int = 2,
                          entry: int = 2):
    """Random ``M_T -> .. -> M_0`` of sums of Z, Z^- (order 2 only) and ZG with d∘d = 0."""
    kinds = ["triv", "reg"]
    sign = None
    if G.order == 2:
        kinds.append("sign")
        sign = [1 if g == G.identity else -1 for g in G.elements()]
    modules = []
    for _ in range(T + 1):
        parts = []
        for _ in range(rng.randint(1, max_summands)):
            k = rng.choice(kinds)
            if k == "triv":
                parts.append(trivial_module(G))
            elif k == "sign":
                parts.append(sign_module(G, sign))
            else:
                parts.append(regular_module(G))
        modules.append(module_sum(parts, G.order))
    diffs = []
    for t in range(1, T + 1):
        src, tgt = modules[t], modules[t - 1]
        if t == 1:
            X = IntMatrix([[rng.randint(-entry, entry) for _ in range(src.rank)] for _ in range(tgt.rank)],
                          src.rank)
            d = average(G, src, tgt, X)
        else:
            # land in ker of the previous differential, which is G-stable
            K = integer_kernel(diffs[-1])
            if K.ncols == 0:
                d = IntMatrix.zeros(tgt.rank, src.rank)
            else:
                Y = IntMatrix([[rng.randint(-1, 1) for _ in range(src.rank)] for _ in range(K.ncols)],
                              src.rank)
                d = average(G, src, tgt, K @ Y)
        if rng.random() < 0.15:
            d = IntMatrix.zeros(tgt.rank, src.rank)
        diffs.append(d)
    return modules, diffs


def random_cosimplicial_chain_complex(rng: random.Random) -> CosimplicialChainComplex:
    """A small random input: bar construction over trivial, Z/2 or Z/3 applied to a module complex."""
    choice = rng.choice(["trivial", "z2", "z2", "z3"])
    if choice == "trivial":
        G, N, T = cyclic_group(1), rng.randint(1, 3), rng.randint(1, 3)
    elif choice == "z2":
        G, N, T = cyclic_group(2), rng.randint(2, 3), rng.randint(1, 2)
    else:
        G, N, T = cyclic_group(3), 2, 1
    modules, diffs = random_module_complex(rng, G, T)
    return from_module_complex(G, modules, diffs, N, check=False)


def d2_fixture() -> CosimplicialChainComplex:
    """``ZG --(1-g)--> ZG`` over ``G = Z/2``: the class in ``E_2^{0,0}`` hits ``E_2^{2,1}``."""
    G = cyclic_group(2)
    R = regular_module(G)
    d = IntMatrix.identity(2) - R.action[1]
    return from_module_complex(G, [R, R], [d], 3)


def d3_fixture() -> CosimplicialChainComplex:
    """``ZG --(1+g)--> ZG --(1-g)--> ZG`` over ``G = Z/2``; homology Z, 0, Z^- in rows 0, 1, 2."""
    G = cyclic_group(2)
    R = regular_module(G)
    one, g = IntMatrix.identity(2), R.action[1]
    return from_module_complex(G, [R, R, R], [one - g, one + g], 3)
