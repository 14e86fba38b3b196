"""Exact integer linear algebra and finitely generated abelian groups.

All arithmetic uses Python integers, so the entry growth that Hermite and
Smith reductions produce can never overflow.

A finitely generated abelian group is stored as a presentation
``Z^n / span(R)`` where the columns of ``R`` are the relations.  Presentations
are left as they are between operations; :func:`canonicalize` is only used
when two groups are compared.

>>> G = FgAbGroup.cyclic(6)
>>> element_order(G, [2])
3
>>> smith_normal_form(IntMatrix([[2, 4], [6, 8]]))[0].rows()
[[2, 0], [0, 4]]
"""
from __future__ import annotations

import math
from functools import reduce
from typing import Iterable, Sequence

INFINITY = math.inf


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


class IntMatrix:
    """Immutable integer matrix with an explicit shape (so 0 x n is allowed).

    Storage is by sparse columns; dense rows are produced on demand.  This
    keeps the large, mostly-zero structure maps of product constructions cheap.
    """

    __slots__ = ("nrows", "ncols", "_cols", "_rows", "_hash")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        data = [[int(v) for v in r] for r in rows]
        if ncols is None:
            if not data:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(data[0])
        for r in data:
            if len(r) != ncols:
                raise ValueError("ragged rows: expected %d columns, got %d" % (ncols, len(r)))
        cols: list[dict[int, int]] = [{} for _ in range(ncols)]
        for i, r in enumerate(data):
            for j, v in enumerate(r):
                if v:
                    cols[j][i] = v
        self.nrows = len(data)
        self.ncols = ncols
        self._cols = cols
        self._rows = tuple(tuple(r) for r in data)
        self._hash = None

    @classmethod
    def from_sparse_columns(cls, cols: Sequence[dict[int, int]], nrows: int) -> "IntMatrix":
        """Build from ``{row: value}`` columns without copying (entries must be nonzero ints)."""
        M = cls.__new__(cls)
        M.nrows = nrows
        M.ncols = len(cols)
        M._cols = list(cols)
        M._rows = None
        M._hash = None
        return M

    @classmethod
    def zeros(cls, m: int, n: int) -> "IntMatrix":
        return cls.from_sparse_columns([{} for _ in range(n)], m)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_sparse_columns([{j: 1} for j in range(n)], n)

    @classmethod
    def from_columns(cls, cols: Iterable[Sequence[int]], nrows: int) -> "IntMatrix":
        out = []
        for c in cols:
            if isinstance(c, dict):
                out.append({i: int(x) for i, x in c.items() if x})
                continue
            if len(c) != nrows:
                raise ValueError("column of length %d, expected %d" % (len(c), nrows))
            out.append({i: int(x) for i, x in enumerate(c) if x})
        return cls.from_sparse_columns(out, nrows)

    @classmethod
    def diagonal(cls, entries: Sequence[int], nrows: int | None = None,
                 ncols: int | None = None) -> "IntMatrix":
        m = len(entries) if nrows is None else nrows
        n = len(entries) if ncols is None else ncols
        cols = [{} for _ in range(n)]
        for i, e in enumerate(entries):
            if e:
                cols[i][i] = e
        return cls.from_sparse_columns(cols, m)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def _dense_rows(self) -> tuple[tuple[int, ...], ...]:
        if self._rows is None:
            rows = [[0] * self.ncols for _ in range(self.nrows)]
            for j, c in enumerate(self._cols):
                for i, v in c.items():
                    rows[i][j] = v
            self._rows = tuple(tuple(r) for r in rows)
        return self._rows

    @property
    def entries(self) -> tuple[int, ...]:
        return tuple(v for r in self._dense_rows() for v in r)

    def __getitem__(self, ij):
        i, j = ij
        return self._cols[j].get(i, 0)

    def row(self, i: int) -> list[int]:
        return [c.get(i, 0) for c in self._cols]

    def col(self, j: int) -> list[int]:
        out = [0] * self.nrows
        for i, v in self._cols[j].items():
            out[i] = v
        return out

    def rows(self) -> list[list[int]]:
        return [list(r) for r in self._dense_rows()]

    def columns(self) -> list[list[int]]:
        return [self.col(j) for j in range(self.ncols)]

    def sparse_columns(self) -> list[dict[int, int]]:
        """The stored ``{row: value}`` columns (do not mutate)."""
        return self._cols

    def nnz(self) -> int:
        return sum(len(c) for c in self._cols)

    @property
    def T(self) -> "IntMatrix":
        cols = [{} for _ in range(self.nrows)]
        for j, c in enumerate(self._cols):
            for i, v in c.items():
                cols[i][j] = v
        return IntMatrix.from_sparse_columns(cols, self.ncols)

    def _apply_sparse(self, items) -> dict[int, int]:
        acc: dict[int, int] = {}
        cols = self._cols
        for j, x in items:
            if not x:
                continue
            for i, v in cols[j].items():
                acc[i] = acc.get(i, 0) + v * x
        return {i: v for i, v in acc.items() if v}

    def apply(self, v) -> list[int]:
        """``M @ v`` for a dense list or a sparse ``{index: value}`` vector."""
        if isinstance(v, dict):
            items = v.items()
        else:
            if len(v) != self.ncols:
                raise ValueError("vector of length %d for %d columns" % (len(v), self.ncols))
            items = enumerate(v)
        out = [0] * self.nrows
        for i, x in self._apply_sparse(items).items():
            out[i] = x
        return out

    def apply_sparse(self, v) -> dict[int, int]:
        items = v.items() if isinstance(v, dict) else enumerate(v)
        return self._apply_sparse(items)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch %s @ %s" % (self.shape, other.shape))
        return IntMatrix.from_sparse_columns([self._apply_sparse(c.items()) for c in other._cols],
                                             self.nrows)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        cols = []
        for a, b in zip(self._cols, other._cols):
            c = dict(a)
            for i, v in b.items():
                w = c.get(i, 0) + v
                if w:
                    c[i] = w
                else:
                    c.pop(i, None)
            cols.append(c)
        return IntMatrix.from_sparse_columns(cols, self.nrows)

    def __neg__(self) -> "IntMatrix":
        return self.scale(-1)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def scale(self, k: int) -> "IntMatrix":
        if k == 0:
            return IntMatrix.zeros(self.nrows, self.ncols)
        return IntMatrix.from_sparse_columns([{i: k * v for i, v in c.items()} for c in self._cols],
                                             self.nrows)

    def hstack(self, *others: "IntMatrix") -> "IntMatrix":
        cols = list(self._cols)
        for o in others:
            if o.nrows != self.nrows:
                raise ValueError("hstack row mismatch")
            cols.extend(o._cols)
        return IntMatrix.from_sparse_columns(cols, self.nrows)

    def vstack(self, *others: "IntMatrix") -> "IntMatrix":
        cols = [dict(c) for c in self._cols]
        off = self.nrows
        for o in others:
            if o.ncols != self.ncols:
                raise ValueError("vstack column mismatch")
            for c, d in zip(cols, o._cols):
                for i, v in d.items():
                    c[i + off] = v
            off += o.nrows
        return IntMatrix.from_sparse_columns(cols, off)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMatrix":
        where = {r: k for k, r in enumerate(rows)}
        out = []
        for j in cols:
            out.append({where[i]: v for i, v in self._cols[j].items() if i in where})
        return IntMatrix.from_sparse_columns(out, len(rows))

    def is_zero(self) -> bool:
        return not any(self._cols)

    def det(self) -> int:
        """Determinant by fraction-free Bareiss elimination."""
        n = self.nrows
        if n != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        if n == 0:
            return 1
        a = self.rows()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def is_unimodular(self) -> bool:
        return self.nrows == self.ncols and abs(self.det()) == 1

    def _key(self):
        return tuple(tuple(sorted(c.items())) for c in self._cols)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and self.shape == other.shape and self._cols == other._cols

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.shape, self._key()))
        return self._hash

    def __repr__(self) -> str:
        return "IntMatrix(%r, ncols=%d)" % (self.rows(), self.ncols)


def _as_matrix(M) -> IntMatrix:
    return M if isinstance(M, IntMatrix) else IntMatrix(M)


# ---------------------------------------------------------------------------
# Normal forms


def hermite_normal_form(M) -> tuple[IntMatrix, IntMatrix]:
    """Row-echelon Hermite form ``H = U @ M`` with ``U`` unimodular.

    Pivots lead their columns, are positive, and the entries above each pivot
    are reduced into ``[0, pivot)``.  Zero rows sit at the bottom.
    """
    M = _as_matrix(M)
    m, n = M.shape
    A = M.rows()
    U = IntMatrix.identity(m).rows()
    r = 0
    for c in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            if A[i][c] == 0:
                continue
            if A[r][c] == 0:
                A[r], A[i] = A[i], A[r]
                U[r], U[i] = U[i], U[r]
                continue
            a, b = A[r][c], A[i][c]
            g, s, t = xgcd(a, b)
            ag, bg = a // g, b // g
            A[r], A[i] = ([s * x + t * y for x, y in zip(A[r], A[i])],
                          [ag * y - bg * x for x, y in zip(A[r], A[i])])
            U[r], U[i] = ([s * x + t * y for x, y in zip(U[r], U[i])],
                          [ag * y - bg * x for x, y in zip(U[r], U[i])])
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
            U[r] = [-x for x in U[r]]
        p = A[r][c]
        for i in range(r):
            q = A[i][c] // p
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        r += 1
    return IntMatrix(A, n), IntMatrix(U, m)


def _snf(A: list[list[int]], m: int, n: int, want_L=True, want_R=True, want_Linv=False):
    """In-place Smith reduction.  Returns (diag, L, R, Linv) as row lists."""
    L = [[int(i == j) for j in range(m)] for i in range(m)] if want_L else None
    Li = [[int(i == j) for j in range(m)] for i in range(m)] if want_Linv else None
    R = [[int(i == j) for j in range(n)] for i in range(n)] if want_R else None

    def row_add(i, j, q):  # row_i += q row_j
        A[i] = [x + q * y for x, y in zip(A[i], A[j])]
        if L is not None:
            L[i] = [x + q * y for x, y in zip(L[i], L[j])]
        if Li is not None:  # inverse op on columns: col_j -= q col_i
            for r in Li:
                r[j] -= q * r[i]

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        if L is not None:
            L[i], L[j] = L[j], L[i]
        if Li is not None:
            for r in Li:
                r[i], r[j] = r[j], r[i]

    def row_neg(i):
        A[i] = [-x for x in A[i]]
        if L is not None:
            L[i] = [-x for x in L[i]]
        if Li is not None:
            for r in Li:
                r[i] = -r[i]

    def col_add(i, j, q):  # col_i += q col_j
        for r in A:
            r[i] += q * r[j]
        if R is not None:
            for r in R:
                r[i] += q * r[j]

    def col_swap(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        if R is not None:
            for r in R:
                r[i], r[j] = r[j], r[i]

    diag = []
    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            row_swap(i, t)
        if j != t:
            col_swap(j, t)
        while True:
            p = A[t][t]
            moved = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    if q:
                        row_add(i, t, -q)
                    if A[i][t]:
                        moved = True
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    if q:
                        col_add(j, t, -q)
                    if A[t][j]:
                        moved = True
            if moved:
                best = None
                for i in range(t + 1, m):
                    if A[i][t] and (best is None or abs(A[i][t]) < best[0]):
                        best = (abs(A[i][t]), i, None)
                for j in range(t + 1, n):
                    if A[t][j] and (best is None or abs(A[t][j]) < best[0]):
                        best = (abs(A[t][j]), None, j)
                if best[1] is not None:
                    row_swap(best[1], t)
                else:
                    col_swap(best[2], t)
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_add(t, bad, 1)
        if A[t][t] < 0:
            row_neg(t)
        diag.append(A[t][t])
    return diag, L, R, Li


def smith_normal_form(M) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith form ``D = L @ M @ R`` with ``L``, ``R`` unimodular and d1 | d2 | ...

    >>> D, L, R = smith_normal_form([[6]])
    >>> D.rows()
    [[6]]
    """
    M = _as_matrix(M)
    m, n = M.shape
    A = M.rows()
    _, L, R, _ = _snf(A, m, n)
    return IntMatrix(A, n), IntMatrix(L, m), IntMatrix(R, n)


def invariant_factors_of_matrix(M) -> list[int]:
    """Nonzero diagonal entries of the Smith form."""
    M = _as_matrix(M)
    A = M.rows()
    diag, _, _, _ = _snf(A, M.nrows, M.ncols, want_L=False, want_R=False)
    return diag


# ---------------------------------------------------------------------------
# Incremental echelon lattices


def _sparse(v) -> dict[int, int]:
    if isinstance(v, dict):
        return {i: x for i, x in v.items() if x}
    return {i: x for i, x in enumerate(v) if x}


def _dense(v: dict[int, int], n: int) -> list[int]:
    out = [0] * n
    for i, x in v.items():
        out[i] = x
    return out


def _axpy(v: dict[int, int], q: int, h: dict[int, int]) -> None:
    """``v -= q * h`` in place."""
    for i, x in h.items():
        y = v.get(i, 0) - q * x
        if y:
            v[i] = y
        else:
            v.pop(i, None)


def _combine(a: int, v: dict, b: int, h: dict) -> dict:
    """``a * v + b * h`` as a new sparse vector."""
    out = {}
    for i, x in v.items():
        out[i] = a * x
    for i, x in h.items():
        y = out.get(i, 0) + b * x
        if y:
            out[i] = y
        else:
            out.pop(i, None)
    return {i: x for i, x in out.items() if x}


class _Echelon:
    """Row-echelon basis of a sublattice of Z^n, grown one vector at a time.

    Every stored row carries a coefficient vector over the *tracked*
    generators (the untracked ones contribute nothing to it).  Inserting a
    vector that is already in the lattice returns the tracked part of the
    syzygy it produced; those parts generate the relations among the tracked
    generators modulo everything else.  Rows are sparse, so lattices with
    thousands of mostly-unit generators stay cheap.
    """

    __slots__ = ("n", "ntrack", "piv")

    def __init__(self, n: int, ntrack: int = 0):
        self.n = n
        self.ntrack = ntrack
        self.piv: dict[int, tuple[dict[int, int], dict[int, int]]] = {}

    @property
    def rank(self) -> int:
        return len(self.piv)

    def pivots(self) -> list[int]:
        return sorted(self.piv)

    def basis(self) -> list[list[int]]:
        return [_dense(self.piv[p][0], self.n) for p in self.pivots()]

    def insert(self, v, c=None) -> list[int] | None:
        v = _sparse(v)
        c = _sparse(c) if c is not None else {}
        piv = self.piv
        while v:
            p = min(v)
            row = piv.get(p)
            if row is None:
                if v[p] < 0:
                    v = {i: -x for i, x in v.items()}
                    c = {i: -x for i, x in c.items()}
                self._store(p, v, c)
                return None
            h, hc = row
            a, b = v[p], h[p]
            if a % b == 0:
                q = a // b
                _axpy(v, q, h)
                _axpy(c, q, hc)
            else:
                g, s, t = xgcd(b, a)
                ag, bg = a // g, b // g
                nh = _combine(s, h, t, v)
                nhc = _combine(s, hc, t, c)
                v = _combine(bg, v, -ag, h)
                c = _combine(bg, c, -ag, hc)
                self._store(p, nh, nhc)
        return _dense(c, self.ntrack)

    def _store(self, p: int, v: dict, c: dict) -> None:
        # keep entries at later pivot columns reduced, which bounds growth
        piv = self.piv
        q = p
        while True:
            cand = [k for k in v if k > q and k in piv]
            if not cand:
                break
            q = min(cand)
            h, hc = piv[q]
            k = v[q] // h[q]
            if k:
                _axpy(v, k, h)
                _axpy(c, k, hc)
        piv[p] = (v, c)

    def reduce(self, v) -> list[int] | None:
        """Tracked coefficients of some expression of ``v`` in the lattice, or None."""
        v = _sparse(v)
        c: dict[int, int] = {}
        piv = self.piv
        while v:
            p = min(v)
            row = piv.get(p)
            if row is None:
                return None
            h, hc = row
            q, r = divmod(v[p], h[p])
            if r:
                return None
            _axpy(v, q, h)
            _axpy(c, -q, hc)
        return _dense(c, self.ntrack)

    def contains(self, v) -> bool:
        return self.reduce(v) is not None


def _relative_kernel(n: int, tracked, modulo) -> tuple[_Echelon, list[list[int]]]:
    """Generators of ``{y : sum y_j tracked_j in span(modulo)}``.

    Returns the echelon of ``span(tracked) + span(modulo)`` (tracking the
    coefficients of ``tracked``) together with a basis of that kernel.
    """
    k = len(tracked)
    E = _Echelon(n, k)
    for col in modulo:
        E.insert(col)
    syz = []
    for j, col in enumerate(tracked):
        s = E.insert(col, {j: 1})
        if s is not None and any(s):
            syz.append(s)
    return E, lattice_basis(syz, k)


def lattice_basis(vectors, n: int) -> list[list[int]]:
    """A Z-basis (in echelon form) of the lattice spanned by ``vectors``."""
    E = _Echelon(n)
    for v in vectors:
        E.insert(v)
    return E.basis()


def solve(M, b: Sequence[int]) -> list[int] | None:
    """An integer ``x`` with ``M @ x = b``, or None when there is none.

    >>> solve([[2, 3]], [1])
    [-1, 1]
    >>> solve([[2]], [3]) is None
    True
    """
    M = _as_matrix(M)
    if len(b) != M.nrows:
        raise ValueError("right-hand side has length %d, expected %d" % (len(b), M.nrows))
    E = _Echelon(M.nrows, M.ncols)
    for j, col in enumerate(M.columns()):
        E.insert(col, {j: 1})
    return E.reduce(b)


def integer_kernel(M) -> IntMatrix:
    """Columns form a basis of ``{x : M @ x = 0}``."""
    M = _as_matrix(M)
    _, K = _relative_kernel(M.nrows, M.columns(), [])
    return IntMatrix.from_columns(K, M.ncols)


def _prime_powers(d: int) -> dict[int, int]:
    out = {}
    p = 2
    while p * p <= d:
        while d % p == 0:
            out[p] = out.get(p, 0) + 1
            d //= p
        p += 1
    if d > 1:
        out[d] = out.get(d, 0) + 1
    return out


def cyclic_orders_to_invariants(orders: Iterable[int]) -> tuple[int, ...]:
    """Invariant factors of ``⊕ Z/d`` (``d = 0`` is Z, ``d = 1`` vanishes)."""
    free = 0
    exps: dict[int, list[int]] = {}
    for d in orders:
        d = abs(d)
        if d == 0:
            free += 1
        elif d > 1:
            for p, e in _prime_powers(d).items():
                exps.setdefault(p, []).append(e)
    k = max((len(v) for v in exps.values()), default=0)
    tors = [1] * k
    for p, es in exps.items():
        es.sort(reverse=True)
        for i, e in enumerate(es):
            tors[k - 1 - i] *= p ** e
    return tuple(tors) + (0,) * free


# ---------------------------------------------------------------------------
# Groups


class FgAbGroup:
    """The group ``Z^n / span(relations)``; the columns of ``relations`` are relations.

    Relations may also be given as sparse columns (``{row: value}``), in which
    case the dense matrix is only built if someone asks for it.  Equality
    means isomorphism (equal invariant factors), not equal presentations.

    >>> FgAbGroup(2, [[2, 0], [0, 3]]) == FgAbGroup.cyclic(6)
    True
    """

    __slots__ = ("ngens", "_rel", "_sparse", "_inv", "_relcols")

    def __init__(self, ngens: int, relations=None, *, sparse_relations=None):
        self.ngens = ngens
        self._inv = None
        self._relcols = None
        if sparse_relations is not None:
            if relations is not None:
                raise ValueError("give relations either densely or sparsely")
            self._sparse = [_sparse(c) for c in sparse_relations]
            for c in self._sparse:
                if any(not 0 <= i < ngens for i in c):
                    raise ValueError("sparse relation index out of range for %d generators" % ngens)
            self._rel = None
            return
        if relations is None:
            relations = IntMatrix.zeros(ngens, 0)
        relations = relations if isinstance(relations, IntMatrix) else _as_matrix(relations)
        if relations.nrows != ngens and not (ngens == 0 and relations.nrows == 0):
            raise ValueError("relation matrix has %d rows for %d generators"
                             % (relations.nrows, ngens))
        self._rel = relations
        self._sparse = None

    @property
    def relations(self) -> IntMatrix:
        if self._rel is None:
            self._rel = IntMatrix.from_columns([_dense(c, self.ngens) for c in self._sparse],
                                               self.ngens)
        return self._rel

    @property
    def nrelations(self) -> int:
        return len(self._sparse) if self._sparse is not None else self._rel.ncols

    @classmethod
    def free(cls, n: int) -> "FgAbGroup":
        return cls(n, sparse_relations=[])

    @classmethod
    def trivial(cls) -> "FgAbGroup":
        return cls(0, sparse_relations=[])

    @classmethod
    def cyclic(cls, m: int) -> "FgAbGroup":
        """Z/m, with m = 0 meaning Z."""
        if m == 0:
            return cls.free(1)
        return cls(1, sparse_relations=[{0: abs(m)}])

    @classmethod
    def from_invariants(cls, factors: Sequence[int]) -> "FgAbGroup":
        """Diagonal presentation; a factor of 0 is a copy of Z."""
        return cls(len(factors), sparse_relations=[{i: d} for i, d in enumerate(factors) if d])

    def relation_vectors(self) -> list[dict[int, int]]:
        """Relations as sparse columns."""
        if self._sparse is None:
            self._sparse = [dict(c) for c in self._rel.sparse_columns()]
        return self._sparse

    def relation_columns(self) -> list[list[int]]:
        """Relations as dense columns."""
        if self._relcols is None:
            self._relcols = [_dense(c, self.ngens) for c in self.relation_vectors()]
        return self._relcols

    def invariants(self) -> tuple[int, ...]:
        """Torsion coefficients (> 1, each dividing the next) followed by a 0 per Z."""
        if self._inv is None:
            rels = self.relation_vectors()
            rows: dict[int, int] = {}
            diagonal = True
            for c in rels:
                if len(c) != 1:
                    diagonal = False
                    break
                (i, x), = c.items()
                rows[i] = math.gcd(rows.get(i, 0), x)
            if diagonal:
                self._inv = cyclic_orders_to_invariants(rows.get(i, 0) for i in range(self.ngens))
            else:
                A = self.relations.rows()
                diag, _, _, _ = _snf(A, self.ngens, self.relations.ncols, False, False)
                tors = [d for d in diag if d != 1]
                self._inv = tuple(tors) + (0,) * (self.ngens - len(diag))
        return self._inv

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariants() if d == 0)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariants() if d)

    def order(self):
        if self.rank:
            return INFINITY
        return reduce(lambda a, b: a * b, self.torsion, 1)

    def is_trivial(self) -> bool:
        return not self.invariants()

    def is_finite(self) -> bool:
        return self.rank == 0

    def relation_echelon(self) -> _Echelon:
        E = _Echelon(self.ngens)
        for c in self.relation_vectors():
            E.insert(c)
        return E

    def is_zero(self, x: Sequence[int]) -> bool:
        """Whether the ambient vector ``x`` lies in the relation span."""
        if not any(x):
            return True
        return self.relation_echelon().contains(x)

    def __eq__(self, other) -> bool:
        return isinstance(other, FgAbGroup) and self.invariants() == other.invariants()

    def __hash__(self) -> int:
        return hash(self.invariants())

    def __str__(self) -> str:
        return format_invariants(self.invariants())

    def __repr__(self) -> str:
        return "FgAbGroup(%s)" % self


def format_invariants(inv: Sequence[int]) -> str:
    """Human-readable group from its invariant factors: ``Z/2 + Z^2``."""
    if not inv:
        return "0"
    parts = ["Z/%d" % d for d in inv if d]
    r = sum(1 for d in inv if d == 0)
    if r == 1:
        parts.append("Z")
    elif r > 1:
        parts.append("Z^%d" % r)
    return " + ".join(parts)


def direct_sum(*groups: FgAbGroup) -> FgAbGroup:
    n = sum(G.ngens for G in groups)
    cols = []
    off = 0
    for G in groups:
        for c in G.relation_vectors():
            cols.append({i + off: x for i, x in c.items()})
        off += G.ngens
    return FgAbGroup(n, sparse_relations=cols)


def isomorphic(G: FgAbGroup, H: FgAbGroup) -> bool:
    return G.invariants() == H.invariants()


def canonicalize(G: FgAbGroup) -> FgAbGroup:
    """The diagonal presentation with G's invariant factors."""
    return FgAbGroup.from_invariants(G.invariants())


class IllDefinedHomomorphism(ValueError):
    """A matrix that does not carry source relations into target relations."""

    def __init__(self, index: int, image: list[int]):
        self.index = index
        self.image = image
        super().__init__("relation %d of the source maps to %r, which is not a relation of the target"
                         % (index, image))


class Subquotient:
    """``(span(sub) + span(quot) + R) / (span(quot) + R)`` inside an ambient group.

    The group is computed lazily as a minimal (diagonal) presentation whose
    generators are recorded as ambient vectors, so elements can be chased
    between the subquotient and its ambient.
    """

    def __init__(self, ambient: FgAbGroup, sub, quot=None, check: bool = True):
        n = ambient.ngens
        self.ambient = ambient
        self.sub = _columns_of(sub, n)
        self.quot = _columns_of(quot, n) if quot is not None else []
        self._built = False
        if check and self.quot:
            E = _Echelon(n)
            for c in self.sub + ambient.relation_vectors():
                E.insert(c)
            for j, c in enumerate(self.quot):
                if E.reduce(c) is None:
                    raise ValueError("quotient generator %d is not in the subgroup" % j)

    def _build(self):
        if self._built:
            return
        a = len(self.sub)
        E, K = _relative_kernel(self.ambient.ngens, self.sub,
                                self.quot + self.ambient.relation_vectors())
        r = len(K)
        A = [[K[j][i] for j in range(r)] for i in range(a)]
        diag, L, _, Li = _snf(A, a, r, want_L=True, want_R=False, want_Linv=True)
        d = diag + [0] * (a - len(diag))
        keep = [i for i in range(a) if d[i] != 1]
        self._echelon = E
        self._L = [L[i] for i in keep]
        self._mod = [d[i] for i in keep]
        self._group = FgAbGroup.from_invariants(self._mod)
        n = self.ambient.ngens
        gens = []
        for i in keep:
            col = [0] * n
            for j in range(a):
                x = Li[j][i]
                if x:
                    s = self.sub[j]
                    for k in range(n):
                        if s[k]:
                            col[k] += x * s[k]
            gens.append(col)
        self._gens = gens
        self._built = True

    @property
    def group(self) -> FgAbGroup:
        self._build()
        return self._group

    @property
    def gens(self) -> list[list[int]]:
        """Ambient representatives of the generators of :attr:`group`."""
        self._build()
        return self._gens

    def gens_matrix(self) -> IntMatrix:
        return IntMatrix.from_columns(self.gens, self.ambient.ngens)

    def coords(self, x: Sequence[int]) -> list[int] | None:
        """Coordinates of the class of ``x`` in :attr:`group`, or None if x is outside."""
        self._build()
        if len(x) != self.ambient.ngens:
            raise ValueError("vector of length %d in ambient of rank %d" % (len(x), self.ambient.ngens))
        y = self._echelon.reduce(x)
        if y is None:
            return None
        out = []
        for Lrow, d in zip(self._L, self._mod):
            v = sum(a * b for a, b in zip(Lrow, y) if b)
            out.append(v % d if d else v)
        return out

    def contains(self, x: Sequence[int]) -> bool:
        return self.coords(x) is not None

    def is_zero_class(self, x: Sequence[int]) -> bool:
        c = self.coords(x)
        if c is None:
            raise ValueError("element is not in the subgroup")
        return not any(c)

    def embedding(self) -> "AbHom":
        """The inclusion into the ambient; only valid when ``quot`` is empty."""
        if self.quot:
            raise ValueError("a proper subquotient has no inclusion into its ambient")
        return AbHom(self.group, self.ambient, self.gens_matrix(), check=False)


def _columns_of(M, n: int) -> list[list[int]]:
    if M is None:
        return []
    if isinstance(M, IntMatrix):
        if M.nrows != n:
            raise ValueError("matrix with %d rows in ambient of rank %d" % (M.nrows, n))
        return M.columns()
    cols = [list(c) for c in M]
    for c in cols:
        if len(c) != n:
            raise ValueError("vector of length %d in ambient of rank %d" % (len(c), n))
    return cols


def reduced_coords(G: FgAbGroup, x: Sequence[int]) -> list[int]:
    """Coordinates of x in the canonical presentation of G."""
    return _self_subquotient(G).coords(x)


_SELF_SQ: dict[int, tuple[FgAbGroup, Subquotient]] = {}


def _self_subquotient(G: FgAbGroup) -> Subquotient:
    hit = _SELF_SQ.get(id(G))
    if hit is not None and hit[0] is G:
        return hit[1]
    sq = Subquotient(G, IntMatrix.identity(G.ngens), check=False)
    if len(_SELF_SQ) > 4096:
        _SELF_SQ.clear()
    _SELF_SQ[id(G)] = (G, sq)
    return sq


def element_order(G: FgAbGroup, x: Sequence[int]):
    """Least n >= 1 with n*x a relation, or ``math.inf``.

    >>> element_order(FgAbGroup.cyclic(0), [1])
    inf
    """
    sq = _self_subquotient(G)
    c = sq.coords(x)
    order = 1
    for v, d in zip(c, sq._mod):
        if v == 0:
            continue
        if d == 0:
            return INFINITY
        order = order * (d // math.gcd(d, v)) // math.gcd(order, d // math.gcd(d, v))
    return order


class AbHom:
    """A homomorphism given on ambient generators: column j is the image of e_j."""

    __slots__ = ("source", "target", "matrix", "_cols")

    def __init__(self, source: FgAbGroup, target: FgAbGroup, matrix, check: bool = True):
        matrix = _as_matrix(matrix) if not isinstance(matrix, IntMatrix) else matrix
        if matrix.shape != (target.ngens, source.ngens):
            if not (matrix.nrows == target.ngens and matrix.ncols == source.ngens):
                raise ValueError("matrix shape %s for a map Z^%d -> Z^%d"
                                 % (matrix.shape, source.ngens, target.ngens))
        self.source = source
        self.target = target
        self.matrix = matrix
        self._cols = None
        if check:
            self.check()

    def check(self) -> None:
        """Raise IllDefinedHomomorphism with a witness if a relation is not respected."""
        E = _Echelon(self.target.ngens)
        for c in self.target.relation_vectors():
            E.insert(c)
        for j, r in enumerate(self.source.relation_vectors()):
            img = self.matrix.apply_sparse(r)
            if img and E.reduce(img) is None:
                raise IllDefinedHomomorphism(j, _dense(img, self.target.ngens))

    @classmethod
    def zero(cls, source: FgAbGroup, target: FgAbGroup) -> "AbHom":
        return cls(source, target, IntMatrix.zeros(target.ngens, source.ngens), check=False)

    @classmethod
    def identity(cls, G: FgAbGroup) -> "AbHom":
        return cls(G, G, IntMatrix.identity(G.ngens), check=False)

    def columns(self) -> list[list[int]]:
        if self._cols is None:
            self._cols = self.matrix.columns()
        return self._cols

    def __call__(self, x: Sequence[int]) -> list[int]:
        return self.matrix.apply(x)

    def compose(self, first: "AbHom") -> "AbHom":
        """``self ∘ first``."""
        return AbHom(first.source, self.target, self.matrix @ first.matrix, check=False)

    def __add__(self, other: "AbHom") -> "AbHom":
        return AbHom(self.source, self.target, self.matrix + other.matrix, check=False)

    def __neg__(self) -> "AbHom":
        return AbHom(self.source, self.target, -self.matrix, check=False)

    def scale(self, k: int) -> "AbHom":
        return AbHom(self.source, self.target, self.matrix.scale(k), check=False)

    def is_zero(self) -> bool:
        E = _Echelon(self.target.ngens)
        for c in self.target.relation_vectors():
            E.insert(c)
        return all(not c or E.reduce(c) is not None for c in self.matrix.sparse_columns())

    def equals(self, other: "AbHom") -> bool:
        return (self - other).is_zero()

    def __sub__(self, other: "AbHom") -> "AbHom":
        return self + (-other)

    def kernel_lattice(self) -> list[list[int]]:
        """Basis of ``{x in Z^n : f(x) is a relation}`` (contains the source relations)."""
        _, K = _relative_kernel(self.target.ngens, self.matrix.sparse_columns(),
                                self.target.relation_vectors())
        return K

    def kernel_subgroup(self) -> Subquotient:
        return Subquotient(self.source, self.kernel_lattice(), check=False)

    def image_subgroup(self) -> Subquotient:
        return Subquotient(self.target, self.columns(), check=False)

    def preimage(self, y: Sequence[int]) -> list[int] | None:
        """Some x with f(x) = y modulo target relations, or None."""
        E = _Echelon(self.target.ngens, self.source.ngens)
        for c in self.target.relation_vectors():
            E.insert(c)
        for j, c in enumerate(self.matrix.sparse_columns()):
            e = [0] * self.source.ngens
            e[j] = 1
            E.insert(c, e)
        return E.reduce(y)

    def is_injective(self) -> bool:
        return kernel(self).is_trivial()

    def is_surjective(self) -> bool:
        return cokernel(self).is_trivial()

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def __repr__(self) -> str:
        return "AbHom(%s -> %s, %r)" % (self.source, self.target, self.matrix.rows())


def kernel(f: AbHom) -> FgAbGroup:
    """The kernel of f as an abstract group.

    >>> kernel(AbHom(FgAbGroup.free(1), FgAbGroup.free(1), [[6]])).is_trivial()
    True
    """
    return f.kernel_subgroup().group


def kernel_embedding(f: AbHom) -> AbHom:
    return f.kernel_subgroup().embedding()


def image(f: AbHom) -> FgAbGroup:
    return f.image_subgroup().group


def cokernel(f: AbHom) -> FgAbGroup:
    T = f.target
    return FgAbGroup(T.ngens, sparse_relations=T.relation_vectors() + f.matrix.sparse_columns())


def subquotient(S: Subquotient) -> FgAbGroup:
    return S.group


def induced_map(f: AbHom, source: Subquotient, target: Subquotient) -> AbHom:
    """The map ``source.group -> target.group`` induced by f on representatives."""
    cols = []
    for g in source.gens:
        c = target.coords(f(g))
        if c is None:
            raise ValueError("f does not carry the source subquotient into the target")
        cols.append(c)
    return AbHom(source.group, target.group,
                 IntMatrix.from_columns(cols, target.group.ngens), check=False)


def is_exact(f: AbHom, g: AbHom) -> bool:
    """Exactness of ``A -f-> B -g-> C`` at B: im f = ker g as subgroups."""
    if not g.compose(f).is_zero():
        return False
    im = f.image_subgroup()
    return all(im.contains(k) for k in g.kernel_lattice())
