"""Line-oriented text format for command-line inputs.

A file is a sequence of sections::

    MATRIX 2 2
      1 2
      3 4
    END

Each section starts with its name and optional arguments, holds whitespace
separated tokens on the following lines, and closes with ``END``.  ``#`` starts
a comment.  :func:`serialize` writes the canonical form (two-space indented
bodies, single spaces, one blank line between sections), and the builders
below turn sections into library objects.  All errors carry the line and
column of the offending token.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .complexes import CochainComplex
from .cosimplicial import (
    CosimplicialAbGroup,
    CosimplicialFinGroup,
    FinGroup,
    cobar,
)
from .exact_linalg import AbHom, FgAbGroup, IntMatrix

SECTIONS = ("MATRIX", "COMPLEX", "COSIMPLICIAL", "GROUP_TABLE", "SITE", "COVER", "PRESHEAF", "THETA")


class InputError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message, self.line, self.col = message, line, col
        super().__init__("line %d, column %d: %s" % (line, col, message))


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    col: int

    def int(self) -> int:
        try:
            return int(self.text)
        except ValueError:
            raise InputError("expected an integer, found %r" % self.text, self.line, self.col) from None

    def fail(self, message: str) -> InputError:
        return InputError(message, self.line, self.col)


@dataclass
class Section:
    name: str
    args: list[Token]
    body: list[list[Token]] = field(default_factory=list)
    line: int = 0

    def fail(self, message: str) -> InputError:
        return InputError("%s section: %s" % (self.name, message), self.line, 1)

    def shape(self) -> tuple:
        """Comparable content, ignoring positions."""
        return (self.name, tuple(t.text for t in self.args), tuple(tuple(t.text for t in r) for r in self.body))


def _tokens(line: str, lineno: int) -> list[Token]:
    cut = line.find("#")
    if cut >= 0:
        line = line[:cut]
    out = []
    i = 0
    while i < len(line):
        if line[i].isspace():
            i += 1
            continue
        j = i
        while j < len(line) and not line[j].isspace():
            j += 1
        out.append(Token(line[i:j], lineno, i + 1))
        i = j
    return out


def parse(text: str) -> list[Section]:
    sections: list[Section] = []
    cur: Section | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _tokens(raw, lineno)
        if not toks:
            continue
        head = toks[0]
        if cur is None:
            if head.text not in SECTIONS:
                raise head.fail("expected a section name (one of %s), found %r" % (", ".join(SECTIONS), head.text))
            cur = Section(head.text, toks[1:], [], lineno)
        elif head.text == "END":
            if len(toks) > 1:
                raise toks[1].fail("unexpected token after END")
            sections.append(cur)
            cur = None
        elif head.text in SECTIONS:
            raise head.fail("section %s opened inside %s (missing END?)" % (head.text, cur.name))
        else:
            cur.body.append(toks)
    if cur is not None:
        raise InputError("section %s is not closed with END" % cur.name, cur.line, 1)
    return sections


def serialize(sections: Sequence[Section]) -> str:
    chunks = []
    for s in sections:
        lines = [" ".join([s.name] + [t.text for t in s.args])]
        lines += ["  " + " ".join(t.text for t in row) for row in s.body]
        lines.append("END")
        chunks.append("\n".join(lines) + "\n")
    return "\n".join(chunks)


def find(sections: Sequence[Section], name: str, required: bool = True) -> list[Section]:
    out = [s for s in sections if s.name == name]
    if required and not out:
        raise InputError("missing %s section" % name, 1, 1)
    return out


def one(sections: Sequence[Section], name: str, required: bool = True) -> Section | None:
    found = find(sections, name, required)
    if len(found) > 1:
        raise found[1].fail("only one %s section is allowed" % name)
    return found[0] if found else None


# ---------------------------------------------------------------------------
# Body readers


class _Cursor:
    """Walks the body lines of a section; matrices occupy the lines after their header."""

    def __init__(self, section: Section):
        self.section = section
        self.i = 0

    def done(self) -> bool:
        return self.i >= len(self.section.body)

    def next(self) -> list[Token]:
        row = self.section.body[self.i]
        self.i += 1
        return row

    def matrix(self, header: list[Token], nrows: int, ncols: int) -> IntMatrix:
        rows = []
        for _ in range(nrows):
            if self.done():
                raise header[0].fail("matrix needs %d rows, file ended after %d" % (nrows, len(rows)))
            row = self.next()
            if len(row) != ncols:
                raise row[0].fail("expected %d entries in this row, found %d" % (ncols, len(row)))
            rows.append([t.int() for t in row])
        return IntMatrix(rows, ncols)


def _keyed(row: list[Token], nargs: int | None = None, minargs: int = 0) -> list[Token]:
    args = row[1:]
    if nargs is not None and len(args) != nargs:
        raise row[0].fail("%s takes %d argument(s), found %d" % (row[0].text, nargs, len(args)))
    if len(args) < minargs:
        raise row[0].fail("%s needs at least %d argument(s)" % (row[0].text, minargs))
    return args


def _invariants(tokens: list[Token]) -> FgAbGroup:
    vals = []
    for t in tokens:
        v = t.int()
        if v < 0 or v == 1:
            raise t.fail("cyclic orders are 0 (for Z) or at least 2, found %d" % v)
        vals.append(v)
    return FgAbGroup.from_invariants(vals)


def _hom(src: FgAbGroup, tgt: FgAbGroup, M: IntMatrix, where: Token) -> AbHom:
    if M.shape != (tgt.ngens, src.ngens):
        raise where.fail("map must be %d x %d, found %d x %d" % (tgt.ngens, src.ngens, *M.shape))
    try:
        return AbHom(src, tgt, M)
    except ValueError as e:
        raise where.fail(str(e)) from None


def read_matrix(sec: Section) -> IntMatrix:
    if len(sec.args) != 2:
        raise sec.fail("header must be 'MATRIX rows cols'")
    m, n = sec.args[0].int(), sec.args[1].int()
    if m < 0 or n < 0:
        raise sec.args[0].fail("matrix dimensions must be nonnegative")
    cur = _Cursor(sec)
    if m == 0:
        M = IntMatrix.zeros(0, n)
    else:
        M = cur.matrix([Token("MATRIX", sec.line, 1)], m, n)
    if not cur.done():
        raise cur.next()[0].fail("extra rows after the matrix")
    return M


def read_complex(sec: Section) -> CochainComplex:
    """``LO n``, then ``GROUP invariants..`` per degree and ``MAP rows cols`` + rows between them."""
    cur = _Cursor(sec)
    lo = 0
    groups: list[FgAbGroup] = []
    maps: list[tuple[IntMatrix, Token]] = []
    while not cur.done():
        row = cur.next()
        key = row[0].text
        if key == "LO":
            lo = _keyed(row, 1)[0].int()
        elif key == "GROUP":
            groups.append(_invariants(_keyed(row)))
        elif key == "MAP":
            a = _keyed(row, 2)
            maps.append((cur.matrix(row, a[0].int(), a[1].int()), row[0]))
        else:
            raise row[0].fail("unknown COMPLEX entry %r" % key)
    if not groups:
        raise sec.fail("a complex needs at least one GROUP")
    if len(maps) != len(groups) - 1:
        raise sec.fail("%d groups need %d maps, found %d" % (len(groups), len(groups) - 1, len(maps)))
    diffs = [_hom(groups[k], groups[k + 1], M, tok) for k, (M, tok) in enumerate(maps)]
    try:
        return CochainComplex(lo, groups, diffs)
    except ValueError as e:
        raise sec.fail(str(e)) from None


def read_group_tables(sections: Sequence[Section]) -> dict[str, FinGroup]:
    out = {}
    for sec in find(sections, "GROUP_TABLE", required=False):
        if len(sec.args) != 1:
            raise sec.fail("header must be 'GROUP_TABLE name'")
        name = sec.args[0].text
        rows = [[t.int() for t in r] for r in sec.body]
        try:
            out[name] = FinGroup(rows)
        except ValueError as e:
            raise sec.fail(str(e)) from None
    return out


def _table(tables: dict, tok: Token) -> FinGroup:
    if tok.text.startswith("cyclic:"):
        from .cosimplicial import cyclic_group
        n = Token(tok.text[7:], tok.line, tok.col + 7).int()
        if n < 1:
            raise tok.fail("cyclic group order must be positive")
        return cyclic_group(n)
    if tok.text not in tables:
        raise tok.fail("no GROUP_TABLE named %r" % tok.text)
    return tables[tok.text]


@dataclass
class CosimplicialInput:
    """What a COSIMPLICIAL section describes: an abelian object, a finite group object, or a bar complex."""

    kind: str
    abelian: CosimplicialAbGroup | None = None
    finite: CosimplicialFinGroup | None = None
    chain: object | None = None


def read_cosimplicial(sections: Sequence[Section], truncation: int | None = None,
                      seed: int = 0) -> CosimplicialInput:
    """Kinds: ``constant``, ``cobar``, ``explicit`` (abelian); ``group-constant``,
    ``group-explicit`` (finite groups); ``bar-complex``, ``fixture``, ``random`` (chain complexes).
    """
    sec = one(sections, "COSIMPLICIAL")
    tables = read_group_tables(sections)
    cur = _Cursor(sec)
    fields: dict[str, list[Token]] = {}
    mats: list[tuple[list[Token], IntMatrix]] = []
    lists: list[list[Token]] = []
    while not cur.done():
        row = cur.next()
        key = row[0].text
        if key in ("KIND", "TRUNCATION", "GROUP", "ACTING", "MODULE_INVARIANTS", "NAME", "LEVELS"):
            if key in fields:
                raise row[0].fail("%s given twice" % key)
            fields[key] = row
        elif key in ("ACTION", "COFACE", "CODEGENERACY", "DIFF", "LEVEL", "MODULE"):
            if key in ("COFACE", "CODEGENERACY") and ":" in [t.text for t in row]:
                lists.append(row)
                continue
            if key in ("LEVEL", "MODULE"):
                lists.append(row)
                continue
            a = row[1:]
            if len(a) < 2:
                raise row[0].fail("%s needs its indices and 'rows cols'" % key)
            M = cur.matrix(row, a[-2].int(), a[-1].int())
            mats.append((row, M))
        else:
            raise row[0].fail("unknown COSIMPLICIAL entry %r" % key)
    if "KIND" not in fields:
        raise sec.fail("missing KIND")
    kind = _keyed(fields["KIND"], 1)[0].text
    N = truncation
    if N is None and "TRUNCATION" in fields:
        N = _keyed(fields["TRUNCATION"], 1)[0].int()
    out = CosimplicialInput(kind)

    def need(key):
        if key not in fields:
            raise sec.fail("KIND %s needs %s" % (kind, key))
        return fields[key]

    def need_N(default=None):
        if N is None:
            if default is not None:
                return default
            raise sec.fail("KIND %s needs TRUNCATION (or --truncation)" % kind)
        if N < 0:
            raise sec.fail("truncation must be nonnegative")
        return N

    if kind == "constant":
        out.abelian = CosimplicialAbGroup.constant(_invariants(_keyed(need("GROUP"))), need_N())
    elif kind == "cobar":
        G = _table(tables, _keyed(need("ACTING"), 1)[0])
        M = _invariants(_keyed(need("MODULE_INVARIANTS")))
        action = [AbHom.identity(M) for _ in G.elements()]
        for row, mat in mats:
            if row[0].text != "ACTION":
                raise row[0].fail("KIND cobar only takes ACTION matrices")
            g = row[1].int()
            if not 0 <= g < G.order:
                raise row[1].fail("group element %d out of range" % g)
            action[g] = _hom(M, M, mat, row[0])
        try:
            out.abelian = cobar(G, M, action, need_N())
        except ValueError as e:
            raise sec.fail(str(e)) from None
    elif kind == "explicit":
        levels = [_invariants(r[1:]) for r in lists if r[0].text == "LEVEL"]
        if not levels:
            raise sec.fail("KIND explicit needs LEVEL lines")
        n_top = len(levels) - 1
        cof = [[None] * (n + 2) for n in range(n_top)]
        cod = [[None] * n for n in range(n_top + 1)]
        for row, mat in mats:
            if row[0].text not in ("COFACE", "CODEGENERACY") or len(row) != 5:
                raise row[0].fail("expected 'COFACE n i rows cols' or 'CODEGENERACY n i rows cols'")
            n, i = row[1].int(), row[2].int()
            tbl, tgt = (cof, n + 1) if row[0].text == "COFACE" else (cod, n - 1)
            if not (0 <= n < len(tbl)) or not (0 <= i < len(tbl[n])):
                raise row[1].fail("no %s with indices (%d, %d) at truncation %d" % (row[0].text, n, i, n_top))
            tbl[n][i] = _hom(levels[n], levels[tgt], mat, row[0])
        _all_given(sec, cof, "COFACE")
        _all_given(sec, cod, "CODEGENERACY")
        try:
            out.abelian = CosimplicialAbGroup(levels, cof, cod)
        except ValueError as e:
            raise sec.fail(str(e)) from None
    elif kind == "group-constant":
        G = _table(tables, _keyed(need("ACTING"), 1)[0])
        out.finite = CosimplicialFinGroup.constant(G, need_N(2))
    elif kind == "group-explicit":
        names = _keyed(need("LEVELS"), minargs=3)
        levels = [_table(tables, t) for t in names]
        n_top = len(levels) - 1
        cof = [[None] * (n + 2) for n in range(n_top)]
        cod = [[None] * n for n in range(n_top + 1)]
        for row in lists:
            if row[0].text not in ("COFACE", "CODEGENERACY"):
                raise row[0].fail("KIND group-explicit takes COFACE/CODEGENERACY image lists")
            if len(row) < 4 or row[3].text != ":":
                raise row[0].fail("expected '%s n i : images..'" % row[0].text)
            n, i = row[1].int(), row[2].int()
            tbl = cof if row[0].text == "COFACE" else cod
            if not (0 <= n < len(tbl)) or not (0 <= i < len(tbl[n])):
                raise row[1].fail("no %s with indices (%d, %d) at truncation %d" % (row[0].text, n, i, n_top))
            imgs = [t.int() for t in row[4:]]
            if len(imgs) != levels[n].order:
                raise row[0].fail("need %d images, found %d" % (levels[n].order, len(imgs)))
            tbl[n][i] = tuple(imgs)
        _all_given(sec, cof, "COFACE")
        _all_given(sec, cod, "CODEGENERACY")
        try:
            out.finite = CosimplicialFinGroup(levels, cof, cod)
        except ValueError as e:
            raise sec.fail(str(e)) from None
    elif kind == "bar-complex":
        out.chain = _read_bar_complex(sec, fields, lists, mats, tables, need_N())
    elif kind == "fixture":
        from .ss_compare import d2_fixture, d3_fixture
        name = _keyed(need("NAME"), 1)[0]
        table = {"d2": d2_fixture, "d3": d3_fixture}
        if name.text not in table:
            raise name.fail("unknown fixture %r (d2 or d3)" % name.text)
        out.chain = table[name.text]()
    elif kind == "random":
        import random
        from .ss_compare import random_cosimplicial_chain_complex
        out.chain = random_cosimplicial_chain_complex(random.Random(seed))
    else:
        raise fields["KIND"][1].fail("unknown KIND %r" % kind)
    return out


def _all_given(sec: Section, table, what: str) -> None:
    for n, maps in enumerate(table):
        for i, m in enumerate(maps):
            if m is None:
                raise sec.fail("missing %s %d %d" % (what, n, i))


def _read_bar_complex(sec, fields, lists, mats, tables, N):
    from .ss_compare import GroupModule, from_module_complex

    if "ACTING" not in fields:
        raise sec.fail("KIND bar-complex needs ACTING")
    G = _table(tables, _keyed(fields["ACTING"], 1)[0])
    ranks = {}
    for row in lists:
        if row[0].text != "MODULE":
            raise row[0].fail("KIND bar-complex takes 'MODULE t rank' lines")
        t, r = _keyed(row, 2)
        ranks[t.int()] = r.int()
    T = max(ranks) if ranks else -1
    if sorted(ranks) != list(range(T + 1)):
        raise sec.fail("MODULE lines must cover degrees 0..T")
    actions = {t: [IntMatrix.identity(ranks[t])] * G.order for t in ranks}
    diffs: dict[int, IntMatrix] = {}
    for row, mat in mats:
        if row[0].text == "ACTION":
            t, g = row[1].int(), row[2].int()
            if t not in ranks or not 0 <= g < G.order:
                raise row[1].fail("ACTION indices out of range")
            if mat.shape != (ranks[t], ranks[t]):
                raise row[0].fail("action matrix must be %d x %d" % (ranks[t], ranks[t]))
            actions[t][g] = mat
        elif row[0].text == "DIFF":
            t = row[1].int()
            if not 1 <= t <= T:
                raise row[1].fail("DIFF degree must lie in 1..%d" % T)
            if mat.shape != (ranks[t - 1], ranks[t]):
                raise row[0].fail("DIFF %d must be %d x %d" % (t, ranks[t - 1], ranks[t]))
            diffs[t] = mat
        else:
            raise row[0].fail("KIND bar-complex takes ACTION and DIFF matrices")
    modules = [GroupModule(ranks[t], actions[t]) for t in range(T + 1)]
    ds = [diffs.get(t, IntMatrix.zeros(ranks[t - 1], ranks[t])) for t in range(1, T + 1)]
    for t in range(2, T + 1):
        if not (ds[t - 2] @ ds[t - 1]).is_zero():
            raise sec.fail("DIFF %d composed with DIFF %d is nonzero" % (t - 1, t))
    try:
        return from_module_complex(G, modules, ds, N)
    except ValueError as e:
        raise sec.fail(str(e)) from None


# ---------------------------------------------------------------------------
# Sites, covers, presheaves and gluing data


def read_site(sections: Sequence[Section]):
    from .cech_brauer import FiniteSite

    sec = one(sections, "SITE", required=False)
    if sec is None:
        return FiniteSite.point(), {"U": frozenset({0})}
    names = {}
    for row in sec.body:
        if row[0].text != "OPEN" or len(row) < 3 or row[2].text != ":":
            raise row[0].fail("expected 'OPEN name : points..'")
        if row[1].text in names:
            raise row[1].fail("open %r defined twice" % row[1].text)
        names[row[1].text] = frozenset(t.int() for t in row[3:])
    if not names:
        raise sec.fail("a site needs at least one OPEN")
    return FiniteSite(names.values()), names


def read_cover(sections: Sequence[Section], site, names):
    from .cech_brauer import OneHypercover, nerve_cover

    sec = one(sections, "COVER")
    tables = read_group_tables(sections)
    rows = sec.body
    if rows and rows[0][0].text == "NERVE":
        args = _keyed(rows[0], minargs=1)
        G = _table(tables, args[0])
        copies = 1
        for row in rows[1:]:
            if row[0].text != "COPIES":
                raise row[0].fail("a NERVE cover only takes COPIES")
            copies = _keyed(row, 1)[0].int()
            if copies < 1:
                raise row[1].fail("COPIES must be positive")
        return nerve_cover(G, copies, site)

    def open_of(tok):
        if tok.text not in names:
            raise tok.fail("unknown open %r" % tok.text)
        return names[tok.text]

    U: dict[int, frozenset] = {}
    V: dict = {}
    for row in rows:
        key = row[0].text
        if key == "U":
            i, o = _keyed(row, 2)
            U[i.int()] = open_of(o)
        elif key == "V":
            i, j, label, o = _keyed(row, 4)
            V.setdefault((i.int(), j.int()), {})[label.text] = open_of(o)
        else:
            raise row[0].fail("unknown COVER entry %r" % key)
    if sorted(U) != list(range(len(U))):
        raise sec.fail("U indices must be 0..%d" % (len(U) - 1))
    for row in rows:
        if row[0].text == "V":
            i, j = row[1].int(), row[2].int()
            if i not in U or j not in U:
                raise row[1].fail("no open U with index %d" % (i if i not in U else j))
            if not open_of(row[4]) <= U[i] & U[j]:
                raise row[4].fail("piece %s is not inside U_%d ∧ U_%d" % (row[4].text, i, j))
    try:
        return OneHypercover(site, [U[i] for i in range(len(U))], V)
    except ValueError as e:
        raise sec.fail(str(e)) from None


def read_presheaf(sections: Sequence[Section], site):
    from .cech_brauer import AbPresheaf

    sec = one(sections, "PRESHEAF")
    if len(sec.body) != 1 or sec.body[0][0].text != "CONSTANT":
        raise sec.fail("only 'CONSTANT invariants..' presheaves are supported")
    A = _invariants(sec.body[0][1:])
    return AbPresheaf.constant(site, A), A


@dataclass
class ThetaInput:
    lift: int
    carry: bool
    values: list[int] | None
    token: Token


def read_theta(sections: Sequence[Section]) -> ThetaInput | None:
    sec = one(sections, "THETA", required=False)
    if sec is None:
        return None
    lift, carry, values = 1, False, None
    for row in sec.body:
        key = row[0].text
        if key == "LIFT":
            lift = _keyed(row, 1)[0].int()
            if lift < 1:
                raise row[1].fail("LIFT must be positive")
        elif key == "CARRY":
            _keyed(row, 0)
            carry = True
        elif key == "VALUES":
            values = (values or []) + [t.int() for t in row[1:]]
        else:
            raise row[0].fail("unknown THETA entry %r" % key)
    if carry == (values is not None):
        raise sec.fail("give exactly one of CARRY or VALUES")
    return ThetaInput(lift, carry, values, Token("THETA", sec.line, 1))
