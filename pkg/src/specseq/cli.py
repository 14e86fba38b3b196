"""Command-line front end.

Exit codes: 0 on success, 1 when a computation witnesses a failed check, 2 on
input errors (with line and column) or parameters outside a valid window.
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import textio
from .exact_linalg import IntMatrix, smith_normal_form

OK, WITNESSED, INPUT = 0, 1, 2


class WindowError(ValueError):
    """A parameter outside the range the input can answer for."""


def _matrix_lines(M: IntMatrix, indent: str = "  ") -> list[str]:
    if M.nrows == 0 or M.ncols == 0:
        return [indent + "(%d x %d)" % M.shape]
    width = max(len(str(x)) for x in M.entries)
    return [indent + " ".join(str(x).rjust(width) for x in row) for row in M.rows()]


def _verdict(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


# ---------------------------------------------------------------------------
# Commands: each returns (exit code, output lines)


def cmd_snf(sections, args) -> tuple[int, list[str]]:
    M = textio.read_matrix(textio.one(sections, "MATRIX"))
    D, L, R = smith_normal_form(M)
    diag = [D[i, i] for i in range(min(D.shape))]
    ok = (L @ M @ R == D) and L.is_unimodular() and R.is_unimodular()
    nz = [d for d in diag if d]
    ok = ok and all(b % a == 0 for a, b in zip(nz, nz[1:]))
    out = ["shape %d x %d" % M.shape, "diagonal " + (" ".join(map(str, diag)) or "(empty)"),
           "D ="] + _matrix_lines(D) + ["L ="] + _matrix_lines(L) + ["R ="] + _matrix_lines(R)
    out.append("check D = L M R, unimodular, divisibility: " + _verdict(ok))
    return (OK if ok else WITNESSED), out


def cmd_cohomology(sections, args) -> tuple[int, list[str]]:
    C = textio.read_complex(textio.one(sections, "COMPLEX"))
    degrees = list(C.degrees())
    if args.degree is not None:
        degrees = [args.degree]
    out = []
    for n in degrees:
        from .complexes import cohomology
        out.append("H^%d = %s" % (n, cohomology(C, n)))
    return OK, out


def cmd_cohomotopy(sections, args) -> tuple[int, list[str]]:
    from .cosimplicial import check_pi_quasi_iso, cohomotopy

    inp = textio.read_cosimplicial(sections, args.truncation, args.seed)
    A = inp.abelian
    if A is None:
        raise WindowError("cohomotopy needs an abelian cosimplicial object (KIND constant, cobar or explicit)")
    top = A.N - 1
    if args.degree is not None:
        if args.degree < 0:
            raise WindowError("degree must be nonnegative")
        if args.degree > top:
            raise WindowError("degree %d needs truncation at least %d (input has %d)"
                              % (args.degree, args.degree + 1, A.N))
        degrees = [args.degree]
    else:
        degrees = list(range(top + 1))
    out = ["truncation %d" % A.N]
    out += ["pi^%d = %s" % (s, cohomotopy(A, s)) for s in degrees]
    code = OK
    if args.nerve_bound is not None:
        M = args.nerve_bound
        if M < 2 or M > A.N:
            raise WindowError("nerve bound must lie in 2..%d for truncation %d" % (A.N, A.N))
        for v in check_pi_quasi_iso(A, M):
            out.append("unit H^%d: %s -> %s %s" % (v.degree, _inv(v.source), _inv(v.target),
                                                  "iso" if v.iso else "NOT iso"))
            if not v.iso:
                code = WITNESSED
    return code, out


def _inv(inv) -> str:
    from .exact_linalg import format_invariants
    return format_invariants(inv)


def cmd_pi1(sections, args) -> tuple[int, list[str]]:
    from .cosimplicial import abelian_as_fin, cocycles_z1, pi1_pointed_set

    inp = textio.read_cosimplicial(sections, args.truncation, args.seed)
    G = inp.finite
    if G is None:
        if inp.abelian is None:
            raise WindowError("pi1 needs a cosimplicial group")
        if inp.abelian.N < 2:
            raise WindowError("pi1 needs truncation at least 2")
        G = abelian_as_fin(inp.abelian)
    Z = cocycles_z1(G)
    orbits = pi1_pointed_set(G)
    out = ["|G^0| = %d, |G^1| = %d, |Z^1| = %d" % (G.levels[0].order, G.levels[1].order, len(Z)),
           "orbits %d" % len(orbits)]
    for k, o in enumerate(orbits):
        out.append("%s %s" % ("* " if k == 0 else "  ", " ".join(map(str, o))))
    return OK, out


def cmd_ss_compare(sections, args) -> tuple[int, list[str]]:
    from .ss_compare import compare_from_E2, e1_pages_differ

    inp = textio.read_cosimplicial(sections, args.truncation, args.seed)
    X = inp.chain
    if X is None:
        raise WindowError("ss-compare needs KIND bar-complex, fixture or random")
    rmax = args.page_max if args.page_max is not None else 5
    if rmax < 2:
        raise WindowError("page bound must be at least 2")
    rep = compare_from_E2(X, rmax)
    out = ["rows %d, truncation %d, pages 2..%d" % (X.T + 1, X.S, rmax)]
    out += rep.to_text().splitlines()
    out.append("E1 pages differ: %s" % ("yes" if e1_pages_differ(X) else "no"))
    fails = rep.failures()
    out.append("summary: %d checks, %d failures" % (len(rep.verdicts), len(fails)))
    return (OK if not fails else WITNESSED), out


def _cech_inputs(sections):
    site, names = textio.read_site(sections)
    H = textio.read_cover(sections, site, names)
    F, A = textio.read_presheaf(sections, site)
    return site, H, F, A


def cmd_cech(sections, args) -> tuple[int, list[str]]:
    from .cech_brauer import cech_cohomology

    _, H, F, A = _cech_inputs(sections)
    degrees = [0, 1, 2]
    if args.degree is not None:
        if not 0 <= args.degree <= 2:
            raise WindowError("Čech degree must lie in 0..2 (pieces are built up to level 3)")
        degrees = [args.degree]
    out = ["pieces per level: " + " ".join(str(len(H.level(k))) for k in range(4)),
           "coefficients: %s" % A]
    out += ["H^%d = %s" % (s, cech_cohomology(H, F, s)) for s in degrees]
    return OK, out


def cmd_brauer(sections, args) -> tuple[int, list[str]]:
    from . import cech_brauer as cb

    site, H, F, A = _cech_inputs(sections)
    theta = textio.read_theta(sections)
    h2 = cb.cech_cohomology(H, F, 2)
    out = ["pieces per level: " + " ".join(str(len(H.level(k))) for k in range(4)),
           "coefficients: %s" % A, "H^2 = %s" % h2]
    if theta is None:
        alphas = [("generator %d" % k, a) for k, a in enumerate(cb.h2_generators(H, F))]
    else:
        inv = A.invariants()
        if theta.lift == 1:
            Fl, iota = F, None
        else:
            if len(inv) != 1 or inv[0] == 0:
                raise WindowError("LIFT needs cyclic finite coefficients")
            _, Fl, iota = cb.cyclic_lift(site, inv[0], theta.lift)
        if theta.carry:
            if len(H.V[(0, 0)]) < 2 or not all(isinstance(a, int) for a in H.V[(0, 0)]):
                raise textio.InputError("CARRY needs a cyclic nerve cover", theta.token.line, 1)
            values = cb.carry_theta(len(H.V[(0, 0)]), H, Fl)
        else:
            values = theta.values
        need = cb.cech_complex(H, Fl).group(1).ngens
        if len(values) != need:
            raise textio.InputError("THETA needs %d values, found %d" % (need, len(values)),
                                    theta.token.line, 1)
        try:
            alpha = cb.cocycle_from_gluing(H, Fl, values, F if iota else None, iota)
        except ValueError as e:
            raise textio.InputError(str(e), theta.token.line, 1) from None
        alphas = [("from gluing", alpha)]
    code = OK
    for label, alpha in alphas:
        T = cb.twisted_tower(H, F, alpha)
        cls = alpha.cls()
        per = cb.period(alpha)
        out.append("alpha (%s) = [%s]" % (label, " ".join(map(str, cls))))
        out.append("  period = %d" % per)
        ks = sorted({0, 1, 2} | ({per} if per else set()))
        for k in ks:
            d = cb.d2_on_rank(T, k)
            want = cb.class_multiple(alpha, k)
            ok = d == want
            out.append("  d2(%d) = [%s] %s" % (k, " ".join(map(str, d)), _verdict(ok)))
            if not ok:
                code = WITNESSED
        v = cb.check_divisibility(T)
        out.append("  eti = %d" % v.eti)
        out.append("  period | eti: %s" % _verdict(v.ok))
        if not v.ok:
            code = WITNESSED
    return code, out


COMMANDS = {
    "snf": cmd_snf,
    "cohomology": cmd_cohomology,
    "cohomotopy": cmd_cohomotopy,
    "pi1": cmd_pi1,
    "ss-compare": cmd_ss_compare,
    "cech": cmd_cech,
    "brauer": cmd_brauer,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="specseq", description="Spectral-sequence computations over Z.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--input", required=True, help="input file in the sectioned text format")
    p.add_argument("--degree", type=int, help="cohomological degree")
    p.add_argument("--page-max", type=int, help="last page compared (default 5)")
    p.add_argument("--truncation", type=int, help="truncation level for generated cosimplicial inputs")
    p.add_argument("--nerve-bound", type=int, help="nerve bound for the cosimplicial replacement check")
    p.add_argument("--seed", type=int, default=0, help="seed for random inputs (default 0)")
    p.add_argument("--output", help="write the report here instead of stdout")
    return p


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        print("input error: %s" % e, file=stderr)
        return INPUT
    try:
        sections = textio.parse(text)
        code, lines = COMMANDS[args.command](sections, args)
    except textio.InputError as e:
        print("input error: %s" % e, file=stderr)
        return INPUT
    except WindowError as e:
        print("window error: %s" % e, file=stderr)
        return INPUT
    report = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(report)
    else:
        stdout.write(report)
    return code


def main() -> None:
    sys.exit(run())
