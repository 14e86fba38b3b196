from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from specseq import textio
from specseq.complexes import cohomology
from specseq.textio import InputError, Section, Token, parse, serialize

FIXTURES = Path(__file__).parent / "fixtures"

word = st.text(alphabet="abcxyzABC0123456789-:/_", min_size=1, max_size=6).filter(
    lambda w: w not in textio.SECTIONS and w != "END")


@st.composite
def sections(draw):
    out = []
    for _ in range(draw(st.integers(0, 3))):
        name = draw(st.sampled_from(textio.SECTIONS))
        args = [Token(w, 0, 0) for w in draw(st.lists(word, max_size=3))]
        body = [[Token(w, 0, 0) for w in row] for row in draw(st.lists(st.lists(word, min_size=1, max_size=4), max_size=4))]
        out.append(Section(name, args, body))
    return out


@given(sections())
def test_serialize_parse_round_trip(secs):
    text = serialize(secs)
    back = parse(text)
    assert [s.shape() for s in back] == [s.shape() for s in secs]
    assert serialize(back) == text


def test_comments_and_positions():
    secs = parse("# header\nMATRIX 1 2  # trailing\n   3   -4\nEND\n")
    (s,) = secs
    assert s.line == 2
    assert [(t.text, t.line, t.col) for t in s.body[0]] == [("3", 3, 4), ("-4", 3, 8)]


@pytest.mark.parametrize("text,line,col,fragment", [
    ("MATRX 1 1\n1\nEND\n", 1, 1, "expected a section name"),
    ("MATRIX 1 1\n1\n", 1, 1, "not closed"),
    ("MATRIX 1 1\n1\nCOMPLEX\nEND\n", 3, 1, "missing END"),
    ("MATRIX 1 1\n1\nEND x\n", 3, 5, "after END"),
])
def test_parse_errors(text, line, col, fragment):
    with pytest.raises(InputError) as err:
        parse(text)
    assert (err.value.line, err.value.col) == (line, col)
    assert fragment in err.value.message


@pytest.mark.parametrize("body,line,col,fragment", [
    ("MATRIX 2 2\n  1 2\n  3\nEND\n", 3, 3, "expected 2 entries"),
    ("MATRIX 1 2\n  1 x\nEND\n", 2, 5, "expected an integer"),
    ("MATRIX 1 1\n  1\n  2\nEND\n", 3, 3, "extra rows"),
    ("MATRIX 2 1\n  1\nEND\n", 1, 1, "needs 2 rows"),
])
def test_matrix_errors(body, line, col, fragment):
    with pytest.raises(InputError) as err:
        textio.read_matrix(textio.one(parse(body), "MATRIX"))
    assert (err.value.line, err.value.col) == (line, col)
    assert fragment in err.value.message


def test_complex_reader():
    C = textio.read_complex(textio.one(parse((FIXTURES / "complex_torsion.txt").read_text()), "COMPLEX"))
    assert [str(cohomology(C, n)) for n in C.degrees()] == ["Z", "Z/2", "0"]


@pytest.mark.parametrize("text,fragment", [
    ("COMPLEX\n  GROUP 1\nEND\n", "at least 2"),
    ("COMPLEX\n  GROUP 2\n  GROUP 3\n  MAP 1 1\n    1\nEND\n", "not a relation of the target"),
    ("COMPLEX\n  GROUP 0\n  GROUP 0\nEND\n", "need 1 maps"),
    ("COMPLEX\n  GROUP 0\n  GROUP 0\n  GROUP 0\n  MAP 1 1\n    1\n  MAP 1 1\n    1\nEND\n", "d∘d is nonzero"),
    ("COMPLEX\n  SHAPE 2\nEND\n", "unknown COMPLEX entry"),
])
def test_complex_errors(text, fragment):
    with pytest.raises(InputError) as err:
        textio.read_complex(textio.one(parse(text), "COMPLEX"))
    assert fragment in str(err.value)
    assert err.value.line >= 1 and err.value.col >= 1


def test_duplicate_section():
    secs = parse("MATRIX 0 0\nEND\nMATRIX 0 0\nEND\n")
    with pytest.raises(InputError) as err:
        textio.one(secs, "MATRIX")
    assert err.value.line == 3


def test_missing_section():
    with pytest.raises(InputError, match="missing COMPLEX"):
        textio.one([], "COMPLEX")


@pytest.mark.parametrize("name", ["cobar_z4", "cobar_z2_sign", "constant_z"])
def test_abelian_fixtures_read(name):
    inp = textio.read_cosimplicial(parse((FIXTURES / (name + ".txt")).read_text()))
    assert inp.abelian is not None
    inp.abelian.check()


def test_truncation_override():
    secs = parse((FIXTURES / "cobar_z4.txt").read_text())
    assert textio.read_cosimplicial(secs).abelian.N == 3
    assert textio.read_cosimplicial(secs, truncation=2).abelian.N == 2


def test_finite_fixture_reads():
    inp = textio.read_cosimplicial(parse((FIXTURES / "pi1_s3.txt").read_text()))
    assert inp.finite is not None and inp.finite.levels[0].order == 6


@pytest.mark.parametrize("name", ["ss_d2", "ss_d3", "ss_bar", "ss_random"])
def test_chain_fixtures_read(name):
    inp = textio.read_cosimplicial(parse((FIXTURES / (name + ".txt")).read_text()))
    assert inp.chain is not None and inp.chain.T >= 1


def test_unknown_kind_and_entries():
    with pytest.raises(InputError, match="KIND"):
        textio.read_cosimplicial(parse("COSIMPLICIAL\n  KIND nope\nEND\n"))
    with pytest.raises(InputError) as err:
        textio.read_cosimplicial(parse("COSIMPLICIAL\n  KIND constant\n  WHAT 1\nEND\n"))
    assert (err.value.line, err.value.col) == (3, 3)


def test_invalid_cyclic_order():
    text = "COSIMPLICIAL\n  KIND constant\n  GROUP 1\n  TRUNCATION 2\nEND\n"
    with pytest.raises(InputError) as err:
        textio.read_cosimplicial(parse(text))
    assert "at least 2" in err.value.message


def test_cover_error_points_at_token():
    secs = parse((FIXTURES / "bad_cover.txt").read_text())
    site, names = textio.read_site(secs)
    with pytest.raises(InputError) as err:
        textio.read_cover(secs, site, names)
    assert (err.value.line, err.value.col) == (18, 11)


def test_nerve_cover_reader():
    secs = parse((FIXTURES / "cech_nerve_z6_z4.txt").read_text())
    site, names = textio.read_site(secs)
    H = textio.read_cover(secs, site, names)
    F, A = textio.read_presheaf(secs, site)
    assert len(H.level(1)) == 6 and str(A) == "Z/4"


def test_theta_reader():
    secs = parse((FIXTURES / "brauer_z2.txt").read_text())
    th = textio.read_theta(secs)
    assert th.lift == 2 and th.carry
    assert textio.read_theta(parse("COVER\n  NERVE cyclic:2\nEND\n")) is None
