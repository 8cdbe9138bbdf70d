import pytest

from quasipolish.extractors import OpenFamily
from quasipolish.space import FiniteSpace
from quasipolish.spacefile import SpaceFileError, load_space, parse_space


def test_finite_file(spaces_dir):
    sf = load_space(spaces_dir / "sierpinski.space")
    assert sf.kind == "finite" and sf.name == "sierpinski"
    assert isinstance(sf.space, FiniteSpace)
    assert sf.space.opens() == frozenset({0b00, 0b10, 0b11})


def test_table_file(spaces_dir):
    sf = load_space(spaces_dir / "chain3.space")
    assert sf.space.opens() == frozenset({0b000, 0b100, 0b110, 0b111})


def test_generator_file_with_dense(spaces_dir):
    sf = load_space(spaces_dir / "s2_punctured.space")
    assert sf.space.tag == "S2"
    assert isinstance(sf.dense, OpenFamily)


@pytest.mark.parametrize("term,tag", [
    ("S0", "S0"), ("SD", "SD"), ("omega_lt 3", "omega_lt"),
    ("plus_generic S1", "plus_generic"), ("union omega_lt *", "union_omega_lt"),
    ("union S1 SD", "union"), ("plus_generic union SD SD", "plus_generic"),
])
def test_generator_terms(term, tag):
    assert parse_space(f"kind generator\ngen {term}\n").space.tag == tag


def test_comments_and_blank_lines():
    sf = parse_space("# head\n\nkind finite  # trailing\npoints 1\n")
    assert sf.space.point_count == 1


def test_listed_dense_opens():
    sf = parse_space("kind generator\ngen S1\ndense open: 1 2\ndense open: 0 2\n")
    assert sf.dense.size == 2


def test_malformed_file(spaces_dir):
    with pytest.raises(SpaceFileError, match="line 4: point 7 outside 0..2"):
        load_space(spaces_dir / "malformed.space")


@pytest.mark.parametrize("text,line", [
    ("", 1),
    ("kind foo\n", 1),
    ("kind finite\n", 1),
    ("kind finite\npoints x\n", 2),
    ("kind finite\npoints 2\nsubbasic 1: 0\n", 3),
    ("kind finite\npoints 2\nsubbasic 0: 0\nsubbasic 0: 1\n", 4),
    ("kind generator\ngen S9\n", 2),
    ("kind generator\ngen omega_lt 0\n", 2),
    ("kind generator\ngen S1 S1\n", 2),
    ("kind generator\ngen S1\ngen SD\n", 3),
    ("kind table\npoints 2\nsubbasics 1\n1\n", 4),
    ("kind table\npoints 1\nsubbasics 2\n1x\n", 4),
    ("kind generator\ngen S1\ndense everywhere\n", 3),
])
def test_errors_carry_line_numbers(text, line):
    with pytest.raises(SpaceFileError) as info:
        parse_space(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")
