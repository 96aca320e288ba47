import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mothergraph.words import (
    BINARY,
    DigitWord,
    TreeShape,
    beta_weight,
    beta_weight_inverse,
    ell_position,
    inverse_linear_position,
    linear_position,
    project_binary,
)

W = DigitWord.parse


def test_parse_is_big_endian():
    x = W("0340020")
    assert x.digits == (0, 2, 0, 0, 4, 3, 0)
    assert str(x) == "0340020"
    assert x.weight == 3


@pytest.mark.parametrize("t, expected", [(-1, -1), (0, 1), (1, 4), (2, 8), (3, 9), (4, 11), (5, math.inf)])
def test_ell_positions_of_long_word(t, expected):
    assert ell_position(W("201300010020"), t) == expected


def test_ell_position_edge_cases():
    assert ell_position(W("0000"), 0) == math.inf
    assert ell_position(W("0340020"), 0) == 1
    assert ell_position(W("0340020"), 1) == 4
    with pytest.raises(ValueError):
        ell_position(W("1"), -2)


@given(st.lists(st.integers(0, 3), min_size=1, max_size=20))
def test_ell_position_increasing(digits):
    x = DigitWord(tuple(digits))
    values = [ell_position(x, t) for t in range(-1, len(digits) + 1)]
    assert values[0] == -1
    finite = [v for v in values if v != math.inf]
    assert finite == sorted(set(finite))
    assert values[len(finite):] == [math.inf] * (len(values) - len(finite))


def test_project_binary():
    assert str(project_binary(W("0340020"))) == "0110010"
    assert str(project_binary(W("0000"))) == "0000"
    assert str(project_binary(W("1011"))) == "1011"


@pytest.mark.parametrize("word, pos", [("0110010", 35), ("0000000", 0), ("100", 7), ("011", 2), ("111", 5)])
def test_linear_position(word, pos):
    assert linear_position(W(word)) == pos
    assert inverse_linear_position(pos, len(word)) == W(word)


def test_linear_position_example_digits():
    assert format(linear_position(W("0110010")), "07b") == "0100011"


def test_inverse_rejects_out_of_range():
    with pytest.raises(ValueError):
        inverse_linear_position(8, 3)
    with pytest.raises(ValueError):
        linear_position(W("021"))


@pytest.mark.parametrize("n", range(1, 13))
def test_linear_position_bijection_exhaustive(n):
    seen = set()
    for p in range(1 << n):
        x = inverse_linear_position(p, n)
        assert linear_position(x) == p
        seen.add(x)
    assert len(seen) == 1 << n


@given(st.integers(13, 16).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, (1 << n) - 1))))
def test_linear_position_bijection_sampled(case):
    n, p = case
    assert linear_position(inverse_linear_position(p, n)) == p


def test_linear_position_definition():
    # cumulative parity read from the left, digit by digit
    for mask in range(1 << 9):
        x = DigitWord.from_mask(mask, 9)
        bits = [sum(x.digits[i:]) % 2 for i in range(9)]
        assert linear_position(x) == sum(b << i for i, b in enumerate(bits))


def test_beta_weight():
    assert beta_weight(W("000"), TreeShape.constant(5)) == 1
    assert beta_weight(W("011"), BINARY) == 1
    assert beta_weight(W("011"), TreeShape.constant(3)) == Fraction(1, 4)
    assert beta_weight(W("101"), TreeShape((3, 2, 4))) == Fraction(1, 6)


@given(st.lists(st.integers(0, 1), min_size=1, max_size=12), st.lists(st.integers(2, 5), min_size=1, max_size=4))
def test_beta_weight_inverse(bits, pattern):
    a = DigitWord(tuple(bits))
    shape = TreeShape(tuple(pattern))
    assert beta_weight(a, shape) * beta_weight_inverse(a, shape) == 1


def test_shapes():
    s = TreeShape.parse("3,2,4")
    assert s.sizes(7) == (3, 2, 4, 3, 2, 4, 3)
    assert s.bound == 4
    p = TreeShape.parse("3,2,4", mode="pad")
    assert p.sizes(5) == (3, 2, 4, 4, 4)
    assert TreeShape.constant(2).is_binary
    with pytest.raises(ValueError):
        TreeShape((1, 2))
