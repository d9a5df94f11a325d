import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from picweyl.symbols import (
    CharSymbol,
    FrameSymbol,
    InvalidFrameSymbolError,
    NonCyclotomicFactorError,
    SymbolParseError,
    char_from_frame,
    char_symbol,
    charpoly,
    cyclotomic_poly,
    frame_from_char,
    parse_char_symbol,
    parse_frame_symbol,
    power_char,
    power_frame,
    totient,
)


def test_cyclotomic_basics():
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(2) == (1, 1)
    assert cyclotomic_poly(6) == (1, -1, 1)
    assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)
    # product over divisors reconstitutes t^m - 1
    for m in (4, 9, 18, 30):
        from picweyl.symbols import _poly_mul

        prod = (1,)
        for d in range(1, m + 1):
            if m % d == 0:
                prod = _poly_mul(prod, cyclotomic_poly(d))
        expected = tuple([-1] + [0] * (m - 1) + [1])
        assert prod == expected


def test_charpoly_exact():
    assert charpoly(np.eye(3, dtype=int)) == (-1, 3, -3, 1)
    assert charpoly([[0, 1], [1, 0]]) == (-1, 0, 1)
    assert charpoly([[-1]]) == (1, 1)


def test_char_symbol_examples():
    assert str(char_symbol(np.eye(7, dtype=int))) == "1^7"
    refl = np.array([[0, 1], [1, 0]])
    assert char_symbol(refl).as_dict() == {1: 1, 2: 1}
    with pytest.raises(NonCyclotomicFactorError):
        char_symbol(np.array([[2]]))


def test_frame_from_char_worked_example():
    c = parse_char_symbol("1.3^2.12^4")
    f = frame_from_char(c)
    assert f.as_dict() == {2: 1, 3: 1, 4: -1, 6: -1, 12: 1}
    assert f.degree == 7
    assert char_from_frame(f) == c


def test_frame_from_char_trivia():
    assert frame_from_char(CharSymbol.from_dict({1: 4})).as_dict() == {1: 4}
    assert frame_from_char(CharSymbol.from_dict({1: 1, 2: 1})).as_dict() == {2: 1}


def test_power_char_published_cases():
    assert str(power_char(parse_char_symbol("1.3^2.12^4"), 4)) == "1.3^6"
    assert str(power_char(parse_char_symbol("1.3^2.6^4"), 2)) == "1.3^6"
    assert str(power_char(parse_char_symbol("1.9^6"), 3)) == "1.3^6"


def test_power_frame_published_cases():
    assert power_frame(FrameSymbol.from_dict({12: 1}), 4).as_dict() == {3: 4}
    assert str(power_frame(parse_frame_symbol("1.2.5^-1.10"), 5)) == "1^-4.2^6"
    f = parse_frame_symbol("1^-4.2^6")
    assert power_frame(f, 1) == f


def test_degree_conserved_by_power_frame():
    f = parse_frame_symbol("2.3.4^-1.6^-1.12")
    for r in range(1, 30):
        assert power_frame(f, r).degree == f.degree


def test_parse_format_round_trip():
    for s in ("1^-4.2^6", "9", "4^2", "1^-1.2^2.5^-1.10", "1.3^2.12^4"):
        assert str(parse_frame_symbol(s)) == s or str(parse_char_symbol(s)) == s


def test_parse_accepts_explicit_one_and_reorders():
    assert parse_frame_symbol("9^1").as_dict() == {9: 1}
    assert str(parse_frame_symbol("2^6.1^-4")) == "1^-4.2^6"
    assert parse_char_symbol("1^1").as_dict() == {1: 1}


def test_parse_errors_with_offsets():
    cases = {
        "": 0,
        "3^^2": 2,
        "1.": 1,
        ".1": 0,
        "3^0": 2,
        "1 .2": 1,
        "3^2.3": 4,
        "0^2": 0,
    }
    for s, off in cases.items():
        with pytest.raises(SymbolParseError) as e:
            parse_frame_symbol(s)
        assert e.value.offset == off


def test_char_parse_requires_phi_multiples():
    with pytest.raises(SymbolParseError):
        parse_char_symbol("3^3")  # phi(3) = 2 does not divide 3
    with pytest.raises(SymbolParseError):
        parse_char_symbol("1^-2")  # characteristic exponents are positive


def test_invalid_frame_rejected():
    with pytest.raises(InvalidFrameSymbolError):
        FrameSymbol.from_dict({9: -1})


@settings(max_examples=200, deadline=None)
@given(st.dictionaries(st.sampled_from([1, 2, 3, 4, 5, 6, 8, 9, 10, 12, 18]), st.integers(1, 3), min_size=1, max_size=4))
def test_frame_char_bijection(mult):
    c = CharSymbol.from_dict(mult)
    f = frame_from_char(c)
    assert char_from_frame(f) == c
    # formatting round-trips through the parser
    assert parse_char_symbol(str(c)) == c
    assert parse_frame_symbol(str(f)) == f


@settings(max_examples=150, deadline=None)
@given(
    st.dictionaries(st.sampled_from([1, 2, 3, 4, 5, 6, 8, 9, 10, 12, 18]), st.integers(1, 3), min_size=1, max_size=4),
    st.integers(1, 40),
)
def test_power_compatibility_on_symbols(mult, r):
    # powering the characteristic symbol and converting to a Frame symbol
    # agrees with the Frame-side power rule
    c = CharSymbol.from_dict(mult)
    lhs = frame_from_char(power_char(c, r))
    rhs = power_frame(frame_from_char(c), r)
    assert lhs == rhs


def test_totient():
    assert [totient(m) for m in (1, 2, 3, 4, 6, 12, 18, 30)] == [1, 1, 2, 2, 2, 4, 6, 8]
