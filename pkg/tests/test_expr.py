import math

import pytest

from crweier import expr as ex
from crweier.errors import ExprSyntaxError, ParseError, UnknownIdentifier

P = (0.4, -0.7, 1.1)


def value(src, point=P):
    return ex.evaluate_source(src, point, 0).value


@pytest.mark.parametrize(
    "src, expected",
    [
        ("2 + 3*4", 14),
        ("(2 + 3)*4", 20),
        ("8/2/2", 2),
        ("2 - 3 - 4", -5),
        ("-2^2", -4),
        ("2^3^2", 512),
        ("2^-1", 0.5),
        ("2^(6/3)", 4),
        ("i*i", -1),
        ("re(3 + 4*i) + im(3 + 4*i)", 7),
        ("conj(1 + 2*i)", 1 - 2j),
        ("+pi", math.pi),
    ],
)
def test_precedence_and_constants(src, expected):
    assert value(src) == pytest.approx(expected)


def test_coordinates_and_functions():
    u1, u2, u3 = P
    got = value("u1*sin(u2) + exp(u3)/sqrt(2) - log(u3)")
    assert got == pytest.approx(u1 * math.sin(u2) + math.exp(u3) / math.sqrt(2) - math.log(u3))


def test_derivatives_flow_through_the_tree():
    f = ex.evaluate_source("cos(u1)^2*u2", P, 2)
    assert f.derivative((1, 0, 0)) == pytest.approx(-2 * math.sin(P[0]) * math.cos(P[0]) * P[1])
    assert f.derivative((1, 1, 0)) == pytest.approx(-math.sin(2 * P[0]))


@pytest.mark.parametrize("src", ["u1^u2", "u1^0.5", "2^(1/2)", "u1^i"])
def test_exponent_must_fold_to_integer(src):
    with pytest.raises(ExprSyntaxError):
        ex.parse(src)


def test_unknown_identifier_reports_byte_offset():
    with pytest.raises(UnknownIdentifier) as info:
        ex.parse("u1 + bar")
    assert info.value.offset == 5
    assert info.value.name == "bar"


def test_offsets_count_utf8_bytes():
    # a no-break space is one character but two bytes
    with pytest.raises(UnknownIdentifier) as info:
        ex.parse("\u00a0foo")
    assert info.value.offset == 2
    with pytest.raises(ExprSyntaxError) as info:
        ex.parse("1 + é")
    assert info.value.offset == 4


@pytest.mark.parametrize(
    "src, offset",
    [("(u1+", 4), ("1 2", 2), ("sin(u1", 6), ("(u1 + u2", 8), ("u1 *", 4), ("", 0), ("sin u1", 4)],
)
def test_syntax_errors(src, offset):
    with pytest.raises(ParseError) as info:
        ex.parse(src)
    assert info.value.offset == offset


def test_expected_set_names_alternatives():
    with pytest.raises(ExprSyntaxError) as info:
        ex.parse("u1 +")
    assert "number" in info.value.expected
    assert info.value.found == "end of input"


@pytest.mark.parametrize(
    "src",
    ["-(u1 + u2)*u3", "u1 - (u2 - u3)", "exp(-u1)^3", "(u1/u2)/u3", "u1^(-2)", "conj(i*u1) + pi"],
)
def test_printer_preserves_structure(src):
    tree = ex.parse(src)
    assert ex.parse(ex.to_source(tree)) == tree
