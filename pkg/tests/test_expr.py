import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spbw import load_fixture
from spbw.errors import DivisionByZero, DomainViolation, ExprSyntaxError, UnknownName
from spbw.expr import render_canonical


@pytest.fixture(scope="module")
def jordan():
    return load_fixture("jordan")


def test_spec_parse_examples(jordan):
    P = jordan.parse
    assert str(P("y*x")) == "x*y+x^2"
    assert P("x^0") == jordan.one
    f = P("(1/2)*x*y - y")
    assert len(f.terms) == 2
    assert str(f) == "1/2*x*y-y"


def test_render_examples(jordan):
    P = jordan.parse
    assert str(P("x^2*y + 2*x^3")) == "x^2*y+2*x^3"
    assert str(jordan.zero) == "0"
    assert render_canonical(P("x")) == "x"


@pytest.mark.parametrize("text", ["x*", "(x+y", "x^", "x y", "x**2", "3 x", "x $ y", ""])
def test_syntax_errors(jordan, text):
    with pytest.raises(ExprSyntaxError):
        jordan.parse(text)


def test_syntax_error_position(jordan):
    with pytest.raises(ExprSyntaxError) as e:
        jordan.parse("x + * y")
    assert e.value.position == 4


def test_unknown_name(jordan):
    with pytest.raises(UnknownName) as e:
        jordan.parse("x*w")
    assert e.value.name == "w"
    assert e.value.position == 2


def test_domain_violations():
    A = load_fixture("diffusion")
    with pytest.raises(DomainViolation):
        A.parse("x1^-1*D1")
    with pytest.raises(DomainViolation):
        A.parse("D1^-1")
    with pytest.raises(DomainViolation):
        A.parse("D1/D2")
    with pytest.raises(DivisionByZero):
        A.parse("D1/(x1-x1)")


def test_laurent_and_sigma_parsing():
    A = load_fixture("uqsl2")
    P = A.parse
    assert P("k*k^-1") == A.one
    # E*k = sigma_E(k)*E = q^-2 k E
    assert P("E*k") == P("q^-2*k*E")
    assert P("F*k^-1") == P("q^-2*k^-1*F")


def test_parameters_commute():
    A = load_fixture("so3q")
    assert A.parse("I1*h") == A.parse("h*I1")


def _poly_strategy(A):
    names = list(A.generators)
    atoms = st.sampled_from(names + ["1", "2", "1/3"])
    word = st.lists(atoms, min_size=1, max_size=4).map("*".join)
    return st.lists(st.tuples(st.sampled_from(["+", "-"]), word), min_size=1, max_size=4).map(
        lambda ts: "".join(s + w for s, w in ts).removeprefix("+"))


@pytest.mark.parametrize("name", ["jordan", "dispin", "so3q", "aw3", "uqsl2", "diffusion", "sklyanin0"])
def test_round_trip(name):
    A = load_fixture(name)

    @settings(max_examples=40, deadline=None)
    @given(_poly_strategy(A))
    def run(text):
        f = A.parse(text)
        assert A.parse(str(f)) == f
        assert str(A.parse(str(f))) == str(f)

    run()
