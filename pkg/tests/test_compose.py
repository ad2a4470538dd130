import random

import pytest

from oracles import random_exponents
from spbw import (Composition, check_admissible, check_commutation, check_nonequality_compatible,
                  check_order_compatible, load_fixture, substitute)
from spbw.compose import Admissible, CounterWitness, Holds, RelationViolation
from spbw.errors import CoefficientRingNotScalar, ConstantInF


def _jordan_theta(A):
    return [A.parse("2*x"), A.parse("2*y - x + 3")]


def _random_poly(A, rng, terms=3, max_deg=2):
    f = A.zero
    for _ in range(terms):
        f = f + A.monomial(random_exponents(rng, A.n, max_deg)).scale(A.field(rng.randint(-4, 4)))
    return f


ADMISSIBLE = {
    "jordan": lambda A: _jordan_theta(A),
    "tdim": lambda A: [A.parse("3*x"), A.parse("y - 2"), A.parse("-z")],
    "dispin": lambda A: [A.parse("2*x"), A.parse("y"), A.parse("1/2*z")],
    "so3q": lambda A: [A.parse("-I1"), A.parse("-I2"), A.parse("I3")],
    "sklyanin0": lambda A: [A.parse(f"{c}*{v}*x*y*z") for c, v in ((2, "x"), (3, "y"), (5, "z"))],
}


@pytest.mark.parametrize("name", sorted(ADMISSIBLE))
def test_admissible_and_multiplicative(name):
    A = load_fixture(name)
    theta = ADMISSIBLE[name](A)
    assert isinstance(check_admissible(A, theta), Admissible)
    comp = Composition(A, theta)
    rng = random.Random(name)
    for _ in range(10):
        f, g = _random_poly(A, rng), _random_poly(A, rng)
        assert substitute(A, f * g, comp) == substitute(A, f, comp) * substitute(A, g, comp)


def test_substitute_is_linear_and_sends_generators():
    A = load_fixture("jordan")
    theta = _jordan_theta(A)
    for g, t in zip(A.gens(), theta):
        assert substitute(A, g, theta) == t
    f, g = A.parse("x*y + 1"), A.parse("y^2 - x")
    assert substitute(A, f + g.scale(A.field(3)), theta) == \
        substitute(A, f, theta) + substitute(A, g, theta).scale(A.field(3))
    assert substitute(A, A.one, theta) == A.one


def test_sklyanin_squares_not_admissible():
    A = load_fixture("sklyanin0")
    theta = [A.parse(v + "^2") for v in "xyz"]
    res = check_admissible(A, theta)
    assert isinstance(res, RelationViolation)
    assert res.difference


def test_swapped_jordan_not_admissible():
    A = load_fixture("jordan")
    assert isinstance(check_admissible(A, [A.parse("y"), A.parse("x")]), RelationViolation)


@pytest.mark.parametrize("name", ["diffusion", "uqsl2"])
def test_coefficient_ring_not_scalar(name):
    A = load_fixture(name)
    with pytest.raises(CoefficientRingNotScalar):
        Composition(A, A.gens())


def test_constant_theta_rejected():
    A = load_fixture("jordan")
    with pytest.raises(ConstantInF):
        Composition(A, [A.parse("x"), A.parse("3")])
    with pytest.raises(ValueError):
        Composition(A, [A.parse("x")])


def test_hat_exponents():
    A = load_fixture("sklyanin0")
    w = A.parse("x*y*z")
    comp = Composition(A, [A.gen("x") * w, A.gen("y") * w * w, A.gen("z")])
    assert comp.hat((1, 0, 0)) == (2, 1, 1)
    assert comp.hat((1, 1, 1)) == (4, 4, 4)
    assert comp.max_degree() == 7


def test_order_checks():
    A = load_fixture("tdim")
    theta = ADMISSIBLE["tdim"](A)
    assert check_order_compatible(A, theta, 4) == Holds(4)
    assert check_nonequality_compatible(A, theta, 4) == Holds(4)
    swapped = A.gens()[::-1]
    assert isinstance(check_order_compatible(A, swapped, 2), CounterWitness)
    squares = [g ** 2 for g in A.gens()]
    assert check_order_compatible(A, squares, 3) == Holds(3)


def test_nonequality_witness():
    A = load_fixture("sklyanin0")
    # hats only: x -> xy, y -> y, z -> x sends z*y and x to the same exponent
    comp = [A.gen("x") * A.gen("y"), A.gen("y"), A.gen("x")]
    res = check_nonequality_compatible(A, comp, 2)
    assert isinstance(res, CounterWitness)
    assert Composition(A, comp).hat(res.xi) == Composition(A, comp).hat(res.xj)


def test_commutation_forward_passes():
    A = load_fixture("jordan")
    F = [A.parse("x^2"), A.parse("x*y")]
    rep = check_commutation(A, F, _jordan_theta(A), 3)
    assert isinstance(rep.admissible, Admissible)
    assert rep.forward == "passed"
    assert rep.consistent
    assert rep.scaled_D == 3


def test_commutation_not_applicable_when_f_fails():
    A = load_fixture("jordan")
    F = [A.parse("x^2"), A.parse("y"), A.parse("x*y+y")]
    rep = check_commutation(A, F, _jordan_theta(A), 4)
    assert rep.forward == "not-applicable"
    assert rep.report_F.counterexample


def test_converse_probe_recorded():
    A = load_fixture("sklyanin0")
    w = A.parse("x*y*z")
    theta = [A.gen("x") * w, A.gen("y") * w * w, A.gen("z")]
    assert isinstance(check_admissible(A, theta), Admissible)
    rep = check_commutation(A, [A.gen("x")], theta, 2)
    assert isinstance(rep.order_compatible, CounterWitness)
    assert rep.converse is not None
    assert "H" in rep.converse and "H_theta" in rep.converse
