import random
from fractions import Fraction

import pytest

from tropcrit.errors import NotZeroDimensional, ResourceBudgetExceeded
from tropcrit.groebner import (
    Ideal,
    InitialIdealEngine,
    eliminate,
    groebner_basis,
    homogeneity_space,
    ideal_dimension,
    ideal_equal,
    initial_ideal,
    minimal_polynomial,
    multiplication_matrix,
    normal_form,
    quotient_basis,
    saturate,
    solve_degree_one,
    solve_zero_dim_numeric,
    zero_dim_degree,
)
from tropcrit.rings import Polynomial, TermOrder, poly_parse

COIN = ("t0", "t1", "t2")


def coin_ideal():
    return Ideal(
        [
            poly_parse("t0*t2-(t0+t1)*t1", COIN),
            poly_parse("t0+t1+t2-1", COIN),
        ]
    )


def test_containment_collapse():
    vars = ("x",)
    order = TermOrder(1, blocks=((0,),))
    G = groebner_basis([poly_parse("x^2-1", vars), poly_parse("x-1", vars)], order)
    assert list(G.elements) == [poly_parse("x-1", vars)]


def test_coin_basis_membership_and_s_pairs():
    I = coin_ideal()
    G = groebner_basis(I)
    assert len(G.elements) == 2
    for g in I.gens:
        assert G.contains(g)
    # S-polynomial of the two basis elements reduces to zero
    a, b = G.elements
    assert G.contains(a * b)


def test_unit_ideal():
    G = groebner_basis([poly_parse("1", COIN)])
    assert G.is_unit
    assert list(G.elements) == [poly_parse("1", COIN)]


def test_normal_form_member_is_zero():
    I = coin_ideal()
    G = groebner_basis(I)
    f = I.gens[0] * poly_parse("t1+5", COIN) - I.gens[1] * poly_parse("t2^2", COIN)
    assert normal_form(f, G).is_zero


def test_normal_form_one_mod_proper_ideal():
    G = groebner_basis(coin_ideal())
    one = poly_parse("1", COIN)
    assert normal_form(one, G) == one


def test_normal_form_difference_in_ideal():
    G = groebner_basis(coin_ideal())
    f = poly_parse("t0*t2", COIN)
    r = normal_form(f, G)
    assert normal_form(f - r, G).is_zero


def test_normal_form_random_member_absorption():
    rng = random.Random(13)
    I = coin_ideal()
    G = groebner_basis(I)
    vars = COIN
    for _ in range(10):
        f = I.gens[rng.randrange(2)]
        g = Polynomial(
            {
                tuple(rng.randint(0, 2) for _ in vars): Fraction(rng.randint(-4, 4))
                for _ in range(3)
            },
            vars,
        )
        h = Polynomial(
            {
                tuple(rng.randint(0, 2) for _ in vars): Fraction(rng.randint(-4, 4))
                for _ in range(3)
            },
            vars,
        )
        assert normal_form(f * g + h, G) == normal_form(h, G)


# -- initial ideals ------------------------------------------------------------


def test_initial_ideal_coin_ray():
    I = coin_ideal()
    J = initial_ideal(I, (2, 1, 0))
    G = groebner_basis(J)
    assert G.contains(poly_parse("t0*t2-t1^2", COIN))
    assert G.contains(poly_parse("t2-1", COIN))
    # oracle cross-check: no generator is a monomial
    assert not any(g.is_term() for g in J.gens)


def test_initial_ideal_zero_weight_is_identity():
    I = coin_ideal()
    assert ideal_equal(initial_ideal(I, (0, 0, 0)), I)


def test_initial_ideal_constant_initial_form():
    I = Ideal([poly_parse("t1-1", ("t1",))])
    J = initial_ideal(I, (1,))
    assert groebner_basis(J).is_unit


def test_initial_ideal_positive_rescaling_invariance():
    I = coin_ideal()
    eng = InitialIdealEngine(I)
    for w in [(2, 1, 0), (0, 1, 1), (-2, -2, -1), (1, -1, 2)]:
        J1 = eng.initial(w)
        J2 = eng.initial(tuple(3 * x for x in w))
        assert ideal_equal(J1, J2)


def test_initial_ideal_of_nonmember_contains_monomial():
    I = coin_ideal()
    J = initial_ideal(I, (1, 0, 0))
    S = saturate(J, poly_parse("t0*t1*t2", COIN))
    assert groebner_basis(S).is_unit if not S.is_zero else False


# -- saturation ------------------------------------------------------------------


def test_saturate_monomial():
    vars = ("x", "y")
    I = Ideal([poly_parse("x*y", vars)])
    S = saturate(I, poly_parse("x", vars))
    assert ideal_equal(S, Ideal([poly_parse("y", vars)]))


def test_saturate_unit():
    vars = ("x", "y")
    I = Ideal([poly_parse("1", vars)])
    S = saturate(I, poly_parse("x+y", vars))
    assert groebner_basis(S).is_unit


def test_saturate_coin_initial_ideal_stays_proper():
    I = coin_ideal()
    J = initial_ideal(I, (2, 1, 0))
    S = saturate(J, poly_parse("t0*t1*t2", COIN))
    assert not groebner_basis(S).is_unit


def test_saturate_idempotent():
    vars = ("x", "y")
    I = Ideal([poly_parse("x^2*y-x", vars), poly_parse("x*y^2", vars)])
    f = poly_parse("x*y", vars)
    S1 = saturate(I, f)
    S2 = saturate(S1, f)
    assert ideal_equal(S1, S2)


# -- elimination -------------------------------------------------------------------


def test_eliminate_parabola():
    vars = ("t", "x", "y")
    I = Ideal([poly_parse("x-t", vars), poly_parse("y-t^2", vars)])
    J = eliminate(I, ["x", "y"])
    assert ideal_equal(J, Ideal([poly_parse("y-x^2", ("x", "y"))]))


def test_eliminate_keep_all():
    I = coin_ideal()
    assert eliminate(I, list(COIN)) is I


# -- degree counts -------------------------------------------------------------------


def test_zero_dim_degree_univariate():
    assert zero_dim_degree(Ideal([poly_parse("x^2-1", ("x",))])) == 2


def test_zero_dim_degree_not_zero_dimensional():
    with pytest.raises(NotZeroDimensional):
        zero_dim_degree(coin_ideal())


def test_zero_dim_degree_linear_change_invariance():
    vars = ("x", "y")
    f1 = poly_parse("x^2+y^2-4", vars)
    f2 = poly_parse("x*y-1", vars)
    I = Ideal([f1, f2])
    J = Ideal([f1 + 3 * f2, f2 - f1])
    assert zero_dim_degree(I) == zero_dim_degree(J) == 4


def test_quotient_basis_and_multiplication_matrix():
    vars = ("x",)
    G = groebner_basis([poly_parse("x^2-2", vars)], TermOrder(1))
    basis = quotient_basis(G)
    assert basis == [(0,), (1,)]
    m = multiplication_matrix(G, basis, 0)
    assert m == [[Fraction(0), Fraction(2)], [Fraction(1), Fraction(0)]]
    mp = minimal_polynomial(m, [Fraction(1), Fraction(0)])
    assert mp == [Fraction(-2), Fraction(0), Fraction(1)]  # x^2 - 2


def test_solve_degree_one():
    vars = ("x", "y")
    G = groebner_basis([poly_parse("x-3", vars), poly_parse("y+2", vars)])
    assert solve_degree_one(G) == (Fraction(3), Fraction(-2))


def test_solve_zero_dim_numeric():
    rng = random.Random(4)
    vars = ("x", "y")
    G = groebner_basis([poly_parse("x^2-1", vars), poly_parse("y-x", vars)])
    sols = solve_zero_dim_numeric(G, rng)
    assert len(sols) == 2
    pts = sorted(round(s[0].real) for s in sols)
    assert pts == [-1, 1]
    for s in sols:
        assert abs(s[0] - s[1]) < 1e-8


# -- homogeneity space ------------------------------------------------------------------


def test_homogeneity_space_of_coin_initial():
    J = Ideal([poly_parse("t0*t2-t1^2", COIN), poly_parse("t2-1", COIN)])
    basis = homogeneity_space(J)
    assert len(basis) == 1
    v = basis[0]
    # solves u0 - 2*u1 + u2 = 0 and u2 = 0, i.e. span{(2,1,0)}
    assert v[2] == 0 and v[0] == 2 * v[1]


def test_homogeneity_space_zero_ideal():
    I = Ideal([], COIN)
    assert len(homogeneity_space(I)) == 3


def test_homogeneity_space_monomial_ideal():
    I = Ideal([poly_parse("t0*t1^2", COIN), poly_parse("t2^3", COIN)])
    assert len(homogeneity_space(I)) == 3


def test_homogeneity_space_contains_weight():
    I = coin_ideal()
    eng = InitialIdealEngine(I)
    for w in [(2, 1, 0), (0, 1, 1), (-2, -2, -1), (1, 2, -1)]:
        J = eng.initial(w)
        basis = homogeneity_space(J)
        # w must lie in the span of the homogeneity basis
        from tropcrit.linalg import rank

        rows = [list(map(Fraction, b)) for b in basis]
        assert rank(rows + [[Fraction(x) for x in w]]) == len(basis)


# -- dimension ----------------------------------------------------------------------------


def test_ideal_dimension():
    assert ideal_dimension(coin_ideal()) == 1
    assert ideal_dimension(Ideal([poly_parse("x^2-1", ("x", "y"))])) == 1
    assert ideal_dimension(Ideal([poly_parse("1", ("x", "y"))])) == -1
    assert ideal_dimension(Ideal([], ("x", "y"))) == 2


def test_budget_abort():
    # cyclic-5-like workload with a tiny budget aborts cleanly
    vars = ("a", "b", "c")
    gens = [
        poly_parse("a+b+c", vars),
        poly_parse("a*b+b*c+c*a", vars),
        poly_parse("a*b*c-1", vars),
    ]
    with pytest.raises(ResourceBudgetExceeded):
        groebner_basis(gens, budget=3)
