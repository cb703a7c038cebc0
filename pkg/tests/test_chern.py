import random
from fractions import Fraction

import pytest

from cherncount.chern import (
    ALL_CONSTRAINT_GROUPS,
    TABLE3,
    UNKNOWN_BEARING_ROWS,
    ChernPoly,
    build_constraints,
    c1_quotient,
    chern_of_filtration,
    formula_check,
    h3_on_Y,
    key_for_step,
    parse_key,
    regenerate_rows,
    row_step,
    solve_multiplicities,
    step_exponents,
    step_provider,
    table3_c1,
    table3_report,
    twist,
    whitney,
)
from cherncount.chow import make_ring, parse_class
from cherncount.errors import ChernError, SolverError
from cherncount.fan import FanCase
from cherncount.ideals import MAXIMAL, curvilinear, filtration, make_B, parse_ideal

from helpers import random_class

I1, I2, I3, I4 = (curvilinear(k) for k in range(1, 5))
M41 = FanCase.M41


def P(ring, text):
    return parse_class(text, ring)


# -- Chern polynomials --------------------------------------------------------------


def test_twist_of_a_line_bundle():
    S = make_ring("S")
    L = ChernPoly.line(S.gen("c1"))
    assert twist(L, S.gen("D")).c(1) == P(S, "c1 + D")
    assert twist(L, S.zero).total == L.total


def test_twist_of_the_rank_three_bundle():
    S = make_ring("S")
    c = ChernPoly.from_total(3, P(S, "1 + c1 + c2"))
    t = twist(c, S.gen("D"))
    assert t.c(1) == P(S, "c1 + 3*D")
    assert t.c(2) == P(S, "c2 + 2*D*c1 + 3*D^2")


def test_twist_is_multiplicative():
    B = make_ring("B")
    rng = random.Random(1)
    for _ in range(20):
        a = ChernPoly.line(random_class(B, rng))
        b = ChernPoly.line(random_class(B, rng))
        d = random_class(B, rng)
        assert twist(whitney(a, b), d).total == whitney(twist(a, d), twist(b, d)).total


def test_twist_composes():
    C = make_ring("C23")
    rng = random.Random(2)
    for _ in range(10):
        c = whitney(ChernPoly.line(random_class(C, rng)), ChernPoly.line(random_class(C, rng)))
        d, e = random_class(C, rng), random_class(C, rng)
        assert twist(twist(c, d), e).total == twist(c, d + e).total


def test_whitney_adds_first_classes_and_ranks():
    Y = make_ring("Y")
    rng = random.Random(3)
    parts = [random_class(Y, rng) for _ in range(5)]
    total = ChernPoly.trivial(Y)
    for x in parts:
        total = whitney(total, ChernPoly.line(x))
    assert total.rank == 5
    assert total.c(1) == sum(parts[1:], parts[0])


def test_twist_rejects_higher_degree():
    B = make_ring("B")
    with pytest.raises(ChernError):
        twist(ChernPoly.trivial(B, 2), B.gen("c2"))


# -- line bundles of monomial quotients ---------------------------------------------------


def test_c1_quotient_examples():
    B = make_ring("B")
    assert c1_quotient(I2, I1**2, M41, B) == -B.gen("h2")
    assert c1_quotient(I1, I2, M41, B) == P(B, "c1 + h2")
    assert c1_quotient(I1 * I2, I2**2 + I1**3, M41, B) == B.gen("c1")


def test_c1_quotient_needs_h3_when_the_degeneration_moves_the_monomial():
    I, J = I3**2, I3 * I4
    (a, b), (c, d) = step_exponents(I, J)
    assert a != c
    with pytest.raises(ChernError):
        c1_quotient(I, J, M41, make_ring("B"))
    C = make_ring("C23")
    got = c1_quotient(I, J, M41, C)
    assert got == P(C, f"-{a}*h2 + {b}*(c1 + h2) + {a - c}*(h2 - h3)")


def test_chain_to_the_square_of_the_maximal_ideal():
    B = make_ring("B")
    c = chern_of_filtration(filtration(MAXIMAL**2), step_provider(B), B)
    assert c.rank == 3
    assert c.total == P(B, "(1 + c1 + h2)*(1 - h2)")


def test_chain_over_Y_sums_the_step_classes():
    Y = make_ring("Y")
    chain = filtration(I4**2)
    provider = step_provider(Y)
    steps = [provider(I, J) for I, J in chain.steps]
    c = chern_of_filtration(chain, provider, Y)
    assert c.rank == 12
    assert c.c(1) == sum(steps[1:], steps[0])


def test_h3_satisfies_its_relation_on_Y():
    Y = make_ring("Y")
    h3, h2, c1 = h3_on_Y(Y), Y.gen("h2"), Y.gen("c1")
    assert (h3 + 2 * h2 + 2 * c1) * (h3 - h2) == Y.zero
    assert (h3_on_Y(Y, (1, 1, 1, 1)) + 2 * h2 + 2 * c1) * (h3_on_Y(Y, (1, 1, 1, 1)) - h2) != Y.zero


# -- the table of classes over Y -----------------------------------------------------------


def test_keys():
    assert parse_key("3,3/3,4") == (3, 3, 3, 4)
    with pytest.raises(ChernError):
        parse_key("3,3,3,4")
    assert key_for_step(I3**2, I3 * I4) == (3, 3, 3, 4)
    assert key_for_step(MAXIMAL**2, parse_ideal("x^2, x*y, y^3")) == (1, 1, 2, 2)


def test_table_rows_become_classes():
    Y = make_ring("Y")
    assert table3_c1((1, 2, 2, 1), Y) == Y.gen("c1")
    assert table3_c1((1, 1, 1, 2), Y) == table3_c1((1, 1, 2, 2), Y)
    with pytest.raises(ChernError):
        table3_c1((9, 9, 9, 9), Y)


def test_row_with_a_genuine_step_label():
    # (x^2, x y, y^3) > (x^2, x y^2, y^3) is a colength-one step with quotient x y
    I, J = row_step((1, 2, 2, 1))
    assert J.colength() == I.colength() + 1
    assert I.quotient_monomial(J).render() == "x*y"


def test_formula_rows():
    scopes = {}
    for key in TABLE3:
        if key in UNKNOWN_BEARING_ROWS:
            continue
        scope, ok = formula_check(key)
        assert ok, key
        scopes[scope] = scopes.get(scope, 0) + 1
    assert scopes == {"full": 4, "base": 8}


def test_formula_check_detects_a_corrupted_row():
    table = dict(TABLE3)
    row = list(table[(2, 2, 2, 3)])
    row[1] += 1
    table[(2, 2, 2, 3)] = tuple(row)
    assert formula_check((2, 2, 2, 3), table) == ("base", False)


def test_table_report_is_clean():
    report = table3_report()
    assert len(report) == 15
    assert all(e["ok"] for e in report)
    assert sum(e["check"] == "regenerated" for e in report) == 3


# -- multiplicity solver -------------------------------------------------------------


def test_solver_solution():
    sol = solve_multiplicities(build_constraints())
    assert sol == {"n1": 1, "n2": 2, "n3": 3, "n4": 1, "n5": 1, "n6": 1, "n7": 1}


def test_solution_satisfies_every_constraint():
    cons = build_constraints()
    sol = solve_multiplicities(cons)
    assert all(c.evaluate(sol) == 0 for c in cons)
    assert {c.kind.name for c in cons} == {"WHITNEY_EQ", "PULLBACK_COMB"}


def test_solution_regenerates_the_unknown_rows():
    regen = regenerate_rows(solve_multiplicities(build_constraints()))
    for key in UNKNOWN_BEARING_ROWS:
        assert regen[key] == TABLE3[key]


def test_all_ones_does_not_satisfy_the_system():
    ones = {f"n{k}": Fraction(1) for k in range(1, 8)}
    assert any(c.evaluate(ones) != 0 for c in build_constraints())


def test_dropping_the_whitney_group_is_underdetermined():
    groups = [g for g in ALL_CONSTRAINT_GROUPS if g != "whitney"]
    with pytest.raises(SolverError, match="underdetermined"):
        solve_multiplicities(build_constraints(groups=groups))


def test_corrupted_seed_entry_is_inconsistent():
    table = dict(TABLE3)
    row = list(table[(0, 3, 0, 4)])
    row[0] += 1
    table[(0, 3, 0, 4)] = tuple(row)
    with pytest.raises(SolverError, match="inconsistent"):
        solve_multiplicities(build_constraints(table))


def test_unknown_group_is_rejected():
    with pytest.raises(SolverError):
        build_constraints(groups=["whitney", "nonsense"])
