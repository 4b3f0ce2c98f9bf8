"""Formula algebra: parsing, canonical forms, period modules, counterexamples.

The evaluation oracle re-reads each formula with Python's own parser
(after a mechanical token swap), so the expected values never pass
through the library's grammar or canonicalization.
"""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from periodalg.errors import (
    DivisionByZero,
    NonIntegralShift,
    NonMonomialDivisor,
    NotFound,
    NotInDomain,
    ParseError,
    ShiftNotInDomain,
    UnknownRadicand,
)
from periodalg.exactreal import ExactReal, RadicalBasis
from periodalg.funcalg import (
    composition_check,
    evaluate,
    find_counterexample,
    parse,
    period_module,
    shift,
    shift_difference,
)
from periodalg.lattice import CoeffLattice, member

from oracles import py_formula_evaluator, random_basis, random_formula_text


def full_domain(*radicands: int) -> CoeffLattice:
    basis = RadicalBasis(radicands)
    k = len(basis)
    eye = [tuple(1 if j == i else 0 for j in range(k)) for i in range(k)]
    return CoeffLattice(eye, basis=basis)


def test_parse_canonical_cancellation():
    dom = full_domain(1, 2, 3)
    f = parse("recip(sqrt(2)) + recip(sqrt(3)) - recip(sqrt(3))", dom)
    assert f == parse("recip(sqrt(2))", dom)
    assert len(f.terms) == 1


def test_parse_sgn_squares_to_one():
    dom = full_domain(1, 2)
    assert parse("sgn(sqrt(2))^2", dom).is_constant()
    assert parse("sgn(sqrt(2))^2", dom) == parse("1", dom)
    assert parse("sgn(sqrt(2))^3", dom) == parse("sgn(sqrt(2))", dom)


def test_parse_sgn_shift_folds_into_sign():
    dom = full_domain(1, 2)
    assert parse("sgn(sqrt(2)+1)", dom) == parse("-sgn(sqrt(2))", dom)
    assert parse("sgn(sqrt(2)+2)", dom) == parse("sgn(sqrt(2))", dom)
    assert parse("sgn(sqrt(2)-3)", dom) == parse("-sgn(sqrt(2))", dom)


def test_parse_distinct_shifts_stay_distinct():
    dom = full_domain(1, 2)
    f = parse("abs1(sqrt(2)) + abs1(sqrt(2)+1)", dom)
    assert len(f.terms) == 2


def test_parse_errors():
    dom = full_domain(1, 2)
    with pytest.raises(ParseError) as err:
        parse("abs1(sqrt(2)) + $", dom)
    assert err.value.pos == 16
    with pytest.raises(UnknownRadicand):
        parse("abs1(sqrt(5))", dom)
    with pytest.raises(NonMonomialDivisor):
        parse("1 / (abs1(one) + abs1(sqrt(2)))", dom)
    with pytest.raises(DivisionByZero):
        parse("abs1(one) / (abs1(sqrt(2)) - abs1(sqrt(2)))", dom)


def test_text_round_trip_random():
    rng = random.Random(3401)
    for _ in range(150):
        basis = random_basis(rng, rng.choice([1, 2]))
        dom = full_domain(*basis.radicands)
        text = random_formula_text(rng, list(basis.radicands))
        f = parse(text, dom)
        assert parse(f.text(), dom) == f


def test_evaluate_against_python_parser():
    rng = random.Random(3402)
    for _ in range(200):
        basis = random_basis(rng, rng.choice([1, 2]))
        dom = full_domain(*basis.radicands)
        text = random_formula_text(rng, list(basis.radicands))
        f = parse(text, dom)
        oracle = py_formula_evaluator(text, dom.basis.radicands)
        for _ in range(4):
            v = tuple(rng.randint(-6, 6) for _ in range(dom.dim))
            assert evaluate(f, v) == oracle(v)


def test_ring_ops_are_pointwise():
    rng = random.Random(3403)
    dom = full_domain(1, 2, 3)
    rads = [1, 2, 3]
    for _ in range(60):
        f = parse(random_formula_text(rng, rads), dom)
        g = parse(random_formula_text(rng, rads), dom)
        v = tuple(rng.randint(-5, 5) for _ in range(3))
        assert evaluate(f + g, v) == evaluate(f, v) + evaluate(g, v)
        assert evaluate(f - g, v) == evaluate(f, v) - evaluate(g, v)
        assert evaluate(f * g, v) == evaluate(f, v) * evaluate(g, v)
        assert evaluate(f ** 2, v) == evaluate(f, v) ** 2


def test_division_by_monomial_is_pointwise():
    rng = random.Random(3404)
    dom = full_domain(1, 2)
    for _ in range(40):
        f = parse(random_formula_text(rng, [1, 2]), dom)
        g = parse("2*abs1(sqrt(2))^2*sgn(one)", dom)
        v = (rng.randint(-5, 5), rng.randint(-5, 5))
        assert evaluate(f / g, v) == evaluate(f, v) / evaluate(g, v)


def test_cross_basis_product_merges_domains():
    d1 = full_domain(1, 2, 3, 5)
    d2 = full_domain(1, 2, 3, 7)
    g1 = parse("abs1(one) * abs1(sqrt(3))", d1)
    g2 = parse("abs1(sqrt(2)) / abs1(sqrt(3))", d2)
    h = g1 * g2
    assert h.domain.basis.radicands == (1, 2, 3, 5, 7)
    assert h.domain.rank == 3
    assert h == parse(
        "abs1(one) * abs1(sqrt(2))",
        CoeffLattice(
            [(1, 0, 0, 0, 0), (0, 1, 0, 0, 0), (0, 0, 1, 0, 0)],
            basis=RadicalBasis([2, 3, 5, 7]),
        ),
    )


def test_shift_matches_translated_evaluation():
    rng = random.Random(3405)
    dom = full_domain(1, 2, 3)
    rads = [1, 2, 3]
    for _ in range(60):
        f = parse(random_formula_text(rng, rads), dom)
        s = tuple(rng.randint(-3, 3) for _ in range(3))
        g = shift(f, s)
        v = tuple(rng.randint(-4, 4) for _ in range(3))
        moved = tuple(a + b for a, b in zip(v, s))
        assert evaluate(g, v) == evaluate(f, moved)


def test_shift_requires_domain_point():
    dom = CoeffLattice([(2, 0), (0, 1)], basis=RadicalBasis([2]))
    f = parse("abs1(one)", dom)
    with pytest.raises(ShiftNotInDomain):
        shift(f, (1, 0))
    shifted = shift(f, (2, 0))
    assert evaluate(shifted, (0, 0)) == evaluate(f, (2, 0))


def test_shift_difference_detects_periods():
    dom = full_domain(1, 2, 3)
    f = parse("sgn(sqrt(3))", dom)
    one = ExactReal.rational(1, dom.basis)
    s3 = ExactReal.sqrt(3, dom.basis)
    assert shift_difference(f, one).is_zero()
    assert not shift_difference(f, s3).is_zero()
    assert shift_difference(f, s3.scale(2)).is_zero()
    with pytest.raises(NonIntegralShift):
        shift_difference(f, one.scale(Fraction(1, 2)))
    with pytest.raises(ShiftNotInDomain):
        shift_difference(f, ExactReal.sqrt(5))


def test_period_module_parity_wave():
    dom = full_domain(1, 2, 3)
    pm = period_module(parse("sgn(sqrt(3))", dom))
    assert pm.zero_coords == frozenset()
    assert pm.parity_constraints == (frozenset({3}),)
    assert pm.as_lattice.hnf == ((1, 0, 0), (0, 1, 0), (0, 0, 2))
    assert pm.generators_real == (
        ExactReal.rational(1, dom.basis),
        ExactReal.sqrt(2, dom.basis),
        ExactReal.sqrt(3, dom.basis).scale(2),
    )


def test_period_module_joint_parity():
    dom = full_domain(1, 2, 3)
    pm = period_module(parse("sgn(sqrt(2))*sgn(sqrt(3))", dom))
    assert pm.parity_constraints == (frozenset({2, 3}),)
    assert pm.as_lattice.hnf == ((1, 0, 0), (0, 1, 1), (0, 0, 2))


def test_period_module_pinned_coordinates():
    dom = full_domain(1, 2, 3)
    pm = period_module(parse("recip(one) + recip(sqrt(2))", dom))
    assert pm.zero_coords == frozenset({1, 2})
    assert pm.as_lattice.hnf == ((0, 0, 1),)
    assert pm.generators_real == (ExactReal.sqrt(3, dom.basis),)


def test_period_module_constant_is_everything():
    dom = full_domain(1, 2)
    pm = period_module(parse("7", dom))
    assert pm.zero_coords == frozenset()
    assert pm.parity_constraints == ()
    assert pm.as_lattice == dom


def test_period_module_generators_are_formal_periods():
    rng = random.Random(3406)
    for _ in range(50):
        basis = random_basis(rng, rng.choice([1, 2]))
        dom = full_domain(*basis.radicands)
        f = parse(random_formula_text(rng, list(basis.radicands)), dom)
        pm = period_module(f)
        for row in pm.as_lattice.hnf:
            g = pm.as_lattice.to_real(row)
            assert shift_difference(f, g).is_zero()
            for _ in range(3):
                v = tuple(rng.randint(-4, 4) for _ in range(dom.dim))
                moved = tuple(a + b for a, b in zip(v, row))
                assert evaluate(f, v) == evaluate(f, moved)


def test_counterexample_for_reciprocal():
    dom = full_domain(1, 2, 3)
    f = parse("recip(sqrt(2))", dom)
    got = find_counterexample(f, ExactReal.sqrt(2, dom.basis))
    assert got == (0, 0, 0)
    assert evaluate(f, (0, 0, 0)) == 1
    assert evaluate(f, (0, 1, 0)) == Fraction(1, 2)


def test_counterexample_absent_for_true_period():
    dom = full_domain(1, 2, 3)
    f = parse("sgn(sqrt(3))", dom)
    got = find_counterexample(f, ExactReal.sqrt(3, dom.basis).scale(2))
    assert got == NotFound(25)
    got = find_counterexample(f, ExactReal.sqrt(3, dom.basis), bound=3)
    assert got == (0, 0, 0)


def test_counterexample_when_domain_not_invariant():
    dom = CoeffLattice([(2,)], basis=RadicalBasis([]))
    f = parse("abs1(one)", dom)
    got = find_counterexample(f, ExactReal.rational(1), bound=5)
    # shifting by 1 leaves the even lattice entirely
    assert got == (0,)
    assert not member(dom, (1,))


def test_counterexample_respects_sublattice_domain():
    dom = CoeffLattice([(1, 0, 0), (0, 1, 0)], basis=RadicalBasis([2, 3]))
    f = parse("abs1(one) * abs1(sqrt(2))", dom)
    got = find_counterexample(f, ExactReal.rational(1, dom.basis), bound=6)
    assert got != NotFound(6)
    assert member(dom, got)
    vec = (1, 0, 0)
    moved = tuple(a + b for a, b in zip(got, vec))
    assert evaluate(f, got) != evaluate(f, moved)


def test_evaluate_outside_domain():
    dom = CoeffLattice([(2, 0), (0, 1)], basis=RadicalBasis([2]))
    f = parse("abs1(one)", dom)
    with pytest.raises(NotInDomain):
        evaluate(f, (1, 0))


def test_composition_check_cases():
    two = ExactReal.rational(2)
    one = ExactReal.rational(1)
    s2 = ExactReal.sqrt(2)
    s3 = ExactReal.sqrt(3)
    assert composition_check(two, one, ExactReal.rational(3)).n == 6
    assert composition_check(s2, s2, ExactReal.rational(5)).n == 5
    assert not composition_check(s2, one, s3).holds
    assert composition_check(s2, one, s2).n == 2
    with pytest.raises(DivisionByZero):
        composition_check(two, ExactReal.rational(0), one)
    with pytest.raises(ValueError):
        composition_check(two, one, ExactReal.rational(0))
