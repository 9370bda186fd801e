"""Truncated invariant-form solver: windows, constraints, bases, averages,
and basic cohomology.

Basis results are cross-checked two independent ways: every returned form
is verified directly against the defining conditions (pullback fixed,
Lie derivative zero, contraction zero), and for the worked models the
expected spans are known in closed form.  The Reynolds operator is
compared against a literal four-term sum for the quarter-turn group.
"""

import math
import random
from fractions import Fraction

import pytest

from basicforms.actions import ActionSpec, AffineMap, act_pullback, group_closure
from basicforms.examples import (
    irrational_torus_line,
    so2_plane,
    solenoid_field,
    solenoid_plane,
    trivial_action,
    z2_line,
)
from basicforms.forms import Form, interior, lie_derivative
from basicforms.linalg import Matrix
from basicforms.polynomials import Polynomial
from basicforms.scalars import Scalar
from basicforms.solver import (
    TruncationSpec,
    Window,
    basic_form_basis,
    invariance_constraints,
    horizontality_constraints,
    monomial_form_basis,
    reynolds_average,
    span_matrix,
    spans_equal,
    truncated_basic_cohomology,
)
from helpers import rand_form


def _is_basic(action: ActionSpec, form: Form) -> bool:
    """The defining conditions, checked exactly and directly."""
    for g in action.discrete:
        if act_pullback(g, form) != form:
            return False
    for xi in action.infinitesimal:
        if not lie_derivative(xi, form).is_zero:
            return False
        if form.grade > 0 and not interior(xi, form).is_zero:
            return False
    return True


def test_truncation_spec_validation():
    with pytest.raises(ValueError):
        TruncationSpec(-1, 2)
    with pytest.raises(ValueError):
        TruncationSpec(1, -1)
    spec = TruncationSpec(1, 3)
    assert (spec.grade, spec.max_degree) == (1, 3)


def test_window_size_formula():
    for dim in (1, 2, 3):
        for grade in range(dim + 1):
            for d in range(4):
                w = Window(dim, grade, d)
                monos = math.comb(dim + d, d)
                assert w.size == monos * math.comb(dim, grade)


def test_window_round_trip():
    rng = random.Random(501)
    for _ in range(100):
        dim = rng.randint(1, 3)
        grade = rng.randint(0, dim)
        w = Window(dim, grade, 3)
        form = rand_form(rng, dim, grade, max_degree=3, with_param=True)
        assert w.combine(w.coordinates(form)) == form


def test_window_rejects_out_of_window_terms():
    w = Window(1, 0, 1)
    cubic = Form.function(Polynomial(1, {(3,): 1}))
    with pytest.raises(ValueError, match="outside"):
        w.coordinates(cubic)


def test_monomial_basis_is_deterministic_and_ordered():
    spec = TruncationSpec(1, 1)
    basis = monomial_form_basis(2, spec)
    # degree before grade-index order: constants first, then linears
    assert [str(f) for f in basis] == [
        "(1) dx",
        "(1) dy",
        "(x) dx",
        "(x) dy",
        "(y) dx",
        "(y) dy",
    ]


def test_constraint_kernel_matches_direct_conditions():
    rng = random.Random(502)
    actions = [z2_line(), irrational_torus_line(), solenoid_plane(), so2_plane()]
    for _ in range(120):
        action = rng.choice(actions)
        grade = rng.randint(0, action.dim)
        spec = TruncationSpec(grade, rng.randint(0, 2))
        w = Window(action.dim, grade, spec.max_degree)
        form = rand_form(rng, action.dim, grade, max_degree=spec.max_degree)
        coords = w.coordinates(form)
        system = invariance_constraints(action, spec).stack_below(
            horizontality_constraints(action, spec)
        )
        in_kernel = all(v.is_zero for v in system.apply(coords))
        assert in_kernel == _is_basic(action, form)


def test_basis_members_satisfy_defining_conditions():
    rng = random.Random(503)
    actions = [z2_line(), irrational_torus_line(), solenoid_plane(), so2_plane()]
    for action in actions:
        for grade in range(action.dim + 1):
            for d in range(3):
                for f in basic_form_basis(action, TruncationSpec(grade, d)):
                    assert _is_basic(action, f)
                    assert not f.is_zero


def test_torus_line_golden_all_degrees():
    action = irrational_torus_line()
    one = Form.function(Polynomial.constant(1, 1))
    dx = Form.covector(1, 0)
    for d in range(6):
        assert basic_form_basis(action, TruncationSpec(0, d)) == [one]
        assert basic_form_basis(action, TruncationSpec(1, d)) == [dx]


def test_solenoid_golden():
    action = solenoid_plane()
    a = Polynomial.parameter(2)
    generator = Form.monomial(2, (0,), a) + Form.monomial(2, (1,), Polynomial.constant(2, -1))
    for d in range(3):
        basis = basic_form_basis(action, TruncationSpec(1, d))
        assert basis == [generator]
        assert str(basis[0]) == "(a) dx + (-1) dy"
        assert basic_form_basis(action, TruncationSpec(2, d)) == []


def test_z2_golden_and_reynolds_span():
    action = z2_line()
    spec = TruncationSpec(1, 3)
    basis = basic_form_basis(action, spec)
    x = Polynomial.variable(1, 0)
    assert basis == [
        Form.monomial(1, (0,), x),
        Form.monomial(1, (0,), x**3),
    ]
    # Reynolds image over the full monomial window spans the same space
    group = group_closure([action.discrete[0]])
    averaged = [
        reynolds_average(group, f) for f in monomial_form_basis(1, spec)
    ]
    averaged = [f for f in averaged if not f.is_zero]
    w = Window(1, 1, 3)
    assert spans_equal(w, basis, averaged)


def test_so2_invariant_functions():
    action = so2_plane()
    x, y = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
    basis = basic_form_basis(action, TruncationSpec(0, 2))
    w = Window(2, 0, 2)
    expected = [Form.function(Polynomial.constant(2, 1)), Form.function(x * x + y * y)]
    assert spans_equal(w, basis, expected)
    # no invariant constant 1-forms for the rotation flow
    assert basic_form_basis(action, TruncationSpec(1, 0)) == []


def test_trivial_action_keeps_whole_window():
    for dim in (1, 2):
        action = trivial_action(dim)
        for grade in range(dim + 1):
            spec = TruncationSpec(grade, 2)
            basis = basic_form_basis(action, spec)
            w = Window(dim, grade, 2)
            assert len(basis) == w.size
            assert spans_equal(w, basis, w.basis_forms())


def test_reynolds_against_explicit_four_term_sum():
    rng = random.Random(504)
    r = AffineMap.from_rows([[0, -1], [1, 0]], [0, 0])
    group = group_closure([r], cap=8)
    for _ in range(60):
        grade = rng.randint(0, 2)
        form = rand_form(rng, 2, grade, max_degree=2)
        powers = [AffineMap.identity(2), r, r.compose(r), r.compose(r).compose(r)]
        total = Form.zero(2, grade)
        for g in powers:
            total = total + act_pullback(g, form)
        expect = total.scale(Scalar.of(Fraction(1, 4)))
        assert reynolds_average(group, form) == expect


def test_reynolds_idempotent_and_invariant():
    rng = random.Random(505)
    r = AffineMap.from_rows([[0, -1], [1, 0]], [0, 0])
    group = group_closure([r], cap=8)
    for _ in range(40):
        form = rand_form(rng, 2, rng.randint(0, 2), max_degree=2)
        avg = reynolds_average(group, form)
        assert reynolds_average(group, avg) == avg
        for g in group:
            assert act_pullback(g, avg) == avg


def test_reynolds_kills_odd_forms():
    flip = AffineMap.from_rows([[-1]], [0])
    group = group_closure([flip])
    dx = Form.covector(1, 0)
    assert reynolds_average(group, dx).is_zero
    x = Polynomial.variable(1, 0)
    assert reynolds_average(group, Form.monomial(1, (0,), x)) == Form.monomial(1, (0,), x)


def test_reynolds_validates_group_input():
    r = AffineMap.from_rows([[0, -1], [1, 0]], [0, 0])
    dx = Form.covector(2, 0)
    with pytest.raises(ValueError, match="identity"):
        reynolds_average([r], dx)
    with pytest.raises(ValueError, match="duplicates"):
        reynolds_average([AffineMap.identity(2), r, r], dx)
    with pytest.raises(ValueError, match="closed"):
        reynolds_average([AffineMap.identity(2), r], dx)
    with pytest.raises(ValueError, match="empty"):
        reynolds_average([], dx)


def test_solenoid_cohomology_windows():
    action = solenoid_plane()
    for d in (2, 4):
        records = truncated_basic_cohomology(action, d)
        dims = [r.dim_cohomology for r in records]
        assert dims == [1, 1, 0]
        assert [r.grade for r in records] == [0, 1, 2]
        for r in records:
            assert r.dim_closed <= r.dim_basic
            assert r.dim_exact <= r.dim_closed


def test_trivial_action_cohomology_is_poincare():
    # full polynomial complex: only constants survive in degree zero
    for dim in (1, 2):
        records = truncated_basic_cohomology(trivial_action(dim), 3)
        assert [r.dim_cohomology for r in records] == [1] + [0] * dim


def test_torus_cohomology_is_circle_like():
    records = truncated_basic_cohomology(irrational_torus_line(), 3)
    assert [r.dim_cohomology for r in records] == [1, 1]


def test_solenoid_specializes_at_rational_slopes():
    base = solenoid_plane()
    for a0 in (Fraction(1, 2), Fraction(2, 3), Fraction(5)):
        action = base.bind_param(a0)
        basis = basic_form_basis(action, TruncationSpec(1, 2))
        assert len(basis) == 1
        expect = Form.monomial(2, (0,), Polynomial.constant(2, a0)) + Form.monomial(
            2, (1,), Polynomial.constant(2, -1)
        )
        w = Window(2, 1, 2)
        assert spans_equal(w, basis, [expect])
        records = truncated_basic_cohomology(action, 2)
        assert [r.dim_cohomology for r in records] == [1, 1, 0]


def test_dimension_stability_across_windows():
    action = irrational_torus_line()
    dims = {
        d: len(basic_form_basis(action, TruncationSpec(1, d))) for d in range(5)
    }
    assert set(dims.values()) == {1}


def test_span_matrix_shape():
    w = Window(2, 1, 1)
    forms = [Form.covector(2, 0), Form.covector(2, 1)]
    m = span_matrix(w, forms)
    assert (m.rows, m.cols) == (w.size, 2)
