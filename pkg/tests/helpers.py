"""Shared random generators and exact evaluation oracles for the tests.

Everything is driven by an explicit ``random.Random`` handed in by the
caller, so every test run is reproducible from its seed.  The evaluation
helpers re-derive values from first principles (Horner loops over
``Fraction``) instead of calling the code paths they are used to check.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from basicforms.actions import AffineMap
from basicforms.forms import Form, VectorField
from basicforms.polynomials import Polynomial
from basicforms.scalars import Scalar


def rand_fraction(rng: random.Random, span: int = 6) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, span))


def rand_nonzero_fraction(rng: random.Random, span: int = 6) -> Fraction:
    while True:
        f = rand_fraction(rng, span)
        if f != 0:
            return f


def rand_scalar(rng: random.Random, with_param: bool = True, span: int = 4) -> Scalar:
    """A rational function of the parameter with small integer data."""
    a = Scalar.parameter()
    num = Scalar.of(rand_fraction(rng, span))
    if with_param and rng.random() < 0.7:
        for _ in range(rng.randint(1, 2)):
            num = num * a + rand_fraction(rng, span)
    if with_param and rng.random() < 0.3:
        den = a + rand_nonzero_fraction(rng, span)
        return num / den
    return num


def rand_poly(
    rng: random.Random,
    num_vars: int,
    max_degree: int = 3,
    max_terms: int = 4,
    with_param: bool = False,
) -> Polynomial:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        exps = [0] * num_vars
        for _ in range(rng.randint(0, max_degree)):
            exps[rng.randrange(num_vars)] += 1
        terms[tuple(exps)] = rand_scalar(rng, with_param)
    return Polynomial(num_vars, terms)


def rand_form(
    rng: random.Random,
    dim: int,
    grade: int,
    max_degree: int = 2,
    with_param: bool = False,
) -> Form:
    import itertools

    tuples = list(itertools.combinations(range(dim), grade))
    out = Form.zero(dim, grade)
    for indices in rng.sample(tuples, k=rng.randint(1, len(tuples))):
        out = out + Form.monomial(dim, indices, rand_poly(rng, dim, max_degree, 3, with_param))
    return out


def rand_vector_field(
    rng: random.Random, dim: int, max_degree: int = 2, with_param: bool = False
) -> VectorField:
    return VectorField([rand_poly(rng, dim, max_degree, 3, with_param) for _ in range(dim)])


def rand_affine(rng: random.Random, dim: int, with_param: bool = False) -> AffineMap:
    """Random invertible exact affine map; retries until the linear part is."""
    from basicforms import linalg

    while True:
        rows = [
            [rand_scalar(rng, with_param and rng.random() < 0.3, span=3) for _ in range(dim)]
            for _ in range(dim)
        ]
        try:
            return AffineMap(
                linalg.Matrix.from_rows(rows),
                [rand_scalar(rng, with_param, span=3) for _ in range(dim)],
            )
        except ValueError:
            continue


def safe_a0(rng: random.Random, *polys: Polynomial, span: int = 4) -> Fraction:
    """A parameter value at which none of the polys' coefficients has a pole."""
    while True:
        a0 = rand_fraction(rng, span)
        try:
            for p in polys:
                for c in p.terms.values():
                    eval_scalar_exact(c, a0)
            return a0
        except ZeroDivisionError:
            continue


def eval_scalar_exact(s: Scalar, a0: Fraction) -> Fraction:
    if s.uses_parameter:
        return s.bind(a0).as_fraction()
    return s.as_fraction()


def eval_poly_exact(
    poly: Polynomial, point: Sequence[Fraction], a0: Fraction = Fraction(0)
) -> Fraction:
    """Term-by-term exact evaluation, independent of Polynomial.evaluate."""
    total = Fraction(0)
    for exps, coeff in poly.terms.items():
        value = eval_scalar_exact(coeff, a0)
        for x, e in zip(point, exps):
            value *= x**e
        total += value
    return total
