"""The odd bracket pairing fields with antifields, and its exponentials.

The bracket pairs each coordinate with its degree(-1) dual and each
ghost with its antifield.  On generators: [x, xs] = 1, [xs, x] = -1,
[b, bs] = 1, [bs, b] = -1, and [f, xs] = df/dx for scalar f.  It shifts
ghost degree by +1 and is a graded biderivation.
"""

from __future__ import annotations

from fractions import Fraction

from .graded_algebra import (
    GeneratorTable,
    GradedPolynomial,
    coordinate_derivative,
    dual_name,
    left_derivative,
    multiply,
    right_derivative,
    truncate,
)
from .polynomial_engine import BasePolynomial


def bracket(a: GradedPolynomial, b: GradedPolynomial) -> GradedPolynomial:
    if a.table != b.table:
        raise ValueError("generator table mismatch")
    table = a.table
    out = GradedPolynomial.zero(table)
    for coord in table.coordinates:
        d = dual_name(coord)
        da = coordinate_derivative(a, coord)
        if da:
            lb = left_derivative(b, d)
            if lb:
                out = out + multiply(da, lb)
        ra = right_derivative(a, d)
        if ra:
            db = coordinate_derivative(b, coord)
            if db:
                out = out - multiply(ra, db)
    for aname, _deg, gname in table.pairs:
        ra = right_derivative(a, gname)
        if ra:
            lb = left_derivative(b, aname)
            if lb:
                out = out + multiply(ra, lb)
        ra = right_derivative(a, aname)
        if ra:
            lb = left_derivative(b, gname)
            if lb:
                out = out - multiply(ra, lb)
    return out


def d_S(S: GradedPolynomial, a: GradedPolynomial) -> GradedPolynomial:
    """The twisted differential [S, -]."""
    return bracket(S, a)


def exp_ad(u: GradedPolynomial, a: GradedPolynomial, P: int) -> GradedPolynomial:
    """exp([u, -]) applied to a in the weight <= P quotient.

    Requires u of ghost degree -1 with every term containing at least
    two positive-degree factors; then each bracket application strictly
    raises both filtration weight and positive factor count, so the sum
    is finite in the quotient and exp(ad -u) is an exact inverse.
    """
    if u.is_zero():
        return truncate(a, P)
    if u.ghost_degree() != -1:
        raise ValueError("gauge generator must have ghost degree -1")
    if u.min_count() < 2:
        raise ValueError(
            "gauge generator terms need at least two positive factors")
    total = truncate(a, P)
    term = total
    k = 1
    while True:
        term = truncate(bracket(u, term), P) * Fraction(1, k)
        if term.is_zero():
            return total
        total = total + term
        k += 1
        if k > P + 2:
            raise AssertionError("exponential failed to terminate")


def antifield_lift(table: GeneratorTable, components) -> GradedPolynomial:
    """Odd ghost(-1) element representing a vector field on X.

    components lists the coefficient of d/dx_i per coordinate; the lift
    is -sum components[i] * xs_i, so bracketing with a scalar f returns
    the vector field applied to f, and the lift of a commutator is the
    bracket of the lifts.
    """
    coords = table.coordinates
    if len(components) != len(coords):
        raise ValueError("one component per coordinate required")
    out = GradedPolynomial.zero(table)
    for c, comp in zip(coords, components):
        if isinstance(comp, (int, Fraction)):
            comp = BasePolynomial.const(coords, comp)
        if comp.is_zero():
            continue
        out = out - multiply(GradedPolynomial.from_scalar(table, comp),
                             GradedPolynomial.generator(table, dual_name(c)))
    return out
