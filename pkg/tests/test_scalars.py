from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from hkperiod.errors import DomainError
from hkperiod.lattice import diagonal
from hkperiod.scalars import (
    AlgebraicScalar,
    FieldSpec,
    approx_value,
    rational_kernel,
    scalar,
    sign_of,
    sqrt,
    sqrt_scalar,
    vector,
)

F235 = FieldSpec((2, 3, 5))

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def scalars(draw, field=F235):
    return AlgebraicScalar(field, {S: draw(fractions) for S in field.monomials()})


def as_sympy(x: AlgebraicScalar):
    """Independent oracle: the same number as a sympy expression."""
    return sum((sympy.Rational(v.numerator, v.denominator) * sympy.sqrt(sympy.prod(S))
                for S, v in x.coeffs.items()), sympy.Integer(0))


def sympy_sign(expr) -> int:
    val = sympy.N(expr, 80)
    if abs(val) < sympy.Float(10) ** -60:
        return 0 if sympy.simplify(expr) == 0 else int(sympy.sign(val))
    return int(sympy.sign(val))


def test_sign_examples():
    assert sign_of(Fraction(3, 2) - sqrt(2)) == 1
    assert sign_of(scalar(0)) == 0
    assert sign_of(sqrt(2) + sqrt(3) - sqrt(10)) == -1


def test_sign_of_tiny_difference():
    # 1/(sqrt 3 + sqrt 2) = sqrt 3 - sqrt 2, a near-cancellation at height 10^6
    x = sqrt(3) - sqrt(2) - Fraction(317837, 1000000)
    assert sign_of(x) == sympy_sign(sympy.sqrt(3) - sympy.sqrt(2) - sympy.Rational(317837, 10**6))


@given(scalars())
def test_sign_matches_sympy(x):
    assert sign_of(x) == sympy_sign(as_sympy(x))


@given(scalars(), scalars())
def test_sign_multiplicative(x, y):
    assert sign_of(x * y) == sign_of(x) * sign_of(y)


@given(scalars(), scalars())
def test_field_axioms(x, y):
    assert (x + y) - y == x
    assert x * y == y * x
    if x:
        assert x * x.inverse() == 1
        assert (y / x) * x == y


@given(scalars())
def test_inverse_against_sympy(x):
    if not x:
        return
    err = sympy.N(as_sympy(x.inverse()) - 1 / as_sympy(x), 50)
    assert abs(err) < 1e-40


def test_mixed_fields_join():
    x = sqrt(2) + sqrt(7)
    y = sqrt(14)
    assert x * x == 9 + 2 * y
    assert (sqrt(6) * sqrt(3)) == 3 * sqrt(2)


def test_approx_value_examples():
    assert abs(approx_value(sqrt(2), Fraction(1, 10**6)) - 1.414214) < 1e-6
    assert abs(approx_value(scalar("1/3"), Fraction(1, 10**6)) - 0.333333) < 1e-6
    assert approx_value(scalar(0)) == 0.0


@given(scalars(), st.integers(2, 12))
def test_approx_value_refines(x, k):
    eps = Fraction(1, 10**k)
    a, b = approx_value(x, eps), approx_value(x, eps / 10)
    assert abs(a - b) < 2 * eps
    assert abs(a - float(sympy.N(as_sympy(x), 30))) <= float(eps) * 1.01 + 1e-15


@given(scalars())
def test_sqrt_scalar_squares(x):
    y = x * x
    r = sqrt_scalar(y)
    assert r * r == y
    assert sign_of(r) >= 0


def test_sqrt_scalar_extends_field():
    r = sqrt_scalar(scalar(8))
    assert r == 2 * sqrt(2)
    # 3 + 2 sqrt 2 = (1 + sqrt 2)^2
    assert sqrt_scalar(3 + 2 * sqrt(2)) == 1 + sqrt(2)


def test_sqrt_scalar_not_representable():
    # 1 + sqrt 2 is not a square in any multi-quadratic field
    with pytest.raises(DomainError) as err:
        sqrt_scalar(1 + sqrt(2))
    assert err.value.clause == "not-representable"


def test_field_spec_invariants():
    assert F235.degree == 8
    assert len(F235.monomials()) == 8
    with pytest.raises(ValueError):
        FieldSpec((5, 2))  # radicands are kept sorted
    with pytest.raises(ValueError):
        FieldSpec((2, 8))  # 8 = 2 * 2^2 is not square-free
    with pytest.raises(ValueError):
        FieldSpec((2, 3, 6))  # dependent modulo squares


def test_rational_kernel_examples():
    I2 = diagonal(1, 1)
    assert rational_kernel([vector(sqrt(2), 1)], I2) == []
    (k,) = rational_kernel([vector(1, 1)], I2)
    assert k[0] == -k[1] != 0
    assert rational_kernel([], I2) == [(1, 0), (0, 1)]


@given(st.lists(scalars(FieldSpec((2, 3))), min_size=4, max_size=4),
       st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_rational_kernel_resubstitution(entries, rat):
    L = diagonal(1, 1, -1, 2)
    cons = [vector(entries), vector(rat)]
    basis = rational_kernel(cons, L)
    for k in basis:
        x = vector(k)
        assert all(L.q(x, c) == 0 for c in cons)
    # order independence
    assert rational_kernel(cons[::-1], L) == basis
    # dimension oracle via sympy: expand every constraint into rational rows
    rows = []
    for c in cons:
        Gc = [c[i] * L.gram[i][i] for i in range(4)]
        for S in FieldSpec((2, 3)).monomials():
            rows.append([sympy.Rational(str(g.lift(FieldSpec((2, 3))).coeffs.get(S, 0)))
                         for g in Gc])
    assert len(basis) == 4 - sympy.Matrix(rows).rank()
