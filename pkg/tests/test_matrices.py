import pytest
from hypothesis import given
from hypothesis import strategies as st

from greenseq.algebra.matrices import (
    determinant,
    from_sympy,
    identity,
    matmul,
    to_sympy,
    unimodular_inverse,
)
from greenseq.algebra.quiver_core import Sign, x_matrix
from greenseq.core.errors import InvariantViolation, NonIntegralError
from strategies import exchange_matrices


@st.composite
def x_matrix_products(draw: st.DrawFn) -> tuple:
    b = draw(exchange_matrices())
    factors = draw(
        st.lists(
            st.tuples(st.integers(1, b.n), st.sampled_from([Sign.PLUS, Sign.MINUS])),
            min_size=1,
            max_size=8,
        )
    )
    return matmul(identity(b.n), *(x_matrix(b, k, sign).matrix for k, sign in factors))


@given(x_matrix_products())
def test_unimodular_inverse_of_x_products(m: tuple) -> None:
    inv = unimodular_inverse(m)

    assert matmul(inv, m) == identity(len(m))
    assert matmul(m, inv) == identity(len(m))
    assert determinant(m) in (1, -1)


def test_unimodular_inverse_small_cases() -> None:
    assert unimodular_inverse(((-1,),)) == ((-1,),)
    assert unimodular_inverse(((1, 1), (0, 1))) == ((1, -1), (0, 1))
    assert unimodular_inverse(()) == ()


def test_unimodular_inverse_rejects_other_determinants() -> None:
    with pytest.raises(InvariantViolation):
        unimodular_inverse(((2, 0), (0, 1)))


def test_from_sympy_refuses_fractions() -> None:
    half = to_sympy(((2, 0), (0, 1))).inv()

    with pytest.raises(NonIntegralError):
        from_sympy(half, "half")
    assert from_sympy(to_sympy(((3, -4), (0, 1)))) == ((3, -4), (0, 1))
