import pytest
from hypothesis import given
from hypothesis import strategies as st

from greenseq.algebra.c_matrices import initial_seed, mutate_seed
from greenseq.algebra.matrices import diagonal, identity, matmul, transpose
from greenseq.algebra.quiver_core import (
    Arrow,
    ExchangeMatrix,
    Sign,
    ValuedQuiver,
    conjugate_by_permutation,
    euler_matrix,
    exchange_from_quiver,
    infinite_type_arrows,
    infinite_type_sources,
    load_exchange,
    mutate_matrix,
    quiver_from_exchange,
    x_matrix,
)
from greenseq.core.errors import InvalidQuiverError, VertexIndexError
from greenseq.selftest import load_fixture
from strategies import exchange_matrices, matrices_with_sequences


def test_valued_quiver_matrices() -> None:
    b, q = load_fixture("valued_path")

    assert q.weights == (1, 1, 3)
    assert b.b == ((0, -1, 0), (1, 0, -3), (0, 1, 0))
    assert b.d == (1, 1, 3)
    assert euler_matrix(q) == ((1, 0, 0), (-1, 1, 0), (0, -3, 3))


def test_x_matrices_of_valued_quiver() -> None:
    b, _ = load_fixture("valued_path")

    assert x_matrix(b, 2, Sign.PLUS).matrix == ((1, 0, 0), (1, -1, 0), (0, 0, 1))
    assert x_matrix(b, 2, Sign.MINUS).matrix == ((1, 0, 0), (0, -1, 3), (0, 0, 1))


def test_mutate_matrix_double_path() -> None:
    b, _ = load_fixture("double_path")

    assert b.mutate(2).b == ((0, 1, -2), (-1, 0, 2), (2, -2, 0))


ALL_FIXTURES = [
    "a2",
    "a3_linear",
    "a3_cyclic",
    "kronecker",
    "double_path",
    "valued_path",
    "affine_a2",
]


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_quiver_exchange_round_trip(name: str) -> None:
    b, q = load_fixture(name)

    assert quiver_from_exchange(b) == q
    assert exchange_from_quiver(quiver_from_exchange(b)) == b


def test_load_exchange_accepts_matrix_format() -> None:
    b, q = load_exchange({"B": [[0, -2], [2, 0]]})

    assert b.d == (1, 1)
    assert q.arrows == (Arrow(2, 1, 2, 2),)


def test_load_exchange_rejects_unknown_shape() -> None:
    with pytest.raises(InvalidQuiverError):
        load_exchange({"something": "else"})


@pytest.mark.parametrize(
    "data",
    [
        {"n": 2, "weights": [1, 1], "arrows": [[1, 1, 1, 1]]},
        {"n": 2, "weights": [1, 1], "arrows": [[1, 3, 1, 1]]},
        {"n": 2, "weights": [1, 1], "arrows": [[1, 2, 1, 1], [2, 1, 1, 1]]},
        {"n": 2, "weights": [1, 2], "arrows": [[1, 2, 1, 1]]},
        {"n": 2, "weights": [1, 0], "arrows": []},
        {"n": 3, "weights": [1, 1], "arrows": []},
        {"n": 2, "weights": [1, 1], "arrows": [["a", 2, 1, 1]]},
    ],
    ids=["loop", "vertex-range", "two-cycle", "valuation", "weight", "n-mismatch", "malformed"],
)
def test_invalid_quivers(data: dict) -> None:
    with pytest.raises(InvalidQuiverError):
        ValuedQuiver.from_json(data)


def test_exchange_matrix_must_be_skew_symmetrizable() -> None:
    with pytest.raises(InvalidQuiverError):
        ExchangeMatrix(((0, 1), (1, 0)), (1, 1))
    with pytest.raises(InvalidQuiverError):
        ExchangeMatrix(((0, -1), (3, 0)), (1, 1))
    with pytest.raises(InvalidQuiverError):
        ExchangeMatrix(((1, 0), (0, 0)), (1, 1))


@pytest.mark.parametrize("k", [0, 3, -1])
def test_vertex_out_of_range(k: int) -> None:
    b, _ = load_fixture("kronecker")

    with pytest.raises(VertexIndexError):
        b.mutate(k)
    with pytest.raises(VertexIndexError):
        x_matrix(b, k, Sign.PLUS)


def test_infinite_type_detection() -> None:
    kron_b, kron_q = load_fixture("kronecker")
    double_path_b, double_path_q = load_fixture("double_path")
    a3_b, _ = load_fixture("a3_linear")
    ex_b, ex_q = load_fixture("valued_path")

    assert infinite_type_sources(kron_b) == {2}
    assert infinite_type_sources(double_path_b) == {3}
    assert infinite_type_sources(a3_b) == frozenset()
    assert [a.to_json() for a in infinite_type_arrows(kron_q)] == [[2, 1, 2, 2]]
    assert [a.to_json() for a in infinite_type_arrows(double_path_q)] == [[3, 2, 2, 2]]
    # d_st * d_ts = 3 is of finite type
    assert infinite_type_sources(ex_b) == frozenset()
    assert infinite_type_arrows(ex_q) == []


def test_conjugate_by_permutation() -> None:
    b, _ = load_fixture("a3_linear")

    # sigma = (1 3 2) as images (3, 1, 2)
    conj = conjugate_by_permutation(b, (3, 1, 2))
    assert conj.b == ((0, 0, 1), (0, 0, -1), (-1, 1, 0))
    assert conjugate_by_permutation(b, (1, 2, 3)) == b


@given(exchange_matrices())
def test_symmetrized_exchange_matrix(b: ExchangeMatrix) -> None:
    db = matmul(diagonal(b.d), b.b)

    assert db == tuple(tuple(-x for x in row) for row in transpose(db))
    assert exchange_from_quiver(quiver_from_exchange(b)) == b
    assert quiver_from_exchange(b).weights == b.d


def test_symmetrized_euler_form_on_unit_targets() -> None:
    # every arrow of 3 -> 2 -> 1 ends at a weight-1 vertex, so D B = E^t - E
    b, q = load_fixture("valued_path")
    e = euler_matrix(q)
    rhs = tuple(tuple(x - y for x, y in zip(r1, r2)) for r1, r2 in zip(transpose(e), e))

    assert matmul(diagonal(b.d), b.b) == rhs == ((0, -1, 0), (1, 0, -3), (0, 3, 0))



@given(exchange_matrices(), st.data())
def test_mutation_is_an_involution(b: ExchangeMatrix, data: st.DataObject) -> None:
    k = data.draw(st.integers(1, b.n))
    mutated = b.mutate(k)

    assert mutated.d == b.d
    assert mutated.mutate(k) == b


@given(exchange_matrices(), st.data())
def test_x_matrix_identities(b: ExchangeMatrix, data: st.DataObject) -> None:
    j = data.draw(st.integers(1, b.n))
    x_plus = x_matrix(b, j, Sign.PLUS).matrix
    x_minus = x_matrix(b, j, Sign.MINUS).matrix
    n = b.n

    assert matmul(x_plus, x_plus) == identity(n)
    assert matmul(x_minus, x_minus) == identity(n)
    # X^+ X^- = I + J_j B, J_j the matrix unit at (j, j)
    expected = [list(row) for row in identity(n)]
    expected[j - 1] = [expected[j - 1][c] + b.b[j - 1][c] for c in range(n)]
    assert matmul(x_plus, x_minus) == tuple(tuple(row) for row in expected)


@given(matrices_with_sequences())
def test_extended_matrix_mutation_matches_seed_mutation(case: tuple) -> None:
    b, ks = case
    extended = b.b + identity(b.n)
    seed = initial_seed(b)
    for k in ks:
        extended = mutate_matrix(extended, k)
        seed = mutate_seed(seed, k)

    assert extended[: b.n] == seed.b.b
    assert extended[b.n :] == seed.c
