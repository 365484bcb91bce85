import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hkperiod.errors import DomainError
from hkperiod.lattice import (
    FujikiData,
    QuadLattice,
    catalog_lookup,
    diagonal,
    direct_sum,
    fujiki_value,
    gram_eval,
)
from hkperiod.scalars import sqrt, vector


def numeric_signature(L):
    """Oracle: count signs of floating eigenvalues."""
    ev = np.linalg.eigvalsh(np.array(L.gram, dtype=float))
    return int((ev > 1e-9).sum()), int((ev < -1e-9).sum())


@st.composite
def small_lattices(draw, max_rank=5):
    n = draw(st.integers(1, max_rank))
    G = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            G[i][j] = G[j][i] = draw(st.integers(-4, 4))
    try:
        return QuadLattice(tuple(map(tuple, G)))
    except DomainError:
        return diagonal(*[2] * n)


def test_gram_eval_examples():
    U = catalog_lookup("U")
    assert gram_eval(U, vector(1, 0), vector(0, 1)) == 1
    assert gram_eval(diagonal(2, -2), vector(1, 1), vector(1, 1)) == 0
    x = vector(0, 0, sqrt(2), 1)
    assert gram_eval(diagonal(1, 1, 1, -1), x, x) == 1


def test_signature_examples():
    assert catalog_lookup("U").signature == (1, 1)
    assert diagonal(1, 1, 1, -1).signature == (3, 1)
    K3 = catalog_lookup("K3")
    assert (K3.rank, K3.signature) == (22, (3, 19))


@given(small_lattices())
def test_signature_matches_eigenvalues(L):
    assert L.signature == numeric_signature(L)
    assert sum(L.signature) == L.rank


@given(small_lattices(), small_lattices())
def test_signature_additive(A, B):
    S = direct_sum(A, B)
    assert S.signature == tuple(a + b for a, b in zip(A.signature, B.signature))
    assert S.determinant == A.determinant * B.determinant


@given(small_lattices(), st.data())
def test_gram_eval_symmetric(L, data):
    ints = st.lists(st.integers(-5, 5), min_size=L.rank, max_size=L.rank)
    x, y = vector(data.draw(ints)), vector(data.draw(ints))
    assert gram_eval(L, x, y) == gram_eval(L, y, x)
    assert gram_eval(L, x, y) == int(np.array(x.to_floats()) @ np.array(L.gram) @ np.array(y.to_floats()))


def test_direct_sum_examples():
    U = catalog_lookup("U")
    assert direct_sum(U, U).signature == (2, 2)
    assert direct_sum(U, diagonal(-2)).signature == (1, 2)
    E = catalog_lookup("E8neg")
    K = direct_sum(U, U, U, E, E)
    assert K.rank == 22 and K.is_even and K == catalog_lookup("K3")


def test_catalog_entries():
    E = catalog_lookup("E8neg")
    assert E.signature == (0, 8) and E.determinant == 1 and E.is_even
    K3n = catalog_lookup("K3n", 3)
    assert (K3n.rank, K3n.signature) == (23, (3, 20))
    # <-4> is an orthogonal summand: the last basis vector
    assert K3n.gram[-1][-1] == -4 and all(K3n.gram[-1][j] == 0 for j in range(22))
    assert catalog_lookup("rank1", 2).gram == ((2,),)
    assert catalog_lookup("Kummer", 2).signature == (3, 4)


def test_catalog_errors():
    for key, param in [("nope", None), ("K3n", 1), ("Kummer", None), ("rank1", 3), ("rank1", 0)]:
        with pytest.raises(DomainError) as err:
            catalog_lookup(key, param)
        assert err.value.clause in ("unknown-key", "invalid-parameter")


def test_catalog_override(tmp_path, monkeypatch):
    (tmp_path / "U.json").write_text(json.dumps({"name": "U", "gram": [[0, 1], [1, 0]]}))
    monkeypatch.setenv("HK_CATALOG_DIR", str(tmp_path))
    assert catalog_lookup("U").gram == ((0, 1), (1, 0))
    (tmp_path / "U.json").write_text(json.dumps({"name": "U", "gram": [[2, 0], [0, 2]]}))
    with pytest.raises(DomainError) as err:
        catalog_lookup("U")
    assert err.value.clause == "signature"


def test_invalid_grams():
    with pytest.raises(DomainError):
        QuadLattice(((1, 2), (3, 1)))
    with pytest.raises(DomainError) as err:
        QuadLattice(((1, 1), (1, 1)))
    assert err.value.clause == "degenerate"


def test_fujiki_examples():
    U = catalog_lookup("U")
    eta = vector(1, 1)  # q = 2
    assert fujiki_value(U, eta, FujikiData(1, 2)) == 4
    assert fujiki_value(U, eta, FujikiData(3, 2)) == 12
    assert fujiki_value(U, vector(1, 0), FujikiData(5, 3)) == 0


@given(st.lists(st.integers(-4, 4), min_size=2, max_size=2),
       st.fractions(-5, 5, max_denominator=7), st.integers(1, 4))
def test_fujiki_symmetries(xs, c, n):
    U = catalog_lookup("U")
    eta = vector(xs)
    v = fujiki_value(U, eta, FujikiData(c, 2 * n - 1))
    assert fujiki_value(U, eta, FujikiData(-c, 2 * n - 1)) == -v
    assert fujiki_value(U, -eta, FujikiData(c, 2 * n - 1)) == v
    assert v == c * (2 * xs[0] * xs[1]) ** (2 * n - 1)


def test_lattice_json_round_trip():
    L = catalog_lookup("K3n", 2)
    assert QuadLattice.from_json(L.to_json()) == L
    assert math.isclose(abs(L.determinant), 2)
