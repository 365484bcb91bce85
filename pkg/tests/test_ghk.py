import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_plane
from hkperiod.errors import DomainError
from hkperiod.ghk import (
    HKLine,
    connect_chain,
    extend_positive,
    generic_line_through,
    generic_vector_in,
    hk_line_through,
    incident,
    is_generic,
    is_generic_vector,
    normalize_triple,
    sphere_point,
)
from hkperiod.lattice import diagonal
from hkperiod.linalg import is_positive_definite
from hkperiod.period import PeriodPoint, ns_rank, restricted_gram, validate_line
from hkperiod.scalars import sqrt, vector
from hkperiod.subtwistor import validate_chain

L31 = diagonal(1, 1, 1, -1)
L41 = diagonal(1, 1, 1, 1, -1)
L33 = diagonal(1, 1, 1, -1, -1, -1)


def unit(n, i):
    return vector([int(i == j) for j in range(n)])


e = [unit(4, i) for i in range(4)]
f = [unit(5, i) for i in range(5)]
W_gen = HKLine(L31, (e[0], e[1], e[2] * sqrt(2) + e[3]))


def test_is_generic_examples():
    assert is_generic(W_gen)
    assert W_gen.certificate["kernel_dim"] == 0
    assert not is_generic(HKLine(L31, (e[0], e[1], e[2])))
    # irrational basis, but W^perp is spanned by the rational vector e4
    W = HKLine(L31, (e[0], e[1] * sqrt(2) + e[2], e[1] * sqrt(3) - e[2]))
    assert not is_generic(W)
    assert W.certificate["witness"] == ["0", "0", "0", "1"]


def test_incident_examples():
    W = incident(PeriodPoint(L31, (e[0], e[1])), PeriodPoint(L31, (e[1], e[2])))
    assert W is not None and all(W.contains(x) for x in e[:3])
    assert incident(PeriodPoint(L41, (f[0], f[1])), PeriodPoint(L41, (f[2], f[3]))) is None
    with pytest.raises(DomainError) as err:
        incident(PeriodPoint(L31, (e[0], e[1])), PeriodPoint(L31, (e[1], e[0])))
    assert err.value.clause == "coincident"


def test_extend_positive_examples():
    b = extend_positive(L41, [f[0], f[1], f[2]], [f[3]])
    assert b == f[0]
    b = extend_positive(L41, [f[0], f[1], f[2]], [f[1]])
    assert b == f[1]
    with pytest.raises(DomainError) as err:
        extend_positive(L41, [f[0], f[1], f[2]], [f[4]])
    assert err.value.clause == "positivity"


@given(st.integers(0, 10**6))
@settings(max_examples=25)
def test_extend_positive_is_positive(seed):
    rng = random.Random(seed)
    W = generic_line_through(random_plane(L33, rng), seed)
    Wp = random_plane(L33, rng)
    b = extend_positive(L33, W.span, Wp.span)
    assert W.contains(b)
    assert is_positive_definite(restricted_gram(L33, [b, *Wp.span]))


def test_generic_vector_in_example():
    a = e[0] + e[1] * sqrt(2) + (e[2] * sqrt(2) + e[3]) * sqrt(3)
    assert is_generic_vector(L31, a)
    b = generic_vector_in(W_gen, seed=11)
    assert W_gen.contains(b) and is_generic_vector(L31, b)
    assert generic_vector_in(W_gen, seed=11) == b
    with pytest.raises(DomainError) as err:
        generic_vector_in(HKLine(L31, (e[0], e[1], e[2])))
    assert err.value.clause == "not-generic"


def test_generic_vector_thread_independent():
    assert generic_vector_in(W_gen, seed=5, threads=1) == generic_vector_in(W_gen, seed=5, threads=4)


def test_hk_line_through_examples():
    V = PeriodPoint(L31, (e[0], e[1]))
    assert hk_line_through(V, e[2]).span[2] == e[2]
    with pytest.raises(DomainError) as err:
        hk_line_through(V, e[3])
    assert err.value.clause == "positivity"
    assert is_generic(hk_line_through(V, e[2] * sqrt(2) + e[3]))
    with pytest.raises(DomainError) as err:
        hk_line_through(V, e[0] + e[2])
    assert err.value.clause == "not-orthogonal"


def test_sphere_point_examples():
    W = HKLine(L31, (e[0], e[1], e[2]))
    assert sphere_point(W, e[2]) == PeriodPoint(L31, (e[0], e[1]))
    assert sphere_point(W, -e[2]) == PeriodPoint(L31, (e[1], e[0]))
    assert sphere_point(W, e[0]) == PeriodPoint(L31, (e[1], e[2]))
    with pytest.raises(DomainError) as err:
        sphere_point(W, e[3])
    assert err.value.clause == "membership"


@given(st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_sphere_point_antipodal(cs):
    if not any(cs):
        return
    n = W_gen.span[0] * cs[0] + W_gen.span[1] * cs[1] + W_gen.span[2] * cs[2]
    V, Vm = sphere_point(W_gen, n), sphere_point(W_gen, -n)
    assert V.relation(Vm) == -1
    assert W_gen.contains_plane(V)


def test_normalize_triple_examples():
    l = validate_line(L31, e[0], e[1])
    T = normalize_triple(l, e[2] * 2)
    assert L31.q(T.kahler, T.kahler) == 1 and T.kahler == e[2]
    assert normalize_triple(l, e[2]).kahler == e[2]
    l2 = validate_line(L31, e[0] + e[1], e[0] - e[1])
    T = normalize_triple(l2, e[2])
    assert T.kahler == e[2] * sqrt(2)
    assert L31.q(T.kahler, T.kahler) == 2


def test_connect_chain_trivial_cases():
    V = PeriodPoint(L33, (unit(6, 0), unit(6, 1)))
    c = connect_chain(V, V)
    assert len(c) == 0 and validate_chain(c)
    c = connect_chain(V, V.reversed(), seed=2)
    assert len(c) == 1 and validate_chain(c)


def test_connect_chain_single_line():
    W = generic_line_through(PeriodPoint(L33, (unit(6, 0), unit(6, 1))), seed=4)
    V1 = sphere_point(W, W.span[0] + W.span[2])
    V2 = sphere_point(W, W.span[1] * 3 - W.span[2])
    c = connect_chain(V1, V2)
    assert len(c) == 1 and validate_chain(c)


@given(st.integers(0, 10**6))
@settings(max_examples=8)
def test_connect_chain_random(seed):
    rng = random.Random(seed)
    Vx, Vy = random_plane(L33, rng), random_plane(L33, rng)
    c = connect_chain(Vx, Vy, seed=seed)
    report = validate_chain(c)
    assert report, report
    assert len(c) <= 4
    for W in c.lines:
        assert is_generic(W)
    if len(c) == 4:
        # the first two junctions contain the generic vector a
        for s in c.junctions[:2]:
            assert ns_rank(s)[0] == 0


def test_connect_chain_signature_guard():
    L = diagonal(1, 1, -1, -1)
    V = PeriodPoint(L, (unit(4, 0), unit(4, 1)))
    with pytest.raises(DomainError) as err:
        connect_chain(V, PeriodPoint(L, (unit(4, 1), unit(4, 0) * 2)))
    assert err.value.clause == "signature"
