import itertools
import json
import random

import pytest

from quiverhall import linalg as la
from quiverhall.coeff_arith import QQ, PrimeField
from quiverhall.errors import BudgetExceeded
from quiverhall.linalg import Matrix
from quiverhall.nakajima import (
    DoubleRepPoint,
    FramedPoint,
    epsilon,
    framed_points,
    is_nilpotent,
    is_stable,
    lambda_points,
    load_point,
    moment_map,
    symplectic_form,
)
from quiverhall.quiver import Quiver, double, kronecker_quiver, linear_quiver

from oracles import brute_is_stable, brute_nilpotent

A2 = linear_quiver(2)
DA2 = double(A2)


def random_point(dq, F, dims, rng):
    maps = {}
    Q = dq.quiver
    for a in Q.arrows:
        m, n = dims[Q.vertex_index(a.head)], dims[Q.vertex_index(a.tail)]
        maps[a.name] = [[F.random_element(rng) for _ in range(n)] for _ in range(m)]
    return DoubleRepPoint.build(dq, F, dims, maps)


def random_invertible(F, n, rng):
    while True:
        m = Matrix.from_rows([[F.random_element(rng) for _ in range(n)] for _ in range(n)], n)
        if la.is_invertible(F, m):
            return m


def act(g, x):
    """(g.x)_rho = g_h x_rho g_t^-1."""
    F = x.field
    Q = x.dq.quiver
    maps = {}
    for a in Q.arrows:
        t, h = Q.vertex_index(a.tail), Q.vertex_index(a.head)
        m = la.matmul(F, la.matmul(F, g[h], x.map(a.name)), la.inverse(F, g[t]) if g[t].nrows else g[t])
        maps[a.name] = [list(r) for r in m.rows]
    return DoubleRepPoint.build(x.dq, F, x.dims, maps)


def ab_point(F, a, b):
    return DoubleRepPoint.build(DA2, F, (1, 1), {"a1": [[a]], "a1_bar": [[b]]})


CASES = [
    (double(A2), (1, 2)),
    (double(linear_quiver(3)), (1, 2, 1)),
    (double(kronecker_quiver()), (2, 1)),
    (double(Quiver.build([1, 2, 3], [("x", 1, 2), ("y", 3, 2)])), (1, 1, 2)),
]


def test_epsilon():
    assert epsilon(DA2, "a1") == 1
    assert epsilon(DA2, "a1_bar") == -1
    with pytest.raises(KeyError):
        epsilon(DA2, "zzz")


def test_symplectic_example():
    rng = random.Random(0)
    for _ in range(30):
        a, b, c, d = (QQ.random_element(rng) for _ in range(4))
        assert symplectic_form(ab_point(QQ, a, b), ab_point(QQ, c, d)) == a * d - b * c


@pytest.mark.parametrize("dq,dims", CASES)
def test_symplectic_antisymmetric_and_bilinear(dq, dims):
    rng = random.Random(1)
    F = PrimeField(5)
    for _ in range(50):
        x, y, z = (random_point(dq, F, dims, rng) for _ in range(3))
        assert symplectic_form(x, y) == F.neg(symplectic_form(y, x))
        assert symplectic_form(x, x) == 0
        s = DoubleRepPoint(dq, type(x.rep)(x.rep.quiver, F, dims, tuple(la.add(F, m, n) for m, n in zip(y.rep.maps, z.rep.maps))))
        assert symplectic_form(x, s) == F.add(symplectic_form(x, y), symplectic_form(x, z))


def test_symplectic_omega_only_pairs_vanish():
    rng = random.Random(2)
    dq, dims = CASES[1]
    F = PrimeField(7)
    for _ in range(20):
        x, y = random_point(dq, F, dims, rng), random_point(dq, F, dims, rng)
        keep = {a.name for a in dq.base.arrows}
        xo = DoubleRepPoint.build(dq, F, dims, {n: [list(r) for r in x.map(n).rows] for n in keep})
        yo = DoubleRepPoint.build(dq, F, dims, {n: [list(r) for r in y.map(n).rows] for n in keep})
        assert symplectic_form(xo, yo) == 0


@pytest.mark.parametrize("dq,dims", CASES[:3])
def test_symplectic_nondegenerate(dq, dims):
    F = QQ
    Q = dq.quiver
    n = sum(dims[Q.vertex_index(a.head)] * dims[Q.vertex_index(a.tail)] for a in Q.arrows)
    basis = []
    for k in range(n):
        entries = [0] * n
        entries[k] = 1
        basis.append(DoubleRepPoint.from_entries(dq, F, dims, [F.from_int(e) for e in entries]))
    gram = Matrix.from_rows([[symplectic_form(x, y) for y in basis] for x in basis], n)
    assert la.rank(F, gram) == n


def test_moment_map_examples():
    psi = moment_map(ab_point(QQ, 2, 3))
    assert psi[0].rows == ((-6,),)
    assert psi[1].rows == ((6,),)
    zero = moment_map(DoubleRepPoint.build(DA2, QQ, (1, 1)))
    assert all(m.is_zero(QQ) for m in zero)


@pytest.mark.parametrize("dq,dims", CASES)
def test_moment_map_trace_and_equivariance(dq, dims):
    rng = random.Random(3)
    F = PrimeField(7)
    for _ in range(20):
        x = random_point(dq, F, dims, rng)
        psi = moment_map(x)
        total = 0
        for m in psi:
            total += sum(m.rows[k][k] for k in range(m.nrows))
        assert total % 7 == 0
        g = [random_invertible(F, d, rng) if d else Matrix.zeros(F, 0, 0) for d in dims]
        psi_g = moment_map(act(g, x))
        for k, d in enumerate(dims):
            if d:
                want = la.matmul(F, la.matmul(F, g[k], psi[k]), la.inverse(F, g[k]))
                assert psi_g[k] == want


def test_nilpotent_examples():
    assert is_nilpotent(DoubleRepPoint.build(DA2, QQ, (1, 1)))
    assert not is_nilpotent(ab_point(QQ, 1, 1))
    assert is_nilpotent(ab_point(QQ, 1, 0))


def test_nilpotency_is_not_nilpotency_of_the_sum():
    # the sum of all arrow maps is nilpotent here, yet a1_bar a1 repeats forever
    dq = double(kronecker_quiver())
    x = DoubleRepPoint.build(dq, QQ, (1, 1), {"a1": [[1]], "a2": [[1]], "a1_bar": [[1]], "a2_bar": [[-1]]})
    total = la.add(QQ, Matrix.from_rows([[0, 1 - 1], [1 + 1, 0]], 2), Matrix.zeros(QQ, 2, 2))
    assert la.matpow(QQ, total, 2).is_zero(QQ)
    assert not is_nilpotent(x)
    assert not brute_nilpotent(x)


@pytest.mark.parametrize("dq,dims,p", [(DA2, (1, 1), 3), (DA2, (1, 2), 2), (double(linear_quiver(3)), (1, 1, 1), 2)])
def test_nilpotency_matches_path_oracle_exhaustively(dq, dims, p):
    F = PrimeField(p)
    Q = dq.quiver
    n = sum(dims[Q.vertex_index(a.head)] * dims[Q.vertex_index(a.tail)] for a in Q.arrows)
    for entries in itertools.product(range(p), repeat=n):
        x = DoubleRepPoint.from_entries(dq, F, dims, entries)
        assert is_nilpotent(x) == brute_nilpotent(x)


def test_lambda_counts():
    assert len(lambda_points(A2, (1, 1), 2)) == 3
    assert len(lambda_points(A2, (1, 1), 3)) == 5
    assert len(lambda_points(A2, (0, 0), 2)) == 1
    pts = lambda_points(A2, (1, 1), 2)
    assert [p.rep.entries() for p in pts] == [(0, 0), (0, 1), (1, 0)]


def test_lambda_budget():
    with pytest.raises(BudgetExceeded):
        lambda_points(A2, (2, 2), 3, budget=100)


@pytest.mark.parametrize("Q,dims,p", [(A2, (1, 2), 2), (linear_quiver(3), (1, 1, 1), 2), (A2, (2, 1), 3)])
def test_lambda_closed_under_base_change(Q, dims, p):
    F = PrimeField(p)
    pts = lambda_points(Q, dims, p)
    keys = {x.rep.entries() for x in pts}
    rng = random.Random(4)
    for x in pts:
        for _ in range(3):
            g = [random_invertible(F, d, rng) if d else Matrix.zeros(F, 0, 0) for d in dims]
            assert act(g, x).rep.entries() in keys
        # dropping the reversed arrows stays inside Lambda_V
        dq = x.dq
        keep = {a.name: [list(r) for r in x.map(a.name).rows] for a in dq.base.arrows}
        assert DoubleRepPoint.build(dq, F, dims, keep).rep.entries() in keys


def test_stability_examples():
    P = Quiver.build([1])
    dq = double(P)
    F = PrimeField(2)
    x = DoubleRepPoint.build(dq, F, (1,))
    assert not is_stable(FramedPoint.build(x, (1,), {}))
    assert is_stable(FramedPoint.build(x, (1,), {"1": [[1]]}))
    empty = DoubleRepPoint.build(dq, F, (0,))
    assert is_stable(FramedPoint.build(empty, (1,), {}))


@pytest.mark.parametrize("Q,v,w,p", [
    (A2, (1, 1), (1, 0), 2),
    (A2, (1, 1), (1, 1), 2),
    (A2, (2, 1), (1, 1), 2),
    (A2, (1, 1), (0, 1), 3),
    (linear_quiver(3), (1, 1, 1), (0, 1, 0), 2),
    (kronecker_quiver(), (1, 1), (1, 1), 2),
])
def test_stability_matches_subspace_oracle(Q, v, w, p):
    pts = framed_points(Q, v, w, p)
    for fp in pts:
        assert is_stable(fp) == brute_is_stable(fp)


def test_a2_stable_count():
    pts = framed_points(A2, (1, 1), (1, 0), 2)
    assert len(pts) == 8
    # stable exactly when t != 0 and the reversed arrow is nonzero
    stable = [fp for fp in pts if is_stable(fp)]
    assert len(stable) == 2
    for fp in stable:
        assert fp.framing[0].rows == ((1,),)
        assert fp.point.map("a1_bar").rows == ((1,),)


def test_framed_point_json_round_trip():
    rng = random.Random(5)
    F = PrimeField(3)
    x = random_point(DA2, F, (2, 1), rng)
    fp = FramedPoint.build(x, (1, 2), {"1": [[1, 2]], "2": [[1], [0]]})
    back = load_point(json.dumps(fp.to_json()))
    assert back == fp
    assert "framing" in fp.to_json()


def test_framing_shape_checked():
    x = DoubleRepPoint.build(DA2, QQ, (1, 1))
    with pytest.raises(ValueError):
        FramedPoint(x, (1, 0), (Matrix.zeros(QQ, 2, 1), Matrix.zeros(QQ, 0, 1)))
