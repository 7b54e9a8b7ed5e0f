import itertools
import random
from fractions import Fraction

import pytest
import sympy
from sympy import GF
from sympy.polys.matrices import DomainMatrix

from quiverhall import linalg as la
from quiverhall.coeff_arith import QQ, PrimeField
from quiverhall.linalg import Matrix

from oracles import all_subspaces, span_set


def random_matrix(F, m, n, rng):
    return Matrix.from_rows([[F.random_element(rng) for _ in range(n)] for _ in range(m)], n)


def to_sympy(F, a):
    return sympy.Matrix(a.nrows, a.ncols, lambda i, j: a.rows[i][j])


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_rank_matches_sympy(p):
    F = PrimeField(p)
    rng = random.Random(p)
    for _ in range(30):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        a = random_matrix(F, m, n, rng)
        dm = DomainMatrix.from_list_sympy(m, n, to_sympy(F, a).tolist()).convert_to(GF(p))
        assert la.rank(F, a) == dm.rank()


@pytest.mark.parametrize("p", [2, 3, 5])
def test_nullspace_is_kernel(p):
    F = PrimeField(p)
    rng = random.Random(10 + p)
    for _ in range(30):
        m, n = rng.randint(1, 4), rng.randint(1, 5)
        a = random_matrix(F, m, n, rng)
        kernel = la.nullspace(F, a)
        assert len(kernel) == n - la.rank(F, a)
        for v in kernel:
            assert not any(la.matvec(F, a, v))


def test_inverse_and_det_over_q():
    rng = random.Random(3)
    for _ in range(20):
        a = random_matrix(QQ, 3, 3, rng)
        d = la.det(QQ, a)
        assert d == Fraction(to_sympy(QQ, a).det())
        if d:
            assert la.matmul(QQ, a, la.inverse(QQ, a)) == Matrix.identity(QQ, 3)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_charpoly_matches_sympy(p):
    F = PrimeField(p)
    rng = random.Random(20 + p)
    x = sympy.Symbol("x")
    for _ in range(20):
        n = rng.randint(1, 5)
        a = random_matrix(F, n, n, rng)
        ours = la.charpoly(F, a)
        ref = sympy.Poly(to_sympy(F, a).charpoly(x).as_expr(), x, modulus=p)
        want = [int(c) % p for c in reversed(ref.all_coeffs())]
        assert ours == want
        # Cayley-Hamilton
        assert la.poly_of_matrix(F, ours, a).is_zero(F)


def test_factor_poly_over_f2():
    F = PrimeField(2)
    # x^2 + x + 1 is irreducible, (x+1)^2 = x^2 + 1
    assert la.factor_poly(F, [1, 1, 1]) == [([1, 1, 1], 1)]
    assert la.factor_poly(F, [1, 0, 1]) == [([1, 1], 2)]


@pytest.mark.parametrize("p,n,k", [(2, 3, 1), (2, 3, 2), (3, 3, 1), (2, 4, 2), (3, 2, 1), (2, 2, 0)])
def test_subspaces_enumeration(p, n, k):
    ours = list(la.subspaces(p, n, k))
    assert len(ours) == la.gaussian_binomial(n, k, p)
    as_sets = {span_set(p, [list(r) for r in rows], n) for rows, _ in ours}
    assert len(as_sets) == len(ours)
    assert as_sets == set(all_subspaces(p, n, k))
    for rows, pivots in ours:
        for r, pc in zip(rows, pivots):
            assert r[pc] == 1
            assert all(rows[o][pc] == 0 for o in range(len(rows)) if rows[o] is not r)


def test_gaussian_binomial_values():
    assert la.gaussian_binomial(2, 1, 2) == 3
    assert la.gaussian_binomial(3, 1, 3) == 13
    assert la.gaussian_binomial(4, 2, 2) == 35
    assert la.gaussian_binomial(3, 4, 2) == 0


def test_reduce_mod_and_in_span():
    F = PrimeField(5)
    rows, piv = la.rref(F, [[1, 2, 3], [2, 4, 1]], 3)
    for v in itertools.product(range(5), repeat=3):
        r = la.reduce_mod(F, rows, piv, v)
        assert all(r[pc] == 0 for pc in piv)
        assert la.in_span(F, rows, piv, v) == (not any(r))
