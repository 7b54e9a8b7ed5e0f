"""Slow, independent reference implementations used only by the tests.

Nothing here shares code paths with the orbit tables, the pruned subspace
walk or the kernel fixpoint in the library: subspaces are enumerated as
explicit sets of vectors and classes are separated with is_isomorphic.
"""

import itertools

from quiverhall import linalg as la
from quiverhall.linalg import Matrix
from quiverhall.representation import Rep, is_isomorphic


def vectors(p, n):
    return list(itertools.product(range(p), repeat=n))


def span_set(p, gens, n):
    out = set()
    for coeffs in itertools.product(range(p), repeat=len(gens)):
        out.add(tuple(sum(c * g[i] for c, g in zip(coeffs, gens)) % p for i in range(n)))
    return frozenset(out)


def all_subspaces(p, n, k):
    """Every k-dim subspace of F_p^n as a frozenset of its vectors."""
    found = set()
    for gens in itertools.combinations(vectors(p, n), k):
        s = span_set(p, list(gens), n)
        if len(s) == p**k:
            found.add(s)
    return sorted(found, key=sorted)


def apply(p, m: Matrix, v):
    return tuple(sum(a * b for a, b in zip(row, v)) % p for row in m.rows)


def graded_subspaces(p, dims, sub_dims):
    return itertools.product(*(all_subspaces(p, n, k) for n, k in zip(dims, sub_dims)))


def is_x_stable(V: Rep, S):
    p = V.field.p
    Q = V.quiver
    for a, m in zip(Q.arrows, V.maps):
        t, h = Q.vertex_index(a.tail), Q.vertex_index(a.head)
        if any(apply(p, m, v) not in S[h] for v in S[t]):
            return False
    return True


def _basis_of(p, S, n):
    """Greedy basis of a subspace given as a vector set."""
    basis = []
    current = span_set(p, [], n)
    for v in sorted(S):
        if v not in current:
            basis.append(v)
            current = span_set(p, basis, n)
    return basis


def _coords(p, basis, v, n):
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        if tuple(sum(c * b[i] for c, b in zip(coeffs, basis)) % p for i in range(n)) == tuple(v):
            return coeffs
    raise AssertionError("vector outside span")


def sub_and_quotient(V: Rep, S):
    """The subrepresentation on S and the quotient V/S, via explicit bases."""
    p = V.field.p
    Q = V.quiver
    sub_bases, full_bases = [], []
    for n, s in zip(V.dims, S):
        b = _basis_of(p, s, n)
        full = list(b)
        span = span_set(p, full, n)
        for i in range(n):
            e = tuple(int(i == j) for j in range(n))
            if e not in span:
                full.append(e)
                span = span_set(p, full, n)
        sub_bases.append(b)
        full_bases.append(full)
    sub_maps, quo_maps = {}, {}
    for a, m in zip(Q.arrows, V.maps):
        t, h = Q.vertex_index(a.tail), Q.vertex_index(a.head)
        kt, kh = len(sub_bases[t]), len(sub_bases[h])
        cols_sub, cols_quo = [], []
        for j, b in enumerate(full_bases[t]):
            c = _coords(p, full_bases[h], apply(p, m, b), V.dims[h])
            if j < kt:
                cols_sub.append(c[:kh])
            else:
                cols_quo.append(c[kh:])
        sub_maps[a.name] = [[col[r] for col in cols_sub] for r in range(kh)]
        quo_maps[a.name] = [[col[r] for col in cols_quo] for r in range(V.dims[h] - kh)]
    sub_dims = [len(b) for b in sub_bases]
    quo_dims = [n - k for n, k in zip(V.dims, sub_dims)]
    return (
        Rep.build(Q, V.field, sub_dims, sub_maps),
        Rep.build(Q, V.field, quo_dims, quo_maps),
    )


def hall_number(V: Rep, V1: Rep, V2: Rep):
    """#{W <= V : V/W ~ V1, W ~ V2} by brute force."""
    p = V.field.p
    count = 0
    for S in graded_subspaces(p, V.dims, V2.dims):
        if not is_x_stable(V, S):
            continue
        W, quotient = sub_and_quotient(V, S)
        if is_isomorphic(W, V2) and is_isomorphic(quotient, V1):
            count += 1
    return count


def all_reps(Q, field, dims):
    n = sum(
        dims[Q.vertex_index(a.head)] * dims[Q.vertex_index(a.tail)] for a in Q.arrows
    )
    for entries in itertools.product(range(field.p), repeat=n):
        yield Rep.from_entries(Q, field, dims, entries)


def iso_partition(Q, field, dims):
    """Classes of all representations, separated pairwise by is_isomorphic."""
    reps = []
    for V in all_reps(Q, field, dims):
        if not any(is_isomorphic(V, W) for W in reps):
            reps.append(V)
    return reps


def brute_is_stable(fp):
    """No nonzero graded S, x-stable and inside every ker t_i."""
    x = fp.point
    V = x.rep
    p = V.field.p
    for sub_dims in itertools.product(*(range(d + 1) for d in V.dims)):
        if not any(sub_dims):
            continue
        for S in graded_subspaces(p, V.dims, sub_dims):
            if not is_x_stable(V, S):
                continue
            if all(
                all(not any(apply(p, t, v)) for v in s) for t, s in zip(fp.framing, S)
            ):
                return False
    return True


def brute_nilpotent(x):
    """All composites of arrow matrices of length 1 + sum(v) vanish."""
    from quiverhall.quiver import enumerate_paths

    Q = x.dq.quiver
    F = x.field
    n = 1 + sum(x.dims)
    for path in enumerate_paths(Q, n):
        if path.length != n:
            continue
        m = None
        for name in path.arrows:
            am = x.map(name)
            m = am if m is None else la.matmul(F, m, am)
        if not m.is_zero(F):
            return False
    return True
