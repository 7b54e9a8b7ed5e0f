"""Quiver representations over a field.

Morphism spaces are solved as linear systems. Decompositions come from
endomorphisms: an idempotent, or a characteristic polynomial with two
coprime factors, splits a representation into subrepresentations. When no
split turns up, locality of the endomorphism ring is certified before a
representation is declared indecomposable.

Isomorphism classes over F_p are enumerated as orbits of the base-change
group on the whole representation space. The group acts linearly, so the
image of every point under each group generator is computed in bulk with
numpy and orbits are the connected components of the resulting graph.
"""

from __future__ import annotations

import itertools
import json
import os
import random
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import linalg as la
from .coeff_arith import PrimeField, field_from_name
from .errors import BudgetExceeded, FieldNotSplitting, InvariantViolation, Undecided
from .linalg import Matrix
from .quiver import Quiver, enumerate_paths, quiver_from_json

DEFAULT_BUDGET = 10**6
EXHAUSTIVE_END_LIMIT = 4096
ISO_TRIALS = 256
CERTIFY_TRIALS = 32


def default_budget() -> int:
    env = os.environ.get("QUIVERHALL_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


@dataclass(frozen=True)
class Rep:
    """Dimension vector plus one ``dims[h] x dims[t]`` matrix per arrow.

    ``dims`` follows the quiver's vertex order and ``maps`` its arrow order.
    """

    quiver: Quiver
    field: object
    dims: tuple[int, ...]
    maps: tuple[Matrix, ...]

    def __post_init__(self):
        Q = self.quiver
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if len(self.dims) != Q.n_vertices or any(d < 0 for d in self.dims):
            raise ValueError("dimension vector does not match the quiver")
        if len(self.maps) != len(Q.arrows):
            raise ValueError("need one matrix per arrow")
        for a, m in zip(Q.arrows, self.maps):
            want = (self.dim(a.head), self.dim(a.tail))
            if m.shape != want:
                raise ValueError(f"map {a.name} has shape {m.shape}, expected {want}")

    @classmethod
    def build(cls, Q: Quiver, field, dims, maps: Mapping[str, Sequence[Sequence]] | None = None) -> Rep:
        """Dims as a sequence (vertex order) or a vertex->int mapping; absent
        maps are zero."""
        if isinstance(dims, Mapping):
            named = {str(k): int(d) for k, d in dims.items()}
            dims = [named.get(v, 0) for v in Q.vertices]
        dims = tuple(dims)
        maps = maps or {}
        mats = []
        for a in Q.arrows:
            m, n = dims[Q.vertex_index(a.head)], dims[Q.vertex_index(a.tail)]
            if a.name in maps:
                rows = [[field.parse(x) for x in r] for r in maps[a.name]]
                if m == 0:
                    rows = []
                mats.append(Matrix.from_rows(rows, n))
            else:
                mats.append(Matrix.zeros(field, m, n))
        return cls(Q, field, dims, tuple(mats))

    @classmethod
    def zero(cls, Q: Quiver, field, dims=None) -> Rep:
        return cls.build(Q, field, dims or (0,) * Q.n_vertices)

    @classmethod
    def from_entries(cls, Q: Quiver, field, dims: Sequence[int], entries: Sequence) -> Rep:
        """Inverse of :meth:`entries`."""
        dims = tuple(dims)
        mats, pos = [], 0
        for a in Q.arrows:
            m, n = dims[Q.vertex_index(a.head)], dims[Q.vertex_index(a.tail)]
            flat = entries[pos : pos + m * n]
            pos += m * n
            mats.append(Matrix(m, n, tuple(tuple(flat[r * n : (r + 1) * n]) for r in range(m))))
        if pos != len(entries):
            raise ValueError("wrong number of entries for this dimension vector")
        return cls(Q, field, dims, tuple(mats))

    def dim(self, v) -> int:
        return self.dims[self.quiver.vertex_index(v)]

    def map(self, name: str) -> Matrix:
        return self.maps[self.quiver.arrow_index(name)]

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def entries(self) -> tuple:
        """All matrix entries, arrow by arrow, row-major."""
        return tuple(x for m in self.maps for x in m.entries())

    def dim_vector(self) -> dict[str, int]:
        return dict(zip(self.quiver.vertices, self.dims))

    def sort_key(self):
        return (sum(self.dims), self.dims, tuple(str(x) for x in self.entries()))

    def to_json(self) -> dict:
        F = self.field
        return {
            "quiver": self.quiver.to_json(),
            "field": F.name,
            "dims": self.dim_vector(),
            "maps": {
                a.name: [[F.to_json(x) for x in r] for r in m.rows]
                for a, m in zip(self.quiver.arrows, self.maps)
            },
        }

    def __repr__(self):
        maps = {a.name: [list(r) for r in m.rows] for a, m in zip(self.quiver.arrows, self.maps)}
        return f"Rep({self.field.name}, dims={self.dims}, maps={maps})"


def rep_from_json(data: dict, quiver: Quiver | None = None) -> Rep:
    Q = quiver or quiver_from_json(data["quiver"])
    F = field_from_name(data.get("field", "Q"))
    return Rep.build(Q, F, {str(k): v for k, v in data.get("dims", {}).items()}, data.get("maps", {}))


def load_rep(text: str) -> Rep:
    return rep_from_json(json.loads(text))


@dataclass(frozen=True)
class RepMorphism:
    source: Rep
    target: Rep
    components: tuple[Matrix, ...]

    def __post_init__(self):
        Q, F = self.source.quiver, self.source.field
        for a, wm, vm in zip(Q.arrows, self.target.maps, self.source.maps):
            t, h = Q.vertex_index(a.tail), Q.vertex_index(a.head)
            lhs = la.matmul(F, wm, self.components[t])
            rhs = la.matmul(F, self.components[h], vm)
            if lhs != rhs:
                raise InvariantViolation(f"morphism fails to intertwine arrow {a.name}")

    def is_isomorphism(self) -> bool:
        F = self.source.field
        return all(la.is_invertible(F, c) for c in self.components)

    def compose(self, other: RepMorphism) -> RepMorphism:
        """``self o other``."""
        F = self.source.field
        return RepMorphism(
            other.source,
            self.target,
            tuple(la.matmul(F, a, b) for a, b in zip(self.components, other.components)),
        )


def _check_compatible(V: Rep, W: Rep):
    if V.quiver != W.quiver:
        raise ValueError("representations of different quivers")
    if V.field != W.field:
        raise ValueError("representations over different fields")


# ---------------------------------------------------------------------------
# basic constructions


def simple_rep(Q: Quiver, v, field) -> Rep:
    k = Q.vertex_index(v)
    return Rep.zero(Q, field, tuple(1 if i == k else 0 for i in range(Q.n_vertices)))


def direct_sum(V: Rep, W: Rep) -> Rep:
    _check_compatible(V, W)
    F = V.field
    dims = tuple(a + b for a, b in zip(V.dims, W.dims))
    return Rep(V.quiver, F, dims, tuple(la.block_diagonal(F, [a, b]) for a, b in zip(V.maps, W.maps)))


def direct_sum_all(reps: Sequence[Rep], Q: Quiver | None = None, field=None) -> Rep:
    if not reps:
        return Rep.zero(Q, field)
    out = reps[0]
    for r in reps[1:]:
        out = direct_sum(out, r)
    return out


def change_basis(V: Rep, bases: Sequence[Matrix]) -> Rep:
    """The representation ``P_h^-1 V_rho P_t`` for invertible ``bases``."""
    F, Q = V.field, V.quiver
    invs = [la.inverse(F, P) for P in bases]
    maps = []
    for a, m in zip(Q.arrows, V.maps):
        t, h = Q.vertex_index(a.tail), Q.vertex_index(a.head)
        maps.append(la.matmul(F, la.matmul(F, invs[h], m), bases[t]))
    return Rep(Q, F, V.dims, tuple(maps))


# ---------------------------------------------------------------------------
# morphism spaces


def hom_space(V: Rep, W: Rep) -> list[RepMorphism]:
    """Basis of Hom(V, W) from the linear system W_rho psi_t = psi_h V_rho."""
    _check_compatible(V, W)
    Q, F = V.quiver, V.field
    offsets, n_vars = [], 0
    for dv, dw in zip(V.dims, W.dims):
        offsets.append(n_vars)
        n_vars += dv * dw
    rows = []
    for a, vm, wm in zip(Q.arrows, V.maps, W.maps):
        t, h = Q.vertex_index(a.tail), Q.vertex_index(a.head)
        dvt, dvh = V.dims[t], V.dims[h]
        for r in range(W.dims[h]):
            for c in range(dvt):
                row = [F.zero] * n_vars
                for k in range(W.dims[t]):
                    x = wm.rows[r][k]
                    if not F.is_zero(x):
                        idx = offsets[t] + k * dvt + c
                        row[idx] = F.add(row[idx], x)
                for k in range(dvh):
                    x = vm.rows[k][c]
                    if not F.is_zero(x):
                        idx = offsets[h] + r * dvh + k
                        row[idx] = F.sub(row[idx], x)
                rows.append(row)
    if n_vars == 0:
        return []
    basis = la.nullspace(F, Matrix.from_rows(rows, n_vars) if rows else Matrix.zeros(F, 0, n_vars))
    return [_morphism_from_vector(V, W, offsets, vec) for vec in basis]


def _morphism_from_vector(V: Rep, W: Rep, offsets, vec) -> RepMorphism:
    comps = []
    for i, (dv, dw) in enumerate(zip(V.dims, W.dims)):
        flat = vec[offsets[i] : offsets[i] + dv * dw]
        comps.append(Matrix(dw, dv, tuple(tuple(flat[r * dv : (r + 1) * dv]) for r in range(dw))))
    return RepMorphism(V, W, tuple(comps))


def _combine(field, basis: Sequence[RepMorphism], coeffs: Sequence) -> tuple[Matrix, ...]:
    first = basis[0]
    comps = [Matrix.zeros(field, c.nrows, c.ncols) for c in first.components]
    for c, phi in zip(coeffs, basis):
        if field.is_zero(c):
            continue
        comps = [la.add(field, a, la.scale(field, c, b)) for a, b in zip(comps, phi.components)]
    return tuple(comps)


def _identity_morphism(V: Rep) -> RepMorphism:
    return RepMorphism(V, V, tuple(Matrix.identity(V.field, d) for d in V.dims))


# ---------------------------------------------------------------------------
# isomorphism


def fingerprint(V: Rep) -> tuple:
    """Isomorphism invariants: dims, ranks of all path composites up to
    length #arrows, and dim End."""
    Q, F = V.quiver, V.field
    ranks = []
    for path in enumerate_paths(Q, len(Q.arrows)):
        if path.is_trivial:
            continue
        m = None
        for name in path.arrows:
            am = V.map(name)
            m = am if m is None else la.matmul(F, m, am)
        ranks.append(la.rank(F, m))
    return (V.dims, tuple(ranks), len(hom_space(V, V)))


def find_isomorphism(
    V: Rep, W: Rep, budget: int | None = None, seed: int = 0, trials: int = ISO_TRIALS
) -> RepMorphism | None:
    """An isomorphism V -> W, or None if none exists.

    Raises :class:`Undecided` when the randomized search gives up on a pair
    that no invariant tells apart.
    """
    _check_compatible(V, W)
    if V.dims != W.dims:
        return None
    if V.total_dim == 0:
        return _identity_morphism(V)
    F = V.field
    basis = hom_space(V, W)
    if not basis:
        return None
    if len(basis) != len(hom_space(V, V)) or len(basis) != len(hom_space(W, W)):
        return None
    budget = default_budget() if budget is None else budget
    if F.is_finite and F.p ** len(basis) <= budget:
        for coeffs in itertools.product(range(F.p), repeat=len(basis)):
            comps = _combine(F, basis, coeffs)
            if all(la.is_invertible(F, c) for c in comps):
                return RepMorphism(V, W, comps)
        return None
    if fingerprint(V) != fingerprint(W):
        return None
    rng = random.Random(seed)
    for _ in range(trials):
        coeffs = [F.random_element(rng) for _ in basis]
        comps = _combine(F, basis, coeffs)
        if all(la.is_invertible(F, c) for c in comps):
            return RepMorphism(V, W, comps)
    raise Undecided(f"no isomorphism found in {trials} random trials")


def is_isomorphic(V: Rep, W: Rep, **kwargs) -> bool:
    return find_isomorphism(V, W, **kwargs) is not None


# ---------------------------------------------------------------------------
# splitting and indecomposability


def _restrict(V: Rep, first: Sequence[Sequence[tuple]], second: Sequence[Sequence[tuple]]) -> tuple[Rep, Rep]:
    """Split V along graded complements given by column-vector bases."""
    F = V.field
    bases = []
    for d, a, b in zip(V.dims, first, second):
        cols = list(a) + list(b)
        if len(cols) != d:
            raise InvariantViolation("split bases do not span the vertex space")
        bases.append(la.from_columns(F, d, cols) if d else Matrix.zeros(F, 0, 0))
    W = change_basis(V, bases)
    Q = V.quiver
    sizes = [len(a) for a in first]
    left_maps, right_maps = [], []
    for a, m in zip(Q.arrows, W.maps):
        t, h = Q.vertex_index(a.tail), Q.vertex_index(a.head)
        st, sh = sizes[t], sizes[h]
        for r in range(m.nrows):
            for c in range(m.ncols):
                if (r < sh) != (c < st) and not F.is_zero(m.rows[r][c]):
                    raise InvariantViolation("split subspaces are not subrepresentations")
        left_maps.append(Matrix(sh, st, tuple(tuple(row[:st]) for row in m.rows[:sh])))
        right_maps.append(
            Matrix(m.nrows - sh, m.ncols - st, tuple(tuple(row[st:]) for row in m.rows[sh:]))
        )
    left = Rep(Q, F, tuple(sizes), tuple(left_maps))
    right = Rep(Q, F, tuple(d - s for d, s in zip(V.dims, sizes)), tuple(right_maps))
    return left, right


def _split_by_polys(V: Rep, comps: Sequence[Matrix], g: Sequence, h: Sequence) -> tuple[Rep, Rep]:
    F = V.field
    first = [la.nullspace(F, la.poly_of_matrix(F, g, c)) if c.nrows else [] for c in comps]
    second = [la.nullspace(F, la.poly_of_matrix(F, h, c)) if c.nrows else [] for c in comps]
    return _restrict(V, first, second)


def _total_charpoly(F, comps: Sequence[Matrix]) -> list:
    out = [F.one]
    for c in comps:
        if c.nrows:
            out = la.poly_mul(F, out, la.charpoly(F, c))
    return out


def _primary_factors(F, chi: Sequence) -> list[tuple[list, int]]:
    """Irreducible factorization, trying linear factors first over F_p."""
    if F.is_finite:
        roots = []
        rest = list(chi)
        for lam in range(F.p):
            mult = 0
            while len(rest) > 1 and F.is_zero(_poly_eval(F, rest, lam)):
                rest = _deflate(F, rest, lam)
                mult += 1
            if mult:
                roots.append(([F.neg(lam), F.one], mult))
        if len(rest) > 1:
            roots.extend(la.factor_poly(F, rest))
        return roots
    return la.factor_poly(F, chi)


def _poly_eval(F, coeffs, x):
    acc = F.zero
    for c in reversed(coeffs):
        acc = F.add(F.mul(acc, x), c)
    return acc


def _deflate(F, coeffs, lam):
    """Divide by (x - lam), assuming lam is a root."""
    n = len(coeffs) - 1
    out = [F.zero] * n
    acc = F.zero
    for k in range(n, 0, -1):
        acc = F.add(F.mul(acc, lam), coeffs[k])
        out[k - 1] = acc
    return out


def _try_split(V: Rep, comps: Sequence[Matrix]):
    """Split V using the endomorphism ``comps`` or return its single
    primary factor ``(f, m)``."""
    F = V.field
    chi = _total_charpoly(F, comps)
    factors = _primary_factors(F, chi)
    if len(factors) == 1:
        return factors[0]
    f, m = factors[0]
    g = la.poly_pow(F, f, m)
    h = [F.one]
    for f2, m2 in factors[1:]:
        h = la.poly_mul(F, h, la.poly_pow(F, f2, m2))
    return _split_by_polys(V, comps, g, h)


def _end_ops(V: Rep):
    F = V.field

    def mul(a, b):
        return tuple(la.matmul(F, x, y) for x, y in zip(a, b))

    def vec(a):
        return tuple(e for m in a for e in m.entries())

    return mul, vec


def _certify_local(V: Rep, basis: Sequence[tuple[Matrix, ...]], nilpotents: Sequence[tuple[Matrix, ...]]) -> bool:
    """True when End(V) is provably local.

    ``nilpotents`` are nilpotent endomorphisms. If the two-sided ideal J they
    generate is nilpotent and End(V)/J is a field, then J is the radical and
    End(V) is local.
    """
    F = V.field
    mul, vec = _end_ops(V)
    n = len(vec(basis[0]))

    def span(vectors):
        return la.rref(F, list(vectors), n)

    ideal, piv = span(vec(x) for x in nilpotents)
    while True:
        elems = [_unvec(V, r) for r in ideal]
        gens = [vec(x) for x in elems]
        for s in elems:
            for a in basis:
                gens.append(vec(mul(a, s)))
                gens.append(vec(mul(s, a)))
        new, newpiv = span(gens) if gens else ([], [])
        if len(new) == len(ideal):
            break
        ideal, piv = new, newpiv
    ideal_elems = [_unvec(V, r) for r in ideal]
    # nilpotency of the ideal
    power = ideal_elems
    for _ in range(V.total_dim + 1):
        if not power:
            break
        prods = [vec(mul(a, b)) for a in power for b in ideal_elems]
        red, _ = span(prods)
        if len(red) >= len(power) and power:
            return False
        power = [_unvec(V, r) for r in red]
    if power:
        return False
    r = len(basis) - len(ideal)
    if r == 1:
        return True
    # End/J must be a commutative field of dimension r
    for a in basis:
        for b in basis:
            diff = [F.sub(x, y) for x, y in zip(vec(mul(a, b)), vec(mul(b, a)))]
            if not la.in_span(F, ideal, piv, diff):
                return False
    one = tuple(Matrix.identity(F, d) for d in V.dims)
    for theta in basis:
        powers = [vec(one)]
        cur = one
        for _ in range(r):
            cur = mul(cur, theta)
            powers.append(vec(cur))
        reduced = [la.reduce_mod(F, ideal, piv, p) for p in powers]
        # the minimal polynomial of theta mod J has degree r iff the first r
        # reduced powers are independent
        if len(la.rref(F, reduced[:r], n)[0]) < r:
            continue
        coords = la.solve_left_coords(F, reduced[:r], reduced[r])
        minpoly = [F.neg(c) for c in coords] + [F.one]
        factors = la.factor_poly(F, minpoly)
        if len(factors) == 1 and factors[0][1] == 1:
            return True
    return False


def _unvec(V: Rep, flat) -> tuple[Matrix, ...]:
    out, pos = [], 0
    for d in V.dims:
        out.append(Matrix(d, d, tuple(tuple(flat[pos + r * d : pos + (r + 1) * d]) for r in range(d))))
        pos += d * d
    return tuple(out)


def _check_jordan_splits(V: Rep):
    Q = V.quiver
    if Q.n_vertices == 1 and len(Q.arrows) == 1 and Q.has_loops() and V.total_dim:
        F = V.field
        chi = la.charpoly(F, V.maps[0])
        if any(len(f) > 2 for f, _ in la.factor_poly(F, chi)):
            raise FieldNotSplitting(
                f"characteristic polynomial of the loop does not split over {F.name}"
            )


def find_split(
    V: Rep, seed: int = 0, exhaustive_limit: int = EXHAUSTIVE_END_LIMIT
) -> tuple[Rep, Rep] | None:
    """A nontrivial decomposition V = A + B, or None if V is indecomposable."""
    if V.is_zero():
        raise ValueError("the zero representation is neither decomposable nor indecomposable")
    _check_jordan_splits(V)
    F = V.field
    basis = hom_space(V, V)
    ends = [phi.components for phi in basis]
    if F.is_finite and F.p ** len(ends) <= exhaustive_limit:
        return _split_exhaustive(V, ends)
    nilpotents = []
    rng = random.Random(seed)
    candidates = list(ends)
    for attempt in range(CERTIFY_TRIALS + 1):
        for comps in candidates:
            result = _try_split(V, comps)
            if isinstance(result[0], Rep):
                return result
            f, m = result
            nilpotents.append(tuple(la.poly_of_matrix(F, f, c) if c.nrows else c for c in comps))
        if _certify_local(V, ends, nilpotents):
            return None
        coeffs = [F.random_element(rng) for _ in ends]
        candidates = [_combine(F, basis, coeffs)]
    raise Undecided("could neither split V nor certify End(V) local")


def _split_exhaustive(V: Rep, ends) -> tuple[Rep, Rep] | None:
    F = V.field
    mul, _ = _end_ops(V)
    zero = tuple(Matrix.zeros(F, d, d) for d in V.dims)
    one = tuple(Matrix.identity(F, d) for d in V.dims)
    for coeffs in itertools.product(range(F.p), repeat=len(ends)):
        e = zero
        for c, b in zip(coeffs, ends):
            if c:
                e = tuple(la.add(F, x, la.scale(F, c, y)) for x, y in zip(e, b))
        if e == zero or e == one or mul(e, e) != e:
            continue
        first = [la.column_space(F, m) if m.nrows else [] for m in e]
        second = [la.nullspace(F, m) if m.nrows else [] for m in e]
        return _restrict(V, first, second)
    return None


def is_indecomposable(V: Rep, **kwargs) -> bool:
    return find_split(V, **kwargs) is None


def krull_schmidt(V: Rep, **kwargs) -> list[Rep]:
    """Indecomposable summands of V, sorted by dimension vector and entries."""
    if V.is_zero():
        return []
    todo, out = [V], []
    while todo:
        W = todo.pop()
        split = find_split(W, **kwargs)
        if split is None:
            out.append(W)
        else:
            todo.extend(split)
    out.sort(key=Rep.sort_key)
    return out


def match_multisets(left: Sequence[Rep], right: Sequence[Rep], **kwargs) -> bool:
    """Whether two lists of representations agree up to isomorphism and order."""
    if len(left) != len(right):
        return False
    remaining = list(right)
    for a in left:
        for k, b in enumerate(remaining):
            if a.dims == b.dims and is_isomorphic(a, b, **kwargs):
                del remaining[k]
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# enumeration of isomorphism classes over F_p


def gl_generators(p: int, n: int) -> list[list[list[int]]]:
    """Generators of GL_n(F_p): elementary transvections and diag(g,1,..,1)."""
    if n == 0:
        return []
    F = PrimeField(p)
    g = F.generator()
    gens = []
    for i in range(n):
        for j in range(n):
            if i != j:
                m = [[int(r == c) for c in range(n)] for r in range(n)]
                m[i][j] = 1
                gens.append(m)
    if g != 1:
        m = [[int(r == c) for c in range(n)] for r in range(n)]
        m[0][0] = g
        gens.append(m)
    return gens


def gl_order(p: int, n: int) -> int:
    out = 1
    for k in range(n):
        out *= p**n - p**k
    return out


class OrbitTable:
    """All points of the representation space Rep(Q, dims) over F_p,
    partitioned into base-change orbits.

    A point is the flat tuple of matrix entries (see :meth:`Rep.entries`)
    and is indexed by reading it as a base-p numeral, first entry most
    significant; index order is therefore lexicographic order and the
    canonical representative of an orbit is its smallest index.
    """

    def __init__(self, Q: Quiver, dims: Sequence[int], p: int, budget: int | None = None):
        self.quiver = Q
        self.dims = tuple(dims)
        self.p = p
        self.field = PrimeField(p)
        self.n_entries = sum(
            self.dims[Q.vertex_index(a.head)] * self.dims[Q.vertex_index(a.tail)] for a in Q.arrows
        )
        self.size = p**self.n_entries
        budget = default_budget() if budget is None else budget
        if self.size > budget:
            raise BudgetExceeded(
                f"representation space {Q.vertices} dims {self.dims} over F{p}", self.size, budget
            )
        self.weights = np.array(
            [p ** (self.n_entries - 1 - k) for k in range(self.n_entries)], dtype=np.int64
        )
        self._build()

    def _action_matrices(self) -> list[np.ndarray]:
        Q, p, N = self.quiver, self.p, self.n_entries
        layout, pos = [], 0
        for a in Q.arrows:
            t, h = Q.vertex_index(a.tail), Q.vertex_index(a.head)
            layout.append((t, h, pos))
            pos += self.dims[h] * self.dims[t]
        mats = []
        for v, d in enumerate(self.dims):
            for g in gl_generators(p, d):
                gm = np.array(g, dtype=np.int64)
                ginv = np.array(
                    la.inverse(self.field, Matrix.from_rows(g)).rows, dtype=np.int64
                )
                M = np.zeros((N, N), dtype=np.int64)
                for k in range(N):
                    x = np.zeros(N, dtype=np.int64)
                    x[k] = 1
                    M[:, k] = self._act(x, layout, v, gm, ginv)
                if N:
                    mats.append(M)
        return mats

    def _act(self, x, layout, v, g, ginv):
        out = x.copy()
        for t, h, pos in layout:
            m, n = self.dims[h], self.dims[t]
            if m * n == 0:
                continue
            blk = x[pos : pos + m * n].reshape(m, n)
            if h == v:
                blk = g @ blk
            if t == v:
                blk = blk @ ginv
            out[pos : pos + m * n] = (blk % self.p).reshape(-1)
        return out

    def _points(self, start: int, stop: int) -> np.ndarray:
        idx = np.arange(start, stop, dtype=np.int64)
        return (idx[:, None] // self.weights[None, :]) % self.p

    def _build(self, chunk: int = 1 << 18):
        n = self.size
        mats = self._action_matrices()
        if not mats:
            self.labels = np.arange(n, dtype=np.int64)
        else:
            rows, cols = [], []
            for start in range(0, n, chunk):
                stop = min(n, start + chunk)
                X = self._points(start, stop)
                src = np.arange(start, stop, dtype=np.int64)
                for M in mats:
                    img = ((X @ M.T) % self.p) @ self.weights
                    rows.append(src)
                    cols.append(img)
            rows = np.concatenate(rows)
            cols = np.concatenate(cols)
            graph = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n)).tocsr()
            _, self.labels = connected_components(graph, directed=True, connection="weak")
        _, first = np.unique(self.labels, return_index=True)
        canon_of_label = np.empty(len(first), dtype=np.int64)
        canon_of_label[self.labels[first]] = first
        self.canonical = canon_of_label[self.labels]
        self.class_indices = [int(i) for i in np.sort(first)]
        counts = np.bincount(self.labels)
        self.orbit_sizes = {int(i): int(counts[self.labels[i]]) for i in self.class_indices}

    def index_of(self, entries: Sequence[int]) -> int:
        out = 0
        for x in entries:
            out = out * self.p + int(x)
        return out

    def entries_of(self, index: int) -> tuple[int, ...]:
        index = int(index)
        out = []
        for _ in range(self.n_entries):
            index, r = divmod(index, self.p)
            out.append(r)
        return tuple(reversed(out))

    def canonical_index(self, entries: Sequence[int]) -> int:
        return int(self.canonical[self.index_of(entries)])

    def rep(self, index: int) -> Rep:
        return Rep.from_entries(self.quiver, self.field, self.dims, self.entries_of(index))

    def representatives(self) -> list[Rep]:
        return [self.rep(int(i)) for i in self.class_indices]

    def __len__(self):
        return len(self.class_indices)


_ORBIT_CACHE: dict[tuple, OrbitTable] = {}


def orbit_table(Q: Quiver, dims: Sequence[int], p: int, budget: int | None = None) -> OrbitTable:
    key = (Q, tuple(dims), p)
    table = _ORBIT_CACHE.get(key)
    if table is None:
        table = OrbitTable(Q, dims, p, budget)
        _ORBIT_CACHE[key] = table
    else:
        # a cached table must not let a smaller budget through
        limit = default_budget() if budget is None else budget
        if table.size > limit:
            raise BudgetExceeded(f"representation space {Q.vertices} dims {table.dims} over F{p}", table.size, limit)
    return table


def enumerate_iso_classes(Q: Quiver, d: Sequence[int], p: int, budget: int | None = None) -> list[Rep]:
    """One canonical (lexicographically least) representative per class."""
    return orbit_table(Q, d, p, budget).representatives()


def canonical_form(V: Rep, budget: int | None = None) -> Rep:
    if not V.field.is_finite:
        raise ValueError("canonical forms are only defined over prime fields")
    table = orbit_table(V.quiver, V.dims, V.field.p, budget)
    return table.rep(table.canonical_index(V.entries()))


def automorphism_count(V: Rep, budget: int | None = None) -> int:
    """|Aut(V)| by enumerating End(V) over F_p."""
    F = V.field
    basis = hom_space(V, V)
    budget = default_budget() if budget is None else budget
    if F.p ** len(basis) > budget:
        raise BudgetExceeded("endomorphism enumeration", F.p ** len(basis), budget)
    if not basis:
        return 1
    count = 0
    for coeffs in itertools.product(range(F.p), repeat=len(basis)):
        if all(la.is_invertible(F, c) for c in _combine(F, basis, coeffs)):
            count += 1
    return count


def group_order(dims: Sequence[int], p: int) -> int:
    out = 1
    for d in dims:
        out *= gl_order(p, d)
    return out
