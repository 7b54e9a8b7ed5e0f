"""Points of the double quiver's representation space: the symplectic form,
the moment map, nilpotency, Lambda_V over F_p, and framed stability."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Mapping, Sequence

from . import linalg as la
from .coeff_arith import PrimeField, field_from_name
from .errors import BudgetExceeded
from .linalg import Matrix
from .quiver import DoubleQuiver, Quiver, double, quiver_from_json
from .representation import Rep, default_budget


@dataclass(frozen=True)
class DoubleRepPoint:
    """An element x of E_V: one matrix per arrow of the double quiver."""

    dq: DoubleQuiver
    rep: Rep

    def __post_init__(self):
        if self.rep.quiver != self.dq.quiver:
            raise ValueError("point is not a representation of the double quiver")

    @classmethod
    def build(cls, dq: DoubleQuiver, field, dims, maps: Mapping[str, Sequence[Sequence]] | None = None):
        return cls(dq, Rep.build(dq.quiver, field, dims, maps))

    @classmethod
    def from_entries(cls, dq: DoubleQuiver, field, dims, entries):
        return cls(dq, Rep.from_entries(dq.quiver, field, dims, entries))

    @property
    def field(self):
        return self.rep.field

    @property
    def dims(self) -> tuple[int, ...]:
        return self.rep.dims

    def map(self, name: str) -> Matrix:
        return self.rep.map(name)

    def to_json(self) -> dict:
        out = self.rep.to_json()
        out["quiver"] = self.dq.base.to_json()
        return out


@dataclass(frozen=True)
class FramedPoint:
    """(x, t) with framing maps t_i: V_i -> W_i, one matrix per vertex."""

    point: DoubleRepPoint
    w: tuple[int, ...]
    framing: tuple[Matrix, ...]

    def __post_init__(self):
        v = self.point.dims
        if len(self.w) != len(v) or len(self.framing) != len(v):
            raise ValueError("framing does not match the vertex set")
        for k, (wi, vi, t) in enumerate(zip(self.w, v, self.framing)):
            if t.shape != (wi, vi):
                raise ValueError(f"framing map at vertex {k} has shape {t.shape}, expected {(wi, vi)}")

    @classmethod
    def build(cls, point: DoubleRepPoint, w: Sequence[int], framing: Mapping[str, Sequence[Sequence]] | None = None):
        F = point.field
        Q = point.dq.quiver
        framing = {str(k): v for k, v in (framing or {}).items()}
        mats = []
        for k, vert in enumerate(Q.vertices):
            wi, vi = w[k], point.dims[k]
            if vert in framing and wi:
                rows = [[F.parse(x) for x in r] for r in framing[vert]]
                mats.append(Matrix.from_rows(rows, vi))
            else:
                mats.append(Matrix.zeros(F, wi, vi))
        return cls(point, tuple(int(x) for x in w), tuple(mats))

    def to_json(self) -> dict:
        out = self.point.to_json()
        F = self.point.field
        verts = self.point.dq.quiver.vertices
        out["framing"] = {
            "w": dict(zip(verts, self.w)),
            "maps": {v: [[F.to_json(x) for x in r] for r in t.rows] for v, t in zip(verts, self.framing)},
        }
        return out


def point_from_json(data: dict) -> DoubleRepPoint | FramedPoint:
    """Read a point; the quiver block holds the undoubled quiver."""
    dq = double(quiver_from_json(data["quiver"]))
    F = field_from_name(data.get("field", "Q"))
    dims = {str(k): v for k, v in data.get("dims", {}).items()}
    point = DoubleRepPoint.build(dq, F, dims, data.get("maps", {}))
    if "framing" not in data:
        return point
    fr = data["framing"]
    wmap = {str(k): int(v) for k, v in fr.get("w", {}).items()}
    w = [wmap.get(v, 0) for v in dq.quiver.vertices]
    return FramedPoint.build(point, w, fr.get("maps", {}))


def load_point(text: str):
    return point_from_json(json.loads(text))


def epsilon(dq: DoubleQuiver, name: str) -> int:
    return dq.epsilon(name)


def symplectic_form(x: DoubleRepPoint, y: DoubleRepPoint):
    """sum over arrows of eps(rho) tr(x_rho y_rhobar)."""
    if x.dq != y.dq or x.dims != y.dims or x.field != y.field:
        raise ValueError("points live in different spaces")
    F = x.field
    total = F.zero
    for a in x.dq.quiver.arrows:
        prod = la.matmul(F, x.map(a.name), y.map(x.dq.bar_of(a.name)))
        tr = F.zero
        for k in range(prod.nrows):
            tr = F.add(tr, prod.rows[k][k])
        total = F.add(total, tr) if x.dq.epsilon(a.name) > 0 else F.sub(total, tr)
    return total


def moment_map(x: DoubleRepPoint) -> list[Matrix]:
    """psi_i(x) = sum over arrows with head i of eps(rho) x_rho x_rhobar."""
    F = x.field
    Q = x.dq.quiver
    out = []
    for k, v in enumerate(Q.vertices):
        acc = Matrix.zeros(F, x.dims[k], x.dims[k])
        for a in Q.arrows_into(v):
            prod = la.matmul(F, x.map(a.name), x.map(x.dq.bar_of(a.name)))
            acc = la.add(F, acc, prod) if x.dq.epsilon(a.name) > 0 else la.sub(F, acc, prod)
        out.append(acc)
    return out


def _span(F, vectors, n: int) -> list[tuple]:
    return la.row_space(F, vectors, n)


def is_nilpotent(x: DoubleRepPoint) -> bool:
    """All long enough arrow composites vanish.

    U_0 = V and U_{m+1} = sum of x_rho(U_m); U_m is the span of the images of
    all length-m composites, and the chain decreases, so x is nilpotent
    exactly when it reaches zero.
    """
    F = x.field
    Q = x.dq.quiver
    dims = x.dims
    layer = [[tuple(int(i == j) for j in range(d)) for i in range(d)] for d in dims]
    layer = [[tuple(F.from_int(c) for c in vec) for vec in basis] for basis in layer]
    size = sum(dims)
    while size:
        images: list[list] = [[] for _ in dims]
        for a in Q.arrows:
            t, h = Q.vertex_index(a.tail), Q.vertex_index(a.head)
            m = x.map(a.name)
            for vec in layer[t]:
                images[h].append(la.matvec(F, m, vec))
        layer = [_span(F, images[k], dims[k]) for k in range(len(dims))]
        new_size = sum(len(b) for b in layer)
        if new_size == size:
            return False
        size = new_size
    return True


def lambda_points(Q: Quiver | DoubleQuiver, dims: Sequence[int], p: int,
                  budget: int | None = None) -> list[DoubleRepPoint]:
    """All nilpotent x in E_V(F_p) with vanishing moment map, in
    lexicographic order of their entries."""
    dq = Q if isinstance(Q, DoubleQuiver) else double(Q)
    F = PrimeField(p)
    dims = tuple(int(d) for d in dims)
    budget = default_budget() if budget is None else budget
    n_entries = sum(
        dims[dq.quiver.vertex_index(a.head)] * dims[dq.quiver.vertex_index(a.tail)] for a in dq.quiver.arrows
    )
    needed = p**n_entries
    if needed > budget:
        raise BudgetExceeded(f"scan of E_V for dims {dims}", needed, budget)
    out = []
    for entries in itertools.product(range(p), repeat=n_entries):
        x = DoubleRepPoint.from_entries(dq, F, dims, entries)
        if all(m.is_zero(F) for m in moment_map(x)) and is_nilpotent(x):
            out.append(x)
    return out


def destabilizing_subspace(fp: FramedPoint) -> list[list[tuple]]:
    """Largest x-stable graded subspace inside the kernels of the t_i.

    K_0 = ker t and K_{m+1,i} = {v in K_{m,i} : x_rho v in K_{m,h(rho)}}; the
    limit contains every x-stable S killed by t, and is itself one.
    """
    x = fp.point
    F = x.field
    Q = x.dq.quiver
    dims = x.dims
    K = [la.nullspace(F, t) for t in fp.framing]
    while True:
        annihilators = [la.nullspace(F, Matrix.from_rows([list(b) for b in basis], dims[k]))
                        for k, basis in enumerate(K)]
        new_K = []
        for k, vert in enumerate(Q.vertices):
            basis = K[k]
            if not basis:
                new_K.append(basis)
                continue
            constraints = []
            for a in Q.arrows_from(vert):
                h = Q.vertex_index(a.head)
                images = [la.matvec(F, x.map(a.name), b) for b in basis]
                for ann in annihilators[h]:
                    constraints.append(
                        [sum_products(F, ann, img) for img in images]
                    )
            if not constraints:
                new_K.append(basis)
                continue
            coeffs = la.nullspace(F, Matrix.from_rows(constraints, len(basis)))
            new_K.append(
                [
                    tuple(sum_products(F, c, [b[r] for b in basis]) for r in range(dims[k]))
                    for c in coeffs
                ]
            )
        if sum(map(len, new_K)) == sum(map(len, K)):
            return new_K
        K = new_K


def sum_products(F, a: Sequence, b: Sequence):
    acc = F.zero
    for x, y in zip(a, b):
        acc = F.add(acc, F.mul(x, y))
    return acc


def is_stable(fp: FramedPoint) -> bool:
    """No nonzero x-stable graded subspace is killed by every t_i."""
    return not any(destabilizing_subspace(fp))


def framed_points(Q: Quiver | DoubleQuiver, v: Sequence[int], w: Sequence[int], p: int,
                  budget: int | None = None) -> list[FramedPoint]:
    """Every (x, t) over F_p for the given v and w, in lexicographic order."""
    dq = Q if isinstance(Q, DoubleQuiver) else double(Q)
    F = PrimeField(p)
    v, w = tuple(v), tuple(w)
    budget = default_budget() if budget is None else budget
    nx = sum(v[dq.quiver.vertex_index(a.head)] * v[dq.quiver.vertex_index(a.tail)] for a in dq.quiver.arrows)
    nt = sum(a * b for a, b in zip(v, w))
    if p ** (nx + nt) > budget:
        raise BudgetExceeded(f"framed points for v={v}, w={w}", p ** (nx + nt), budget)
    out = []
    for entries in itertools.product(range(p), repeat=nx + nt):
        x = DoubleRepPoint.from_entries(dq, F, v, entries[:nx])
        mats, pos = [], nx
        for wi, vi in zip(w, v):
            flat = entries[pos : pos + wi * vi]
            pos += wi * vi
            mats.append(Matrix(wi, vi, tuple(tuple(flat[r * vi : (r + 1) * vi]) for r in range(wi))))
        out.append(FramedPoint(x, w, tuple(mats)))
    return out
