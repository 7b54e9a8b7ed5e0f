"""The path algebra kQ as sparse linear combinations of paths."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .linalg import Matrix
from .quiver import Path, Quiver, compose, enumerate_paths, is_acyclic, make_path, path_from_json, trivial_path

INFINITE = "infinite"


@dataclass(frozen=True)
class PathAlgElem:
    quiver: Quiver
    field: object
    terms: tuple[tuple[Path, object], ...]

    @classmethod
    def from_dict(cls, Q: Quiver, field, terms: Mapping[Path, object]) -> PathAlgElem:
        clean = {}
        for path, c in terms.items():
            c = field.from_int(c) if field.is_finite else field.parse(c)
            if not field.is_zero(c):
                clean[path] = c
        return cls(Q, field, tuple(sorted(clean.items(), key=lambda pc: pc[0].key())))

    @classmethod
    def basis(cls, Q: Quiver, field, path: Path) -> PathAlgElem:
        return cls(Q, field, ((path, field.one),))

    @classmethod
    def arrow(cls, Q: Quiver, field, *names: str) -> PathAlgElem:
        return cls.basis(Q, field, make_path(Q, names))

    @classmethod
    def idempotent(cls, Q: Quiver, field, v) -> PathAlgElem:
        return cls.basis(Q, field, trivial_path(Q, v))

    def as_dict(self) -> dict[Path, object]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: PathAlgElem):
        if other.quiver != self.quiver:
            raise ValueError("path algebra elements over different quivers")
        if other.field != self.field:
            raise ValueError("path algebra elements over different fields")

    def __add__(self, other: PathAlgElem) -> PathAlgElem:
        self._check(other)
        out = self.as_dict()
        for p, c in other.terms:
            out[p] = self.field.add(out.get(p, self.field.zero), c)
        return PathAlgElem.from_dict(self.quiver, self.field, out)

    def scale(self, c) -> PathAlgElem:
        return PathAlgElem.from_dict(
            self.quiver, self.field, {p: self.field.mul(c, x) for p, x in self.terms}
        )

    def __neg__(self):
        return self.scale(self.field.neg(self.field.one))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: PathAlgElem) -> PathAlgElem:
        return pa_multiply(self, other)

    def to_json(self) -> list[dict]:
        return [{"path": p.to_json(), "coeff": str(self.field.to_json(c))} for p, c in self.terms]

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{p!r}" for p, c in self.terms)


def pa_multiply(x: PathAlgElem, y: PathAlgElem) -> PathAlgElem:
    x._check(y)
    F = x.field
    out: dict[Path, object] = {}
    for px, cx in x.terms:
        for py, cy in y.terms:
            pz = compose(px, py)
            if pz is not None:
                out[pz] = F.add(out.get(pz, F.zero), F.mul(cx, cy))
    return PathAlgElem.from_dict(x.quiver, F, out)


def unit_element(Q: Quiver, field) -> PathAlgElem:
    return PathAlgElem.from_dict(Q, field, {trivial_path(Q, v): field.one for v in Q.vertices})


def algebra_dimension(Q: Quiver):
    """Number of paths for acyclic Q, else the string ``"infinite"``."""
    if not is_acyclic(Q):
        return INFINITE
    return len(enumerate_paths(Q, len(Q.arrows)))


def element_from_json(Q: Quiver, field, data) -> PathAlgElem:
    terms: dict[Path, object] = {}
    for entry in data:
        p = path_from_json(Q, entry["path"])
        terms[p] = field.add(terms.get(p, field.zero), field.parse(entry["coeff"]))
    return PathAlgElem.from_dict(Q, field, terms)


def _linear_positions(Q: Quiver, n: int) -> dict[str, int]:
    """Vertex -> position along a linearly oriented A_n, or ValueError."""
    if Q.n_vertices != n or len(Q.arrows) != n - 1:
        raise ValueError(f"not a linearly oriented A_{n} quiver")
    outgoing = {v: Q.arrows_from(v) for v in Q.vertices}
    incoming = {v: Q.arrows_into(v) for v in Q.vertices}
    starts = [v for v in Q.vertices if not incoming[v]]
    if len(starts) != 1:
        raise ValueError(f"not a linearly oriented A_{n} quiver")
    order = [starts[0]]
    while len(order) < n:
        outs = outgoing[order[-1]]
        if len(outs) != 1 or outs[0].head in order:
            raise ValueError(f"not a linearly oriented A_{n} quiver")
        order.append(outs[0].head)
    if outgoing[order[-1]]:
        raise ValueError(f"not a linearly oriented A_{n} quiver")
    return {v: k for k, v in enumerate(order)}


def triangular_iso(n: int, x: PathAlgElem) -> Matrix:
    """Send the unique path from i to j to the matrix unit E_{ji}."""
    pos = _linear_positions(x.quiver, n)
    F = x.field
    rows = [[F.zero] * n for _ in range(n)]
    for path, c in x.terms:
        i, j = pos[path.tail], pos[path.head]
        rows[j][i] = F.add(rows[j][i], c)
    return Matrix.from_rows(rows, n)
