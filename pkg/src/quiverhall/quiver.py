"""Quivers, paths, the double quiver, and their serializations."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence


@dataclass(frozen=True)
class Arrow:
    name: str
    tail: str
    head: str

    def to_json(self) -> dict:
        return {"name": self.name, "tail": self.tail, "head": self.head}


@dataclass(frozen=True)
class Quiver:
    """A finite quiver. Vertex order is the input order and fixes every
    matrix convention downstream."""

    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self):
        verts = tuple(str(v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "arrows", tuple(self.arrows))
        if len(set(verts)) != len(verts):
            raise ValueError("duplicate vertex identifiers")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("duplicate arrow names")
        vs = set(verts)
        for a in self.arrows:
            if a.tail not in vs or a.head not in vs:
                raise ValueError(f"arrow {a.name!r} references an unknown vertex")

    @classmethod
    def build(cls, vertices: Iterable, arrows: Iterable[tuple] = ()) -> Quiver:
        """``Quiver.build([1, 2], [("rho", 1, 2)])``; ids are stringified."""
        return cls(
            tuple(str(v) for v in vertices),
            tuple(Arrow(str(n), str(t), str(h)) for n, t, h in arrows),
        )

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def vertex_index(self, v) -> int:
        try:
            return self.vertices.index(str(v))
        except ValueError:
            raise KeyError(f"unknown vertex {v!r}") from None

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise KeyError(f"unknown arrow {name!r}")

    def arrow_index(self, name: str) -> int:
        for k, a in enumerate(self.arrows):
            if a.name == name:
                return k
        raise KeyError(f"unknown arrow {name!r}")

    def arrows_from(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows if a.tail == v]

    def arrows_into(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows if a.head == v]

    def has_loops(self) -> bool:
        return any(a.head == a.tail for a in self.arrows)

    def opposite(self) -> Quiver:
        return Quiver(self.vertices, tuple(Arrow(a.name, a.head, a.tail) for a in self.arrows))

    def relabel(self, mapping: dict) -> Quiver:
        """Rename vertices, keeping their order."""
        m = {str(k): str(v) for k, v in mapping.items()}
        return Quiver(
            tuple(m[v] for v in self.vertices),
            tuple(Arrow(a.name, m[a.tail], m[a.head]) for a in self.arrows),
        )

    def components(self) -> list[list[str]]:
        """Connected components of the underlying graph, in vertex order."""
        adj = {v: set() for v in self.vertices}
        for a in self.arrows:
            adj[a.tail].add(a.head)
            adj[a.head].add(a.tail)
        seen: set[str] = set()
        out = []
        for v in self.vertices:
            if v in seen:
                continue
            comp, todo = [], [v]
            seen.add(v)
            while todo:
                u = todo.pop()
                comp.append(u)
                for w in adj[u]:
                    if w not in seen:
                        seen.add(w)
                        todo.append(w)
            out.append(sorted(comp, key=self.vertices.index))
        return out

    def subquiver(self, vertices: Sequence[str]) -> Quiver:
        keep = set(vertices)
        return Quiver(
            tuple(v for v in self.vertices if v in keep),
            tuple(a for a in self.arrows if a.tail in keep and a.head in keep),
        )

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "arrows": [a.to_json() for a in self.arrows]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def to_dot(self) -> str:
        lines = ["digraph Q {"]
        for v in self.vertices:
            lines.append(f'  "{v}";')
        for a in self.arrows:
            lines.append(f'  "{a.tail}" -> "{a.head}" [label="{a.name}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def quiver_from_json(data: dict) -> Quiver:
    if not isinstance(data, dict) or "vertices" not in data:
        raise ValueError("quiver JSON needs a 'vertices' list")
    try:
        arrows = tuple(
            Arrow(str(a["name"]), str(a["tail"]), str(a["head"])) for a in data.get("arrows", [])
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed arrow entry: {exc}") from None
    return Quiver(tuple(str(v) for v in data["vertices"]), arrows)


def load_quiver(text: str) -> Quiver:
    """Parse the JSON quiver format."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed quiver JSON: {exc}") from None
    return quiver_from_json(data)


# ---------------------------------------------------------------------------
# paths


@dataclass(frozen=True)
class Path:
    """Either the trivial path at ``vertex`` or a composable arrow sequence.

    ``arrows[0]`` is applied last: for ``x = rho_1 ... rho_m`` the head is
    ``h(rho_1)`` and the tail is ``t(rho_m)``.
    """

    head: str
    tail: str
    arrows: tuple[str, ...] = ()

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    def key(self):
        return (self.length, self.arrows) if self.arrows else (0, (), self.head)

    def to_json(self):
        return {"e": self.head} if self.is_trivial else list(self.arrows)

    def __repr__(self):
        return f"e{self.head}" if self.is_trivial else "*".join(self.arrows)


def trivial_path(Q: Quiver, v) -> Path:
    v = str(v)
    Q.vertex_index(v)
    return Path(v, v)


def make_path(Q: Quiver, arrow_names: Sequence[str]) -> Path:
    if not arrow_names:
        raise ValueError("use trivial_path for length-0 paths")
    arrows = [Q.arrow(n) for n in arrow_names]
    for left, right in zip(arrows, arrows[1:]):
        if right.head != left.tail:
            raise ValueError(f"{left.name} and {right.name} are not composable")
    return Path(arrows[0].head, arrows[-1].tail, tuple(arrow_names))


def path_from_json(Q: Quiver, data) -> Path:
    if isinstance(data, dict):
        return trivial_path(Q, data["e"])
    return make_path(Q, list(data))


def compose(x: Path, y: Path) -> Path | None:
    """Concatenation ``xy`` (y first), or None when ``h(y) != t(x)``."""
    if y.head != x.tail:
        return None
    if x.is_trivial:
        return y
    if y.is_trivial:
        return x
    return Path(x.head, y.tail, x.arrows + y.arrows)


def enumerate_paths(Q: Quiver, max_len: int) -> list[Path]:
    """All paths of length <= max_len: trivial paths in vertex order, then
    by length and lexicographically by arrow names."""
    out = [Path(v, v) for v in Q.vertices]
    layer = [Path(a.head, a.tail, (a.name,)) for a in Q.arrows]
    length = 1
    while layer and length <= max_len:
        layer.sort(key=lambda p: p.arrows)
        out.extend(layer)
        nxt = []
        for p in layer:
            # extend on the tail side: p * a with h(a) = t(p)
            for a in Q.arrows_into(p.tail):
                nxt.append(Path(p.head, a.tail, p.arrows + (a.name,)))
        layer = nxt
        length += 1
    return out


def is_acyclic(Q: Quiver) -> bool:
    """Kahn's topological sort; loops count as cycles."""
    indeg = {v: 0 for v in Q.vertices}
    for a in Q.arrows:
        indeg[a.head] += 1
    todo = deque(v for v in Q.vertices if indeg[v] == 0)
    seen = 0
    while todo:
        v = todo.popleft()
        seen += 1
        for a in Q.arrows_from(v):
            indeg[a.head] -= 1
            if indeg[a.head] == 0:
                todo.append(a.head)
    return seen == len(Q.vertices)


# ---------------------------------------------------------------------------
# the double quiver

BAR_SUFFIX = "_bar"


@dataclass(frozen=True)
class DoubleQuiver:
    """A loop-free quiver with each arrow doubled, the involution ``bar`` and
    the orientation ``omega`` (the original arrows)."""

    base: Quiver
    quiver: Quiver
    bar: dict = field(compare=False, hash=False)
    omega: frozenset

    def bar_of(self, name: str) -> str:
        return self.bar[name]

    def epsilon(self, name: str) -> int:
        if name not in self.bar:
            raise KeyError(f"unknown arrow {name!r}")
        return 1 if name in self.omega else -1


def double(Q: Quiver) -> DoubleQuiver:
    if isinstance(Q, DoubleQuiver):
        raise TypeError("a double quiver is not doubled again")
    if Q.has_loops():
        raise ValueError("cannot double a quiver with loops")
    names = {a.name for a in Q.arrows}
    arrows = list(Q.arrows)
    bar = {}
    for a in Q.arrows:
        rev = a.name + BAR_SUFFIX
        if rev in names:
            raise ValueError(f"arrow name {rev!r} collides with a doubled arrow")
        arrows.append(Arrow(rev, a.head, a.tail))
        bar[a.name] = rev
        bar[rev] = a.name
    return DoubleQuiver(Q, Quiver(Q.vertices, tuple(arrows)), bar, frozenset(a.name for a in Q.arrows))


# ---------------------------------------------------------------------------
# standard quivers used throughout tests and the CLI


def linear_quiver(n: int, reverse: bool = False) -> Quiver:
    """Linearly oriented A_n: arrows ``a{i}: i -> i+1`` (reversed if asked)."""
    arrows = []
    for i in range(1, n):
        t, h = (i + 1, i) if reverse else (i, i + 1)
        arrows.append((f"a{i}", t, h))
    return Quiver.build(range(1, n + 1), arrows)


def kronecker_quiver(m: int = 2) -> Quiver:
    return Quiver.build([1, 2], [(f"a{k}", 1, 2) for k in range(1, m + 1)])


def cyclic_quiver(n: int) -> Quiver:
    return Quiver.build(range(1, n + 1), [(f"a{i}", i, i % n + 1) for i in range(1, n + 1)])


def jordan_quiver() -> Quiver:
    return Quiver.build([1], [("rho", 1, 1)])


def zigzag_a4_quiver() -> Quiver:
    """Four vertices with rho: 1->2, sigma: 2->3, lambda: 4->3."""
    return Quiver.build([1, 2, 3, 4], [("rho", 1, 2), ("sigma", 2, 3), ("lambda", 4, 3)])
