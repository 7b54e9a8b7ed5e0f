"""Euler, Cartan and Tits forms; finite/tame/wild classification; roots;
and the Gabriel and Kac verification harnesses."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ClassifierDisagreement
from .quiver import Quiver

FINITE, TAME, WILD = "finite", "tame", "wild"
REAL, IMAGINARY = "real", "imaginary"
DEFAULT_HEIGHT = 8


def _vec(Q: Quiver, alpha) -> tuple[int, ...]:
    if isinstance(alpha, dict):
        return tuple(int(alpha.get(v, 0)) for v in Q.vertices)
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != Q.n_vertices:
        raise ValueError(f"vector of length {len(alpha)} for a quiver with {Q.n_vertices} vertices")
    return alpha


def euler_matrix(Q: Quiver) -> list[list[int]]:
    n = Q.n_vertices
    E = [[int(i == j) for j in range(n)] for i in range(n)]
    for a in Q.arrows:
        E[Q.vertex_index(a.tail)][Q.vertex_index(a.head)] -= 1
    return E


def cartan_matrix(Q: Quiver) -> list[list[int]]:
    E = euler_matrix(Q)
    n = len(E)
    return [[E[i][j] + E[j][i] for j in range(n)] for i in range(n)]


def euler_form(Q: Quiver, alpha, beta) -> int:
    a, b = _vec(Q, alpha), _vec(Q, beta)
    out = sum(x * y for x, y in zip(a, b))
    for arr in Q.arrows:
        out -= a[Q.vertex_index(arr.tail)] * b[Q.vertex_index(arr.head)]
    return out


def cartan_form(Q: Quiver, alpha, beta) -> int:
    return euler_form(Q, alpha, beta) + euler_form(Q, beta, alpha)


def tits_form(Q: Quiver, alpha) -> int:
    q = euler_form(Q, alpha, alpha)
    a = _vec(Q, alpha)
    C = cartan_matrix(Q)
    half = sum(a[i] * C[i][j] * a[j] for i in range(len(a)) for j in range(len(a)))
    if 2 * q != half:
        raise ClassifierDisagreement("Tits form disagrees with half the Cartan form")
    return q


# ---------------------------------------------------------------------------
# classification


def definiteness(C: Sequence[Sequence[int]]) -> str:
    """``"pd"``, ``"psd"`` or ``"indefinite"`` by exact symmetric elimination."""
    n = len(C)
    m = [[Fraction(x) for x in row] for row in C]
    active = list(range(n))
    singular = False
    while active:
        k = next((i for i in active if m[i][i] != 0), None)
        if k is None:
            # all remaining diagonal entries vanish: semidefinite only if the
            # remaining block is zero
            if any(m[i][j] for i in active for j in active):
                return "indefinite"
            return "psd"
        if m[k][k] < 0:
            return "indefinite"
        active.remove(k)
        for i in active:
            f = m[i][k] / m[k][k]
            if f:
                for j in active:
                    m[i][j] -= f * m[k][j]
        # a zero pivot left behind later means a radical direction
        for i in list(active):
            if m[i][i] == 0 and all(m[i][j] == 0 for j in active):
                active.remove(i)
                singular = True
    return "psd" if singular else "pd"


def _component_edges(Q: Quiver, comp: Sequence[str]) -> Counter:
    keep = set(comp)
    edges = Counter()
    for a in Q.arrows:
        if a.tail in keep:
            edges[frozenset((a.tail, a.head))] += 1
    return edges


def graph_shape(Q: Quiver, comp: Sequence[str]) -> tuple[str, str]:
    """Recognize a connected underlying graph: (type, name)."""
    n = len(comp)
    edges = _component_edges(Q, comp)
    if any(len(e) == 1 for e in edges):
        return WILD, "loop vertex: outside ADE classification"
    mults = list(edges.values())
    if any(m >= 3 for m in mults):
        return WILD, "multiple edge"
    if any(m == 2 for m in mults):
        if n == 2 and len(edges) == 1:
            return TAME, "~A1"
        return WILD, "multiple edge"
    degree = Counter()
    for e in edges:
        for v in e:
            degree[v] += 1
    n_edges = len(edges)
    if n == 1:
        return FINITE, "A1"
    if n_edges == n:
        if all(degree[v] == 2 for v in comp):
            return TAME, f"~A{n - 1}"
        return WILD, "cycle with branches"
    if n_edges != n - 1:
        return WILD, "several cycles"
    # a tree from here on
    branch = [v for v in comp if degree[v] >= 3]
    if not branch:
        return FINITE, f"A{n}"
    adj = {v: set() for v in comp}
    for e in edges:
        u, w = tuple(e)
        adj[u].add(w)
        adj[w].add(u)
    if len(branch) == 1:
        c = branch[0]
        arms = sorted(_arm_length(adj, c, w) for w in adj[c])
        if len(arms) == 4:
            return (TAME, "~D4") if arms == [1, 1, 1, 1] else (WILD, "star")
        if len(arms) > 4:
            return WILD, "star"
        a, b, cc = arms
        if (a, b) == (1, 1):
            return FINITE, f"D{n}"
        shapes = {(1, 2, 2): (FINITE, "E6"), (1, 2, 3): (FINITE, "E7"), (1, 2, 4): (FINITE, "E8"),
                  (2, 2, 2): (TAME, "~E6"), (1, 3, 3): (TAME, "~E7"), (1, 2, 5): (TAME, "~E8")}
        return shapes.get((a, b, cc), (WILD, "tree"))
    if len(branch) == 2 and all(degree[v] == 3 for v in branch):
        leaves_ok = all(
            sum(1 for w in adj[v] if degree[w] == 1) == 2 for v in branch
        )
        if leaves_ok:
            return TAME, f"~D{n - 1}"
    return WILD, "tree"


def _arm_length(adj, centre, start) -> int:
    length, prev, cur = 1, centre, start
    while True:
        nxt = [w for w in adj[cur] if w != prev]
        if len(nxt) != 1:
            return length
        prev, cur = cur, nxt[0]
        length += 1


@dataclass(frozen=True)
class Classification:
    verdict: str
    components: tuple[tuple[str, str], ...]  # (type, graph name) per component
    notes: tuple[str, ...] = ()

    @property
    def graph(self) -> str:
        return "+".join(name for _, name in self.components)

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "graph": self.graph}
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _aggregate(kinds: Sequence[str]) -> str:
    if WILD in kinds:
        return WILD
    return TAME if TAME in kinds else FINITE


def classify_type(Q: Quiver) -> Classification:
    """Finite/tame/wild by two independent routes that must agree."""
    kinds, notes, comps = [], [], []
    for comp in Q.components():
        shape_kind, name = graph_shape(Q, comp)
        sub = Q.subquiver(comp)
        C = cartan_matrix(sub)
        if any(C[i][i] < 2 for i in range(len(C))):
            notes.append(f"{name} at {comp}")
            kinds.append(WILD)
            comps.append((WILD, name))
            continue
        definite = definiteness(C)
        form_kind = {"pd": FINITE, "psd": TAME, "indefinite": WILD}[definite]
        if form_kind != shape_kind:
            raise ClassifierDisagreement(
                f"component {comp}: Cartan form says {form_kind}, shape says {shape_kind} ({name})"
            )
        kinds.append(shape_kind)
        comps.append((shape_kind, name))
    return Classification(_aggregate(kinds), tuple(comps), tuple(notes))


# ---------------------------------------------------------------------------
# roots


@dataclass(frozen=True)
class Root:
    vector: tuple[int, ...]
    kind: str

    @property
    def height(self) -> int:
        return sum(self.vector)

    def to_json(self) -> dict:
        return {"vector": list(self.vector), "kind": self.kind}


def _support_connected(Q: Quiver, alpha: Sequence[int]) -> bool:
    supp = [v for v, a in zip(Q.vertices, alpha) if a]
    if not supp:
        return False
    return len(Q.subquiver(supp).components()) == 1


def reflect(C, alpha: Sequence[int], i: int) -> tuple[int, ...]:
    pairing = sum(C[i][j] * alpha[j] for j in range(len(alpha)))
    out = list(alpha)
    out[i] -= pairing
    return tuple(out)


def real_roots(Q: Quiver, height_bound: int | None) -> list[tuple[int, ...]]:
    """Positive real roots reachable from real simple roots by reflections,
    never exceeding ``height_bound`` (None means run to closure)."""
    C = cartan_matrix(Q)
    n = len(C)
    real_simple = [i for i in range(n) if C[i][i] == 2]
    simple = [tuple(int(j == i) for j in range(n)) for i in real_simple]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for alpha in frontier:
            for i in real_simple:
                beta = reflect(C, alpha, i)
                if any(b < 0 for b in beta) or beta in seen:
                    continue
                if height_bound is not None and sum(beta) > height_bound:
                    continue
                seen.add(beta)
                nxt.append(beta)
        frontier = nxt
    return sorted(seen, key=lambda a: (sum(a), a))


def positive_roots(Q: Quiver, height_bound: int = DEFAULT_HEIGHT) -> list[Root]:
    """All positive roots for finite type; real roots plus imaginary-root
    candidates (connected support, q <= 0) up to ``height_bound`` otherwise."""
    finite = classify_type(Q).verdict == FINITE
    if finite:
        return [Root(a, REAL) for a in real_roots(Q, None)]
    out = [Root(a, REAL) for a in real_roots(Q, height_bound)]
    n = Q.n_vertices
    for alpha in itertools.product(range(height_bound + 1), repeat=n):
        if not 0 < sum(alpha) <= height_bound:
            continue
        if tits_form(Q, alpha) <= 0 and _support_connected(Q, alpha):
            out.append(Root(alpha, IMAGINARY))
    out.sort(key=lambda r: (r.height, r.vector, r.kind))
    return out


# ---------------------------------------------------------------------------
# verification harnesses


def _dim_vectors(n: int, bound: int | Sequence[int]):
    bounds = [bound] * n if isinstance(bound, int) else list(bound)
    for d in itertools.product(*(range(b + 1) for b in bounds)):
        if any(d):
            yield d


def indecomposable_census(Q: Quiver, p: int, dim_bound, budget: int | None = None) -> dict:
    """Dimension vector -> list of indecomposable class representatives."""
    from .representation import enumerate_iso_classes, is_indecomposable

    out = {}
    for d in _dim_vectors(Q.n_vertices, dim_bound):
        reps = [V for V in enumerate_iso_classes(Q, d, p, budget) if is_indecomposable(V)]
        if reps:
            out[d] = reps
    return out


def _within(alpha, bound) -> bool:
    bounds = [bound] * len(alpha) if isinstance(bound, int) else list(bound)
    return all(a <= b for a, b in zip(alpha, bounds))


def check_gabriel(Q: Quiver, p: int, dim_bound=None, budget: int | None = None) -> dict:
    """Indecomposables over F_p against positive roots, for finite type."""
    cls = classify_type(Q)
    if cls.verdict != FINITE:
        raise ValueError(f"Gabriel check needs a finite-type quiver, got {cls.verdict}")
    roots = [r.vector for r in positive_roots(Q)]
    if dim_bound is None:
        dim_bound = max(max(r) for r in roots) if roots else 0
    census = indecomposable_census(Q, p, dim_bound, budget)
    checked = [r for r in roots if _within(r, dim_bound)]
    problems = []
    for r in checked:
        count = len(census.get(r, []))
        if count != 1:
            problems.append(f"root {list(r)} has {count} indecomposable classes")
    for d in census:
        if d not in roots:
            problems.append(f"indecomposable of dimension {list(d)} is not a root")
    return {
        "roots": [list(r) for r in roots],
        "indecomposables": [{"dim": list(d), "count": len(v)} for d, v in sorted(census.items(), key=lambda kv: (sum(kv[0]), kv[0]))],
        "verdict": "bijection" if not problems else "mismatch",
        "problems": problems,
        "graph": cls.graph,
        "prime": p,
    }


def check_kac(Q: Quiver, p: int, dim_bound, budget: int | None = None) -> dict:
    """Indecomposable dimension vectors against real and imaginary roots."""
    height = sum([dim_bound] * Q.n_vertices if isinstance(dim_bound, int) else dim_bound)
    roots = positive_roots(Q, height)
    kind = {r.vector: r.kind for r in roots}
    census = indecomposable_census(Q, p, dim_bound, budget)
    problems = []
    for d in census:
        if d not in kind:
            problems.append(f"indecomposable of dimension {list(d)} is not a root")
    for r in roots:
        if r.kind == REAL and _within(r.vector, dim_bound):
            count = len(census.get(r.vector, []))
            if count != 1:
                problems.append(f"real root {list(r.vector)} has {count} indecomposable classes")
    rows = []
    for d, reps in sorted(census.items(), key=lambda kv: (sum(kv[0]), kv[0])):
        rows.append({"dim": list(d), "count": len(reps), "kind": kind.get(d, "not a root")})
    return {
        "roots": [r.to_json() for r in roots if _within(r.vector, dim_bound)],
        "indecomposables": rows,
        "verdict": "consistent" if not problems else "mismatch",
        "problems": problems,
        "prime": p,
    }
