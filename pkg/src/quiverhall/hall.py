"""Ringel-Hall algebras over F_p, composition monomials, quantum Serre
relations, generic lifts across primes, and the graded dimensions of U+.

Structure constants are counted directly: for a class V and a target
submodule dimension, every graded subspace is enumerated vertex by vertex
(pruned as soon as an arrow between chosen vertices fails to preserve it),
and each stable subspace is sorted by the isomorphism classes of the
submodule and the quotient.
"""

from __future__ import annotations

import itertools
import warnings
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Sequence

from . import linalg as la
from .coeff_arith import HallCoefficient, LaurentPoly, PrimeField, interpolate_in_q, quantum_binomial
from .errors import AmbiguousKey, BudgetExceeded
from .forms import FINITE, cartan_matrix, classify_type, euler_form
from .quiver import Quiver, is_acyclic
from .representation import Rep, default_budget, fingerprint, orbit_table

SUBSPACE_BUDGET = 10**7
WORD_BUDGET = 20000


@dataclass(frozen=True, order=True)
class IsoClass:
    """An isomorphism class: dimension vector plus the index of its
    canonical point in the representation space."""

    height: int
    dims: tuple[int, ...]
    index: int

    @classmethod
    def make(cls, dims: Sequence[int], index: int) -> IsoClass:
        dims = tuple(dims)
        return cls(sum(dims), dims, int(index))


class HallElement:
    """Finite combination of isomorphism classes with coefficients in Q(v)."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: HallAlgebra, terms: dict[IsoClass, HallCoefficient] | None = None):
        self.algebra = algebra
        clean = {c: x for c, x in (terms or {}).items() if not x.is_zero()}
        self.terms = dict(sorted(clean.items()))

    def coefficient(self, cls: IsoClass) -> HallCoefficient:
        return self.terms.get(cls, HallCoefficient(self.algebra.p))

    def is_zero(self) -> bool:
        return not self.terms

    def grades(self) -> set[tuple[int, ...]]:
        return {c.dims for c in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.grades()) <= 1

    def _check(self, other: HallElement):
        if other.algebra is not self.algebra and (
            other.algebra.quiver != self.algebra.quiver or other.algebra.p != self.algebra.p
        ):
            raise ValueError("Hall elements from different algebras")

    def __add__(self, other: HallElement) -> HallElement:
        self._check(other)
        out = dict(self.terms)
        for c, x in other.terms.items():
            out[c] = out[c] + x if c in out else x
        return HallElement(self.algebra, out)

    def __neg__(self):
        return HallElement(self.algebra, {c: -x for c, x in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> HallElement:
        return HallElement(self.algebra, {c: x * s for c, x in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, HallElement):
            return self.algebra.multiply(self, other)
        return self.scale(other)

    def __rmul__(self, s):
        return self.scale(s)

    def __eq__(self, other):
        if not isinstance(other, HallElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def to_json(self) -> list[dict]:
        out = []
        for c, x in self.terms.items():
            rep = self.algebra.rep(c)
            out.append(
                {
                    "class": {"dim": list(c.dims), "rep": rep.to_json()["maps"]},
                    "coeff": x.to_json(),
                }
            )
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({x})[{c.dims}#{c.index}]" for c, x in self.terms.items())


class HallAlgebra:
    """The Ringel-Hall algebra of an acyclic quiver over F_p, twisted by
    ``v**<dim V1, dim V2>`` with ``v**2 == p``."""

    def __init__(self, quiver: Quiver, p: int, budget: int | None = None,
                 subspace_budget: int = SUBSPACE_BUDGET):
        if not is_acyclic(quiver):
            raise ValueError("Hall algebras are built only for quivers without oriented cycles")
        self.quiver = quiver
        self.p = p
        self.field = PrimeField(p)
        self.budget = default_budget() if budget is None else budget
        self.subspace_budget = subspace_budget
        self._tallies: dict[tuple, Counter] = {}
        self._subspaces: dict[tuple, list] = {}
        self._layout = [
            (quiver.vertex_index(a.tail), quiver.vertex_index(a.head)) for a in quiver.arrows
        ]

    # -- classes ---------------------------------------------------------

    def table(self, dims: Sequence[int]):
        return orbit_table(self.quiver, tuple(dims), self.p, self.budget)

    def classes(self, dims: Sequence[int]) -> list[IsoClass]:
        t = self.table(dims)
        return [IsoClass.make(dims, int(i)) for i in t.class_indices]

    def class_of(self, V: Rep) -> IsoClass:
        if V.quiver != self.quiver or V.field != self.field:
            raise ValueError("representation does not belong to this Hall algebra")
        t = self.table(V.dims)
        return IsoClass.make(V.dims, t.canonical_index(V.entries()))

    def rep(self, cls: IsoClass) -> Rep:
        return self.table(cls.dims).rep(cls.index)

    def coeff(self, value=1, v_exponent: int = 0) -> HallCoefficient:
        return HallCoefficient.v_power(self.p, v_exponent, value)

    def element(self, cls: IsoClass, coeff=None) -> HallElement:
        coeff = self.coeff(1) if coeff is None else coeff
        if not isinstance(coeff, HallCoefficient):
            coeff = self.coeff(coeff)
        return HallElement(self, {cls: coeff})

    def zero(self) -> HallElement:
        return HallElement(self)

    def one(self) -> HallElement:
        """[0], the class of the zero representation."""
        return self.element(self.classes((0,) * self.quiver.n_vertices)[0])

    def simple(self, v) -> HallElement:
        k = self.quiver.vertex_index(v)
        dims = tuple(int(i == k) for i in range(self.quiver.n_vertices))
        return self.element(self.classes(dims)[0])

    def euler(self, a: Sequence[int], b: Sequence[int]) -> int:
        return euler_form(self.quiver, a, b)

    # -- structure constants ----------------------------------------------

    def _subspace_list(self, n: int, k: int) -> list:
        key = (n, k)
        if key not in self._subspaces:
            self._subspaces[key] = list(la.subspaces(self.p, n, k))
        return self._subspaces[key]

    def subspace_candidates(self, dims: Sequence[int], sub_dims: Sequence[int]) -> int:
        out = 1
        for n, k in zip(dims, sub_dims):
            out *= la.gaussian_binomial(n, k, self.p)
        return out

    def stable_subspaces(self, V: Rep, sub_dims: Sequence[int]) -> Iterable[list]:
        """Graded subspaces of V of dimension ``sub_dims`` preserved by all
        arrows, as per-vertex (RREF rows, pivots) pairs."""
        dims = V.dims
        n = len(dims)
        mats = [m.rows for m in V.maps]
        # arrows checked as soon as both endpoints are chosen
        ready = defaultdict(list)
        for k, (t, h) in enumerate(self._layout):
            ready[max(t, h)].append(k)
        choices = [self._subspace_list(dims[i], sub_dims[i]) for i in range(n)]
        p = self.p
        chosen: list = [None] * n

        def stable(k) -> bool:
            t, h = self._layout[k]
            rows_t, _ = chosen[t]
            rows_h, piv_h = chosen[h]
            m = mats[k]
            for w in rows_t:
                u = [sum(a * b for a, b in zip(r, w)) % p for r in m]
                for row, pc in zip(rows_h, piv_h):
                    f = u[pc]
                    if f:
                        u = [(x - f * y) % p for x, y in zip(u, row)]
                if any(u):
                    return False
            return True

        def walk(i):
            if i == n:
                yield list(chosen)
                return
            for sub in choices[i]:
                chosen[i] = sub
                if all(stable(k) for k in ready[i]):
                    yield from walk(i + 1)
            chosen[i] = None

        yield from walk(0)

    def _sub_and_quotient(self, V: Rep, W: list) -> tuple[tuple, tuple]:
        p = self.p
        sub_entries, quo_entries = [], []
        for k, (t, h) in enumerate(self._layout):
            m = V.maps[k].rows
            rows_t, piv_t = W[t]
            rows_h, piv_h = W[h]
            free_t = [j for j in range(V.dims[t]) if j not in piv_t]
            free_h = [j for j in range(V.dims[h]) if j not in piv_h]
            # restriction: column c holds the image of the c-th basis row
            images = [[sum(a * b for a, b in zip(r, w)) % p for r in m] for w in rows_t]
            for r_idx in range(len(piv_h)):
                sub_entries.extend(img[piv_h[r_idx]] for img in images)
            # quotient: images of the free unit vectors, reduced mod W_h
            qcols = []
            for j in free_t:
                u = [r[j] for r in m]
                for row, pc in zip(rows_h, piv_h):
                    f = u[pc]
                    if f:
                        u = [(x - f * y) % p for x, y in zip(u, row)]
                qcols.append([u[i] for i in free_h])
            for r_idx in range(len(free_h)):
                quo_entries.extend(col[r_idx] for col in qcols)
        return tuple(sub_entries), tuple(quo_entries)

    def tally(self, V: IsoClass, sub_dims: Sequence[int]) -> Counter:
        """Counter over (quotient class, submodule class) of the stable graded
        subspaces of V with dimension ``sub_dims``."""
        sub_dims = tuple(sub_dims)
        key = (V, sub_dims)
        if key in self._tallies:
            return self._tallies[key]
        quo_dims = tuple(a - b for a, b in zip(V.dims, sub_dims))
        out: Counter = Counter()
        if any(d < 0 for d in quo_dims):
            self._tallies[key] = out
            return out
        rep = self.rep(V)
        sub_table, quo_table = self.table(sub_dims), self.table(quo_dims)
        for W in self.stable_subspaces(rep, sub_dims):
            s, q = self._sub_and_quotient(rep, W)
            out[
                (
                    IsoClass.make(quo_dims, quo_table.canonical_index(q)),
                    IsoClass.make(sub_dims, sub_table.canonical_index(s)),
                )
            ] += 1
        self._tallies[key] = out
        return out

    def hall_constant(self, V: IsoClass, V1: IsoClass, V2: IsoClass) -> int:
        """Number of submodules W of V with V/W ~ V1 and W ~ V2."""
        if tuple(a + b for a, b in zip(V1.dims, V2.dims)) != V.dims:
            warnings.warn("dimension mismatch in hall_constant; returning 0", stacklevel=2)
            return 0
        return self.tally(V, V2.dims)[(V1, V2)]

    def _check_budget(self, dims, sub_dims, n_classes):
        needed = n_classes * self.subspace_candidates(dims, sub_dims)
        if needed > self.subspace_budget:
            raise BudgetExceeded(f"subspace scan for dims {dims}", needed, self.subspace_budget)

    def multiply(self, x: HallElement, y: HallElement) -> HallElement:
        x._check(y)
        by_grade_x, by_grade_y = defaultdict(list), defaultdict(list)
        for c, a in x.terms.items():
            by_grade_x[c.dims].append((c, a))
        for c, b in y.terms.items():
            by_grade_y[c.dims].append((c, b))
        out: dict[IsoClass, HallCoefficient] = {}
        for d1, xs in by_grade_x.items():
            for d2, ys in by_grade_y.items():
                d = tuple(a + b for a, b in zip(d1, d2))
                twist = self.coeff(1, self.euler(d1, d2))
                targets = self.classes(d)
                self._check_budget(d, d2, len(targets))
                for V in targets:
                    t = self.tally(V, d2)
                    total = None
                    for A, a in xs:
                        for B, b in ys:
                            g = t.get((A, B), 0)
                            if g:
                                term = a * b * g
                                total = term if total is None else total + term
                    if total is not None:
                        contrib = total * twist
                        out[V] = out[V] + contrib if V in out else contrib
        return HallElement(self, out)

    # -- composition algebra ----------------------------------------------

    def composition_monomial(self, word: Sequence) -> HallElement:
        """[S^{i_1}] * ... * [S^{i_n}], multiplied left to right."""
        out = self.one()
        for v in word:
            out = self.multiply(out, self.simple(v))
        return out

    def serre_residual(self, i, j) -> HallElement:
        """The quantum Serre combination for (i, j) evaluated with u = [S]
        and t = v."""
        Q = self.quiver
        if str(i) == str(j):
            raise ValueError("Serre relations need distinct vertices")
        a, b = Q.vertex_index(i), Q.vertex_index(j)
        n = 1 - cartan_matrix(Q)[a][b]
        ui, uj = self.simple(i), self.simple(j)
        powers = [self.one()]
        for _ in range(n):
            powers.append(self.multiply(powers[-1], ui))
        out = self.zero()
        for k in range(n + 1):
            coeff = HallCoefficient.from_laurent(quantum_binomial(n, k, var="v"), self.p)
            if k % 2:
                coeff = -coeff
            term = self.multiply(self.multiply(powers[k], uj), powers[n - k])
            out = out + term.scale(coeff)
        return out

    def serre_check(self, i, j) -> tuple[bool, HallElement]:
        residual = self.serre_residual(i, j)
        return residual.is_zero(), residual


def hall_multiply(x: HallElement, y: HallElement) -> HallElement:
    return x.algebra.multiply(x, y)


def composition_monomial(Q: Quiver, word: Sequence, p: int, budget: int | None = None) -> HallElement:
    return HallAlgebra(Q, p, budget).composition_monomial(word)


def serre_check(Q: Quiver, i, j, p: int, budget: int | None = None) -> tuple[bool, HallElement]:
    return HallAlgebra(Q, p, budget).serre_check(i, j)


# ---------------------------------------------------------------------------
# generic lift across primes


@dataclass(frozen=True)
class GenericElement:
    """Terms keyed by class fingerprints with Laurent-polynomial coefficients
    in v."""

    terms: tuple[tuple[tuple, LaurentPoly], ...]

    def is_zero(self) -> bool:
        return not self.terms

    def as_dict(self) -> dict:
        return dict(self.terms)

    def to_json(self) -> list[dict]:
        return [
            {
                "class": {"dim": list(key[0]), "ranks": list(key[1]), "dim_end": key[2]},
                "coeff": poly.to_json(),
            }
            for key, poly in self.terms
        ]


def _lift_part(samples: list[tuple[int, Fraction]], degree_bound: int, parity: int) -> LaurentPoly:
    shift = 0
    for q, x in samples:
        if x:
            den = Fraction(x).denominator
            k = 0
            while den % q == 0:
                den //= q
                k += 1
            shift = max(shift, k)
    scaled = [(q, x * Fraction(q) ** shift) for q, x in samples]
    poly = interpolate_in_q(scaled, degree_bound)
    return LaurentPoly(
        {2 * (m - shift) + parity: c for m, c in poly.terms.items()}, var="v"
    )


def generic_lift(
    Q: Quiver,
    compute: Callable[[HallAlgebra], HallElement],
    primes: Sequence[int],
    degree_bound: int,
    budget: int | None = None,
) -> GenericElement:
    """Interpolate the per-prime values of ``compute`` into Laurent
    polynomials in v, keyed by isomorphism-invariant fingerprints."""
    primes = list(primes)
    if len(set(primes)) != len(primes):
        raise ValueError("primes must be distinct")
    if len(primes) < degree_bound + 3:
        raise ValueError(f"need at least {degree_bound + 3} primes for degree bound {degree_bound}")
    per_prime: dict[int, dict[tuple, HallCoefficient]] = {}
    for p in primes:
        alg = HallAlgebra(Q, p, budget)
        elem = compute(alg)
        fps: dict[tuple, IsoClass] = {}
        for dims in sorted(elem.grades()):
            for cls in alg.classes(dims):
                fp = fingerprint(alg.rep(cls))
                if fp in fps:
                    raise AmbiguousKey(
                        f"classes {fps[fp].index} and {cls.index} of dims {dims} share a fingerprint at p={p}"
                    )
                fps[fp] = cls
        per_prime[p] = {fp: elem.coefficient(cls) for fp, cls in fps.items() if cls in elem.terms}
    keys = sorted({k for vals in per_prime.values() for k in vals})
    terms = []
    for key in keys:
        coeffs = [(p, per_prime[p].get(key, HallCoefficient(p))) for p in primes]
        poly = _lift_part([(p, c.even) for p, c in coeffs], degree_bound, 0) + _lift_part(
            [(p, c.odd) for p, c in coeffs], degree_bound, 1
        )
        if not poly.is_zero():
            terms.append((key, poly))
    return GenericElement(tuple(terms))


def generic_monomial(Q: Quiver, word: Sequence, primes: Sequence[int], degree_bound: int,
                     budget: int | None = None) -> GenericElement:
    return generic_lift(Q, lambda alg: alg.composition_monomial(word), primes, degree_bound, budget)


def generic_serre_residual(Q: Quiver, i, j, primes: Sequence[int], degree_bound: int,
                           budget: int | None = None) -> GenericElement:
    return generic_lift(Q, lambda alg: alg.serre_residual(i, j), primes, degree_bound, budget)


# ---------------------------------------------------------------------------
# classical U+ and the C = H check


def _words(content: Sequence[int]) -> list[tuple[int, ...]]:
    letters = [i for i, c in enumerate(content) for _ in range(c)]
    return sorted(set(itertools.permutations(letters)))


def _multinomial(content: Sequence[int]) -> int:
    out, total = 1, 0
    for c in content:
        total += c
        out *= comb(total, c)
    return out


def u_plus_graded_dim(Q: Quiver, nu: Sequence[int], word_budget: int = WORD_BUDGET) -> int:
    """dim of the nu-graded piece of the free algebra on e_i modulo the
    two-sided ideal of the classical Serre relations."""
    nu = tuple(int(x) for x in nu)
    n = len(nu)
    if n != Q.n_vertices:
        raise ValueError("grade does not match the quiver")
    if _multinomial(nu) > word_budget:
        raise BudgetExceeded(f"words of content {nu}", _multinomial(nu), word_budget)
    words = _words(nu)
    index = {w: k for k, w in enumerate(words)}
    C = cartan_matrix(Q)
    rows = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            m = 1 - C[i][j]
            rel_content = [0] * n
            rel_content[i] += m
            rel_content[j] += 1
            rest = tuple(a - b for a, b in zip(nu, rel_content))
            if any(r < 0 for r in rest):
                continue
            rel = [((i,) * k + (j,) + (i,) * (m - k), (-1) ** k * comb(m, k)) for k in range(m + 1)]
            for w in _words(rest):
                for s in range(len(w) + 1):
                    row = [0] * len(words)
                    for mono, c in rel:
                        row[index[w[:s] + mono + w[s:]]] += c
                    rows.append(row)
    if not rows:
        return len(words)
    from .coeff_arith import QQ

    return len(words) - len(la.rref(QQ, [[Fraction(x) for x in r] for r in rows], len(words))[1])


def finite_type_dim_check(Q: Quiver, nu: Sequence[int], p: int, budget: int | None = None) -> dict:
    """Compare dim H_nu (number of classes) with dim U+_nu."""
    cls = classify_type(Q)
    if cls.verdict != FINITE:
        raise ValueError(f"dimension check needs a finite-type quiver, got {cls.verdict}")
    nu = tuple(int(x) for x in nu)
    hall_dim = len(orbit_table(Q, nu, p, budget))
    u_dim = u_plus_graded_dim(Q, nu)
    return {
        "nu": list(nu),
        "prime": p,
        "dim_hall": hall_dim,
        "dim_u_plus": u_dim,
        "equal": hall_dim == u_dim,
    }
