"""Exact dense linear algebra over a field object.

Field objects are :class:`~quiverhall.coeff_arith.PrimeField` or
:class:`~quiverhall.coeff_arith.RationalField`. Matrices carry their shape
explicitly so that ``0 x n`` and ``n x 0`` maps stay distinguishable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import sympy


@dataclass(frozen=True)
class Matrix:
    nrows: int
    ncols: int
    rows: tuple[tuple, ...]

    def __post_init__(self):
        if len(self.rows) != self.nrows or any(len(r) != self.ncols for r in self.rows):
            raise ValueError(f"matrix data does not have shape {self.shape}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ncols: int | None = None) -> Matrix:
        rows = tuple(tuple(r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        return cls(len(rows), ncols, rows)

    @classmethod
    def zeros(cls, field, m: int, n: int) -> Matrix:
        return cls(m, n, tuple((field.zero,) * n for _ in range(m)))

    @classmethod
    def identity(cls, field, n: int) -> Matrix:
        return cls(
            n, n, tuple(tuple(field.one if i == j else field.zero for j in range(n)) for i in range(n))
        )

    @classmethod
    def unit(cls, field, m: int, n: int, i: int, j: int) -> Matrix:
        rows = [[field.zero] * n for _ in range(m)]
        rows[i][j] = field.one
        return cls.from_rows(rows, n)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def entries(self) -> tuple:
        """Row-major flat tuple of entries."""
        return tuple(x for r in self.rows for x in r)

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def transpose(self) -> Matrix:
        return Matrix(self.ncols, self.nrows, tuple(zip(*self.rows)) if self.nrows else tuple(() for _ in range(self.ncols)))

    def is_zero(self, field) -> bool:
        return all(field.is_zero(x) for r in self.rows for x in r)

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols}, {[list(r) for r in self.rows]})"


def from_columns(field, nrows: int, cols: Sequence[Sequence]) -> Matrix:
    return Matrix(nrows, len(cols), tuple(tuple(c[i] for c in cols) for i in range(nrows)))


def add(field, a: Matrix, b: Matrix) -> Matrix:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    return Matrix(
        a.nrows, a.ncols,
        tuple(tuple(field.add(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a.rows, b.rows)),
    )


def sub(field, a: Matrix, b: Matrix) -> Matrix:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    return Matrix(
        a.nrows, a.ncols,
        tuple(tuple(field.sub(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a.rows, b.rows)),
    )


def scale(field, c, a: Matrix) -> Matrix:
    return Matrix(a.nrows, a.ncols, tuple(tuple(field.mul(c, x) for x in r) for r in a.rows))


def matmul(field, a: Matrix, b: Matrix) -> Matrix:
    if a.ncols != b.nrows:
        raise ValueError(f"cannot multiply {a.shape} by {b.shape}")
    cols = list(zip(*b.rows)) if b.nrows else [()] * b.ncols
    out = []
    for r in a.rows:
        row = []
        for c in cols:
            s = field.zero
            for x, y in zip(r, c):
                if x and y:
                    s = s + x * y
            row.append(field.from_int(s) if field.is_finite else s)
        out.append(tuple(row))
    return Matrix(a.nrows, b.ncols, tuple(out))


def matvec(field, a: Matrix, v: Sequence) -> tuple:
    out = []
    for r in a.rows:
        s = field.zero
        for x, y in zip(r, v):
            if x and y:
                s = s + x * y
        out.append(field.from_int(s) if field.is_finite else s)
    return tuple(out)


def matpow(field, a: Matrix, n: int) -> Matrix:
    out = Matrix.identity(field, a.nrows)
    base = a
    while n:
        if n & 1:
            out = matmul(field, out, base)
        base = matmul(field, base, base)
        n >>= 1
    return out


def block_diagonal(field, blocks: Sequence[Matrix]) -> Matrix:
    m = sum(b.nrows for b in blocks)
    n = sum(b.ncols for b in blocks)
    rows = [[field.zero] * n for _ in range(m)]
    r0 = c0 = 0
    for b in blocks:
        for i, row in enumerate(b.rows):
            rows[r0 + i][c0 : c0 + b.ncols] = row
        r0 += b.nrows
        c0 += b.ncols
    return Matrix.from_rows(rows, n)


# ---------------------------------------------------------------------------
# elimination


def rref(field, rows: Sequence[Sequence], ncols: int) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(m)):
            if not field.is_zero(m[i][c]):
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(inv, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and not field.is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(field, a: Matrix) -> int:
    return len(rref(field, a.rows, a.ncols)[1])


def nullspace(field, a: Matrix) -> list[tuple]:
    """Basis of ``{x : a x = 0}`` as column vectors."""
    red, pivots = rref(field, a.rows, a.ncols)
    free = [c for c in range(a.ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [field.zero] * a.ncols
        v[f] = field.one
        for row, pc in zip(red, pivots):
            v[pc] = field.neg(row[f])
        basis.append(tuple(v))
    return basis


def row_space(field, vectors: Sequence[Sequence], n: int) -> list[tuple]:
    """RREF basis of the span of ``vectors`` in k^n."""
    red, _ = rref(field, vectors, n)
    return [tuple(r) for r in red]


def column_space(field, a: Matrix) -> list[tuple]:
    return row_space(field, a.transpose().rows, a.nrows)


def kernel_basis(field, a: Matrix) -> list[tuple]:
    return nullspace(field, a)


def det(field, a: Matrix):
    if a.nrows != a.ncols:
        raise ValueError("determinant of a non-square matrix")
    m = [list(r) for r in a.rows]
    n = a.nrows
    d = field.one
    for c in range(n):
        pivot = next((i for i in range(c, n) if not field.is_zero(m[i][c])), None)
        if pivot is None:
            return field.zero
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            d = field.neg(d)
        d = field.mul(d, m[c][c])
        inv = field.inv(m[c][c])
        for i in range(c + 1, n):
            if not field.is_zero(m[i][c]):
                f = field.mul(m[i][c], inv)
                m[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[i], m[c])]
    return d


def is_invertible(field, a: Matrix) -> bool:
    return a.nrows == a.ncols and rank(field, a) == a.nrows


def inverse(field, a: Matrix) -> Matrix:
    n = a.nrows
    if a.ncols != n:
        raise ValueError("inverse of a non-square matrix")
    aug = [list(r) + [field.one if i == j else field.zero for j in range(n)] for i, r in enumerate(a.rows)]
    red, pivots = rref(field, aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ZeroDivisionError("matrix is singular")
    return Matrix.from_rows([r[n:] for r in red], n)


def in_span(field, basis_rref: Sequence[Sequence], pivots: Sequence[int], v: Sequence) -> bool:
    """Membership test against an RREF basis with known pivots."""
    w = list(v)
    for row, pc in zip(basis_rref, pivots):
        if not field.is_zero(w[pc]):
            f = w[pc]
            w = [field.sub(x, field.mul(f, y)) for x, y in zip(w, row)]
    return all(field.is_zero(x) for x in w)


def reduce_mod(field, basis_rref: Sequence[Sequence], pivots: Sequence[int], v: Sequence) -> list:
    w = list(v)
    for row, pc in zip(basis_rref, pivots):
        if not field.is_zero(w[pc]):
            f = w[pc]
            w = [field.sub(x, field.mul(f, y)) for x, y in zip(w, row)]
    return w


def solve_left_coords(field, basis: Sequence[Sequence], v: Sequence) -> tuple:
    """Coordinates of ``v`` in terms of the (independent) vectors ``basis``."""
    n = len(v)
    k = len(basis)
    aug = [[basis[j][i] for j in range(k)] + [v[i]] for i in range(n)]
    red, pivots = rref(field, aug, k + 1)
    if k in pivots:
        raise ValueError("vector is not in the span")
    coords = [field.zero] * k
    for row, pc in zip(red, pivots):
        coords[pc] = row[k]
    return tuple(coords)


# ---------------------------------------------------------------------------
# polynomials of matrices


def charpoly(field, a: Matrix) -> list:
    """Monic characteristic polynomial, coefficients low degree first.

    Hessenberg reduction followed by the standard recurrence; works over
    any field and needs O(n^3) operations.
    """
    n = a.nrows
    h = [list(r) for r in a.rows]
    for m in range(1, n - 1):
        pivot = next((i for i in range(m, n) if not field.is_zero(h[i][m - 1])), None)
        if pivot is None:
            continue
        if pivot != m:
            h[m], h[pivot] = h[pivot], h[m]
            for r in h:
                r[m], r[pivot] = r[pivot], r[m]
        inv = field.inv(h[m][m - 1])
        for i in range(m + 1, n):
            f = field.mul(h[i][m - 1], inv)
            if field.is_zero(f):
                continue
            h[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(h[i], h[m])]
            for r in h:
                r[m] = field.add(r[m], field.mul(f, r[i]))
    # p[k] = char poly of leading k x k block, as coefficient lists
    polys = [[field.one]]
    for k in range(1, n + 1):
        prev = polys[k - 1]
        # (x - h[k-1][k-1]) * p_{k-1}
        cur = [field.zero] + list(prev)
        for i, c in enumerate(prev):
            cur[i] = field.sub(cur[i], field.mul(h[k - 1][k - 1], c))
        t = field.one
        for i in range(1, k):
            t = field.mul(t, h[k - i][k - i - 1])
            coef = field.mul(t, h[k - i - 1][k - 1])
            if field.is_zero(coef):
                continue
            for j, c in enumerate(polys[k - i - 1]):
                cur[j] = field.sub(cur[j], field.mul(coef, c))
        polys.append(cur)
    return polys[n]


def poly_of_matrix(field, coeffs: Sequence, a: Matrix) -> Matrix:
    """Evaluate the polynomial with low-first ``coeffs`` at ``a`` (Horner)."""
    n = a.nrows
    out = Matrix.zeros(field, n, n)
    ident = Matrix.identity(field, n)
    for c in reversed(list(coeffs)):
        out = add(field, matmul(field, out, a), scale(field, c, ident))
    return out


_X = sympy.Symbol("x")


def _to_sympy_poly(field, coeffs: Sequence):
    expr_coeffs = [sympy.Rational(int(Fraction(c).numerator), int(Fraction(c).denominator)) for c in reversed(list(coeffs))]
    if field.is_finite:
        return sympy.Poly(expr_coeffs, _X, modulus=field.p)
    return sympy.Poly(expr_coeffs, _X, domain="QQ")


def _from_sympy_poly(field, poly) -> list:
    out = []
    for c in reversed(poly.all_coeffs()):
        if field.is_finite:
            out.append(int(c) % field.p)
        else:
            out.append(Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])))
    return out


def factor_poly(field, coeffs: Sequence) -> list[tuple[list, int]]:
    """Monic irreducible factors with multiplicities (low-first coefficients)."""
    poly = _to_sympy_poly(field, coeffs)
    _, factors = poly.factor_list()
    out = []
    for f, mult in factors:
        f = f.monic()
        out.append((_from_sympy_poly(field, f), mult))
    out.sort(key=lambda fm: (len(fm[0]), [str(c) for c in fm[0]]))
    return out


def poly_mul(field, a: Sequence, b: Sequence) -> list:
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = field.add(out[i + j], field.mul(x, y))
    return out


def poly_pow(field, a: Sequence, n: int) -> list:
    out = [field.one]
    for _ in range(n):
        out = poly_mul(field, out, a)
    return out


# ---------------------------------------------------------------------------
# subspace enumeration over F_p


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def subspaces(p: int, n: int, k: int) -> Iterator[tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]]:
    """All k-dimensional subspaces of F_p^n as (RREF rows, pivot columns).

    Ordered by pivot set (lexicographic) then by the free entries.
    """
    if k < 0 or k > n:
        return
    for pivots in itertools.combinations(range(n), k):
        pivot_set = set(pivots)
        free_slots = [
            (r, c)
            for r, pc in enumerate(pivots)
            for c in range(pc + 1, n)
            if c not in pivot_set
        ]
        for values in itertools.product(range(p), repeat=len(free_slots)):
            rows = [[0] * n for _ in range(k)]
            for r, pc in enumerate(pivots):
                rows[r][pc] = 1
            for (r, c), val in zip(free_slots, values):
                rows[r][c] = val
            yield tuple(tuple(r) for r in rows), pivots
