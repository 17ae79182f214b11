"""Exact matrices over field elements, rational elimination, integer lattices.

Matrix entries are FieldElements; the rational and integer routines work
on plain lists of Fractions / ints.  Everything is deterministic: pivots
are chosen first-nonzero, Hermite normal forms are canonical (positive
pivots, reduced entries above), so ranks and bases are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import DegenerateLattice
from .exactfield import FieldElement, NumberField, union_field

_F0 = Fraction(0)


# ---------------------------------------------------------------------------
# matrices over a number field
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Mat:
    rows: tuple[tuple[FieldElement, ...], ...]

    @staticmethod
    def from_rows(rows) -> "Mat":
        rows = [list(r) for r in rows]
        field = None
        for r in rows:
            for x in r:
                if isinstance(x, FieldElement):
                    field = x.field if field is None else union_field(field, x.field)
        if field is None:
            raise ValueError("matrix needs at least one field element")
        out = []
        for r in rows:
            out.append(tuple(
                x.in_field(field) if isinstance(x, FieldElement) else field.rational(x)
                for x in r))
        return Mat(tuple(out))

    @staticmethod
    def identity(field: NumberField, n: int) -> "Mat":
        one, zero = field.one(), field.zero()
        return Mat(tuple(tuple(one if i == j else zero for j in range(n))
                         for i in range(n)))

    @staticmethod
    def zero(field: NumberField, m: int, n: int) -> "Mat":
        z = field.zero()
        return Mat(tuple(tuple(z for _ in range(n)) for _ in range(m)))

    @staticmethod
    def diagonal(entries) -> "Mat":
        entries = list(entries)
        field = entries[0].field
        n = len(entries)
        z = field.zero()
        return Mat.from_rows([[entries[i] if i == j else z for j in range(n)]
                              for i in range(n)])

    @property
    def field(self) -> NumberField:
        return self.rows[0][0].field

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.rows[0]))

    def __getitem__(self, ij):
        return self.rows[ij[0]][ij[1]]

    def row(self, k):
        return self.rows[k]

    def col(self, k):
        return tuple(r[k] for r in self.rows)

    def __matmul__(self, other: "Mat") -> "Mat":
        m, n = self.shape
        n2, p = other.shape
        if n != n2:
            raise ValueError("shape mismatch")
        if self.field != other.field:
            f = union_field(self.field, other.field)
            return self.map(lambda x: x.in_field(f)) @ other.map(lambda x: x.in_field(f))
        out = []
        for i in range(m):
            row = []
            for j in range(p):
                acc = self.field.zero()
                for k in range(n):
                    a = self.rows[i][k]
                    if a.is_zero():
                        continue
                    b = other.rows[k][j]
                    if b.is_zero():
                        continue
                    acc = acc + a * b
                row.append(acc)
            out.append(tuple(row))
        return Mat(tuple(out))

    def __add__(self, other: "Mat") -> "Mat":
        return Mat.from_rows([[a + b for a, b in zip(ra, rb)]
                              for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other: "Mat") -> "Mat":
        return Mat.from_rows([[a - b for a, b in zip(ra, rb)]
                              for ra, rb in zip(self.rows, other.rows)])

    def __neg__(self) -> "Mat":
        return self.map(lambda x: -x)

    def scale(self, s) -> "Mat":
        return self.map(lambda x: x * s)

    def map(self, f) -> "Mat":
        return Mat(tuple(tuple(f(x) for x in r) for r in self.rows))

    def transpose(self) -> "Mat":
        m, n = self.shape
        return Mat(tuple(tuple(self.rows[i][j] for i in range(m)) for j in range(n)))

    def conj(self) -> "Mat":
        return self.map(lambda x: x.conjugate())

    def conj_t(self) -> "Mat":
        return self.transpose().conj()

    def is_zero(self) -> bool:
        return all(x.is_zero() for r in self.rows for x in r)

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(self.rows)

    def det(self) -> FieldElement:
        m, n = self.shape
        if m != n:
            raise ValueError("determinant of a non-square matrix")
        rows = [list(r) for r in self.rows]
        det = self.field.one()
        for col in range(n):
            piv = None
            for r in range(col, n):
                if not rows[r][col].is_zero():
                    piv = r
                    break
            if piv is None:
                return self.field.zero()
            if piv != col:
                rows[col], rows[piv] = rows[piv], rows[col]
                det = -det
            det = det * rows[col][col]
            inv = self.field.one() / rows[col][col]
            rows[col] = [x * inv for x in rows[col]]
            for r in range(col + 1, n):
                f = rows[r][col]
                if not f.is_zero():
                    rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
        return det

    def inv(self) -> "Mat":
        m, n = self.shape
        if m != n:
            raise ValueError("inverse of a non-square matrix")
        field = self.field
        aug = [list(r) + list(Mat.identity(field, n).rows[k])
               for k, r in enumerate(self.rows)]
        for col in range(n):
            piv = None
            for r in range(col, n):
                if not aug[r][col].is_zero():
                    piv = r
                    break
            if piv is None:
                raise DegenerateLattice("singular matrix")
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = field.one() / aug[col][col]
            aug[col] = [x * inv for x in aug[col]]
            for r in range(n):
                if r != col and not aug[r][col].is_zero():
                    f = aug[r][col]
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
        return Mat(tuple(tuple(row[n:]) for row in aug))

    def mul_vec(self, vec):
        """Matrix times a column vector of field elements or rationals."""
        field = self.field
        vec = [x.in_field(field) if isinstance(x, FieldElement) else field.rational(x)
               for x in vec]
        out = []
        for row in self.rows:
            acc = field.zero()
            for a, b in zip(row, vec):
                if not (a.is_zero() or b.is_zero()):
                    acc = acc + a * b
            out.append(acc)
        return tuple(out)

    def submatrix(self, rows, cols) -> "Mat":
        return Mat(tuple(tuple(self.rows[i][j] for j in cols) for i in rows))

    def stack(self, other: "Mat") -> "Mat":
        if self.field != other.field:
            f = union_field(self.field, other.field)
            return self.map(lambda x: x.in_field(f)).stack(
                other.map(lambda x: x.in_field(f)))
        return Mat(self.rows + other.rows)

    def entries_str(self):
        return [[str(x) for x in r] for r in self.rows]


# ---------------------------------------------------------------------------
# rational elimination
# ---------------------------------------------------------------------------

def rref(rows):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    rows = [list(map(Fraction, r)) for r in rows]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for k in range(r, len(rows)):
            if rows[k][c] != 0:
                piv = k
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][c] != 0:
                f = rows[k][c]
                rows[k] = [v - f * w for v, w in zip(rows[k], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rational_kernel(rows, ncols):
    """Basis of the right kernel of a rational matrix, as Fraction vectors."""
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [_F0] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def solve_rational(rows, rhs):
    """One solution of A x = b over Q, or None if inconsistent."""
    if not rows:
        return [] if all(v == 0 for v in rhs) else None
    ncols = len(rows[0])
    aug = [list(map(Fraction, r)) + [Fraction(b)] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [_F0] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return x


def clear_denominators(row):
    """Scale a rational row to a primitive integer row."""
    l = 1
    for v in row:
        l = l * v.denominator // gcd(l, v.denominator)
    ints = [int(v * l) for v in row]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints


# ---------------------------------------------------------------------------
# integer lattices
# ---------------------------------------------------------------------------

def _xgcd(a, b):
    x, nx, y, ny, g, ng = 1, 0, 0, 1, a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    return g, x, y


def hnf(rows):
    """Canonical row Hermite normal form; zero rows dropped.

    Pivots are positive, entries above a pivot are reduced into
    [0, pivot), rows ordered by pivot column.
    """
    rows = [list(map(int, r)) for r in rows if any(r)]
    if not rows:
        return []
    ncols = len(rows[0])
    pivot_row: dict[int, int] = {}
    store: list[list[int]] = []
    for vec in rows:
        vec = vec[:]
        j = 0
        while j < ncols:
            if vec[j] == 0:
                j += 1
                continue
            p = pivot_row.get(j)
            if p is None:
                pivot_row[j] = len(store)
                store.append(vec)
                break
            row = store[p]
            a, b = row[j], vec[j]
            if b % a == 0:
                q = b // a
                for k in range(j, ncols):
                    vec[k] -= q * row[k]
            else:
                g, x, y = _xgcd(a, b)
                ag, bg = a // g, b // g
                for k in range(j, ncols):
                    ra, va = row[k], vec[k]
                    row[k] = x * ra + y * va
                    vec[k] = -bg * ra + ag * va
    basis = [store[p] for _, p in sorted(pivot_row.items())]
    # canonical reduction: positive pivots, reduce above
    for idx, row in enumerate(basis):
        j = next(k for k, v in enumerate(row) if v)
        if row[j] < 0:
            basis[idx] = [-v for v in row]
    for idx in range(len(basis)):
        row = basis[idx]
        j = next(k for k, v in enumerate(row) if v)
        for above in range(idx):
            q = basis[above][j] // row[j]
            if q:
                basis[above] = [v - q * w for v, w in zip(basis[above], row)]
    return basis


def integer_kernel(rows, ncols):
    """Z-basis of {x in Z^n : M x = 0}; saturated by construction.

    Row-reduces [M^t | I]: the unimodular transform rows that kill the
    M^t part are exactly the kernel vectors.
    """
    rows = [list(r) for r in rows]
    m = len(rows)
    aug = []
    for c in range(ncols):
        left = [rows[r][c] for r in range(m)]
        right = [1 if k == c else 0 for k in range(ncols)]
        aug.append(left + right)
    reduced = hnf(aug)
    kernel = [row[m:] for row in reduced if not any(row[:m])]
    return hnf(kernel)


def saturate(rational_rows, ncols):
    """Integer basis of (Q-span of the rows) intersected with Z^n."""
    rows = [list(map(Fraction, r)) for r in rational_rows]
    rows = [r for r in rows if any(v != 0 for v in r)]
    if not rows:
        return []
    complement = rational_kernel(rows, ncols)
    if not complement:
        return [[1 if k == j else 0 for k in range(ncols)] for j in range(ncols)]
    int_complement = [clear_denominators(v) for v in complement]
    return integer_kernel(int_complement, ncols)


def kernel_lattice(rational_rows, ncols):
    """Saturated integer kernel of a rational matrix."""
    int_rows = [clear_denominators(list(map(Fraction, r)))
                for r in rational_rows if any(Fraction(v) != 0 for v in r)]
    if not int_rows:
        return [[1 if k == j else 0 for k in range(ncols)] for j in range(ncols)]
    return integer_kernel(int_rows, ncols)


def in_row_span_q(rows, vec):
    """Is vec in the rational row span?"""
    if not rows:
        return all(Fraction(v) == 0 for v in vec)
    cols = [list(col) for col in zip(*rows)]
    return solve_rational(cols, list(vec)) is not None


def coords_in_rows(rows, vec):
    """Coordinates of vec in the given (independent) rows, or None."""
    if not rows:
        return None
    cols = [list(col) for col in zip(*rows)]
    return solve_rational(cols, list(vec))


def complete_to_unimodular(coeffs):
    """A unimodular integer matrix whose first row is ``coeffs``.

    Requires gcd(coeffs) = 1.  Built by composing 2x2 elementary steps of
    the extended Euclidean algorithm.
    """
    n = len(coeffs)
    g = 0
    for v in coeffs:
        g = gcd(g, v)
    if g != 1:
        raise ValueError("first row must be primitive")
    # W with coeffs @ W = e1, built as a product of elementary matrices
    w = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    cur = list(coeffs)

    def apply_col(op):
        # right-multiply W by op (n x n), tracked lazily via full mult
        nonlocal w
        w = [[sum(w[i][k] * op[k][j] for k in range(n)) for j in range(n)]
             for i in range(n)]

    for j in range(1, n):
        a, b = cur[0], cur[j]
        if b == 0:
            continue
        g2, x, y = _xgcd(a, b)
        op = [[1 if i == k else 0 for k in range(n)] for i in range(n)]
        op[0][0], op[j][0] = x, y
        op[0][j], op[j][j] = -b // g2, a // g2
        cur = [sum(cur[k] * op[k][col] for k in range(n)) for col in range(n)]
        apply_col(op)
    assert cur[0] in (1, -1) and all(v == 0 for v in cur[1:])
    if cur[0] == -1:
        for i in range(n):
            w[i][0] = -w[i][0]
    # coeffs @ W = e1  =>  first row of W^{-1} is coeffs
    winv = invert_unimodular(w)
    return winv


def invert_unimodular(m):
    """Exact inverse of an integer matrix with det +-1."""
    n = len(m)
    aug = [[Fraction(v) for v in row] + [Fraction(1 if k == j else 0)
                                         for j in range(n)]
           for k, row in enumerate(m)]
    red, pivots = rref(aug)
    assert pivots == list(range(n))
    out = [[int(red[i][n + j]) for j in range(n)] for i in range(n)]
    return out


def lattice_points_in_box(hnf_rows, bound):
    """All lattice vectors (Z-combinations of HNF rows) with sup-norm <= bound.

    Walks coordinates in pivot order, pruning with the pivot entries;
    output is sorted lexicographically.
    """
    if not hnf_rows:
        return [tuple()]
    n = len(hnf_rows[0])
    pivots = [next(k for k, v in enumerate(row) if v) for row in hnf_rows]
    out = []

    def rec(idx, partial):
        if idx == len(hnf_rows):
            if all(abs(v) <= bound for v in partial):
                out.append(tuple(partial))
            return
        row = hnf_rows[idx]
        p = pivots[idx]
        # partial[p] + c * row[p] must land in [-bound, bound]; row[p] > 0
        a = row[p]
        cmin = _ceil_div(-bound - partial[p], a)
        cmax = _floor_div(bound - partial[p], a)
        for c in range(cmin, cmax + 1):
            rec(idx + 1, [v + c * w for v, w in zip(partial, row)])

    rec(0, [0] * n)
    return sorted(out)


def _ceil_div(a, b):
    return -((-a) // b)


def _floor_div(a, b):
    return a // b
