"""Two-dimensional complex tori as exact period matrices.

A torus is C^2 / (Pi * Z^4) for a 2x4 period matrix Pi over a declared
number field.  The 4x4 big period matrix P stacks Pi over its entrywise
conjugate; invertibility of P is the lattice condition.  J is the real
4x4 matrix of multiplication by i in lattice coordinates.

A "multiplication by sqrt(d)" is an analytic 2x2 matrix D with D^2 = d
(d a nonsquare integer) whose rational representation on the lattice is
integral.  Nonscalar multiplications come with a diagonalizing
coordinate change putting D into diag(sqrt(d), -sqrt(d)) form, with the
+sqrt(d) eigenvector first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DegenerateLattice,
    NotAnEndomorphism,
    NotRational,
    NotReal,
    NotSquareRootOfD,
    PerfectSquare,
)
from .exactfield import (
    FieldElement,
    NumberField,
    exact_sign,
    is_perfect_square,
    sqrt_element,
    union_field,
)
from .linalg import Mat


@dataclass(frozen=True)
class PeriodMatrix:
    """2x4 matrix whose columns generate the lattice."""

    entries: Mat

    def __post_init__(self):
        if self.entries.shape != (2, 4):
            raise ValueError("period matrix must be 2x4")

    @property
    def field(self) -> NumberField:
        return self.entries.field

    def big(self) -> Mat:
        """The 4x4 big period matrix [Pi over conj(Pi)]."""
        return self.entries.stack(self.entries.conj())

    def column(self, k: int):
        return self.entries.col(k)


@dataclass(frozen=True)
class Torus:
    period: PeriodMatrix
    field: NumberField
    J: Mat           # real 4x4, multiplication by i on lattice coordinates
    big_p: Mat       # cached big period matrix
    big_p_inv: Mat

    def right_inverse(self) -> Mat:
        """Pi^+ with Pi * Pi^+ = I_2 (first two columns of P^{-1})."""
        return self.big_p_inv.submatrix(range(4), range(2))

    def lattice_vector(self, coords):
        """C^2 point of a rational coordinate vector in the lattice basis."""
        return self.period.entries.mul_vec(coords)


def build_torus(period: PeriodMatrix) -> Torus:
    """Certify the lattice condition and assemble the complex structure.

    Raises DegenerateLattice when det P = 0, NotReal when J fails its
    exact realness check (inconsistent conjugation declarations).
    """
    p = period.big()
    field = p.field
    det = p.det()
    if det.is_zero() or exact_sign(det * det.conjugate()) <= 0:
        raise DegenerateLattice("big period matrix is singular")
    p_inv = p.inv()
    i = field.i()
    diag = Mat.diagonal([i, i, -i, -i])
    j = p_inv @ diag @ p
    for r in range(4):
        for c in range(4):
            if not j[r, c].is_real():
                raise NotReal(
                    f"complex structure entry ({r},{c}) = {j[r, c]} is not real")
    minus_id = Mat.identity(field, 4).scale(-1)
    assert j @ j == minus_id
    period = PeriodMatrix(period.entries.map(lambda x: x.in_field(field)))
    return Torus(period=period, field=field, J=j, big_p=p, big_p_inv=p_inv)


@dataclass(frozen=True)
class MultiplicationDatum:
    """An exact multiplication by sqrt(d) on a torus."""

    D_analytic: Mat                 # 2x2, D^2 = d
    R: tuple[tuple[int, ...], ...]  # 4x4 integer rational representation
    d: int
    epsilon: int
    is_scalar: bool
    diagonalizer: Mat | None        # columns: +sqrt(d) then -sqrt(d) eigenvectors
    sqrt_d: FieldElement | None
    field: NumberField              # field of D and the diagonalizer

    def r_matrix(self) -> Mat:
        f = self.field
        return Mat.from_rows([[f.rational(v) for v in row] for row in self.R])

    def r_times(self, coords):
        """Integer matrix action on a rational coordinate vector."""
        return tuple(sum(Fraction(a) * Fraction(x) for a, x in zip(row, coords))
                     for row in self.R)


def attach_multiplication(t: Torus, d_analytic, d: int) -> MultiplicationDatum:
    """Validate D^2 = d and D Lambda <= Lambda; classify scalar vs nonscalar.

    For a nonscalar D the field is extended by a generator for sqrt(d)
    when necessary, and the diagonalizer is normalized so its first
    column is the +sqrt(d) eigenvector with leading coordinate 1.
    """
    if not isinstance(d, int):
        raise ValueError("d must be an integer")
    if d >= 0 and is_perfect_square(d):
        raise PerfectSquare(f"d = {d} is a perfect square")
    if not isinstance(d_analytic, Mat):
        d_analytic = Mat.from_rows(d_analytic)
    field = union_field(t.field, d_analytic.field)
    dmat = d_analytic.map(lambda x: x.in_field(field))
    d_elt = field.rational(d)
    if (dmat @ dmat) != Mat.diagonal([d_elt, d_elt]):
        raise NotSquareRootOfD(f"D^2 is not {d} * identity")

    big = t.big_p.map(lambda x: x.in_field(field))
    big_inv = t.big_p_inv.map(lambda x: x.in_field(field))
    z = field.zero()
    block = Mat.from_rows([
        [dmat[0, 0], dmat[0, 1], z, z],
        [dmat[1, 0], dmat[1, 1], z, z],
        [z, z, dmat[0, 0].conjugate(), dmat[0, 1].conjugate()],
        [z, z, dmat[1, 0].conjugate(), dmat[1, 1].conjugate()],
    ])
    r_field = big_inv @ block @ big
    r_rows = []
    for r in range(4):
        row = []
        for c in range(4):
            entry = r_field[r, c]
            if not entry.is_rational():
                raise NotAnEndomorphism(
                    f"rational representation entry ({r},{c}) = {entry} "
                    "is not rational; D does not preserve the lattice")
            q = entry.rational_value()
            if q.denominator != 1:
                raise NotAnEndomorphism(
                    f"rational representation entry ({r},{c}) = {q} "
                    "is not integral; D Lambda is not contained in Lambda")
            row.append(int(q))
        r_rows.append(tuple(row))

    scalar = (dmat[0, 1].is_zero() and dmat[1, 0].is_zero()
              and dmat[0, 0] == dmat[1, 1])
    diagonalizer = None
    sqrt_d = None
    if not scalar:
        field, sqrt_d = sqrt_element(field, d)
        dmat = dmat.map(lambda x: x.in_field(field))
        plus = _eigenvector_2x2(dmat, sqrt_d)
        minus = _eigenvector_2x2(dmat, -sqrt_d)
        diagonalizer = Mat.from_rows([[plus[0], minus[0]], [plus[1], minus[1]]])
        check = diagonalizer.inv() @ dmat @ diagonalizer
        assert check == Mat.diagonal([sqrt_d, -sqrt_d])
    return MultiplicationDatum(
        D_analytic=dmat, R=tuple(r_rows), d=d, epsilon=1 if d > 0 else -1,
        is_scalar=scalar, diagonalizer=diagonalizer, sqrt_d=sqrt_d, field=field)


def _eigenvector_2x2(m: Mat, eigenvalue: FieldElement):
    """Eigenvector with first nonzero coordinate normalized to 1.

    Deterministic: kernel vector is read off the first nonzero row of
    (M - lambda), ties broken by lowest row index.
    """
    field = m.field
    a = m[0, 0] - eigenvalue
    b = m[0, 1]
    c = m[1, 0]
    e = m[1, 1] - eigenvalue
    if not (a.is_zero() and b.is_zero()):
        v = (-b, a)
    elif not (c.is_zero() and e.is_zero()):
        v = (-e, c)
    else:
        raise NotSquareRootOfD("matrix is scalar; no eigenvector normal form")
    if not v[0].is_zero():
        return (field.one(), v[1] / v[0])
    return (field.zero(), field.one())


def sqrt_d_basis_lattice(d: int, e1, e2) -> tuple[Torus, MultiplicationDatum]:
    """Torus with lattice basis (e1, e2, D e1, D e2) for D = diag(sqrt d, -sqrt d).

    This is the finite-index test-bed lattice: in this basis the rational
    representation of D is the block matrix [[0, d*I], [I, 0]].
    """
    if d >= 0 and is_perfect_square(d):
        raise PerfectSquare(f"d = {d} is a perfect square")
    entries = list(e1) + list(e2)
    field = entries[0].field
    for x in entries[1:]:
        field = union_field(field, x.field)
    field, s = sqrt_element(field, d)
    e1 = [x.in_field(field) for x in e1]
    e2 = [x.in_field(field) for x in e2]
    de1 = [s * e1[0], -s * e1[1]]
    de2 = [s * e2[0], -s * e2[1]]
    pi = Mat.from_rows([[e1[0], e2[0], de1[0], de2[0]],
                        [e1[1], e2[1], de1[1], de2[1]]])
    torus = build_torus(PeriodMatrix(pi))
    dmat = Mat.diagonal([s, -s])
    mult = attach_multiplication(torus, dmat, d)
    return torus, mult
