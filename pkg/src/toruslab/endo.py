"""Endomorphism rings of two-dimensional complex tori.

An endomorphism is a pair (R, A): an integral 4x4 action on lattice
coordinates and the 2x2 analytic action on C^2, linked by A*Pi = Pi*R.
The ring is computed as the saturated integer kernel of the linear
condition "the lower-left 2x2 block of P R P^{-1} vanishes", which
simultaneously yields A as the upper-left block.

Also here: structure constants, the algebra classifier (quadratic /
CM / quaternion via the reduced norm form / matrix algebra), the Rosati
involution of a polarization, and the constructive extraction of a real
quadratic multiplication from the Rosati-symmetric subspace.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

import sympy

from .errors import (
    BoundTooLarge,
    NegativeDiscriminant,
    NoSuchElement,
    NotClosed,
    NotPolarization,
    NotStable,
    UnrecognizedStructure,
)
from .exactfield import exact_sign, squarefree_decomposition
from .linalg import (
    Mat,
    clear_denominators,
    complete_to_unimodular,
    coords_in_rows,
    hnf,
    kernel_lattice,
    lattice_points_in_box,
    rational_kernel,
    rref,
)
from .torus import Torus

_F0 = Fraction(0)
_F1 = Fraction(1)


@dataclass(frozen=True)
class Endomorphism:
    R: tuple[tuple[int, ...], ...]
    A: Mat

    def vec(self) -> tuple[int, ...]:
        return tuple(v for row in self.R for v in row)

    def r_trace(self) -> int:
        return sum(self.R[k][k] for k in range(4))


@dataclass(frozen=True)
class EndoRing:
    torus: Torus
    basis: tuple[Endomorphism, ...]       # first element is the identity
    structure: tuple                      # structure[i][j] = integer coords of b_i b_j

    @property
    def rank(self) -> int:
        return len(self.basis)

    def basis_vecs(self):
        return [list(b.vec()) for b in self.basis]

    def coords_of_matrix(self, r_rows):
        """Rational coordinates of a 4x4 rational matrix in the ring basis."""
        vec = [Fraction(v) for row in r_rows for v in row]
        return coords_in_rows([[Fraction(v) for v in b] for b in self.basis_vecs()], vec)

    def element_r(self, coords):
        """R-matrix (Fractions) of a rational coordinate vector."""
        out = [[_F0] * 4 for _ in range(4)]
        for c, b in zip(coords, self.basis):
            if c:
                for r in range(4):
                    for s in range(4):
                        out[r][s] += Fraction(c) * b.R[r][s]
        return out

    def element_a(self, coords) -> Mat:
        field = self.torus.field
        acc = Mat.zero(field, 2, 2)
        for c, b in zip(coords, self.basis):
            if c:
                acc = acc + b.A.scale(field.rational(Fraction(c)))
        return acc

    def multiply_coords(self, x, y):
        """Product in the algebra, in rational coordinates."""
        n = self.rank
        out = [_F0] * n
        for i in range(n):
            if not x[i]:
                continue
            for j in range(n):
                if not y[j]:
                    continue
                f = Fraction(x[i]) * Fraction(y[j])
                for k, s in enumerate(self.structure[i][j]):
                    if s:
                        out[k] += f * s
        return out


def _analytic_from_r(t: Torus, r_rows) -> Mat:
    field = t.field
    rmat = Mat.from_rows([[field.rational(v) for v in row] for row in r_rows])
    return (t.period.entries @ rmat) @ t.right_inverse()


def compute_endo_ring(t: Torus) -> EndoRing:
    """All integral 4x4 matrices commuting with the complex structure.

    The condition is linear in the 16 unknown entries: expand the
    lower-left block of P E_kl P^{-1} (an outer product of a column of P
    with a row of P^{-1}) over the monomial basis, take the saturated
    integer kernel, and normalize the first basis vector to the identity
    by a unimodular change of basis.
    """
    field = t.field
    p, p_inv = t.big_p, t.big_p_inv
    n_mono = field.degree
    rows = [[_F0] * 16 for _ in range(4 * n_mono)]
    for k in range(4):
        col = p.col(k)
        for l in range(4):
            prow = p_inv.row(l)
            unk = 4 * k + l
            for a in (2, 3):
                for b in (0, 1):
                    entry = col[a] * prow[b]
                    base = n_mono * (2 * (a - 2) + b)
                    for m, c in enumerate(entry.coeffs):
                        if c:
                            rows[base + m][unk] += c
    basis_vecs = kernel_lattice(rows, 16)
    basis_vecs = hnf(basis_vecs)
    id_vec = [1 if k % 5 == 0 else 0 for k in range(16)]
    coords = coords_in_rows([[Fraction(v) for v in b] for b in basis_vecs],
                            [Fraction(v) for v in id_vec])
    assert coords is not None, "identity missing from endomorphism lattice"
    coords = [int(c) for c in coords]
    g = 0
    for c in coords:
        g = gcd(g, c)
    assert g == 1, "identity is imprimitive in a saturated lattice"
    u = complete_to_unimodular(coords)
    n = len(basis_vecs)
    new_vecs = [[sum(u[i][j] * basis_vecs[j][k] for j in range(n)) for k in range(16)]
                for i in range(n)]
    basis = []
    for vec in new_vecs:
        r_rows = tuple(tuple(vec[4 * r + c] for c in range(4)) for r in range(4))
        a = _analytic_from_r(t, r_rows)
        rmat = Mat.from_rows([[field.rational(v) for v in row] for row in r_rows])
        assert (a @ t.period.entries) == (t.period.entries @ rmat)
        basis.append(Endomorphism(R=r_rows, A=a))
    structure = _structure_tensor(basis)
    return EndoRing(torus=t, basis=tuple(basis), structure=structure)


def _mat_mul_int(x, y):
    return tuple(tuple(sum(x[r][k] * y[k][c] for k in range(4)) for c in range(4))
                 for r in range(4))


def _structure_tensor(basis):
    vecs = [[Fraction(v) for v in b.vec()] for b in basis]
    tensor = []
    for bi in basis:
        row = []
        for bj in basis:
            prod = _mat_mul_int(bi.R, bj.R)
            vec = [Fraction(v) for r in prod for v in r]
            coords = coords_in_rows(vecs, vec)
            if coords is None or any(c.denominator != 1 for c in coords):
                raise NotClosed(
                    "basis product left the Z-span; kernel computation is broken")
            row.append(tuple(int(c) for c in coords))
        tensor.append(tuple(row))
    return tuple(tensor)


def structure_constants(ring: EndoRing):
    """Exact integer tensor with b_i b_j = sum_k tensor[i][j][k] b_k."""
    tensor = _structure_tensor(ring.basis)
    assert tensor == ring.structure
    return tensor


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraClass:
    tag: str
    discriminant_data: tuple[int, ...]


def min_poly_rational_matrix(rows):
    """Monic minimal polynomial (constant-first Fractions) of a 4x4 matrix."""
    rows = [[Fraction(v) for v in r] for r in rows]
    power = [[_F1 if i == j else _F0 for j in range(4)] for i in range(4)]
    vecs = []
    for _ in range(5):
        vecs.append([v for r in power for v in r])
        span = [list(col) for col in zip(*vecs[:-1])] if len(vecs) > 1 else None
        if span is not None:
            from .linalg import solve_rational
            sol = solve_rational(span, vecs[-1])
            if sol is not None:
                return tuple([-c for c in sol] + [_F1])
        power = [[sum(power[r][k] * rows[k][c] for k in range(4)) for c in range(4)]
                 for r in range(4)]
    raise UnrecognizedStructure("no minimal polynomial of degree <= 4")


def _signed_squarefree(q: Fraction) -> int:
    """Squarefree integer with the same square class as the rational q."""
    n = q.numerator * q.denominator
    if n == 0:
        return 0
    _, n0, _ = squarefree_decomposition(abs(n))
    return n0 if n > 0 else -n0


def _center_coords(ring: EndoRing):
    n = ring.rank
    rows = []
    for j in range(n):
        for k in range(n):
            row = [ring.structure[i][j][k] - ring.structure[j][i][k] for i in range(n)]
            rows.append([Fraction(v) for v in row])
    return rational_kernel(rows, n)


def _is_irreducible(coeffs) -> bool:
    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator)
                       for c in reversed(coeffs)], x)
    factors = poly.factor_list()[1]
    return len(factors) == 1 and factors[0][1] == 1


def _real_root_count(coeffs) -> int:
    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator)
                       for c in reversed(coeffs)], x)
    return len(poly.real_roots())


def classify_algebra(ring: EndoRing) -> AlgebraClass:
    """Branch on rank and center dimension; all sign tests are exact."""
    n = ring.rank
    if n == 1:
        return AlgebraClass("RationalField", ())
    if n == 2:
        mp = min_poly_rational_matrix(ring.element_r([0, 1]))
        if len(mp) != 3:
            raise UnrecognizedStructure("rank-2 ring with non-quadratic generator")
        tr, nr = -mp[1], mp[0]
        disc = tr * tr - 4 * nr
        sf = _signed_squarefree(disc)
        if disc == 0:
            return AlgebraClass("Other", (0,))
        if sf == 1:
            return AlgebraClass("Other", (1,))
        if disc > 0:
            return AlgebraClass("RealQuadratic", (sf,))
        return AlgebraClass("ImaginaryQuadratic", (sf,))
    if n == 4:
        center = _center_coords(ring)
        cdim = len(center)
        if cdim == 1:
            return _classify_quaternion(ring)
        if cdim == 4:
            return _classify_commutative_quartic(ring)
        return AlgebraClass("Other", (cdim,))
    if n == 8:
        center = _center_coords(ring)
        if len(center) != 2:
            raise UnrecognizedStructure(
                f"rank-8 ring with center of dimension {len(center)}")
        gamma = _non_rational_center_element(ring, center)
        mp = min_poly_rational_matrix(ring.element_r(gamma))
        if len(mp) != 3:
            raise UnrecognizedStructure("rank-8 center is not quadratic")
        disc = mp[1] * mp[1] - 4 * mp[0]
        return AlgebraClass("MatrixAlgebraOverQuadratic", (_signed_squarefree(disc),))
    raise UnrecognizedStructure(f"rank {n} is not possible for a 2-torus")


def _non_rational_center_element(ring, center):
    e0 = [_F1] + [_F0] * (ring.rank - 1)
    for v in center:
        if any(v[k] != 0 for k in range(1, ring.rank)):
            return v
    raise UnrecognizedStructure("center is rational only")


def _classify_quaternion(ring: EndoRing) -> AlgebraClass:
    n = ring.rank
    traces = [[Fraction(b.r_trace()) for b in ring.basis]]
    pure = rational_kernel(traces, n)
    if len(pure) != 3:
        raise UnrecognizedStructure("trace-zero subspace has wrong dimension")
    # Gram matrix of the reduced norm form on the trace-zero subspace:
    # for pure u, v the anticommutator u v + v u is a rational scalar.
    def scalar_of(x):
        if any(x[k] != 0 for k in range(1, n)):
            raise UnrecognizedStructure("anticommutator of pure elements not scalar")
        return x[0]

    gram = [[_F0] * 3 for _ in range(3)]
    for a in range(3):
        for b in range(3):
            anti = [x + y for x, y in zip(ring.multiply_coords(pure[a], pure[b]),
                                          ring.multiply_coords(pure[b], pure[a]))]
            gram[a][b] = -scalar_of(anti) / 2
    minors = [
        gram[0][0],
        gram[0][0] * gram[1][1] - gram[0][1] * gram[1][0],
        _det3(gram),
    ]
    definite = all(m > 0 for m in minors)
    tag = "DefiniteQuaternion" if definite else "IndefiniteQuaternion"
    data = _quaternion_generators(ring, pure, gram)
    return AlgebraClass(tag, data)


def _det3(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def _quaternion_generators(ring, pure, gram):
    """Squarefree pair (a, b) with the algebra isomorphic to (a, b / Q).

    Gram-Schmidt over Q on the norm form; u^2 = -Q(u) for pure u.
    """
    v1 = pure[0]
    q1 = gram[0][0]
    if q1 == 0:
        return (1, 1)  # isotropic: split algebra, M2(Q)
    # orthogonalize the second basis vector against the first
    b12 = gram[0][1]
    v2 = [Fraction(x) - b12 / q1 * Fraction(y) for x, y in zip(pure[1], v1)]
    q2 = _quadratic_value(ring, v2)
    if q2 == 0:
        return (1, 1)
    return (_signed_squarefree(-q1), _signed_squarefree(-q2))


def _quadratic_value(ring, v):
    sq = ring.multiply_coords(v, v)
    if any(sq[k] != 0 for k in range(1, ring.rank)):
        raise UnrecognizedStructure("square of a pure element is not scalar")
    return -sq[0]


def _classify_commutative_quartic(ring: EndoRing) -> AlgebraClass:
    candidates = _element_candidates(ring)
    quartic = None
    for v in candidates:
        mp = min_poly_rational_matrix(ring.element_r(v))
        if len(mp) == 5 and _is_irreducible(mp):
            quartic = mp
            break
    if quartic is None:
        return AlgebraClass("Other", ())
    if _real_root_count(quartic) != 0:
        return AlgebraClass("Other", ())
    # totally imaginary quartic field: CM iff it has a real quadratic subfield
    subfield_discs = set()
    for v in candidates:
        mp = min_poly_rational_matrix(ring.element_r(v))
        if len(mp) == 3:
            disc = mp[1] * mp[1] - 4 * mp[0]
            if disc > 0 and _signed_squarefree(disc) != 1:
                subfield_discs.add(_signed_squarefree(disc))
    if subfield_discs:
        return AlgebraClass("CMField", tuple(sorted(subfield_discs)))
    return AlgebraClass("Other", ())


def _element_candidates(ring):
    n = ring.rank
    out = []
    for j in range(1, n):
        v = [_F0] * n
        v[j] = _F1
        out.append(v)
    for a in range(1, n):
        for b in range(a + 1, n):
            for ca, cb in ((1, 1), (1, -1), (1, 2), (2, 1)):
                v = [_F0] * n
                v[a], v[b] = Fraction(ca), Fraction(cb)
                out.append(v)
    return out


# ---------------------------------------------------------------------------
# Rosati involution
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RosatiData:
    ring: EndoRing
    H0: Mat                                   # positive definite hermitian matrix
    involution: tuple[tuple[Fraction, ...], ...]  # row j = coords of basis_j'

    @property
    def rank(self) -> int:
        return self.ring.rank

    def apply(self, coords):
        """Coordinates of alpha' for alpha given in ring coordinates."""
        n = self.rank
        return [sum(Fraction(coords[j]) * self.involution[j][k] for j in range(n))
                for k in range(n)]


def check_in_ns(t: Torus, m0: Mat, require_positive: bool) -> None:
    """H0 hermitian, (optionally) positive definite, integral Im on the lattice."""
    if m0.conj_t() != m0:
        raise NotPolarization("matrix is not hermitian")
    if require_positive:
        if exact_sign(m0[0, 0]) <= 0 or exact_sign((m0.det())) <= 0:
            raise NotPolarization("hermitian form is not positive definite")
    cols = [t.period.column(k) for k in range(4)]
    for k in range(4):
        for l in range(k + 1, 4):
            h = _herm_value(m0, cols[k], cols[l])
            e = h.imag_part()
            if not e.is_rational() or e.rational_value().denominator != 1:
                raise NotPolarization(
                    f"Im H(lambda_{k+1}, lambda_{l+1}) = {e} is not integral")


def _herm_value(m: Mat, x, y):
    """H(x, y) = x^t M conj(y) for 2-vectors over the field."""
    field = m.field
    acc = field.zero()
    for r in range(2):
        for c in range(2):
            term = x[r] * m[r, c] * y[c].conjugate()
            acc = acc + term
    return acc


def rosati_involution(ring: EndoRing, h0) -> RosatiData:
    """The involution alpha -> conj(M0)^-1 * conj_t(A) * conj(M0) in ring coordinates.

    h0 must be a positive definite hermitian matrix whose imaginary part
    is integral on the lattice.  Verifies exactly that the result is an
    involutive anti-automorphism.
    """
    t = ring.torus
    if not isinstance(h0, Mat):
        h0 = Mat.from_rows(h0)
    m0 = h0.map(lambda x: x.in_field(t.field))
    check_in_ns(t, m0, require_positive=True)
    m0c = m0.conj()
    m0c_inv = m0c.inv()
    basis_rows = [[Fraction(v) for v in b] for b in ring.basis_vecs()]
    rows = []
    for b in ring.basis:
        a_prime = m0c_inv @ b.A.conj_t() @ m0c
        r_prime = _rational_rep(t, a_prime)
        if r_prime is None:
            raise NotStable(
                "Rosati image has a non-rational lattice action; H0 is not in NS")
        coords = coords_in_rows(basis_rows, [v for row in r_prime for v in row])
        if coords is None:
            raise NotStable("Rosati image left the endomorphism algebra")
        rows.append(tuple(coords))
    ros = RosatiData(ring=ring, H0=m0, involution=tuple(rows))
    _verify_involution(ros)
    return ros


def _rational_rep(t: Torus, a: Mat):
    field = a.field
    big = t.big_p.map(lambda x: x.in_field(field))
    big_inv = t.big_p_inv.map(lambda x: x.in_field(field))
    z = field.zero()
    block = Mat.from_rows([
        [a[0, 0], a[0, 1], z, z],
        [a[1, 0], a[1, 1], z, z],
        [z, z, a[0, 0].conjugate(), a[0, 1].conjugate()],
        [z, z, a[1, 0].conjugate(), a[1, 1].conjugate()],
    ])
    r = big_inv @ block @ big
    out = []
    for i in range(4):
        row = []
        for j in range(4):
            if not r[i, j].is_rational():
                return None
            row.append(r[i, j].rational_value())
        out.append(row)
    return out


def _verify_involution(ros: RosatiData) -> None:
    n = ros.rank
    e = [[_F1 if i == j else _F0 for j in range(n)] for i in range(n)]
    for j in range(n):
        twice = ros.apply(ros.apply(e[j]))
        assert twice == e[j], "involution squared is not the identity"
    ring = ros.ring
    for j in range(n):
        for k in range(n):
            lhs = ros.apply([Fraction(v) for v in ring.structure[j][k]])
            rhs = ring.multiply_coords(ros.apply(e[k]), ros.apply(e[j]))
            assert lhs == rhs, "Rosati is not an anti-automorphism"


def symmetric_subspace(ros: RosatiData):
    """Basis and dimension of the Rosati-fixed subspace over Q."""
    n = ros.rank
    rows = []
    for k in range(n):
        rows.append([ros.involution[j][k] - (_F1 if j == k else _F0)
                     for j in range(n)])
    basis = rational_kernel(rows, n)
    return basis, len(basis)


@dataclass(frozen=True)
class RealMultiplication:
    d_prime: int             # positive squarefree part, > 1
    d_dblprime: int          # beta^2 = d_dblprime * identity
    beta: Endomorphism
    squarefree_certified: bool


def find_real_multiplication(ros: RosatiData) -> RealMultiplication:
    """A beta in the ring with beta^2 a positive nonsquare integer.

    Walks the Rosati-symmetric subspace in a deterministic order (basis
    vectors first, then small pair combinations), takes the minimal
    quadratic x^2 - t x + n of the first non-rational candidate whose
    discriminant is not a perfect square, and clears denominators from
    2*alpha - t.  A symmetric element with discriminant <= 0 contradicts
    a proved invariant and raises NegativeDiscriminant.
    """
    sym_basis, dim = symmetric_subspace(ros)
    if dim < 2:
        raise NoSuchElement("symmetric subspace is rational only")
    ring = ros.ring
    n = ring.rank
    candidates = []
    for v in sym_basis:
        candidates.append(list(v))
    for a in range(len(sym_basis)):
        for b in range(a + 1, len(sym_basis)):
            for ca, cb in ((1, 1), (1, -1), (1, 2), (2, 1), (1, -2), (2, -1)):
                candidates.append([ca * x + cb * y
                                   for x, y in zip(sym_basis[a], sym_basis[b])])
    for coords in candidates:
        if all(coords[k] == 0 for k in range(1, n)):
            continue
        r_alpha = ring.element_r(coords)
        mp = min_poly_rational_matrix(r_alpha)
        if len(mp) == 2:
            continue
        if len(mp) != 3:
            continue
        tr, nr = -mp[1], mp[0]
        disc = tr * tr - 4 * nr
        if disc <= 0:
            raise NegativeDiscriminant(
                f"symmetric element with discriminant {disc}; "
                "this contradicts a proved invariant of genuine polarizations")
        if _signed_squarefree(disc) == 1:
            continue
        beta0 = [[2 * r_alpha[r][c] - (tr if r == c else 0) for c in range(4)]
                 for r in range(4)]
        den = 1
        for row in beta0:
            for v in row:
                den = lcm(den, v.denominator)
        ints = [[int(v * den) for v in row] for row in beta0]
        g = 0
        for row in ints:
            for v in row:
                g = gcd(g, v)
        ints = [[v // g for v in row] for row in ints]
        sq = _mat_mul_int(tuple(map(tuple, ints)), tuple(map(tuple, ints)))
        d_dbl = sq[0][0]
        assert all(sq[r][c] == (d_dbl if r == c else 0)
                   for r in range(4) for c in range(4))
        assert d_dbl > 0
        _, d0, certified = squarefree_decomposition(d_dbl)
        scale = Fraction(2 * den, g)
        a_beta = (ring.element_a(coords).scale(ring.torus.field.rational(scale))
                  - Mat.identity(ring.torus.field, 2).scale(
                      ring.torus.field.rational(Fraction(tr * den, g))))
        beta = Endomorphism(R=tuple(map(tuple, ints)), A=a_beta)
        pi = ring.torus.period.entries
        rmat = Mat.from_rows([[ring.torus.field.rational(v) for v in row]
                              for row in ints])
        assert (beta.A @ pi) == (pi @ rmat)
        return RealMultiplication(d_prime=d0, d_dblprime=d_dbl, beta=beta,
                                  squarefree_certified=certified)
    raise NoSuchElement(
        "every explored symmetric element has a square discriminant")


# ---------------------------------------------------------------------------
# brute-force oracle
# ---------------------------------------------------------------------------

def endo_box_oracle(t: Torus, bound: int, shape: str = "full"):
    """Independent enumeration of endomorphisms with entries in [-bound, bound].

    Uses the commutation J R = R J (a different formulation than the ring
    computation) to cut the search to the free coordinates of the
    solution space, then validates every candidate against the defining
    equation A Pi = Pi R.  Intended for cross-checking compute_endo_ring
    in tests; bound is capped at 3.
    """
    if bound < 1 or bound > 3:
        raise BoundTooLarge("oracle bound must be between 1 and 3")
    field = t.field
    pi = t.period.entries
    q1 = t.right_inverse()

    def definition_check(r_rows):
        rmat = Mat.from_rows([[field.rational(v) for v in row] for row in r_rows])
        a = (pi @ rmat) @ q1
        return (a @ pi) == (pi @ rmat)

    results = []
    if shape == "diagonal":
        for diag in itertools.product(range(-bound, bound + 1), repeat=4):
            r_rows = tuple(tuple(diag[r] if r == c else 0 for c in range(4))
                           for r in range(4))
            if definition_check(r_rows):
                results.append(r_rows)
        return sorted(results)
    if shape != "full":
        raise ValueError(f"unknown shape {shape!r}")

    j = t.J
    n_mono = field.degree
    rows = []
    for r in range(4):
        for c in range(4):
            cols = [field.zero()] * 16
            for k in range(4):
                cols[4 * k + c] = cols[4 * k + c] + j[r, k]
            for k in range(4):
                cols[4 * r + k] = cols[4 * r + k] - j[k, c]
            for m in range(n_mono):
                row = [x.coeffs[m] for x in cols]
                if any(v != 0 for v in row):
                    rows.append(row)
    red, pivots = rref(rows)
    free = [c for c in range(16) if c not in pivots]
    if len(free) > 9:
        raise BoundTooLarge("solution space too large for full enumeration")
    for assignment in itertools.product(range(-bound, bound + 1), repeat=len(free)):
        vec = [_F0] * 16
        ok = True
        for fc, v in zip(free, assignment):
            vec[fc] = Fraction(v)
        for r, pc in enumerate(pivots):
            val = -sum(red[r][fc] * vec[fc] for fc in free)
            if val.denominator != 1 or abs(val) > bound:
                ok = False
                break
            vec[pc] = val
        if not ok:
            continue
        r_rows = tuple(tuple(int(vec[4 * r + c]) for c in range(4)) for r in range(4))
        if definition_check(r_rows):
            results.append(r_rows)
    return sorted(results)


def ring_box_intersection(ring: EndoRing, bound: int):
    """All ring elements with every R entry in [-bound, bound]."""
    h = hnf(ring.basis_vecs())
    pts = lattice_points_in_box(h, bound)
    return sorted(tuple(tuple(v[4 * r + c] for c in range(4)) for r in range(4))
                  for v in pts)
