from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toruslab.errors import DegenerateLattice
from toruslab.exactfield import NumberField
from toruslab.linalg import (
    Mat,
    clear_denominators,
    complete_to_unimodular,
    coords_in_rows,
    hnf,
    in_row_span_q,
    integer_kernel,
    kernel_lattice,
    lattice_points_in_box,
    rational_kernel,
    rref,
    saturate,
    solve_rational,
)

small_int = st.integers(min_value=-6, max_value=6)


def int_matrix(rows, cols):
    return st.lists(st.lists(small_int, min_size=cols, max_size=cols),
                    min_size=rows, max_size=rows)


def _member(basis, vec):
    vec = list(vec)
    for row in basis:
        j = next(k for k, v in enumerate(row) if v)
        if vec[j] % row[j]:
            return False
        q = vec[j] // row[j]
        vec = [a - q * b for a, b in zip(vec, row)]
    return all(v == 0 for v in vec)


@settings(max_examples=60, deadline=None)
@given(int_matrix(3, 4))
def test_hnf_is_canonical_and_spans(rows):
    h = hnf(rows)
    assert hnf(h) == h
    for row in rows:
        if any(row):
            assert _member(h, row)
    # pivot structure: positive pivots, reduced above
    pivots = [next(k for k, v in enumerate(r) if v) for r in h]
    assert pivots == sorted(pivots)
    for idx, r in enumerate(h):
        assert r[pivots[idx]] > 0
        for above in range(idx):
            assert 0 <= h[above][pivots[idx]] < r[pivots[idx]]


@settings(max_examples=60, deadline=None)
@given(int_matrix(2, 4))
def test_integer_kernel_annihilates_and_saturates(rows):
    ker = integer_kernel(rows, 4)
    for v in ker:
        for row in rows:
            assert sum(a * b for a, b in zip(row, v)) == 0
    # saturation: any rational kernel vector, scaled integral, is in the span
    for v in rational_kernel([[F(x) for x in r] for r in rows], 4):
        assert _member(ker, clear_denominators(v))


@settings(max_examples=40, deadline=None)
@given(int_matrix(2, 4))
def test_saturate_contains_and_is_saturated(rows):
    sat = saturate([[F(x) for x in r] for r in rows], 4)
    for row in rows:
        if any(row):
            assert _member(sat, row)
    assert hnf(sat) == sat


@settings(max_examples=40, deadline=None)
@given(st.lists(small_int, min_size=4, max_size=4),
       int_matrix(3, 4))
def test_solve_rational_consistency(x, rows):
    rhs = [sum(r[k] * x[k] for k in range(4)) for r in rows]
    sol = solve_rational([[F(v) for v in r] for r in rows], [F(v) for v in rhs])
    assert sol is not None
    for r, b in zip(rows, rhs):
        assert sum(F(v) * s for v, s in zip(r, sol)) == b


def test_complete_to_unimodular():
    u = complete_to_unimodular([6, 10, 15])
    assert u[0] == [6, 10, 15]
    det = (u[0][0] * (u[1][1] * u[2][2] - u[1][2] * u[2][1])
           - u[0][1] * (u[1][0] * u[2][2] - u[1][2] * u[2][0])
           + u[0][2] * (u[1][0] * u[2][1] - u[1][1] * u[2][0]))
    assert det in (1, -1)
    with pytest.raises(ValueError):
        complete_to_unimodular([2, 4])


def test_lattice_points_in_box():
    # the sublattice Z x 2Z clipped to the unit box
    pts = lattice_points_in_box(hnf([[1, 0], [0, 2]]), 1)
    assert set(pts) == {(-1, 0), (0, 0), (1, 0)}
    assert pts == sorted(pts)


def test_span_membership_helpers():
    rows = [[F(1), F(2)], [F(2), F(4)]]
    assert in_row_span_q(rows, [F(3), F(6)])
    assert not in_row_span_q(rows, [F(1), F(0)])
    assert coords_in_rows([[F(1), F(2)]], [F(2), F(4)]) == [F(2)]


def test_kernel_lattice_of_zero_system():
    assert kernel_lattice([], 3) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


# ---------------------------------------------------------------------------
# field matrices
# ---------------------------------------------------------------------------

def test_mat_inverse_and_det():
    f = NumberField(())
    i, one, zero = f.i(), f.one(), f.zero()
    m = Mat.from_rows([[one, i], [zero, one + i]])
    inv = m.inv()
    assert m @ inv == Mat.identity(f, 2)
    assert m.det() == one + i


def test_mat_singular_raises():
    f = NumberField(())
    one = f.one()
    m = Mat.from_rows([[one, one], [one, one]])
    assert m.det() == 0
    with pytest.raises(DegenerateLattice):
        m.inv()


def test_conj_transpose():
    f = NumberField(())
    i, one = f.i(), f.one()
    m = Mat.from_rows([[one, i], [-i, one]])
    assert m.conj_t() == m   # hermitian
