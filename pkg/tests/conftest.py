import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent))

from fractions import Fraction

from toruslab.exactfield import GeneratorSpec, NumberField, sqrt_element
from toruslab.linalg import Mat
from toruslab.torus import PeriodMatrix, attach_multiplication, build_torus

REPO = pathlib.Path(__file__).resolve().parent.parent
TORI = REPO / "tori"

CBRT3_SPEC = GeneratorSpec(
    name="r",
    min_poly=(Fraction(-3), Fraction(0), Fraction(0), Fraction(1)),
    root_re=(Fraction(7, 5), Fraction(29, 20)),
    root_im=(Fraction(0), Fraction(0)),
    conj="real",
)


@pytest.fixture(scope="session")
def gauss_field():
    """Q(i), the smallest field."""
    return NumberField(())


@pytest.fixture(scope="session")
def cm_product(gauss_field):
    """(Z + Zi)^2 with the nonscalar multiplication diag(i, -i) attached."""
    f = gauss_field
    i, one, zero = f.i(), f.one(), f.zero()
    pi = Mat.from_rows([[one, i, zero, zero], [zero, zero, one, i]])
    torus = build_torus(PeriodMatrix(pi))
    mult = attach_multiplication(torus, Mat.diagonal([i, -i]), -1)
    return torus, mult


@pytest.fixture(scope="session")
def example1_m1():
    from toruslab.papercheck import example1
    return example1(1)


@pytest.fixture(scope="session")
def example2_m1_n2():
    from toruslab.papercheck import example2
    return example2(1, 2)


@pytest.fixture(scope="session")
def generic_rank0_torus():
    """Quintic-generator torus with NS = 0 and End = Z."""
    spec = GeneratorSpec(
        name="t",
        min_poly=(Fraction(-1), Fraction(-1), Fraction(0), Fraction(0),
                  Fraction(0), Fraction(1)),
        root_re=(Fraction(1), Fraction(5, 4)),
        root_im=(Fraction(0), Fraction(0)),
        conj="real",
    )
    f = NumberField((spec,))
    tg, i, one = f.gen("t"), f.i(), f.one()
    pi = Mat.from_rows([
        [one, tg * i, tg ** 2, tg ** 3 + i],
        [tg + i, one, tg ** 4 * i, tg ** 2 + tg * i],
    ])
    return build_torus(PeriodMatrix(pi))


@pytest.fixture(scope="session")
def generic_abelian_torus():
    """Period matrix [I | tau] with generic pure-imaginary quadratic tau:
    End = Z, NS of rank 1."""
    f = NumberField(())
    for n in (2, 3, 5):
        f, _ = sqrt_element(f, n)
    w2, w3, w5 = f.gen("sqrt2"), f.gen("sqrt3"), f.gen("sqrt5")
    i, one, zero = f.i(), f.one(), f.zero()
    tau11, tau12, tau22 = i * w2, i * w3 * Fraction(1, 2), i * w5
    pi = Mat.from_rows([
        [one, zero, tau11, tau12],
        [zero, one, tau12, tau22],
    ])
    return build_torus(PeriodMatrix(pi))
