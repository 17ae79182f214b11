"""Exact arithmetic in declared algebraic number fields.

A field is presented as a tensor of simple extensions: each generator
carries a monic rational minimal polynomial, a complex interval isolating
the intended root, and a conjugation kind.  Elements are rational
coefficient vectors over the monomial basis (all products of generator
powers below the respective degrees).  Q-linear independence of that
basis is *declared* by the caller; the library screens it numerically
(`find_small_relation`) but never proves it.

Conventions:

* every field contains the generator ``i`` (min poly x^2+1, root +i);
  this keeps real/imaginary parts of elements inside the field,
* ``conj="real"`` means complex conjugation fixes the generator (real
  root), ``conj="imaginary-negation"`` means it negates it (purely
  imaginary root of an even polynomial),
* zero tests are exact coefficient comparisons; sign tests refine
  interval enclosures and never guess.

No floating-point value ever enters a coefficient.  Intervals have
rational endpoints, so interval arithmetic here is exact and trivially
outward-rounded.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import sympy

from .errors import (
    DivisionByZero,
    IncompatibleGenerators,
    NotInvertible,
    NotRational,
    NotReal,
    PrecisionExhausted,
    ValidationError,
)

Rational = Fraction

CONJ_REAL = "real"
CONJ_IMAG = "imaginary-negation"

_F0 = Fraction(0)
_F1 = Fraction(1)


# ---------------------------------------------------------------------------
# generator specs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorSpec:
    """One simple extension: a named root of a monic rational polynomial.

    ``min_poly`` is constant-first, so x^3 - 2 is (-2, 0, 0, 1).  The root
    box must isolate exactly one root on the declared axis: a real
    interval for ``conj="real"``, a purely imaginary one (given by its
    imaginary part) for ``conj="imaginary-negation"``.
    """

    name: str
    min_poly: tuple[Fraction, ...]
    root_re: tuple[Fraction, Fraction]
    root_im: tuple[Fraction, Fraction]
    conj: str

    @property
    def degree(self) -> int:
        return len(self.min_poly) - 1

    def axis_interval(self) -> tuple[Fraction, Fraction]:
        """The real parameter interval that pins the root."""
        return self.root_re if self.conj == CONJ_REAL else self.root_im

    def axis_poly(self) -> tuple[Fraction, ...]:
        """Polynomial whose real root is the axis parameter.

        For a real generator this is the min poly itself; for a purely
        imaginary generator g = i*y it is q(y) = p(i*y), which has
        rational coefficients because p is even.
        """
        if self.conj == CONJ_REAL:
            return self.min_poly
        return tuple(c * (-1) ** (k // 2) if k % 2 == 0 else _F0
                     for k, c in enumerate(self.min_poly))

    def validate(self) -> None:
        p = self.min_poly
        if len(p) < 3:
            raise ValidationError(f"generator {self.name}: min_poly degree must be >= 2")
        if p[-1] != 1:
            raise ValidationError(f"generator {self.name}: min_poly must be monic")
        if not self.name.isidentifier():
            raise ValidationError(f"generator name {self.name!r} is not an identifier")
        if self.conj not in (CONJ_REAL, CONJ_IMAG):
            raise ValidationError(f"generator {self.name}: unknown conj kind {self.conj!r}")
        re_lo, re_hi = self.root_re
        im_lo, im_hi = self.root_im
        if re_lo > re_hi or im_lo > im_hi:
            raise ValidationError(f"generator {self.name}: empty root box")
        if self.conj == CONJ_REAL:
            if (im_lo, im_hi) != (_F0, _F0):
                raise ValidationError(
                    f"generator {self.name}: real generator needs a real root box")
        else:
            if (re_lo, re_hi) != (_F0, _F0):
                raise ValidationError(
                    f"generator {self.name}: imaginary generator needs a purely imaginary root box")
            if any(c != 0 for c in p[1::2]):
                raise ValidationError(
                    f"generator {self.name}: imaginary-negation requires an even min_poly")
        q = self.axis_poly()
        lo, hi = self.axis_interval()
        if lo == hi:
            if _poly_eval(q, lo) != 0:
                raise ValidationError(
                    f"generator {self.name}: zero-width root box does not hit a root")
            return
        qlo, qhi = _poly_eval(q, lo), _poly_eval(q, hi)
        if qlo == 0 or qhi == 0:
            raise ValidationError(
                f"generator {self.name}: root box endpoint is a rational root; shrink the box")
        if (qlo > 0) == (qhi > 0):
            raise ValidationError(
                f"generator {self.name}: min_poly does not change sign over the root box")
        if _count_real_roots(q, lo, hi) != 1:
            raise ValidationError(
                f"generator {self.name}: root box does not isolate a single root")


def _count_real_roots(coeffs: tuple[Fraction, ...], lo: Fraction, hi: Fraction) -> int:
    x = sympy.Symbol("x")
    poly = sympy.Poly(
        [sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], x)
    return poly.count_roots(sympy.Rational(lo.numerator, lo.denominator),
                            sympy.Rational(hi.numerator, hi.denominator))


I_SPEC = GeneratorSpec(
    name="i",
    min_poly=(_F1, _F0, _F1),
    root_re=(_F0, _F0),
    root_im=(_F1, _F1),
    conj=CONJ_IMAG,
)


# ---------------------------------------------------------------------------
# polynomial and interval helpers (real, exact rational endpoints)
# ---------------------------------------------------------------------------

def _poly_eval(coeffs, x: Fraction) -> Fraction:
    acc = _F0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_deriv(coeffs) -> tuple[Fraction, ...]:
    return tuple(coeffs[k] * k for k in range(1, len(coeffs)))


def _imul(a, b):
    p = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(p), max(p))


def _iadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _ipoly_eval(coeffs, iv):
    acc = (_F0, _F0)
    for c in reversed(coeffs):
        acc = _imul(acc, iv)
        acc = (acc[0] + c, acc[1] + c)
    return acc


def _dyadic_floor(x: Fraction, k: int) -> Fraction:
    return Fraction((x.numerator << k) // x.denominator, 1 << k)


def _dyadic_ceil(x: Fraction, k: int) -> Fraction:
    return -_dyadic_floor(-x, k)


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _refine_real_root(coeffs, lo: Fraction, hi: Fraction, target: Fraction):
    """Shrink an isolating interval below ``target`` width.

    Interval Newton with bisection fallback; endpoints are rounded
    outward onto a dyadic grid to keep coefficient sizes bounded.  The
    interval must contain exactly one simple root with a sign change at
    the endpoints (enforced by GeneratorSpec.validate).
    """
    if lo == hi:
        return lo, hi
    dcoeffs = _poly_deriv(coeffs)
    k = max(16, target.denominator.bit_length() + 16)
    sign_lo = _sign(_poly_eval(coeffs, lo))
    steps = 0
    cap = 4 * k + 128
    while hi - lo > target:
        steps += 1
        if steps > cap:
            raise PrecisionExhausted(
                "root refinement stalled; root box is likely malformed")
        mid = _dyadic_floor((lo + hi) / 2, k)
        if not (lo < mid < hi):
            mid = (lo + hi) / 2
        fm = _poly_eval(coeffs, mid)
        if fm == 0:
            return mid, mid
        dlo, dhi = _ipoly_eval(dcoeffs, (lo, hi))
        if dlo > 0 or dhi < 0:
            q1, q2 = fm / dlo, fm / dhi
            nlo = max(lo, mid - max(q1, q2))
            nhi = min(hi, mid - min(q1, q2))
            if nlo > nhi:
                raise PrecisionExhausted(
                    "interval Newton emptied the root box; box is malformed")
            nlo = max(lo, _dyadic_floor(nlo, k))
            nhi = min(hi, _dyadic_ceil(nhi, k))
            if nhi - nlo <= Fraction(3, 4) * (hi - lo):
                slo = _sign(_poly_eval(coeffs, nlo))
                if slo == 0:
                    return nlo, nlo
                shi = _sign(_poly_eval(coeffs, nhi))
                if shi == 0:
                    return nhi, nhi
                if slo != shi:
                    lo, hi, sign_lo = nlo, nhi, slo
                    continue
        if _sign(fm) == sign_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


# Best-known axis interval per generator, refined monotonically.
_BOX_CACHE: dict[GeneratorSpec, tuple[Fraction, Fraction]] = {}


def _gen_axis_interval(spec: GeneratorSpec, width: Fraction) -> tuple[Fraction, Fraction]:
    cur = _BOX_CACHE.get(spec)
    if cur is None:
        cur = spec.axis_interval()
    if cur[1] - cur[0] > width:
        cur = _refine_real_root(spec.axis_poly(), cur[0], cur[1], width)
        _BOX_CACHE[spec] = cur
    return cur


# ---------------------------------------------------------------------------
# complex boxes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComplexBox:
    """Axis-aligned rectangle with rational endpoints; a sound enclosure."""

    re_lo: Fraction
    re_hi: Fraction
    im_lo: Fraction
    im_hi: Fraction

    def __post_init__(self):
        if self.re_lo > self.re_hi or self.im_lo > self.im_hi:
            raise ValidationError("empty complex box")

    @staticmethod
    def exact(re: Fraction, im: Fraction = _F0) -> "ComplexBox":
        re, im = Fraction(re), Fraction(im)
        return ComplexBox(re, re, im, im)

    @property
    def re(self) -> tuple[Fraction, Fraction]:
        return (self.re_lo, self.re_hi)

    @property
    def im(self) -> tuple[Fraction, Fraction]:
        return (self.im_lo, self.im_hi)

    def width(self) -> Fraction:
        return max(self.re_hi - self.re_lo, self.im_hi - self.im_lo)

    def add(self, other: "ComplexBox") -> "ComplexBox":
        return ComplexBox(self.re_lo + other.re_lo, self.re_hi + other.re_hi,
                          self.im_lo + other.im_lo, self.im_hi + other.im_hi)

    def sub(self, other: "ComplexBox") -> "ComplexBox":
        return ComplexBox(self.re_lo - other.re_hi, self.re_hi - other.re_lo,
                          self.im_lo - other.im_hi, self.im_hi - other.im_lo)

    def mul(self, other: "ComplexBox") -> "ComplexBox":
        ac = _imul(self.re, other.re)
        bd = _imul(self.im, other.im)
        ad = _imul(self.re, other.im)
        bc = _imul(self.im, other.re)
        return ComplexBox(ac[0] - bd[1], ac[1] - bd[0], ad[0] + bc[0], ad[1] + bc[1])

    def scale(self, q: Fraction) -> "ComplexBox":
        if q >= 0:
            return ComplexBox(self.re_lo * q, self.re_hi * q,
                              self.im_lo * q, self.im_hi * q)
        return ComplexBox(self.re_hi * q, self.re_lo * q,
                          self.im_hi * q, self.im_lo * q)

    def contains_zero(self) -> bool:
        return self.re_lo <= 0 <= self.re_hi and self.im_lo <= 0 <= self.im_hi

    def contains_box(self, other: "ComplexBox") -> bool:
        return (self.re_lo <= other.re_lo and other.re_hi <= self.re_hi and
                self.im_lo <= other.im_lo and other.im_hi <= self.im_hi)

    def overlaps(self, other: "ComplexBox") -> bool:
        return (self.re_lo <= other.re_hi and other.re_lo <= self.re_hi and
                self.im_lo <= other.im_hi and other.im_lo <= self.im_hi)

    def midpoint(self) -> complex:
        return complex((self.re_lo + self.re_hi) / 2, (self.im_lo + self.im_hi) / 2)


def _gen_box(spec: GeneratorSpec, width: Fraction) -> ComplexBox:
    lo, hi = _gen_axis_interval(spec, width)
    if spec.conj == CONJ_REAL:
        return ComplexBox(lo, hi, _F0, _F0)
    return ComplexBox(_F0, _F0, lo, hi)


def _box_pow(box: ComplexBox, e: int) -> ComplexBox:
    acc = ComplexBox.exact(_F1)
    for _ in range(e):
        acc = acc.mul(box)
    return acc


# ---------------------------------------------------------------------------
# number fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NumberField:
    """Tensor product of the declared simple extensions (plus ``i``).

    The monomial basis is every product of generator powers below the
    respective degrees, ordered lexicographically by exponent vector
    with generators sorted by name.
    """

    generators: tuple[GeneratorSpec, ...]
    independence_declared: bool = True

    def __post_init__(self):
        by_name: dict[str, GeneratorSpec] = {}
        for g in self.generators:
            if g.name in by_name and by_name[g.name] != g:
                raise IncompatibleGenerators(
                    f"generator {g.name!r} declared twice with different data")
            by_name[g.name] = g
        if "i" in by_name:
            if by_name["i"] != I_SPEC:
                raise ValidationError(
                    "the name 'i' is reserved for the square root of -1")
        else:
            by_name["i"] = I_SPEC
        gens = tuple(sorted(by_name.values(), key=lambda g: g.name))
        for g in gens:
            g.validate()
        object.__setattr__(self, "generators", gens)

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.generators, self.independence_declared))
            object.__setattr__(self, "_hash", h)
        return h

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, NumberField):
            return NotImplemented
        return (self.generators == other.generators
                and self.independence_declared == other.independence_declared)

    @property
    def degree(self) -> int:
        return _field_data(self).size

    def gen_names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def monomial_exponents(self) -> tuple[tuple[int, ...], ...]:
        return _field_data(self).exps

    def zero(self) -> "FieldElement":
        return FieldElement(self, (_F0,) * self.degree)

    def one(self) -> "FieldElement":
        return self.rational(1)

    def rational(self, q) -> "FieldElement":
        coeffs = [_F0] * self.degree
        coeffs[0] = Fraction(q)
        return FieldElement(self, tuple(coeffs))

    def gen(self, name: str) -> "FieldElement":
        data = _field_data(self)
        for j, g in enumerate(self.generators):
            if g.name == name:
                exp = tuple(1 if k == j else 0 for k in range(len(self.generators)))
                coeffs = [_F0] * data.size
                coeffs[data.index[exp]] = _F1
                return FieldElement(self, tuple(coeffs))
        raise KeyError(f"no generator named {name!r}")

    def i(self) -> "FieldElement":
        return self.gen("i")

    def element(self, coeff_map: dict[tuple[int, ...], Fraction]) -> "FieldElement":
        data = _field_data(self)
        coeffs = [_F0] * data.size
        for exp, c in coeff_map.items():
            coeffs[data.index[exp]] = Fraction(c)
        return FieldElement(self, tuple(coeffs))

    def extended(self, extra: tuple[GeneratorSpec, ...]) -> "NumberField":
        return NumberField(self.generators + tuple(extra), self.independence_declared)


class _FieldData:
    __slots__ = ("gens", "degs", "exps", "index", "size", "conj_sign", "mult_table")

    def __init__(self, field: NumberField):
        self.gens = field.generators
        self.degs = tuple(g.degree for g in self.gens)
        self.exps = tuple(itertools.product(*[range(d) for d in self.degs]))
        self.index = {e: k for k, e in enumerate(self.exps)}
        self.size = len(self.exps)
        self.conj_sign = tuple(
            -1 if sum(e[j] for j, g in enumerate(self.gens) if g.conj == CONJ_IMAG) % 2
            else 1
            for e in self.exps)
        rows = [_power_rows(g.min_poly) for g in self.gens]
        table = [[None] * self.size for _ in range(self.size)]
        for a, ea in enumerate(self.exps):
            for b, eb in enumerate(self.exps):
                terms = [((), _F1)]
                for j in range(len(self.gens)):
                    row = rows[j][ea[j] + eb[j]]
                    nxt = []
                    for prefix, c in terms:
                        for p, rc in enumerate(row):
                            if rc:
                                nxt.append((prefix + (p,), c * rc))
                    terms = nxt
                table[a][b] = tuple((self.index[exp], c) for exp, c in terms)
        self.mult_table = table


def _power_rows(min_poly: tuple[Fraction, ...]) -> list[list[Fraction]]:
    d = len(min_poly) - 1
    neg_tail = [-min_poly[j] for j in range(d)]
    rows = [[_F0] * d for _ in range(2 * d - 1)]
    rows[0][0] = _F1
    for e in range(1, 2 * d - 1):
        prev = rows[e - 1]
        cur = [_F0] * d
        for j in range(d - 1):
            cur[j + 1] += prev[j]
        top = prev[d - 1]
        if top:
            for j in range(d):
                cur[j] += top * neg_tail[j]
        rows[e] = cur
    return rows


_FIELD_DATA_CACHE: dict[NumberField, _FieldData] = {}


def _field_data(field: NumberField) -> _FieldData:
    data = field.__dict__.get("_data")
    if data is None:
        data = _FIELD_DATA_CACHE.get(field)
        if data is None:
            data = _FieldData(field)
            _FIELD_DATA_CACHE[field] = data
        object.__setattr__(field, "_data", data)
    return data


def union_field(f1: NumberField, f2: NumberField) -> NumberField:
    if f1 is f2:
        return f1
    s1, s2 = set(f1.generators), set(f2.generators)
    if s2 <= s1 and f1.independence_declared <= f2.independence_declared:
        return f1
    if s1 <= s2 and f2.independence_declared <= f1.independence_declared:
        return f2
    return NumberField(f1.generators + f2.generators,
                       f1.independence_declared and f2.independence_declared)


# ---------------------------------------------------------------------------
# field elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldElement:
    field: NumberField
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.field.degree:
            raise ValidationError("coefficient vector length does not match the field")

    # -- structure ----------------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise NotRational(f"{self} is not rational")
        return self.coeffs[0]

    def in_field(self, field: NumberField) -> "FieldElement":
        """Coerce into a field whose generators contain this element's."""
        if field == self.field:
            return self
        old = _field_data(self.field)
        new = _field_data(field)
        pos = []
        for g in self.field.generators:
            try:
                pos.append(field.gen_names().index(g.name))
            except ValueError:
                raise IncompatibleGenerators(
                    f"target field lacks generator {g.name!r}") from None
            if field.generators[pos[-1]] != g:
                raise IncompatibleGenerators(
                    f"generator {g.name!r} differs between fields")
        coeffs = [_F0] * new.size
        n_new = len(field.generators)
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            exp = [0] * n_new
            for j, e in enumerate(old.exps[k]):
                exp[pos[j]] = e
            coeffs[new.index[tuple(exp)]] = c
        return FieldElement(field, tuple(coeffs))

    def _pair(self, other):
        if isinstance(other, FieldElement):
            if other.field == self.field:
                return self, other
            f = union_field(self.field, other.field)
            return self.in_field(f), other.in_field(f)
        if isinstance(other, (int, Fraction)):
            return self, self.field.rational(other)
        return self, NotImplemented

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        a, b = self._pair(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(a.field, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        a, b = self._pair(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(a.field, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        a, b = self._pair(other)
        if b is NotImplemented:
            return NotImplemented
        data = _field_data(a.field)
        out = [_F0] * data.size
        table = data.mult_table
        for ia, ca in enumerate(a.coeffs):
            if ca == 0:
                continue
            row = table[ia]
            for ib, cb in enumerate(b.coeffs):
                if cb == 0:
                    continue
                c = ca * cb
                for idx, r in row[ib]:
                    out[idx] += c * r
        return FieldElement(a.field, tuple(out))

    __rmul__ = __mul__

    def __truediv__(self, other):
        a, b = self._pair(other)
        if b is NotImplemented:
            return NotImplemented
        return _field_div(a, b)

    def __rtruediv__(self, other):
        a, b = self._pair(other)
        if b is NotImplemented:
            return NotImplemented
        return _field_div(b, a)

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.field.one() / self ** (-e)
        acc = self.field.one()
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.rational(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        a, b = self._pair(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __bool__(self):
        return not self.is_zero()

    # -- conjugation and parts ------------------------------------------------

    def conjugate(self) -> "FieldElement":
        signs = _field_data(self.field).conj_sign
        return FieldElement(self.field,
                            tuple(c if s > 0 else -c
                                  for c, s in zip(self.coeffs, signs)))

    def is_real(self) -> bool:
        return self.conjugate() == self

    def real_part(self) -> "FieldElement":
        return (self + self.conjugate()) * Fraction(1, 2)

    def imag_part(self) -> "FieldElement":
        """(x - conj(x)) / (2i); a real element of the same field."""
        return (self - self.conjugate()) / (self.field.i() * 2)

    # -- printing ---------------------------------------------------------------

    def __str__(self):
        data = _field_data(self.field)
        names = self.field.gen_names()
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            parts = []
            for j, e in enumerate(data.exps[k]):
                if e == 1:
                    parts.append(names[j])
                elif e > 1:
                    parts.append(f"{names[j]}^{e}")
            mono = "*".join(parts)
            if not mono:
                terms.append((c, _frac_str(abs(c))))
            elif abs(c) == 1:
                terms.append((c, mono))
            else:
                terms.append((c, f"{_frac_str(abs(c))}*{mono}"))
        if not terms:
            return "0"
        out = []
        for k, (c, text) in enumerate(terms):
            if k == 0:
                out.append(f"-{text}" if c < 0 else text)
            else:
                out.append(f"- {text}" if c < 0 else f"+ {text}")
        return " ".join(out)

    def __repr__(self):
        return f"FieldElement({self})"


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _field_div(a: FieldElement, b: FieldElement) -> FieldElement:
    if b.is_zero():
        raise DivisionByZero("division by the zero element")
    if b.is_rational():
        q = b.coeffs[0]
        return FieldElement(a.field, tuple(c / q for c in a.coeffs))
    data = _field_data(a.field)
    n = data.size
    # multiplication-by-b matrix: column k = coefficients of b * basis_k
    cols = [[_F0] * n for _ in range(n)]
    table = data.mult_table
    for ib, cb in enumerate(b.coeffs):
        if cb == 0:
            continue
        row = table[ib]
        for k in range(n):
            for idx, r in row[k]:
                cols[k][idx] += cb * r
    aug = [[cols[k][r] for k in range(n)] + [a.coeffs[r]] for r in range(n)]
    sol = _solve_square(aug, n)
    if sol is None:
        raise NotInvertible(
            "division matrix is singular; declared independence is violated")
    return FieldElement(a.field, tuple(sol))


def _solve_square(aug, n):
    """Gaussian elimination on an n x (n+1) augmented rational matrix."""
    for col in range(n):
        piv = None
        for r in range(col, n):
            if aug[r][col] != 0:
                piv = r
                break
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


# ---------------------------------------------------------------------------
# the four spec operations
# ---------------------------------------------------------------------------

def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Functional form of +, -, *, /; the operators are the primary API."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def conjugate(a: FieldElement) -> FieldElement:
    return a.conjugate()


def embed(a: FieldElement, precision_bits: int) -> ComplexBox:
    """A sound complex enclosure of ``a`` under the declared root choices.

    Generator boxes are refined to width 2^-(precision_bits+8) before the
    monomials are accumulated, so the output width shrinks as the
    requested precision grows.
    """
    if precision_bits < 8:
        raise ValidationError("precision_bits must be >= 8")
    width = Fraction(1, 1 << (precision_bits + 8))
    data = _field_data(a.field)
    gen_boxes = {}
    needed = set()
    for k, c in enumerate(a.coeffs):
        if c == 0:
            continue
        for j, e in enumerate(data.exps[k]):
            if e:
                needed.add(j)
    for j in needed:
        gen_boxes[j] = _gen_box(a.field.generators[j], width)
    total = ComplexBox.exact(_F0)
    pow_cache: dict[tuple[int, int], ComplexBox] = {}
    for k, c in enumerate(a.coeffs):
        if c == 0:
            continue
        mono = ComplexBox.exact(_F1)
        for j, e in enumerate(data.exps[k]):
            if not e:
                continue
            key = (j, e)
            if key not in pow_cache:
                pow_cache[key] = _box_pow(gen_boxes[j], e)
            mono = mono.mul(pow_cache[key])
        total = total.add(mono.scale(c))
    return total


#: 20 doublings of precision starting from 64 bits; beyond that we raise
#: instead of guessing.
SIGN_PRECISION_START = 64
SIGN_PRECISION_DOUBLINGS = 20


def exact_sign(a: FieldElement) -> int:
    """Sign of a real element: exact zero test, interval-refined otherwise.

    Soundness of the nonzero branch rests on the declared independence of
    the monomial basis; if the element is a disguised zero the refinement
    loop hits its cap and raises PrecisionExhausted.
    """
    if not a.is_real():
        raise NotReal(f"{a} is not fixed by conjugation")
    if a.is_zero():
        return 0
    if a.is_rational():
        return _sign(a.coeffs[0])
    prec = SIGN_PRECISION_START
    for _ in range(SIGN_PRECISION_DOUBLINGS + 1):
        box = embed(a, prec)
        if box.re_lo > 0:
            return 1
        if box.re_hi < 0:
            return -1
        prec *= 2
    raise PrecisionExhausted(
        f"sign of {a} undecided after {SIGN_PRECISION_DOUBLINGS} precision doublings")


# ---------------------------------------------------------------------------
# square roots of integers as field elements
# ---------------------------------------------------------------------------

def squarefree_decomposition(n: int) -> tuple[int, int, bool]:
    """n = k^2 * n0 with n0 squarefree, for n > 0.

    Trial division up to 10^6, then a perfect-square check on the
    cofactor.  The flag reports whether n0 is certified squarefree;
    larger hidden square factors are left in place.
    """
    if n <= 0:
        raise ValueError("need a positive integer")
    k, n0 = 1, 1
    rest = n
    p = 2
    while p * p <= rest and p <= 10 ** 6:
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            k *= p ** (e // 2)
            if e % 2:
                n0 *= p
        p += 1 if p == 2 else 2
    if rest > 1:
        r = sympy.integer_nthroot(rest, 2)
        if r[1]:
            k *= r[0]
        else:
            certified = rest <= 10 ** 12
            n0 *= rest
            return k, n0, certified
    return k, n0, True


def is_perfect_square(n: int) -> bool:
    return n >= 0 and sympy.integer_nthroot(n, 2)[1]


def sqrt_generator_spec(n0: int) -> GeneratorSpec:
    """Real generator for the positive square root of squarefree n0 > 1."""
    if n0 <= 1:
        raise ValueError("need a squarefree integer > 1")
    r = sympy.integer_nthroot(n0, 2)[0]
    return GeneratorSpec(
        name=f"sqrt{n0}",
        min_poly=(Fraction(-n0), _F0, _F1),
        root_re=(Fraction(r), Fraction(r + 1)),
        root_im=(_F0, _F0),
        conj=CONJ_REAL,
    )


def sqrt_element(field: NumberField, n: int) -> tuple[NumberField, FieldElement]:
    """An element with square n, extending the field if needed.

    Negative n uses i * sqrt(|n|), so only real radicand generators are
    ever adjoined and no hidden relation between sqrt(-n) and i*sqrt(n)
    can arise.  For n < 0 the returned root has positive imaginary part.
    """
    if n == 0:
        return field, field.zero()
    k, n0, _ = squarefree_decomposition(abs(n))
    if n0 > 1:
        spec = sqrt_generator_spec(n0)
        if spec.name not in field.gen_names():
            field = field.extended((spec,))
        root = field.gen(spec.name) * k
    else:
        root = field.rational(k)
    if n < 0:
        root = root * field.i()
    return field, root


# ---------------------------------------------------------------------------
# numeric independence screen
# ---------------------------------------------------------------------------

def find_small_relation(elements, height: int = 10, precision_bits: int = 128):
    """Search for a small integer relation among the given elements.

    Returns the first coefficient vector (entries bounded by ``height``,
    first nonzero entry positive) whose combination embeds into a box
    containing 0 at the requested precision, or None.  A returned vector
    is a *suspicion*, not a proof of dependence; None is a sanity screen,
    not a proof of independence.
    """
    elements = list(elements)
    if not elements:
        return None
    field = elements[0].field
    for e in elements[1:]:
        field = union_field(field, e.field)
    elements = [e.in_field(field) for e in elements]
    boxes = [embed(e, precision_bits + 32) for e in elements]
    mids = [b.midpoint() for b in boxes]
    scale = max(abs(m) for m in mids) + 1.0
    ranges = [range(-height, height + 1)] * len(elements)
    for c in itertools.product(*ranges):
        if all(v == 0 for v in c):
            continue
        first = next(v for v in c if v != 0)
        if first < 0:
            continue
        approx = sum(v * m for v, m in zip(c, mids))
        if abs(approx) > 1e-9 * scale * height:
            continue
        total = ComplexBox.exact(_F0)
        for v, b in zip(c, boxes):
            if v:
                total = total.add(b.scale(Fraction(v)))
        if total.contains_zero():
            return tuple(c)
    return None
