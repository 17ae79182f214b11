"""Regenerate the bundled torus documents in tori/.

Run from the repository root:  python scripts/gen_bundled_tori.py
"""

import pathlib
import sys
from fractions import Fraction

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from toruslab import papercheck
from toruslab.cli import document_from_torus
from toruslab.exactfield import GeneratorSpec, sqrt_element
from toruslab.linalg import Mat
from toruslab.torus import attach_multiplication

OUT = pathlib.Path(__file__).resolve().parent.parent / "tori"

CBRT3 = GeneratorSpec(
    name="r",
    min_poly=(Fraction(-3), Fraction(0), Fraction(0), Fraction(1)),
    root_re=(Fraction(7, 5), Fraction(29, 20)),
    root_im=(Fraction(0), Fraction(0)),
    conj="real",
)


def scalar_with_mult(m):
    torus = papercheck.scalar_cm_product(m)
    _, mu = sqrt_element(torus.field, -m)
    mult = attach_multiplication(torus, Mat.diagonal([mu, -mu]), -m)
    return torus, [mult]


def main():
    OUT.mkdir(exist_ok=True)
    docs = {}
    t, m = papercheck.example1(1)
    docs["example1_m1.json"] = document_from_torus(t, [m])
    t, m = papercheck.example1(2, CBRT3)
    docs["example1_m2.json"] = document_from_torus(t, [m])
    t, m = papercheck.example2(1, 2)
    docs["example2_m1_n2.json"] = document_from_torus(t, [m])
    t, m = papercheck.example2(2, 3)
    docs["example2_m2_n3.json"] = document_from_torus(t, [m])
    for m_val in (1, 2):
        t, ms = scalar_with_mult(m_val)
        docs[f"scalar_m{m_val}.json"] = document_from_torus(t, ms)
    for d in (2, 3):
        t, m = papercheck.random_torus_with_sqrt_d(d, 1)
        docs[f"random_d{d}_seed1.json"] = document_from_torus(t, [m])
    for name, doc in sorted(docs.items()):
        path = OUT / name
        path.write_text(doc.to_json_text(), encoding="utf-8")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
