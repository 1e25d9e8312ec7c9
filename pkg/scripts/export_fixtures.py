"""Write the bundled example inputs and certificates as JSON files under fixtures/."""
import json
import sys
from fractions import Fraction
from pathlib import Path

from grlin import examples, loc, mideal
from grlin.hmat import HMatrix, matrix_to_json
from grlin.ring import catalog_ring


def dump(path: Path, obj):
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n")
    print("wrote", path)


def main(out: str = "fixtures"):
    d = Path(out)
    d.mkdir(exist_ok=True)
    Q2, QL, QP = catalog_ring("Q2"), catalog_ring("QL"), catalog_ring("QP")
    one, x = Q2.one(), Q2.hom(1, Fraction(1))
    A = HMatrix(Q2, (0, 1), (0, 1), [[one, x], [x, one]])
    dump(d / "q2_rank_one.json", {"matrix": matrix_to_json(A)})
    bad = matrix_to_json(A)
    bad["alpha"] = [bad["alpha"][0], bad["alpha"][0]]
    dump(d / "q2_bad_distribution.json", {"matrix": bad})

    fx = {name: (c, f) for name, c, sigma, f in examples.malcolmson_fixtures()}
    for name in ("trivial-Q2", "exf-E", "exf-F-roundtrip"):
        c, f = fx[name]
        dump(d / f"malcolmson_{name}.json", {"ring": c.L.ring.name, "sigma": f.name, "certificate": loc.cert_to_json(c)})
    c, f = fx["exf-E"]
    flipped = loc.cert_to_json(c)
    flipped["r"] = [{"deg": 0, "coeffs": ["1", "1"]}]
    dump(d / "malcolmson_flipped.json", {"ring": "EXF", "sigma": f.name, "certificate": flipped})

    target, cert = examples.ab_decomposition()
    dump(d / "derivation_ab.json", {"ring": "EXF", "certificate": mideal.cert_to_json(cert)})

    t = QL.hom(1, Fraction(1))
    tup = loc.LocTuple(HMatrix(QL, (-1,), (-1,), [[QL.one()]]), HMatrix(QL, (0,), (-1,), [[t]]),
                       HMatrix(QL, (0,), (0,), [[QL.one()]]), -1)
    dump(d / "tuple_t_inverse.json", {"ring": "QL", "hom": "id_QL", "tuple": loc.tuple_to_json(tup)})

    B = HMatrix(QL, (0, 1), (0, -1), [[QL.one(), t], [t, t * t]])
    dump(d / "ql_regrade.json", {"matrix": matrix_to_json(B)})

    tp = QP.hom(1, Fraction(1))
    Acr = HMatrix(QP, (0,), (0, -1), [[-QP.one(), tp]])
    u = HMatrix(QL, (0, -1), (0,), [[QL.one()], [QL.hom(-1, Fraction(1))]])
    dump(d / "cramer_t_inverse.json", {"ring": "QP", "hom": "incl_QP_QL", "A": matrix_to_json(Acr),
                                       "u": matrix_to_json(u)})


if __name__ == "__main__":
    main(*sys.argv[1:])
