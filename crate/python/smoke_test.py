"""Smoke test for the qbrion extension module.

Build and install with `maturin develop -m crates/python/Cargo.toml`, or build
the cdylib with `--features extension-module` and put it on PYTHONPATH as
qbrion.so, then run `python python/smoke_test.py`.
"""

import math
from fractions import Fraction
from pathlib import Path

import qbrion

FIXTURES = Path(__file__).resolve().parent.parent / "crates" / "core" / "fixtures"


def main():
    seg = qbrion.Polytope.segment(2)
    assert seg.dim == 1
    assert seg.lattice_points() == [[0], [1], [2]]
    assert qbrion.rs_polynomial(seg) == {(0,): [1], (1,): [1, 1], (2,): [1]}

    hexagon = qbrion.Polytope.load(FIXTURES / "hexagon.json")
    report = hexagon.validate()
    assert report["smooth"] and report["radially_symmetric"]

    rep = qbrion.verify(hexagon, order=6, trials=2, seed=3)
    assert rep["equal"], rep["first_mismatch"]

    trapezoid = qbrion.Polytope.load(FIXTURES / "trapezoid_f1.json")
    assert qbrion.verify(trapezoid, order=6)["equal"]
    try:
        qbrion.verify(trapezoid, theorem1=True)
    except qbrion.PreconditionError:
        pass
    else:
        raise AssertionError("theorem1 form accepted a polytope without radial symmetry")

    mu = {u: Fraction(*w) for u, w in qbrion.mu_measure(trapezoid).items()}
    assert mu == {(0, 1): Fraction(1, 4), (1, 1): Fraction(1, 2), (2, 1): Fraction(1, 4)}

    model = qbrion.gaussian_model(hexagon)
    assert all(math.isclose(m, 1.0, abs_tol=1e-9) for m in model["mean"])
    assert math.isclose(model["covariance"][0][1], 1 / 6, abs_tol=1e-9)

    weights = qbrion.heatmap_weights(hexagon.dilate(10), 0.6)
    assert math.isclose(sum(w for _, w in weights), 1.0, abs_tol=1e-12)

    square = qbrion.Polytope.load(FIXTURES / "square_p1xp1.json")
    assert all(qbrion.verify_derivative_recursion(square, i) for i in range(2))
    lt = qbrion.leading_term(square)
    assert lt["derivative"] == lt["expected"] == [1, 1]
    assert qbrion.ladder(2, 3, 0)["all_hold"]

    try:
        qbrion.Polytope([[2], [-1]], [0, 3])
    except ValueError:
        pass
    else:
        raise AssertionError("non-primitive normal accepted")

    print("qbrion smoke test ok")


if __name__ == "__main__":
    main()
