"""Smoke test for the hardy_kernels extension module.

Build and install first:
    pip install maturin
    cd crates/python && maturin build --release -o dist && pip install dist/*.whl
"""

import cmath
import json
import math
import sys

import hardy_kernels as hk


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    z = hk.fixture("z")
    g = hk.fixture("flagship-g")

    # Round trip through the on-disk JSON format.
    again = hk.Symbol.from_json(g.to_json())
    assert again.max_coeff_diff(g) == 0.0
    assert json.loads(g.to_json())["rows"] == 1

    # Evaluation agrees with sqrt(3)/(2 - w^2).
    w = 0.3 + 0.2j
    assert close(g.eval(w)[0][0], math.sqrt(3) / (2 - w * w), 1e-12)

    rep = hk.classify(g, z)
    assert rep["final"] == "is-kernel", rep["final"]
    phi = rep["phi"]
    t = 0.7
    zt = cmath.exp(1j * t)
    want = zt.conjugate() * (2 - zt * zt) / (2 - zt.conjugate() ** 2)
    assert close(phi.eval(zt)[0][0], want, 1e-8)

    rep = hk.classify(hk.fixture("one-plus-z"), z)
    assert rep["final"] == "not-kernel"
    assert close(rep["special"]["mass_gap"], 1.0, 1e-8)

    # Trivial recipe: G0' = 1, U = z gives phi = conj z and kernel = constants.
    con = hk.construct(hk.Symbol.identity(1), z)
    assert con["f_dim"] == 1
    assert con["phi"].max_coeff_diff(z.adjoint()) < 1e-12
    assert all(c["angle"] < 1e-10 for c in con["cross_check"])

    ker = hk.toeplitz_kernel(z.adjoint(), 8)
    assert len(ker) == 1 and close(abs(ker[0][0]), 1.0, 1e-12)

    b = hk.sarason_b(hk.fixture("one-plus-z"))
    a, defect, gap = hk.pair_from_b(hk.Symbol.scalar(2, [0.5]))
    assert defect <= 1e-10 and b.shape == (1, 1)

    rig = hk.rigidity(hk.Symbol.scalar(0, [1.0, -1.0]))
    assert rig["verdict"] == "non-rigid"

    try:
        hk.classify(hk.Symbol.identity(2), z)
    except ValueError:
        pass
    else:
        raise AssertionError("shape mismatch should raise ValueError")

    print("hardy_kernels smoke test: OK")
    return 0


if __name__ == "__main__":
    sys.exit(main())
