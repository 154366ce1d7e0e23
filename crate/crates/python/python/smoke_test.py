"""Smoke test for the `alcove` extension module.

Build and install first, e.g. `pip install --no-build-isolation ./crates/python`
or `maturin develop -m crates/python/Cargo.toml`.
"""

from fractions import Fraction

import alcove


def main():
    a2 = alcove.RootSystem("A2")
    assert a2.h_dual == 3 and a2.rank == 2
    assert a2.rho == (1, 1) and a2.weyl_group_order == 6
    assert alcove.RootSystem("E8").h_dual == 30

    assert alcove.RootSystem("A1").fold([3], 3) == ((1,), -1)
    assert alcove.RootSystem("A1").fold([2], 3) is None

    a1 = alcove.RootSystem("A1")
    assert a1.fusion([1], [1], 1).coeffs == {(0,): 1}
    assert a1.fusion([1], [1], 2).coeffs == {(0,): 1, (2,): 1}

    k = 2
    table = a2.fusion_table(k)
    assert len(table) == len(a2.level_weights(k)) ** 2
    s = a2.s_matrix(k)
    assert s.unitarity_defect() < 1e-12
    for (lam, mu), prod in table.items():
        via_s, dev = s.verlinde_fusion(list(lam), list(mu))
        assert via_s == prod and dev < 1e-9

    x = a2.fusion_basis([1, 0], k)
    y = a2.fusion_basis([0, 1], k)
    assert (x * y).coeffs == {(0, 0): 1, (1, 1): 1}

    assert a2.dimension([1, 1]) == 8
    assert sum(a2.weights([1, 1]).values()) == 8
    assert a2.tensor([1, 0], [0, 1]) == {(0, 0): 1, (1, 1): 1}

    img = a1.fht_image([1], 2, 8)
    assert img[(1,)] == 1
    assert a1.inverse_fht(img, 2, 8).coeffs == {(1,): 1}

    g1 = ([Fraction(1, 2), Fraction(1, 3)], (1, -1), Fraction(1, 5))
    g2 = (["1/4", 0], (0, 2), 0)
    for variant in ("bas", "triv"):
        t, eta, z = a2.group_multiply(g1, g2, 3, variant)
        assert eta == (1, 1) and all(isinstance(c, Fraction) for c in t)
    lhs = a2.psi(a2.group_multiply(g1, g2, 3, "triv"), 3)
    rhs = a2.group_multiply(a2.psi(g1, 3), a2.psi(g2, 3), 3, "bas")
    assert lhs == rhs

    th = a1.theta_element(2, [((1,), (0,), 1)])
    idem = th.star() * th
    assert idem.terms == [((0,), (0,), 1)]
    blocks = th.matrix_model(2)
    assert len(blocks) == 4

    reports = alcove.run_verify(["lattice_cocycle"], cases=50)
    assert all(c["failed"] == 0 for r in reports for c in r["checks"])

    print("alcove", alcove.__version__, "smoke test ok")


if __name__ == "__main__":
    main()
