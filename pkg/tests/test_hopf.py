import pytest

from hbinv.scalar import Cyc
from hbinv.linmap import LinMap
from hbinv.hopf import (HopfDataError, HopfPresentation, build_qcqs, center,
                        check_lambda_symmetry, compute_integrals, opposite,
                        trace_s2, verify_hopf, verify_yd)
from hbinv.zoo import builtin_group, group_algebra


ONE = Cyc.one(1)


def sweedler():
    """Basis 1, g, x, gx with g^2 = 1, x^2 = 0, xg = -gx.

    The smallest Hopf algebra whose left and right integrals differ.
    """
    mult = {
        (0, 0): {0: ONE}, (0, 1): {1: ONE}, (0, 2): {2: ONE}, (0, 3): {3: ONE},
        (1, 0): {1: ONE}, (1, 1): {0: ONE}, (1, 2): {3: ONE}, (1, 3): {2: ONE},
        (2, 0): {2: ONE}, (2, 1): {3: -ONE},
        (3, 0): {3: ONE}, (3, 1): {2: -ONE},
    }
    comult = {
        0: {(0, 0): ONE},
        1: {(1, 1): ONE},
        2: {(2, 0): ONE, (1, 2): ONE},
        3: {(3, 1): ONE, (0, 3): ONE},
    }
    antipode = {0: {0: ONE}, 1: {1: ONE}, 2: {3: -ONE}, 3: {2: ONE}}
    antipode_inv = {0: {0: ONE}, 1: {1: ONE}, 2: {3: ONE}, 3: {2: -ONE}}
    return HopfPresentation(
        4, 1, mult, {0: ONE}, comult, {0: ONE, 1: ONE},
        antipode, antipode_inv, labels=["1", "g", "x", "gx"])


def test_axiom_suite_on_a_group_algebra(zoo):
    H, _, _ = zoo("kZ6")
    rep = verify_hopf(H)
    assert rep.ok
    assert len(rep.checks) == 13
    names = [c.name for c in rep.checks]
    assert len(set(names)) == 13


def test_corrupted_product_is_named(zoo):
    H, _, _ = zoo("kZ3")
    mult = {k: dict(v) for k, v in H.mult.items()}
    mult[(1, 2)] = {1: ONE}          # g * g^2 should be the unit
    bad = HopfPresentation(
        H.dim, H.conductor, mult, dict(H.unit),
        {i: dict(c) for i, c in H.comult.items()}, dict(H.counit),
        {i: dict(c) for i, c in H.antipode.items()},
        {i: dict(c) for i, c in H.antipode_inv.items()})
    rep = verify_hopf(bad)
    assert not rep.ok
    bad_names = {c.name for c in rep.failures()}
    assert bad_names
    assert bad_names <= {c.name for c in rep.checks}
    assert any(c.detail for c in rep.failures())


def test_out_of_range_indices_rejected():
    with pytest.raises(HopfDataError, match="out of range"):
        HopfPresentation(
            2, 1, {(0, 5): {0: ONE}}, {0: ONE}, {0: {(0, 0): ONE}},
            {0: ONE}, {0: {0: ONE}}, {0: {0: ONE}})


def test_sweedler_is_a_hopf_algebra_but_not_unimodular():
    H = sweedler()
    assert verify_hopf(H).ok
    I = compute_integrals(H)
    assert not I.unimodular
    # left integral spans x + gx, right integral spans x - gx
    lv = I.left
    assert set(lv) == {2, 3} and lv[2] == lv[3]
    rv = I.right
    assert set(rv) == {2, 3} and rv[2] == -rv[3]
    with pytest.raises(HopfDataError, match="unimodular"):
        build_qcqs(H, I)


def test_group_algebra_integrals(zoo):
    H, _, _ = zoo("kS3")
    I = compute_integrals(H)
    assert I.unimodular and I.cosemisimple
    vals = set(I.left.values())
    assert len(I.left) == 6 and len(vals) == 1
    assert I.right == I.left
    assert I.Lambda == {i: ONE for i in range(6)}
    assert I.dual_left == {0: ONE}


def test_trace_of_squared_antipode(zoo):
    H6, _, _ = zoo("kZ6")
    assert trace_s2(H6) == Cyc.from_rational(6)
    assert trace_s2(sweedler()).is_zero()


def test_opposite_presentation(zoo):
    H, _, _ = zoo("kS3")
    Hop = opposite(H)
    assert verify_hopf(Hop).ok
    for (i, j), col in H.mult.items():
        assert Hop.mult[(j, i)] == col
    back = opposite(Hop)
    assert back.mult == H.mult
    assert back.antipode == H.antipode


def test_center_dimension_counts_conjugacy_classes(zoo):
    HS3, _, _ = zoo("kS3")
    assert len(center(HS3)) == 3
    HZ6, _, _ = zoo("kZ6")
    assert len(center(HZ6)) == 6


def test_lambda_symmetry_checks(zoo):
    _, _, BS3 = zoo("kS3")
    assert check_lambda_symmetry(BS3) == {"assumption15": True,
                                          "commutator_law": True}
    _, _, Buq = zoo("uq3")
    assert check_lambda_symmetry(Buq) == {"assumption15": True,
                                          "commutator_law": True}


def test_cosemisimple_flags(zoo):
    Huq, _, _ = zoo("uq3")
    assert not compute_integrals(Huq).cosemisimple
    HB, _, _ = zoo("B12")
    assert compute_integrals(HB).cosemisimple


def test_module_category_suite_shape(zoo):
    _, _, B = zoo("kZ2")
    rep = verify_yd(B)
    assert rep.ok
    assert len(rep.checks) == 11


def test_bundle_shapes_and_braid_inverse(zoo):
    _, _, B = zoo("kZ3")
    d = B.dim
    assert (B.ev.rows, B.ev.cols) == (1, d * d)
    assert (B.coev.rows, B.coev.cols) == (d * d, 1)
    assert (B.action.rows, B.action.cols) == (d, d * d)
    ident = LinMap.identity(d * d, B.conductor)
    assert B.braid.compose(B.braid_inv) == ident
    assert B.braid_inv.compose(B.braid) == ident


def test_lambda_rescaling_moves_ev_and_coev_only(zoo):
    H, _, B = zoo("kS3")
    two = Cyc.from_rational(2)
    B2 = build_qcqs(H, lambda_scale=two)
    assert B2.ev == B.ev.scale(two)
    assert B2.coev.scale(two) == B.coev
    assert B2.braid == B.braid
    assert B2.action == B.action
    with pytest.raises(HopfDataError, match="nonzero"):
        build_qcqs(H, lambda_scale=Cyc.zero(1))
