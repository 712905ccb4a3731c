import pytest

from hbinv.hopf import opposite, verify_hopf
from hbinv.linmap import LinMap
from hbinv.scalar import Cyc, Matrix
from hbinv.zoo import (GroupTable, _UqEngine, builtin_group,
                       crosscheck_expected, kac_b4m, load_group,
                       quantum_double, uq_opposite_iso, uq_sl2)


def test_builtin_group_parsing():
    assert builtin_group("Z6").order == 6
    assert builtin_group("cyclic(4)").order == 4
    s3 = builtin_group("S3")
    assert s3.order == 6
    assert any(s3.mul(i, j) != s3.mul(j, i)
               for i in range(6) for j in range(6))
    assert builtin_group("D4").order == 8
    assert builtin_group("Z2 x Z3").order == 6
    with pytest.raises(ValueError, match="unknown group"):
        builtin_group("F4")


def test_group_table_validation_catches_broken_tables():
    with pytest.raises(ValueError, match="not a group"):
        GroupTable(2, [[0, 1], [1, 1]], ["e", "g"]).validate()
    with pytest.raises(ValueError, match="identity"):
        GroupTable(2, [[1, 0], [0, 1]], ["e", "g"]).validate()


def test_group_table_inverses():
    g = builtin_group("D4")
    for i in range(g.order):
        assert g.mul(i, g.inv(i)) == 0
        assert g.mul(g.inv(i), i) == 0


def test_load_group_roundtrip(tmp_path):
    p = tmp_path / "z3.cayley"
    p.write_text("# additive Z/3\n3\n0 1 2\n1 2 0\n2 0 1\n")
    g = load_group(str(p))
    assert g.order == 3 and g.mul(1, 2) == 0
    assert builtin_group(str(p)).order == 3
    bad = tmp_path / "bad.cayley"
    bad.write_text("2\n0 1\n1 1\n")
    with pytest.raises(ValueError, match="not a group"):
        load_group(str(bad))


@pytest.mark.parametrize("key", ["kZ3", "kS3", "DZ2", "DS3", "B12"])
def test_closed_forms_match_derived_bundle(zoo, key):
    _, E, B = zoo(key)
    rep = crosscheck_expected(B, E)
    assert rep.ok, str(rep)
    assert {c.name for c in rep.checks} == {
        "lambda_closed_form", "Lambda_closed_form", "ev_closed_form",
        "coev_closed_form", "braid_closed_form"}


def test_uq_closed_form_integrals(zoo):
    _, E, B = zoo("uq3")
    rep = crosscheck_expected(B, E)
    assert rep.ok, str(rep)
    assert {c.name for c in rep.checks} == {"lambda_closed_form",
                                            "Lambda_closed_form"}


def test_b4m_dimensions_and_basis_change(zoo):
    H, E, _ = zoo("B12")
    assert H.dim == 12
    P, Pinv = E.extra["ebasis"], E.extra["ebasis_inv"]
    ident = LinMap.identity(12, 1)
    assert P.compose(Pinv) == ident and Pinv.compose(P) == ident
    with pytest.raises(ValueError, match="m out of range"):
        kac_b4m(2)


def test_quantum_double_group_like_axes(zoo):
    H, _, _ = zoo("DZ2")
    assert H.dim == 4
    assert verify_hopf(H).ok
    H36, _, _ = zoo("DS3")
    assert H36.dim == 36


def test_uq_commutation_rewrite_display():
    # y x^j = q^-2j x^j y + (j)_q2 a^2 x^(j-1) - q^-2(j-1) (j)_q2 x^(j-1)
    for n in (3, 5):
        eng = _UqEngine(n)
        e = eng.e
        for j in range(1, e):
            cj = eng.jq2(j)
            want = {(0, j, 1): eng.q(-2 * j),
                    (2 % e, j - 1, 0): cj,
                    (0, j - 1, 0): -(cj * eng.q(-2 * (j - 1)))}
            want = {k: v for k, v in want.items() if not v.is_zero()}
            assert eng.R(1, j) == want


def _mono_cols(E):
    e = E.extra["e"]

    def tomono(col):
        out = {}
        for ix, c in col.items():
            i, r = divmod(ix, e * e)
            out[(i, *divmod(r, e))] = c
        return out
    return tomono


@pytest.mark.parametrize("n", [3, 4, 5])
def test_uq_integral_in_chevalley_generators(n):
    """(sum_i K^i) F^(e-1) E^(e-1) lands on the integral; the
    epsilon-power prefactor alone misses it by exactly qbar^2."""
    _, E = uq_sl2(n)
    eng, e = E.extra["engine"], E.extra["e"]
    tomono = _mono_cols(E)
    Km, Fm, Em = tomono(E.extra["K"]), tomono(E.extra["F"]), tomono(E.extra["E"])
    sumK, acc = {}, {(0, 0, 0): Cyc.one(n)}
    for _ in range(e):
        for w, c in acc.items():
            sumK[w] = sumK.get(w, Cyc.zero(n)) + c
        acc = eng.col_mul(acc, Km)
    prod = eng.col_mul(eng.col_mul(sumK, eng.col_pow(Fm, e - 1)),
                       eng.col_pow(Em, e - 1))
    eps, c_q = E.extra["eps_q"], E.extra["c_q"]
    lam_q = {w: c_q * c for w, c in tomono(E.Lambda).items()}
    claimed = {w: eps ** (e - 1) * c for w, c in prod.items()}
    assert claimed != lam_q
    assert {w: eng.q(-2) * c for w, c in claimed.items()} == lam_q


def test_uq_dual_integral_orientations(zoo):
    H, E, _ = zoo("uq3")
    d, n = H.dim, H.conductor
    I = LinMap.identity(d, n)
    lam = H.row_map(E.lam)
    lamp = H.row_map(E.extra["lam_prime"])
    fix = H.unit_map()
    assert I.tensor(lam).compose(H.delta_map()) == fix.compose(lam)
    assert lam.tensor(I).compose(H.delta_map()) != fix.compose(lam)
    assert lamp.tensor(I).compose(H.delta_map()) == fix.compose(lamp)
    # both functionals take the value 1 on the integral
    Lam_col = LinMap.from_column(d, n, E.Lambda)
    assert lam.compose(Lam_col).scalar() == Cyc.one(n)
    assert lamp.compose(Lam_col).scalar() == Cyc.one(n)


@pytest.mark.parametrize("n", [3, 4])
def test_uq_opposite_isomorphism(n):
    Hqb, Hq, M = uq_opposite_iso(n)
    Hop = opposite(Hq)
    M2 = M.tensor(M)
    assert M.compose(Hqb.m_map()) == Hop.m_map().compose(M2)
    assert M.compose(Hqb.unit_map()) == Hop.unit_map()
    assert Hop.delta_map().compose(M) == M2.compose(Hqb.delta_map())
    assert Hop.counit_map().compose(M) == Hqb.counit_map()
    assert Hop.s_map().compose(M) == M.compose(Hqb.s_map())
    flat = [M.entry(r, c) for r in range(M.rows) for c in range(M.cols)]
    assert not Matrix(M.rows, M.cols, n, flat).nullspace()


@pytest.mark.parametrize("n", [3, 4])
def test_uq_opposite_iso_transports_integral(n):
    Hqb, Hq, M = uq_opposite_iso(n)
    _, Eq = uq_sl2(n)
    _, Eqb = uq_sl2(n, conjugate=True)
    eng = Eq.extra["engine"]
    src = {i: Eqb.extra["c_q"] * v for i, v in Eqb.Lambda.items()}
    dst = {i: Eq.extra["c_q"] * v for i, v in Eq.Lambda.items()}
    got = M.compose(LinMap.from_column(Hqb.dim, n, src))
    want = LinMap.from_column(Hq.dim, n, dst).scale(eng.q(4))
    assert got == want


def test_uq_special_values_at_n4():
    _, E = uq_sl2(4)
    z4 = Cyc.zeta(4)
    assert E.extra["c_q"] == -(z4 + z4)
    assert E.extra["eps_q"] == -Cyc.one(4)
    assert E.extra["e"] == 2


def test_uq_conjugate_parameters():
    _, E = uq_sl2(3)
    _, Eb = uq_sl2(3, conjugate=True)
    q = E.extra["engine"].q(1)
    qb = Eb.extra["engine"].q(1)
    assert qb == q.conj()
    assert Eb.extra["c_q"] == E.extra["c_q"].conj()
    with pytest.raises(ValueError, match="n >= 3"):
        uq_sl2(2)
