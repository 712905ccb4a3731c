import random

import pytest

from hbinv.tangle import (ARITY, Gen, Leaf, Compose, Tensor, arity, parse,
                          to_text, to_slices, mirror, horn, disk_sum,
                          braid_word, builtin, identity, cap_positions,
                          relation_catalogue, SliceForm)


def test_parse_basics():
    e = parse("cap . cup")
    assert isinstance(e, Compose)
    assert arity(e) == (0, 0)
    assert arity(parse("mu & nu")) == (3, 3)
    assert arity(parse("X")) == (2, 2)


def test_unicode_aliases():
    assert parse("∩ ∘ ∪") == parse("cap . cup")
    assert parse("∧ ⊗ |") == parse("mu & id")
    assert parse("(∧ & |) ∘ (| & ∨)") == parse("(mu & id) . (id & nu)")


def test_comments_are_ignored():
    text = "cap .  # close the top\ncup   # open below\n"
    assert parse(text) == parse("cap . cup")


def test_syntax_errors_carry_positions():
    with pytest.raises(ValueError, match="position"):
        parse("cap . zz")
    with pytest.raises(ValueError, match="unclosed"):
        parse("(cap . cup")
    with pytest.raises(ValueError, match="syntax error"):
        parse("")
    with pytest.raises(ValueError, match="unexpected"):
        parse("cap cup")


def test_arity_mismatch_names_both_sides():
    with pytest.raises(ValueError) as exc:
        parse("cap . cap")
    msg = str(exc.value)
    assert "'cap'" in msg and "source 2" in msg and "target 0" in msg
    with pytest.raises(ValueError, match="arity mismatch"):
        Compose(Leaf(Gen.MU), Leaf(Gen.MU))


def _random_tree(rng, depth):
    if depth == 0 or rng.random() < 0.4:
        return Leaf(rng.choice(list(Gen)))
    if rng.random() < 0.5:
        return Tensor(_random_tree(rng, depth - 1),
                      _random_tree(rng, depth - 1))
    bottom = _random_tree(rng, depth - 1)
    want = arity(bottom)[1]
    top = _tree_with_source(rng, want, depth - 1)
    return Compose(top, bottom)


def _tree_with_source(rng, s, depth):
    if s == 0:
        return Leaf(Gen.CUP)
    out = None
    for _ in range(s):
        atom = Leaf(rng.choice([Gen.ID, Gen.ID, Gen.NU]))
        out = atom if out is None else Tensor(out, atom)
    if depth > 0 and rng.random() < 0.5:
        return Compose(_tree_with_source(rng, arity(out)[1], depth - 1), out)
    return out


def test_print_parse_round_trip_random():
    rng = random.Random(7)
    for _ in range(200):
        e = _random_tree(rng, 4)
        assert parse(to_text(e)) == e


def test_slices_of_side_by_side():
    sf = to_slices(parse("cap & cup"))
    flat = [g for layer in sf.layers for g in layer]
    assert flat.count(Gen.CAP) == 1 and flat.count(Gen.CUP) == 1
    assert sf.source == 2 and sf.target == 2
    # ragged tensor pads the shallow side with identities below
    sf = to_slices(parse("(mu . X) & id"))
    assert sf.layers == ((Gen.MU, Gen.ID), (Gen.X, Gen.ID))


def test_slice_to_expr_preserves_arity():
    rng = random.Random(3)
    for _ in range(100):
        e = _random_tree(rng, 4)
        sf = to_slices(e)
        assert arity(sf.to_expr()) == arity(e)
        assert sf.source == arity(e)[0]
        assert sf.target == arity(e)[1]


def test_mirror_is_an_involution():
    rng = random.Random(5)
    for _ in range(100):
        e = _random_tree(rng, 4)
        assert mirror(mirror(e)) == e
    assert mirror(Leaf(Gen.X)) == Leaf(Gen.XB)
    assert mirror(parse("X & Xb")) == parse("X & Xb")
    assert mirror(parse("mu & id")) == parse("id & mu")


def test_horn_of_the_unknot():
    e = horn(builtin("O"), 0)
    assert to_text(e) == "mu . cup"
    assert arity(e) == (0, 1)


def test_horn_positions_and_errors():
    theta = builtin("theta")
    assert len(cap_positions(to_slices(theta))) == 1
    assert arity(horn(theta, 0)) == (0, 1)
    with pytest.raises(ValueError, match="out of range"):
        horn(theta, 1)
    with pytest.raises(ValueError, match="closed"):
        horn(parse("cap"), 0)
    stacked = parse("(cap . cup) . (cap . cup)")
    assert arity(stacked) == (0, 0)
    for p in range(2):
        assert arity(horn(stacked, p)) == (0, 1)


def test_horn_threads_through_upper_layers():
    stacked = parse("(cap . cup) . (cap . cup)")
    h = horn(stacked, 1)
    assert to_slices(h).layers == ((Gen.ID, Gen.CAP), (Gen.ID, Gen.CUP),
                                   (Gen.MU,), (Gen.CUP,))


def test_horn_blocked_strand():
    # the middle cap's new strand would have to pierce the top cap
    e = parse("cap . (id & cap & id) . (cup & cup)")
    assert arity(horn(e, 0)) == (0, 1)
    with pytest.raises(ValueError, match="blocked"):
        horn(e, 1)


def test_disk_sum():
    hO = horn(builtin("O"), 0)
    s = disk_sum(hO, hO)
    assert arity(s) == (0, 0)
    with pytest.raises(ValueError, match="disk sum"):
        disk_sum(builtin("O"), hO)


def test_braid_word_shapes():
    assert braid_word(1, 1) == Leaf(Gen.X)
    assert braid_word(0, 3) == identity(3)
    assert braid_word(3, 0) == identity(3)
    assert arity(braid_word(2, 3)) == (5, 5)
    assert braid_word(2, 1) == parse("(X & id) . (id & X)")
    assert braid_word(1, 2) == parse("(id & X) . (X & id)")
    with pytest.raises(ValueError):
        braid_word(0, 0)


def test_builtins():
    assert builtin("O") == parse("cap . cup")
    assert builtin("theta") == parse("cap . (mu & id) . (nu & id) . cup")
    assert builtin("genus(1)") == builtin("O")
    assert builtin("genus(2)") == builtin("theta")
    assert arity(builtin("genus(5)")) == (0, 0)
    with pytest.raises(ValueError, match="unknown builtin"):
        builtin("trefoil")
    with pytest.raises(ValueError, match="unknown builtin"):
        builtin("genus(0)")


def test_relation_catalogue_shape():
    cat = relation_catalogue()
    assert len(cat) == 17
    assert set(cat) == {f"old{i}" for i in range(1, 12)} | \
        {f"new{i}" for i in range(1, 6)} | {"old4p"}
    for name, exprs in cat.items():
        assert len(exprs) in (2, 3)
        assert len({arity(x) for x in exprs}) == 1
    # nu only ever appears expanded, so the generating set stays minimal
    for exprs in cat.values():
        for x in exprs:
            assert "nu" not in to_text(x)
