"""Tangle expressions for handlebody-links.

The category is generated by seven strand pictures; an expression is a
tree of vertical compositions (top of / bottom of) and horizontal
juxtapositions.  Everything here is purely combinatorial: parsing,
arity checking, the slice normal form, the defining relation catalogue,
and the structural transforms (mirror, horn, disk sum, block braids).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Union


class Gen(Enum):
    ID = "id"
    CAP = "cap"
    CUP = "cup"
    MU = "mu"
    NU = "nu"
    X = "X"
    XB = "Xb"


# generator arities as (source, target) = (bottom, top) strand counts
ARITY = {
    Gen.ID: (1, 1),
    Gen.CAP: (2, 0),
    Gen.CUP: (0, 2),
    Gen.MU: (2, 1),
    Gen.NU: (1, 2),
    Gen.X: (2, 2),
    Gen.XB: (2, 2),
}


@dataclass(frozen=True)
class Leaf:
    gen: Gen


@dataclass(frozen=True)
class Compose:
    """top sits above bottom: the composite map applies bottom first."""
    top: "TangleExpr"
    bottom: "TangleExpr"

    def __post_init__(self):
        st, _ = arity(self.top)
        _, tb = arity(self.bottom)
        if st != tb:
            raise ValueError(
                f"arity mismatch in composition: '{to_text(self.top)}' has "
                f"source {st} but '{to_text(self.bottom)}' has target {tb}")


@dataclass(frozen=True)
class Tensor:
    left: "TangleExpr"
    right: "TangleExpr"


TangleExpr = Union[Leaf, Compose, Tensor]


def arity(e: TangleExpr) -> tuple[int, int]:
    """(source, target) strand counts; source is the bottom boundary."""
    if isinstance(e, Leaf):
        return ARITY[e.gen]
    if isinstance(e, Compose):
        sb, _ = arity(e.bottom)
        _, tt = arity(e.top)
        return sb, tt
    sl, tl = arity(e.left)
    sr, tr = arity(e.right)
    return sl + sr, tl + tr


def compose(*parts: TangleExpr) -> TangleExpr:
    """Vertical composite, first argument on top."""
    out = parts[0]
    for p in parts[1:]:
        out = Compose(out, p)
    return out


def tensor(*parts: TangleExpr) -> TangleExpr:
    """Horizontal juxtaposition, first argument leftmost."""
    out = parts[0]
    for p in parts[1:]:
        out = Tensor(out, p)
    return out


def identity(n: int) -> TangleExpr:
    """Id^n as an expression; n = 0 is not representable and rejected."""
    if n < 1:
        raise ValueError("identity needs at least one strand")
    return tensor(*([Leaf(Gen.ID)] * n))


# -- concrete syntax ------------------------------------------------------

_ALIASES = {
    "∘": ".",   # compose sign
    "⊗": "&",   # tensor sign
    "∧": "mu",
    "∨": "nu",
    "∩": "cap",
    "∪": "cup",
    "|": "id",
}
_TOKEN = re.compile(r"\s*(id|cap|cup|mu|nu|Xb|X|[().&])")


def _lex(text: str) -> list[tuple[str, int]]:
    clean = []
    for line in text.splitlines():
        clean.append(line.split("#", 1)[0])
    text = "\n".join(clean)
    for k, v in _ALIASES.items():
        text = text.replace(k, f" {v} ")
    out = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ValueError(f"syntax error at position {pos}: "
                             f"unexpected {text[pos]!r}")
        out.append((m.group(1), pos))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expr(self) -> TangleExpr:
        parts = [self.tens()]
        while self.peek() == ".":
            self.take()
            parts.append(self.tens())
        return compose(*parts)

    def tens(self) -> TangleExpr:
        parts = [self.atom()]
        while self.peek() == "&":
            self.take()
            parts.append(self.atom())
        return tensor(*parts)

    def atom(self) -> TangleExpr:
        if self.peek() is None:
            raise ValueError("syntax error at end of input: "
                             "expected a generator or '('")
        tok, pos = self.take()
        if tok == "(":
            e = self.expr()
            if self.peek() != ")":
                raise ValueError(f"syntax error at position {pos}: "
                                 "unclosed '('")
            self.take()
            return e
        for g in Gen:
            if g.value == tok:
                return Leaf(g)
        raise ValueError(f"syntax error at position {pos}: unexpected {tok!r}")


def parse(text: str) -> TangleExpr:
    """Parse the DSL: '.' composes (left operand on top), '&' juxtaposes."""
    p = _Parser(_lex(text))
    e = p.expr()
    if p.peek() is not None:
        tok, pos = p.toks[p.i]
        raise ValueError(f"syntax error at position {pos}: unexpected {tok!r}")
    return e


def to_text(e: TangleExpr) -> str:
    """Inverse of parse up to structural equality of the tree."""
    if isinstance(e, Leaf):
        return e.gen.value
    if isinstance(e, Compose):
        top = to_text(e.top)
        bot = to_text(e.bottom)
        if isinstance(e.bottom, Compose):
            bot = f"({bot})"
        return f"{top} . {bot}"
    left = to_text(e.left)
    right = to_text(e.right)
    if isinstance(e.left, Compose):
        left = f"({left})"
    if isinstance(e.right, (Compose, Tensor)):
        right = f"({right})"
    return f"{left} & {right}"


# -- slice normal form ----------------------------------------------------

@dataclass(frozen=True)
class SliceForm:
    """Layers of juxtaposed generators; layers[0] is the top layer."""
    layers: tuple[tuple[Gen, ...], ...]
    source: int

    @property
    def target(self) -> int:
        width = self.source
        for layer in reversed(self.layers):
            width = _layer_out(layer, width)
        return width

    def to_expr(self) -> TangleExpr:
        parts = []
        for layer in self.layers:
            if layer:
                parts.append(tensor(*[Leaf(g) for g in layer]))
        if not parts:
            raise ValueError("empty slice form has no expression")
        return compose(*parts)


def _layer_out(layer, width_in):
    delta = sum(ARITY[g][1] - ARITY[g][0] for g in layer)
    return width_in + delta


def to_slices(e: TangleExpr) -> SliceForm:
    """Interchange-law normal form: a stack of generator layers."""
    return SliceForm(tuple(_slices(e)), arity(e)[0])


def _slices(e: TangleExpr) -> list[tuple[Gen, ...]]:
    if isinstance(e, Leaf):
        return [(e.gen,)]
    if isinstance(e, Compose):
        return _slices(e.top) + _slices(e.bottom)
    left, right = _slices(e.left), _slices(e.right)
    # pad the shallower side below with identity layers on its source
    ls = arity(e.left)[0]
    rs = arity(e.right)[0]
    while len(left) < len(right):
        left.append((Gen.ID,) * ls)
    while len(right) < len(left):
        right.append((Gen.ID,) * rs)
    return [l + r for l, r in zip(left, right)]


# -- structural transforms -------------------------------------------------

def mirror(e: TangleExpr) -> TangleExpr:
    """Reflection through a vertical line: X and Xb swap."""
    if isinstance(e, Leaf):
        if e.gen == Gen.X:
            return Leaf(Gen.XB)
        if e.gen == Gen.XB:
            return Leaf(Gen.X)
        return e
    if isinstance(e, Compose):
        return Compose(mirror(e.top), mirror(e.bottom))
    return Tensor(mirror(e.right), mirror(e.left))


def cap_positions(sf: SliceForm) -> list[tuple[int, int]]:
    """(layer, block) of every Cap, top-to-bottom then left-to-right."""
    out = []
    for li, layer in enumerate(sf.layers):
        for bi, g in enumerate(layer):
            if g == Gen.CAP:
                out.append((li, bi))
    return out


def horn(e: TangleExpr, position: int) -> TangleExpr:
    """Open a closed tangle: one Cap becomes Mu and its new output strand
    is threaded straight up to the top boundary."""
    if arity(e) != (0, 0):
        raise ValueError("horn requires a closed tangle")
    sf = to_slices(e)
    caps = cap_positions(sf)
    if not 0 <= position < len(caps):
        raise ValueError(f"horn position {position} out of range: "
                         f"{len(caps)} cap occurrences")
    li, bi = caps[position]
    layers = [list(layer) for layer in sf.layers]
    layers[li][bi] = Gen.MU
    q = sum(ARITY[g][1] for g in layers[li][:bi])
    for u in range(li - 1, -1, -1):
        cum = 0
        idx = None
        for k, g in enumerate(layers[u]):
            if cum == q:
                idx = k
                break
            if cum < q < cum + ARITY[g][0]:
                raise ValueError(
                    f"horn position {position}: the new strand is blocked "
                    f"by a generator in layer {u}")
            cum += ARITY[g][0]
        if idx is None:
            if cum != q:
                raise ValueError(
                    f"horn position {position}: the new strand leaves the "
                    f"diagram at layer {u}")
            idx = len(layers[u])
        layers[u].insert(idx, Gen.ID)
        q = sum(ARITY[g][1] for g in layers[u][:idx])
    return SliceForm(tuple(tuple(l) for l in layers), 0).to_expr()


def disk_sum(h1: TangleExpr, h2: TangleExpr) -> TangleExpr:
    """Cap on top of two horned tangles side by side."""
    for h in (h1, h2):
        if arity(h) != (0, 1):
            raise ValueError(f"disk sum needs two (0,1) tangles: "
                             f"'{to_text(h)}' has arity {arity(h)}")
    return Compose(Leaf(Gen.CAP), Tensor(h1, h2))


def braid_word(m: int, n: int) -> TangleExpr:
    """The (m,n) block transposition as a word in X and Id."""
    if m < 0 or n < 0:
        raise ValueError("braid_word needs nonnegative block sizes")
    if m == 0 and n == 0:
        raise ValueError("braid_word(0, 0) has no strands")
    if m == 0 or n == 0:
        return identity(m + n)
    if m == 1:
        if n == 1:
            return Leaf(Gen.X)
        top = tensor(identity(n - 1), Leaf(Gen.X))
        return Compose(top, tensor(braid_word(1, n - 1), identity(1)))
    top = tensor(braid_word(m - 1, n), identity(1))
    return Compose(top, tensor(identity(m - 1), braid_word(1, n)))


def builtin(name: str) -> TangleExpr:
    """Named closed tangles: O, theta, genus(g)."""
    name = name.strip()
    if name == "O":
        g = 1
    elif name == "theta":
        g = 2
    else:
        m = re.fullmatch(r"genus\((\d+)\)", name)
        if m is None or int(m.group(1)) < 1:
            raise ValueError(f"unknown builtin tangle {name!r}")
        g = int(m.group(1))
    block = "(mu & id) . (nu & id) . "
    return parse("cap . " + block * (g - 1) + "cup")


# -- defining relations ----------------------------------------------------

_NU_EXPANDED = "((mu & id) . (id & cup))"

_RELATION_TEXT = {
    "old1": ("(id & cap) . (cup & id)", "id", "(cap & id) . (id & cup)"),
    "old2": ("(id & cap) . (X & id)", "(cap & id) . (id & Xb)"),
    "old3": ("(id & cap) . (Xb & id)", "(cap & id) . (id & X)"),
    "old4": (f"(id & cap) . ({_NU_EXPANDED} & id)", "mu",
             f"(cap & id) . (id & {_NU_EXPANDED})"),
    "old5": ("(id & cap) . (X & id) . (id & cup)", "id",
             "(id & cap) . (Xb & id) . (id & cup)"),
    "old6": ("X . Xb", "id & id"),
    "old7": ("(X & id) . (id & X) . (X & id)",
             "(id & X) . (X & id) . (id & X)"),
    "old8": ("mu . X", "mu", "mu . Xb"),
    "old9": ("(mu & id) . (id & X) . (X & id)", "X . (id & mu)"),
    "old10": ("(id & mu) . (X & id) . (id & X)", "X . (mu & id)"),
    "old11": ("mu . (mu & id)", "mu . (id & mu)"),
    "new1": ("cap . (mu & id)", "cap . (id & mu)"),
    "new2": ("cap . X", "cap"),
    "new3": ("(cap & id) . (id & X) . (X & id)", "id & cap"),
    "new4": ("(id & cap) . (X & id) . (id & X)", "cap & id"),
    "new5": ("mu . X", "mu"),
    "old4p": ("(mu & cap) . (id & cup & id)", "mu",
              "(cap & id) . (id & mu & id) . (id & id & cup)"),
}


def relation_catalogue() -> dict[str, tuple[TangleExpr, ...]]:
    """The defining relations, each a tuple of equal expressions."""
    out = {}
    for name, texts in _RELATION_TEXT.items():
        exprs = tuple(parse(t) for t in texts)
        arities = {arity(x) for x in exprs}
        if len(arities) != 1:
            raise AssertionError(f"relation {name} is not arity-balanced")
        out[name] = exprs
    return out
