"""Exact sparse linear maps over Q(zeta_n).

A LinMap stores a rows x cols matrix with entries in Q(zeta_n) as
phi(n) integer component matrices over one positive denominator:

    M = (1/den) * sum_i comps[i] * zeta^i        (power basis)

Components are scipy int64 CSR matrices, so composition and Kronecker
products run as machine-integer sparse kernels.  Every kernel call is
preceded by an a-priori magnitude bound; if the bound cannot rule out
int64 overflow the operation transparently switches to an exact
big-integer path (python ints in dicts).  Results are always reduced:
gcd of all numerator entries and the denominator is 1, so equality of
maps is structural equality of the normalized data.

PipeState is the streaming variant used to evaluate generator pipelines
on a chunk of source basis vectors: its row space d^width may exceed
what a materialized sparse matrix could address, so it keeps raw COO
triplets and only ever builds small-leading-dimension matrices.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np
import scipy.sparse as sp

from .scalar import Cyc, _field

_INT64_SAFE = 1 << 61
_JOIN_BATCH = 1 << 22
_MM_DISPATCH = 1 << 21
_MM_COLSPAN = 1 << 22


@lru_cache(maxsize=None)
def _mult_rule(n: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """rule[s] lists (k, c) with zeta^s = sum c * zeta^k in the power basis."""
    f = _field(n)
    out = []
    for s in range(2 * f.phi - 1):
        row = f.zrow(s)
        out.append(tuple((k, c) for k, c in enumerate(row) if c))
    return tuple(out)


def _gcd_reduce_arrays(den: int, arrays) -> int:
    g = den
    for a in arrays:
        if len(a):
            g = gcd(g, int(np.gcd.reduce(np.abs(a))))
        if g == 1:
            return 1
    return g


def _csr(rows, cols, r, c, v):
    m = sp.csr_matrix((v, (r, c)), shape=(rows, cols))
    m.sum_duplicates()
    m.eliminate_zeros()
    m.sort_indices()
    return m


def _empty_csr(rows, cols):
    return sp.csr_matrix((rows, cols), dtype=np.int64)


class LinMap:
    """Sparse exact matrix over Q(zeta_n); see module docstring."""

    __slots__ = ("rows", "cols", "n", "phi", "den", "comps", "big", "_cache")

    def __init__(self, rows, cols, n, den, comps=None, big=None, _normalized=False):
        self.rows, self.cols, self.n = rows, cols, n
        self.phi = _field(n).phi
        self.den = den
        self.comps = comps  # list[csr] or None
        self.big = big      # dict[(r, c)] -> list[int] of length phi, or None
        self._cache: dict = {}
        if not _normalized:
            self._normalize()

    def _col_groups(self):
        """Per component: entries grouped by column as (indptr, rows, data),
        plus the maximum column fill; cached (maps are immutable)."""
        if "colg" not in self._cache:
            groups = []
            colmax = 0
            for comp in self.comps:
                if comp.nnz == 0:
                    groups.append(None)
                    continue
                csc = comp.tocsc()
                csc.sort_indices()
                colmax = max(colmax, int(np.diff(csc.indptr).max()))
                groups.append((csc.indptr.astype(np.int64),
                               csc.indices.astype(np.int64),
                               csc.data.astype(np.int64)))
            self._cache["colg"] = (groups, max(colmax, 1))
        return self._cache["colg"]

    # -- construction ---------------------------------------------------

    @staticmethod
    def zeros(rows: int, cols: int, n: int = 1) -> LinMap:
        phi = _field(n).phi
        return LinMap(rows, cols, n, 1,
                      comps=[_empty_csr(rows, cols) for _ in range(phi)],
                      _normalized=True)

    @staticmethod
    def identity(k: int, n: int = 1) -> LinMap:
        phi = _field(n).phi
        comps = [sp.identity(k, dtype=np.int64, format="csr")]
        comps += [_empty_csr(k, k) for _ in range(phi - 1)]
        return LinMap(k, k, n, 1, comps=comps, _normalized=True)

    @staticmethod
    def from_entries(rows: int, cols: int, n: int, entries) -> LinMap:
        """entries: iterable of (row, col, Cyc); duplicates are summed."""
        phi = _field(n).phi
        acc: dict[tuple[int, int], list] = {}
        den = 1
        items = []
        for r, c, v in entries:
            if isinstance(v, (int, Fraction)):
                v = Cyc.from_rational(v, 1)
            v = v.lift(n) if v.n != n else v
            if v.is_zero():
                continue
            items.append((r, c, v))
            den = den * v.den // gcd(den, v.den)
        for r, c, v in items:
            f = den // v.den
            vec = acc.setdefault((r, c), [0] * phi)
            for i, x in enumerate(v.num):
                vec[i] += x * f
        return LinMap._from_big(rows, cols, n, den, acc)

    @staticmethod
    def _from_big(rows, cols, n, den, big) -> LinMap:
        big = {rc: vec for rc, vec in big.items() if any(vec)}
        m = LinMap(rows, cols, n, den, big=big, _normalized=True)
        m._normalize()
        m._try_demote()
        return m

    @staticmethod
    def from_column(rows: int, n: int, col: dict[int, Cyc]) -> LinMap:
        return LinMap.from_entries(rows, 1, n, ((r, 0, v) for r, v in col.items()))

    @staticmethod
    def from_row(cols: int, n: int, row: dict[int, Cyc]) -> LinMap:
        return LinMap.from_entries(1, cols, n, ((0, c, v) for c, v in row.items()))

    # -- normalization / representation ----------------------------------

    def _normalize(self) -> None:
        if self.den < 0:
            self.den = -self.den
            if self.big is not None:
                for vec in self.big.values():
                    for i in range(self.phi):
                        vec[i] = -vec[i]
            else:
                self.comps = [-c for c in self.comps]
        if self.big is not None:
            if not self.big:
                self.den = 1
                return
            g = self.den
            for vec in self.big.values():
                for x in vec:
                    g = gcd(g, x)
                if g == 1:
                    break
            if g > 1:
                for vec in self.big.values():
                    for i in range(self.phi):
                        vec[i] //= g
                self.den //= g
            return
        for c in self.comps:
            c.eliminate_zeros()
        if all(c.nnz == 0 for c in self.comps):
            self.den = 1
            return
        g = _gcd_reduce_arrays(self.den, [c.data for c in self.comps])
        if g > 1:
            for c in self.comps:
                c.data //= g
            self.den //= g

    def _to_big(self) -> dict:
        if self.big is not None:
            return self.big
        acc: dict[tuple[int, int], list] = {}
        for i, comp in enumerate(self.comps):
            coo = comp.tocoo()
            for r, c, v in zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()):
                acc.setdefault((r, c), [0] * self.phi)[i] = v
        return acc

    def _try_demote(self) -> None:
        """Move from the big-int path back to int64 components if safe."""
        if self.big is None:
            return
        for vec in self.big.values():
            for x in vec:
                if abs(x) >= _INT64_SAFE:
                    return
        rs, cs = [], []
        data = [[] for _ in range(self.phi)]
        for (r, c), vec in sorted(self.big.items()):
            rs.append(r)
            cs.append(c)
            for i in range(self.phi):
                data[i].append(vec[i])
        r64 = np.asarray(rs, dtype=np.int64)
        c64 = np.asarray(cs, dtype=np.int64)
        self.comps = [_csr(self.rows, self.cols, r64, c64,
                           np.asarray(d, dtype=np.int64)) for d in data]
        self.big = None

    def max_abs(self) -> int:
        if self.big is not None:
            return max((max(abs(x) for x in vec) for vec in self.big.values()),
                       default=0)
        m = 0
        for c in self.comps:
            if c.nnz:
                m = max(m, int(np.abs(c.data).max()))
        return m

    @property
    def nnz(self) -> int:
        if self.big is not None:
            return len(self.big)
        pat = None
        for c in self.comps:
            b = c.astype(bool)
            pat = b if pat is None else (pat + b)
        return int(pat.nnz)

    def is_zero(self) -> bool:
        if self.big is not None:
            return not self.big
        return all(c.nnz == 0 for c in self.comps)

    # -- scalar access ----------------------------------------------------

    def entry(self, r: int, c: int) -> Cyc:
        if self.big is not None:
            vec = self.big.get((r, c))
            if vec is None:
                return Cyc.zero(self.n)
            return Cyc(self.n, tuple(vec), self.den)
        vec = tuple(int(comp[r, c]) for comp in self.comps)
        return Cyc(self.n, vec, self.den)

    def to_entries(self):
        """Yield (row, col, Cyc) over the support, row-major sorted."""
        for (r, c), vec in sorted(self._to_big().items()):
            yield r, c, Cyc(self.n, tuple(vec), self.den)

    def column(self, c: int) -> dict[int, Cyc]:
        out = {}
        for r, cc, v in self.to_entries():
            if cc == c:
                out[r] = v
        return out

    def columns(self) -> list[dict[int, Cyc]]:
        cols: list[dict[int, Cyc]] = [dict() for _ in range(self.cols)]
        for r, c, v in self.to_entries():
            cols[c][r] = v
        return cols

    def scalar(self) -> Cyc:
        """The unique entry of a 1x1 map."""
        if (self.rows, self.cols) != (1, 1):
            raise ValueError("scalar() needs a 1x1 map")
        return self.entry(0, 0)

    # -- arithmetic --------------------------------------------------------

    def compose(self, other: LinMap) -> LinMap:
        """self after other (matrix product self @ other)."""
        if self.cols != other.rows:
            raise ValueError(f"compose shape mismatch {self.cols} != {other.rows}")
        if self.n != other.n:
            raise ValueError("conductor mismatch")
        if self.big is not None or other.big is not None:
            return self._compose_big(other)
        rule = _mult_rule(self.n)
        bound = 0
        prods: dict[tuple[int, int], sp.csr_matrix] = {}
        for i, fi in enumerate(self.comps):
            if fi.nnz == 0:
                continue
            fmax = int(np.abs(fi.data).max())
            frow = int(np.diff(fi.indptr).max())
            for j, gj in enumerate(other.comps):
                if gj.nnz == 0:
                    continue
                gmax = int(np.abs(gj.data).max())
                bound += fmax * gmax * frow
                prods[(i, j)] = (fi, gj)
        if bound * _rule_weight(self.n) >= _INT64_SAFE:
            return self._compose_big(other)
        out = [_empty_csr(self.rows, other.cols) for _ in range(self.phi)]
        for (i, j), (fi, gj) in prods.items():
            p = fi @ gj
            for k, c in rule[i + j]:
                out[k] = out[k] + (p if c == 1 else p * c)
        for c in out:
            c.sum_duplicates()
            c.eliminate_zeros()
            c.sort_indices()
        return LinMap(self.rows, other.cols, self.n, self.den * other.den, comps=out)

    def _compose_big(self, other: LinMap) -> LinMap:
        f = _field(self.n)
        a, b = self._to_big(), other._to_big()
        by_col: dict[int, list] = {}
        for (r, k), vec in a.items():
            by_col.setdefault(k, []).append((r, vec))
        acc: dict[tuple[int, int], list] = {}
        for (k, c), gvec in b.items():
            for r, fvec in by_col.get(k, ()):
                prod = f.mul(tuple(fvec), tuple(gvec))
                vec = acc.setdefault((r, c), [0] * self.phi)
                for i in range(self.phi):
                    vec[i] += prod[i]
        return LinMap._from_big(self.rows, other.cols, self.n,
                                self.den * other.den, acc)

    def tensor(self, other: LinMap) -> LinMap:
        """Kronecker product; left factor owns the most significant digits."""
        if self.n != other.n:
            raise ValueError("conductor mismatch")
        rows = self.rows * other.rows
        cols = self.cols * other.cols
        if self.big is not None or other.big is not None or \
                self.max_abs() * other.max_abs() * _rule_weight(self.n) >= _INT64_SAFE:
            f = _field(self.n)
            acc: dict[tuple[int, int], list] = {}
            for (r1, c1), v1 in self._to_big().items():
                for (r2, c2), v2 in other._to_big().items():
                    prod = f.mul(tuple(v1), tuple(v2))
                    rc = (r1 * other.rows + r2, c1 * other.cols + c2)
                    vec = acc.setdefault(rc, [0] * self.phi)
                    for i in range(self.phi):
                        vec[i] += prod[i]
            return LinMap._from_big(rows, cols, self.n, self.den * other.den, acc)
        rule = _mult_rule(self.n)
        out = [_empty_csr(rows, cols) for _ in range(self.phi)]
        for i, fi in enumerate(self.comps):
            if fi.nnz == 0:
                continue
            for j, gj in enumerate(other.comps):
                if gj.nnz == 0:
                    continue
                p = sp.kron(fi, gj, format="csr")
                for k, c in rule[i + j]:
                    out[k] = out[k] + (p if c == 1 else p * c)
        for c in out:
            c.sum_duplicates()
            c.eliminate_zeros()
            c.sort_indices()
        return LinMap(rows, cols, self.n, self.den * other.den, comps=out)

    def _binary_add(self, other: LinMap, sign: int) -> LinMap:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("add shape mismatch")
        if self.n != other.n:
            raise ValueError("conductor mismatch")
        g = gcd(self.den, other.den)
        fa, fb = other.den // g, self.den // g
        den = self.den * fa
        if self.big is not None or other.big is not None or \
                max(self.max_abs() * fa, other.max_abs() * fb) * 2 >= _INT64_SAFE:
            acc: dict[tuple[int, int], list] = {}
            for (r, c), vec in self._to_big().items():
                acc[(r, c)] = [x * fa for x in vec]
            for (r, c), vec in other._to_big().items():
                dst = acc.setdefault((r, c), [0] * self.phi)
                for i in range(self.phi):
                    dst[i] += sign * vec[i] * fb
            return LinMap._from_big(self.rows, self.cols, self.n, den, acc)
        out = [a * fa + (sign * fb) * b for a, b in zip(self.comps, other.comps)]
        for c in out:
            c.sum_duplicates()
            c.eliminate_zeros()
            c.sort_indices()
        return LinMap(self.rows, self.cols, self.n, den, comps=out)

    def add(self, other: LinMap) -> LinMap:
        return self._binary_add(other, 1)

    def sub(self, other: LinMap) -> LinMap:
        return self._binary_add(other, -1)

    def scale(self, v) -> LinMap:
        if isinstance(v, (int, Fraction)):
            v = Cyc.from_rational(v, 1)
        v = v.lift(self.n) if v.n != self.n else v
        if v.is_zero():
            return LinMap.zeros(self.rows, self.cols, self.n)
        if self.big is not None or \
                self.max_abs() * max(abs(x) for x in v.num) * _rule_weight(self.n) >= _INT64_SAFE:
            f = _field(self.n)
            acc = {}
            for rc, vec in self._to_big().items():
                acc[rc] = list(f.mul(tuple(vec), v.num))
            return LinMap._from_big(self.rows, self.cols, self.n,
                                    self.den * v.den, acc)
        rule = _mult_rule(self.n)
        out = [_empty_csr(self.rows, self.cols) for _ in range(self.phi)]
        for i, fi in enumerate(self.comps):
            if fi.nnz == 0:
                continue
            for j, x in enumerate(v.num):
                if x:
                    for k, c in rule[i + j]:
                        out[k] = out[k] + fi * (x * c)
        for c in out:
            c.sum_duplicates()
            c.eliminate_zeros()
            c.sort_indices()
        return LinMap(self.rows, self.cols, self.n, self.den * v.den, comps=out)

    def neg(self) -> LinMap:
        return self.scale(-1)

    def permute(self, row_map=None, col_map=None) -> LinMap:
        """Reindex rows/cols by injective index arrays (new = map[old])."""
        if self.big is not None:
            acc = {}
            for (r, c), vec in self.big.items():
                rr = int(row_map[r]) if row_map is not None else r
                cc = int(col_map[c]) if col_map is not None else c
                acc[(rr, cc)] = list(vec)
            return LinMap._from_big(self.rows, self.cols, self.n, self.den, acc)
        out = []
        for comp in self.comps:
            coo = comp.tocoo()
            r = row_map[coo.row] if row_map is not None else coo.row
            c = col_map[coo.col] if col_map is not None else coo.col
            out.append(_csr(self.rows, self.cols, r, c, coo.data))
        return LinMap(self.rows, self.cols, self.n, self.den, comps=out,
                      _normalized=True)

    def transpose(self) -> LinMap:
        if self.big is not None:
            acc = {(c, r): list(vec) for (r, c), vec in self.big.items()}
            return LinMap._from_big(self.cols, self.rows, self.n,
                                    self.den, acc)
        comps = []
        for comp in self.comps:
            t = comp.T.tocsr()
            t.sort_indices()
            comps.append(t)
        return LinMap(self.cols, self.rows, self.n, self.den, comps=comps,
                      _normalized=True)

    def __eq__(self, other):
        if not isinstance(other, LinMap):
            return NotImplemented
        if (self.rows, self.cols, self.n) != (other.rows, other.cols, other.n):
            return False
        if self.den != other.den:
            return False
        if self.big is not None or other.big is not None:
            return self._to_big() == other._to_big()
        return all((a - b).nnz == 0 for a, b in zip(self.comps, other.comps))

    def __repr__(self):
        return (f"LinMap({self.rows}x{self.cols}, conductor={self.n}, "
                f"nnz={self.nnz}, den={self.den})")


@lru_cache(maxsize=None)
def _rule_weight(n: int) -> int:
    """Conservative factor covering rule-table accumulation in one output
    component: sum over s of max |coeff| in rule[s]."""
    rule = _mult_rule(n)
    return max(1, sum(max((abs(c) for _, c in row), default=0) for row in rule))


class PipeState:
    """A chunk of source columns pushed through a generator pipeline.

    Rows index the current tensor power d^width (kept as raw int64 COO
    triplets so width may exceed materializable matrix dimensions);
    columns index the chunk of source basis vectors.
    """

    __slots__ = ("d", "width", "ncols", "n", "phi", "den", "tris", "big")

    def __init__(self, d, width, ncols, n, den, tris=None, big=None):
        self.d, self.width, self.ncols, self.n = d, width, ncols, n
        self.phi = _field(n).phi
        self.den = den
        self.tris = tris    # list of (row64, col64, data64) per component
        self.big = big      # dict[(row, col)] -> list[int], python ints
        self._normalize()

    @staticmethod
    def from_columns(d: int, width: int, col_indices, n: int) -> PipeState:
        """Identity state on the given source basis indices."""
        idx = np.asarray(col_indices, dtype=np.int64)
        ar = np.arange(len(idx), dtype=np.int64)
        ones = np.ones(len(idx), dtype=np.int64)
        tris = [(idx, ar, ones)]
        tris += [(np.empty(0, np.int64),) * 3 for _ in range(_field(n).phi - 1)]
        return PipeState(d, width, len(idx), n, 1, tris=list(tris))

    # -- bookkeeping -----------------------------------------------------

    def _normalize(self) -> None:
        if self.big is not None:
            self.big = {rc: vec for rc, vec in self.big.items() if any(vec)}
            if not self.big:
                self.den = 1
                return
            g = self.den
            for vec in self.big.values():
                for x in vec:
                    g = gcd(g, x)
                if g == 1:
                    return
            if g > 1:
                for vec in self.big.values():
                    for i in range(self.phi):
                        vec[i] //= g
                self.den //= g
            return
        if all(len(t[2]) == 0 for t in self.tris):
            self.den = 1
            return
        g = _gcd_reduce_arrays(self.den, [t[2] for t in self.tris])
        if g > 1:
            self.tris = [(r, c, d // g) for r, c, d in self.tris]
            self.den //= g

    def max_abs(self) -> int:
        if self.big is not None:
            return max((max(abs(x) for x in vec) for vec in self.big.values()),
                       default=0)
        return max((int(np.abs(t[2]).max()) for t in self.tris if len(t[2])),
                   default=0)

    @property
    def nnz(self) -> int:
        if self.big is not None:
            return len(self.big)
        return sum(len(t[2]) for t in self.tris)

    def _to_big(self) -> dict:
        if self.big is not None:
            return self.big
        acc: dict[tuple[int, int], list] = {}
        for i, (r, c, v) in enumerate(self.tris):
            for rr, cc, vv in zip(r.tolist(), c.tolist(), v.tolist()):
                acc.setdefault((rr, cc), [0] * self.phi)[i] += vv
        return {rc: vec for rc, vec in acc.items() if any(vec)}

    # -- pipeline steps ----------------------------------------------------

    def apply(self, gen: LinMap, offset: int, a_in: int, a_out: int) -> PipeState:
        """Apply a generator acting on a_in strands at the given offset.

        Works as a vectorized sparse join on the acted digit block: no
        matrix with the full d^width dimension is ever built.
        """
        d, w = self.d, self.width
        post = w - offset - a_in
        if offset < 0 or post < 0:
            raise ValueError("generator does not fit at this offset")
        if gen.cols != d ** a_in or gen.rows != d ** a_out:
            raise ValueError("generator arity mismatch")
        if gen.n != self.n:
            raise ValueError("conductor mismatch")
        if self.big is not None or gen.big is not None:
            return self._apply_big(gen, offset, a_in, a_out)
        groups, colmax = gen._col_groups()
        w_out = w - a_in + a_out
        rowmax = d ** w_out
        if gen.max_abs() * self.max_abs() * colmax * self.phi ** 2 \
                * _rule_weight(self.n) >= _INT64_SAFE \
                or rowmax * self.ncols >= (1 << 62):
            return self._apply_big(gen, offset, a_in, a_out)
        gen_nnz = sum(comp.nnz for comp in gen.comps)
        nnz = self.nnz
        fused_cols = d ** (offset + post) * self.ncols
        if nnz * max(1, gen_nnz // max(1, gen.cols)) >= _MM_DISPATCH \
                and fused_cols <= max(_MM_COLSPAN, 4 * nnz):
            return self._apply_mm(gen, offset, a_in, a_out)
        rule = _mult_rule(self.n)
        dmid_in, dpost = d ** a_in, d ** post
        dout = d ** (a_out + post)
        acc: list[list] = [[] for _ in range(self.phi)]
        pending = [0] * self.phi

        def flush(k):
            # keep the per-component backlog deduplicated and bounded
            rr = np.concatenate([t[0] for t in acc[k]])
            cc = np.concatenate([t[1] for t in acc[k]])
            vv = np.concatenate([t[2] for t in acc[k]])
            acc[k] = [_dedupe(rr, cc, vv, self.ncols)]
            pending[k] = len(acc[k][0][2])

        for j, (r, c, v) in enumerate(self.tris):
            if len(v) == 0:
                continue
            hi = r // (dmid_in * dpost)
            mid = (r // dpost) % dmid_in
            lo = r % dpost
            base = hi * dout + lo
            for i, grp in enumerate(groups):
                if grp is None:
                    continue
                indptr, grows, gdata = grp
                cnt = indptr[mid + 1] - indptr[mid]
                total = int(cnt.sum())
                if total == 0:
                    continue
                # bound the raw join size by slicing the source entries
                if total > _JOIN_BATCH:
                    cum = np.cumsum(cnt)
                    cuts = np.searchsorted(
                        cum, np.arange(_JOIN_BATCH, total, _JOIN_BATCH)) + 1
                    bounds = [0] + sorted(set(cuts.tolist())) + [len(v)]
                else:
                    bounds = [0, len(v)]
                for bi in range(len(bounds) - 1):
                    a, b = bounds[bi], bounds[bi + 1]
                    if a >= b:
                        continue
                    cnt_b = cnt[a:b]
                    tot_b = int(cnt_b.sum())
                    if tot_b == 0:
                        continue
                    sel = np.repeat(np.arange(a, b, dtype=np.int64), cnt_b)
                    csum = np.zeros(b - a, dtype=np.int64)
                    np.cumsum(cnt_b[:-1], out=csum[1:])
                    gidx = np.repeat(indptr[mid[a:b]] - csum, cnt_b) + \
                        np.arange(tot_b, dtype=np.int64)
                    out_r = base[sel] + grows[gidx] * dpost
                    out_c = c[sel]
                    out_v = v[sel] * gdata[gidx]
                    for k, cc in rule[i + j]:
                        acc[k].append((out_r, out_c,
                                       out_v if cc == 1 else out_v * cc))
                        pending[k] += tot_b
                        if pending[k] > 2 * _JOIN_BATCH:
                            flush(k)
        out_tris = []
        for k in range(self.phi):
            if not acc[k]:
                out_tris.append((np.empty(0, np.int64),) * 3)
                continue
            flush(k)
            out_tris.append(acc[k][0])
        return PipeState(d, w_out, self.ncols, self.n,
                         self.den * gen.den, tris=out_tris)

    def _apply_mm(self, gen: LinMap, offset: int, a_in: int, a_out: int) -> PipeState:
        """apply() variant for dense joins: runs the acted digit block as
        int64 sparse matmul with the remaining digits fused into columns.

        Exactly equivalent to the join path; chosen when the estimated
        join volume is large enough that scipy kernels win.
        """
        d, w = self.d, self.width
        post = w - offset - a_in
        dmid_in, dpost = d ** a_in, d ** post
        dmid_out = d ** a_out
        w_out = w - a_in + a_out
        s = self.ncols
        rule = _mult_rule(self.n)
        rowfill = 1
        for comp in gen.comps:
            if comp.nnz:
                rowfill = max(rowfill, int(np.diff(comp.indptr).max()))
        if gen.max_abs() * self.max_abs() * rowfill * self.phi ** 2 \
                * _rule_weight(self.n) >= _INT64_SAFE:
            return self._apply_big(gen, offset, a_in, a_out)
        in_block = dmid_in * dpost
        out_block = dmid_out * dpost
        post_s = dpost * s
        fcols = (d ** offset) * post_s
        nspans = max(1, -(-int(fcols) // _MM_COLSPAN))
        # acc[k][span] accumulates output component k on the fused layout;
        # csr addition merges duplicates without ever sorting raw triplets
        acc: list[list] = [[None] * nspans for _ in range(self.phi)]
        for j, (r, c, v) in enumerate(self.tris):
            if len(v) == 0:
                continue
            hi = r // in_block
            mid = (r // dpost) % dmid_in
            fused = hi * post_s + (r % dpost) * s + c
            if nspans == 1:
                pieces = [(0, _csr(dmid_in, int(fcols), mid, fused, v))]
            else:
                order = np.argsort(fused, kind="stable")
                fs, ms, vs = fused[order], mid[order], v[order]
                edges = np.arange(_MM_COLSPAN, fcols, _MM_COLSPAN,
                                  dtype=np.int64)
                bounds = [0, *np.searchsorted(fs, edges).tolist(), len(fs)]
                pieces = []
                for pi in range(len(bounds) - 1):
                    a, b = bounds[pi], bounds[pi + 1]
                    if a >= b:
                        continue
                    base = pi * _MM_COLSPAN
                    span = int(min(_MM_COLSPAN, fcols - base))
                    pieces.append((pi, _csr(dmid_in, span,
                                            ms[a:b], fs[a:b] - base,
                                            vs[a:b])))
            for pi, stv in pieces:
                if stv.nnz == 0:
                    continue
                for i, gi in enumerate(gen.comps):
                    if gi.nnz == 0:
                        continue
                    prod = gi @ stv
                    if prod.nnz == 0:
                        continue
                    for k, cf in rule[i + j]:
                        term = prod if cf == 1 else prod * cf
                        acc[k][pi] = term if acc[k][pi] is None \
                            else acc[k][pi] + term
        out_tris = []
        for k in range(self.phi):
            rs, cs, vs = [], [], []
            for pi, mat in enumerate(acc[k]):
                if mat is None:
                    continue
                mat.eliminate_zeros()
                if mat.nnz == 0:
                    continue
                coo = mat.tocoo()
                gr = coo.row.astype(np.int64, copy=False)
                fo = coo.col.astype(np.int64, copy=False) + pi * _MM_COLSPAN
                hi2 = fo // post_s
                rem = fo - hi2 * post_s
                lo2 = rem // s
                rs.append(hi2 * out_block + gr * dpost + lo2)
                cs.append(rem - lo2 * s)
                vs.append(coo.data.astype(np.int64, copy=False))
            if not rs:
                out_tris.append((np.empty(0, np.int64),) * 3)
            elif len(rs) == 1:
                out_tris.append((rs[0], cs[0], vs[0]))
            else:
                out_tris.append((np.concatenate(rs), np.concatenate(cs),
                                 np.concatenate(vs)))
        return PipeState(d, w_out, self.ncols, self.n,
                         self.den * gen.den, tris=out_tris)

    def _apply_big(self, gen: LinMap, offset: int, a_in: int, a_out: int) -> PipeState:
        d, w = self.d, self.width
        post = w - offset - a_in
        dmid_in, dpost = d ** a_in, d ** post
        f = _field(self.n)
        gcols: dict[int, list] = {}
        for (r, c), vec in gen._to_big().items():
            gcols.setdefault(c, []).append((r, vec))
        acc: dict[tuple[int, int], list] = {}
        for (r, c), vec in self._to_big().items():
            hi, rest = divmod(r, dmid_in * dpost)
            mid, lo = divmod(rest, dpost)
            for gr, gvec in gcols.get(mid, ()):
                prod = f.mul(tuple(gvec), tuple(vec))
                row = hi * (d ** (a_out + post)) + gr * dpost + lo
                dst = acc.setdefault((row, c), [0] * self.phi)
                for i in range(self.phi):
                    dst[i] += prod[i]
        return PipeState(d, w - a_in + a_out, self.ncols, self.n,
                         self.den * gen.den, big=acc)

    def permute_strands(self, perm) -> PipeState:
        """Reorder strand slots: out digit i = in digit perm[i]."""
        d, w = self.d, self.width
        if sorted(perm) != list(range(w)):
            raise ValueError("not a permutation of the strands")
        weights = [d ** (w - 1 - i) for i in range(w)]
        if self.big is not None:
            acc = {}
            for (r, c), vec in self.big.items():
                digits = [(r // weights[s]) % d for s in range(w)]
                rr = sum(digits[perm[i]] * weights[i] for i in range(w))
                acc[(rr, c)] = list(vec)
            return PipeState(d, w, self.ncols, self.n, self.den, big=acc)
        out = []
        for r, c, v in self.tris:
            if len(v) == 0:
                out.append((r, c, v))
                continue
            rr = np.zeros_like(r)
            for i in range(w):
                rr += ((r // weights[perm[i]]) % d) * weights[i]
            out.append((rr, c.copy(), v.copy()))
        return PipeState(d, w, self.ncols, self.n, self.den, tris=out)

    # -- output ------------------------------------------------------------

    def equals(self, other: PipeState) -> bool:
        if (self.d, self.width, self.ncols, self.n) != \
                (other.d, other.width, other.ncols, other.n):
            return False
        if self.den != other.den:
            return False
        if self.big is not None or other.big is not None:
            return self._to_big() == other._to_big()
        for (r1, c1, v1), (r2, c2, v2) in zip(self._canonical(), other._canonical()):
            if len(v1) != len(v2) or not (np.array_equal(r1, r2) and
                                          np.array_equal(c1, c2) and
                                          np.array_equal(v1, v2)):
                return False
        return True

    def _canonical(self):
        return [_sorted_tri(*t) for t in self.tris]

    def first_mismatch(self, other: PipeState):
        """(row, col) of some differing entry, or None if equal maps."""
        a, b = self._to_big(), other._to_big()
        keys = set(a) | set(b)
        zero = [0] * self.phi
        for rc in sorted(keys):
            va = [x * other.den for x in a.get(rc, zero)]
            vb = [x * self.den for x in b.get(rc, zero)]
            if va != vb:
                return rc
        return None

    def to_linmap(self) -> LinMap:
        rows = self.d ** self.width
        if rows >= (1 << 31):
            raise ValueError("state too wide to materialize")
        if self.big is not None:
            return LinMap._from_big(rows, self.ncols, self.n, self.den, self.big)
        comps = [_csr(rows, self.ncols, r, c, v) if len(v)
                 else _empty_csr(rows, self.ncols)
                 for r, c, v in self.tris]
        return LinMap(rows, self.ncols, self.n, self.den, comps=comps)


def _dedupe(row, col, val, ncols):
    """Sum duplicate (row, col) pairs via a single fused sort key.

    Requires row * ncols + col < 2**62, which apply() audits up front.
    """
    if len(val) == 0:
        return row, col, val
    key = row * ncols + col
    order = np.argsort(key, kind="stable")
    key = key[order]
    val = val[order]
    starts = np.empty(len(key), dtype=bool)
    starts[0] = True
    starts[1:] = key[1:] != key[:-1]
    idx = np.flatnonzero(starts)
    sums = np.add.reduceat(val, idx)
    keys = key[idx]
    keep = sums != 0
    keys = keys[keep]
    sums = sums[keep]
    return keys // ncols, keys % ncols, sums


def _sorted_tri(row, col, val):
    keep = val != 0
    row, col, val = row[keep], col[keep], val[keep]
    if len(val) == 0:
        return row, col, val
    order = np.lexsort((col, row))
    return row[order], col[order], val[order]
