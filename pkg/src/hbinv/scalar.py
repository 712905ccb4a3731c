"""Exact scalar arithmetic in Q and in cyclotomic fields Q(zeta_n).

A cyclotomic number is stored in the power basis 1, z, ..., z^(phi(n)-1)
of Q(zeta_n), with coordinates kept as one integer vector over a common
positive denominator, reduced modulo the n-th cyclotomic polynomial and
normalized so the gcd of all integers involved is 1.  Equality of
canonical forms is therefore plain structural equality.

Conductor 1 is Q itself; rationals embed into any Q(zeta_n) by padding
with zeros.  Mixing two conductors both larger than 1 is an error: a
computation fixes one conductor up front.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

Rational = Fraction


class FieldMismatchError(ValueError):
    """Raised when two scalars live in different cyclotomic fields."""


class SingularSystemError(ValueError):
    """Raised when a linear system has no unique solution."""


def _poly_divmod_int(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    """Divide integer polynomials (coefficient lists, low degree first).

    Requires den to be monic; quotient and remainder are then integral.
    """
    num = list(num)
    dd = len(den) - 1
    assert den[-1] == 1
    quot = [0] * max(1, len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]
        if c:
            quot[k - dd] = c
            for i, d in enumerate(den):
                num[k - dd + i] -= c * d
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return quot, num


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, low degree first, monic.

    Computed by dividing x^n - 1 by the product of Phi_d over proper
    divisors d of n; everything stays in integer arithmetic.
    """
    if n < 1:
        raise ValueError("conductor must be positive")
    if n == 1:
        return (-1, 1)
    num = [0] * (n + 1)
    num[0], num[n] = -1, 1
    for d in range(1, n):
        if n % d == 0:
            num, rem = _poly_divmod_int(num, list(cyclotomic_polynomial(d)))
            assert rem == [0]
    return tuple(num)


def euler_phi(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


class _CycField:
    """Precomputed data for arithmetic in Q(zeta_n) on the power basis."""

    def __init__(self, n: int):
        self.n = n
        self.poly = cyclotomic_polynomial(n)
        self.phi = len(self.poly) - 1
        phi = self.phi
        # red_rows[k] = coordinates of z^(phi+k) for k = 0 .. phi-2, used
        # to fold products (degree <= 2*phi-2) back into the power basis.
        rows: list[tuple[int, ...]] = [tuple(-c for c in self.poly[:phi])]
        for _ in range(phi - 2):
            prev = rows[-1]
            top = prev[-1]
            nxt = [0] + list(prev[:-1])
            if top:
                for i in range(phi):
                    nxt[i] += top * rows[0][i]
            rows.append(tuple(nxt))
        self.red_rows = rows
        # zpow[k] = coordinates of z^k for 0 <= k < n.
        zpow: list[tuple[int, ...]] = []
        cur = [1] + [0] * (phi - 1)
        for _ in range(n):
            zpow.append(tuple(cur))
            cur = self._reduce([0] + cur)
        self.zpow = zpow

    def _reduce(self, coeffs: list[int]) -> list[int]:
        """Reduce an integer coefficient list modulo Phi_n (any degree)."""
        phi = self.phi
        c = list(coeffs) + [0] * max(0, phi - len(coeffs))
        r0 = self.red_rows[0]
        for deg in range(len(c) - 1, phi - 1, -1):
            t = c[deg]
            if t:
                c[deg] = 0
                for i in range(phi):
                    c[deg - phi + i] += t * r0[i]
        return c[:phi]

    def zrow(self, k: int) -> tuple[int, ...]:
        """Coordinates of z^k in the power basis, any k >= 0."""
        if k < self.phi:
            row = [0] * self.phi
            row[k] = 1
            return tuple(row)
        return self.zpow[k % self.n]

    def mul(self, a: tuple[int, ...], b: tuple[int, ...]) -> list[int]:
        phi = self.phi
        conv = [0] * (2 * phi - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        out = conv[:phi]
        for k in range(phi, 2 * phi - 1):
            c = conv[k]
            if c:
                row = self.red_rows[k - phi]
                for i in range(phi):
                    out[i] += c * row[i]
        return out


@lru_cache(maxsize=None)
def _field(n: int) -> _CycField:
    return _CycField(n)


def _normalize(num: list[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        num = [-x for x in num]
        den = -den
    g = den
    for x in num:
        g = gcd(g, x)
        if g == 1:
            break
    if g > 1:
        num = [x // g for x in num]
        den //= g
    if all(x == 0 for x in num):
        return tuple(0 for _ in num), 1
    return tuple(num), den


class Cyc:
    """An element of Q(zeta_n) in canonical power-basis form."""

    __slots__ = ("n", "num", "den")

    def __init__(self, n: int, num: tuple[int, ...], den: int, _raw: bool = False):
        if _raw:
            self.n, self.num, self.den = n, num, den
            return
        f = _field(n)
        if len(num) != f.phi:
            raise ValueError(f"need {f.phi} coordinates for conductor {n}")
        nn, dd = _normalize(list(num), den)
        self.n, self.num, self.den = n, nn, dd

    # -- constructors -------------------------------------------------

    @staticmethod
    def make(n: int, coeffs) -> Cyc:
        """Build from a list of ints/Fractions (length <= phi(n) padded,
        longer lists are reduced modulo Phi_n)."""
        f = _field(n)
        fr = [Fraction(c) for c in coeffs]
        den = 1
        for c in fr:
            den = den * c.denominator // gcd(den, c.denominator)
        ints = [int(c * den) for c in fr]
        if len(ints) > f.phi:
            # reduce high powers of z first
            ints = f._reduce(ints)
        ints = ints + [0] * (f.phi - len(ints))
        return Cyc(n, tuple(ints), den)

    @staticmethod
    def from_rational(r, n: int = 1) -> Cyc:
        r = Fraction(r)
        f = _field(n)
        num = [r.numerator] + [0] * (f.phi - 1)
        return Cyc(n, tuple(num), r.denominator)

    @staticmethod
    def zeta(n: int, k: int = 1) -> Cyc:
        f = _field(n)
        return Cyc(n, f.zrow(k % n), 1)

    @staticmethod
    def zero(n: int = 1) -> Cyc:
        f = _field(n)
        return Cyc(n, tuple(0 for _ in range(f.phi)), 1, _raw=True)

    @staticmethod
    def one(n: int = 1) -> Cyc:
        return Cyc.from_rational(1, n)

    # -- coercion -----------------------------------------------------

    def lift(self, n: int) -> Cyc:
        """Embed a conductor-1 value into Q(zeta_n)."""
        if self.n == n:
            return self
        if self.n != 1:
            raise FieldMismatchError(f"cannot lift conductor {self.n} into {n}")
        f = _field(n)
        num = (self.num[0],) + tuple(0 for _ in range(f.phi - 1))
        return Cyc(n, num, self.den, _raw=True)

    def _pair(self, other) -> tuple[Cyc, Cyc]:
        if isinstance(other, (int, Fraction)):
            other = Cyc.from_rational(other, 1)
        if not isinstance(other, Cyc):
            return NotImplemented, NotImplemented
        if self.n == other.n:
            return self, other
        if self.n == 1:
            return self.lift(other.n), other
        if other.n == 1:
            return self, other.lift(self.n)
        raise FieldMismatchError(f"conductor mismatch: {self.n} vs {other.n}")

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.num)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return all(x == 0 for x in self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num[0], self.den)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        num = [x * b.den + y * a.den for x, y in zip(a.num, b.num)]
        return Cyc(a.n, tuple(num), a.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        return Cyc(self.n, tuple(-x for x in self.num), self.den, _raw=True)

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        num = [x * b.den - y * a.den for x, y in zip(a.num, b.num)]
        return Cyc(a.n, tuple(num), a.den * b.den)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        num = _field(a.n).mul(a.num, b.num)
        return Cyc(a.n, tuple(num), a.den * b.den)

    __rmul__ = __mul__

    def inverse(self) -> Cyc:
        """Multiplicative inverse, via the linear system self * z = 1
        over the power basis."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        f = _field(self.n)
        phi = f.phi
        if phi == 1:
            return Cyc(self.n, (self.den,), self.num[0])
        # columns of M are self.num * z^j expressed in the power basis
        cols = []
        for j in range(phi):
            zj = [0] * phi
            zj[j] = 1
            cols.append(f.mul(self.num, tuple(zj)))
        sol = _solve_int_system(cols, phi)
        return Cyc.make(self.n, [Fraction(self.den) * s for s in sol])

    def __truediv__(self, other):
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = Cyc.one(self.n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> Cyc:
        """The Galois automorphism zeta -> zeta^(n-1) (complex conjugation)."""
        f = _field(self.n)
        out = [0] * f.phi
        for i, c in enumerate(self.num):
            if c:
                row = f.zrow((self.n - i) % self.n)
                for j in range(f.phi):
                    out[j] += c * row[j]
        return Cyc(self.n, tuple(out), self.den)

    # -- hashing / printing -------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyc.from_rational(other, self.n if self.n else 1)
            other = other.lift(self.n)
        if not isinstance(other, Cyc):
            return NotImplemented
        return self.n == other.n and self.den == other.den and self.num == other.num

    def __hash__(self):
        return hash((self.n, self.num, self.den))

    def __repr__(self):
        return f"Cyc({self.n}, {self.as_str()!r})"

    def as_str(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.num):
            if not c:
                continue
            q = Fraction(c, self.den)
            if i == 0:
                parts.append(str(q))
            else:
                mon = "z" if i == 1 else f"z^{i}"
                if q == 1:
                    parts.append(mon)
                elif q == -1:
                    parts.append(f"-{mon}")
                else:
                    parts.append(f"{q}*{mon}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    __str__ = as_str


def _solve_int_system(cols: list[list[int]], phi: int) -> list[Fraction]:
    """Solve M x = e_0 where column j of M is cols[j]; exact Fractions."""
    aug = [[Fraction(cols[j][i]) for j in range(phi)] + [Fraction(1 if i == 0 else 0)]
           for i in range(phi)]
    for c in range(phi):
        piv = next((r for r in range(c, phi) if aug[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("zero divisor in cyclotomic ring")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [v * inv for v in aug[c]]
        for r in range(phi):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[c])]
    return [aug[i][phi] for i in range(phi)]


class Matrix:
    """Dense matrix over Cyc with exact Gaussian elimination.

    Pivoting picks the first nonzero entry in each column, so echelon
    forms (and hence nullspace bases) are canonical for given input.
    """

    __slots__ = ("rows", "cols", "n", "data")

    def __init__(self, rows: int, cols: int, n: int, data: list[Cyc] | None = None):
        self.rows, self.cols, self.n = rows, cols, n
        if data is None:
            z = Cyc.zero(n)
            data = [z] * (rows * cols)
        if len(data) != rows * cols:
            raise ValueError("data length mismatch")
        self.data = data

    @staticmethod
    def from_rows(rows: list[list[Cyc]], n: int | None = None) -> Matrix:
        r = len(rows)
        c = len(rows[0]) if r else 0
        if n is None:
            n = rows[0][0].n if r and c else 1
        flat = []
        for row in rows:
            if len(row) != c:
                raise ValueError("ragged rows")
            flat.extend(x.lift(n) if x.n != n else x for x in row)
        return Matrix(r, c, n, flat)

    @staticmethod
    def identity(k: int, n: int = 1) -> Matrix:
        m = Matrix(k, k, n)
        one = Cyc.one(n)
        data = list(m.data)
        for i in range(k):
            data[i * k + i] = one
        m.data = data
        return m

    def __getitem__(self, rc: tuple[int, int]) -> Cyc:
        r, c = rc
        return self.data[r * self.cols + c]

    def set(self, r: int, c: int, v: Cyc) -> None:
        self.data[r * self.cols + c] = v.lift(self.n) if v.n != self.n else v

    def row(self, r: int) -> list[Cyc]:
        return self.data[r * self.cols:(r + 1) * self.cols]

    def col(self, c: int) -> list[Cyc]:
        return [self.data[r * self.cols + c] for r in range(self.rows)]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.rows, self.cols, self.n) == (other.rows, other.cols, other.n) \
            and self.data == other.data

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        n = self.n
        out = Matrix(self.rows, other.cols, n)
        data = list(out.data)
        for i in range(self.rows):
            for k in range(self.cols):
                a = self.data[i * self.cols + k]
                if a.is_zero():
                    continue
                for j in range(other.cols):
                    b = other.data[k * other.cols + j]
                    if b.is_zero():
                        continue
                    data[i * other.cols + j] = data[i * other.cols + j] + a * b
        out.data = data
        return out

    def transpose(self) -> Matrix:
        out = Matrix(self.cols, self.rows, self.n)
        data = list(out.data)
        for r in range(self.rows):
            for c in range(self.cols):
                data[c * self.rows + r] = self.data[r * self.cols + c]
        out.data = data
        return out

    def trace(self) -> Cyc:
        if self.rows != self.cols:
            raise ValueError("trace of non-square matrix")
        t = Cyc.zero(self.n)
        for i in range(self.rows):
            t = t + self.data[i * self.cols + i]
        return t

    def _rref(self) -> tuple[list[list[Cyc]], list[int]]:
        """Reduced row echelon form; returns (rows, pivot column list)."""
        m = [list(self.row(r)) for r in range(self.rows)]
        pivots: list[int] = []
        r = 0
        for c in range(self.cols):
            piv = next((i for i in range(r, self.rows) if not m[i][c].is_zero()), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            inv = m[r][c].inverse()
            m[r] = [v * inv for v in m[r]]
            for i in range(self.rows):
                if i != r and not m[i][c].is_zero():
                    f = m[i][c]
                    m[i] = [v - f * w for v, w in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return m, pivots

    def rank(self) -> int:
        return len(self._rref()[1])

    def nullspace(self) -> list[list[Cyc]]:
        """Canonical nullspace basis: one vector per free column, with a 1
        in the free position and pivot coordinates filled from the RREF."""
        m, pivots = self._rref()
        free = [c for c in range(self.cols) if c not in pivots]
        basis = []
        zero, one = Cyc.zero(self.n), Cyc.one(self.n)
        for fc in free:
            v = [zero] * self.cols
            v[fc] = one
            for r, pc in enumerate(pivots):
                v[pc] = -m[r][fc]
            basis.append(v)
        return basis

    def solve(self, b: list[Cyc]) -> list[Cyc]:
        """Solve self @ x = b for square self; SingularSystemError if the
        matrix is not invertible."""
        if self.rows != self.cols:
            raise ValueError("solve needs a square matrix")
        if len(b) != self.rows:
            raise ValueError("rhs length mismatch")
        n = self.n
        aug = Matrix(self.rows, self.cols + 1, n)
        data = []
        for r in range(self.rows):
            data.extend(self.row(r))
            x = b[r]
            data.append(x.lift(n) if x.n != n else x)
        aug.data = data
        m, pivots = aug._rref()
        if len(pivots) != self.cols or any(p >= self.cols for p in pivots):
            raise SingularSystemError("matrix is singular")
        return [m[r][self.cols] for r in range(self.cols)]

    def inverse(self) -> Matrix:
        if self.rows != self.cols:
            raise ValueError("inverse needs a square matrix")
        k, n = self.rows, self.n
        aug = Matrix(k, 2 * k, n)
        data = []
        one, zero = Cyc.one(n), Cyc.zero(n)
        for r in range(k):
            data.extend(self.row(r))
            data.extend(one if c == r else zero for c in range(k))
        aug.data = data
        m, pivots = aug._rref()
        if pivots != list(range(k)):
            raise SingularSystemError("matrix is singular")
        out = Matrix(k, k, n)
        out.data = [m[r][k + c] for r in range(k) for c in range(k)]
        return out
