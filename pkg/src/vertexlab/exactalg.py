"""Exact scalar arithmetic over the Gaussian rationals and exact dense rank.

Every scalar in the library is a ``GaussianRational`` (a + b*i with rational
a, b held as ``fractions.Fraction``).  There is no floating point anywhere:
equality is decidable and all linear algebra is done by exact elimination.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

RatLike = Union[int, str, Fraction]

_SCALAR_RE = re.compile(
    r"^(?P<re>[+-]?\d+(?:/\d+)?)?(?P<im>(?:(?<=\d)[+-]|^[+-]?)\d+(?:/\d+)?\*i)?$"
)


def _frac(x: RatLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


class GaussianRational:
    """An exact number a + b*i in Q(i)."""

    __slots__ = ("real", "imag")

    def __init__(self, real: RatLike = 0, imag: RatLike = 0):
        object.__setattr__(self, "real", _frac(real))
        object.__setattr__(self, "imag", _frac(imag))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Parse strings like "3", "-3/2", "1/2*i" or "-3/2+1/2*i"."""
        s = text.strip().replace(" ", "")
        if not s:
            raise ValueError("empty scalar string")
        m = _SCALAR_RE.match(s)
        if not m or (m.group("re") is None and m.group("im") is None):
            raise ValueError(f"not an exact scalar: {text!r}")
        re_part = m.group("re") or "0"
        im_part = m.group("im")
        if im_part is None:
            return cls(Fraction(re_part))
        return cls(Fraction(re_part), Fraction(im_part[:-2]))

    # -- field operations --------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.real + o.real, self.imag + o.imag)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.real - o.real, self.imag - o.imag)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.real, self.imag, o.real, o.imag
        return GaussianRational(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianRational(-self.real, -self.imag)

    def inverse(self) -> "GaussianRational":
        n = self.real * self.real + self.imag * self.imag
        if n == 0:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return GaussianRational(self.real / n, -self.imag / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int) -> "GaussianRational":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.real, -self.imag)

    # -- predicates and hashing -------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.real == o.real and self.imag == o.imag

    def __hash__(self):
        if self.imag == 0:
            return hash(self.real)
        return hash((self.real, self.imag))

    def __bool__(self):
        return bool(self.real) or bool(self.imag)

    @property
    def is_real(self) -> bool:
        return self.imag == 0

    # -- formatting --------------------------------------------------------

    def __str__(self):
        if self.imag == 0:
            return str(self.real)
        if self.real == 0:
            if self.imag < 0:
                return f"-{-self.imag}*i"
            return f"{self.imag}*i"
        if self.imag < 0:
            return f"{self.real}-{-self.imag}*i"
        return f"{self.real}+{self.imag}*i"

    def __repr__(self):
        return f"GaussianRational({self.real!r}, {self.imag!r})"


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def gq(real: RatLike = 0, imag: RatLike = 0) -> GaussianRational:
    """Shorthand constructor."""
    return GaussianRational(real, imag)


_INT_CACHE: dict = {0: ZERO, 1: ONE}


def _gq_int(v: int) -> GaussianRational:
    # interning for small integers; hot paths wrap millions of these
    if -1024 <= v <= 1024:
        out = _INT_CACHE.get(v)
        if out is None:
            out = GaussianRational(v)
            _INT_CACHE[v] = out
        return out
    return GaussianRational(v)


class ExactMatrix:
    """Dense row-major matrix over the Gaussian rationals."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence):
        entries = tuple(
            e if isinstance(e, GaussianRational) else GaussianRational(e)
            for e in entries
        )
        if len(entries) != rows * cols:
            raise ValueError(
                f"entry count {len(entries)} != {rows}x{cols}"
            )
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if rows else 0
        if any(len(r) != m for r in rows):
            raise ValueError("ragged rows")
        return cls(n, m, [e for r in rows for e in r])

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(n, n, [ONE if i == j else ZERO for i in range(n) for j in range(n)])

    @classmethod
    def diagonal(cls, values: Sequence) -> "ExactMatrix":
        vs = list(values)
        n = len(vs)
        return cls(n, n, [vs[i] if i == j else ZERO for i in range(n) for j in range(n)])

    def __getitem__(self, ij) -> GaussianRational:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def row(self, i: int):
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(
            self.cols,
            self.rows,
            [self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)],
        )

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        n, k, m = self.rows, self.cols, other.cols
        kind = _join_kind(self._kind(), other._kind())
        rng = range(k)
        if kind == "int":
            a = [[e.real.numerator for e in self.row(i)] for i in range(n)]
            bt = [
                [other.entries[t * m + j].real.numerator for t in range(k)]
                for j in range(m)
            ]
            out = []
            for ai in a:
                for bj in bt:
                    acc = 0
                    for t in rng:
                        acc += ai[t] * bj[t]
                    out.append(_gq_int(acc))
            return ExactMatrix(n, m, out)
        if kind == "gaussint":
            a = [
                [(e.real.numerator, e.imag.numerator) for e in self.row(i)]
                for i in range(n)
            ]
            bt = [
                [
                    (
                        other.entries[t * m + j].real.numerator,
                        other.entries[t * m + j].imag.numerator,
                    )
                    for t in range(k)
                ]
                for j in range(m)
            ]
            out = []
            for ai in a:
                for bj in bt:
                    acc_re = 0
                    acc_im = 0
                    for t in rng:
                        xr, xi = ai[t]
                        yr, yi = bj[t]
                        acc_re += xr * yr - xi * yi
                        acc_im += xr * yi + xi * yr
                    out.append(GaussianRational(acc_re, acc_im))
            return ExactMatrix(n, m, out)
        if kind == "fraction":
            a = [[e.real for e in self.row(i)] for i in range(n)]
            bt = [[other.entries[t * m + j].real for t in range(k)] for j in range(m)]
            out = []
            for ai in a:
                for bj in bt:
                    acc = 0
                    for t in rng:
                        acc = acc + ai[t] * bj[t]
                    out.append(GaussianRational(acc))
            return ExactMatrix(n, m, out)
        out = []
        for i in range(n):
            ri = self.row(i)
            for j in range(m):
                acc = ZERO
                for t in range(k):
                    acc = acc + ri[t] * other.entries[t * m + j]
                out.append(acc)
        return ExactMatrix(n, m, out)

    def scaled(self, c) -> "ExactMatrix":
        c = c if isinstance(c, GaussianRational) else GaussianRational(c)
        return ExactMatrix(self.rows, self.cols, [c * e for e in self.entries])

    def _all_real(self) -> bool:
        return all(e.imag == 0 for e in self.entries)

    def _kind(self) -> str:
        all_real = True
        all_int = True
        for e in self.entries:
            if e.imag:
                all_real = False
            if e.real.denominator != 1 or e.imag.denominator != 1:
                all_int = False
            if not all_real and not all_int:
                break
        if all_real:
            return "int" if all_int else "fraction"
        return "gaussint" if all_int else "gauss"

    def rank(self) -> int:
        return rank(self)

    def __str__(self):
        lines = []
        for i in range(self.rows):
            lines.append("\t".join(str(e) for e in self.row(i)))
        return "\n".join(lines)


_KIND_ORDER = {"int": 0, "gaussint": 1, "fraction": 1, "gauss": 2}


def _join_kind(a: str, b: str) -> str:
    if a == b:
        return a
    if {a, b} == {"gaussint", "fraction"}:
        return "gauss"
    return a if _KIND_ORDER[a] >= _KIND_ORDER[b] else b


def rank(m: ExactMatrix) -> int:
    """Rank over Q(i) by exact Gaussian elimination.

    Pivot is the first nonzero entry in column order.  Integer matrices run
    through fraction-free elimination (exact integer cross-multiplication
    with division by the previous pivot); everything else goes through plain
    elimination over Fraction or GaussianRational.  Deterministic, and the
    paths agree everywhere they overlap.
    """
    if m.rows == 0 or m.cols == 0:
        return 0
    kind = m._kind()
    if kind == "int":
        rows = [[e.real.numerator for e in m.row(i)] for i in range(m.rows)]
        try:
            return _eliminate_int(rows, m.rows, m.cols)
        except _InexactDivision:  # pragma: no cover - safety net
            pass
    if kind in ("int", "fraction"):
        rows = [[e.real for e in m.row(i)] for i in range(m.rows)]
        return _eliminate(rows, m.rows, m.cols)
    rows = [list(m.row(i)) for i in range(m.rows)]
    return _eliminate(rows, m.rows, m.cols)


class _InexactDivision(ArithmeticError):
    pass


def _eliminate_int(a, nrows: int, ncols: int) -> int:
    # Fraction-free elimination: after each pivot, entries stay integer
    # minors by Sylvester's identity; the division by the previous pivot is
    # exact (checked, with a Fraction fallback upstream just in case).
    prev = 1
    r = 0
    for c in range(ncols):
        pivot_row = -1
        for i in range(r, nrows):
            if a[i][c]:
                pivot_row = i
                break
        if pivot_row < 0:
            continue
        a[r], a[pivot_row] = a[pivot_row], a[r]
        piv = a[r][c]
        arow = a[r]
        for i in range(r + 1, nrows):
            ai = a[i]
            lead = ai[c]
            if prev == 1:
                for j in range(c + 1, ncols):
                    ai[j] = piv * ai[j] - lead * arow[j]
            else:
                for j in range(c + 1, ncols):
                    q, rem = divmod(piv * ai[j] - lead * arow[j], prev)
                    if rem:
                        raise _InexactDivision
                    ai[j] = q
            ai[c] = 0
        prev = piv
        r += 1
        if r == nrows:
            break
    return r


def _eliminate(a, nrows: int, ncols: int) -> int:
    # Works for rows of Fraction or of GaussianRational: both are exact fields.
    r = 0
    for c in range(ncols):
        pivot_row = -1
        for i in range(r, nrows):
            if a[i][c]:
                pivot_row = i
                break
        if pivot_row < 0:
            continue
        a[r], a[pivot_row] = a[pivot_row], a[r]
        piv = a[r][c]
        arow = a[r]
        for i in range(r + 1, nrows):
            lead = a[i][c]
            if lead:
                f = lead / piv
                ai = a[i]
                # column c below the pivot is never read again
                for j in range(c + 1, ncols):
                    ai[j] = ai[j] - f * arow[j]
        r += 1
        if r == nrows:
            break
    return r
