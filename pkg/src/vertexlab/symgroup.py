"""Symmetric-group and Young-diagram machinery: partitions, hook lengths,
irreducible characters, orbit-count matrices M_n(d) and their predicted
ranks, and signed orbit sums.

Characters are computed by the Murnaghan-Nakayama rule in beta-set form.
Sums over S_n are grouped by cycle type with exact class sizes; tests
cross-validate against direct enumeration.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Sequence

from vertexlab.errors import GuardExceeded
from vertexlab.exactalg import ExactMatrix, GaussianRational, ONE, ZERO
from vertexlab.graphs import Permutation


class IntegerPartition:
    """A nonincreasing sequence of positive integers; doubles as a cycle type."""

    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[int]):
        parts = tuple(parts)
        if any(not isinstance(p, int) or p < 1 for p in parts):
            raise ValueError(f"parts must be positive integers: {parts!r}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"parts must be nonincreasing: {parts!r}")
        object.__setattr__(self, "parts", parts)

    def __setattr__(self, name, value):
        raise AttributeError("IntegerPartition is immutable")

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def height(self) -> int:
        return len(self.parts)

    def cells(self):
        """Young-shape cells (i, j), 1-based, row i of length parts[i-1]."""
        return [
            (i, j)
            for i in range(1, len(self.parts) + 1)
            for j in range(1, self.parts[i - 1] + 1)
        ]

    def conjugate(self) -> "IntegerPartition":
        if not self.parts:
            return self
        out = [0] * self.parts[0]
        for p in self.parts:
            for j in range(p):
                out[j] += 1
        return IntegerPartition(out)

    def hook_lengths(self):
        conj = self.conjugate().parts
        return [
            self.parts[i - 1] - j + conj[j - 1] - i + 1
            for i, j in self.cells()
        ]

    def __eq__(self, other):
        if not isinstance(other, IntegerPartition):
            return NotImplemented
        return self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return f"IntegerPartition({list(self.parts)})"

    def __str__(self):
        return "(" + ",".join(str(p) for p in self.parts) + ")"


def partitions_of(n: int, guard: int = 12):
    """All partitions of n in reverse-lexicographic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > guard:
        raise GuardExceeded(f"partitions_of guard: n={n} > {guard}")

    def rec(remaining, cap):
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, cap), 0, -1):
            for rest in rec(remaining - first, first):
                yield (first,) + rest

    return [IntegerPartition(p) for p in rec(n, n)]


def dimension(lam: IntegerPartition) -> int:
    """f^lambda by the hook-length formula."""
    hooks = lam.hook_lengths()
    num = factorial(lam.n)
    for h in hooks:
        num //= h
    return num


def rectangular_dimension(d: int, m: int, guard: int = 40) -> int:
    """f^{lambda_m} for the d-row rectangle (m,...,m), via
    (dm)! / (m!^d * prod_{i<d} binom(m+i, i))."""
    if d < 1 or m < 1:
        raise ValueError("d and m must be positive")
    if d * m > guard:
        raise GuardExceeded(f"rectangular_dimension guard: d*m={d * m} > {guard}")
    p = 1
    for i in range(d):
        p *= comb(m + i, i)
    num = factorial(d * m)
    den = factorial(m) ** d * p
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError("hook quotient not integral; formula misapplied")
    return q


# ---------------------------------------------------------------------------
# characters
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _mn_char(lam: tuple, mu: tuple) -> int:
    # Murnaghan-Nakayama on beta-sets: removing a border strip of length r
    # replaces some beta number b by b-r (not already present); the strip
    # height is the number of beta numbers jumped over.
    if not mu:
        return 1
    r = mu[0]
    rest = mu[1:]
    t = len(lam)
    beta = [lam[i] + (t - 1 - i) for i in range(t)]
    bset = set(beta)
    total = 0
    for b in beta:
        c = b - r
        if c < 0 or c in bset:
            continue
        jumped = sum(1 for x in beta if c < x < b)
        nb = sorted((bset - {b}) | {c}, reverse=True)
        lam2 = []
        for i, x in enumerate(nb):
            part = x - (t - 1 - i)
            if part:
                lam2.append(part)
        sub = _mn_char(tuple(lam2), rest)
        total += -sub if jumped & 1 else sub
    return total


def character(lam: IntegerPartition, mu: IntegerPartition) -> int:
    """chi_lambda evaluated on any permutation of cycle type mu."""
    if lam.n != mu.n:
        raise ValueError(f"size mismatch: |{lam}| != |{mu}|")
    return _mn_char(lam.parts, mu.parts)


def class_size(mu: IntegerPartition) -> int:
    """Number of permutations of cycle type mu in S_n."""
    counts = {}
    for p in mu.parts:
        counts[p] = counts.get(p, 0) + 1
    den = 1
    for j, mj in counts.items():
        den *= j ** mj * factorial(mj)
    return factorial(mu.n) // den


# ---------------------------------------------------------------------------
# polynomials in d
# ---------------------------------------------------------------------------

class PolynomialInD:
    """Polynomial with GaussianRational coefficients, index = power of d."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Sequence):
        coeffs = [
            c if isinstance(c, GaussianRational) else GaussianRational(c)
            for c in coefficients
        ]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("PolynomialInD is immutable")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1  # -1 for the zero polynomial

    def __add__(self, other):
        if not isinstance(other, PolynomialInD):
            return NotImplemented
        a, b = self.coefficients, other.coefficients
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return PolynomialInD(out)

    def __mul__(self, other):
        if isinstance(other, (int, GaussianRational, Fraction)):
            return PolynomialInD([c * other for c in self.coefficients])
        if not isinstance(other, PolynomialInD):
            return NotImplemented
        a, b = self.coefficients, other.coefficients
        if not a or not b:
            return PolynomialInD([])
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            for j, cb in enumerate(b):
                out[i + j] = out[i + j] + ca * cb
        return PolynomialInD(out)

    __rmul__ = __mul__

    def evaluate(self, d) -> GaussianRational:
        d = d if isinstance(d, GaussianRational) else GaussianRational(d)
        acc = ZERO
        for c in reversed(self.coefficients):
            acc = acc * d + c
        return acc

    def __eq__(self, other):
        if not isinstance(other, PolynomialInD):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self):
        return hash(self.coefficients)

    def __str__(self):
        if not self.coefficients:
            return "0"
        terms = []
        for k in range(len(self.coefficients) - 1, -1, -1):
            c = self.coefficients[k]
            if not c:
                continue
            if k == 0:
                terms.append(str(c))
            elif k == 1:
                terms.append(f"{c}*d")
            else:
                terms.append(f"{c}*d^{k}")
        return " + ".join(terms)

    def __repr__(self):
        return f"PolynomialInD({[str(c) for c in self.coefficients]})"


def char_sum_lhs(lam: IntegerPartition, guard: int = 7) -> PolynomialInD:
    """Sum over S_n of chi_lambda(pi) d^{o(pi)}, grouped by cycle type."""
    n = lam.n
    if n > guard:
        raise GuardExceeded(f"char_sum guard: n={n} > {guard}")
    coeffs = [0] * (n + 1)
    for mu in partitions_of(n):
        coeffs[mu.height] += class_size(mu) * character(lam, mu)
    return PolynomialInD(coeffs)


def char_sum_rhs(lam: IntegerPartition) -> PolynomialInD:
    """f^lambda times the product over Young cells of (d + j - i)."""
    poly = PolynomialInD([dimension(lam)])
    for i, j in lam.cells():
        poly = poly * PolynomialInD([j - i, 1])
    return poly


# ---------------------------------------------------------------------------
# orbit-count matrices
# ---------------------------------------------------------------------------

def _coerce_scalar(d) -> GaussianRational:
    return d if isinstance(d, GaussianRational) else GaussianRational(d)


def m_matrix(n: int, d, guard: int = 5) -> ExactMatrix:
    """The S_n x S_n matrix with entry d^{o(rho sigma^-1)}.

    Rows and columns follow Permutation.all_of_degree(n), lexicographic by
    image sequence.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > guard:
        raise GuardExceeded(f"m_matrix guard: n={n} > {guard}")
    d = _coerce_scalar(d)
    perms = [p.images for p in Permutation.all_of_degree(n)]
    inverses = []
    for im in perms:
        inv = [0] * n
        for i, x in enumerate(im, start=1):
            inv[x - 1] = i
        inverses.append(inv)
    powers = [ONE]
    for _ in range(n):
        powers.append(powers[-1] * d)
    entries = []
    for rho in perms:
        for inv in inverses:
            # composite rho(sigma^-1(i)); orbit count is all we need
            comp = [rho[inv[i] - 1] for i in range(n)]
            seen = 0
            orbits = 0
            for i in range(1, n + 1):
                if seen >> i & 1:
                    continue
                orbits += 1
                j = i
                while not seen >> j & 1:
                    seen |= 1 << j
                    j = comp[j - 1]
            entries.append(powers[orbits])
    size = len(perms)
    return ExactMatrix(size, size, entries)


def m_rank_formula(n: int, d) -> int:
    """Predicted rank of M_n(d): n! off the integers, else the sum of
    squared dimensions over partitions of height at most |d|."""
    d = _coerce_scalar(d)
    if d.imag != 0:
        raise ValueError("rank formula needs a real rational d")
    dr = d.real
    if dr.denominator != 1:
        return factorial(n)
    h = abs(int(dr))
    return sum(
        dimension(lam) ** 2 for lam in partitions_of(n) if lam.height <= h
    )


def signed_orbit_sum(k: int, d, guard: int = 8) -> GaussianRational:
    """Sum over S_k of sgn(pi) d^{o(pi)}, by cycle-type grouping."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k > guard:
        raise GuardExceeded(f"signed_orbit_sum guard: k={k} > {guard}")
    d = _coerce_scalar(d)
    total = ZERO
    for mu in partitions_of(k):
        sign = -1 if (k - mu.height) & 1 else 1
        total = total + (sign * class_size(mu)) * d ** mu.height
    return total
