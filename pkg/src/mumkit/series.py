"""Truncated formal power series and series matrices over exact rationals.

A TruncSeries knows its coefficients c_0 .. c_{M-1} exactly and nothing
beyond; M is the truncation order.  Binary operations truncate to the
smaller operand order, except where a sharper output order is provable
(substitute_power, cartier, cartier_pullback, shift), in which case the
method documents its exact output order.  Everything is immutable and
all coefficients are arbitrary-precision rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .primes import vp_int

INF = math.inf  # valuation of the zero coefficient; compares above any int

_F0 = Fraction(0)
_F1 = Fraction(1)


class ZeroConstantTerm(ValueError):
    """Inversion of a series with vanishing constant term."""


class BadConstantTerm(ValueError):
    """exp needs c0 = 0, log needs c0 = 1."""


class SingularConstantTerm(ValueError):
    """Matrix inversion when the constant-term matrix is singular."""


def vp(x: Fraction, p: int):
    """p-adic valuation of a rational; INF for zero."""
    if x == 0:
        return INF
    return vp_int(x.numerator, p) - vp_int(x.denominator, p)


@dataclass(frozen=True)
class ValuationProfile:
    """p-adic audit of a series (or of merged series): the minimum valuation
    over all inspected coefficients, plus the list of offending exponents.

    negative_valuations holds (exponent, valuation) pairs for valuations < 0
    only, so min_valuation >= 0 exactly when the list is empty.
    """

    prime: int
    min_valuation: int | float
    negative_valuations: tuple[tuple[int, int], ...]

    @property
    def is_integral(self) -> bool:
        return self.min_valuation >= 0

    @staticmethod
    def of_coefficients(coeffs, p: int) -> "ValuationProfile":
        min_v = INF
        neg = []
        for k, c in enumerate(coeffs):
            v = vp(c, p)
            if v < min_v:
                min_v = v
            if v < 0:
                neg.append((k, v))
        return ValuationProfile(p, min_v, tuple(neg))

    @staticmethod
    def merge(profiles) -> "ValuationProfile":
        """Merge profiles at one prime: per-exponent minimum valuation."""
        profiles = list(profiles)
        if not profiles:
            raise ValueError("nothing to merge")
        p = profiles[0].prime
        assert all(pr.prime == p for pr in profiles)
        min_v = min(pr.min_valuation for pr in profiles)
        by_exp: dict[int, int] = {}
        for pr in profiles:
            for k, v in pr.negative_valuations:
                if v < by_exp.get(k, 0):
                    by_exp[k] = v
        neg = tuple(sorted(by_exp.items()))
        return ValuationProfile(p, min_v, neg)


@dataclass(frozen=True)
class TruncSeries:
    """Power series known exactly modulo z^trunc, with trunc = len(coeffs)."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) < 1:
            raise ValueError("truncation order must be positive")
        if not all(isinstance(c, Fraction) for c in self.coeffs):
            object.__setattr__(
                self, "coeffs", tuple(Fraction(c) for c in self.coeffs)
            )

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_coeffs(coeffs, trunc: int | None = None) -> "TruncSeries":
        """Build from an explicit coefficient list; when trunc exceeds the
        list length the series is a polynomial and the tail is genuinely
        zero, so zero-padding is knowledge, not a guess."""
        cs = [Fraction(c) for c in coeffs]
        if trunc is not None:
            if trunc < len(cs):
                cs = cs[:trunc]
            else:
                cs.extend([_F0] * (trunc - len(cs)))
        if not cs:
            cs = [_F0]
        return TruncSeries(tuple(cs))

    @staticmethod
    def zero(trunc: int) -> "TruncSeries":
        return TruncSeries((_F0,) * trunc)

    @staticmethod
    def one(trunc: int) -> "TruncSeries":
        return TruncSeries((_F1,) + (_F0,) * (trunc - 1))

    @staticmethod
    def constant(c, trunc: int) -> "TruncSeries":
        return TruncSeries((Fraction(c),) + (_F0,) * (trunc - 1))

    @staticmethod
    def z_power(k: int, trunc: int) -> "TruncSeries":
        cs = [_F0] * trunc
        if k < trunc:
            cs[k] = _F1
        return TruncSeries(tuple(cs))

    # -- basics ------------------------------------------------------------

    @property
    def trunc(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]

    @property
    def constant_term(self) -> Fraction:
        return self.coeffs[0]

    def truncate(self, trunc: int) -> "TruncSeries":
        if trunc > self.trunc:
            raise ValueError("cannot extend knowledge by truncating")
        return TruncSeries(self.coeffs[:trunc])

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def first_nonzero(self) -> int | None:
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k
        return None

    def agrees_with(self, other: "TruncSeries", upto: int | None = None) -> bool:
        n = min(self.trunc, other.trunc)
        if upto is not None:
            n = min(n, upto)
        return self.coeffs[:n] == other.coeffs[:n]

    def __str__(self) -> str:
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            elif k == 1:
                parts.append(f"{c}*z")
            else:
                parts.append(f"{c}*z^{k}")
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O(z^{self.trunc})"

    # -- ring operations (min-trunc rule) -----------------------------------

    def __add__(self, other):
        if isinstance(other, TruncSeries):
            n = min(self.trunc, other.trunc)
            return TruncSeries(
                tuple(self.coeffs[k] + other.coeffs[k] for k in range(n))
            )
        return self + TruncSeries.constant(other, self.trunc)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, TruncSeries):
            n = min(self.trunc, other.trunc)
            return TruncSeries(
                tuple(self.coeffs[k] - other.coeffs[k] for k in range(n))
            )
        return self - TruncSeries.constant(other, self.trunc)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            n = min(self.trunc, other.trunc)
            out = [_F0] * n
            for i in range(n):
                a = self.coeffs[i]
                if a == 0:
                    continue
                for j in range(n - i):
                    b = other.coeffs[j]
                    if b != 0:
                        out[i + j] += a * b
            return TruncSeries(tuple(out))
        c = Fraction(other)
        return TruncSeries(tuple(c * x for x in self.coeffs))

    __rmul__ = __mul__

    def pow_int(self, e: int) -> "TruncSeries":
        if e < 0:
            return self.invert().pow_int(-e)
        result = TruncSeries.one(self.trunc)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def invert(self) -> "TruncSeries":
        """Multiplicative inverse; requires a nonzero constant term."""
        if self.coeffs[0] == 0:
            raise ZeroConstantTerm("cannot invert a series with c0 = 0")
        n = self.trunc
        inv0 = _F1 / self.coeffs[0]
        out = [inv0] + [_F0] * (n - 1)
        for k in range(1, n):
            acc = _F0
            for j in range(1, k + 1):
                if self.coeffs[j] != 0:
                    acc += self.coeffs[j] * out[k - j]
            out[k] = -inv0 * acc
        return TruncSeries(tuple(out))

    # -- calculus and substitutions ------------------------------------------

    def delta(self) -> "TruncSeries":
        """The Euler derivative z*d/dz: coefficient k maps to k*c_k."""
        return TruncSeries(tuple(k * c for k, c in enumerate(self.coeffs)))

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by z^k.  Output order trunc + k: no knowledge is lost."""
        return TruncSeries((_F0,) * k + self.coeffs)

    def substitute_power(self, q: int) -> "TruncSeries":
        """f(z^q).  Output order q*(trunc-1) + 1; gaps between surviving
        exponents are genuinely zero."""
        if q < 1:
            raise ValueError("substitution exponent must be >= 1")
        n = q * (self.trunc - 1) + 1
        out = [_F0] * n
        for i, c in enumerate(self.coeffs):
            out[q * i] = c
        return TruncSeries(tuple(out))

    def cartier(self, p: int) -> "TruncSeries":
        """Coefficient extraction sum a_{ip} z^i.  Output order ceil(trunc/p)."""
        n = (self.trunc + p - 1) // p
        return TruncSeries(tuple(self.coeffs[i * p] for i in range(n)))

    def cartier_pullback(self, p: int, m: int = 1) -> "TruncSeries":
        """Lambda_p^m(f)(z^{p^m}): keep exponents divisible by p^m, zero the
        rest.  Output order = trunc, which is sharp (every retained
        coefficient is one of ours, every dropped one is exactly zero)."""
        q = p**m
        return TruncSeries(
            tuple(c if k % q == 0 else _F0 for k, c in enumerate(self.coeffs))
        )

    def exp(self) -> "TruncSeries":
        """Formal exponential; requires c0 = 0."""
        if self.coeffs[0] != 0:
            raise BadConstantTerm("exp needs a series with c0 = 0")
        n = self.trunc
        out = [_F1] + [_F0] * (n - 1)
        # delta(E) = E * delta(self) gives k*E_k = sum_j (j c_j) E_{k-j}
        for k in range(1, n):
            acc = _F0
            for j in range(1, k + 1):
                if self.coeffs[j] != 0:
                    acc += j * self.coeffs[j] * out[k - j]
            out[k] = acc / k
        return TruncSeries(tuple(out))

    def log(self) -> "TruncSeries":
        """Formal logarithm; requires c0 = 1."""
        if self.coeffs[0] != 1:
            raise BadConstantTerm("log needs a series with c0 = 1")
        n = self.trunc
        out = [_F0] * n
        # delta(self) = self * delta(L) gives k a_k = sum_j (j L_j) a_{k-j}
        for k in range(1, n):
            acc = Fraction(k) * self.coeffs[k]
            for j in range(1, k):
                if out[j] != 0 and self.coeffs[k - j] != 0:
                    acc -= j * out[j] * self.coeffs[k - j]
            out[k] = acc / k
        return TruncSeries(tuple(out))

    # -- p-adic audit ---------------------------------------------------------

    def valuation_profile(self, p: int) -> ValuationProfile:
        return ValuationProfile.of_coefficients(self.coeffs, p)


def invert_constant_matrix(rows):
    """Exact inverse of a square matrix of Fractions (Gauss-Jordan)."""
    n = len(rows)
    a = [[Fraction(x) for x in row] for row in rows]
    inv = [[_F1 if i == j else _F0 for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise SingularConstantTerm("constant-term matrix is singular")
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            inv[col], inv[pivot] = inv[pivot], inv[col]
        scale = _F1 / a[col][col]
        a[col] = [x * scale for x in a[col]]
        inv[col] = [x * scale for x in inv[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
                inv[r] = [x - factor * y for x, y in zip(inv[r], inv[col])]
    return [tuple(row) for row in inv]


@dataclass(frozen=True)
class SeriesMatrix:
    """Square matrix of TruncSeries sharing one truncation order."""

    entries: tuple[tuple[TruncSeries, ...], ...]

    def __post_init__(self):
        n = len(self.entries)
        if any(len(row) != n for row in self.entries):
            raise ValueError("matrix must be square")
        truncs = {e.trunc for row in self.entries for e in row}
        if len(truncs) != 1:
            raise ValueError("all entries must share one truncation order")

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def from_rows(rows) -> "SeriesMatrix":
        return SeriesMatrix(tuple(tuple(row) for row in rows))

    @staticmethod
    def from_constant(rows, trunc: int) -> "SeriesMatrix":
        return SeriesMatrix(
            tuple(
                tuple(TruncSeries.constant(x, trunc) for x in row) for row in rows
            )
        )

    @staticmethod
    def identity(n: int, trunc: int) -> "SeriesMatrix":
        one = TruncSeries.one(trunc)
        zero = TruncSeries.zero(trunc)
        return SeriesMatrix(
            tuple(
                tuple(one if i == j else zero for j in range(n)) for i in range(n)
            )
        )

    @staticmethod
    def diagonal(consts, trunc: int) -> "SeriesMatrix":
        consts = [Fraction(c) for c in consts]
        n = len(consts)
        zero = TruncSeries.zero(trunc)
        return SeriesMatrix(
            tuple(
                tuple(
                    TruncSeries.constant(consts[i], trunc) if i == j else zero
                    for j in range(n)
                )
                for i in range(n)
            )
        )

    # -- basics ----------------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def trunc(self) -> int:
        return self.entries[0][0].trunc

    def entry(self, i: int, j: int) -> TruncSeries:
        return self.entries[i][j]

    def constant_matrix(self):
        """The matrix of constant terms, as rows of Fractions."""
        return tuple(tuple(e.constant_term for e in row) for row in self.entries)

    def truncate(self, trunc: int) -> "SeriesMatrix":
        return self.map(lambda e: e.truncate(trunc))

    def map(self, fn) -> "SeriesMatrix":
        return SeriesMatrix(tuple(tuple(fn(e) for e in row) for row in self.entries))

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def residual_order(self) -> int:
        """Largest k <= trunc with all entries = 0 mod z^k."""
        order = self.trunc
        for row in self.entries:
            for e in row:
                fn = e.first_nonzero()
                if fn is not None and fn < order:
                    order = fn
        return order

    # -- arithmetic --------------------------------------------------------------

    def __add__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        return SeriesMatrix(
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            )
        )

    def __sub__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        return SeriesMatrix(
            tuple(
                tuple(a - b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            )
        )

    def __neg__(self) -> "SeriesMatrix":
        return self.map(lambda e: -e)

    def scale(self, c) -> "SeriesMatrix":
        c = Fraction(c)
        return self.map(lambda e: e * c)

    def __mul__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        n = self.n
        trunc = min(self.trunc, other.trunc)
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = TruncSeries.zero(trunc)
                for k in range(n):
                    a = self.entries[i][k]
                    b = other.entries[k][j]
                    if a.is_zero() or b.is_zero():
                        continue
                    acc = acc + a * b
                row.append(acc)
            rows.append(tuple(row))
        return SeriesMatrix(tuple(rows))

    def delta(self) -> "SeriesMatrix":
        return self.map(lambda e: e.delta())

    def substitute_power(self, q: int) -> "SeriesMatrix":
        return self.map(lambda e: e.substitute_power(q))

    def cartier(self, p: int) -> "SeriesMatrix":
        return self.map(lambda e: e.cartier(p))

    def cartier_pullback(self, p: int, m: int = 1) -> "SeriesMatrix":
        return self.map(lambda e: e.cartier_pullback(p, m))

    def invert(self) -> "SeriesMatrix":
        """Order-by-order inverse; needs the constant-term matrix invertible."""
        n = self.n
        trunc = self.trunc
        # order-k coefficient matrices of self, as lists of Fraction rows
        a = [
            [[self.entries[i][j].coeffs[k] for j in range(n)] for i in range(n)]
            for k in range(trunc)
        ]
        b0 = invert_constant_matrix(a[0])
        out = [b0]
        for k in range(1, trunc):
            # sum_{j=1..k} A_j B_{k-j}, then B_k = -B_0 * that
            acc = [[_F0] * n for _ in range(n)]
            for j in range(1, k + 1):
                aj = a[j]
                bk = out[k - j]
                for i in range(n):
                    ai = aj[i]
                    acci = acc[i]
                    for l in range(n):
                        c = ai[l]
                        if c:
                            bl = bk[l]
                            for jj in range(n):
                                acci[jj] += c * bl[jj]
            bk = [
                tuple(
                    -sum(b0[i][l] * acc[l][jj] for l in range(n)) for jj in range(n)
                )
                for i in range(n)
            ]
            out.append(bk)
        entries = tuple(
            tuple(
                TruncSeries(tuple(out[k][i][j] for k in range(trunc)))
                for j in range(n)
            )
            for i in range(n)
        )
        return SeriesMatrix(entries)

    def det(self) -> TruncSeries:
        """Determinant by cofactor expansion (dimensions here are small)."""
        n = self.n
        if n == 1:
            return self.entries[0][0]
        acc = TruncSeries.zero(self.trunc)
        for j in range(n):
            if self.entries[0][j].is_zero():
                continue
            minor = SeriesMatrix(
                tuple(
                    tuple(row[jj] for jj in range(n) if jj != j)
                    for row in self.entries[1:]
                )
            )
            term = self.entries[0][j] * minor.det()
            acc = acc + term if j % 2 == 0 else acc - term
        return acc

    # -- p-adic audit ---------------------------------------------------------------

    def valuation_profile(self, p: int) -> ValuationProfile:
        """Merged profile over all entries (per-exponent minimum)."""
        return ValuationProfile.merge(
            e.valuation_profile(p) for row in self.entries for e in row
        )
