"""Cartier/Frobenius transfer machinery and p-integral structure checks.

Level-m transfer attaches to a MUM operator L the operator L_m whose
holomorphic solution is the m-fold Cartier image of L's, together with
the gauge matrix H_m = Y (Lambda_p^m(Y)(z^{p^m}))^{-1} diag(1, p^m, ...)
that intertwines the two companion systems.  A p-integral Frobenius
structure is a matrix Phi with delta(Phi) = A Phi - p Phi A(z^p); by the
uniqueness of log-structured solutions it always factors as
Phi = Y C Y(z^p)^{-1} with a constant matrix C satisfying N C = p C N.

Truncation budget: every Cartier application divides the known order by p,
so level-m operator data certified to order T needs a working order of at
least p^m (T - 1) + 1.  Gauss norms of truncated series are lower bounds
on the true norms; the diagnostics below label them as such.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .opalg import DeltaOperator
from .primes import vp_factorial
from .series import SeriesMatrix, TruncSeries, ValuationProfile, vp
from .solve import solve_f, uniform_part

_F0 = Fraction(0)
_F1 = Fraction(1)


class NotPIntegralOperator(ValueError):
    """Gauss-norm diagnostics need operator coefficients in Z_p[[z]]."""


class InsufficientTruncation(ValueError):
    """The working order cannot support the requested level/target order."""


class BadConstantShape(ValueError):
    """Constant matrix is not of the admissible Frobenius shape."""


def working_trunc_for(target: int, p: int, m: int) -> int:
    """Smallest working order whose level-m data is certified to target."""
    return p**m * (target - 1) + 1


def certified_trunc(working: int, p: int, m: int) -> int:
    out = working
    for _ in range(m):
        out = -(-out // p)
    return out


# ---------------------------------------------------------------------------
# admissible constant matrices: N C = p C N
# ---------------------------------------------------------------------------


def _shift_matrix(n: int):
    """A(0) of any MUM companion system: superdiagonal ones, last row zero."""
    return tuple(
        tuple(_F1 if j == i + 1 else _F0 for j in range(n)) for i in range(n)
    )


def twisted_rows(p: int, n: int, gammas):
    """Rows of the constant matrix with C[i][j] = p^i * gamma_{j-i}
    (0-indexed); this parametrizes exactly the solutions of N C = p C N
    for the nilpotent shift N, gamma_0 being the pivot mu."""
    gammas = [Fraction(g) for g in gammas]
    if len(gammas) != n:
        raise ValueError("need n twist parameters")
    return tuple(
        tuple(
            Fraction(p) ** i * gammas[j - i] if j >= i else _F0 for j in range(n)
        )
        for i in range(n)
    )


def constant_shape_ok(rows, p: int) -> bool:
    """Check upper triangularity, diagonal (mu, p mu, ..., p^{n-1} mu) with
    mu != 0 and the twist N C = p C N that any Frobenius constant obeys."""
    n = len(rows)
    mu = rows[0][0]
    if mu == 0:
        return False
    for i in range(n):
        for j in range(n):
            if j < i and rows[i][j] != 0:
                return False
            if i > 0 and j > 0 and rows[i][j] != p * rows[i - 1][j - 1]:
                return False
            if i > 0 and j == 0 and rows[i][j] != 0:
                return False
    return True


def validate_constant_shape(rows, p: int):
    if not constant_shape_ok(rows, p):
        raise BadConstantShape(
            "constant matrix must be upper triangular with C[i+1][j+1] = "
            "p*C[i][j] and nonzero pivot"
        )


# ---------------------------------------------------------------------------
# radius-of-convergence diagnostics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RadiusRow:
    j: int
    min_valuation: int | float  # Gauss norm of A_j is p^(-min_valuation)
    scaled_min_valuation: int | float  # same for A_j / j!


@dataclass(frozen=True)
class RadiusDiagnostic:
    prime: int
    trunc: int
    rows: tuple[RadiusRow, ...]
    trending_to_zero: bool  # window heuristic: last 10 norms strictly < 1


def radius_diagnostic(op: DeltaOperator, p: int, max_index: int) -> RadiusDiagnostic:
    """Gauss norms of the Taylor matrices A_0 = I,
    A_{j+1} = delta(A_j) + A_j (A - jI), as exponents of p.

    Norms of truncated entries are lower bounds on the true Gauss norms.
    The trend flag realizes the testable consequence of radius >= 1 (the
    norms tend to zero) and is diagnostic only.
    """
    if not op.p_integrality(p).is_integral:
        raise NotPIntegralOperator(
            f"operator has a coefficient with negative {p}-adic valuation"
        )
    a = op.companion()
    n, trunc = a.n, a.trunc
    current = SeriesMatrix.identity(n, trunc)
    rows = []
    for j in range(max_index + 1):
        min_val = current.valuation_profile(p).min_valuation
        # INF - int stays INF, so the zero matrix needs no special case
        rows.append(RadiusRow(j, min_val, min_val - vp_factorial(j, p)))
        if j < max_index:
            shifted = a - SeriesMatrix.diagonal([j] * n, trunc)
            current = current.delta() + current * shifted
    window = rows[-min(10, len(rows)) :]
    trending = all(r.min_valuation >= 1 for r in window)
    return RadiusDiagnostic(p, trunc, tuple(rows), trending)


# ---------------------------------------------------------------------------
# single transfer step
# ---------------------------------------------------------------------------


def h0(y: SeriesMatrix, p: int) -> SeriesMatrix:
    """H_0 = Lambda_p(Y)(z^p) Y^{-1}; p-integral with H_0(0) = I whenever Y
    is the uniform part of a p-integral MUM system of radius >= 1."""
    _require_identity_at_zero(y)
    return y.cartier_pullback(p) * y.invert()


def frobenius_quotient_F(y: SeriesMatrix, nilpotent, p: int) -> SeriesMatrix:
    """F = [delta(Lambda_p(Y)) + (1/p) Lambda_p(Y) N] (Lambda_p(Y))^{-1};
    the companion-side quotient whose system has fundamental matrix
    Lambda_p(Y) z^{N/p}.  Output order is ceil(Y.trunc / p)."""
    _require_identity_at_zero(y)
    lam = y.cartier(p)
    nmat = SeriesMatrix.from_constant(nilpotent, lam.trunc)
    return (lam.delta() + (lam * nmat).scale(Fraction(1, p))) * lam.invert()


def transfer_operator_L1(f_matrix: SeriesMatrix, p: int) -> DeltaOperator:
    """Read the transferred monic operator off the last row of F:
    a_{i-1} = -b_{n,i} / p^{n-i}."""
    n = f_matrix.n
    last = f_matrix.entries[n - 1]
    coeffs = tuple(
        last[i] * (-Fraction(1, p ** (n - 1 - i))) for i in range(n)
    )
    op = DeltaOperator(coeffs)
    assert op.is_mum(), "transferred operator must be MUM"
    return op


def h_matrix(y: SeriesMatrix, p: int, m: int = 1) -> SeriesMatrix:
    """H_m = Y (Lambda_p^m(Y)(z^{p^m}))^{-1} diag(1, p^m, ..., p^{m(n-1)})."""
    _require_identity_at_zero(y)
    n = y.n
    diag = SeriesMatrix.diagonal(
        [Fraction(p) ** (m * i) for i in range(n)], y.trunc
    )
    return y * y.cartier_pullback(p, m).invert() * diag


def _require_identity_at_zero(y: SeriesMatrix):
    n = y.n
    c = y.constant_matrix()
    if any(c[i][j] != (1 if i == j else 0) for i in range(n) for j in range(n)):
        raise ValueError("matrix must have constant term I")


# ---------------------------------------------------------------------------
# iterated transfer
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransferData:
    p: int
    m: int
    operator: DeltaOperator  # L_m, certified to `trunc`
    h: SeriesMatrix  # H_m, certified to its own (larger) truncation order
    trunc: int


def iterate_transfer(op: DeltaOperator, p: int, m: int,
                     target_trunc: int | None = None) -> TransferData:
    """Level-m transfer data (L_m, H_m) for a MUM p-integral operator.

    The operator chain loses a factor p of known order per level; if a
    target certified order is requested the budget is checked up front.
    H_m comes from the closed form via the exact Cartier pullback, so it
    keeps the full working order.
    """
    if m < 1:
        raise ValueError("level must be >= 1")
    working = op.trunc
    certified = certified_trunc(working, p, m)
    if target_trunc is not None and certified < target_trunc:
        raise InsufficientTruncation(
            f"level-{m} data from working order {working} is certified only "
            f"to {certified} < {target_trunc}; need working order >= "
            f"{working_trunc_for(target_trunc, p, m)}"
        )
    nilpotent = _shift_matrix(op.order)
    y_top = uniform_part(op, working)
    current = op
    y_current = y_top
    for level in range(m):
        f = frobenius_quotient_F(y_current, nilpotent, p)
        current = transfer_operator_L1(f, p)
        if level + 1 < m:
            y_current = uniform_part(current, current.trunc)
    h = h_matrix(y_top, p, m)
    return TransferData(p, m, current, h, certified)


@dataclass(frozen=True)
class TransferAudit:
    h_constant_ok: bool
    equation_residual_order: int
    equation_trunc: int
    h_profile: ValuationProfile
    operator_profile: ValuationProfile
    operator_is_mum: bool

    @property
    def ok(self) -> bool:
        return (
            self.h_constant_ok
            and self.equation_residual_order >= self.equation_trunc
            and self.h_profile.is_integral
            and self.operator_profile.is_integral
            and self.operator_is_mum
        )


def transfer_audit(op: DeltaOperator, data: TransferData) -> TransferAudit:
    """Check every TransferData invariant that is decidable at this order."""
    p, m = data.p, data.m
    n = op.order
    q = p**m
    expected = tuple(
        tuple(Fraction(p) ** (m * i) if i == j else _F0 for j in range(n))
        for i in range(n)
    )
    h_constant_ok = data.h.constant_matrix() == expected
    a = op.companion()
    b_sub = data.operator.companion().substitute_power(q)
    check_trunc = min(a.trunc, data.h.trunc, b_sub.trunc)
    residual = (
        data.h.delta().truncate(check_trunc)
        - (a * data.h).truncate(check_trunc)
        + (data.h * b_sub).scale(q).truncate(check_trunc)
    )
    return TransferAudit(
        h_constant_ok,
        residual.residual_order(),
        check_trunc,
        data.h.valuation_profile(p),
        data.operator.p_integrality(p),
        data.operator.is_mum(),
    )


# ---------------------------------------------------------------------------
# Frobenius structures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FrobeniusCandidate:
    p: int
    phi: SeriesMatrix

    @property
    def constant(self):
        return self.phi.constant_matrix()

    @property
    def trunc(self) -> int:
        return self.phi.trunc


@dataclass(frozen=True)
class FrobeniusVerification:
    residual_order: int  # largest M' <= trunc with the equation 0 mod z^M'
    trunc: int
    profile: ValuationProfile
    det_nonzero: bool  # truncation-level surrogate for det(Phi) != 0
    constant_shape_ok: bool

    @property
    def ok(self) -> bool:
        return (
            self.residual_order >= self.trunc
            and self.profile.is_integral
            and self.det_nonzero
            and self.constant_shape_ok
        )


def verify_frobenius(op: DeltaOperator, cand: FrobeniusCandidate) -> FrobeniusVerification:
    """Residual audit of delta(Phi) = A Phi - p Phi A(z^p), never raising:
    all findings are reported as data."""
    p = cand.p
    a = op.companion()
    check_trunc = min(a.trunc, cand.trunc)
    phi = cand.phi.truncate(check_trunc)
    a_cut = a.truncate(check_trunc)
    a_sub = a.substitute_power(p).truncate(check_trunc)
    residual = phi.delta() - a_cut * phi + (phi * a_sub).scale(p)
    return FrobeniusVerification(
        residual.residual_order(),
        check_trunc,
        cand.phi.valuation_profile(p),
        not cand.phi.det().is_zero(),
        constant_shape_ok(cand.constant, p),
    )


def frobenius_from_constant(y: SeriesMatrix, constant_rows, p: int,
                            op: DeltaOperator | None = None) -> FrobeniusCandidate:
    """Phi = Y C Y(z^p)^{-1} for an admissible constant C.

    The construction identity Phi * Y(z^p) = Y C is asserted; when the
    source operator is supplied the full Frobenius equation is verified
    through verify_frobenius as well.
    """
    _require_identity_at_zero(y)
    validate_constant_shape(constant_rows, p)
    trunc = y.trunc
    y_sub = y.substitute_power(p).truncate(trunc)
    c_mat = SeriesMatrix.from_constant(constant_rows, trunc)
    phi = y * c_mat * y_sub.invert()
    assert (phi * y_sub - y * c_mat).residual_order() == trunc
    cand = FrobeniusCandidate(p, phi)
    assert cand.constant == tuple(
        tuple(Fraction(x) for x in row) for row in constant_rows
    )
    if op is not None:
        verification = verify_frobenius(op, cand)
        assert verification.residual_order >= verification.trunc
    return cand


# ---------------------------------------------------------------------------
# fitting the Frobenius constant
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FrobeniusFit:
    found: bool
    constant: tuple | None  # rows of Fractions when found
    gammas: tuple | None
    profile: ValuationProfile  # profile of the best candidate built
    trunc: int
    orders_used: int  # congruence conditions absorbed from this many orders
    unit_pivot: bool


def fit_frobenius_constant(y: SeriesMatrix, p: int,
                           trunc: int | None = None) -> FrobeniusFit:
    """Search the admissible constant family for a p-integral Phi.

    With the pivot fixed at 1, Phi depends affinely on the n-1 free twist
    parameters; p-integrality of every coefficient up to the working order
    is a system of linear congruences mod powers of p, assembled order by
    order and solved exactly.  On an inconsistent system the most recent
    order is dropped (one level of backtracking) until a solvable prefix
    remains.  The contract is one-sided: a returned constant is verified,
    a not-found answer is inconclusive.
    """
    _require_identity_at_zero(y)
    n = y.n
    M = y.trunc if trunc is None else min(trunc, y.trunc)
    y_cut = y.truncate(M)
    y_sub_inv = y_cut.substitute_power(p).truncate(M).invert()

    def phi_of(gammas) -> SeriesMatrix:
        c = SeriesMatrix.from_constant(twisted_rows(p, n, gammas), M)
        return y_cut * c * y_sub_inv

    phi0 = phi_of([_F1] + [_F0] * (n - 1))
    # phi_of is linear in the gammas, so unit vectors give the basis
    basis = [phi_of(_unit_gammas(n, r)) for r in range(1, n)]

    conditions_by_order = _congruence_conditions(phi0, basis, p, M)
    best = None
    for orders_used in range(M, -1, -1):
        rows = [row for k in range(orders_used) for row in conditions_by_order[k]]
        solution = _solve_congruences(rows, n - 1, p)
        if solution is None:
            continue
        gammas = [_F1] + [Fraction(x) for x in solution]
        phi = phi_of(gammas)
        profile = phi.valuation_profile(p)
        candidate = FrobeniusFit(
            profile.is_integral,
            twisted_rows(p, n, gammas) if profile.is_integral else None,
            tuple(gammas) if profile.is_integral else None,
            profile,
            M,
            orders_used,
            True,
        )
        if candidate.found:
            return candidate
        if best is None:
            best = candidate
    # orders_used = 0 always yields the empty system, so `best` is set
    return best


def _unit_gammas(n: int, r: int):
    out = [_F0] * n
    out[r] = _F1
    return out


def _congruence_conditions(phi0: SeriesMatrix, basis, p: int, M: int):
    """Per order k: rows (coeffs mod p^e, rhs mod p^e, e) expressing that
    the order-k coefficient of every entry of phi0 + sum x_r basis_r has
    nonnegative p-adic valuation, given integral unknowns x_r."""
    n = phi0.n
    by_order = []
    for k in range(M):
        rows = []
        for i in range(n):
            for j in range(n):
                b = phi0.entries[i][j].coeffs[k]
                a = [mat.entries[i][j].coeffs[k] for mat in basis]
                vals = [vp(b, p)] + [vp(x, p) for x in a]
                vmin = min(vals)
                if vmin >= 0:
                    continue  # holds for every integral assignment
                e = -int(vmin)
                mod = p**e
                scale = Fraction(p) ** e
                coeffs = [_rational_mod(x * scale, mod) for x in a]
                rhs = (-_rational_mod(b * scale, mod)) % mod
                rows.append((coeffs, rhs, e))
        by_order.append(rows)
    return by_order


def _rational_mod(x: Fraction, mod: int) -> int:
    num, den = x.numerator, x.denominator
    return num * pow(den, -1, mod) % mod


def _solve_congruences(rows, unknowns: int, p: int):
    """Solve linear congruences with per-row moduli p^e over the integers.

    Rows are lifted to the largest modulus and eliminated with minimum-
    valuation pivoting.  Returns an integer solution vector or None.
    """
    if not rows:
        return [0] * unknowns
    e_max = max(e for _, _, e in rows)
    modulus = p**e_max
    lifted = []
    for coeffs, rhs, e in rows:
        lift = p ** (e_max - e)
        lifted.append(([c * lift for c in coeffs], rhs * lift))
    a = [list(c) + [r] for c, r in lifted]
    pivots: list[tuple[int, int]] = []  # (row, col)
    used_rows: set[int] = set()
    for col in range(unknowns):
        pivot_row, pivot_val = None, None
        for r in range(len(a)):
            if r in used_rows:
                continue
            entry = a[r][col] % modulus
            if entry == 0:
                continue
            v = _vp_mod(entry, p, e_max)
            if pivot_val is None or v < pivot_val:
                pivot_row, pivot_val = r, v
        if pivot_row is None:
            continue
        used_rows.add(pivot_row)
        pivots.append((pivot_row, col))
        unit = a[pivot_row][col] // p**pivot_val
        inv_unit = pow(unit, -1, modulus)
        a[pivot_row] = [x * inv_unit % modulus for x in a[pivot_row]]
        # forward elimination only: used pivot rows keep their tails, which
        # the back substitution consumes; touching them here could meet
        # entries of smaller valuation than the pivot
        for r in range(len(a)):
            if r in used_rows:
                continue
            entry = a[r][col] % modulus
            if entry == 0:
                continue
            factor = entry // p**pivot_val
            a[r] = [
                (x - factor * yv) % modulus for x, yv in zip(a[r], a[pivot_row])
            ]
    for r in range(len(a)):
        if r in used_rows:
            continue
        if a[r][-1] % modulus != 0:
            return None
    solution = [0] * unknowns
    for pivot_row, col in reversed(pivots):
        row = a[pivot_row]
        acc = row[-1] % modulus
        for c in range(col + 1, unknowns):
            acc = (acc - row[c] * solution[c]) % modulus
        v = _vp_mod(row[col], p, e_max)
        if acc % p**v != 0:
            return None
        solution[col] = (acc // p**v) % (modulus // p**v)
    return solution


def _vp_mod(x: int, p: int, cap: int) -> int:
    v = 0
    while v < cap and x % p == 0:
        x //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# reduction congruence
# ---------------------------------------------------------------------------


def reduction_congruence_parts(h11: TruncSeries, f: TruncSeries, p: int,
                               m: int) -> bool:
    """h11 * Lambda_p^m(f)(z^{p^m}) == f mod z^{p^m + 1}, plus the forced
    consequences h_k = f_k in Z_p for 0 < k < p^m."""
    q = p**m
    check = min(h11.trunc, f.trunc)
    if check < q + 1:
        raise InsufficientTruncation(
            f"need order {q + 1} coefficients, have {check}"
        )
    lhs = h11 * f.cartier_pullback(p, m)
    d = (lhs - f).truncate(q + 1)
    if not d.is_zero():
        return False
    for k in range(1, q):
        if f.coeffs[k] != h11.coeffs[k] or vp(f.coeffs[k], p) < 0:
            return False
    return True


def reduction_congruence_check(op: DeltaOperator, p: int, m: int,
                               trunc: int | None = None) -> bool:
    """The level-m reduction congruence for op, from freshly computed
    transfer data; implies f_k lies in Z_p for every k < p^m."""
    M = op.trunc if trunc is None else min(trunc, op.trunc)
    if p**m >= M:
        raise InsufficientTruncation(
            f"congruence mod z^{p**m + 1} needs working order > {p**m}"
        )
    data = iterate_transfer(op.truncate(M), p, m)
    f = solve_f(op, M)
    return reduction_congruence_parts(data.h.entries[0][0], f, p, m)
