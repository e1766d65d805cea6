"""Normalization factors ``F_N`` of ``<v|B0^N B0^+N|v> = N! F_N``.

``F_N`` follows the alternating recursion

    F_N = sum_{n>=1} (-1)^(n-1) (N-1)!/(N-n)! lambda_n F_{N-n},   F_0 = 1,

which is Newton's identity between power sums and elementary symmetric
polynomials: for a discrete profile ``F_N = N! e_N(p)``.

In float mode the recursion is run in log space (``F_N`` underflows for
large ``N``) and each entry carries a relative round-off bound.  Entries whose
bound reaches 1 are unreliable; queries past the last reliable entry raise
:class:`PrecisionDomainError`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import BlockedStateError, MissingLambdaError, PrecisionDomainError
from .profiles import ExchangeTable

EPS = np.finfo(float).eps


@dataclass(frozen=True)
class NormTable:
    """``F_0 .. F_{n_max+2}`` built from one :class:`ExchangeTable`.

    ``f`` holds the values in the table's mode (floats may underflow to 0;
    ``log_f`` keeps them).  ``rel_error`` is the propagated relative round-off
    bound per entry (all zero in rational mode).  ``reliable_upto`` is the
    largest index such that every entry up to it is trustworthy.
    """

    f: tuple
    lambdas: ExchangeTable
    n_max: int
    log_f: Optional[tuple] = None
    rel_error: Optional[tuple] = None
    reliable_upto: int = 0
    clamped: tuple = ()
    monotonic_violations: tuple = ()

    @property
    def mode(self) -> str:
        return self.lambdas.mode

    def __getitem__(self, N: int):
        return self.f[N]

    def is_zero(self, N: int) -> bool:
        if self.mode == "rational":
            return self.f[N] == 0
        return self.log_f[N] == -math.inf

    def ratio(self, a: int, b: int):
        """``F_a / F_b``; safe against float underflow of the individual entries."""
        if self.is_zero(b):
            raise BlockedStateError(b)
        if self.mode == "rational":
            return self.f[a] / self.f[b]
        if self.is_zero(a):
            return 0.0
        return math.exp(self.log_f[a] - self.log_f[b])

    def require(self, top: int, N: int) -> None:
        """Check entries up to ``top`` exist and are reliable for a query at ``N``."""
        if top >= len(self.f):
            raise MissingLambdaError(
                f"N={N} needs F up to index {top}, table stops at {len(self.f) - 1}")
        if top > self.reliable_upto:
            raise PrecisionDomainError(
                f"N={N} needs F_{top}, beyond the last reliable entry F_{self.reliable_upto}",
                last_reliable_n=max(self.reliable_upto - 2, 0))

    def last_reliable_n(self) -> int:
        """Largest N whose moments (needing F up to N+2) are trustworthy."""
        return min(self.n_max, self.reliable_upto - 2)


def build_norm_table(lambdas: ExchangeTable, n_max: int) -> NormTable:
    """Run the recursion up to ``F_{n_max+2}`` (moments at N need ``F_{N+2}``)."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    top = n_max + 2
    if lambdas.n_max < top:
        raise MissingLambdaError(
            f"norm table up to F_{top} needs lambda_1..lambda_{top}; "
            f"exchange table has {lambdas.n_max}")
    if lambdas.mode == "rational":
        return _build_rational(lambdas, n_max)
    return _build_float(lambdas, n_max)


def _blocked_from(lambdas: ExchangeTable, N: int) -> bool:
    # F_N = N! e_N(p) vanishes identically once N exceeds the occupied modes
    return lambdas.occupied_modes is not None and N > lambdas.occupied_modes


def _build_rational(lambdas: ExchangeTable, n_max: int) -> NormTable:
    top = n_max + 2
    nonzero = [n for n in range(1, top + 1) if lambdas[n] != 0]
    f = [Fraction(1)]
    for N in range(1, top + 1):
        total = Fraction(0)
        for n in nonzero:
            if n > N:
                break
            # falling factorial (N-1)!/(N-n)!
            coeff = math.perm(N - 1, n - 1)
            term = coeff * lambdas[n] * f[N - n]
            total = total + term if n % 2 else total - term
        f.append(total)
    if lambdas.occupied_modes is not None:
        for N in range(lambdas.occupied_modes + 1, top + 1):
            assert f[N] == 0, f"Pauli blocking violated at N={N}: F_N={f[N]}"
    violations = tuple(N for N in range(top) if f[N + 1] > f[N])
    if violations and lambdas.from_profile:
        raise AssertionError(f"F_N not monotone for a profile-derived table at N={violations}")
    return NormTable(tuple(f), lambdas, n_max, rel_error=(0,) * (top + 1),
                     reliable_upto=top, monotonic_violations=violations)


def _build_float(lambdas: ExchangeTable, n_max: int) -> NormTable:
    top = n_max + 2
    log_lam = np.asarray(lambdas.log_lambdas[:top], dtype=float)
    n_all = np.arange(1, top + 1)
    nz = log_lam > -np.inf
    n_nz = n_all[nz]
    log_lam_nz = log_lam[nz]
    sign_nz = np.where(n_nz % 2 == 1, 1.0, -1.0)
    log_int = np.log(n_all.astype(float))

    log_f = np.full(top + 1, np.nan)
    log_f[0] = 0.0
    rel = np.full(top + 1, np.inf)
    rel[0] = 0.0
    log_ff = np.zeros(top + 1)
    clamped = []
    reliable_upto = top

    for N in range(1, top + 1):
        if _blocked_from(lambdas, N):
            log_f[N:] = -np.inf
            rel[N:] = 0.0
            break
        k = np.searchsorted(n_nz, N, side="right")
        n = n_nz[:k]
        # log((N-1)!/(N-n)!) = sum_{j=1}^{n-1} log(N-j)
        if N > 1:
            np.cumsum(log_int[N - 2::-1], out=log_ff[1:N])
        prev = log_f[N - n]
        log_t = log_ff[n - 1] + log_lam_nz[:k] + prev
        live = log_t > -np.inf
        if not live.any():
            log_f[N] = -np.inf
            rel[N] = 0.0
            continue
        peak = log_t[live].max()
        # terms below exp underflow contribute nothing representable
        keep = log_t > peak - 745.0
        mag = np.exp(log_t[keep] - peak)
        s = math.fsum((sign_nz[:k][keep] * mag).tolist())
        # per-term error: propagated from F_{N-n} plus rounding of the log pieces
        term_err = rel[N - n][keep] + EPS * (
            4.0 + n[keep] + np.abs(log_ff[n[keep] - 1]) + np.abs(log_lam_nz[:k][keep])
            + np.abs(prev[keep]) + abs(peak))
        bound = float(np.dot(mag, term_err)) + EPS * abs(s)
        if s > 0:
            log_f[N] = peak + math.log(s)
            rel[N] = bound / s
        elif -s <= bound:
            clamped.append(N)
            log_f[N] = -np.inf
        else:
            raise PrecisionDomainError(
                f"F_{N} computed negative ({s!r} x e^{peak:.6g}) beyond its round-off bound; "
                "the exchange scatterings do not describe a normalizable state at this N",
                last_reliable_n=max(N - 3, 0))
        if not rel[N] < 1.0:
            # round-off swamps F_N: stop, everything from here on is unreliable
            reliable_upto = N - 1
            log_f[N:] = np.nan
            rel[N:] = np.inf
            break

    with np.errstate(invalid="ignore"):
        f = tuple(float(x) for x in np.exp(log_f))
    violations = []
    for N in range(reliable_upto):
        if log_f[N + 1] == -np.inf:
            continue
        step = log_f[N + 1] - log_f[N]
        if step > rel[N] + rel[N + 1] + 4 * EPS:
            violations.append(N)
    if violations and lambdas.from_profile:
        raise AssertionError(f"F_N not monotone for a profile-derived table at N={violations}")
    return NormTable(f, lambdas, n_max, log_f=tuple(float(x) for x in log_f),
                     rel_error=tuple(float(x) for x in rel), reliable_upto=reliable_upto,
                     clamped=tuple(clamped), monotonic_violations=tuple(violations))


def delta(table: NormTable, N: int, n: int):
    """``Delta_N^(n) = (F_{N+n} - F_{N+n-1}) / F_N`` for ``n`` in {1, 2}."""
    if n not in (1, 2):
        raise ValueError(f"delta order must be 1 or 2, got {n}")
    if N < 0:
        raise ValueError(f"N must be non-negative, got {N}")
    table.require(N + n, N)
    if table.is_zero(N):
        raise BlockedStateError(N)
    if table.mode == "rational":
        return (table.f[N + n] - table.f[N + n - 1]) / table.f[N]
    if n == 1:
        if table.is_zero(N + 1):
            return -1.0
        return math.expm1(table.log_f[N + 1] - table.log_f[N])
    return table.ratio(N + 2, N) - table.ratio(N + 1, N)


def delta_error(table: NormTable, N: int, n: int) -> float:
    """Absolute round-off bound on :func:`delta` (0 in rational mode)."""
    if table.mode == "rational":
        return 0.0
    rel = table.rel_error
    hi = table.ratio(N + n, N) * (rel[N + n] + rel[N])
    lo = table.ratio(N + n - 1, N) * (rel[N + n - 1] + rel[N])
    return hi + lo + 2 * EPS


def elementary_symmetric(values, N: int):
    """``e_N(values)`` by the product expansion ``prod_k (1 + p_k t)``."""
    if N < 0:
        return 0
    coeffs = [values[0] ** 0 if values else 1] + [0] * N
    for p in values:
        for j in range(N, 0, -1):
            coeffs[j] = coeffs[j] + p * coeffs[j - 1]
    return coeffs[N]
