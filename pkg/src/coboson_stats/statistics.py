"""Closed-form statistics of ``|psi_N> = B0^+N |v>``.

Every quantity is expressed through two normalized norm differences,
``Delta_N^(1)`` and ``Delta_N^(2)`` (see :func:`norm_recursion.delta`), plus
``lambda_2``.  Results are exact Fractions when the norm table is rational.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import BlockedStateError
from .norm_recursion import NormTable, delta, delta_error

G2_VARIANTS = ("a", "b", "large_sample")


def _ratio(a: int, b: int, like):
    """``a/b`` as a Fraction when ``like`` is exact, else as a float."""
    if isinstance(like, (Fraction, int)) and not isinstance(like, float):
        return Fraction(a, b)
    return a / b


def _exact(x):
    # plain ints would turn divisions into floats
    return Fraction(x) if isinstance(x, int) else x


def _deltas(table: NormTable, N: int):
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    return delta(table, N, 1), delta(table, N, 2)


def mean_n(table: NormTable, N: int):
    """``<n>_N = N + (N-1) Delta_N^(1)``."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    return delta(table, N, 1) * (N - 1) + N


def mean_n_ratio_form(table: NormTable, N: int):
    """``<n>_N = 1 + (N-1) F_{N+1}/F_N``, the other printed form of :func:`mean_n`."""
    table.require(N + 1, N)
    return table.ratio(N + 1, N) * (N - 1) + 1


def mean_n2(table: NormTable, N: int):
    """``<n^2>_N = N^2 + (N^2-1) Delta^(1) + N (N-1)^2/(N+1) Delta^(2)``."""
    d1, d2 = _deltas(table, N)
    return d1 * (N * N - 1) + d2 * N * (N - 1) ** 2 / (N + 1) + N * N


def variance(table: NormTable, N: int):
    """``(N-1)^2 [-Delta^(1)(1 + Delta^(1)) + N/(N+1) Delta^(2)]``.

    Algebraically equal to ``mean_n2 - mean_n**2`` but without the cancellation
    of two O(N^2) numbers.
    """
    d1, d2 = _deltas(table, N)
    return (-d1 * (1 + d1) + d2 * N / (N + 1)) * (N - 1) ** 2


def variance_error(table: NormTable, N: int) -> float:
    """Absolute round-off bound on :func:`variance` (0 in rational mode)."""
    if table.mode == "rational":
        return 0.0
    d1, d2 = _deltas(table, N)
    e1, e2 = delta_error(table, N, 1), delta_error(table, N, 2)
    eps = 2.0 ** -52
    prop = abs(1 + 2 * d1) * e1 + N / (N + 1) * e2
    rounding = 4 * eps * (abs(d1) * (1 + abs(d1)) + abs(d2))
    return float((N - 1) ** 2 * (prop + rounding))


def mandel_q(table: NormTable, N: int):
    """``Q_N = var / <n> - 1``."""
    m = mean_n(table, N)
    if m == 0:
        raise BlockedStateError(N, f"mean occupation vanishes at N={N}")
    return variance(table, N) / m - 1


def r_term(table: NormTable, lambda2, N: int):
    """``R = Delta^(2) / (N(N+1)) - (lambda_2 + Delta^(1)) / (N(N-1))``."""
    if N < 2:
        raise ValueError(f"R is defined for N >= 2, got {N}")
    d1, d2 = _deltas(table, N)
    return d2 / (N * (N + 1)) - (lambda2 + d1) / (N * (N - 1))


def d00_moment(table: NormTable, lambda2, N: int):
    """``<B0^+ D00 B0>_N = -2 [lambda_2 + Delta^(1) + (N-1)^2/(N+1) Delta^(2)]``."""
    d1, d2 = _deltas(table, N)
    return -2 * (lambda2 + d1 + d2 * (N - 1) ** 2 / (N + 1))


def d00_moment_r_form(table: NormTable, lambda2, N: int):
    """Second printed form ``-2 N (N-1) (Delta^(2)/(N+1) - R)``; needs N >= 2."""
    d2 = delta(table, N, 2)
    return -2 * N * (N - 1) * (d2 / (N + 1) - r_term(table, lambda2, N))


def coincidence_moment(table: NormTable, lambda2, N: int):
    """``<B0^+2 B0^2>_N = N(N-1) [1 + Delta^(1) + (N-3)/(N+1) Delta^(2) + 2R]``.

    For ``N = 1`` the pair annihilator kills the state, so the value is 0.
    """
    d1, d2 = _deltas(table, N)
    if N == 1:
        return d1 * 0
    bracket = 1 + d1 + d2 * (N - 3) / (N + 1) + 2 * r_term(table, lambda2, N)
    return bracket * N * (N - 1)


def g2(table: NormTable, lambda2, N: int):
    """Normalized coincidence ratio ``<B0^+2 B0^2>_N / <n>_N^2``."""
    m = mean_n(table, N)
    if m == 0:
        raise BlockedStateError(N, f"mean occupation vanishes at N={N}")
    return coincidence_moment(table, lambda2, N) / (m * m)


def g2_two(lambda2, lambda3):
    """Exact two-coboson value ``(1/2)(1-lambda_2)^3 / (1 - 2 lambda_2 + lambda_3)^2``."""
    lambda2, lambda3 = _exact(lambda2), _exact(lambda3)
    den = 1 - 2 * lambda2 + lambda3
    if den == 0:
        raise ZeroDivisionError("1 - 2 lambda_2 + lambda_3 vanishes")
    return (1 - lambda2) ** 3 / (2 * den * den)


def approx_q(lambda2, lambda3, N: int):
    """Small-density Mandel parameter ``-1 + (N-1)^2 (lambda_3 - lambda_2^2)``."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    return (lambda3 - lambda2 * lambda2) * (N - 1) ** 2 - 1


def approx_g2(lambda2, N: int, variant: str):
    """Small-density ``g2`` guesses.

    ``"a"``: ``(1 - 1/N)(1 + (N-1) lambda_2)``, which bunches once
    ``(N-1) lambda_2 > 1/(N-1)``; ``"b"``: ``1 + (-1 + (N-1) lambda_2)/N``;
    ``"large_sample"``: ``(1 - 1/N)(1 + lambda_2)``.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    lambda2 = _exact(lambda2)
    base = 1 - _ratio(1, N, lambda2)
    if variant == "a":
        return base * (1 + lambda2 * (N - 1))
    if variant == "b":
        return 1 + (lambda2 * (N - 1) - 1) / N
    if variant == "large_sample":
        return base * (1 + lambda2)
    raise ValueError(f"unknown g2 approximation {variant!r}; expected one of {G2_VARIANTS}")


def large_sample_bracket(lambda2, N: int):
    """Limit ``1 - (2N-3) lambda_2`` of the bracket in the coincidence moment."""
    return 1 - lambda2 * (2 * N - 3)


def baselines(N: int, mode: str = "rational"):
    """Elementary-boson number-state values ``(g2, Q) = (1 - 1/N, -1)``."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if mode == "rational":
        return 1 - Fraction(1, N), Fraction(-1)
    return 1 - 1 / N, -1.0


@dataclass(frozen=True)
class MomentReport:
    """All statistics of the N-coboson state, exact and approximate, side by side.

    ``variance_error`` is the float-mode round-off bound on ``variance``; when
    the variance does not exceed it, ``variance_interval`` gives the
    interval it is known to lie in.
    """

    N: int
    mean_n: object
    mean_n2: object
    variance: object
    mandel_q: object
    coincidence: object
    g2: object
    r_term: object
    d00_moment: object
    approx_q: object
    approx_g2_a: object
    approx_g2_b: object
    approx_g2_large: object
    baseline_g2: object
    baseline_q: object
    eta: Optional[float] = None
    variance_error: Optional[float] = None
    variance_interval: Optional[tuple] = None

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def moment_report(table: NormTable, N: int, eta: Optional[float] = None) -> MomentReport:
    """Evaluate every statistic at ``N`` from one norm table."""
    lam = table.lambdas
    l2 = lam[2] if lam.n_max >= 2 else lam[1] * 0
    l3 = lam[3] if lam.n_max >= 3 else lam[1] * 0
    if eta is None and lam.a_over_L is not None:
        eta = N * lam.a_over_L ** 3
    m = mean_n(table, N)
    var = variance(table, N)
    coin = coincidence_moment(table, l2, N)
    var_err = interval = None
    if table.mode == "float":
        var_err = variance_error(table, N)
        if abs(var) <= var_err:
            interval = (var - var_err, var + var_err)
    g2_base, q_base = baselines(N, table.mode)
    return MomentReport(
        N=N,
        mean_n=m,
        mean_n2=mean_n2(table, N),
        variance=var,
        mandel_q=var / m - 1,
        coincidence=coin,
        g2=coin / (m * m),
        r_term=r_term(table, l2, N) if N >= 2 else None,
        d00_moment=d00_moment(table, l2, N),
        approx_q=approx_q(l2, l3, N),
        approx_g2_a=approx_g2(l2, N, "a"),
        approx_g2_b=approx_g2(l2, N, "b"),
        approx_g2_large=approx_g2(l2, N, "large_sample"),
        baseline_g2=g2_base,
        baseline_q=q_base,
        eta=eta,
        variance_error=var_err,
        variance_interval=interval,
    )
