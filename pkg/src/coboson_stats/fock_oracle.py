"""Brute-force many-body oracle on the paired-mode Fock space.

The coboson in state 0 binds fermion ``a`` in mode ``k`` to fermion ``b`` in
the same mode with amplitude ``c_k = sqrt(p_k)``::

    B0^+ = sum_k c_k a_k^+ b_k^+

Pair operators ``a_k^+ b_k^+`` commute among themselves and square to zero,
so reachable states live on subsets ``S`` of modes (stored as bitmasks) with
no sign bookkeeping.

Exactness: every state reached from the vacuum by the operators here has
amplitude ``r(S) * prod_{k in S} c_k`` with ``r(S)`` rational whenever the
``p_k`` are.  :class:`FockState` stores these reduced coefficients ``r(S)``,
so square roots never appear.  Only ``B0`` and ``B0^+`` are primitive;
``D00``, ``L2^+``, ``L3^+`` and their adjoints are built by composing them
through commutators.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from .errors import BlockedStateError, IrrationalQuantityError, ProfileError
from .norm_recursion import build_norm_table, elementary_symmetric
from .profiles import ModeProfile, exchange_table, lambda_from_profile
from .statistics import MomentReport, approx_g2, approx_q, baselines, moment_report

MAX_MODES = 24
MAX_CHECK_MODES = 12


@dataclass(frozen=True)
class FockState:
    """Sparse paired-mode state.

    ``coeffs`` maps a mode bitmask ``S`` to the reduced coefficient ``r(S)``;
    the physical amplitude is ``r(S) * prod_{k in S} sqrt(p_k)``.
    """

    weights: tuple
    coeffs: Dict[int, object] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.weights) > MAX_MODES:
            raise ProfileError(f"oracle is limited to {MAX_MODES} modes, got {len(self.weights)}")
        full = (1 << len(self.weights)) - 1
        pruned = {}
        for mask, r in self.coeffs.items():
            if mask & ~full:
                raise ValueError(f"configuration {mask:b} uses undeclared modes")
            if r != 0:
                pruned[mask] = r
        object.__setattr__(self, "coeffs", pruned)

    @property
    def n_modes(self) -> int:
        return len(self.weights)

    def __add__(self, other: "FockState") -> "FockState":
        out = dict(self.coeffs)
        for mask, r in other.coeffs.items():
            out[mask] = out.get(mask, 0) + r
        return FockState(self.weights, out)

    def __sub__(self, other: "FockState") -> "FockState":
        return self + other * -1

    def __mul__(self, scalar) -> "FockState":
        return FockState(self.weights, {m: r * scalar for m, r in self.coeffs.items()})

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.coeffs

    def configurations(self) -> List[frozenset]:
        return sorted((frozenset(k for k in range(self.n_modes) if m >> k & 1)
                       for m in self.coeffs), key=sorted)

    def amplitude_squared(self, modes) -> object:
        mask = _mask(modes)
        return self.coeffs.get(mask, 0) ** 2 * _weight(self.weights, mask)

    def amplitude(self, modes):
        """Physical amplitude of one configuration; rejected when irrational."""
        mask = _mask(modes)
        r = self.coeffs.get(mask, 0)
        if r == 0:
            return r
        w = _weight(self.weights, mask)
        if isinstance(w, Fraction):
            num, den = math.isqrt(w.numerator), math.isqrt(w.denominator)
            if num * num != w.numerator or den * den != w.denominator:
                raise IrrationalQuantityError(
                    f"amplitude of {sorted(_modes(mask))} involves sqrt({w}), which is irrational")
            return r * Fraction(num, den)
        return r * math.sqrt(w)


def _mask(modes) -> int:
    mask = 0
    for k in modes:
        mask |= 1 << k
    return mask


def _modes(mask: int):
    k = 0
    while mask:
        if mask & 1:
            yield k
        mask >>= 1
        k += 1


def _weight(weights, mask: int):
    w = weights[0] ** 0
    for k in _modes(mask):
        w = w * weights[k]
    return w


def _weights(profile) -> tuple:
    if isinstance(profile, ModeProfile):
        return profile.probabilities
    return tuple(profile)


def vacuum(profile) -> FockState:
    weights = _weights(profile)
    return FockState(weights, {0: weights[0] ** 0})


def basis_state(profile, modes, coeff=1) -> FockState:
    """The configuration ``modes`` with reduced coefficient ``coeff``."""
    return FockState(_weights(profile), {_mask(modes): coeff})


# -- primitive operators -----------------------------------------------------------------

def apply_b0_dagger(state: FockState) -> FockState:
    """``B0^+``: add each empty mode ``k`` with amplitude ``c_k``."""
    out: Dict[int, object] = {}
    M = state.n_modes
    for mask, r in state.coeffs.items():
        for k in range(M):
            bit = 1 << k
            if not mask & bit:
                out[mask | bit] = out.get(mask | bit, 0) + r
    return FockState(state.weights, out)


def apply_b0(state: FockState) -> FockState:
    """``B0``: remove each occupied mode ``k`` with amplitude ``c_k``."""
    out: Dict[int, object] = {}
    p = state.weights
    for mask, r in state.coeffs.items():
        for k in _modes(mask):
            sub = mask & ~(1 << k)
            out[sub] = out.get(sub, 0) + p[k] * r
    return FockState(state.weights, out)


# -- composite operators ------------------------------------------------------------------

def apply_d00(state: FockState) -> FockState:
    """``D00 = 1 - B0 B0^+ + B0^+ B0``."""
    return state - apply_b0(apply_b0_dagger(state)) + apply_b0_dagger(apply_b0(state))


def _half_commutator(x: Callable, y: Callable, state: FockState) -> FockState:
    half = Fraction(1, 2) if isinstance(next(iter(state.weights)), Fraction) else 0.5
    return (x(y(state)) - y(x(state))) * half


def apply_l2_dagger(state: FockState) -> FockState:
    """``L2^+ = (1/2) [D00, B0^+]``."""
    return _half_commutator(apply_d00, apply_b0_dagger, state)


def apply_l3_dagger(state: FockState) -> FockState:
    """``L3^+ = (1/2) [D00, L2^+]``."""
    return _half_commutator(apply_d00, apply_l2_dagger, state)


def apply_l2(state: FockState) -> FockState:
    """Adjoint of ``L2^+``: ``(1/2) [B0, D00]``."""
    return _half_commutator(apply_b0, apply_d00, state)


def apply_l3(state: FockState) -> FockState:
    """Adjoint of ``L3^+``: ``(1/2) [L2, D00]``."""
    return _half_commutator(apply_l2, apply_d00, state)


def apply_number(state: FockState) -> FockState:
    """``n = B0^+ B0``."""
    return apply_b0_dagger(apply_b0(state))


def apply_power(op: Callable, state: FockState, times: int) -> FockState:
    for _ in range(times):
        state = op(state)
    return state


def inner(a: FockState, b: FockState):
    """``<a|b>``; amplitudes are real so no conjugation is needed."""
    if a.weights != b.weights:
        raise ValueError("states belong to different profiles")
    if len(a.coeffs) > len(b.coeffs):
        a, b = b, a
    total = a.weights[0] * 0
    for mask, r in a.coeffs.items():
        s = b.coeffs.get(mask)
        if s is not None:
            total += r * s * _weight(a.weights, mask)
    return total


def psi(profile, N: int) -> FockState:
    """``|psi_N> = B0^+N |v>`` (unnormalized), or the zero state for ``N < 0``."""
    weights = _weights(profile)
    if N < 0:
        return FockState(weights, {})
    state = apply_power(apply_b0_dagger, vacuum(weights), N)
    occupied = sum(1 for p in weights if p != 0)
    expected = math.comb(occupied, N)
    live = sum(1 for m in state.coeffs if all(weights[k] != 0 for k in _modes(m)))
    assert live == expected, f"|psi_{N}> has {live} configurations, expected C({occupied},{N})"
    return state


def expectation(state: FockState, op: Callable):
    """``<state|op|state> / <state|state>``."""
    norm = inner(state, state)
    if norm == 0:
        raise BlockedStateError(None, "expectation in the zero state")
    return inner(state, op(state)) / norm


# -- norms ---------------------------------------------------------------------------------

def oracle_f(profile, N: int):
    """``F_N = <psi_N|psi_N> / N!``, cross-checked against ``N! e_N(p)``."""
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    weights = _weights(profile)
    state = psi(weights, N)
    by_state = inner(state, state) / math.factorial(N)
    by_symmetric = elementary_symmetric(list(weights), N) * math.factorial(N)
    if isinstance(by_state, Fraction):
        if by_state != by_symmetric:
            raise AssertionError(f"oracle norm {by_state} != N! e_N = {by_symmetric} at N={N}")
    elif not math.isclose(by_state, by_symmetric, rel_tol=1e-9, abs_tol=1e-300):
        raise AssertionError(f"oracle norm {by_state!r} != N! e_N = {by_symmetric!r} at N={N}")
    return by_state


# -- statistics by definition --------------------------------------------------------------

def oracle_report(profile: ModeProfile, N: int) -> MomentReport:
    """Statistics of ``|psi_N>`` computed directly from operator actions."""
    weights = _weights(profile)
    state = psi(weights, N)
    norm = inner(state, state)
    if norm == 0:
        raise BlockedStateError(N)
    b_state = apply_b0(state)
    n_state = apply_b0_dagger(b_state)
    bb_state = apply_b0(b_state)
    mean = inner(b_state, b_state) / norm
    mean2 = inner(n_state, n_state) / norm
    var = mean2 - mean * mean
    coin = inner(bb_state, bb_state) / norm
    d00 = inner(b_state, apply_d00(b_state)) / norm
    r = appendix_r(weights, N) if N >= 2 else None
    l2 = lambda_from_profile(profile, 2)
    l3 = lambda_from_profile(profile, 3)
    g2_base, q_base = baselines(N, profile.mode)
    return MomentReport(
        N=N, mean_n=mean, mean_n2=mean2, variance=var, mandel_q=var / mean - 1,
        coincidence=coin, g2=coin / (mean * mean), r_term=r, d00_moment=d00,
        approx_q=approx_q(l2, l3, N), approx_g2_a=approx_g2(l2, N, "a"),
        approx_g2_b=approx_g2(l2, N, "b"), approx_g2_large=approx_g2(l2, N, "large_sample"),
        baseline_g2=g2_base, baseline_q=q_base)


def appendix_r(profile, N: int):
    """``R = <psi_N| L2^+ L2^+ |psi_{N-2}> / <psi_N|psi_N>``."""
    weights = _weights(profile)
    top = psi(weights, N)
    return inner(top, apply_l2_dagger(apply_l2_dagger(psi(weights, N - 2)))) / inner(top, top)


# -- identity checks -----------------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    identity: str
    N: int
    passed: bool
    residual: object

    def as_dict(self) -> dict:
        return {"identity": self.identity, "N": self.N,
                "status": "pass" if self.passed else "fail", "residual": str(self.residual)}


@dataclass
class CheckReport:
    """Outcome of an identity batch; failures are data, never exceptions."""

    results: List[CheckResult] = field(default_factory=list)
    label: str = ""

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> List[CheckResult]:
        return [r for r in self.results if not r.passed]

    @property
    def max_residual(self):
        return max((abs(r.residual) for r in self.results), default=0)

    def extend(self, other: "CheckReport", prefix: str = "") -> None:
        for r in other.results:
            self.results.append(CheckResult(prefix + r.identity, r.N, r.passed, r.residual))

    def to_json_list(self) -> list:
        return [r.as_dict() for r in self.results]

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_json_list(), **kwargs)


class _Checker:
    def __init__(self, exact: bool, tol: float):
        self.exact = exact
        self.tol = tol
        self.report = CheckReport()

    def _ok(self, residual, scale=1) -> bool:
        if self.exact:
            return residual == 0
        return abs(residual) <= self.tol * max(1, abs(scale))

    def scalars(self, name, N, lhs, rhs):
        res = lhs - rhs
        self.report.results.append(CheckResult(name, N, self._ok(res, rhs), res))

    def states(self, name, N, lhs: FockState, rhs: FockState):
        diff = lhs - rhs
        res = inner(diff, diff)
        scale = inner(rhs, rhs) if not self.exact else 1
        self.report.results.append(CheckResult(name, N, self._ok(res, scale), res))


def generic_state(profile, seed: int = 0) -> FockState:
    """Seeded state with a non-zero rational coefficient on every configuration."""
    weights = _weights(profile)
    rng = random.Random(seed)
    exact = isinstance(weights[0], Fraction)
    coeffs = {}
    for mask in range(1 << len(weights)):
        num = rng.choice([-1, 1]) * rng.randint(1, 9)
        coeffs[mask] = Fraction(num, rng.randint(1, 5)) if exact else num / rng.randint(1, 5)
    return FockState(weights, coeffs)


def check_identities(profile: ModeProfile, N_max: int, tol: float = 1e-9) -> CheckReport:
    """Check the operator and moment identities of the coboson formalism.

    Exact (zero residual) in rational mode; ``tol`` applies to float profiles.
    State identities report ``<d|d>`` for the difference state ``d``.
    """
    weights = _weights(profile)
    M = len(weights)
    if M > MAX_CHECK_MODES:
        raise ProfileError(f"identity checks are limited to {MAX_CHECK_MODES} modes, got {M}")
    if not 0 <= N_max <= M:
        raise ProfileError(f"N_max must lie in 0..{M}, got {N_max}")
    exact = profile.mode == "rational"
    one = Fraction(1) if exact else 1.0
    chk = _Checker(exact, tol)
    chk.report.label = profile.label

    lam = exchange_table(profile, N_max + 4)
    table = build_norm_table(lam, N_max + 2)
    l2 = lam[2] if lam.n_max >= 2 else one * 0
    l3, l4 = lam[3], lam[4]

    states = [psi(weights, N) for N in range(N_max + 3)]

    def ps(N):
        return states[N] if N >= 0 else FockState(weights, {})

    norms = [inner(s, s) for s in states]
    f_oracle = [norms[N] / math.factorial(N) for N in range(N_max + 3)]

    def d(N, n):
        return (f_oracle[N + n] - f_oracle[N + n - 1]) / f_oracle[N]

    # operator-level identities on a generic state
    g = generic_state(weights)
    chk.states("commutator_deviation", 0,
               apply_b0(apply_b0_dagger(g)) - apply_b0_dagger(apply_b0(g)) + apply_d00(g), g)
    chk.states("d00_vacuum", 0, apply_d00(vacuum(weights)), FockState(weights, {}))
    chk.scalars("lambda2_contraction", 0,
                inner(vacuum(weights), apply_b0(apply_l2_dagger(vacuum(weights)))), l2)
    chk.scalars("lambda3_contraction", 0,
                inner(vacuum(weights), apply_b0(apply_l3_dagger(vacuum(weights)))), l3)
    chk.scalars("adjoint_b0", 0, inner(g, apply_b0(g * 2)), inner(apply_b0_dagger(g), g * 2))
    chk.scalars("adjoint_l2", 0, inner(g, apply_l2(g)), inner(apply_l2_dagger(g), g))
    chk.scalars("adjoint_l3", 0, inner(g, apply_l3(g)), inner(apply_l3_dagger(g), g))
    # running powers B0^+^k applied to g and to the fixed images of g
    dg = apply_d00(g)
    l2g = apply_l2_dagger(g)
    pw = {"g": g, "bg": apply_b0(g), "g-dg": g - dg, "l2g": l2g, "dg": dg}
    prev2 = pw
    for N in range(1, N_max + 1):
        prev = dict(pw)
        pw = {k: apply_b0_dagger(v) for k, v in pw.items()}
        # pw[k] = B^+^N x,  prev[k] = B^+^(N-1) x
        lhs = apply_b0(pw["g"]) - pw["bg"]
        rhs = prev["g-dg"] * N
        if N >= 2:
            rhs = rhs - prev2["l2g"] * (N * (N - 1))
        chk.states("b0_through_creation_power", N, lhs, rhs)
        chk.states("d00_through_creation_power", N, apply_d00(pw["g"]) - pw["dg"], prev["l2g"] * (2 * N))
        prev2 = prev

    for N in range(0, N_max + 1):
        chk.scalars("norm_recursion", N, table[N], f_oracle[N])

    for N in range(1, N_max + 1):
        chk.states("b0_on_psi", N, apply_b0(ps(N)),
                   ps(N - 1) * N - apply_l2_dagger(ps(N - 2)) * (N * (N - 1)))
        chk.states("number_on_psi", N, apply_number(ps(N)),
                   ps(N) + apply_b0(ps(N + 1)) * (one * (N - 1) / (N + 1)))
        chk.states("d00_on_psi_via_l2", N, apply_d00(ps(N)), apply_l2_dagger(ps(N - 1)) * (2 * N))
        chk.states("d00_on_psi_via_b0", N, apply_d00(ps(N)),
                   ps(N) * 2 - apply_b0(ps(N + 1)) * (one * 2 / (N + 1)))
        chk.states("l2_on_psi", N, apply_l2(ps(N)),
                   ps(N - 1) * (N * l2) - apply_l3_dagger(ps(N - 2)) * (N * (N - 1)))

    if N_max >= 2:
        s2 = states[2]
        chk.scalars("two_body_number_element", 2, inner(s2, apply_number(s2)), 4 * (1 - 2 * l2 + l3))
        chk.scalars("two_body_number_squared", 2, inner(apply_number(s2), apply_number(s2)),
                    4 * (2 - 6 * l2 + l2 * l2 + 5 * l3 - 2 * l4))
        chk.scalars("two_body_norm", 2, norms[2], 2 * (1 - l2))

    for N in range(1, N_max + 1):
        if norms[N] == 0:
            continue
        s = states[N]
        d1, d2 = d(N, 1), d(N, 2)
        mean = expectation(s, apply_number)
        mean2 = inner(apply_number(s), apply_number(s)) / norms[N]
        b_s = apply_b0(s)
        bdb = inner(b_s, apply_d00(b_s)) / norms[N]
        coin = inner(apply_b0(b_s), apply_b0(b_s)) / norms[N]
        chk.scalars("mean_n", N, mean, d1 * (N - 1) + N)
        chk.scalars("mean_n2", N, mean2, d1 * (N * N - 1) + d2 * N * (N - 1) ** 2 / (N + 1) + N * N)
        chk.scalars("variance", N, mean2 - mean * mean,
                    (-d1 * (1 + d1) + d2 * N / (N + 1)) * (N - 1) ** 2)
        chk.scalars("coincidence_split", N, coin, mean2 - mean + bdb)
        # <B+ D B> = <D B+ B> - 2 <L2+ B>
        dbb = expectation(s, lambda x: apply_d00(apply_number(x)))
        l2b = expectation(s, lambda x: apply_l2_dagger(apply_b0(x)))
        chk.scalars("d00_moment_commuted", N, bdb, dbb - 2 * l2b)
        chk.scalars("d00_number_moment", N, dbb, -2 * d1 - d2 * 2 * N * (N - 1) / (N + 1))
        chk.scalars("d00_moment_delta_form", N, bdb, -2 * (l2 + d1 + d2 * (N - 1) ** 2 / (N + 1)))
        if N < 2:
            chk.scalars("l2_b0_moment", N, l2b, -d1)
            continue
        r_app = inner(s, apply_l2_dagger(apply_l2_dagger(ps(N - 2)))) / norms[N]
        r_closed = d2 / (N * (N + 1)) - (l2 + d1) / (N * (N - 1))
        chk.scalars("r_closed_form", N, r_app, r_closed)
        chk.scalars("l2_b0_moment", N, l2b, -d1 - r_app * N * (N - 1))
        chk.scalars("d00_moment_r_split", N, bdb, -d2 * 2 * N * (N - 1) / (N + 1) + 2 * N * (N - 1) * r_app)
        chk.scalars("d00_moment_r_form", N, bdb, -2 * N * (N - 1) * (d2 / (N + 1) - r_app))
        chk.scalars("coincidence_closed_form", N, coin,
                    (1 + d1 + d2 * (N - 3) / (N + 1) + 2 * r_app) * N * (N - 1))
        top = inner(ps(N - 1), apply_l3(ps(N)))
        low = inner(ps(N - 2), apply_l3(ps(N - 1)))
        chk.scalars("r_via_l3", N, r_app,
                    l2 / (N - 1) * (f_oracle[N - 1] - f_oracle[N]) / f_oracle[N]
                    + (top - N * low) / norms[N])
        chk.scalars("l3_matrix_element", N, low,
                    l2 / (N - 1) * norms[N - 1] - norms[N] / (N * N * (N - 1))
                    + norms[N + 1] / (N * N * (N * N - 1)))
    return chk.report


def compare_reports(exact: MomentReport, oracle: MomentReport, tol: float = 0.0) -> Dict[str, object]:
    """Per-field differences between a closed-form and an oracle report."""
    fields = ("mean_n", "mean_n2", "variance", "mandel_q", "coincidence", "g2", "d00_moment", "r_term")
    out = {}
    for name in fields:
        a, b = getattr(exact, name), getattr(oracle, name)
        if a is None or b is None:
            continue
        out[name] = a - b
    return out


def verify_profile(profile: ModeProfile, N_max: Optional[int] = None) -> CheckReport:
    """Identity suite plus closed-form/oracle agreement of every statistic."""
    M = profile.n_modes
    N_max = M if N_max is None else N_max
    report = check_identities(profile, N_max)
    report.label = profile.label
    exact = profile.mode == "rational"
    lam = exchange_table(profile, N_max + 2)
    table = build_norm_table(lam, N_max)
    for N in range(2, N_max + 1):
        if table.is_zero(N):
            continue
        diffs = compare_reports(moment_report(table, N), oracle_report(profile, N))
        for name, res in diffs.items():
            ok = res == 0 if exact else abs(res) <= 1e-9
            report.results.append(CheckResult(f"oracle_{name}", N, ok, res))
    return report
