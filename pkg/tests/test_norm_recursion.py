import itertools
import math
import random
from fractions import Fraction

import mpmath as mp
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from coboson_stats import (BlockedStateError, ExchangeTable, MissingLambdaError, ModeProfile,
                           PrecisionDomainError, build_norm_table, delta, elementary_symmetric,
                           exchange_table, hydrogenic_table, uniform_profile)
from coboson_stats.norm_recursion import delta_error


def e_by_combinations(p, N):
    return sum((math.prod(c) for c in itertools.combinations(p, N)), Fraction(0))


def test_uniform4_norms():
    table = build_norm_table(exchange_table(uniform_profile(4), 6), 4)
    assert table.f == (1, 1, Fraction(3, 4), Fraction(3, 8), Fraction(3, 32), 0, 0)
    assert table.is_zero(5)
    assert delta(table, 2, 1) == Fraction(-1, 2)
    assert delta(table, 2, 2) == Fraction(-3, 8)


def test_symbolic_low_orders_from_newton_identities():
    """Independent derivation: F_N = N! e_N expressed through power sums with sympy."""
    l2, l3, l4 = sympy.symbols("l2 l3 l4")
    p = {1: sympy.Integer(1), 2: l2, 3: l3, 4: l4}
    e = {0: sympy.Integer(1)}
    for N in range(1, 5):
        e[N] = sympy.expand(sum((-1) ** (n - 1) * e[N - n] * p[n] for n in range(1, N + 1)) / N)
    F = {N: sympy.expand(sympy.factorial(N) * e[N]) for N in e}
    assert F[2] == 1 - l2
    assert F[3] == 1 - 3 * l2 + 2 * l3
    assert F[4] == 1 - 6 * l2 + 8 * l3 + 3 * l2 ** 2 - 6 * l4

    rng = random.Random(3)
    for _ in range(10):
        vals = [Fraction(rng.randint(-50, 50), rng.randint(1, 50)) for _ in range(3)]
        table = build_norm_table(ExchangeTable.from_values([1, *vals, Fraction(1, 7)]), 3)
        subs = dict(zip((l2, l3, l4), (sympy.Rational(v.numerator, v.denominator) for v in vals)))
        for N in (2, 3, 4):
            assert sympy.Rational(table[N].numerator, table[N].denominator) == F[N].subs(subs)


probs = st.lists(st.integers(min_value=1, max_value=20), min_size=1, max_size=7).map(
    lambda w: ModeProfile.from_weights(w, normalize=True))


@settings(max_examples=80, deadline=None)
@given(probs)
def test_recursion_is_newton_identity(profile):
    M = profile.n_modes
    table = build_norm_table(exchange_table(profile, M + 2), M)
    for N in range(M + 3):
        expected = math.factorial(N) * e_by_combinations(profile.probabilities, N)
        assert table[N] == expected
        assert elementary_symmetric(list(profile.probabilities), N) == e_by_combinations(
            profile.probabilities, N)


@settings(max_examples=80, deadline=None)
@given(probs)
def test_norms_decrease_and_deltas_nonpositive(profile):
    M = profile.n_modes
    table = build_norm_table(exchange_table(profile, M + 2), M)
    assert table.monotonic_violations == ()
    for N in range(M + 2):
        assert table[N + 1] <= table[N]
    for N in range(1, M + 1):
        assert delta(table, N, 1) <= 0
        assert delta(table, N, 2) <= 0


def test_non_monotone_hand_table_is_flagged_not_raised():
    # lambda_2 < 0 cannot come from a profile; F_2 = 1 - lambda_2 > F_1
    table = build_norm_table(ExchangeTable.from_values([1, Fraction(-1, 2), 0, 0]), 2)
    assert table[2] == Fraction(3, 2)
    assert 1 in table.monotonic_violations


def test_missing_lambda():
    with pytest.raises(MissingLambdaError):
        build_norm_table(ExchangeTable.from_values([1, Fraction(1, 2)]), 3)


def test_blocked_state():
    table = build_norm_table(exchange_table(uniform_profile(2), 5), 3)
    with pytest.raises(BlockedStateError):
        delta(table, 3, 1)
    assert delta(table, 2, 1) == -1


def test_elementary_limit_norms():
    table = build_norm_table(ExchangeTable.elementary(52), 50)
    assert set(table.f) == {1}
    assert delta(table, 50, 1) == 0 and delta(table, 50, 2) == 0


def _mp_norms(a, top):
    mp.mp.dps = 80
    lam = [None]
    for n in range(1, top + 1):
        m = 4 * n - 2
        pref = 16 * mp.gamma(m + mp.mpf(1) / 2) / (2 * mp.sqrt(mp.pi) * mp.gamma(m + 2))
        lam.append(pref * (64 * mp.pi * mp.mpf(a) ** 3) ** (n - 1))
    f = [mp.mpf(1)]
    for N in range(1, top + 1):
        f.append(mp.fsum((-1) ** (n - 1) * mp.factorial(N - 1) / mp.factorial(N - n) * lam[n] * f[N - n]
                         for n in range(1, N + 1)))
    return f


@pytest.mark.parametrize("a", [0.01, 0.05])
def test_float_recursion_against_mpmath(a):
    table = build_norm_table(hydrogenic_table(a, 62), 60)
    ref = _mp_norms(a, 62)
    for N in range(table.reliable_upto + 1):
        true_rel = abs(mp.mpf(table.log_f[N]) - mp.log(ref[N])) if ref[N] > 0 else 0
        assert float(true_rel) <= max(table.rel_error[N], 1e-15) * 1.01
        if table.rel_error[N] < 1e-6:
            assert float(true_rel) < 1e-9


def test_float_table_matches_rational_profile():
    rng = random.Random(11)
    for _ in range(20):
        w = [rng.randint(1, 9) for _ in range(rng.randint(1, 7))]
        exact = ModeProfile.from_weights(w, normalize=True)
        M = exact.n_modes
        t_exact = build_norm_table(exchange_table(exact, M + 2), M)
        t_float = build_norm_table(exchange_table(exact.as_mode("float"), M + 2), M)
        for N in range(M + 3):
            if t_exact[N] == 0:
                assert t_float.is_zero(N)
            else:
                assert t_float[N] == pytest.approx(float(t_exact[N]), rel=1e-12)
        for N in range(1, M + 1):
            for n in (1, 2):
                err = abs(delta(t_float, N, n) - float(delta(t_exact, N, n)))
                assert err <= delta_error(t_float, N, n) + 1e-15


def test_precision_domain_is_reported():
    table = build_norm_table(hydrogenic_table(0.05, 202), 200)
    last = table.last_reliable_n()
    assert last < 200
    with pytest.raises(PrecisionDomainError) as info:
        delta(table, 200, 1)
    assert info.value.last_reliable_n == last
    delta(table, last, 2)


def test_truly_negative_norm_is_a_hard_error():
    # at a/L = 0.1 the continuum scatterings give F_18 < 0 (checked at 80 digits)
    assert _mp_norms(0.1, 18)[18] < 0
    with pytest.raises(PrecisionDomainError):
        build_norm_table(hydrogenic_table(0.1, 22), 20)


def test_large_n_float_is_finite_in_log_space():
    table = build_norm_table(hydrogenic_table(1e-3, 10_002), 10_000)
    assert table.last_reliable_n() == 10_000
    assert table.f[10_000] >= 0
    assert math.isfinite(table.log_f[10_000])
    assert -1 < delta(table, 10_000, 1) <= 0


def test_delta_order_validated():
    table = build_norm_table(exchange_table(uniform_profile(3), 5), 3)
    with pytest.raises(ValueError):
        delta(table, 1, 3)
