"""Checking the closed forms against a brute-force paired-mode Fock space."""
import random
from fractions import Fraction

from coboson_stats import (ModeProfile, build_norm_table, check_identities, exchange_table,
                           inner, moment_report, oracle_report, psi, random_rational_profile)
from coboson_stats import fock_oracle as fo

p = ModeProfile((Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)), "skewed")

# |psi_N> = B0^+N |v> lives on subsets of modes; each pair operator commutes,
# so a state is a dict from bitmask to a rational coefficient.
s2 = psi(p, 2)
print("configurations of psi_2:", [sorted(c) for c in s2.configurations()])
print("<psi_2|psi_2> =", inner(s2, s2), " 2(1 - lambda_2) =", 2 * (1 - Fraction(3, 8)))

# Moments straight from operator actions versus the closed forms
t = build_norm_table(exchange_table(p, 5), 3)
ours, oracle = moment_report(t, 2), oracle_report(p, 2)
for name in ("mean_n", "variance", "mandel_q", "coincidence", "g2", "r_term"):
    print(f"{name:12s} closed form {str(getattr(ours, name)):>10s}   oracle {str(getattr(oracle, name)):>10s}")

# D00 is built from B0 and B0^+ by composition and kills the vacuum
print("\nD00|v> is zero:", fo.apply_d00(fo.vacuum(p)).is_zero())

# The whole identity suite on a few random profiles; residuals are exact
rng = random.Random(1)
for i in range(3):
    q = random_rational_profile(6, rng, label=f"random-{i}")
    report = check_identities(q, 6)
    print(f"{q.label}: {len(report.results)} identities, all passed={report.passed}, "
          f"max residual={report.max_residual}")

# A corrupted operator is caught, and the report says where
real = fo.apply_l2_dagger
fo.apply_l2_dagger = lambda s: real(s) * 2
bad = check_identities(p, 3)
fo.apply_l2_dagger = real
print("\nwith L2^+ doubled:", sorted({r.identity for r in bad.failures})[:6], "...")
