"""Mandel Q and g2 of N cobosons, exact versus the small-density guesses."""
from coboson_stats import (ExchangeTable, PrecisionDomainError, build_norm_table, exchange_table,
                           hydrogenic_table, moment_report, uniform_profile)

# Elementary bosons first: a number state has Q = -1 and g2 = 1 - 1/N.
t = build_norm_table(ExchangeTable.elementary(12), 10)
for N in (1, 2, 5, 10):
    r = moment_report(t, N)
    print(f"elementary N={N:2d}: Q={r.mandel_q}  g2={r.g2}")

# A small discrete profile gives exact rational answers.
u4 = exchange_table(uniform_profile(4), 6)
r = moment_report(build_norm_table(u4, 4), 2)
print(f"\nuniform:4, N=2: mean={r.mean_n} var={r.variance} Q={r.mandel_q} g2={r.g2}")

# Hydrogenic cobosons.  The exact pipeline runs the full norm recursion in
# log space; the approximations are shown next to it, never substituted.
a = 0.01
N_max = 100
table = build_norm_table(hydrogenic_table(a, N_max + 2), N_max)
print(f"\nhydrogenic a/L={a}")
print("   N        Q+1 exact     Q+1 approx     g2 exact          g2 (a)          g2 (b)")
for N in (2, 5, 10, 20, 50, 100):
    r = moment_report(table, N)
    print(f"{N:4d}  {r.mandel_q + 1:13.6e}  {r.approx_q + 1:13.6e}  {r.g2:.12f}  "
          f"{r.approx_g2_a:.12f}  {r.approx_g2_b:.12f}")

# Variant a crosses over to bunching (g2 > 1) once (N-1) lambda_2 is large
# enough; the exact value stays anti-bunched and variant b follows it.
r = moment_report(table, 100)
dev = abs(r.g2 - r.baseline_g2)
print(f"\nN=100: |b - exact| / |exact - (1-1/N)| = {abs(r.approx_g2_b - r.g2) / dev:.3f}")
print(f"N=100: |a - exact| / |exact - (1-1/N)| = {abs(r.approx_g2_a - r.g2) / dev:.1f}")

# The alternating recursion cancels catastrophically as the density grows.
# Past the point where round-off swamps F_N the library refuses to answer.
dense = build_norm_table(hydrogenic_table(0.05, 202), 200)
print(f"\na/L=0.05: last reliable N = {dense.last_reliable_n()}")
try:
    moment_report(dense, 200)
except PrecisionDomainError as exc:
    print("N=200:", exc)
