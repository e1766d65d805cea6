"""Exchange scatterings lambda_n: discrete profiles and the hydrogenic closed form."""
import math
from fractions import Fraction

import numpy as np

from coboson_stats import (ModeProfile, exchange_table, hydrogenic_lambda,
                           hydrogenic_lambda_quadrature, uniform_profile)

# A discrete profile is a list of occupation probabilities p_k.
# lambda_n is just the n-th power sum, kept exact as a Fraction.
skewed = ModeProfile((Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)), "skewed")
lam = exchange_table(skewed, 5)
print("skewed profile:", [str(lam[n]) for n in range(1, 6)])

# Uniform profiles are the degenerate case lambda_3 = lambda_2^2
u = exchange_table(uniform_profile(4), 3)
print("uniform:4  lambda_3 - lambda_2^2 =", u[3] - u[2] ** 2)

# The hydrogenic ground state gives lambda_n in closed form.  The first two
# constants are 33 pi/2 and 4199 pi^2/8 in units of (a_B/L)^3.
a = 0.1
print(f"\nlambda_2 / (a/L)^3 = {hydrogenic_lambda(2, a) / a**3:.12f}  (33 pi/2 = {33 * math.pi / 2:.12f})")
print(f"lambda_3 / (a/L)^6 = {hydrogenic_lambda(3, a) / a**6:.12f}  (4199 pi^2/8 = {4199 * math.pi**2 / 8:.12f})")

# Cross-check against adaptive quadrature of the momentum integral
print("\n n   closed form          quadrature           rel. diff")
for n in range(1, 7):
    c = hydrogenic_lambda(n, a)
    q = hydrogenic_lambda_quadrature(n, a)
    print(f"{n:2d}   {c:.12e}   {q:.12e}   {abs(q / c - 1):.1e}")

# lambda_n drops geometrically: each extra exchange costs about 64 pi (a/L)^3
ratios = np.array([hydrogenic_lambda(n + 1, a) / hydrogenic_lambda(n, a) for n in range(1, 10)])
print("\nlambda_{n+1}/lambda_n:", np.round(ratios, 4))
print("64 pi (a/L)^3       =", round(64 * math.pi * a**3, 4))
