"""Statistical signatures of composite bosons driven by Pauli exchange scatterings.

Closed forms for the Mandel parameter and the coincidence ratio g2 of N
cobosons in one state, built on the norm recursion for ``F_N``, together with
a brute-force Fock-space oracle that checks them exactly.
"""
from .errors import (BlockedStateError, CobosonError, IrrationalQuantityError,
                     MissingLambdaError, PrecisionDomainError, ProfileError, QuadratureError)
from .profiles import (ExchangeTable, HydrogenicProfile, ModeProfile, QuadratureSpec,
                       double_factorial, exchange_table, hydrogenic_lambda,
                       hydrogenic_lambda_quadrature, hydrogenic_table, lambda_from_profile,
                       load_profile, parse_profile_json, random_rational_profile, uniform_profile)
from .norm_recursion import NormTable, build_norm_table, delta, elementary_symmetric
from .statistics import (MomentReport, approx_g2, approx_q, baselines, coincidence_moment,
                         d00_moment, g2, g2_two, mandel_q, mean_n, mean_n2, moment_report,
                         r_term, variance)
from .fock_oracle import (CheckReport, FockState, check_identities, inner, oracle_f,
                          oracle_report, psi, verify_profile)

__version__ = "0.1.0"
