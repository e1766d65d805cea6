"""Relative-motion profiles and the Pauli exchange scatterings derived from them.

A coboson in state 0 is described by the occupation probabilities
``p_k = |<k|nu_0>|^2`` of its fermion-pair modes.  The exchange scattering
between ``n`` cobosons 0 is the power sum ``lambda_n = sum_k p_k**n``.

Two numeric modes are supported everywhere: ``"rational"`` (exact
:class:`fractions.Fraction` arithmetic) and ``"float"`` (binary floating point,
with compensated summation).  The mode is fixed when a profile or table is
built.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from scipy import integrate, special

from .errors import MissingLambdaError, ProfileError, QuadratureError

MODES = ("rational", "float")
FLOAT_NORM_TOL = 1e-12

# Denominator power of the hydrogenic momentum profile. The commonly printed
# value 2 is not normalizable to lambda_1 = 1; power 4 is.
HYDROGENIC_PROFILE_POWER = 4


def _check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"unknown numeric mode {mode!r}; expected one of {MODES}")
    return mode


def _to_scalar(value, mode: str):
    """Convert a weight (number, Fraction, Decimal or "p/q" string) to the mode's scalar."""
    if isinstance(value, bool):
        raise ProfileError(f"weight {value!r} is not a number")
    if isinstance(value, str):
        try:
            value = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ProfileError(f"cannot parse weight {value!r}") from exc
    if isinstance(value, float) and not math.isfinite(value):
        raise ProfileError(f"weight {value!r} is not finite")
    if isinstance(value, Decimal) and not value.is_finite():
        raise ProfileError(f"weight {value!r} is not finite")
    if mode == "rational":
        if isinstance(value, float):
            # str() round-trips the shortest decimal, which is what the user typed
            return Fraction(str(value))
        try:
            return Fraction(value)
        except TypeError as exc:
            raise ProfileError(f"weight {value!r} is not a number") from exc
    try:
        return float(value)
    except TypeError as exc:
        raise ProfileError(f"weight {value!r} is not a number") from exc


def scalar_mode(x) -> str:
    return "rational" if isinstance(x, (Fraction, int)) and not isinstance(x, bool) else "float"


@dataclass(frozen=True)
class ModeProfile:
    """Occupation probabilities ``p_k`` of the retained fermion-pair modes."""

    probabilities: tuple
    label: str = ""

    def __post_init__(self):
        probs = tuple(self.probabilities)
        if len(probs) < 1:
            raise ProfileError("a profile needs at least one mode")
        mode = "rational" if all(isinstance(p, (Fraction, int)) for p in probs) else "float"
        probs = tuple(_to_scalar(p, mode) for p in probs)
        if any(p < 0 for p in probs):
            raise ProfileError("probabilities must be non-negative")
        if mode == "rational":
            if sum(probs) != 1:
                raise ProfileError(f"probabilities sum to {sum(probs)}, not 1")
        else:
            total = math.fsum(probs)
            if abs(total - 1.0) > FLOAT_NORM_TOL:
                raise ProfileError(f"probabilities sum to {total!r}, not 1 within {FLOAT_NORM_TOL}")
        object.__setattr__(self, "probabilities", probs)

    @classmethod
    def from_weights(cls, weights: Sequence, label: str = "", normalize: bool = False,
                     mode: str = "rational") -> "ModeProfile":
        """Build a profile from raw weights, optionally normalizing them.

        Without ``normalize`` the weights must already sum to one; silently
        rescaling would hide data errors.
        """
        _check_mode(mode)
        values = [_to_scalar(w, mode) for w in weights]
        if not values:
            raise ProfileError("a profile needs at least one mode")
        if any(v < 0 for v in values):
            raise ProfileError("weights must be non-negative")
        if normalize:
            total = sum(values) if mode == "rational" else math.fsum(values)
            if total <= 0:
                raise ProfileError("weights sum to zero; cannot normalize")
            values = [v / total for v in values]
        return cls(tuple(values), label)

    @property
    def mode(self) -> str:
        return scalar_mode(self.probabilities[0])

    @property
    def n_modes(self) -> int:
        return len(self.probabilities)

    @property
    def occupied_modes(self) -> int:
        """Number of modes with non-zero weight; F_N vanishes for N beyond it."""
        return sum(1 for p in self.probabilities if p != 0)

    def as_mode(self, mode: str) -> "ModeProfile":
        _check_mode(mode)
        if mode == self.mode:
            return self
        if mode == "float":
            return ModeProfile(tuple(float(p) for p in self.probabilities), self.label)
        raise ProfileError("cannot convert a float profile to rational mode exactly")


def uniform_profile(M: int, mode: str = "rational") -> ModeProfile:
    """``M`` equally weighted modes."""
    _check_mode(mode)
    if not isinstance(M, int) or M < 1:
        raise ProfileError(f"uniform profile needs M >= 1, got {M!r}")
    p = Fraction(1, M) if mode == "rational" else 1.0 / M
    return ModeProfile((p,) * M, f"uniform:{M}")


def random_rational_profile(M: int, rng: random.Random, max_weight: int = 9,
                            label: Optional[str] = None) -> ModeProfile:
    """Random exact profile with integer weights in ``1..max_weight``, normalized."""
    weights = [rng.randint(1, max_weight) for _ in range(M)]
    return ModeProfile.from_weights(weights, label or f"random:{weights}", normalize=True)


def lambda_from_profile(profile: ModeProfile, n: int):
    """Exchange scattering ``lambda_n = sum_k p_k**n`` in the profile's numeric mode."""
    if n < 1:
        raise ValueError(f"lambda_n needs n >= 1, got {n}")
    if profile.mode == "rational":
        return sum(p ** n for p in profile.probabilities)
    return math.fsum(p ** n for p in profile.probabilities)


# -- hydrogenic (3D exciton / hydrogen atom) profile ---------------------------------

def double_factorial(m: int) -> int:
    """Exact ``m!!`` with ``(-1)!! = 0!! = 1``."""
    if m < -1:
        raise ValueError(f"double factorial undefined for {m}")
    result = 1
    while m > 1:
        result *= m
        m -= 2
    return result


def _hydrogenic_prefactor_ratio(n: int) -> float:
    # 16 (8n-5)!! / (8n-2)!!, exactly rounded for moderate n
    if n <= 200:
        return float(Fraction(16 * double_factorial(8 * n - 5), double_factorial(8 * n - 2)))
    return math.exp(_log_hydrogenic_prefactor(n))


def _log_hydrogenic_prefactor(n: int) -> float:
    # (2j-1)!! = Gamma(j + 1/2) 2^j / sqrt(pi),  (2j)!! = 2^j j!
    j_odd = (8 * n - 4) // 2
    j_even = (8 * n - 2) // 2
    return (math.log(16) + math.lgamma(j_odd + 0.5) - 0.5 * math.log(math.pi)
            - math.lgamma(j_even + 1) + (j_odd - j_even) * math.log(2))


def hydrogenic_lambda(n: int, a_over_L: float) -> float:
    """Closed-form exchange scattering for the 3D hydrogenic ground state.

    ``lambda_n = 16 (8n-5)!!/(8n-2)!! * (64 pi (a_B/L)^3)**(n-1)``.
    Evaluated in log space once the power would under- or overflow.
    """
    if n < 1:
        raise ValueError(f"lambda_n needs n >= 1, got {n}")
    if not a_over_L > 0:
        raise ValueError(f"a_over_L must be positive, got {a_over_L!r}")
    base = 64 * math.pi * a_over_L ** 3
    log_power = (n - 1) * math.log(base)
    if abs(log_power) < 600:
        return _hydrogenic_prefactor_ratio(n) * base ** (n - 1)
    return math.exp(_log_hydrogenic_prefactor(n) + log_power)


def hydrogenic_log_lambdas(n_max: int, a_over_L: float) -> np.ndarray:
    """``log(lambda_n)`` for ``n = 1..n_max`` (index 0 holds n = 1)."""
    if not a_over_L > 0:
        raise ValueError(f"a_over_L must be positive, got {a_over_L!r}")
    n = np.arange(1, n_max + 1)
    j_odd = 4 * n - 2
    j_even = 4 * n - 1
    log_pref = (math.log(16) + special.gammaln(j_odd + 0.5) - 0.5 * math.log(math.pi)
                - special.gammaln(j_even + 1) - math.log(2))
    # exact prefactors where cheap; gammaln loses a few ulps at large arguments
    for i in range(min(n_max, 200)):
        log_pref[i] = math.log(_hydrogenic_prefactor_ratio(i + 1))
    return log_pref + (n - 1) * math.log(64 * math.pi * a_over_L ** 3)


def hydrogenic_occupation(k_aB, a_over_L: float):
    """Momentum-space occupation ``|<k|nu_0>|^2`` as a function of ``k a_B``."""
    k_aB = np.asarray(k_aB, dtype=float)
    return 64 * np.pi * a_over_L ** 3 / (1 + k_aB ** 2) ** HYDROGENIC_PROFILE_POWER


@dataclass(frozen=True)
class QuadratureSpec:
    """Settings for the radial momentum integral.

    ``cutoff`` bounds ``k a_B``; ``limit`` is the maximum number of adaptive
    subintervals.
    """

    cutoff: float = 1e3
    rel_tol: float = 1e-10
    limit: int = 200


def hydrogenic_lambda_quadrature(n: int, a_over_L: float,
                                 quad: QuadratureSpec = QuadratureSpec()) -> float:
    """``lambda_n`` from ``(L/2pi)^3 int d^3k |<k|nu_0>|^(2n)`` by adaptive quadrature.

    With ``x = k a_B = tan(t)`` the radial integrand ``x^2 (1+x^2)^(-4n)``
    becomes the smooth ``sin(t)^2 cos(t)^(8n-4)`` on ``[0, atan(cutoff)]``.
    """
    if n < 1:
        raise ValueError(f"lambda_n needs n >= 1, got {n}")
    if not a_over_L > 0:
        raise ValueError(f"a_over_L must be positive, got {a_over_L!r}")
    p = 2 * HYDROGENIC_PROFILE_POWER * n - 4

    def integrand(t):
        return math.sin(t) ** 2 * math.cos(t) ** p

    value, abserr, info = integrate.quad(
        integrand, 0.0, math.atan(quad.cutoff), epsabs=0.0, epsrel=quad.rel_tol,
        limit=quad.limit, full_output=1)[:3]
    if not abserr <= quad.rel_tol * abs(value):
        raise QuadratureError(
            f"radial integral for n={n} did not converge: estimate {value!r}, "
            f"error {abserr!r} exceeds rel_tol {quad.rel_tol}")
    # (L/2pi)^3 * 4pi * a_B^-3 * (64 pi (a_B/L)^3)^n * value
    log_scale = n * math.log(64 * math.pi) - math.log(2 * math.pi ** 2) \
        + 3 * (n - 1) * math.log(a_over_L)
    return math.exp(log_scale) * value


@dataclass(frozen=True)
class HydrogenicProfile:
    """3D hydrogenic coboson with extension ratio ``a_B / L``."""

    a_over_L: float
    dimension: int = field(default=3, init=False)

    def __post_init__(self):
        if not (isinstance(self.a_over_L, (int, float)) and self.a_over_L > 0
                and math.isfinite(self.a_over_L)):
            raise ProfileError(f"a_over_L must be a positive finite number, got {self.a_over_L!r}")

    def eta(self, N: int) -> float:
        """Density parameter ``N (a_B/L)^3``."""
        return N * self.a_over_L ** self.dimension

    def lambda_n(self, n: int) -> float:
        return hydrogenic_lambda(n, self.a_over_L)

    @property
    def label(self) -> str:
        return f"hydrogenic:{self.a_over_L!r}"


# -- exchange tables -------------------------------------------------------------------

@dataclass(frozen=True)
class ExchangeTable:
    """Exchange scatterings ``lambda_1 .. lambda_nmax`` in one numeric mode.

    ``table[n]`` returns ``lambda_n`` (1-based).  ``log_lambdas`` is populated
    in float mode so the norm recursion can work below the float range.
    ``occupied_modes`` is known for discrete profiles and fixes exact Pauli
    blocking of the norms.
    """

    lambdas: tuple
    mode: str
    source: str = ""
    from_profile: bool = False
    occupied_modes: Optional[int] = None
    a_over_L: Optional[float] = None
    lambda_max: Optional[int] = None
    log_lambdas: Optional[tuple] = None

    def __post_init__(self):
        _check_mode(self.mode)
        if len(self.lambdas) < 1:
            raise MissingLambdaError("exchange table is empty")
        lam1 = self.lambdas[0]
        if self.mode == "rational" and lam1 != 1:
            raise ProfileError(f"lambda_1 must equal 1 exactly, got {lam1}")
        if self.mode == "float" and abs(lam1 - 1.0) > FLOAT_NORM_TOL:
            raise ProfileError(f"lambda_1 must equal 1 within {FLOAT_NORM_TOL}, got {lam1!r}")
        if self.log_lambdas is None and self.mode == "float":
            logs = tuple(math.log(x) if x > 0 else -math.inf for x in self.lambdas)
            object.__setattr__(self, "log_lambdas", logs)

    def __getitem__(self, n: int):
        if n < 1:
            raise IndexError("exchange scatterings are indexed from n = 1")
        if n > len(self.lambdas):
            raise MissingLambdaError(f"lambda_{n} requested but table stops at n={len(self.lambdas)}")
        return self.lambdas[n - 1]

    def __len__(self):
        return len(self.lambdas)

    @property
    def n_max(self) -> int:
        return len(self.lambdas)

    @classmethod
    def from_values(cls, values: Sequence, mode: Optional[str] = None,
                    source: str = "explicit") -> "ExchangeTable":
        """Hand-supplied ``lambda_1, lambda_2, ...``; not assumed to derive from a profile."""
        if mode is None:
            mode = "rational" if all(isinstance(v, (Fraction, int)) for v in values) else "float"
        return cls(tuple(_to_scalar(v, mode) for v in values), mode, source)

    @classmethod
    def elementary(cls, n_max: int, mode: str = "rational") -> "ExchangeTable":
        """Elementary-boson limit: ``lambda_1 = 1`` and every exchange term zero."""
        one, zero = (Fraction(1), Fraction(0)) if mode == "rational" else (1.0, 0.0)
        return cls((one,) + (zero,) * (n_max - 1), mode, "elementary")


def exchange_table(profile: ModeProfile, n_max: int) -> ExchangeTable:
    """``lambda_1 .. lambda_nmax`` of a discrete profile."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    lambdas = tuple(lambda_from_profile(profile, n) for n in range(1, n_max + 1))
    logs = None
    if profile.mode == "float":
        # float lambdas underflow long before their logs do
        logp = [math.log(p) for p in profile.probabilities if p > 0]
        logs = []
        for n in range(1, n_max + 1):
            terms = [n * lp for lp in logp]
            top = max(terms)
            logs.append(top + math.log(math.fsum(math.exp(t - top) for t in terms)))
        logs[0] = 0.0
        lambdas = (1.0,) + lambdas[1:] if abs(lambdas[0] - 1.0) <= FLOAT_NORM_TOL else lambdas
        logs = tuple(logs)
    return ExchangeTable(lambdas, profile.mode, profile.label, from_profile=True,
                         occupied_modes=profile.occupied_modes, log_lambdas=logs)


def hydrogenic_table(a_over_L: float, n_max: int, lambda_max: Optional[int] = None) -> ExchangeTable:
    """Float-mode table from the hydrogenic closed form.

    ``lambda_max`` zeroes ``lambda_n`` for ``n > lambda_max``; it exists for
    performance experiments only and is recorded on the table.
    """
    HydrogenicProfile(a_over_L)
    logs = hydrogenic_log_lambdas(n_max, a_over_L)
    logs[0] = 0.0
    if lambda_max is not None:
        logs[lambda_max:] = -np.inf
    lambdas = tuple(float(np.exp(x)) for x in logs)
    return ExchangeTable(lambdas, "float", f"hydrogenic:{a_over_L!r}", from_profile=True,
                         a_over_L=float(a_over_L), lambda_max=lambda_max,
                         log_lambdas=tuple(float(x) for x in logs))


# -- profile files -----------------------------------------------------------------------

def parse_profile_json(text: str, mode: str = "rational") -> ModeProfile:
    """Parse ``{"label": str, "weights": [...], "normalize": bool}``."""
    _check_mode(mode)

    def reject_constant(name):
        raise ProfileError(f"non-finite weight {name} in profile file")

    try:
        data = json.loads(text, parse_float=Decimal, parse_constant=reject_constant)
    except json.JSONDecodeError as exc:
        raise ProfileError(f"profile file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ProfileError("profile file must hold a JSON object")
    weights = data.get("weights")
    if not isinstance(weights, list) or not weights:
        raise ProfileError("profile file needs a non-empty 'weights' list")
    label = data.get("label", "")
    if not isinstance(label, str):
        raise ProfileError("'label' must be a string")
    normalize = data.get("normalize", False)
    if not isinstance(normalize, bool):
        raise ProfileError("'normalize' must be a boolean")
    for w in weights:
        if isinstance(w, str) and mode == "float":
            raise ProfileError(f"string weight {w!r} is only accepted in rational mode")
        if not isinstance(w, (str, int, Decimal)) or isinstance(w, bool):
            raise ProfileError(f"weight {w!r} is not a number")
    return ModeProfile.from_weights(weights, label, normalize=normalize, mode=mode)


def load_profile(path, mode: str = "rational") -> ModeProfile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ProfileError(f"cannot read profile file {path}: {exc}") from exc
    return parse_profile_json(text, mode)
