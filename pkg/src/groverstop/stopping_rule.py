"""Constructive stopping rule for the M-vs-K discrimination problem.

Given a triple with 0 < M < K < N/2, small gamma = theta_K/theta_M, and the
size condition sqrt(K) < 16*(gamma-1)^2*sqrt(N), there is an odd iteration
count l = p*s with

    |l*theta_K/(4*pi) - p - 1/4| < 2*(gamma - 1)
    |l*theta_M/(4*pi) - p|       <    gamma - 1
    l <= 4*sqrt(N)/(sqrt(K) - sqrt(M))

where p is the nearest odd integer to 1/(4*(gamma-1)) and s the nearest odd
integer to 4*pi/theta_M.  This module builds that rule and certifies the
inequalities numerically.  All inequality checks are exact floating-point
comparisons: the bounds have real slack at desk scale and hidden tolerances
would mask regressions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core_model import (
    GroverAngles,
    ProblemInstance,
    angles_of,
    failure_probabilities,
)

__all__ = [
    "Applicability",
    "StoppingRule",
    "CertificateReport",
    "NotApplicable",
    "DegenerateM",
    "GammaTooLarge",
    "DEFAULT_EPSILON",
    "check_applicability",
    "gamma_upper_bound",
    "nearest_odd",
    "construct_rule",
    "certify",
]

# The paper's worked error threshold: sin^2(2*pi/12) = 1/4.
DEFAULT_EPSILON = 1.0 / 12.0


class NotApplicable(ValueError):
    """The instance fails an applicability flag and strict mode was requested."""


class DegenerateM(ValueError):
    """M = 0: gamma is undefined; use the plain-Grover search path instead."""


class GammaTooLarge(ValueError):
    """gamma - 1 > 1/4, outside the construction's assumed range (strict mode)."""


@dataclass(frozen=True)
class Applicability:
    ordering_ok: bool  # M < K < N/2
    size_condition_ok: bool  # sqrt(K) < 16*(gamma-1)^2*sqrt(N)
    gamma_small_ok: bool  # gamma - 1 <= 1/4
    epsilon_bound: float | None  # minimal eps with K < (1 + eps/(2*sqrt(2)))^2 * M

    @property
    def all_ok(self) -> bool:
        return self.ordering_ok and self.size_condition_ok and self.gamma_small_ok


@dataclass(frozen=True)
class StoppingRule:
    p: int
    s: int
    l: int  # = p*s, odd
    m: int  # = (l-1)//2 iterations before measuring
    residual_K: float  # |l*theta_K/(4*pi) - p - 1/4|
    residual_M: float  # |l*theta_M/(4*pi) - p|
    l_bound: float  # 4*sqrt(N)/(sqrt(K)-sqrt(M))
    m_bound: float  # 2*sqrt(N)/(sqrt(K)-sqrt(M))


@dataclass(frozen=True)
class CertificateReport:
    """Numerical pass/fail of every inequality the rule is supposed to satisfy."""

    epsilon: float
    error_bound: float  # sin^2(2*pi*epsilon)
    fail_K: float
    fail_M: float
    l_odd: bool
    residual_K_ok: bool  # residual_K < 2*(gamma-1)
    residual_M_ok: bool  # residual_M < gamma-1
    epsilon_covers_gamma: bool  # 2*(gamma-1) <= epsilon
    fail_K_ok: bool  # fail_K < sin^2(2*pi*epsilon)
    fail_M_ok: bool
    l_within_bound: bool  # l <= l_bound

    @property
    def certified(self) -> bool:
        return (
            self.l_odd
            and self.residual_K_ok
            and self.residual_M_ok
            and self.epsilon_covers_gamma
            and self.fail_K_ok
            and self.fail_M_ok
            and self.l_within_bound
        )


def check_applicability(instance: ProblemInstance) -> Applicability:
    """Evaluate every precondition flag of the constructive rule; never raises."""
    angles = angles_of(instance)
    ordering_ok = instance.strict_regime
    if angles.gamma is None:
        return Applicability(
            ordering_ok=ordering_ok,
            size_condition_ok=False,
            gamma_small_ok=False,
            epsilon_bound=None,
        )
    excess = angles.gamma - 1.0
    size_condition_ok = math.sqrt(instance.K) < 16.0 * excess**2 * math.sqrt(instance.N)
    return Applicability(
        ordering_ok=ordering_ok,
        size_condition_ok=size_condition_ok,
        gamma_small_ok=excess <= 0.25,
        epsilon_bound=2.0 * math.sqrt(2.0) * (math.sqrt(instance.K / instance.M) - 1.0),
    )


def gamma_upper_bound(instance: ProblemInstance) -> float:
    """Certified strict upper bound sqrt(2)*(sqrt(K/M) - 1) on gamma - 1."""
    if instance.M == 0:
        raise DegenerateM("gamma is undefined for M = 0")
    return math.sqrt(2.0) * (math.sqrt(instance.K / instance.M) - 1.0)


def nearest_odd(x: float) -> int:
    """Odd integer nearest to x; exact ties (x an even integer) break downward.

    The smaller odd neighbor means a smaller l = p*s, hence fewer oracle calls.
    """
    lower = 2 * math.floor((x - 1.0) / 2.0) + 1
    upper = lower + 2
    return lower if x - lower <= upper - x else upper


def _iteration_bounds(instance: ProblemInstance) -> tuple[float, float]:
    gap = math.sqrt(instance.K) - math.sqrt(instance.M)
    root_n = math.sqrt(instance.N)
    return 2.0 * root_n / gap, 4.0 * root_n / gap


def construct_rule(instance: ProblemInstance, best_effort: bool = False) -> StoppingRule:
    """Build the stopping rule (p, s, l, m) with its inequality residuals.

    Strict mode (the default) demands every applicability flag; best-effort
    emits the construction regardless and leaves judgment to ``certify``.
    M = 0 is always refused: the construction needs gamma.
    """
    if instance.M == 0:
        raise DegenerateM(
            "M = 0 has no gamma; run the plain-Grover minimal-l search instead"
        )
    app = check_applicability(instance)
    if not best_effort:
        if not (app.ordering_ok and app.size_condition_ok):
            failed = "ordering" if not app.ordering_ok else "size_condition"
            raise NotApplicable(f"applicability flag failed: {failed}")
        if not app.gamma_small_ok:
            raise GammaTooLarge("gamma - 1 > 1/4; retry with best_effort or search")

    angles = angles_of(instance)
    assert angles.gamma is not None
    excess = angles.gamma - 1.0
    p = nearest_odd(1.0 / (4.0 * excess))
    s = nearest_odd(4.0 * math.pi / angles.theta_M)
    l = p * s
    four_pi = 4.0 * math.pi
    m_bound, l_bound = _iteration_bounds(instance)
    return StoppingRule(
        p=p,
        s=s,
        l=l,
        m=(l - 1) // 2,
        residual_K=abs(l * angles.theta_K / four_pi - p - 0.25),
        residual_M=abs(l * angles.theta_M / four_pi - p),
        l_bound=l_bound,
        m_bound=m_bound,
    )


def certify(
    rule: StoppingRule,
    instance: ProblemInstance,
    epsilon: float = DEFAULT_EPSILON,
) -> CertificateReport:
    """Check every inequality of the construction against this instance.

    Purely a reporting operation; a rule that fails some check still yields a
    report with the corresponding flags false.
    """
    angles = angles_of(instance)
    if angles.gamma is None:
        raise DegenerateM("cannot certify against an instance with M = 0")
    excess = angles.gamma - 1.0
    error_bound = math.sin(2.0 * math.pi * epsilon) ** 2
    fails = failure_probabilities(rule.l, angles) if rule.l % 2 == 1 else None
    if fails is None:
        # Even l is a malformed rule; compute the values anyway, without the warning.
        fail_K = math.cos(0.5 * rule.l * angles.theta_K) ** 2
        fail_M = math.sin(0.5 * rule.l * angles.theta_M) ** 2
    else:
        fail_K, fail_M = fails.fail_K, fails.fail_M
    return CertificateReport(
        epsilon=epsilon,
        error_bound=error_bound,
        fail_K=fail_K,
        fail_M=fail_M,
        l_odd=rule.l % 2 == 1,
        residual_K_ok=rule.residual_K < 2.0 * excess,
        residual_M_ok=rule.residual_M < excess,
        epsilon_covers_gamma=2.0 * excess <= epsilon,
        fail_K_ok=fail_K < error_bound,
        fail_M_ok=fail_M < error_bound,
        l_within_bound=rule.l <= rule.l_bound,
    )
