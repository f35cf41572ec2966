"""Instance-level transforms: gcd reduction, database padding, iteration bounds.

* Proportional triples (nM, nK, nN) have identical angles, so only triples
  without a common divisor need separate treatment.
* When K = a*M with the ratio too close for the constructive rule, padding the
  database with r*N artificial elements (r*M of them marked) shifts gamma into
  the applicable range.  The padding here is virtual: no array is materialized,
  only the transformed triple is returned.
* Closed-form iteration bounds, including the special K = M+1 forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core_model import ProblemInstance, angles_of, make_instance

__all__ = [
    "PaddedInstance",
    "IterationBounds",
    "PremiseViolated",
    "reduce_common_divisor",
    "pad_for_ratio",
    "iteration_bound",
]


class PremiseViolated(ValueError):
    """sqrt(M/N) >= (2*epsilon/3)^2: the padding chain's premise fails."""


@dataclass(frozen=True)
class PaddedInstance:
    """Result of padding (M, a*M, N) by r*N artificial elements, r*M marked.

    The certification fields record the chain that makes the padded triple
    applicable: gamma' - 1 is at least sqrt((r+a)/(r+1)) - 1, and under the
    premise sqrt(M/N) < (2*epsilon/3)^2 the padded triple passes the size
    condition sqrt(K'/N') < 16*(gamma'-1)^2.
    """

    r: int
    M_prime: int
    K_prime: int
    N_prime: int
    original: ProblemInstance
    gamma_prime: float
    gamma_prime_lower: float  # sqrt((r+a)/(r+1)) - 1
    gamma_gap_ok: bool  # gamma' - 1 >= gamma_prime_lower
    size_condition_ok: bool  # sqrt(K'/N') < 16*(gamma'-1)^2
    m_bound_padded: float  # 2*sqrt(N')/(sqrt(K')-sqrt(M'))

    @property
    def padded(self) -> ProblemInstance:
        return make_instance(self.N_prime, self.M_prime, self.K_prime)


@dataclass(frozen=True)
class IterationBounds:
    m_bound: float  # 2*sqrt(N)/(sqrt(K)-sqrt(M))
    l_bound: float  # 4*sqrt(N)/(sqrt(K)-sqrt(M))
    # Present only when K = M+1 and M >= 1:
    m_bound_successor: float | None = None  # 4*sqrt((M+1)*N)
    successor_premise_ok: bool | None = None  # sqrt((M+1)/N) < (4/(3M))^2


def reduce_common_divisor(M: int, K: int, N: int) -> tuple[int, int, int]:
    """Divide the triple by gcd(M, K, N); the angles are unchanged."""
    make_instance(N, M, K)
    g = math.gcd(M, K, N)
    return M // g, K // g, N // g


def minimal_padding(a: float, epsilon: float) -> int:
    """Minimal r with r + 1 > (a-1)*sqrt(2)/epsilon.

    That condition forces K'/M' = (r+a)/(r+1) below (1 + epsilon/(2*sqrt(2)))^2,
    which is what the epsilon-calculus of the stopping rule needs.
    """
    target = (a - 1.0) * math.sqrt(2.0) / epsilon
    r = math.floor(target)
    if r + 1 <= target:
        r += 1
    return max(r, 0)


def pad_for_ratio(
    M: int,
    N: int,
    a: float = 2.0,
    epsilon: float = 1.0 / 12.0,
) -> PaddedInstance:
    """Pad (M, a*M, N) so the shrunken ratio K'/M' admits the constructive rule.

    Requires M >= 1, a*M integral with a*M <= N/2, epsilon in (0, 1), and the
    premise sqrt(M/N) < (2*epsilon/3)^2 (otherwise PremiseViolated).
    """
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if a <= 1.0:
        raise ValueError(f"ratio a must exceed 1, got {a}")
    K = a * M
    K_int = round(K)
    if abs(K - K_int) > 1e-9:
        raise ValueError(f"a*M must be an integer, got a={a}, M={M}")
    if 2 * K_int > N:
        raise ValueError(f"need a*M <= N/2, got a*M={K_int}, N={N}")
    if math.sqrt(M / N) >= (2.0 * epsilon / 3.0) ** 2:
        raise PremiseViolated(
            f"sqrt(M/N)={math.sqrt(M / N):.6g} >= (2*eps/3)^2="
            f"{(2.0 * epsilon / 3.0) ** 2:.6g}"
        )

    r = minimal_padding(a, epsilon)
    M_prime = (r + 1) * M
    K_prime = r * M + K_int
    N_prime = (r + 1) * N
    padded = make_instance(N_prime, M_prime, K_prime)
    angles = angles_of(padded)
    assert angles.gamma is not None
    excess = angles.gamma - 1.0
    gamma_prime_lower = math.sqrt((r + a) / (r + 1.0)) - 1.0
    gap = math.sqrt(K_prime) - math.sqrt(M_prime)
    return PaddedInstance(
        r=r,
        M_prime=M_prime,
        K_prime=K_prime,
        N_prime=N_prime,
        original=make_instance(N, M, K_int),
        gamma_prime=angles.gamma,
        gamma_prime_lower=gamma_prime_lower,
        gamma_gap_ok=excess >= gamma_prime_lower,
        size_condition_ok=math.sqrt(K_prime / N_prime) < 16.0 * excess**2,
        m_bound_padded=2.0 * math.sqrt(N_prime) / gap,
    )


def iteration_bound(instance: ProblemInstance) -> IterationBounds:
    """Closed-form bounds on m and l, with the K = M+1 special forms when they apply."""
    gap = math.sqrt(instance.K) - math.sqrt(instance.M)
    root_n = math.sqrt(instance.N)
    bounds = IterationBounds(m_bound=2.0 * root_n / gap, l_bound=4.0 * root_n / gap)
    if instance.K == instance.M + 1 and instance.M >= 1:
        premise = math.sqrt((instance.M + 1) / instance.N) < (4.0 / (3.0 * instance.M)) ** 2
        bounds = IterationBounds(
            m_bound=bounds.m_bound,
            l_bound=bounds.l_bound,
            m_bound_successor=4.0 * math.sqrt((instance.M + 1) * instance.N),
            successor_premise_ok=premise,
        )
    return bounds
