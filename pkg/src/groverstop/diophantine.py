"""Exhaustive minimal-odd-l search and torus-orbit tooling.

The discrimination problem is equivalent to asking when the orbit
(l*theta_K/(4*pi) mod 1, l*theta_M/(4*pi) mod 1), over odd l, enters a
neighborhood of (1/4, 0).  This module scans that orbit directly:

* strict mode measures the L-infinity circle distance to (1/4, 0), mirroring
  the simultaneous-approximation inequalities literally;
* relaxed mode (the default) scores the worst-case failure probability
  max(cos^2(l*theta_K/2), sin^2(l*theta_M/2)), which also accepts hits at
  (1/4 mod 1/2, 0 mod 1/2) and therefore never finds a larger l than strict.

Scans are linear over odd l.  At desk-scale horizons this is exact and doubles
as the ground-truth oracle for the constructive rule.  Disjoint l-ranges can
be scanned independently and merged by taking the minimum found l.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .core_model import GroverAngles, ProblemInstance, angles_of, half_angle

__all__ = [
    "TorusPoint",
    "KroneckerTarget",
    "KroneckerHit",
    "SearchReport",
    "DecisionNode",
    "SCAN_CHUNK",
    "HORIZON_CAP",
    "circle_distance",
    "torus_point",
    "strict_distance",
    "relaxed_score",
    "default_horizon",
    "minimal_odd_l",
    "kronecker_search",
    "multi_hypothesis_schedule",
]

SearchMode = Literal["relaxed", "strict"]

SCAN_CHUNK = 1 << 16
HORIZON_CAP = 10**8 - 1  # largest odd default horizon


@dataclass(frozen=True)
class TorusPoint:
    """Orbit point at discrete (odd) time l."""

    l: int
    x_K: float  # frac(l * theta_K / (4*pi))
    x_M: float  # frac(l * theta_M / (4*pi))


@dataclass(frozen=True)
class KroneckerTarget:
    """Simultaneous approximation target: |l*xi_j - eta_j - p_j| < epsilon for all j."""

    xis: tuple[float, ...]
    etas: tuple[float, ...]
    epsilon: float
    parity: Literal["odd", "any"] = "odd"

    def __post_init__(self) -> None:
        if len(self.xis) != len(self.etas) or not self.xis:
            raise ValueError("xis and etas must be equal-length, non-empty")
        if self.epsilon <= 0.0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")


@dataclass(frozen=True)
class KroneckerHit:
    l: int
    p_list: tuple[int, ...]


@dataclass(frozen=True)
class SearchReport:
    found: bool
    l: int | None
    score: float | None  # the mode's score at l
    fail_K: float | None
    fail_M: float | None
    horizon: int
    mode: SearchMode
    threshold: float


def circle_distance(a: float, b: float) -> float:
    """Wrap-around distance on the unit circle."""
    d = abs(a - b) % 1.0
    return min(d, 1.0 - d)


def torus_point(l: int, angles: GroverAngles) -> TorusPoint:
    """Orbit coordinates at odd time l, reduced mod 1 into [0, 1)."""
    if l < 1 or l % 2 == 0:
        raise ValueError(f"l must be odd and >= 1, got {l}")
    four_pi = 4.0 * math.pi
    return TorusPoint(
        l=l,
        x_K=(l * angles.theta_K / four_pi) % 1.0,
        x_M=(l * angles.theta_M / four_pi) % 1.0,
    )


def strict_distance(pt: TorusPoint) -> float:
    """L-infinity circle distance of the orbit point to the target (1/4, 0)."""
    return max(circle_distance(pt.x_K, 0.25), circle_distance(pt.x_M, 0.0))


def relaxed_score(l: int, angles: GroverAngles) -> float:
    """Worst-case failure probability at stopping time l over both hypotheses."""
    if l % 2 == 0:
        raise ValueError(f"l must be odd, got {l}")
    return max(
        math.cos(0.5 * l * angles.theta_K) ** 2,
        math.sin(0.5 * l * angles.theta_M) ** 2,
    )


def default_horizon(instance: ProblemInstance) -> int:
    """10x the constructive bound 4*sqrt(N)/(sqrt(K)-sqrt(M)), odd, capped."""
    l_bound = 4.0 * math.sqrt(instance.N) / (
        math.sqrt(instance.K) - math.sqrt(instance.M)
    )
    horizon = math.ceil(10.0 * l_bound)
    horizon += 1 - horizon % 2
    return min(horizon, HORIZON_CAP)


def _chunk_scores(ls: np.ndarray, angles: GroverAngles, mode: SearchMode) -> np.ndarray:
    if mode == "relaxed":
        return np.maximum(
            np.cos(0.5 * ls * angles.theta_K) ** 2,
            np.sin(0.5 * ls * angles.theta_M) ** 2,
        )
    four_pi = 4.0 * math.pi
    d_K = np.abs(ls * (angles.theta_K / four_pi) - 0.25) % 1.0
    d_M = np.abs(ls * (angles.theta_M / four_pi)) % 1.0
    return np.maximum(np.minimum(d_K, 1.0 - d_K), np.minimum(d_M, 1.0 - d_M))


def minimal_odd_l(
    angles: GroverAngles,
    threshold: float,
    horizon: int,
    mode: SearchMode = "relaxed",
) -> SearchReport:
    """Smallest odd l <= horizon whose score is within the threshold.

    Not finding one is a result, not an error: the report then records that
    every odd l up to the horizon was scanned.
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    for start in range(1, horizon + 1, 2 * SCAN_CHUNK):
        stop = min(start + 2 * SCAN_CHUNK, horizon + 1)
        ls = np.arange(start, stop, 2, dtype=np.float64)
        scores = _chunk_scores(ls, angles, mode)
        hits = np.nonzero(scores <= threshold)[0]
        if hits.size:
            l = int(ls[hits[0]])
            return SearchReport(
                found=True,
                l=l,
                score=float(scores[hits[0]]),
                fail_K=math.cos(0.5 * l * angles.theta_K) ** 2,
                fail_M=math.sin(0.5 * l * angles.theta_M) ** 2,
                horizon=horizon,
                mode=mode,
                threshold=threshold,
            )
    return SearchReport(
        found=False,
        l=None,
        score=None,
        fail_K=None,
        fail_M=None,
        horizon=horizon,
        mode=mode,
        threshold=threshold,
    )


def kronecker_search(target: KroneckerTarget, horizon: int) -> KroneckerHit | None:
    """Smallest l of the required parity satisfying every target inequality.

    The p_j are the nearest integers to l*xi_j - eta_j; None when no l up to
    the horizon works.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    xis = np.asarray(target.xis, dtype=np.float64)
    etas = np.asarray(target.etas, dtype=np.float64)
    step = 2 if target.parity == "odd" else 1
    for start in range(1, horizon + 1, step * SCAN_CHUNK):
        stop = min(start + step * SCAN_CHUNK, horizon + 1)
        ls = np.arange(start, stop, step, dtype=np.float64)
        raw = ls[:, None] * xis[None, :] - etas[None, :]
        residuals = np.abs(raw - np.round(raw))
        ok = np.nonzero(np.all(residuals < target.epsilon, axis=1))[0]
        if ok.size:
            l = int(ls[ok[0]])
            p_list = tuple(
                int(round(l * xi - eta)) for xi, eta in zip(target.xis, target.etas)
            )
            return KroneckerHit(l=l, p_list=p_list)
    return None


@dataclass
class DecisionNode:
    """One level of the multi-hypothesis bisection over candidate sizes.

    Internal nodes hold a simultaneous-approximation search that steers the
    first half of the candidates toward the marked state (target 1/4) and the
    rest toward unmarked (target 0).  A node whose search exhausts the horizon
    is marked unresolved; the tree is still built below it.
    """

    sizes: tuple[int, ...]
    l: int | None = None
    p_list: tuple[int, ...] | None = None
    resolved: bool = True
    marked_branch: "DecisionNode | None" = field(default=None, repr=False)
    unmarked_branch: "DecisionNode | None" = field(default=None, repr=False)

    @property
    def is_leaf(self) -> bool:
        return len(self.sizes) == 1

    @property
    def depth(self) -> int:
        """Number of search levels below and including this node (0 for a leaf)."""
        if self.is_leaf:
            return 0
        assert self.marked_branch is not None and self.unmarked_branch is not None
        return 1 + max(self.marked_branch.depth, self.unmarked_branch.depth)


def _score_epsilon(threshold: float) -> float:
    # Neighborhood radius whose worst-case failure probability is the threshold.
    return math.asin(math.sqrt(min(threshold, 1.0))) / (2.0 * math.pi)


def multi_hypothesis_schedule(
    sizes: Sequence[int],
    N: int,
    threshold: float,
    horizon: int,
) -> DecisionNode:
    """Binary decision tree separating r candidate sizes by repeated bisection.

    Each internal node splits its candidates at ceil(r/2) and searches for an
    odd l sending the first half near the marked state and the second half
    near unmarked; one measurement then halves the candidate set, so about
    log2(r) rounds decide the size.
    """
    sizes = tuple(sizes)
    if len(sizes) < 2:
        raise ValueError("need at least two candidate sizes")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError(f"sizes must be strictly increasing, got {sizes}")
    if any(s < 0 or 2 * s > N for s in sizes):
        raise ValueError(f"sizes must lie in [0, N/2], got {sizes} with N={N}")
    epsilon = _score_epsilon(threshold)

    def build(candidates: tuple[int, ...]) -> DecisionNode:
        if len(candidates) == 1:
            return DecisionNode(sizes=candidates)
        split = math.ceil(len(candidates) / 2)
        xis = tuple(2.0 * half_angle(s, N) / (4.0 * math.pi) for s in candidates)
        etas = (0.25,) * split + (0.0,) * (len(candidates) - split)
        hit = kronecker_search(
            KroneckerTarget(xis=xis, etas=etas, epsilon=epsilon), horizon
        )
        return DecisionNode(
            sizes=candidates,
            l=hit.l if hit else None,
            p_list=hit.p_list if hit else None,
            resolved=hit is not None,
            marked_branch=build(candidates[:split]),
            unmarked_branch=build(candidates[split:]),
        )

    return build(sizes)
