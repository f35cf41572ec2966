"""Stopping rules for deciding whether a Grover-marked set has size M or K.

Core pieces: an exact 2D subspace model of the Grover rotation, the
constructive odd-l stopping rule with numeric certification, exhaustive
torus-orbit searches, instance transforms (gcd reduction, database padding),
and a brute-force statevector lab used as ground truth.
"""

from .core_model import (
    FailurePair,
    GroverAngles,
    ProblemInstance,
    SubspaceState,
    angles_of,
    chebyshev_T,
    chebyshev_residuals,
    failure_probabilities,
    half_angle,
    make_instance,
    state_after,
)
from .diophantine import (
    DecisionNode,
    KroneckerHit,
    KroneckerTarget,
    SearchReport,
    TorusPoint,
    default_horizon,
    kronecker_search,
    minimal_odd_l,
    multi_hypothesis_schedule,
    relaxed_score,
    strict_distance,
    torus_point,
)
from .statevector import (
    DiscriminationOutcome,
    RNG_ALGORITHM,
    apply_oracle,
    grover_step,
    init_uniform,
    measure,
    run_discrimination,
    simulate,
)
from .stopping_rule import (
    Applicability,
    CertificateReport,
    DegenerateM,
    GammaTooLarge,
    NotApplicable,
    StoppingRule,
    certify,
    check_applicability,
    construct_rule,
    gamma_upper_bound,
    nearest_odd,
)
from .transforms import (
    IterationBounds,
    PaddedInstance,
    PremiseViolated,
    iteration_bound,
    pad_for_ratio,
    reduce_common_divisor,
)

__version__ = "0.1.0"
