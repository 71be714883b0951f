"""PAC range searching over stochastic arms on the real line.

Arms sit at fixed points and hide a mean weight in [0,1]^d behind sample
access; query intervals ask for near-optimal arms (scalar weights) or
near-Pareto-optimal arm sets (vector weights).  The solvers cut the line
into slabs from a minimum hitting set of the queries, harvest candidate
arms per slab with best-arm and skyline subroutines, and assemble exact,
verifiable answers with full pull accounting.
"""

from .core import (
    Arm,
    Bandit,
    BernoulliVector,
    Constant,
    Estimate,
    Instance,
    Interval,
    RewardDistribution,
    SampleLedger,
    ShiftedBernoulliSum,
    instance_from_json,
    load_instance,
    save_instance,
)
from .errors import (
    BanditRangeError,
    ConfigMismatch,
    DecodeFailure,
    EmptyArmSet,
    InvalidArm,
    InvalidBudget,
    InvalidEps,
    InvalidEta,
    InvalidHittingSet,
    InvalidInterval,
    InvalidWitness,
    OracleScaleExceeded,
    WrongDimension,
)
from .experiments import (
    ExperimentConfig,
    ExperimentReport,
    compare_sample_complexity,
    run_experiment,
    trial_seed,
)
from .generators import (
    GameSpec,
    certify_lower_bound_instance,
    decode_game_answer,
    lower_bound_instance_1d,
    lower_bound_instance_dd,
    random_instance,
)
from .geometry import (
    HittingSet,
    SlabDecomposition,
    arms_in_interval,
    build_slabs,
    min_hitting_set,
)
from .oracles import (
    Verdict,
    brute_min_hitting_set,
    check_eps_optimal,
    check_eps_pareto,
    check_skyline,
    representative_arms,
    skyline_verdict_forms,
    true_means,
)
from .search import (
    AnswerSet,
    best_arm,
    max_range_search,
    naive_range_search,
    pareto_range_search,
)
from .skyline import (
    CubeIndex,
    SkylineRunTrace,
    cube_grid_count,
    cube_index,
    elimination_pull_count,
    final_pull_count,
    left_skyline,
    median_split,
    right_skyline,
    schedule,
)

__version__ = "0.1.0"
