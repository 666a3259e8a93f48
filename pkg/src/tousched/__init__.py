"""Electricity-cost-aware batch scheduling for hot rolling mills.

The library groups slabs into rolling units, sequences them, and places
deliberate idle time so the campaign dodges expensive time-of-use tariff
periods, trading total power cost against adjacency jump penalties.
"""

from .encoding import (
    BatchSchedule,
    Chromosome,
    TimedSchedule,
    TimingError,
    allocate_idle,
    decode,
    random_chromosome,
    timing,
    unit_times,
)
from .generator import PROFILES, generate_instance
from .instance import (
    InfeasibleInstanceError,
    InstanceFormatError,
    PenaltyModel,
    ProblemInstance,
    Slab,
    StepTable,
    default_penalty_model,
    instance_digest,
    instance_from_dict,
    parse_instance,
    serialize_instance,
    write_instance,
)
from .moea import (
    GenerationStats,
    Individual,
    TouBatchScheduler,
    crowding_distance,
    hypervolume_2d,
    non_dominated_sort,
)
from .objectives import (
    BIG_M,
    ObjectiveVector,
    Violation,
    check_constraints,
    eval_penalty,
    eval_power_cost,
    evaluate_chromosome,
)
from .operators import pmx_crossover, pmx_pair, scramble_mutation
from .oracle import ExactFront, FrontPoint, exact_front
from .tariff import (
    CostMode,
    TouPeriod,
    TouTariff,
    default_day_periods,
    default_tariff,
)
from .topsis import (
    DegenerateFrontError,
    RankedSolution,
    TopsisRanker,
    TopsisRanking,
    rank_front,
    topsis_closeness,
)

__version__ = "0.1.0"

__all__ = [
    "BIG_M",
    "BatchSchedule",
    "Chromosome",
    "CostMode",
    "DegenerateFrontError",
    "ExactFront",
    "FrontPoint",
    "GenerationStats",
    "Individual",
    "InfeasibleInstanceError",
    "InstanceFormatError",
    "ObjectiveVector",
    "PROFILES",
    "PenaltyModel",
    "ProblemInstance",
    "RankedSolution",
    "Slab",
    "StepTable",
    "TimedSchedule",
    "TimingError",
    "TopsisRanker",
    "TopsisRanking",
    "TouBatchScheduler",
    "TouPeriod",
    "TouTariff",
    "Violation",
    "allocate_idle",
    "check_constraints",
    "crowding_distance",
    "decode",
    "default_day_periods",
    "default_penalty_model",
    "default_tariff",
    "eval_penalty",
    "eval_power_cost",
    "evaluate_chromosome",
    "exact_front",
    "generate_instance",
    "hypervolume_2d",
    "instance_digest",
    "instance_from_dict",
    "non_dominated_sort",
    "parse_instance",
    "pmx_crossover",
    "pmx_pair",
    "random_chromosome",
    "rank_front",
    "scramble_mutation",
    "serialize_instance",
    "timing",
    "topsis_closeness",
    "unit_times",
    "write_instance",
]
