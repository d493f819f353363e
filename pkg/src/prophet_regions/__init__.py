"""Prophet regions: attainable pairs of observer values for random sequences.

Upper boundary curves, areas and typical statistics of the regions, gaps
between environments, extremal constructions, and an exact oracle for the
observer values of finite discrete sequences.
"""

from .boundaries import (
    UM, VM, WM, EnvironmentSpec, Family, InfoPair, Level, RegionDescriptor,
    alpha_bounded, boundary, contains, discounted, general, iid, independent,
    inverse_boundary, parse_pair, region, supported_regions,
)
from .comparisons import (
    StudyTable, check_dominance, discount_alpha_study, gap_area, gap_horizontal,
    gap_vertical, parameters_for_area,
)
from .constructions import (
    alpha_extremal, dilated_bernoulli, discounted_extremal, iid_bernoulli,
    random_dependent, random_sequence, statistician_worst_case,
    unit_vectors_general, worst_case_u_difference,
)
from .errors import (
    ConvergenceError, DegenerateRegion, DomainError, DominanceError, NoSignChange,
    SequenceError, TreeSizeError, UnsupportedRegion,
)
from .measures import (
    DIVERGENT, GapReport, RegionStats, area, max_difference, max_ratio,
    region_integrals, region_stats, sample_region, tail_difference, tail_ratio,
    typical_difference, typical_ratio,
)
from .oracle import (
    ObserverEstimates, ObserverValues, argmax_u, eval_m, eval_u, eval_v, eval_w,
    monte_carlo_values, observer_values, region_point,
)
from .sequences import DiscreteSequence
from .special_functions import find_root, harmonic, integrate, lambert_w0, lambert_wm1

__version__ = "0.1.0"
