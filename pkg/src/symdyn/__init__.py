"""Exact symbolic and interval dynamics: scrambled sets, chaos witnesses, turbulence."""

from .bitseq import (
    MAX_INDEX, BitStream, Champernowne, Complemented, Constant, DyadicDistance,
    EventuallyPeriodic, IndexRangeError, PrefixThen, Shifted, UnsupportedRuleError,
    Word, is_eventually_zero, periodic_form, shift, truncated_distance,
)
from .tau import (
    Tau, TauLayout, TauParams, SegmentRef, block_A, block_B, block_Bhat, block_C,
    tau_bit, tau_prefix, tau_segment,
)
from .interval import (
    DomainError, EscapeError, Itinerary, LogisticMap, MapSpecError, NoPointError,
    PrecisionError, PwlMap, RationalInterval, itinerary, lambda_membership_depth,
    logistic_branches, make_g, make_h, make_identity, make_tent, parse_map,
    parse_rational, point_from_itinerary, pwl_compose, pwl_image, pwl_iterate,
    tent_branches,
)
from .witness import (
    DynSystem, WitnessReport, WitnessStream, chaos_witness_search, construct_witness,
    distance_series, li_yorke_search, map_system, scheduled_coincidence_check,
    scheduled_divergence_check, scheduled_tracking_check, scrambled_pair_report,
    shift_system,
)
from .turbulence import (
    NoCertificate, TurbulenceCertificate, fixed_points, laps, theorem6_pipeline,
    turbulence_check,
)

__version__ = "0.1.0"
