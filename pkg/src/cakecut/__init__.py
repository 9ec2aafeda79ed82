"""Truthful two-player cake cutting with exact interval arithmetic.

The package splits along the natural seams of the problem:

- :mod:`cakecut.intervals`: exact interval-union subsets of [0, 1]
- :mod:`cakecut.aligned`: the one-parameter truthful family on prefix/suffix
  demands, and the test for membership in it
- :mod:`cakecut.general`: the positional mechanism for arbitrary demands
- :mod:`cakecut.reductions`: moving between the two models, with traces
- :mod:`cakecut.protocol`: line-JSON protocol for out-of-process mechanisms
- :mod:`cakecut.welfare`: float-space efficiency analytics and sweeps
- :mod:`cakecut.verify`: black-box truthfulness, envy, and waste checks
- :mod:`cakecut.cli` / :mod:`cakecut.report`: command line and figures
"""

from .intervals import (
    EMPTY,
    FULL,
    IntervalSet,
    format_fraction,
    interval,
    to_fraction,
    valuation,
)
from .aligned import (
    AlignedAllocation,
    AlignedProfile,
    NotInFamily,
    Theta,
    characterize,
    f_theta,
    mu,
    nu,
)
from .general import (
    Allocation,
    DemandPair,
    MechanismOracle,
    allocate,
    allocation_sizes,
    allocation_violations,
    mechanism,
)
from .reductions import (
    DerivedAligned,
    OracleContractError,
    RatioTuple,
    derive_aligned,
    ratio_tuple,
    witness_pair,
)
from .protocol import SubprocessOracle, serve_oracle
from .welfare import (
    HALF_THETA_RATIO,
    WelfareReport,
    eta,
    eta_min,
    eta_ratio,
    minimize_pot_bound,
    randomized_pot_bound,
    sw_aligned,
    sw_max_aligned,
    theta_sweep,
    welfare_report,
)
from .verify import (
    DeltaDecomposition,
    ICReport,
    ICViolation,
    check_envy_free,
    check_ic,
    delta_decompose,
    deviation_chain,
    generate_deviations,
    pareto_convert,
    proportional_overlap,
    run_ic_suite,
)

__version__ = "0.1.0"
