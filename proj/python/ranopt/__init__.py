"""Joint spectrum allocation, user association, and power control."""

from ._core import (  # noqa: F401
    IDLE,
    AffineSolveReport,
    AllocationPlan,
    ChannelConfig,
    ContractViolation,
    DeviceOutcome,
    LinkGains,
    LosMode,
    MonotonicityError,
    Neighborhoods,
    NetworkScenario,
    NumericalError,
    ParseError,
    Point,
    PowerMode,
    PowerProfile,
    PursuitOptions,
    PursuitState,
    ScenarioParams,
    SimOutcome,
    SolveOptions,
    ValidationError,
    analytic_delays,
    analytic_mean_delay,
    build_gains,
    build_neighborhoods,
    delay_gradient,
    delay_utility,
    energy_cost,
    full_reuse_maxrsrp,
    full_reuse_opt_assoc,
    generate_scenario,
    load_plan,
    load_scenario,
    pathloss_db,
    pattern_pursuit_full_power,
    plan_power,
    plan_rates,
    profile_rates,
    pursue_delay,
    pursue_weighted_sum_rate,
    save_plan,
    save_scenario,
    simulate,
    sinr,
    solve_affine,
    spectral_efficiency,
)

__version__ = "0.1.0"
