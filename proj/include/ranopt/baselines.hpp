#pragma once

#include "ranopt/pursuit.hpp"

namespace ranopt {

/// Baseline 1: every AP at P_max over the whole band, each device claimed by its
/// strongest in-neighborhood AP; an AP claimed by several devices serves them in
/// equal bandwidth shares. Devices with empty neighborhoods get rate 0.
AllocationPlan full_reuse_maxrsrp(const Neighborhoods& nb, const LinkGains& gains,
                                  double bandwidth_hz, double p_max);

/// Baseline 2: full spectrum reuse at P_max with association and per-AP bandwidth
/// shares optimized for the utility (pursuit with the PSD update disabled). Seeded
/// with the maxRSRP plan so its utility dominates baseline 1 on every instance.
std::pair<AllocationPlan, PursuitState> full_reuse_opt_assoc(const Utility& u,
                                                             const Neighborhoods& nb,
                                                             const LinkGains& gains,
                                                             double bandwidth_hz, double p_max,
                                                             PursuitOptions opts = {});

/// Baseline 3: profile pursuit with binary (0 or peak) power control.
std::pair<AllocationPlan, PursuitState> pattern_pursuit_full_power(const Utility& u,
                                                                   const Neighborhoods& nb,
                                                                   const LinkGains& gains,
                                                                   double bandwidth_hz,
                                                                   double p_max,
                                                                   PursuitOptions opts = {});

}  // namespace ranopt
