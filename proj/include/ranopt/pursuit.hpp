#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ranopt/affine_solver.hpp"
#include "ranopt/rates.hpp"
#include "ranopt/utility.hpp"

namespace ranopt {

struct BetaOptions {
  double gap_tol_rel = 1e-6;  // stop when the Frank-Wolfe gap < tol * |u|
  int max_iters = 2000;
};

struct BetaResult {
  std::vector<double> beta_hz;
  std::vector<double> rates_bps;
  double utility = 0.0;  // true utility; -inf when no feasible mixture exists
  bool infeasible = false;
  int iterations = 0;
};

/// Maximizes u(sum_m beta^m rho^m) over {beta >= 0, sum beta = W} by Frank-Wolfe
/// with exact-vertex steps and backtracking line search. When the true utility is
/// -inf on the whole simplex, falls back to minimizing the total rate deficit and
/// returns that point flagged infeasible.
BetaResult optimize_beta(const std::vector<std::vector<double>>& rates_per_hz,
                         const Utility& u, double bandwidth_hz,
                         const std::vector<double>* warm_start_hz = nullptr,
                         const BetaOptions& opts = {});

/// Convenience overload computing the per-profile rate vectors first.
BetaResult optimize_beta(const std::vector<PowerProfile>& profiles, const Utility& u,
                         const Neighborhoods& nb, const LinkGains& gains,
                         double bandwidth_hz, const BetaOptions& opts = {});

struct PursuitOptions {
  int max_profiles = 0;        // 0 means n_devices + 1
  double stall_tol = 1e-5;     // relative improvement threshold
  int stall_iters = 3;         // consecutive stalls before stopping
  std::uint64_t seed = 0;      // drives random substitute profiles
  SolveOptions inner;
  BetaOptions beta;
  // Optional extra starting profiles (appended after the full-reuse profile) with
  // an optional bandwidth warm start over them; lets a caller hand the loop a
  // known-feasible plan to improve upon.
  std::vector<PowerProfile> extra_initial_profiles;
  std::vector<double> extra_initial_beta_hz;
};

struct PursuitState {
  std::vector<PowerProfile> profiles;
  std::vector<double> beta_hz;
  std::vector<double> rates_bps;
  std::vector<double> utility_trace;  // per outer iteration, [0] = initial plan
  std::vector<int> inner_iterations;  // per generated profile
  int active_segments = 0;
  bool feasible = false;              // final utility finite
  int random_substitutions = 0;
};

/// Profile pursuit: alternately generates one new profile against the linearized
/// utility (solve_affine) and re-optimizes segment bandwidths over all collected
/// profiles. Returns the plan with zero-width segments pruned.
std::pair<AllocationPlan, PursuitState> pursue(const Utility& u, const Neighborhoods& nb,
                                               const LinkGains& gains, double bandwidth_hz,
                                               double p_max, const PursuitOptions& opts = {});

struct SparsityOptions {
  std::vector<double> power_grid;     // <= 5 levels
  double beta_resolution = 1e-3;      // pair-mixture grid
  double coarse_resolution = 0.02;    // triple-mixture grid before refinement
  double tolerance = 1e-4;
  int max_enumerated_profiles = 600;
};

struct SparsityUtilityReport {
  std::string utility_name;
  std::vector<double> best_by_m;  // index m-1: best utility over m-profile mixtures
  double upper_bound = 0.0;       // certified bound on every mixture, any support
  bool delay_infeasible = false;  // no mixture serves all loads
  bool pass = false;              // best(k) >= upper_bound - tolerance
};

struct SparsityReport {
  int profile_count = 0;
  std::vector<SparsityUtilityReport> utilities;
  bool all_pass() const;
};

/// Brute-force check of the piecewise-constant sufficiency on a gridded toy
/// instance (n <= 2, k <= 2): enumerates all grid profiles, maximizes the delay
/// and a unit-weight sum-rate utility over m-profile mixtures, and certifies that
/// k profiles already attain the best achievable mixture within tolerance.
SparsityReport verify_sparsity(const Neighborhoods& nb, const LinkGains& gains,
                               double bandwidth_hz, double p_max,
                               std::span<const double> loads_bps,
                               const SparsityOptions& opts);

}  // namespace ranopt
