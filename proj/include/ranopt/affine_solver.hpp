#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ranopt/rates.hpp"

namespace ranopt {

/// Power handling of the inner solver. Continuous is the full algorithm; the other
/// two modes back the comparison schemes.
enum class PowerMode {
  kContinuous,  // closed-form PSD update, p in [0, P_max]
  kFrozenFull,  // p pinned at P_max, idle never offered (full-spectrum-reuse)
  kBinary,      // p in {0, P_max} following the association
};

enum class InitMode {
  kWeightedGain,  // z_i = argmax_j c_j g_{i->j}, p_i = P_max
  kRandom,        // z uniform over K_i u {idle}, p uniform over [0, P_max]
  kGiven,         // start from SolveOptions::initial
};

struct SolveOptions {
  double tol = 1e-6;           // relative objective change for convergence
  int max_iters = 500;
  PowerMode power_mode = PowerMode::kContinuous;
  InitMode init = InitMode::kWeightedGain;
  PowerProfile initial;        // used when init == kGiven
  std::uint64_t seed = 0;      // for kRandom init
  // Fault-injection hook for the verification suite: negates the PSD update's
  // numerator so the monotonicity guard must trip.
  bool flip_p_update_sign = false;
};

struct SolverState {
  std::vector<int> z;       // served device per AP, kIdle allowed
  std::vector<double> p;    // PSD per AP, 0 for idle APs
  std::vector<double> gamma;
  std::vector<double> y;
};

struct AffineSolveReport {
  PowerProfile profile;
  std::vector<double> objective_trace;  // weighted bits objective per cycle, [0] = initial
  int iterations = 0;
  bool converged = false;

  double final_objective() const { return objective_trace.back(); }
};

/// Weighted bits objective sum_j c_j * profile_rates(profile)_j of one profile.
double affine_objective(const PowerProfile& profile, std::span<const double> weights,
                        const Neighborhoods& nb, const LinkGains& gains);

SolverState make_initial_state(std::span<const double> weights, const Neighborhoods& nb,
                               const LinkGains& gains, double p_max, const SolveOptions& opts);

// One cyclic pass each. Exposed separately so the closed forms are testable.
void update_gamma(SolverState& st, const Neighborhoods& nb, const LinkGains& gains);
void update_y(SolverState& st, std::span<const double> weights, const Neighborhoods& nb,
              const LinkGains& gains);
void update_p(SolverState& st, std::span<const double> weights, const Neighborhoods& nb,
              const LinkGains& gains, double p_max, bool flip_sign = false);
void update_z(SolverState& st, std::span<const double> weights, const Neighborhoods& nb,
              const LinkGains& gains, PowerMode mode = PowerMode::kContinuous);

/// Joint power control and user association for a weighted sum-rate objective,
/// by cyclic closed-form updates of (gamma, y, p, z). The objective trace is
/// checked nondecreasing at runtime; violations raise MonotonicityError.
AffineSolveReport solve_affine(std::span<const double> weights, const Neighborhoods& nb,
                               const LinkGains& gains, double p_max,
                               const SolveOptions& opts = {});

}  // namespace ranopt
