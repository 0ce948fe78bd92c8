#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ranopt/baselines.hpp"
#include "ranopt/simulator.hpp"

namespace ranopt {

/// One sweep-point run description shared by the optimize/compare/simulate commands.
struct RunManifest {
  std::string scenario_path;
  std::vector<std::string> schemes{"proposed", "pattern", "optassoc", "maxrsrp"};
  std::vector<double> sweep_pps;  // positive and sorted; empty = scenario traffic
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  int jobs = 1;
  double tol_inner = 1e-6;
  double tol_outer = 1e-5;
  int max_profiles = 0;  // 0 = k + 1
  double sim_horizon_s = 20.0;
  double sim_warmup_frac = 0.1;
};

void validate_manifest(const RunManifest& m);

struct SchemeRun {
  std::string scheme;
  double sweep_pps = 0.0;
  AllocationPlan plan;
  double utility = 0.0;
  double analytic_mean_delay_s = 0.0;  // +inf when any device is unstable
  int outer_iterations = 0;
  double mean_inner_iterations = 0.0;
  int candidate_segments = 0;  // |P| collected by the pursuit
  int active_segments = 0;
  double runtime_s = 0.0;
  std::vector<double> utility_trace;  // pursuit outer trace (empty for maxrsrp)
  std::vector<int> inner_iterations;
};

/// Runs one scheme at one traffic level. Baseline dependencies (the dominance
/// seeding of optassoc and proposed) are resolved internally.
SchemeRun run_scheme(const std::string& scheme, const NetworkScenario& scenario,
                     const Neighborhoods& nb, const LinkGains& gains,
                     std::span<const double> arrival_pps, const RunManifest& m);

struct CompareRow {
  double sweep_pps;
  std::vector<SchemeRun> runs;  // one per requested scheme
  bool dominance_ok = true;
};

struct CompareResult {
  std::vector<CompareRow> rows;
  std::vector<double> knee_pps;  // per scheme; 0 when no sweep point is stable
  bool dominance_ok = true;
  bool knee_ok = true;
};

/// cmd optimize: plans + traces + summary files per (scheme, sweep point).
void run_optimize(const RunManifest& m);
/// cmd compare: analytic delay-vs-traffic CSVs and the dominance/knee checks.
CompareResult run_compare(const RunManifest& m, bool write_files = true);
/// cmd simulate: packet-level outcomes per (scheme, sweep point).
void run_simulate(const RunManifest& m);

struct VerifyCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_pass() const;
};

/// cmd verify: built-in property suite (oracle comparisons, gradient checks,
/// sparsity echo, monotonicity guard incl. the fault-injection trip test).
VerifyReport run_verify(std::uint64_t seed, const std::string& report_path);

}  // namespace ranopt
