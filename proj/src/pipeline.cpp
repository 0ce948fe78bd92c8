#include "ranopt/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <thread>

#include "json.hpp"

#include "ranopt/errors.hpp"
#include "ranopt/log.hpp"
#include "ranopt/rng.hpp"

namespace ranopt {

namespace fs = std::filesystem;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_double(double v) {
  if (v == kInf) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string point_tag(double sweep_pps) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", sweep_pps);
  return buf;
}

PursuitOptions pursuit_options(const RunManifest& m, double sweep_pps, const std::string& scheme) {
  PursuitOptions opts;
  opts.inner.tol = m.tol_inner;
  opts.stall_tol = m.tol_outer;
  opts.max_profiles = m.max_profiles;
  std::uint64_t salt = std::hash<std::string>{}(scheme) ^
                       std::hash<long long>{}(static_cast<long long>(sweep_pps * 1e6));
  opts.seed = Rng::derive(m.seed, salt);
  return opts;
}

}  // namespace

void validate_manifest(const RunManifest& m) {
  for (size_t t = 0; t < m.sweep_pps.size(); ++t) {
    if (m.sweep_pps[t] <= 0.0) throw ValidationError("sweep values must be positive");
    if (t > 0 && m.sweep_pps[t] < m.sweep_pps[t - 1])
      throw ValidationError("sweep values must be sorted ascending");
  }
  for (const std::string& s : m.schemes)
    if (s != "proposed" && s != "pattern" && s != "optassoc" && s != "maxrsrp")
      throw ValidationError("unknown scheme '" + s + "'");
  if (m.jobs < 1) throw ValidationError("jobs must be >= 1");
}

SchemeRun run_scheme(const std::string& scheme, const NetworkScenario& scenario,
                     const Neighborhoods& nb, const LinkGains& gains,
                     std::span<const double> arrival_pps, const RunManifest& m) {
  const double W = scenario.params.bandwidth_hz;
  const double p_max = scenario.p_max_w_hz();
  const double L = scenario.params.mean_packet_bits;
  std::vector<double> loads(arrival_pps.size());
  for (size_t j = 0; j < loads.size(); ++j) loads[j] = arrival_pps[j] * L;
  const DelayUtility utility(loads);

  SchemeRun run;
  run.scheme = scheme;
  const auto t0 = std::chrono::steady_clock::now();

  if (scheme == "maxrsrp") {
    run.plan = full_reuse_maxrsrp(nb, gains, W, p_max);
    run.candidate_segments = run.plan.n_segments();
    run.active_segments = run.plan.active_segments();
  } else {
    PursuitOptions opts = pursuit_options(m, arrival_pps.empty() ? 0.0 : arrival_pps[0], scheme);
    std::pair<AllocationPlan, PursuitState> result;
    if (scheme == "optassoc") {
      result = full_reuse_opt_assoc(utility, nb, gains, W, p_max, opts);
    } else if (scheme == "pattern") {
      result = pattern_pursuit_full_power(utility, nb, gains, W, p_max, opts);
    } else {  // proposed
      result = pursue(utility, nb, gains, W, p_max, opts);
      result.first.scheme = "proposed";
      // Binary plans are feasible points of the full problem; re-optimizing the
      // bandwidth over the union of both plans' profiles makes the utility
      // ordering u(proposed) >= u(pattern) structural rather than empirical.
      auto pattern = pattern_pursuit_full_power(utility, nb, gains, W, p_max, opts);
      std::vector<PowerProfile> pool = result.first.profiles;
      std::vector<double> warm = result.first.beta_hz;
      const bool pattern_better =
          utility.value(pattern.first.rates_bps) > utility.value(result.first.rates_bps) ||
          (utility.value(result.first.rates_bps) == -kInf &&
           utility.infeasibility(pattern.first.rates_bps) <
               utility.infeasibility(result.first.rates_bps));
      if (pattern_better) warm.assign(warm.size(), 0.0);
      for (size_t m = 0; m < pattern.first.profiles.size(); ++m) {
        pool.push_back(pattern.first.profiles[m]);
        warm.push_back(pattern_better ? pattern.first.beta_hz[m] : 0.0);
      }
      std::vector<std::vector<double>> rho;
      rho.reserve(pool.size());
      for (const PowerProfile& p : pool) rho.push_back(profile_rates(p, nb, gains));
      const BetaResult merged = optimize_beta(rho, utility, W, &warm);
      AllocationPlan& plan = result.first;
      plan.profiles.clear();
      plan.beta_hz.clear();
      double kept = 0.0;
      for (size_t m = 0; m < pool.size(); ++m) {
        if (merged.beta_hz[m] > 1e-9 * W) {
          plan.profiles.push_back(pool[m]);
          plan.beta_hz.push_back(merged.beta_hz[m]);
          kept += merged.beta_hz[m];
        }
      }
      if (plan.profiles.empty()) {
        plan.profiles.push_back(pool.front());
        plan.beta_hz.push_back(W);
        kept = W;
      }
      for (double& b : plan.beta_hz) b *= W / kept;
      plan.rates_bps = plan_rates(plan, nb, gains);
      result.second.active_segments = plan.active_segments();
    }
    run.plan = std::move(result.first);
    const PursuitState& st = result.second;
    run.outer_iterations = static_cast<int>(st.utility_trace.size()) - 1;
    if (!st.inner_iterations.empty())
      run.mean_inner_iterations =
          std::accumulate(st.inner_iterations.begin(), st.inner_iterations.end(), 0.0) /
          static_cast<double>(st.inner_iterations.size());
    run.candidate_segments = static_cast<int>(st.profiles.size());
    run.active_segments = st.active_segments;
    run.utility_trace = st.utility_trace;
    run.inner_iterations = st.inner_iterations;
  }

  run.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  run.utility = utility.value(run.plan.rates_bps);
  run.analytic_mean_delay_s = analytic_mean_delay(run.plan.rates_bps, arrival_pps, L);
  return run;
}

namespace {

struct LoadedInputs {
  NetworkScenario scenario;
  LinkGains gains;
  Neighborhoods nb;
};

LoadedInputs load_inputs(const RunManifest& m) {
  LoadedInputs in{load_scenario(m.scenario_path), {}, {}};
  in.gains = build_gains(in.scenario);
  in.nb = build_neighborhoods(in.scenario, in.gains);
  RANOPT_LOG_INFO("scenario '" << m.scenario_path << "': " << in.scenario.n_aps() << " APs, "
                               << in.scenario.n_devices() << " devices, "
                               << in.nb.unserved_devices.size() << " unserved");
  return in;
}

std::vector<double> sweep_or_scenario(const RunManifest& m, const NetworkScenario& sc,
                                      std::vector<double>& scratch, size_t point) {
  if (m.sweep_pps.empty()) return sc.lambda_pps;
  scratch.assign(sc.n_devices(), m.sweep_pps[point]);
  return scratch;
}

void parallel_over(size_t count, int jobs, const std::function<void(size_t)>& body) {
  if (jobs <= 1 || count <= 1) {
    for (size_t t = 0; t < count; ++t) body(t);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  const int workers = std::min<size_t>(jobs, count);
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (size_t t = next.fetch_add(1); t < count; t = next.fetch_add(1)) body(t);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void write_trace_csv(const SchemeRun& run, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  out << "outer_iter,utility,profiles,active_segments,inner_iterations\n";
  for (size_t t = 0; t < run.utility_trace.size(); ++t) {
    // Per-iteration active counts are not retained; the final row carries the
    // pruned count, earlier rows the collected-profile count.
    const int active = t + 1 == run.utility_trace.size() ? run.active_segments
                                                         : static_cast<int>(t) + 1;
    out << t << "," << format_double(run.utility_trace[t]) << "," << t + 1 << "," << active
        << "," << (t == 0 ? 0 : run.inner_iterations[t - 1]) << "\n";
  }
}

}  // namespace

void run_optimize(const RunManifest& m) {
  validate_manifest(m);
  const LoadedInputs in = load_inputs(m);
  fs::create_directories(m.out_dir);
  const size_t points = m.sweep_pps.empty() ? 1 : m.sweep_pps.size();

  struct Row {
    std::string scheme;
    double sweep;
    SchemeRun run;
  };
  std::vector<Row> rows(points * m.schemes.size());

  parallel_over(points, m.jobs, [&](size_t t) {
    std::vector<double> scratch;
    const std::vector<double> arrivals = sweep_or_scenario(m, in.scenario, scratch, t);
    const double sweep = m.sweep_pps.empty() ? in.scenario.params.lambda_pps : m.sweep_pps[t];
    for (size_t s = 0; s < m.schemes.size(); ++s) {
      SchemeRun run = run_scheme(m.schemes[s], in.scenario, in.nb, in.gains, arrivals, m);
      run.sweep_pps = sweep;
      const std::string stem = m.out_dir + "/plan_" + m.schemes[s] + "_" + point_tag(sweep);
      save_plan(run.plan, stem + ".json");
      if (!run.utility_trace.empty())
        write_trace_csv(run, m.out_dir + "/trace_" + m.schemes[s] + "_" + point_tag(sweep) +
                                 ".csv");
      rows[t * m.schemes.size() + s] = {m.schemes[s], sweep, std::move(run)};
    }
  });

  std::ofstream summary(m.out_dir + "/summary.csv");
  summary << "scheme,sweep_pps,utility,analytic_mean_delay_s,outer_iterations,"
             "mean_inner_iterations,candidate_segments,active_segments\n";
  std::ofstream timings(m.out_dir + "/timings.csv");
  timings << "scheme,sweep_pps,runtime_s\n";
  for (const Row& row : rows) {
    const SchemeRun& r = row.run;
    summary << row.scheme << "," << format_double(row.sweep) << "," << format_double(r.utility)
            << "," << format_double(r.analytic_mean_delay_s) << "," << r.outer_iterations << ","
            << format_double(r.mean_inner_iterations) << "," << r.candidate_segments << ","
            << r.active_segments << "\n";
    timings << row.scheme << "," << format_double(row.sweep) << ","
            << format_double(r.runtime_s) << "\n";
  }
}

CompareResult run_compare(const RunManifest& m, bool write_files) {
  validate_manifest(m);
  if (m.sweep_pps.empty()) throw ValidationError("compare requires a traffic sweep");
  const LoadedInputs in = load_inputs(m);
  if (write_files) fs::create_directories(m.out_dir);

  CompareResult result;
  result.rows.resize(m.sweep_pps.size());
  parallel_over(m.sweep_pps.size(), m.jobs, [&](size_t t) {
    std::vector<double> scratch;
    const std::vector<double> arrivals = sweep_or_scenario(m, in.scenario, scratch, t);
    CompareRow row;
    row.sweep_pps = m.sweep_pps[t];
    for (const std::string& scheme : m.schemes) {
      SchemeRun run = run_scheme(scheme, in.scenario, in.nb, in.gains, arrivals, m);
      run.sweep_pps = m.sweep_pps[t];
      row.runs.push_back(std::move(run));
    }
    auto utility_of = [&](const std::string& name) -> const SchemeRun* {
      for (const SchemeRun& r : row.runs)
        if (r.scheme == name) return &r;
      return nullptr;
    };
    const SchemeRun* proposed = utility_of("proposed");
    const SchemeRun* pattern = utility_of("pattern");
    const SchemeRun* optassoc = utility_of("optassoc");
    const SchemeRun* maxrsrp = utility_of("maxrsrp");
    auto dominates = [](const SchemeRun* hi, const SchemeRun* lo) {
      if (!hi || !lo) return true;
      if (lo->utility == -kInf) return true;
      if (hi->utility == -kInf) return false;
      return hi->utility >= lo->utility - 1e-9 * std::max(1.0, std::abs(lo->utility));
    };
    row.dominance_ok = dominates(proposed, pattern) && dominates(optassoc, maxrsrp);
    result.rows[t] = std::move(row);
  });

  for (const CompareRow& row : result.rows) result.dominance_ok &= row.dominance_ok;

  // Throughput knee per scheme: largest sweep value with finite analytic delay.
  result.knee_pps.assign(m.schemes.size(), 0.0);
  for (size_t s = 0; s < m.schemes.size(); ++s)
    for (const CompareRow& row : result.rows)
      if (row.runs[s].analytic_mean_delay_s < kInf)
        result.knee_pps[s] = std::max(result.knee_pps[s], row.sweep_pps);
  for (size_t s = 0; s < m.schemes.size(); ++s) {
    if (m.schemes[s] == "proposed") continue;
    auto it = std::find(m.schemes.begin(), m.schemes.end(), "proposed");
    if (it == m.schemes.end()) break;
    const double knee_proposed = result.knee_pps[it - m.schemes.begin()];
    if (result.knee_pps[s] > knee_proposed) result.knee_ok = false;
  }

  if (write_files) {
    for (size_t s = 0; s < m.schemes.size(); ++s) {
      std::ofstream out(m.out_dir + "/delay_" + m.schemes[s] + ".csv");
      out << "sweep_pps,analytic_mean_delay_s,unstable_devices,utility\n";
      for (const CompareRow& row : result.rows) {
        const SchemeRun& r = row.runs[s];
        int unstable = 0;
        const std::vector<double> delays =
            analytic_delays(r.plan.rates_bps,
                            std::vector<double>(in.scenario.n_devices(), row.sweep_pps),
                            in.scenario.params.mean_packet_bits);
        for (double d : delays)
          if (d == kInf) ++unstable;
        out << format_double(row.sweep_pps) << "," << format_double(r.analytic_mean_delay_s)
            << "," << unstable << "," << format_double(r.utility) << "\n";
      }
    }
    std::ofstream out(m.out_dir + "/compare_summary.csv");
    out << "sweep_pps";
    for (const std::string& s : m.schemes) out << "," << s << "_utility";
    out << ",dominance_ok\n";
    for (const CompareRow& row : result.rows) {
      out << format_double(row.sweep_pps);
      for (const SchemeRun& r : row.runs) out << "," << format_double(r.utility);
      out << "," << (row.dominance_ok ? 1 : 0) << "\n";
    }
    out << "knee";
    for (double kn : result.knee_pps) out << "," << format_double(kn);
    out << "," << (result.knee_ok ? 1 : 0) << "\n";
  }
  return result;
}

void run_simulate(const RunManifest& m) {
  validate_manifest(m);
  const LoadedInputs in = load_inputs(m);
  fs::create_directories(m.out_dir);
  const size_t points = m.sweep_pps.empty() ? 1 : m.sweep_pps.size();

  parallel_over(points, m.jobs, [&](size_t t) {
    std::vector<double> scratch;
    const std::vector<double> arrivals = sweep_or_scenario(m, in.scenario, scratch, t);
    const double sweep = m.sweep_pps.empty() ? in.scenario.params.lambda_pps : m.sweep_pps[t];
    NetworkScenario sc = in.scenario;
    sc.lambda_pps = arrivals;
    for (const std::string& scheme : m.schemes) {
      SchemeRun run = run_scheme(scheme, in.scenario, in.nb, in.gains, arrivals, m);
      SimConfig cfg;
      cfg.plan = &run.plan;
      cfg.scenario = &sc;
      cfg.nb = &in.nb;
      cfg.gains = &in.gains;
      cfg.horizon_s = m.sim_horizon_s;
      cfg.warmup_frac = m.sim_warmup_frac;
      cfg.seed = Rng::derive(m.seed, std::hash<std::string>{}(scheme) + t);
      const SimOutcome outcome = simulate(cfg);
      write_outcome_csv(outcome, m.out_dir + "/sim_" + scheme + "_" + point_tag(sweep) + ".csv");
    }
  });
}

bool VerifyReport::all_pass() const {
  for (const VerifyCheck& c : checks)
    if (!c.pass) return false;
  return true;
}

}  // namespace ranopt
