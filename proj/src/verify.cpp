#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "ranopt/errors.hpp"
#include "ranopt/pipeline.hpp"
#include "ranopt/rng.hpp"

namespace ranopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct TinyInstance {
  NetworkScenario scenario;
  LinkGains gains;
  Neighborhoods nb;
};

// Small random interference instances in normalized units (n_0 = P_max = W = 1).
TinyInstance random_instance(int n, int k, std::uint64_t seed, double xi = 1e-3) {
  TinyInstance t;
  ScenarioParams p;
  p.n_aps = n;
  p.n_devices = k;
  p.area_side_m = 100.0;
  p.bandwidth_hz = 1.0;
  p.p_max_dbm = 30.0;          // 1 W over 1 Hz -> P_max = 1 W/Hz
  p.noise_psd_dbm_hz = 30.0;   // n_0 = 1 W/Hz
  p.snr_threshold = xi;
  p.seed = seed;
  t.scenario = generate_scenario(p);
  Rng rng(Rng::derive(seed, 0x7e57));
  t.gains = LinkGains::uniform(n, k, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) t.gains.g(i, j) = std::exp(rng.uniform(-2.0, 2.0));
  t.nb = build_neighborhoods(t.scenario, t.gains);
  return t;
}

// Exhaustive (z, p-grid) search over single profiles; the brute-force objective
// is evaluated through the rates module, not the solver.
double grid_search_optimum(const TinyInstance& t, std::span<const double> weights,
                           int grid_points) {
  const int n = t.nb.n_aps();
  std::vector<double> grid(grid_points);
  for (int g = 0; g < grid_points; ++g)
    grid[g] = static_cast<double>(g) / (grid_points - 1);
  std::vector<int> z(n, kIdle);
  std::vector<double> p(n, 0.0);
  double best = -kInf;
  // Odometer over per-AP (device, power) choices.
  struct Choice {
    int device;
    double power;
  };
  std::vector<std::vector<Choice>> choices(n);
  for (int i = 0; i < n; ++i) {
    choices[i].push_back({kIdle, 0.0});
    for (int j : t.nb.k_of_ap[i])
      for (double pw : grid)
        if (pw > 0.0) choices[i].push_back({j, pw});
  }
  std::vector<size_t> idx(n, 0);
  while (true) {
    for (int i = 0; i < n; ++i) {
      z[i] = choices[i][idx[i]].device;
      p[i] = choices[i][idx[i]].power;
    }
    const PowerProfile prof(z, p);
    best = std::max(best, affine_objective(prof, weights, t.nb, t.gains));
    int pos = n - 1;
    while (pos >= 0 && ++idx[pos] == choices[pos].size()) idx[pos--] = 0;
    if (pos < 0) break;
  }
  return best;
}

}  // namespace

VerifyReport run_verify(std::uint64_t seed, const std::string& report_path) {
  VerifyReport report;

  {  // Delay gradient vs central finite differences at interior points.
    Rng rng(Rng::derive(seed, 0x6d01));
    int failures = 0;
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      const size_t k = 1 + rng.uniform_index(6);
      std::vector<double> loads(k), r(k);
      for (size_t j = 0; j < k; ++j) {
        loads[j] = rng.uniform(0.5, 5.0);
        r[j] = loads[j] * rng.uniform(1.2, 6.0);  // clamp-free interior
      }
      const std::vector<double> grad = delay_gradient(r, loads);
      for (size_t j = 0; j < k; ++j) {
        const double eps = 1e-3 * r[j];
        std::vector<double> hi = r, lo = r;
        hi[j] += eps;
        lo[j] -= eps;
        const double fd = (delay_utility(hi, loads) - delay_utility(lo, loads)) / (2.0 * eps);
        const double rel = std::abs(grad[j] - fd) / std::abs(grad[j]);
        worst = std::max(worst, rel);
        if (rel > 1e-4) ++failures;
      }
    }
    std::ostringstream detail;
    detail << "worst relative error " << worst;
    report.checks.push_back({"gradient_finite_difference", failures == 0, detail.str()});
  }

  {  // Monotone, convergent inner solver on random instances.
    int violations = 0, unconverged = 0;
    for (int t = 0; t < 50; ++t) {
      const TinyInstance inst = random_instance(2 + t % 8, 2 + t % 12, seed + 7 * t);
      Rng rng(Rng::derive(seed, 0xb0b + t));
      std::vector<double> c(inst.nb.n_devices());
      for (double& x : c) x = rng.uniform(0.0, 1.0);
      try {
        const AffineSolveReport rep = solve_affine(c, inst.nb, inst.gains, 1.0);
        if (!rep.converged) ++unconverged;
        for (size_t i = 1; i < rep.objective_trace.size(); ++i)
          if (rep.objective_trace[i] < rep.objective_trace[i - 1] - 1e-9) ++violations;
      } catch (const MonotonicityError&) {
        ++violations;
      }
    }
    std::ostringstream detail;
    detail << violations << " monotonicity violations, " << unconverged << " non-converged of 50";
    report.checks.push_back({"solver_monotone", violations == 0 && unconverged == 0,
                             detail.str()});
  }

  {  // Fault injection: a corrupted PSD update must trip the monotonicity guard.
    bool tripped = false;
    const TinyInstance inst = random_instance(4, 6, seed + 99);
    std::vector<double> c(inst.nb.n_devices(), 1.0);
    SolveOptions opts;
    opts.flip_p_update_sign = true;
    try {
      solve_affine(c, inst.nb, inst.gains, 1.0, opts);
    } catch (const MonotonicityError&) {
      tripped = true;
    }
    report.checks.push_back({"mutation_trips_monotonicity_guard", tripped,
                             tripped ? "corrupted update detected" : "guard failed to trip"});
  }

  {  // Small-instance optimality vs exhaustive grid search.
    int ok = 0;
    const int trials = 25;
    for (int t = 0; t < trials; ++t) {
      const TinyInstance inst = random_instance(2, 2, seed + 131 * t);
      Rng rng(Rng::derive(seed, 0xeee + t));
      std::vector<double> c(inst.nb.n_devices());
      for (double& x : c) x = rng.uniform(0.05, 1.0);
      const AffineSolveReport rep = solve_affine(c, inst.nb, inst.gains, 1.0);
      const double oracle = grid_search_optimum(inst, c, 50);
      if (rep.final_objective() >= 0.999 * oracle) ++ok;
    }
    std::ostringstream detail;
    detail << ok << "/" << trials << " within 0.999 of the grid optimum";
    report.checks.push_back({"oracle_2x2", ok >= static_cast<int>(0.95 * trials), detail.str()});
  }

  {  // Sparsity echo on tiny gridded instances.
    int pass = 0;
    const int trials = 3;
    for (int t = 0; t < trials; ++t) {
      const TinyInstance inst = random_instance(2, 2, seed + 17 * t);
      SparsityOptions opts;
      opts.power_grid = {0.0, 0.5, 1.0};
      std::vector<double> loads(inst.nb.n_devices(), 0.25);
      const SparsityReport rep =
          verify_sparsity(inst.nb, inst.gains, 1.0, 1.0, loads, opts);
      if (rep.all_pass()) ++pass;
    }
    std::ostringstream detail;
    detail << pass << "/" << trials << " instances";
    report.checks.push_back({"sparsity_echo", pass == trials, detail.str()});
  }

  {  // Bandwidth optimizer vs a dense 1-D grid on a two-profile instance.
    const std::vector<std::vector<double>> rho = {{1.0, 0.05}, {0.1, 0.9}};
    const DelayUtility u({0.3, 0.25});
    const BetaResult res = optimize_beta(rho, u, 1.0);
    double best = -kInf;
    for (int t = 0; t <= 10000; ++t) {
      const double b = static_cast<double>(t) / 10000.0;
      const std::vector<double> r = {b * rho[0][0] + (1 - b) * rho[1][0],
                                     b * rho[0][1] + (1 - b) * rho[1][1]};
      best = std::max(best, u.value(r));
    }
    const bool ok = res.utility >= best - 1e-4 * std::abs(best);
    std::ostringstream detail;
    detail << "optimizer " << res.utility << " vs grid " << best;
    report.checks.push_back({"beta_grid_oracle", ok, detail.str()});
  }

  if (!report_path.empty()) {
    nlohmann::json checks = nlohmann::json::array();
    for (const VerifyCheck& c : report.checks)
      checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    nlohmann::json root = {{"all_pass", report.all_pass()}, {"checks", checks}};
    std::ofstream out(report_path);
    if (!out) throw ValidationError("cannot open '" + report_path + "' for writing");
    out << root.dump(2) << "\n";
  }
  return report;
}

}  // namespace ranopt
