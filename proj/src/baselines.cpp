#include "ranopt/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ranopt/errors.hpp"

namespace ranopt {

AllocationPlan full_reuse_maxrsrp(const Neighborhoods& nb, const LinkGains& gains,
                                  double bandwidth_hz, double p_max) {
  const int n = nb.n_aps();
  const int k = nb.n_devices();
  const double W = bandwidth_hz;

  // Each device claims its strongest in-neighborhood AP (received power order
  // equals gain order under the common P_max).
  std::vector<std::vector<int>> claimed(n);
  for (int j = 0; j < k; ++j) {
    const auto& nj = nb.n_of_device[j];
    if (nj.empty()) continue;
    int best = nj.front();
    for (int i : nj)
      if (gains.g(i, j) > gains.g(best, j)) best = i;
    claimed[best].push_back(j);
  }
  for (auto& list : claimed) std::sort(list.begin(), list.end());

  // Overlay the per-AP equal partitions of [0, W]: every AP splits its band into
  // |claimed| equal slots; segment boundaries are the union of all slot edges, so
  // each claimed device ends up with exactly W/|claimed| of its AP.
  std::set<double> cuts{0.0, 1.0};
  for (int i = 0; i < n; ++i) {
    const size_t c = claimed[i].size();
    for (size_t t = 1; t < c; ++t) cuts.insert(static_cast<double>(t) / c);
  }
  const std::vector<double> edges(cuts.begin(), cuts.end());

  AllocationPlan plan;
  plan.bandwidth_hz = W;
  plan.scheme = "maxrsrp";
  for (size_t seg = 0; seg + 1 < edges.size(); ++seg) {
    const double mid = 0.5 * (edges[seg] + edges[seg + 1]);
    std::vector<int> z(n, kIdle);
    std::vector<double> p(n, 0.0);
    for (int i = 0; i < n; ++i) {
      const size_t c = claimed[i].size();
      if (c == 0) continue;
      z[i] = claimed[i][std::min<size_t>(static_cast<size_t>(mid * c), c - 1)];
      p[i] = p_max;
    }
    plan.profiles.emplace_back(std::move(z), std::move(p));
    plan.beta_hz.push_back((edges[seg + 1] - edges[seg]) * W);
  }
  plan.rates_bps = plan_rates(plan, nb, gains);
  return plan;
}

std::pair<AllocationPlan, PursuitState> full_reuse_opt_assoc(const Utility& u,
                                                             const Neighborhoods& nb,
                                                             const LinkGains& gains,
                                                             double bandwidth_hz, double p_max,
                                                             PursuitOptions opts) {
  const AllocationPlan anchor = full_reuse_maxrsrp(nb, gains, bandwidth_hz, p_max);
  opts.inner.power_mode = PowerMode::kFrozenFull;
  opts.extra_initial_profiles = anchor.profiles;
  opts.extra_initial_beta_hz = anchor.beta_hz;
  auto result = pursue(u, nb, gains, bandwidth_hz, p_max, opts);
  result.first.scheme = "optassoc";
  return result;
}

std::pair<AllocationPlan, PursuitState> pattern_pursuit_full_power(const Utility& u,
                                                                   const Neighborhoods& nb,
                                                                   const LinkGains& gains,
                                                                   double bandwidth_hz,
                                                                   double p_max,
                                                                   PursuitOptions opts) {
  opts.inner.power_mode = PowerMode::kBinary;
  auto result = pursue(u, nb, gains, bandwidth_hz, p_max, opts);
  result.first.scheme = "pattern";
  return result;
}

}  // namespace ranopt
