#include "ranopt/pursuit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ranopt/errors.hpp"
#include "ranopt/rng.hpp"

namespace ranopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> mix_rates(const std::vector<std::vector<double>>& rho,
                              std::span<const double> beta) {
  std::vector<double> r(rho.front().size(), 0.0);
  for (size_t m = 0; m < rho.size(); ++m) {
    if (beta[m] == 0.0) continue;
    for (size_t j = 0; j < r.size(); ++j) r[j] += beta[m] * rho[m][j];
  }
  return r;
}

// One Frank-Wolfe ascent pass on a concave objective over the scaled simplex.
// `score` ranks vertices against the current gradient; `eval` is the objective.
struct FwStep {
  int vertex = 0;
  double gap = 0.0;
};

FwStep fw_direction(const std::vector<std::vector<double>>& rho,
                    std::span<const double> grad, std::span<const double> r, double W) {
  int best = 0;
  double best_score = -kInf;
  for (size_t m = 0; m < rho.size(); ++m) {
    double s = 0.0;
    for (size_t j = 0; j < grad.size(); ++j) s += grad[j] * rho[m][j];
    if (s > best_score) {
      best_score = s;
      best = static_cast<int>(m);
    }
  }
  double at_current = 0.0;
  for (size_t j = 0; j < grad.size(); ++j) at_current += grad[j] * r[j];
  return {best, W * best_score - at_current};
}

}  // namespace

BetaResult optimize_beta(const std::vector<std::vector<double>>& rates_per_hz,
                         const Utility& u, double bandwidth_hz,
                         const std::vector<double>* warm_start_hz, const BetaOptions& opts) {
  if (rates_per_hz.empty()) throw ContractViolation("optimize_beta: no profiles given");
  const size_t M = rates_per_hz.size();
  const double W = bandwidth_hz;

  std::vector<double> beta(M, 0.0);
  if (warm_start_hz && !warm_start_hz->empty()) {
    for (size_t m = 0; m < std::min(M, warm_start_hz->size()); ++m) beta[m] = (*warm_start_hz)[m];
    const double total = std::accumulate(beta.begin(), beta.end(), 0.0);
    if (total <= 0.0 || std::abs(total - W) > 1e-6 * W)
      throw ContractViolation("optimize_beta: warm start does not sum to the bandwidth");
  } else {
    beta.assign(M, W / static_cast<double>(M));
  }

  std::vector<double> r = mix_rates(rates_per_hz, beta);
  int iterations = 0;

  auto run_surrogate_phase = [&]() {
    for (; iterations < opts.max_iters; ++iterations) {
      const std::vector<double> grad = u.gradient(r);
      const FwStep step = fw_direction(rates_per_hz, grad, r, W);
      const double cur = u.surrogate(r);
      if (step.gap <= opts.gap_tol_rel * std::max(std::abs(cur), 1e-30)) break;
      // Backtracking from the full vertex step; concavity guarantees acceptance.
      double eta = 1.0;
      bool moved = false;
      while (eta > 1e-14) {
        std::vector<double> r_try(r.size());
        for (size_t j = 0; j < r.size(); ++j)
          r_try[j] = (1.0 - eta) * r[j] + eta * W * rates_per_hz[step.vertex][j];
        if (u.surrogate(r_try) >= cur + 1e-4 * eta * step.gap) {
          for (size_t m = 0; m < M; ++m) beta[m] *= (1.0 - eta);
          beta[step.vertex] += eta * W;
          r = std::move(r_try);
          moved = true;
          break;
        }
        eta *= 0.5;
      }
      if (!moved) break;
    }
  };

  run_surrogate_phase();

  if (u.value(r) == -kInf && u.infeasibility(r) > 0.0) {
    // Feasibility phase: Frank-Wolfe descent on the total rate deficit.
    for (int it = 0; it < opts.max_iters && u.infeasibility(r) > 0.0; ++it, ++iterations) {
      const double deficit = u.infeasibility(r);
      // Deficit subgradient w.r.t. rates is -1 per starved device; the ascent
      // direction for -deficit scores vertices by their starved-device rates.
      std::vector<double> starved = u.deficits(r);
      for (double& s : starved) s = s > 0.0 ? 1.0 : 0.0;
      const FwStep step = fw_direction(rates_per_hz, starved, r, W);
      if (step.gap <= 1e-12 * std::max(deficit, 1.0)) break;
      // Golden-section on the (convex, piecewise-linear) deficit along the step.
      const std::vector<double>& rho = rates_per_hz[step.vertex];
      auto deficit_at = [&](double eta) {
        std::vector<double> r_try(r.size());
        for (size_t j = 0; j < r.size(); ++j) r_try[j] = (1.0 - eta) * r[j] + eta * W * rho[j];
        return u.infeasibility(r_try);
      };
      double lo = 0.0, hi = 1.0;
      const double phi = 0.6180339887498949;
      double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
      double f1 = deficit_at(m1), f2 = deficit_at(m2);
      for (int t = 0; t < 60; ++t) {
        if (f1 <= f2) {
          hi = m2; m2 = m1; f2 = f1;
          m1 = hi - phi * (hi - lo);
          f1 = deficit_at(m1);
        } else {
          lo = m1; m1 = m2; f1 = f2;
          m2 = lo + phi * (hi - lo);
          f2 = deficit_at(m2);
        }
      }
      const double eta = deficit_at(m1) <= deficit_at(m2) ? m1 : m2;
      if (deficit_at(eta) >= deficit) break;
      for (size_t m = 0; m < M; ++m) beta[m] *= (1.0 - eta);
      beta[step.vertex] += eta * W;
      r = mix_rates(rates_per_hz, beta);
    }
    if (u.value(r) > -kInf) run_surrogate_phase();  // polish once feasible
  }

  BetaResult result;
  result.beta_hz = std::move(beta);
  result.rates_bps = std::move(r);
  result.utility = u.value(result.rates_bps);
  result.infeasible = result.utility == -kInf;
  result.iterations = iterations;
  return result;
}

BetaResult optimize_beta(const std::vector<PowerProfile>& profiles, const Utility& u,
                         const Neighborhoods& nb, const LinkGains& gains, double bandwidth_hz,
                         const BetaOptions& opts) {
  if (profiles.empty()) throw ContractViolation("optimize_beta: no profiles given");
  std::vector<std::vector<double>> rho;
  rho.reserve(profiles.size());
  for (const PowerProfile& p : profiles) rho.push_back(profile_rates(p, nb, gains));
  return optimize_beta(rho, u, bandwidth_hz, nullptr, opts);
}

namespace {

PowerProfile full_reuse_profile(const Neighborhoods& nb, const LinkGains& gains, double p_max) {
  const int n = nb.n_aps();
  std::vector<int> z(n, kIdle);
  std::vector<double> p(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double best_gain = -1.0;
    for (int j : nb.k_of_ap[i])
      if (gains.g(i, j) > best_gain) {
        best_gain = gains.g(i, j);
        z[i] = j;
      }
    if (z[i] != kIdle) p[i] = p_max;
  }
  return PowerProfile(std::move(z), std::move(p));
}

bool contains_profile(const std::vector<PowerProfile>& set, const PowerProfile& p) {
  return std::find(set.begin(), set.end(), p) != set.end();
}

PowerProfile random_profile(const Neighborhoods& nb, double p_max, PowerMode mode, Rng& rng) {
  const int n = nb.n_aps();
  std::vector<int> z(n, kIdle);
  std::vector<double> p(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto& ki = nb.k_of_ap[i];
    if (ki.empty()) continue;
    if (mode == PowerMode::kFrozenFull) {
      z[i] = ki[rng.uniform_index(ki.size())];
      p[i] = p_max;
    } else {
      const std::uint64_t pick = rng.uniform_index(ki.size() + 1);
      if (pick < ki.size()) {
        z[i] = ki[pick];
        p[i] = mode == PowerMode::kBinary ? p_max : rng.uniform(0.0, p_max);
      }
    }
  }
  return PowerProfile(std::move(z), std::move(p));
}

}  // namespace

std::pair<AllocationPlan, PursuitState> pursue(const Utility& u, const Neighborhoods& nb,
                                               const LinkGains& gains, double bandwidth_hz,
                                               double p_max, const PursuitOptions& opts) {
  const int k = nb.n_devices();
  const double W = bandwidth_hz;
  const int max_profiles = opts.max_profiles > 0 ? opts.max_profiles : k + 1;
  if (max_profiles < 1) throw ContractViolation("pursue: max_profiles must be >= 1");

  PursuitState st;
  st.profiles.push_back(full_reuse_profile(nb, gains, p_max));
  std::vector<double> warm{W};
  for (const PowerProfile& extra : opts.extra_initial_profiles) {
    PowerProfile prof = extra;
    prof.normalize();
    if (!contains_profile(st.profiles, prof)) {
      st.profiles.push_back(std::move(prof));
      warm.push_back(0.0);
    }
  }
  if (!opts.extra_initial_beta_hz.empty()) {
    // Hand the initial bandwidth mass to the supplied profiles instead.
    std::fill(warm.begin(), warm.end(), 0.0);
    double total = 0.0;
    for (size_t m = 0; m < opts.extra_initial_beta_hz.size(); ++m) {
      const PowerProfile& extra = opts.extra_initial_profiles[m];
      PowerProfile prof = extra;
      prof.normalize();
      const auto it = std::find(st.profiles.begin(), st.profiles.end(), prof);
      warm[it - st.profiles.begin()] += opts.extra_initial_beta_hz[m];
      total += opts.extra_initial_beta_hz[m];
    }
    if (std::abs(total - W) > 1e-6 * W)
      throw ContractViolation("pursue: initial beta does not sum to the bandwidth");
  }

  std::vector<std::vector<double>> rho;
  for (const PowerProfile& p : st.profiles) rho.push_back(profile_rates(p, nb, gains));

  BetaResult cur = optimize_beta(rho, u, W, &warm, opts.beta);
  st.beta_hz = cur.beta_hz;
  st.rates_bps = cur.rates_bps;
  st.utility_trace.push_back(cur.utility);

  Rng rng(Rng::derive(opts.seed, /*salt=*/0x9d0f));
  int stall_count = 0;
  // The cap counts profiles this run adds on top of any supplied starting set.
  const int profile_cap =
      max_profiles + static_cast<int>(st.profiles.size()) - 1;
  // Deficit history for the infeasible regime: random substitute profiles give
  // occasional micro-improvements, so the stall test there uses a window.
  std::vector<double> deficit_history{u.infeasibility(cur.rates_bps)};
  const int deficit_window = 5;

  while (static_cast<int>(st.profiles.size()) < profile_cap && stall_count < opts.stall_iters) {
    const std::vector<double> weights = u.gradient(st.rates_bps);
    SolveOptions inner = opts.inner;
    AffineSolveReport report;
    try {
      report = solve_affine(weights, nb, gains, p_max, inner);
    } catch (const NumericalError& e) {
      throw NumericalError(std::string("pursue outer iteration ") +
                               std::to_string(st.utility_trace.size()) + ": " + e.what(),
                           e.iteration());
    }
    st.inner_iterations.push_back(report.iterations);

    PowerProfile candidate = report.profile;
    if (contains_profile(st.profiles, candidate)) {
      bool found = false;
      for (int attempt = 0; attempt < 1000; ++attempt) {
        candidate = random_profile(nb, p_max, opts.inner.power_mode, rng);
        if (!contains_profile(st.profiles, candidate)) {
          found = true;
          break;
        }
      }
      if (!found) break;  // profile class exhausted on a tiny instance
      ++st.random_substitutions;
    }

    st.profiles.push_back(candidate);
    rho.push_back(profile_rates(candidate, nb, gains));
    std::vector<double> warm_next = cur.beta_hz;
    warm_next.push_back(0.0);

    const double prev_utility = cur.utility;
    cur = optimize_beta(rho, u, W, &warm_next, opts.beta);
    st.beta_hz = cur.beta_hz;
    st.rates_bps = cur.rates_bps;
    st.utility_trace.push_back(cur.utility);
    deficit_history.push_back(u.infeasibility(cur.rates_bps));

    if (prev_utility == -kInf && cur.utility == -kInf) {
      // Still infeasible: stall once the windowed deficit decrease goes flat.
      // Sub-0.1%-per-iteration grinding never flips a point to feasible, so the
      // threshold here is coarser than the utility stall.
      const size_t t = deficit_history.size() - 1;
      const size_t t0 = t >= static_cast<size_t>(deficit_window) ? t - deficit_window : 0;
      const double drop = deficit_history[t0] - deficit_history[t];
      const double rel =
          drop / std::max(deficit_history[t0], 1e-30) / static_cast<double>(t - t0);
      stall_count = rel < std::max(1e-3, opts.stall_tol) ? stall_count + 1 : 0;
    } else if (prev_utility == -kInf) {
      stall_count = 0;  // became feasible
    } else {
      const double impr = (cur.utility - prev_utility) / std::max(std::abs(prev_utility), 1e-30);
      stall_count = impr < opts.stall_tol ? stall_count + 1 : 0;
    }
  }

  st.active_segments = 0;
  for (double b : st.beta_hz)
    if (b > 1e-9 * W) ++st.active_segments;
  st.feasible = st.utility_trace.back() > -kInf;

  AllocationPlan plan;
  plan.bandwidth_hz = W;
  double kept = 0.0;
  for (size_t m = 0; m < st.profiles.size(); ++m) {
    if (st.beta_hz[m] > 1e-9 * W) {
      plan.profiles.push_back(st.profiles[m]);
      plan.beta_hz.push_back(st.beta_hz[m]);
      kept += st.beta_hz[m];
    }
  }
  if (plan.profiles.empty()) {
    plan.profiles.push_back(st.profiles.front());
    plan.beta_hz.push_back(W);
    kept = W;
  }
  for (double& b : plan.beta_hz) b *= W / kept;
  plan.rates_bps = plan_rates(plan, nb, gains);
  return {std::move(plan), std::move(st)};
}

// ---------------------------------------------------------------------------
// Sparsity verification on gridded toy instances
// ---------------------------------------------------------------------------

namespace {

struct EnumeratedProfiles {
  std::vector<PowerProfile> profiles;
  std::vector<std::vector<double>> rho;
};

EnumeratedProfiles enumerate_grid_profiles(const Neighborhoods& nb, const LinkGains& gains,
                                           std::span<const double> grid, int cap) {
  const int n = nb.n_aps();
  // Per-AP choice list: idle, plus (device, power) for every positive grid level.
  struct Choice {
    int device;
    double power;
  };
  std::vector<std::vector<Choice>> choices(n);
  for (int i = 0; i < n; ++i) {
    choices[i].push_back({kIdle, 0.0});
    for (int j : nb.k_of_ap[i])
      for (double p : grid)
        if (p > 0.0) choices[i].push_back({j, p});
  }
  EnumeratedProfiles out;
  std::vector<size_t> idx(n, 0);
  while (true) {
    std::vector<int> z(n);
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i) {
      z[i] = choices[i][idx[i]].device;
      p[i] = choices[i][idx[i]].power;
    }
    PowerProfile prof(std::move(z), std::move(p));
    std::vector<double> rates = profile_rates(prof, nb, gains);
    bool duplicate = false;
    for (const auto& seen : out.rho)
      if (seen == rates) {
        duplicate = true;
        break;
      }
    if (!duplicate) {
      out.profiles.push_back(std::move(prof));
      out.rho.push_back(std::move(rates));
      if (static_cast<int>(out.profiles.size()) > cap)
        throw ValidationError("verify_sparsity: instance too large (profile enumeration cap)");
    }
    int pos = n - 1;
    while (pos >= 0 && ++idx[pos] == choices[pos].size()) idx[pos--] = 0;
    if (pos < 0) break;
  }
  return out;
}

// Exact bound on the utility of any mixture, for k <= 2 devices: every mixture
// rate vector lies in the convex hull of the profile rate points, and a
// nondecreasing concave utility attains its hull maximum on the boundary. The
// hull is tiny, so each edge is searched densely and polished; no iterative
// solver is involved, which keeps the certificate independent.
double exact_mixture_bound(const std::vector<std::vector<double>>& rho, const Utility& u,
                           double W) {
  const size_t dim = rho.front().size();
  if (dim == 1) {
    double best_rate = 0.0;
    for (const auto& p : rho) best_rate = std::max(best_rate, p[0]);
    const std::vector<double> r{W * best_rate};
    return u.value(r);
  }

  std::vector<std::pair<double, double>> pts;
  pts.reserve(rho.size());
  for (const auto& p : rho) pts.emplace_back(W * p[0], W * p[1]);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  // Andrew monotone chain, full hull.
  auto cross = [](const std::pair<double, double>& o, const std::pair<double, double>& a,
                  const std::pair<double, double>& b) {
    return (a.first - o.first) * (b.second - o.second) -
           (a.second - o.second) * (b.first - o.first);
  };
  std::vector<std::pair<double, double>> hull;
  if (pts.size() <= 2) {
    hull = pts;
  } else {
    std::vector<std::pair<double, double>> h(2 * pts.size());
    size_t t = 0;
    for (const auto& p : pts) {
      while (t >= 2 && cross(h[t - 2], h[t - 1], p) <= 0) --t;
      h[t++] = p;
    }
    const size_t lower_end = t + 1;
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
      while (t >= lower_end && cross(h[t - 2], h[t - 1], *it) <= 0) --t;
      h[t++] = *it;
    }
    h.resize(t - 1);
    hull = std::move(h);
  }

  double best = -kInf;
  std::vector<double> r(2);
  auto edge_value = [&](const std::pair<double, double>& a, const std::pair<double, double>& b,
                        double eta) {
    r[0] = (1.0 - eta) * a.first + eta * b.first;
    r[1] = (1.0 - eta) * a.second + eta * b.second;
    return u.value(r);
  };
  for (size_t e = 0; e < hull.size(); ++e) {
    const auto& a = hull[e];
    const auto& b = hull[(e + 1) % hull.size()];
    double loc_eta = 0.0, loc = -kInf;
    for (int t = 0; t <= 1000; ++t) {
      const double eta = t / 1000.0;
      const double v = edge_value(a, b, eta);
      if (v > loc) {
        loc = v;
        loc_eta = eta;
      }
    }
    if (loc > -kInf) {
      double lo = std::max(0.0, loc_eta - 1e-3), hi = std::min(1.0, loc_eta + 1e-3);
      const double phi = 0.6180339887498949;
      double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
      double f1 = edge_value(a, b, m1), f2 = edge_value(a, b, m2);
      for (int t = 0; t < 60; ++t) {
        if (f1 >= f2) {
          hi = m2; m2 = m1; f2 = f1; m1 = hi - phi * (hi - lo); f1 = edge_value(a, b, m1);
        } else {
          lo = m1; m1 = m2; f1 = f2; m2 = lo + phi * (hi - lo); f2 = edge_value(a, b, m2);
        }
      }
      loc = std::max(loc, std::max(f1, f2));
    }
    best = std::max(best, loc);
  }
  return best;
}

double best_single(const std::vector<std::vector<double>>& rho, const Utility& u, double W) {
  double best = -kInf;
  for (const auto& rates : rho) {
    std::vector<double> r(rates.size());
    for (size_t j = 0; j < r.size(); ++j) r[j] = W * rates[j];
    best = std::max(best, u.value(r));
  }
  return best;
}

double best_pair(const std::vector<std::vector<double>>& rho, const Utility& u, double W,
                 double resolution) {
  const size_t M = rho.size();
  const int steps = static_cast<int>(std::round(1.0 / resolution));
  double best = -kInf;
  std::vector<double> r(rho.front().size());
  for (size_t a = 0; a < M; ++a) {
    for (size_t b = a + 1; b < M; ++b) {
      double best_eta = 0.0, best_val = -kInf;
      for (int t = 0; t <= steps; ++t) {
        const double eta = static_cast<double>(t) / steps;
        for (size_t j = 0; j < r.size(); ++j)
          r[j] = W * (eta * rho[a][j] + (1.0 - eta) * rho[b][j]);
        const double val = u.value(r);
        if (val > best_val) {
          best_val = val;
          best_eta = eta;
        }
      }
      // Golden-section polish on the surrogate around the grid argmax.
      double lo = std::max(0.0, best_eta - resolution), hi = std::min(1.0, best_eta + resolution);
      const double phi = 0.6180339887498949;
      auto val_at = [&](double eta) {
        for (size_t j = 0; j < r.size(); ++j)
          r[j] = W * (eta * rho[a][j] + (1.0 - eta) * rho[b][j]);
        return u.surrogate(r);
      };
      double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
      double f1 = val_at(m1), f2 = val_at(m2);
      for (int t = 0; t < 50; ++t) {
        if (f1 >= f2) {
          hi = m2; m2 = m1; f2 = f1; m1 = hi - phi * (hi - lo); f1 = val_at(m1);
        } else {
          lo = m1; m1 = m2; f1 = f2; m2 = lo + phi * (hi - lo); f2 = val_at(m2);
        }
      }
      const double eta = (f1 >= f2) ? m1 : m2;
      for (size_t j = 0; j < r.size(); ++j)
        r[j] = W * (eta * rho[a][j] + (1.0 - eta) * rho[b][j]);
      best_val = std::max(best_val, u.value(r));
      best = std::max(best, best_val);
    }
  }
  return best;
}

double best_triple(const std::vector<std::vector<double>>& rho, const Utility& u, double W,
                   double coarse, double fine) {
  const size_t M = rho.size();
  if (M < 3) return -kInf;
  double best = -kInf;
  std::vector<double> r(rho.front().size());
  auto eval = [&](size_t a, size_t b, size_t c, double wa, double wb) {
    const double wc = 1.0 - wa - wb;
    for (size_t j = 0; j < r.size(); ++j)
      r[j] = W * (wa * rho[a][j] + wb * rho[b][j] + wc * rho[c][j]);
    return u.value(r);
  };
  const int steps = static_cast<int>(std::round(1.0 / coarse));
  for (size_t a = 0; a < M; ++a)
    for (size_t b = a + 1; b < M; ++b)
      for (size_t c = b + 1; c < M; ++c) {
        double loc_best = -kInf, loc_wa = 0.0, loc_wb = 0.0;
        for (int ta = 0; ta <= steps; ++ta)
          for (int tb = 0; tb <= steps - ta; ++tb) {
            const double wa = static_cast<double>(ta) / steps;
            const double wb = static_cast<double>(tb) / steps;
            const double val = eval(a, b, c, wa, wb);
            if (val > loc_best) {
              loc_best = val;
              loc_wa = wa;
              loc_wb = wb;
            }
          }
        // Fine pass in the +-coarse box around the coarse argmax.
        const int fsteps = static_cast<int>(std::round(2.0 * coarse / fine));
        for (int ta = 0; ta <= fsteps; ++ta)
          for (int tb = 0; tb <= fsteps; ++tb) {
            const double wa = std::clamp(loc_wa - coarse + ta * fine, 0.0, 1.0);
            const double wb = std::clamp(loc_wb - coarse + tb * fine, 0.0, 1.0);
            if (wa + wb > 1.0) continue;
            loc_best = std::max(loc_best, eval(a, b, c, wa, wb));
          }
        best = std::max(best, loc_best);
      }
  return best;
}

}  // namespace

bool SparsityReport::all_pass() const {
  for (const auto& u : utilities)
    if (!u.pass) return false;
  return true;
}

SparsityReport verify_sparsity(const Neighborhoods& nb, const LinkGains& gains,
                               double bandwidth_hz, double p_max,
                               std::span<const double> loads_bps, const SparsityOptions& opts) {
  const int n = nb.n_aps();
  const int k = nb.n_devices();
  if (n > 2 || k > 2) throw ValidationError("verify_sparsity: instance too large (n,k <= 2)");
  if (opts.power_grid.empty() || opts.power_grid.size() > 5)
    throw ValidationError("verify_sparsity: power grid must have 1..5 levels");
  for (double p : opts.power_grid)
    if (p < 0.0 || p > p_max)
      throw ValidationError("verify_sparsity: grid level outside [0, P_max]");

  EnumeratedProfiles en =
      enumerate_grid_profiles(nb, gains, opts.power_grid, opts.max_enumerated_profiles);

  SparsityReport report;
  report.profile_count = static_cast<int>(en.profiles.size());

  const DelayUtility delay(std::vector<double>(loads_bps.begin(), loads_bps.end()));
  const WeightedSumRateUtility wsr(std::vector<double>(loads_bps.size(), 1.0));
  const std::vector<std::pair<std::string, const Utility*>> utilities = {
      {"delay", &delay}, {"weighted_sum_rate", &wsr}};

  for (const auto& [name, u] : utilities) {
    SparsityUtilityReport ur;
    ur.utility_name = name;
    const int top_m = std::min<int>(k + 2, report.profile_count);
    for (int m = 1; m <= top_m; ++m) {
      if (m == 1) ur.best_by_m.push_back(best_single(en.rho, *u, bandwidth_hz));
      else if (m == 2)
        ur.best_by_m.push_back(
            std::max(ur.best_by_m.back(),
                     best_pair(en.rho, *u, bandwidth_hz, opts.beta_resolution)));
      else if (m == 3)
        ur.best_by_m.push_back(std::max(ur.best_by_m.back(),
                                        best_triple(en.rho, *u, bandwidth_hz,
                                                    opts.coarse_resolution,
                                                    opts.beta_resolution)));
      else
        ur.best_by_m.push_back(ur.best_by_m.back());  // refined below by the bound
    }
    ur.upper_bound = exact_mixture_bound(en.rho, *u, bandwidth_hz);
    const double best_k = ur.best_by_m[std::min<int>(k, top_m) - 1];
    if (best_k == -kInf) {
      // A nondecreasing utility that is -inf on the hull boundary is -inf on
      // every mixture, so the echo holds trivially.
      ur.delay_infeasible = true;
      ur.pass = ur.upper_bound == -kInf;
    } else {
      ur.pass = best_k >= ur.upper_bound - opts.tolerance;
    }
    report.utilities.push_back(std::move(ur));
  }
  return report;
}

}  // namespace ranopt
