#include "ranopt/affine_solver.hpp"

#include <algorithm>
#include <cmath>

#include "ranopt/errors.hpp"
#include "ranopt/rng.hpp"

namespace ranopt {

// The update formulas below are the exact blockwise maximizers of the
// quadratic-transform objective stated in natural log; the reported objective is
// in bits. Both differ by the positive factor 1/ln2, so the argmax per block and
// the monotonicity of the cycle are unaffected by the choice of unit.

namespace {

// Total received PSD at each device from currently transmitting APs in its
// neighborhood (including the device's own serving APs).
std::vector<double> received_totals(const SolverState& st, const Neighborhoods& nb,
                                    const LinkGains& gains) {
  std::vector<double> totals(nb.n_devices(), 0.0);
  for (int j = 0; j < nb.n_devices(); ++j) {
    double sum = 0.0;
    for (int l : nb.n_of_device[j])
      if (st.z[l] != kIdle) sum += st.p[l] * gains.g(l, j);
    totals[j] = sum;
  }
  return totals;
}

bool is_candidate(const Neighborhoods& nb, int ap, int device) {
  const auto& ki = nb.k_of_ap[ap];
  return std::binary_search(ki.begin(), ki.end(), device);
}

}  // namespace

double affine_objective(const PowerProfile& profile, std::span<const double> weights,
                        const Neighborhoods& nb, const LinkGains& gains) {
  const std::vector<double> rho = profile_rates(profile, nb, gains);
  double total = 0.0;
  for (size_t j = 0; j < rho.size(); ++j) total += weights[j] * rho[j];
  return total;
}

SolverState make_initial_state(std::span<const double> weights, const Neighborhoods& nb,
                               const LinkGains& gains, double p_max, const SolveOptions& opts) {
  const int n = nb.n_aps();
  SolverState st;
  st.z.assign(n, kIdle);
  st.p.assign(n, 0.0);
  st.gamma.assign(n, 0.0);
  st.y.assign(n, 0.0);

  switch (opts.init) {
    case InitMode::kWeightedGain: {
      // Greedy by weighted interference-free rate. Scoring by c_j * g_{i->j}
      // alone mis-ranks devices whenever raw gain dominance opposes weighted
      // rate dominance, and the z update cannot recover from that at high SINR
      // (the shared gamma_i penalizes every switch); the log compresses gains
      // to the scale the objective actually sees.
      for (int i = 0; i < n; ++i) {
        int best = kIdle;
        double best_score = 0.0;
        for (int j : nb.k_of_ap[i]) {
          const double snr = p_max * gains.g(i, j) / nb.residual_noise[j];
          const double score = weights[j] * std::log1p(snr);
          if (score > best_score) {
            best_score = score;
            best = j;
          }
        }
        if (best == kIdle && opts.power_mode == PowerMode::kFrozenFull &&
            !nb.k_of_ap[i].empty()) {
          double best_gain = -1.0;
          for (int j : nb.k_of_ap[i])
            if (gains.g(i, j) > best_gain) {
              best_gain = gains.g(i, j);
              best = j;
            }
        }
        st.z[i] = best;
        st.p[i] = best == kIdle ? 0.0 : p_max;
      }
      break;
    }
    case InitMode::kRandom: {
      Rng rng(Rng::derive(opts.seed, /*salt=*/0xa1f1));
      for (int i = 0; i < n; ++i) {
        const auto& ki = nb.k_of_ap[i];
        if (ki.empty()) continue;
        if (opts.power_mode == PowerMode::kFrozenFull) {
          st.z[i] = ki[rng.uniform_index(ki.size())];
          st.p[i] = p_max;
        } else {
          const std::uint64_t pick = rng.uniform_index(ki.size() + 1);
          if (pick < ki.size()) {
            st.z[i] = ki[pick];
            st.p[i] = opts.power_mode == PowerMode::kBinary ? p_max : rng.uniform(0.0, p_max);
          }
        }
      }
      break;
    }
    case InitMode::kGiven: {
      if (opts.initial.n_aps() != n)
        throw ContractViolation("solve_affine: initial profile has wrong AP count");
      for (int i = 0; i < n; ++i) {
        const int j = opts.initial.served[i];
        if (j != kIdle && !is_candidate(nb, i, j))
          throw ContractViolation("solve_affine: initial profile serves a non-candidate device");
        st.z[i] = j;
        double p = j == kIdle ? 0.0 : opts.initial.psd[i];
        if (j != kIdle && opts.power_mode != PowerMode::kContinuous) p = p_max;
        st.p[i] = std::clamp(p, 0.0, p_max);
      }
      break;
    }
  }
  return st;
}

void update_gamma(SolverState& st, const Neighborhoods& nb, const LinkGains& gains) {
  const std::vector<double> totals = received_totals(st, nb, gains);
  for (int i = 0; i < nb.n_aps(); ++i) {
    const int j = st.z[i];
    if (j == kIdle) {
      st.gamma[i] = 0.0;
      continue;
    }
    const double own = st.p[i] * gains.g(i, j);
    st.gamma[i] = own / (nb.residual_noise[j] + totals[j] - own);
  }
}

void update_y(SolverState& st, std::span<const double> weights, const Neighborhoods& nb,
              const LinkGains& gains) {
  const std::vector<double> totals = received_totals(st, nb, gains);
  for (int i = 0; i < nb.n_aps(); ++i) {
    const int j = st.z[i];
    if (j == kIdle) {
      st.y[i] = 0.0;
      continue;
    }
    const double num = std::sqrt(weights[j] * (1.0 + st.gamma[i]) * st.p[i] * gains.g(i, j));
    st.y[i] = num / (nb.residual_noise[j] + totals[j]);
  }
}

void update_p(SolverState& st, std::span<const double> weights, const Neighborhoods& nb,
              const LinkGains& gains, double p_max, bool flip_sign) {
  const int n = nb.n_aps();
  // Interference footprint of AP i: how hard its PSD hits every served device.
  std::vector<double> footprint(n, 0.0);
  for (int l = 0; l < n; ++l) {
    const int q = st.z[l];
    if (q == kIdle || st.y[l] == 0.0) continue;
    const double w = st.y[l] * st.y[l];
    for (int i : nb.n_of_device[q]) footprint[i] += w * gains.g(i, q);
  }
  for (int i = 0; i < n; ++i) {
    const int j = st.z[i];
    if (j == kIdle) {
      st.p[i] = 0.0;
      continue;
    }
    double num = weights[j] * (1.0 + st.gamma[i]) * gains.g(i, j) * st.y[i] * st.y[i];
    if (flip_sign) num = -num;
    if (num <= 0.0) {
      st.p[i] = 0.0;
      continue;
    }
    const double den = footprint[i] * footprint[i];
    st.p[i] = den == 0.0 ? p_max : std::min(p_max, num / den);
  }
}

void update_z(SolverState& st, std::span<const double> weights, const Neighborhoods& nb,
              const LinkGains& gains, PowerMode mode) {
  const std::vector<double> totals = received_totals(st, nb, gains);
  const int n = nb.n_aps();
  std::vector<int> next(n, kIdle);
  for (int i = 0; i < n; ++i) {
    const auto& ki = nb.k_of_ap[i];
    if (ki.empty()) continue;
    const double log_term = std::log1p(st.gamma[i]);
    int best = kIdle;
    double best_phi = 0.0;
    bool have = false;
    for (int j : ki) {
      const double cj = weights[j];
      double phi = cj * log_term - cj * st.gamma[i];
      phi += 2.0 * st.y[i] * std::sqrt(cj * (1.0 + st.gamma[i]) * st.p[i] * gains.g(i, j));
      phi -= st.y[i] * st.y[i] * (nb.residual_noise[j] + totals[j]);
      if (!have || phi > best_phi) {
        best_phi = phi;
        best = j;
        have = true;
      }
    }
    if (mode == PowerMode::kFrozenFull) {
      next[i] = best;  // full reuse: the AP keeps transmitting regardless
    } else {
      // Idle contributes exactly zero, so serving must strictly beat it.
      next[i] = best_phi > 0.0 ? best : kIdle;
    }
  }
  for (int i = 0; i < n; ++i) {
    st.z[i] = next[i];
    if (st.z[i] == kIdle) {
      st.p[i] = 0.0;
      st.gamma[i] = 0.0;
      st.y[i] = 0.0;
    }
  }
}

namespace {

// Coordinate-wise exact power refinement: maximize the true objective in each
// p_i with everything else fixed (33-point grid plus golden-section refinement
// around the best bracket). Escapes full-power stationary points the cyclic
// update cannot leave. Returns true if any coordinate moved.
bool polish_powers(SolverState& st, std::span<const double> weights, const Neighborhoods& nb,
                   const LinkGains& gains, double p_max, double tol) {
  const int n = nb.n_aps();
  bool improved = false;
  std::vector<double> totals = received_totals(st, nb, gains);
  for (int i = 0; i < n; ++i) {
    if (st.z[i] == kIdle) continue;
    // Per serving AP l: own signal A_l (v-scaled for l == i), interference base
    // B_l excluding AP i, and AP i's coupling coefficient C_l.
    struct Term {
      double c, a, b, coef;
    };
    std::vector<Term> terms;
    terms.reserve(n);
    double a_i = 0.0, b_i = 0.0;
    for (int l = 0; l < n; ++l) {
      const int q = st.z[l];
      if (q == kIdle) continue;
      const bool hears_i = l != i && nb.in_neighborhood(i, q);
      const double own = st.p[l] * gains.g(l, q);
      double base = nb.residual_noise[q] + totals[q] - own;
      if (hears_i) base -= st.p[i] * gains.g(i, q);
      if (l == i) {
        a_i = gains.g(i, q);
        b_i = base;
      } else {
        terms.push_back({weights[q], own, base, hears_i ? gains.g(i, q) : 0.0});
      }
    }
    const double ci = weights[st.z[i]];
    auto objective_at = [&](double v) {
      double total = ci * std::log1p(v * a_i / b_i);
      for (const Term& t : terms) total += t.c * std::log1p(t.a / (t.b + v * t.coef));
      return total;
    };
    const double current = objective_at(st.p[i]);
    const int grid_n = 33;
    double best_v = st.p[i], best_val = current;
    for (int t = 0; t < grid_n; ++t) {
      const double v = p_max * static_cast<double>(t) / (grid_n - 1);
      const double val = objective_at(v);
      if (val > best_val) {
        best_val = val;
        best_v = v;
      }
    }
    double lo = std::max(0.0, best_v - p_max / (grid_n - 1));
    double hi = std::min(p_max, best_v + p_max / (grid_n - 1));
    const double golden = 0.6180339887498949;
    double m1 = hi - golden * (hi - lo), m2 = lo + golden * (hi - lo);
    double f1 = objective_at(m1), f2 = objective_at(m2);
    for (int t = 0; t < 50; ++t) {
      if (f1 >= f2) {
        hi = m2; m2 = m1; f2 = f1; m1 = hi - golden * (hi - lo); f1 = objective_at(m1);
      } else {
        lo = m1; m1 = m2; f1 = f2; m2 = lo + golden * (hi - lo); f2 = objective_at(m2);
      }
    }
    const double refined = f1 >= f2 ? m1 : m2;
    if (objective_at(refined) > best_val) {
      best_val = objective_at(refined);
      best_v = refined;
    }
    if (best_val > current + tol * std::max(std::abs(current), 1e-30)) {
      const double delta = best_v - st.p[i];
      st.p[i] = best_v;
      for (int j : nb.k_of_ap[i]) totals[j] += delta * gains.g(i, j);
      // in_neighborhood(i, q) for q == z_i is guaranteed, so totals stay exact.
      improved = true;
    }
  }
  return improved;
}

}  // namespace

AffineSolveReport solve_affine(std::span<const double> weights, const Neighborhoods& nb,
                               const LinkGains& gains, double p_max, const SolveOptions& opts) {
  const int n = nb.n_aps();
  const int k = nb.n_devices();
  if (static_cast<int>(weights.size()) != k)
    throw ContractViolation("solve_affine: weight vector size must equal device count");
  for (double c : weights)
    if (c < 0.0 || !std::isfinite(c))
      throw ContractViolation("solve_affine: weights must be finite and nonnegative");

  SolverState st = make_initial_state(weights, nb, gains, p_max, opts);

  AffineSolveReport report;
  auto current_profile = [&]() { return PowerProfile(st.z, st.p); };
  double objective = affine_objective(current_profile(), weights, nb, gains);
  report.objective_trace.push_back(objective);

  for (int iter = 1; iter <= opts.max_iters; ++iter) {
    update_gamma(st, nb, gains);
    update_y(st, weights, nb, gains);
    if (opts.power_mode == PowerMode::kContinuous)
      update_p(st, weights, nb, gains, p_max, opts.flip_p_update_sign);
    update_z(st, weights, nb, gains, opts.power_mode);
    if (opts.power_mode == PowerMode::kBinary)
      for (int i = 0; i < n; ++i) st.p[i] = st.z[i] == kIdle ? 0.0 : p_max;

    double next = affine_objective(current_profile(), weights, nb, gains);
    if (!std::isfinite(next))
      throw NumericalError("solve_affine: non-finite objective", iter);
    if (next < objective - 1e-9) throw MonotonicityError(iter, objective, next);

    const double denom = std::max({std::abs(objective), std::abs(next), 1e-30});
    bool settled = std::abs(next - objective) <= opts.tol * denom;
    // The cyclic update can crawl toward a power reduction for hundreds of
    // iterations; refine both at settlement and periodically mid-flight.
    if ((settled || iter % 25 == 0) && opts.power_mode == PowerMode::kContinuous &&
        !opts.flip_p_update_sign && polish_powers(st, weights, nb, gains, p_max, opts.tol)) {
      next = affine_objective(current_profile(), weights, nb, gains);
      settled = false;
    }
    report.objective_trace.push_back(next);
    report.iterations = iter;
    objective = next;
    if (settled) {
      report.converged = true;
      break;
    }
  }

  report.profile = current_profile();
  return report;
}

}  // namespace ranopt
