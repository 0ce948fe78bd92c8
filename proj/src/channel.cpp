#include "ranopt/channel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "ranopt/errors.hpp"
#include "ranopt/rng.hpp"

namespace ranopt {

LinkGains LinkGains::uniform(int n_aps, int n_devices, double value) {
  LinkGains g;
  g.n_aps = n_aps;
  g.n_devices = n_devices;
  g.gain.assign(static_cast<size_t>(n_aps) * n_devices, value);
  g.los.assign(g.gain.size(), true);
  g.shadowing_db.assign(g.gain.size(), 0.0);
  return g;
}

bool Neighborhoods::in_neighborhood(int ap, int device) const {
  const auto& nj = n_of_device[device];
  return std::find(nj.begin(), nj.end(), ap) != nj.end();
}

double pathloss_db(double distance_m, bool los) {
  const double r = std::max(distance_m, 1.0);
  return los ? 30.18 + 26.7 * std::log10(r) : 34.53 + 36.0 * std::log10(r);
}

LinkGains build_gains(const NetworkScenario& s) {
  validate_scenario(s);
  const int n = s.n_aps();
  const int k = s.n_devices();
  const ChannelConfig& cc = s.params.channel;

  LinkGains out;
  out.n_aps = n;
  out.n_devices = k;
  out.gain.resize(static_cast<size_t>(n) * k);
  out.los.resize(out.gain.size());
  out.shadowing_db.assign(out.gain.size(), 0.0);

  Rng rng(Rng::derive(s.params.seed, /*salt=*/0xc4a1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) {
      const size_t idx = static_cast<size_t>(i) * k + j;
      const double dx = s.ap_positions[i].x - s.device_positions[j].x;
      const double dy = s.ap_positions[i].y - s.device_positions[j].y;
      const double dist = std::sqrt(dx * dx + dy * dy);
      bool los = true;
      switch (cc.los_mode) {
        case LosMode::kDistanceProbability:
          los = rng.bernoulli(std::exp(-dist / cc.los_scale_m));
          break;
        case LosMode::kAlwaysLos: los = true; break;
        case LosMode::kAlwaysNlos: los = false; break;
      }
      double shadow = 0.0;
      if (cc.shadowing) {
        const double sigma = los ? cc.shadow_sigma_los_db : cc.shadow_sigma_nlos_db;
        shadow = rng.normal(0.0, sigma);
      }
      out.los[idx] = los;
      out.shadowing_db[idx] = shadow;
      out.gain[idx] = std::pow(10.0, -(pathloss_db(dist, los) + shadow) / 10.0);
    }
  }
  return out;
}

Neighborhoods build_neighborhoods(const NetworkScenario& s, const LinkGains& gains) {
  const int n = gains.n_aps;
  const int k = gains.n_devices;
  const double p_max = s.p_max_w_hz();
  const double n0 = s.noise_w_hz();
  const double xi = s.params.snr_threshold;
  const int alpha = s.params.neighborhood_cap;

  // Candidate membership by the strict SNR test, strongest-alpha per device.
  std::vector<std::vector<int>> n_of_device(k);
  for (int j = 0; j < k; ++j) {
    std::vector<int>& nj = n_of_device[j];
    for (int i = 0; i < n; ++i)
      if (p_max * gains.g(i, j) > xi * n0) nj.push_back(i);
    std::stable_sort(nj.begin(), nj.end(), [&](int a, int b) {
      if (gains.g(a, j) != gains.g(b, j)) return gains.g(a, j) > gains.g(b, j);
      return a < b;
    });
    if (static_cast<int>(nj.size()) > alpha) nj.resize(alpha);
  }

  // Enforce the cap on the AP side too; a dropped pair moves the AP back into the
  // device's stationary-noise pool so duality stays exact.
  std::vector<std::vector<int>> k_of_ap(n);
  for (int j = 0; j < k; ++j)
    for (int i : n_of_device[j]) k_of_ap[i].push_back(j);
  for (int i = 0; i < n; ++i) {
    std::vector<int>& ki = k_of_ap[i];
    if (static_cast<int>(ki.size()) > alpha) {
      std::stable_sort(ki.begin(), ki.end(), [&](int a, int b) {
        if (gains.g(i, a) != gains.g(i, b)) return gains.g(i, a) > gains.g(i, b);
        return a < b;
      });
      for (size_t t = alpha; t < ki.size(); ++t) {
        std::vector<int>& nj = n_of_device[ki[t]];
        nj.erase(std::find(nj.begin(), nj.end(), i));
      }
      ki.resize(alpha);
    }
    std::sort(ki.begin(), ki.end());
  }

  Neighborhoods nb;
  nb.n_of_device = std::move(n_of_device);
  nb.k_of_ap = std::move(k_of_ap);
  nb.residual_noise.assign(k, 0.0);
  for (int j = 0; j < k; ++j) {
    double residual = n0;
    for (int i = 0; i < n; ++i)
      if (!nb.in_neighborhood(i, j)) residual += p_max * gains.g(i, j);
    nb.residual_noise[j] = residual;
    if (nb.n_of_device[j].empty()) nb.unserved_devices.push_back(j);
  }
  return nb;
}

void dump_gains_csv(const LinkGains& gains, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  for (int i = 0; i < gains.n_aps; ++i) {
    for (int j = 0; j < gains.n_devices; ++j) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.9e", gains.g(i, j));
      out << buf << (j + 1 < gains.n_devices ? "," : "");
    }
    out << "\n";
  }
}

}  // namespace ranopt
