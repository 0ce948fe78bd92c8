#pragma once

#include <string>
#include <vector>

#include "ranopt/scenario.hpp"

namespace ranopt {

/// Dense n_aps x n_devices channel structure, row-major by AP.
struct LinkGains {
  int n_aps = 0;
  int n_devices = 0;
  std::vector<double> gain;          // linear power gain g_{i->j}
  std::vector<bool> los;             // LOS flag per link
  std::vector<double> shadowing_db;  // shadowing draw per link, dB

  double g(int ap, int device) const { return gain[static_cast<size_t>(ap) * n_devices + device]; }
  double& g(int ap, int device) { return gain[static_cast<size_t>(ap) * n_devices + device]; }

  static LinkGains uniform(int n_aps, int n_devices, double value);
};

/// Pruned candidate sets with residual noise floors.
struct Neighborhoods {
  std::vector<std::vector<int>> n_of_device;  // N_j, sorted by descending gain
  std::vector<std::vector<int>> k_of_ap;      // K_i, sorted ascending by device index
  std::vector<double> residual_noise;        // n_j in W/Hz
  std::vector<int> unserved_devices;         // devices with empty N_j

  int n_aps() const { return static_cast<int>(k_of_ap.size()); }
  int n_devices() const { return static_cast<int>(n_of_device.size()); }
  bool in_neighborhood(int ap, int device) const;
};

/// LTE pathloss, R in meters (clamped below at 1 m).
double pathloss_db(double distance_m, bool los);

LinkGains build_gains(const NetworkScenario& s);

/// N_j = {i : P_max g_{i->j} > xi n_0} capped at the alpha strongest on both sides;
/// excluded APs are folded into n_j at full power.
Neighborhoods build_neighborhoods(const NetworkScenario& s, const LinkGains& gains);

/// CSV dump of the gain matrix: one row per AP, one column per device.
void dump_gains_csv(const LinkGains& gains, const std::string& path);

}  // namespace ranopt
