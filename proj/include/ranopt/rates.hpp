#pragma once

#include <string>
#include <vector>

#include "ranopt/channel.hpp"

namespace ranopt {

inline constexpr int kIdle = -1;

/// One spectrum segment's flat assignment: per-AP served device and PSD.
struct PowerProfile {
  std::vector<int> served;  // device index, or kIdle
  std::vector<double> psd;  // W/Hz, in [0, P_max]; 0 whenever idle

  PowerProfile() = default;
  PowerProfile(std::vector<int> z, std::vector<double> p);

  int n_aps() const { return static_cast<int>(served.size()); }
  bool idle(int ap) const { return served[ap] == kIdle; }
  /// Zeroes the PSD of idle APs (an idle AP transmits nothing).
  void normalize();

  bool operator==(const PowerProfile&) const = default;
};

/// A set of profiles with segment bandwidths summing to W, plus implied rates.
struct AllocationPlan {
  std::vector<PowerProfile> profiles;
  std::vector<double> beta_hz;    // segment bandwidths, >= 0, sum == bandwidth_hz
  std::vector<double> rates_bps;  // per-device, consistent with profiles/beta
  double bandwidth_hz = 0.0;
  std::string scheme;

  int n_segments() const { return static_cast<int>(profiles.size()); }
  int active_segments(double floor_frac = 1e-9) const;
};

/// SINR of link ap->device under the profile. Requires ap in N_device.
double sinr(const PowerProfile& profile, int ap, int device, const Neighborhoods& nb,
            const LinkGains& gains);

/// Shannon spectral efficiency, bits/s/Hz.
double spectral_efficiency(double gamma);

/// Per-device sum of link spectral efficiencies under one profile (bits/s/Hz).
std::vector<double> profile_rates(const PowerProfile& profile, const Neighborhoods& nb,
                                  const LinkGains& gains);

/// r_j = sum_m beta^m * profile_rates(m)_j. Requires |sum beta - W| <= 1e-9 W.
std::vector<double> plan_rates(const AllocationPlan& plan, const Neighborhoods& nb,
                               const LinkGains& gains);

/// Total transmit power per AP: P_i = sum_m beta^m p_i^m (W).
std::vector<double> plan_power(const AllocationPlan& plan);

void validate_plan(const AllocationPlan& plan);

void save_plan(const AllocationPlan& plan, const std::string& path);
AllocationPlan load_plan(const std::string& path);
std::string plan_to_json(const AllocationPlan& plan);
AllocationPlan plan_from_json(const std::string& text);

}  // namespace ranopt
