#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ranopt {

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

enum class LosMode {
  kDistanceProbability,  // P(LOS) = exp(-R / los_scale_m)
  kAlwaysLos,
  kAlwaysNlos,
};

/// Pathloss / shadowing knobs. The LTE table gives both LOS and NLOS formulas but
/// no selection rule; the distance-decaying Bernoulli default is overridable here.
struct ChannelConfig {
  LosMode los_mode = LosMode::kDistanceProbability;
  double los_scale_m = 200.0;
  bool shadowing = true;
  double shadow_sigma_los_db = 4.0;
  double shadow_sigma_nlos_db = 10.0;
  bool operator==(const ChannelConfig&) const = default;
};

struct ScenarioParams {
  int n_aps = 0;
  int n_devices = 0;
  double area_side_m = 0.0;
  double lambda_pps = 10.0;           // per-device packet arrival rate (packets/s)
  double mean_packet_bits = 5.0e5;
  double bandwidth_hz = 1.0e7;        // W
  double p_max_dbm = 23.0;            // per-AP transmit power budget, flat over W
  double noise_psd_dbm_hz = -174.0;   // n_0
  double snr_threshold = 1.0;         // xi, linear
  int neighborhood_cap = 20;          // alpha
  std::uint64_t seed = 0;
  ChannelConfig channel;
  bool operator==(const ScenarioParams&) const = default;
};

/// Ground truth consumed by every later stage. All radio quantities are kept in
/// linear units (W/Hz, Hz, bits/s); dBm appears only in the serialized params.
struct NetworkScenario {
  ScenarioParams params;
  std::vector<Point> ap_positions;
  std::vector<Point> device_positions;
  std::vector<double> lambda_pps;  // per-device arrival rates, size n_devices

  int n_aps() const { return static_cast<int>(ap_positions.size()); }
  int n_devices() const { return static_cast<int>(device_positions.size()); }

  /// Peak PSD constraint P_max in W/Hz: the dBm power budget spread over W.
  double p_max_w_hz() const;
  /// Noise PSD n_0 in W/Hz.
  double noise_w_hz() const;
  /// Per-device traffic in bits/s (lambda_j * L).
  std::vector<double> loads_bits() const;

  bool operator==(const NetworkScenario&) const = default;
};

double dbm_to_watt(double dbm);

/// Uniform i.i.d. placement over the square, deterministic in (params, seed).
NetworkScenario generate_scenario(const ScenarioParams& params);

/// Checks the scenario invariants, throwing ValidationError on the first failure.
void validate_scenario(const NetworkScenario& s);

void save_scenario(const NetworkScenario& s, const std::string& path);
NetworkScenario load_scenario(const std::string& path);

std::string scenario_to_json(const NetworkScenario& s);
NetworkScenario scenario_from_json(const std::string& text);

}  // namespace ranopt
