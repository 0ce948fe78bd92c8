#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ranopt/rates.hpp"
#include "ranopt/scenario.hpp"

namespace ranopt {

struct SimConfig {
  const AllocationPlan* plan = nullptr;
  const NetworkScenario* scenario = nullptr;
  const Neighborhoods* nb = nullptr;
  const LinkGains* gains = nullptr;
  double horizon_s = 0.0;       // simulated seconds
  double warmup_frac = 0.1;     // leading fraction of the horizon discarded
  std::uint64_t seed = 0;
};

struct DeviceOutcome {
  int device = 0;
  double mean_delay_s = 0.0;
  double p50_s = 0.0;
  double p95_s = 0.0;
  double p99_s = 0.0;
  std::int64_t packets = 0;     // departures counted post-warmup
  bool unstable = false;
};

struct SimOutcome {
  std::vector<DeviceOutcome> devices;
  double network_mean_delay_s = 0.0;  // over all counted packets
  std::int64_t total_arrivals = 0;
  std::int64_t total_departures = 0;
  std::int64_t in_system_at_end = 0;
  double horizon_s = 0.0;
};

/// Event-driven packet-level simulation of the plan: Poisson arrivals, exponential
/// packet sizes, one FIFO queue per device served at its aggregate instantaneous
/// rate. An AP is busy on a segment iff the device it serves there has a nonempty
/// queue; rates are refreshed whenever any queue empties or fills.
SimOutcome simulate(const SimConfig& cfg);

/// M/M/1 sojourn delays d_j = 1/(r_j/L - a_j); +inf where the queue is unstable.
std::vector<double> analytic_delays(std::span<const double> rates_bps,
                                    std::span<const double> arrival_pps,
                                    double mean_packet_bits);

/// Packet-weighted network mean of analytic_delays; +inf if any device is unstable.
double analytic_mean_delay(std::span<const double> rates_bps,
                           std::span<const double> arrival_pps, double mean_packet_bits);

void write_outcome_csv(const SimOutcome& outcome, const std::string& path);

}  // namespace ranopt
