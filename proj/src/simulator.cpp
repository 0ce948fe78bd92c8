#include "ranopt/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <limits>
#include <queue>

#include "ranopt/errors.hpp"
#include "ranopt/rng.hpp"

namespace ranopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInvLn2 = 1.4426950408889634;

enum class EventKind { kArrival, kDeparture, kProbe };

struct Event {
  double time;
  std::uint64_t seq;  // deterministic tie-break
  EventKind kind;
  int device;
  std::uint64_t generation;  // departures only; stale entries are skipped
};

struct EventLater {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

struct ServingLink {
  int segment;
  double own_psd_gain;  // p_i^m g_{i->j}
};

struct ToggleEntry {
  int segment;
  int device;       // affected device j
  double psd_gain;  // p_l^m g_{l->j} added to I_{j,m} while l is busy
};

struct Packet {
  double arrival;
  double bits;
};

}  // namespace

SimOutcome simulate(const SimConfig& cfg) {
  if (!cfg.plan || !cfg.scenario || !cfg.nb || !cfg.gains)
    throw ValidationError("simulate: plan, scenario, nb, and gains are all required");
  const AllocationPlan& plan = *cfg.plan;
  const NetworkScenario& sc = *cfg.scenario;
  const Neighborhoods& nb = *cfg.nb;
  const LinkGains& gains = *cfg.gains;
  validate_plan(plan);
  const int n = nb.n_aps();
  const int k = nb.n_devices();
  if (!plan.profiles.empty() && plan.profiles.front().n_aps() != n)
    throw ValidationError("simulate: plan AP count does not match the scenario");
  if (sc.n_devices() != k)
    throw ValidationError("simulate: scenario device count does not match the gains");
  if (cfg.horizon_s <= 0.0) throw ValidationError("simulate: horizon must be positive");

  const int M = plan.n_segments();
  const double L = sc.params.mean_packet_bits;

  // Static per-device service structure and the busy-toggle fanout per device.
  std::vector<std::vector<ServingLink>> serving(k);
  std::vector<std::vector<ToggleEntry>> fanout(k);  // keyed by the toggling device q
  std::vector<std::vector<char>> served_on(M, std::vector<char>(k, 0));
  for (int m = 0; m < M; ++m) {
    const PowerProfile& prof = plan.profiles[m];
    for (int i = 0; i < n; ++i) {
      const int j = prof.served[i];
      if (j == kIdle || prof.psd[i] <= 0.0) continue;
      served_on[m][j] = 1;
      serving[j].push_back({m, prof.psd[i] * gains.g(i, j)});
    }
  }
  for (int m = 0; m < M; ++m) {
    const PowerProfile& prof = plan.profiles[m];
    for (int l = 0; l < n; ++l) {
      const int q = prof.served[l];
      if (q == kIdle || prof.psd[l] <= 0.0) continue;
      for (int j : nb.k_of_ap[l])
        if (served_on[m][j]) fanout[q].push_back({m, j, prof.psd[l] * gains.g(l, j)});
    }
  }

  // Busy interference received per (device, segment), from currently busy APs.
  std::vector<double> interference(static_cast<size_t>(k) * std::max(M, 1), 0.0);
  auto intf = [&](int j, int m) -> double& { return interference[static_cast<size_t>(j) * M + m]; };

  std::vector<std::deque<Packet>> queues(k);
  std::vector<double> head_remaining(k, 0.0);
  std::vector<double> rate(k, 0.0);           // bits/s while busy
  std::vector<double> last_update(k, 0.0);
  std::vector<std::uint64_t> departure_gen(k, 0);

  auto device_rate = [&](int j) {
    double r = 0.0;
    for (const ServingLink& link : serving[j]) {
      const double other = intf(j, link.segment) - link.own_psd_gain;
      const double gamma = link.own_psd_gain / (nb.residual_noise[j] + other);
      r += plan.beta_hz[link.segment] * std::log1p(gamma) * kInvLn2;
    }
    return r;
  };

  std::priority_queue<Event, std::vector<Event>, EventLater> pq;
  std::uint64_t seq = 0;
  std::vector<Rng> streams;
  streams.reserve(k);
  for (int j = 0; j < k; ++j) streams.emplace_back(Rng::derive(cfg.seed, 0x51e0 + j));

  const double horizon = cfg.horizon_s;
  const double warmup_end = cfg.warmup_frac * horizon;
  for (int j = 0; j < k; ++j) {
    if (sc.lambda_pps[j] <= 0.0) continue;
    pq.push({streams[j].exponential(1.0 / sc.lambda_pps[j]), seq++, EventKind::kArrival, j, 0});
  }
  const double mid_point = 0.5 * (warmup_end + horizon);
  pq.push({mid_point, seq++, EventKind::kProbe, -1, 0});
  pq.push({horizon * (1.0 - 1e-12), seq++, EventKind::kProbe, -2, 0});

  std::vector<std::vector<double>> delays(k);
  std::vector<std::int64_t> post_warmup_packets(k, 0);
  std::vector<size_t> mid_queue(k, 0), end_queue(k, 0);
  std::int64_t total_arrivals = 0, total_departures = 0;

  std::vector<int> dirty;
  std::vector<char> dirty_mark(k, 0);

  auto schedule_departure = [&](int j, double now) {
    ++departure_gen[j];
    if (rate[j] > 0.0) {
      const double t = now + head_remaining[j] / rate[j];
      pq.push({t, seq++, EventKind::kDeparture, j, departure_gen[j]});
    }
  };

  // Flip device q's busy state and refresh every affected in-service rate.
  auto toggle = [&](int q, bool on, double now) {
    dirty.clear();
    for (const ToggleEntry& e : fanout[q]) {
      intf(e.device, e.segment) += on ? e.psd_gain : -e.psd_gain;
      if (!dirty_mark[e.device]) {
        dirty_mark[e.device] = 1;
        dirty.push_back(e.device);
      }
    }
    for (int j : dirty) {
      dirty_mark[j] = 0;
      if (queues[j].empty()) continue;
      head_remaining[j] -= (now - last_update[j]) * rate[j];
      head_remaining[j] = std::max(head_remaining[j], 0.0);
      last_update[j] = now;
      rate[j] = device_rate(j);
      schedule_departure(j, now);
    }
  };

  while (!pq.empty()) {
    const Event ev = pq.top();
    if (ev.time > horizon) break;
    pq.pop();
    const double now = ev.time;

    switch (ev.kind) {
      case EventKind::kProbe: {
        for (int j = 0; j < k; ++j)
          (ev.device == -1 ? mid_queue[j] : end_queue[j]) = queues[j].size();
        break;
      }
      case EventKind::kArrival: {
        const int j = ev.device;
        ++total_arrivals;
        queues[j].push_back({now, streams[j].exponential(L)});
        pq.push({now + streams[j].exponential(1.0 / sc.lambda_pps[j]), seq++,
                 EventKind::kArrival, j, 0});
        if (queues[j].size() == 1) {
          head_remaining[j] = queues[j].front().bits;
          last_update[j] = now;
          rate[j] = 0.0;
          toggle(j, true, now);  // refreshes j's own rate and departure too
        }
        break;
      }
      case EventKind::kDeparture: {
        const int j = ev.device;
        if (ev.generation != departure_gen[j]) break;  // superseded
        head_remaining[j] -= (now - last_update[j]) * rate[j];
        last_update[j] = now;
        const Packet head = queues[j].front();
        queues[j].pop_front();
        ++total_departures;
        if (head.arrival >= warmup_end) {
          delays[j].push_back(now - head.arrival);
          ++post_warmup_packets[j];
        }
        if (queues[j].empty()) {
          rate[j] = 0.0;
          ++departure_gen[j];
          toggle(j, false, now);
        } else {
          head_remaining[j] = queues[j].front().bits;
          schedule_departure(j, now);
        }
        break;
      }
    }
  }

  SimOutcome out;
  out.horizon_s = horizon;
  out.total_arrivals = total_arrivals;
  out.total_departures = total_departures;
  for (int j = 0; j < k; ++j) out.in_system_at_end += static_cast<std::int64_t>(queues[j].size());

  double delay_sum = 0.0;
  std::int64_t delay_count = 0;
  for (int j = 0; j < k; ++j) {
    DeviceOutcome d;
    d.device = j;
    d.packets = post_warmup_packets[j];
    std::vector<double>& samples = delays[j];
    if (!samples.empty()) {
      double sum = 0.0;
      for (double x : samples) sum += x;
      d.mean_delay_s = sum / static_cast<double>(samples.size());
      delay_sum += sum;
      delay_count += static_cast<std::int64_t>(samples.size());
      auto pct = [&](double q) {
        const size_t idx = std::min(samples.size() - 1,
                                    static_cast<size_t>(q * static_cast<double>(samples.size())));
        std::nth_element(samples.begin(), samples.begin() + idx, samples.end());
        return samples[idx];
      };
      d.p50_s = pct(0.50);
      d.p95_s = pct(0.95);
      d.p99_s = pct(0.99);
    }
    const bool no_service = sc.lambda_pps[j] > 0.0 && serving[j].empty();
    d.unstable = no_service ||
                 (end_queue[j] >= 20 && end_queue[j] >= 2 * mid_queue[j] + 5);
    out.devices.push_back(d);
  }
  out.network_mean_delay_s = delay_count > 0 ? delay_sum / static_cast<double>(delay_count) : 0.0;
  return out;
}

std::vector<double> analytic_delays(std::span<const double> rates_bps,
                                    std::span<const double> arrival_pps,
                                    double mean_packet_bits) {
  if (rates_bps.size() != arrival_pps.size())
    throw ContractViolation("analytic_delays: rates and arrivals sizes differ");
  std::vector<double> delays(rates_bps.size());
  for (size_t j = 0; j < rates_bps.size(); ++j) {
    const double margin = rates_bps[j] / mean_packet_bits - arrival_pps[j];
    delays[j] = margin > 0.0 ? 1.0 / margin : kInf;
  }
  return delays;
}

double analytic_mean_delay(std::span<const double> rates_bps,
                           std::span<const double> arrival_pps, double mean_packet_bits) {
  const std::vector<double> delays = analytic_delays(rates_bps, arrival_pps, mean_packet_bits);
  double weighted = 0.0, total_rate = 0.0;
  for (size_t j = 0; j < delays.size(); ++j) {
    if (delays[j] == kInf) return kInf;
    weighted += arrival_pps[j] * delays[j];
    total_rate += arrival_pps[j];
  }
  return total_rate > 0.0 ? weighted / total_rate : 0.0;
}

void write_outcome_csv(const SimOutcome& outcome, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  out << "device,mean_delay_s,p50_s,p95_s,p99_s,packets,unstable\n";
  char buf[160];
  for (const DeviceOutcome& d : outcome.devices) {
    std::snprintf(buf, sizeof buf, "%d,%.9g,%.9g,%.9g,%.9g,%lld,%d\n", d.device, d.mean_delay_s,
                  d.p50_s, d.p95_s, d.p99_s, static_cast<long long>(d.packets),
                  d.unstable ? 1 : 0);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "network,%.9g,,,,%lld,\n", outcome.network_mean_delay_s,
                static_cast<long long>(outcome.total_departures));
  out << buf;
}

}  // namespace ranopt
