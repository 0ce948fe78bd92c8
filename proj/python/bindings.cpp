#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ranopt/baselines.hpp"
#include "ranopt/errors.hpp"
#include "ranopt/pipeline.hpp"

namespace py = pybind11;
using namespace ranopt;

namespace {

// Thin wrappers so Python hands plain lists instead of spans.
std::vector<double> py_delay_gradient(const std::vector<double>& r,
                                      const std::vector<double>& loads, double floor_frac) {
  return delay_gradient(r, loads, floor_frac);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Joint spectrum allocation, user association, and power control";

  py::register_exception<ValidationError>(m, "ValidationError");
  py::register_exception<ParseError>(m, "ParseError");
  py::register_exception<ContractViolation>(m, "ContractViolation");
  py::register_exception<NumericalError>(m, "NumericalError");
  py::register_exception<MonotonicityError>(m, "MonotonicityError");

  py::class_<Point>(m, "Point")
      .def(py::init<>())
      .def_readwrite("x", &Point::x)
      .def_readwrite("y", &Point::y);

  py::enum_<LosMode>(m, "LosMode")
      .value("DISTANCE", LosMode::kDistanceProbability)
      .value("ALWAYS_LOS", LosMode::kAlwaysLos)
      .value("ALWAYS_NLOS", LosMode::kAlwaysNlos);

  py::class_<ChannelConfig>(m, "ChannelConfig")
      .def(py::init<>())
      .def_readwrite("los_mode", &ChannelConfig::los_mode)
      .def_readwrite("los_scale_m", &ChannelConfig::los_scale_m)
      .def_readwrite("shadowing", &ChannelConfig::shadowing)
      .def_readwrite("shadow_sigma_los_db", &ChannelConfig::shadow_sigma_los_db)
      .def_readwrite("shadow_sigma_nlos_db", &ChannelConfig::shadow_sigma_nlos_db);

  py::class_<ScenarioParams>(m, "ScenarioParams")
      .def(py::init<>())
      .def_readwrite("n_aps", &ScenarioParams::n_aps)
      .def_readwrite("n_devices", &ScenarioParams::n_devices)
      .def_readwrite("area_side_m", &ScenarioParams::area_side_m)
      .def_readwrite("lambda_pps", &ScenarioParams::lambda_pps)
      .def_readwrite("mean_packet_bits", &ScenarioParams::mean_packet_bits)
      .def_readwrite("bandwidth_hz", &ScenarioParams::bandwidth_hz)
      .def_readwrite("p_max_dbm", &ScenarioParams::p_max_dbm)
      .def_readwrite("noise_psd_dbm_hz", &ScenarioParams::noise_psd_dbm_hz)
      .def_readwrite("snr_threshold", &ScenarioParams::snr_threshold)
      .def_readwrite("neighborhood_cap", &ScenarioParams::neighborhood_cap)
      .def_readwrite("seed", &ScenarioParams::seed)
      .def_readwrite("channel", &ScenarioParams::channel);

  py::class_<NetworkScenario>(m, "NetworkScenario")
      .def(py::init<>())
      .def_readwrite("params", &NetworkScenario::params)
      .def_readwrite("ap_positions", &NetworkScenario::ap_positions)
      .def_readwrite("device_positions", &NetworkScenario::device_positions)
      .def_readwrite("lambda_pps", &NetworkScenario::lambda_pps)
      .def("n_aps", &NetworkScenario::n_aps)
      .def("n_devices", &NetworkScenario::n_devices)
      .def("p_max_w_hz", &NetworkScenario::p_max_w_hz)
      .def("noise_w_hz", &NetworkScenario::noise_w_hz)
      .def("loads_bits", &NetworkScenario::loads_bits)
      .def("__eq__", [](const NetworkScenario& a, const NetworkScenario& b) { return a == b; });

  m.def("generate_scenario", &generate_scenario, py::arg("params"));
  m.def("save_scenario", &save_scenario, py::arg("scenario"), py::arg("path"));
  m.def("load_scenario", &load_scenario, py::arg("path"));

  py::class_<LinkGains>(m, "LinkGains")
      .def(py::init<>())
      .def_static("uniform", &LinkGains::uniform)
      .def_readwrite("n_aps", &LinkGains::n_aps)
      .def_readwrite("n_devices", &LinkGains::n_devices)
      .def_readwrite("gain", &LinkGains::gain)
      .def("g", py::overload_cast<int, int>(&LinkGains::g, py::const_))
      .def("set_g", [](LinkGains& g, int i, int j, double v) { g.g(i, j) = v; });

  py::class_<Neighborhoods>(m, "Neighborhoods")
      .def(py::init<>())
      .def_readonly("n_of_device", &Neighborhoods::n_of_device)
      .def_readonly("k_of_ap", &Neighborhoods::k_of_ap)
      .def_readonly("residual_noise", &Neighborhoods::residual_noise)
      .def_readonly("unserved_devices", &Neighborhoods::unserved_devices)
      .def("in_neighborhood", &Neighborhoods::in_neighborhood);

  m.def("pathloss_db", &pathloss_db, py::arg("distance_m"), py::arg("los"));
  m.def("build_gains", &build_gains, py::arg("scenario"));
  m.def("build_neighborhoods", &build_neighborhoods, py::arg("scenario"), py::arg("gains"));

  m.attr("IDLE") = kIdle;

  py::class_<PowerProfile>(m, "PowerProfile")
      .def(py::init<>())
      .def(py::init<std::vector<int>, std::vector<double>>(), py::arg("served"), py::arg("psd"))
      .def_readwrite("served", &PowerProfile::served)
      .def_readwrite("psd", &PowerProfile::psd)
      .def("__eq__", [](const PowerProfile& a, const PowerProfile& b) { return a == b; });

  py::class_<AllocationPlan>(m, "AllocationPlan")
      .def(py::init<>())
      .def_readwrite("profiles", &AllocationPlan::profiles)
      .def_readwrite("beta_hz", &AllocationPlan::beta_hz)
      .def_readwrite("rates_bps", &AllocationPlan::rates_bps)
      .def_readwrite("bandwidth_hz", &AllocationPlan::bandwidth_hz)
      .def_readwrite("scheme", &AllocationPlan::scheme)
      .def("active_segments", &AllocationPlan::active_segments, py::arg("floor_frac") = 1e-9);

  m.def("sinr", &sinr);
  m.def("spectral_efficiency", &spectral_efficiency);
  m.def("profile_rates", &profile_rates);
  m.def("plan_rates", &plan_rates);
  m.def("plan_power", &plan_power);
  m.def("save_plan", &save_plan);
  m.def("load_plan", &load_plan);

  m.def("delay_utility", [](const std::vector<double>& r, const std::vector<double>& loads) {
    return delay_utility(r, loads);
  });
  m.def("delay_gradient", &py_delay_gradient, py::arg("rates_bps"), py::arg("loads_bps"),
        py::arg("floor_frac") = 1e-3);
  m.def("energy_cost",
        [](const std::vector<double>& power, double price, const std::vector<double>& maint) {
          return energy_cost(power, price, maint);
        });

  py::enum_<PowerMode>(m, "PowerMode")
      .value("CONTINUOUS", PowerMode::kContinuous)
      .value("FROZEN_FULL", PowerMode::kFrozenFull)
      .value("BINARY", PowerMode::kBinary);

  py::class_<SolveOptions>(m, "SolveOptions")
      .def(py::init<>())
      .def_readwrite("tol", &SolveOptions::tol)
      .def_readwrite("max_iters", &SolveOptions::max_iters)
      .def_readwrite("power_mode", &SolveOptions::power_mode)
      .def_readwrite("seed", &SolveOptions::seed);

  py::class_<AffineSolveReport>(m, "AffineSolveReport")
      .def_readonly("profile", &AffineSolveReport::profile)
      .def_readonly("objective_trace", &AffineSolveReport::objective_trace)
      .def_readonly("iterations", &AffineSolveReport::iterations)
      .def_readonly("converged", &AffineSolveReport::converged)
      .def("final_objective", &AffineSolveReport::final_objective);

  m.def(
      "solve_affine",
      [](const std::vector<double>& weights, const Neighborhoods& nb, const LinkGains& gains,
         double p_max, const SolveOptions& opts) {
        return solve_affine(weights, nb, gains, p_max, opts);
      },
      py::arg("weights"), py::arg("nb"), py::arg("gains"), py::arg("p_max"),
      py::arg("opts") = SolveOptions{});

  py::class_<PursuitOptions>(m, "PursuitOptions")
      .def(py::init<>())
      .def_readwrite("max_profiles", &PursuitOptions::max_profiles)
      .def_readwrite("stall_tol", &PursuitOptions::stall_tol)
      .def_readwrite("stall_iters", &PursuitOptions::stall_iters)
      .def_readwrite("seed", &PursuitOptions::seed)
      .def_readwrite("inner", &PursuitOptions::inner);

  py::class_<PursuitState>(m, "PursuitState")
      .def_readonly("profiles", &PursuitState::profiles)
      .def_readonly("beta_hz", &PursuitState::beta_hz)
      .def_readonly("rates_bps", &PursuitState::rates_bps)
      .def_readonly("utility_trace", &PursuitState::utility_trace)
      .def_readonly("inner_iterations", &PursuitState::inner_iterations)
      .def_readonly("active_segments", &PursuitState::active_segments)
      .def_readonly("feasible", &PursuitState::feasible);

  m.def(
      "pursue_delay",
      [](const std::vector<double>& loads_bps, const Neighborhoods& nb, const LinkGains& gains,
         double bandwidth_hz, double p_max, const PursuitOptions& opts) {
        const DelayUtility u(loads_bps);
        return pursue(u, nb, gains, bandwidth_hz, p_max, opts);
      },
      py::arg("loads_bps"), py::arg("nb"), py::arg("gains"), py::arg("bandwidth_hz"),
      py::arg("p_max"), py::arg("opts") = PursuitOptions{},
      "Profile pursuit under the packet-delay utility");

  m.def(
      "pursue_weighted_sum_rate",
      [](const std::vector<double>& weights, const Neighborhoods& nb, const LinkGains& gains,
         double bandwidth_hz, double p_max, const PursuitOptions& opts) {
        const WeightedSumRateUtility u(weights);
        return pursue(u, nb, gains, bandwidth_hz, p_max, opts);
      },
      py::arg("weights"), py::arg("nb"), py::arg("gains"), py::arg("bandwidth_hz"),
      py::arg("p_max"), py::arg("opts") = PursuitOptions{});

  m.def(
      "full_reuse_maxrsrp",
      [](const Neighborhoods& nb, const LinkGains& gains, double W, double p_max) {
        return full_reuse_maxrsrp(nb, gains, W, p_max);
      },
      py::arg("nb"), py::arg("gains"), py::arg("bandwidth_hz"), py::arg("p_max"));

  m.def(
      "full_reuse_opt_assoc",
      [](const std::vector<double>& loads_bps, const Neighborhoods& nb, const LinkGains& gains,
         double W, double p_max, const PursuitOptions& opts) {
        const DelayUtility u(loads_bps);
        return full_reuse_opt_assoc(u, nb, gains, W, p_max, opts);
      },
      py::arg("loads_bps"), py::arg("nb"), py::arg("gains"), py::arg("bandwidth_hz"),
      py::arg("p_max"), py::arg("opts") = PursuitOptions{});

  m.def(
      "pattern_pursuit_full_power",
      [](const std::vector<double>& loads_bps, const Neighborhoods& nb, const LinkGains& gains,
         double W, double p_max, const PursuitOptions& opts) {
        const DelayUtility u(loads_bps);
        return pattern_pursuit_full_power(u, nb, gains, W, p_max, opts);
      },
      py::arg("loads_bps"), py::arg("nb"), py::arg("gains"), py::arg("bandwidth_hz"),
      py::arg("p_max"), py::arg("opts") = PursuitOptions{});

  py::class_<DeviceOutcome>(m, "DeviceOutcome")
      .def_readonly("device", &DeviceOutcome::device)
      .def_readonly("mean_delay_s", &DeviceOutcome::mean_delay_s)
      .def_readonly("p50_s", &DeviceOutcome::p50_s)
      .def_readonly("p95_s", &DeviceOutcome::p95_s)
      .def_readonly("p99_s", &DeviceOutcome::p99_s)
      .def_readonly("packets", &DeviceOutcome::packets)
      .def_readonly("unstable", &DeviceOutcome::unstable);

  py::class_<SimOutcome>(m, "SimOutcome")
      .def_readonly("devices", &SimOutcome::devices)
      .def_readonly("network_mean_delay_s", &SimOutcome::network_mean_delay_s)
      .def_readonly("total_arrivals", &SimOutcome::total_arrivals)
      .def_readonly("total_departures", &SimOutcome::total_departures)
      .def_readonly("in_system_at_end", &SimOutcome::in_system_at_end);

  m.def(
      "simulate",
      [](const AllocationPlan& plan, const NetworkScenario& scenario, const Neighborhoods& nb,
         const LinkGains& gains, double horizon_s, double warmup_frac, std::uint64_t seed) {
        SimConfig cfg;
        cfg.plan = &plan;
        cfg.scenario = &scenario;
        cfg.nb = &nb;
        cfg.gains = &gains;
        cfg.horizon_s = horizon_s;
        cfg.warmup_frac = warmup_frac;
        cfg.seed = seed;
        return simulate(cfg);
      },
      py::arg("plan"), py::arg("scenario"), py::arg("nb"), py::arg("gains"),
      py::arg("horizon_s"), py::arg("warmup_frac") = 0.1, py::arg("seed") = 0);

  m.def("analytic_delays",
        [](const std::vector<double>& rates, const std::vector<double>& arrivals, double L) {
          return analytic_delays(rates, arrivals, L);
        });
  m.def("analytic_mean_delay",
        [](const std::vector<double>& rates, const std::vector<double>& arrivals, double L) {
          return analytic_mean_delay(rates, arrivals, L);
        });
}
