#include "ranopt/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "ranopt/errors.hpp"
#include "ranopt/rng.hpp"

namespace ranopt {

using nlohmann::json;

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double NetworkScenario::p_max_w_hz() const {
  return dbm_to_watt(params.p_max_dbm) / params.bandwidth_hz;
}

double NetworkScenario::noise_w_hz() const { return dbm_to_watt(params.noise_psd_dbm_hz); }

std::vector<double> NetworkScenario::loads_bits() const {
  std::vector<double> loads(lambda_pps.size());
  for (size_t j = 0; j < lambda_pps.size(); ++j) loads[j] = lambda_pps[j] * params.mean_packet_bits;
  return loads;
}

namespace {

void validate_params(const ScenarioParams& p) {
  if (p.n_aps <= 0) throw ValidationError("n_aps must be positive");
  if (p.n_devices <= 0) throw ValidationError("n_devices must be positive");
  if (p.area_side_m <= 0.0) throw ValidationError("area_side_m must be positive");
  if (p.lambda_pps <= 0.0) throw ValidationError("lambda must be positive");
  if (p.mean_packet_bits <= 0.0) throw ValidationError("mean_packet_bits must be positive");
  if (p.bandwidth_hz <= 0.0) throw ValidationError("bandwidth_hz must be positive");
  if (p.snr_threshold <= 0.0) throw ValidationError("snr_threshold must be positive");
  if (p.neighborhood_cap < 1) throw ValidationError("neighborhood_cap must be >= 1");
  if (p.channel.los_scale_m <= 0.0) throw ValidationError("los_scale_m must be positive");
}

}  // namespace

NetworkScenario generate_scenario(const ScenarioParams& params) {
  validate_params(params);
  NetworkScenario s;
  s.params = params;
  Rng rng(Rng::derive(params.seed, /*salt=*/0x5ce4));
  s.ap_positions.reserve(params.n_aps);
  for (int i = 0; i < params.n_aps; ++i) {
    const double x = rng.uniform(0.0, params.area_side_m);
    const double y = rng.uniform(0.0, params.area_side_m);
    s.ap_positions.push_back({x, y});
  }
  s.device_positions.reserve(params.n_devices);
  for (int j = 0; j < params.n_devices; ++j) {
    const double x = rng.uniform(0.0, params.area_side_m);
    const double y = rng.uniform(0.0, params.area_side_m);
    s.device_positions.push_back({x, y});
  }
  s.lambda_pps.assign(params.n_devices, params.lambda_pps);
  return s;
}

void validate_scenario(const NetworkScenario& s) {
  validate_params(s.params);
  if (static_cast<int>(s.ap_positions.size()) != s.params.n_aps)
    throw ValidationError("ap_positions size does not match n_aps");
  if (static_cast<int>(s.device_positions.size()) != s.params.n_devices)
    throw ValidationError("device_positions size does not match n_devices");
  if (static_cast<int>(s.lambda_pps.size()) != s.params.n_devices)
    throw ValidationError("lambda_pps size does not match n_devices");
  const double side = s.params.area_side_m;
  for (const Point& p : s.ap_positions)
    if (p.x < 0 || p.x > side || p.y < 0 || p.y > side)
      throw ValidationError("AP position outside the area square");
  for (const Point& p : s.device_positions)
    if (p.x < 0 || p.x > side || p.y < 0 || p.y > side)
      throw ValidationError("device position outside the area square");
  for (double l : s.lambda_pps)
    if (l <= 0.0) throw ValidationError("per-device lambda must be positive");
}

namespace {

std::string los_mode_name(LosMode m) {
  switch (m) {
    case LosMode::kDistanceProbability: return "distance";
    case LosMode::kAlwaysLos: return "los";
    case LosMode::kAlwaysNlos: return "nlos";
  }
  return "distance";
}

LosMode los_mode_from(const std::string& name) {
  if (name == "distance") return LosMode::kDistanceProbability;
  if (name == "los") return LosMode::kAlwaysLos;
  if (name == "nlos") return LosMode::kAlwaysNlos;
  throw ParseError("channel.los_mode", "unknown mode '" + name + "'");
}

template <typename T>
T require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw ParseError(path, "missing field");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(path, e.what());
  }
}

json points_to_json(const std::vector<Point>& pts) {
  json arr = json::array();
  for (const Point& p : pts) arr.push_back({p.x, p.y});
  return arr;
}

std::vector<Point> points_from_json(const json& arr, const std::string& path) {
  if (!arr.is_array()) throw ParseError(path, "expected an array of [x, y] pairs");
  std::vector<Point> pts;
  pts.reserve(arr.size());
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 2) throw ParseError(path, "expected [x, y] pair");
    pts.push_back({e[0].get<double>(), e[1].get<double>()});
  }
  return pts;
}

}  // namespace

std::string scenario_to_json(const NetworkScenario& s) {
  const ScenarioParams& p = s.params;
  json params = {
      {"n_aps", p.n_aps},
      {"n_devices", p.n_devices},
      {"area_side_m", p.area_side_m},
      {"lambda", p.lambda_pps},
      {"mean_packet_bits", p.mean_packet_bits},
      {"bandwidth_hz", p.bandwidth_hz},
      {"p_max_dbm", p.p_max_dbm},
      {"noise_psd_dbm_hz", p.noise_psd_dbm_hz},
      {"snr_threshold", p.snr_threshold},
      {"neighborhood_cap", p.neighborhood_cap},
      {"seed", p.seed},
      {"channel",
       {{"los_mode", los_mode_name(p.channel.los_mode)},
        {"los_scale_m", p.channel.los_scale_m},
        {"shadowing", p.channel.shadowing},
        {"shadow_sigma_los_db", p.channel.shadow_sigma_los_db},
        {"shadow_sigma_nlos_db", p.channel.shadow_sigma_nlos_db}}},
  };
  json root = {{"params", params},
               {"ap_positions", points_to_json(s.ap_positions)},
               {"device_positions", points_to_json(s.device_positions)}};
  bool uniform = true;
  for (double l : s.lambda_pps) uniform = uniform && l == s.params.lambda_pps;
  if (!uniform) root["lambda_per_device"] = s.lambda_pps;
  return root.dump(2) + "\n";
}

NetworkScenario scenario_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError("<document>", e.what());
  }
  if (!root.contains("params")) throw ParseError("params", "missing field");
  const json& jp = root["params"];

  NetworkScenario s;
  ScenarioParams& p = s.params;
  p.n_aps = require<int>(jp, "n_aps", "params.n_aps");
  p.n_devices = require<int>(jp, "n_devices", "params.n_devices");
  p.area_side_m = require<double>(jp, "area_side_m", "params.area_side_m");
  p.lambda_pps = require<double>(jp, "lambda", "lambda");
  p.mean_packet_bits = require<double>(jp, "mean_packet_bits", "params.mean_packet_bits");
  p.bandwidth_hz = require<double>(jp, "bandwidth_hz", "params.bandwidth_hz");
  p.p_max_dbm = require<double>(jp, "p_max_dbm", "params.p_max_dbm");
  p.noise_psd_dbm_hz = require<double>(jp, "noise_psd_dbm_hz", "params.noise_psd_dbm_hz");
  p.snr_threshold = require<double>(jp, "snr_threshold", "params.snr_threshold");
  p.neighborhood_cap = require<int>(jp, "neighborhood_cap", "params.neighborhood_cap");
  p.seed = require<std::uint64_t>(jp, "seed", "params.seed");
  if (jp.contains("channel")) {
    const json& jc = jp["channel"];
    p.channel.los_mode = los_mode_from(require<std::string>(jc, "los_mode", "channel.los_mode"));
    p.channel.los_scale_m = require<double>(jc, "los_scale_m", "channel.los_scale_m");
    p.channel.shadowing = require<bool>(jc, "shadowing", "channel.shadowing");
    p.channel.shadow_sigma_los_db =
        require<double>(jc, "shadow_sigma_los_db", "channel.shadow_sigma_los_db");
    p.channel.shadow_sigma_nlos_db =
        require<double>(jc, "shadow_sigma_nlos_db", "channel.shadow_sigma_nlos_db");
  }

  if (!root.contains("ap_positions")) throw ParseError("ap_positions", "missing field");
  s.ap_positions = points_from_json(root["ap_positions"], "ap_positions");
  if (!root.contains("device_positions")) throw ParseError("device_positions", "missing field");
  s.device_positions = points_from_json(root["device_positions"], "device_positions");

  if (root.contains("lambda_per_device")) {
    try {
      s.lambda_pps = root["lambda_per_device"].get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw ParseError("lambda_per_device", e.what());
    }
  } else {
    s.lambda_pps.assign(p.n_devices, p.lambda_pps);
  }
  validate_scenario(s);
  return s;
}

void save_scenario(const NetworkScenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  out << scenario_to_json(s);
}

NetworkScenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "' for reading");
  std::stringstream buf;
  buf << in.rdbuf();
  return scenario_from_json(buf.str());
}

}  // namespace ranopt
