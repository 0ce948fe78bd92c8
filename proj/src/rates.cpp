#include "ranopt/rates.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "ranopt/errors.hpp"

namespace ranopt {

using nlohmann::json;

namespace {
constexpr double kInvLn2 = 1.4426950408889634;  // 1 / ln 2
}

PowerProfile::PowerProfile(std::vector<int> z, std::vector<double> p)
    : served(std::move(z)), psd(std::move(p)) {
  if (served.size() != psd.size())
    throw ContractViolation("PowerProfile: served and psd sizes differ");
  normalize();
}

void PowerProfile::normalize() {
  for (size_t i = 0; i < served.size(); ++i)
    if (served[i] == kIdle) psd[i] = 0.0;
}

int AllocationPlan::active_segments(double floor_frac) const {
  int count = 0;
  for (double b : beta_hz)
    if (b > floor_frac * bandwidth_hz) ++count;
  return count;
}

double sinr(const PowerProfile& profile, int ap, int device, const Neighborhoods& nb,
            const LinkGains& gains) {
  if (!nb.in_neighborhood(ap, device))
    throw ContractViolation("sinr: AP " + std::to_string(ap) + " is not in N_" +
                            std::to_string(device));
  double interference = 0.0;
  for (int l : nb.n_of_device[device]) {
    if (l == ap || profile.served[l] == kIdle) continue;
    interference += profile.psd[l] * gains.g(l, device);
  }
  const double signal = profile.idle(ap) ? 0.0 : profile.psd[ap] * gains.g(ap, device);
  return signal / (nb.residual_noise[device] + interference);
}

double spectral_efficiency(double gamma) { return std::log1p(gamma) * kInvLn2; }

std::vector<double> profile_rates(const PowerProfile& profile, const Neighborhoods& nb,
                                  const LinkGains& gains) {
  std::vector<double> rates(nb.n_devices(), 0.0);
  for (int i = 0; i < profile.n_aps(); ++i) {
    const int j = profile.served[i];
    if (j == kIdle) continue;
    rates[j] += spectral_efficiency(sinr(profile, i, j, nb, gains));
  }
  return rates;
}

void validate_plan(const AllocationPlan& plan) {
  if (plan.profiles.size() != plan.beta_hz.size())
    throw ContractViolation("plan: profiles and beta sizes differ");
  if (plan.bandwidth_hz <= 0.0) throw ContractViolation("plan: bandwidth must be positive");
  double total = 0.0;
  for (double b : plan.beta_hz) {
    if (b < 0.0) throw ContractViolation("plan: negative segment bandwidth");
    total += b;
  }
  if (std::abs(total - plan.bandwidth_hz) > 1e-9 * plan.bandwidth_hz)
    throw ContractViolation("plan: segment bandwidths sum to " + std::to_string(total) +
                            ", expected " + std::to_string(plan.bandwidth_hz));
}

std::vector<double> plan_rates(const AllocationPlan& plan, const Neighborhoods& nb,
                               const LinkGains& gains) {
  validate_plan(plan);
  std::vector<double> rates(nb.n_devices(), 0.0);
  for (size_t m = 0; m < plan.profiles.size(); ++m) {
    if (plan.beta_hz[m] == 0.0) continue;
    const std::vector<double> rho = profile_rates(plan.profiles[m], nb, gains);
    for (size_t j = 0; j < rates.size(); ++j) rates[j] += plan.beta_hz[m] * rho[j];
  }
  return rates;
}

std::vector<double> plan_power(const AllocationPlan& plan) {
  if (plan.profiles.empty()) return {};
  std::vector<double> power(plan.profiles.front().n_aps(), 0.0);
  for (size_t m = 0; m < plan.profiles.size(); ++m) {
    const PowerProfile& prof = plan.profiles[m];
    for (int i = 0; i < prof.n_aps(); ++i)
      if (!prof.idle(i)) power[i] += plan.beta_hz[m] * prof.psd[i];
  }
  return power;
}

std::string plan_to_json(const AllocationPlan& plan) {
  json profiles = json::array();
  for (size_t m = 0; m < plan.profiles.size(); ++m) {
    const PowerProfile& prof = plan.profiles[m];
    json links = json::array();
    for (int i = 0; i < prof.n_aps(); ++i)
      if (!prof.idle(i)) links.push_back({i, prof.served[i], prof.psd[i]});
    profiles.push_back({{"beta_frac", plan.beta_hz[m] / plan.bandwidth_hz},
                        {"links", links}});
  }
  json root = {{"bandwidth_hz", plan.bandwidth_hz},
               {"n_aps", plan.profiles.empty() ? 0 : plan.profiles.front().n_aps()},
               {"scheme", plan.scheme},
               {"profiles", profiles},
               {"rates_bps", plan.rates_bps}};
  return root.dump(2) + "\n";
}

AllocationPlan plan_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError("<document>", e.what());
  }
  AllocationPlan plan;
  try {
    plan.bandwidth_hz = root.at("bandwidth_hz").get<double>();
  } catch (const json::exception& e) {
    throw ParseError("bandwidth_hz", e.what());
  }
  int n_aps = 0;
  try {
    n_aps = root.at("n_aps").get<int>();
  } catch (const json::exception& e) {
    throw ParseError("n_aps", e.what());
  }
  plan.scheme = root.value("scheme", "");
  if (!root.contains("profiles")) throw ParseError("profiles", "missing field");
  for (const auto& jp : root["profiles"]) {
    if (!jp.contains("beta_frac")) throw ParseError("profiles.beta_frac", "missing field");
    plan.beta_hz.push_back(jp["beta_frac"].get<double>() * plan.bandwidth_hz);
    PowerProfile prof;
    prof.served.assign(n_aps, kIdle);
    prof.psd.assign(n_aps, 0.0);
    if (!jp.contains("links")) throw ParseError("profiles.links", "missing field");
    for (const auto& link : jp["links"]) {
      if (!link.is_array() || link.size() != 3)
        throw ParseError("profiles.links", "expected [ap, device, psd] triple");
      const int i = link[0].get<int>();
      if (i < 0 || i >= n_aps) throw ParseError("profiles.links", "AP index out of range");
      prof.served[i] = link[1].get<int>();
      prof.psd[i] = link[2].get<double>();
    }
    plan.profiles.push_back(std::move(prof));
  }
  if (!root.contains("rates_bps")) throw ParseError("rates_bps", "missing field");
  try {
    plan.rates_bps = root["rates_bps"].get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ParseError("rates_bps", e.what());
  }
  validate_plan(plan);
  return plan;
}

void save_plan(const AllocationPlan& plan, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  out << plan_to_json(plan);
}

AllocationPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "' for reading");
  std::stringstream buf;
  buf << in.rdbuf();
  return plan_from_json(buf.str());
}

}  // namespace ranopt
