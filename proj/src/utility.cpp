#include "ranopt/utility.hpp"

#include <cmath>
#include <limits>

#include "ranopt/errors.hpp"

namespace ranopt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double delay_utility(std::span<const double> rates_bps, std::span<const double> loads_bps) {
  if (rates_bps.size() != loads_bps.size())
    throw ContractViolation("delay_utility: rates and loads sizes differ");
  double total = 0.0;
  for (size_t j = 0; j < rates_bps.size(); ++j) {
    if (loads_bps[j] <= 0.0) throw ContractViolation("delay_utility: loads must be positive");
    const double margin = rates_bps[j] - loads_bps[j];
    if (margin <= 0.0) return -kInf;
    total += loads_bps[j] / margin;
  }
  return -total;
}

std::vector<double> delay_gradient(std::span<const double> rates_bps,
                                   std::span<const double> loads_bps, double floor_frac) {
  if (rates_bps.size() != loads_bps.size())
    throw ContractViolation("delay_gradient: rates and loads sizes differ");
  if (floor_frac <= 0.0) throw ContractViolation("delay_gradient: floor must be positive");
  std::vector<double> grad(rates_bps.size());
  for (size_t j = 0; j < rates_bps.size(); ++j) {
    const double floor = floor_frac * loads_bps[j];
    const double margin = std::max(rates_bps[j] - loads_bps[j], floor);
    grad[j] = loads_bps[j] / (margin * margin);
  }
  return grad;
}

double energy_cost(std::span<const double> ap_power_w, double price,
                   std::span<const double> maintenance_w) {
  if (ap_power_w.size() != maintenance_w.size())
    throw ContractViolation("energy_cost: power and maintenance sizes differ");
  double total = 0.0;
  for (size_t i = 0; i < ap_power_w.size(); ++i) {
    if (ap_power_w[i] < 0.0) throw ContractViolation("energy_cost: negative power");
    total += ap_power_w[i];
    if (ap_power_w[i] > 0.0) total += maintenance_w[i];
  }
  return -price * total;
}

DelayUtility::DelayUtility(std::vector<double> loads_bps, double floor_frac)
    : loads_(std::move(loads_bps)), floor_frac_(floor_frac) {
  for (double l : loads_)
    if (l <= 0.0) throw ContractViolation("DelayUtility: loads must be positive");
  if (floor_frac_ <= 0.0) throw ContractViolation("DelayUtility: floor must be positive");
}

double DelayUtility::value(std::span<const double> rates_bps) const {
  return delay_utility(rates_bps, loads_);
}

double DelayUtility::surrogate(std::span<const double> rates_bps) const {
  // Linear extension of -load/(r - load) below margin = floor, matching the
  // clamped gradient; concave, finite, and >= the true utility everywhere.
  double total = 0.0;
  for (size_t j = 0; j < loads_.size(); ++j) {
    const double floor = floor_frac_ * loads_[j];
    const double margin = rates_bps[j] - loads_[j];
    if (margin >= floor)
      total += loads_[j] / margin;
    else
      total += loads_[j] / floor + (floor - margin) * loads_[j] / (floor * floor);
  }
  return -total;
}

std::vector<double> DelayUtility::gradient(std::span<const double> rates_bps) const {
  return delay_gradient(rates_bps, loads_, floor_frac_);
}

std::vector<double> DelayUtility::deficits(std::span<const double> rates_bps) const {
  std::vector<double> out(loads_.size());
  for (size_t j = 0; j < loads_.size(); ++j) out[j] = std::max(loads_[j] - rates_bps[j], 0.0);
  return out;
}

double Utility::infeasibility(std::span<const double> rates_bps) const {
  const std::vector<double> d = deficits(rates_bps);
  double total = 0.0;
  for (double x : d) total += x;
  return total;
}

WeightedSumRateUtility::WeightedSumRateUtility(std::vector<double> weights, double offset)
    : weights_(std::move(weights)), offset_(offset) {}

double WeightedSumRateUtility::value(std::span<const double> rates_bps) const {
  double total = offset_;
  for (size_t j = 0; j < weights_.size(); ++j) total += weights_[j] * rates_bps[j];
  return total;
}

double WeightedSumRateUtility::surrogate(std::span<const double> rates_bps) const {
  return value(rates_bps);
}

std::vector<double> WeightedSumRateUtility::gradient(std::span<const double>) const {
  return weights_;
}

}  // namespace ranopt
