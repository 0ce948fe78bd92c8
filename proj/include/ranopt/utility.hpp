#pragma once

#include <memory>
#include <span>
#include <vector>

namespace ranopt {

/// Network utility over the per-device rate vector (bits/s). The pursuit loop only
/// ever touches this interface, so any concave utility plugs in.
class Utility {
 public:
  virtual ~Utility() = default;

  /// True utility; may be -inf.
  virtual double value(std::span<const double> rates_bps) const = 0;

  /// Finite concave majorant of value(), equal to it wherever the pole clamp is
  /// inactive. Used for line searches that must survive infeasible iterates.
  virtual double surrogate(std::span<const double> rates_bps) const = 0;

  /// Gradient of surrogate(); equals the true gradient at interior points.
  virtual std::vector<double> gradient(std::span<const double> rates_bps) const = 0;

  /// Per-device rate deficit (load_j - r_j)+ in bits/s; all-zero when the utility
  /// carries no load constraint.
  virtual std::vector<double> deficits(std::span<const double> rates_bps) const = 0;

  /// Total rate deficit; 0 if nothing is starved.
  double infeasibility(std::span<const double> rates_bps) const;
};

/// u(r) = -sum_j load_j / (r_j - load_j)+, the M/M/1 delay objective with traffic
/// expressed in bits/s. Equals -sum_j a_j/(mu_j - a_j) with mu_j = r_j/L.
double delay_utility(std::span<const double> rates_bps, std::span<const double> loads_bps);

/// Analytic gradient of delay_utility with the pole clamped at floor_frac*load_j,
/// so starved devices get large finite weights: c_j = load_j / max(r_j - load_j, d_j)^2.
std::vector<double> delay_gradient(std::span<const double> rates_bps,
                                   std::span<const double> loads_bps,
                                   double floor_frac = 1e-3);

/// -price * sum_i (P_i + 1{P_i > 0} C_i). Reported alongside plans, never optimized.
double energy_cost(std::span<const double> ap_power_w, double price,
                   std::span<const double> maintenance_w);

class DelayUtility final : public Utility {
 public:
  explicit DelayUtility(std::vector<double> loads_bps, double floor_frac = 1e-3);
  double value(std::span<const double> rates_bps) const override;
  double surrogate(std::span<const double> rates_bps) const override;
  std::vector<double> gradient(std::span<const double> rates_bps) const override;
  std::vector<double> deficits(std::span<const double> rates_bps) const override;
  const std::vector<double>& loads_bps() const { return loads_; }

 private:
  std::vector<double> loads_;
  double floor_frac_;
};

class WeightedSumRateUtility final : public Utility {
 public:
  explicit WeightedSumRateUtility(std::vector<double> weights, double offset = 0.0);
  double value(std::span<const double> rates_bps) const override;
  double surrogate(std::span<const double> rates_bps) const override;
  std::vector<double> gradient(std::span<const double> rates_bps) const override;
  std::vector<double> deficits(std::span<const double> rates_bps) const override {
    return std::vector<double>(rates_bps.size(), 0.0);
  }

 private:
  std::vector<double> weights_;
  double offset_;
};

}  // namespace ranopt
