#pragma once

#include <optional>
#include <string_view>

#include "kerrlab/tensor.hpp"

namespace kerrlab::geometry {

enum class Family { Minkowski, Schwarzschild, Kerr };

std::string_view to_string(Family family) noexcept;
Family family_from_string(std::string_view name);

inline constexpr double kDefaultAxisMargin = 1e-6;
inline constexpr double kDefaultHorizonMargin = 1e-3;

// Exterior chart in Boyer-Lindquist-type coordinates (t, r, theta, phi),
// geometrized units. Minkowski and Schwarzschild use the standard spherical
// coordinates, which coincide with Kerr at a = 0 (and M = 0).
class SpacetimeChart {
 public:
  static SpacetimeChart minkowski(double r_min = 0.0, double axis_margin = kDefaultAxisMargin);
  static SpacetimeChart schwarzschild(double mass, std::optional<double> r_min = std::nullopt,
                                      double axis_margin = kDefaultAxisMargin);
  static SpacetimeChart kerr(double mass, double spin, std::optional<double> r_min = std::nullopt,
                             double axis_margin = kDefaultAxisMargin);

  Family family() const noexcept { return family_; }
  double mass() const noexcept { return mass_; }
  double spin() const noexcept { return spin_; }
  double r_min() const noexcept { return r_min_; }
  double axis_margin() const noexcept { return axis_margin_; }

  // r_+ = M + sqrt(M^2 - a^2); zero for Minkowski.
  double outer_horizon() const noexcept;

  bool contains(const Vec4& x) const noexcept;
  void require_inside(const Vec4& x) const;

 private:
  SpacetimeChart(Family family, double mass, double spin, double r_min, double axis_margin)
      : family_(family), mass_(mass), spin_(spin), r_min_(r_min), axis_margin_(axis_margin) {}

  Family family_;
  double mass_;
  double spin_;
  double r_min_;
  double axis_margin_;
};

// Metric components together with their analytic r and theta derivatives;
// nothing in any supported chart depends on t or phi.
struct MetricJet {
  Mat4 g{};
  Mat4 dg_dr{};
  Mat4 dg_dtheta{};
};

Mat4 metric_components(const SpacetimeChart& chart, const Vec4& x);
Mat4 inverse_metric(const SpacetimeChart& chart, const Vec4& x);
MetricJet metric_jet(const SpacetimeChart& chart, const Vec4& x);

// Gamma^a_{bc}, assembled from the analytic metric jet.
Connection christoffel(const SpacetimeChart& chart, const Vec4& x);

// Inverse of a metric whose only off-diagonal block is (t, phi).
Mat4 invert_block_metric(const Mat4& g);

}  // namespace kerrlab::geometry
