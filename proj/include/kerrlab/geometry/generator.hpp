#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "kerrlab/geometry/chart.hpp"

namespace kerrlab::geometry {

enum class GeneratorKind { T, Phi, R, A, TChi };

std::string_view to_string(GeneratorKind kind) noexcept;

// Radial weight f(r) with its first two r-derivatives.
struct RadialProfile {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
};

RadialProfile constant_profile(double c);
// f = 1 - 3M/r, vanishing on the Schwarzschild photon sphere.
RadialProfile photon_sphere_profile(double mass);

// C^2 quintic step: 1 for r <= r1, 0 for r >= r2, monotone in between.
double smooth_cutoff(double r, double r1, double r2) noexcept;
double smooth_cutoff_d1(double r, double r1, double r2) noexcept;

// A named vector-field family X used to generate energies.
class GeneratorField {
 public:
  static GeneratorField time_translation();
  static GeneratorField axial_rotation();
  static GeneratorField radial();
  static GeneratorField radial_multiplier(RadialProfile profile);
  // T_chi = d_t + omega0 chi(r) d_phi with omega0 = a / (r_+^2 + a^2), the
  // horizon angular velocity; the default window is (5M, 6M).
  static GeneratorField blended_time(const SpacetimeChart& kerr, double r1, double r2);
  static GeneratorField blended_time(const SpacetimeChart& kerr);

  GeneratorKind kind() const noexcept { return kind_; }
  std::string name() const;
  const RadialProfile& profile() const noexcept { return profile_; }
  double blend_inner() const noexcept { return r1_; }
  double blend_outer() const noexcept { return r2_; }
  double omega0() const noexcept { return omega0_; }

  // Killing on the whole chart (T, Phi) or, for T_chi, at this radius.
  bool is_killing_at(double r) const noexcept;

 private:
  explicit GeneratorField(GeneratorKind kind) : kind_(kind) {}

  GeneratorKind kind_;
  RadialProfile profile_{};
  double r1_ = 0.0;
  double r2_ = 0.0;
  double omega0_ = 0.0;
};

// Throws FamilyMismatch when the generator is not defined on the chart family.
void require_compatible(const GeneratorField& gen, const SpacetimeChart& chart);

Vec4 generator_eval(const GeneratorField& gen, const SpacetimeChart& chart, const Vec4& x);

// Deformation tensor pi^{ab} = nabla^a X^b + nabla^b X^a, i.e. the Lie
// derivative of the metric with both indices raised. This is 2 nabla^{(a} X^{b)}.
Mat4 deformation_tensor(const GeneratorField& gen, const SpacetimeChart& chart, const Vec4& x);

// Covariant Lie derivative (L_X g)_{ab}; same object with indices down.
Mat4 metric_lie_derivative(const GeneratorField& gen, const SpacetimeChart& chart, const Vec4& x);

struct ScanGrid {
  std::vector<double> r;
  std::vector<double> theta;

  static ScanGrid uniform(double r_lo, double r_hi, std::size_t nr, double theta_lo, double theta_hi,
                          std::size_t ntheta);
  // Whole exterior from just above r_min out to r_hi, axis margin to axis margin.
  static ScanGrid exterior(const SpacetimeChart& chart, double r_hi, std::size_t nr, std::size_t ntheta);
};

struct ScanSample {
  double r;
  double theta;
  double value;  // -g(X, X)
};

struct TimelikeReport {
  double min_value = 0.0;
  ScanSample worst{};
  std::size_t samples = 0;
  std::vector<ScanSample> non_timelike;
};

// Deterministic sweep of -g(X, X) over the (r, theta) grid at t = phi = 0.
TimelikeReport timelike_scan(const GeneratorField& gen, const SpacetimeChart& chart, const ScanGrid& grid);

}  // namespace kerrlab::geometry
