#pragma once

#include <vector>

#include "kerrlab/geodesic/null_geodesic.hpp"

namespace kerrlab::geodesic {

struct RadialPotentialSpec {
  double energy = 1.0;       // E = -gamma_t
  double angular = 0.0;      // L_z = gamma_phi
  double carter = 0.0;       // Q
  double mass = 1.0;
  double spin = 0.0;
};

// E, L_z and Q read off a null state through the metric at its position.
RadialPotentialSpec conserved_quantities(const SpacetimeChart& chart, const NullGeodesicState& state);

struct RadialRoot {
  double r = 0.0;
  bool double_root = false;
};

// R(r) = [E(r^2 + a^2) - a L_z]^2 - Delta [Q + (L_z - aE)^2]; a null geodesic
// with these constants can only be found where R >= 0, and its radial
// turning points are the simple roots of R.
class RadialPotential {
 public:
  explicit RadialPotential(const RadialPotentialSpec& spec);

  const RadialPotentialSpec& spec() const noexcept { return spec_; }
  // Q + (L_z - aE)^2
  double carter_k() const noexcept { return k_; }
  double value(double r) const noexcept;
  double d1(double r) const noexcept;
  double d2(double r) const noexcept;
  // Outer horizon radius, or 0 without a horizon.
  double exterior_bound() const noexcept { return r_plus_; }

  // Real roots with r > r_plus, ascending; throws NoExteriorRoots if there are none.
  std::vector<RadialRoot> exterior_roots() const;

 private:
  RadialPotentialSpec spec_;
  double k_ = 0.0;
  double r_plus_ = 0.0;
  std::vector<double> coeff_;  // ascending powers, degree <= 4
};

enum class Orbit { Prograde, Retrograde };

struct TrappedOrbit {
  double r = 0.0;
  double xi = 0.0;   // L_z / E
  double eta = 0.0;  // Q / E^2
  double residual_r = 0.0;   // |R(r)| at E = 1
  double residual_dr = 0.0;  // |R'(r)| at E = 1
  Orbit orbit = Orbit::Prograde;
};

// Spherical photon orbit with Q/E^2 = eta inside (lo, hi), i.e. the radius and
// L_z/E at which R = R' = 0. Prograde and retrograde branches lie on either
// side of the polar orbit. Throws NoTrappedOrbit when the branch has no root
// in the interval.
TrappedOrbit find_trapped(const SpacetimeChart& chart, double lo, double hi, Orbit orbit, double eta = 0.0);

// Same search over the default interval (r_+ (1 + 1e-3), 10M).
TrappedOrbit find_trapped(const SpacetimeChart& chart, Orbit orbit, double eta = 0.0);

}  // namespace kerrlab::geodesic
