#pragma once

#include <cstdint>
#include <random>

#include "kerrlab/geodesic/null_geodesic.hpp"

namespace kerrlab::harness {

// Engine for draw i of a run seeded with `seed`; independent of how the
// draws are scheduled.
std::mt19937_64 job_engine(std::uint64_t seed, std::uint64_t index);

struct ScatteringBounds {
  double r_lo = 15.0;  // starting radius, in units of max(M, 1)
  double r_hi = 30.0;
  double min_sin_theta = 0.1;  // the orbit must stay this far from the axis
  double min_periapsis = 5.0;  // in units of max(M, 1); clears every photon region
};

// Draws null initial data whose orbit stays outside the photon region and
// away from the axis, by rejection on the radial and polar potentials.
geodesic::NullGeodesicState sample_scattering(const geometry::SpacetimeChart& chart, std::mt19937_64& rng,
                                              const ScatteringBounds& bounds = {});

// sin of the smallest polar angle the orbit reaches (1 for equatorial data).
double polar_turning_sin(const geometry::SpacetimeChart& chart, const geodesic::NullGeodesicState& state);

}  // namespace kerrlab::harness
