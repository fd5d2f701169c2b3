#include "kerrlab/harness/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kerrlab/error.hpp"
#include "kerrlab/geodesic/radial_potential.hpp"

namespace kerrlab::harness {

using geodesic::NullGeodesicState;

std::mt19937_64 job_engine(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

double polar_turning_sin(const geometry::SpacetimeChart& chart, const NullGeodesicState& s) {
  const auto c = geodesic::conserved_quantities(chart, s);
  // Theta motion in u = cos^2(theta): a^2 E^2 u^2 + (Q + L^2 - a^2 E^2) u - Q = 0.
  const double a2e2 = chart.spin() * chart.spin() * c.energy * c.energy;
  const double b = c.carter + c.angular * c.angular - a2e2;
  double u;
  if (a2e2 < 1e-14 * std::max(1.0, std::abs(b))) {
    u = b > 0.0 ? c.carter / b : 1.0;
  } else {
    const double disc = std::sqrt(b * b + 4.0 * a2e2 * c.carter);
    u = b >= 0.0 ? 2.0 * c.carter / (b + disc) : (disc - b) / (2.0 * a2e2);
  }
  u = std::clamp(u, 0.0, 1.0);
  return std::sqrt(1.0 - u);
}

NullGeodesicState sample_scattering(const geometry::SpacetimeChart& chart, std::mt19937_64& rng,
                                    const ScatteringBounds& bounds) {
  const double scale = std::max(chart.mass(), 1.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> radius(bounds.r_lo * scale, bounds.r_hi * scale);
  const double half_pi = std::numbers::pi / 2.0;
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const double r0 = radius(rng);
    const Vec4 x{0.0, r0, half_pi + 0.9 * unit(rng), 0.0};
    // Angular rates up to 10 M / r^2 give impact parameters up to about 10 M.
    const double w = 10.0 * scale / (r0 * r0);
    const geodesic::SpatialDirection dir{unit(rng), w * unit(rng), w * unit(rng)};
    NullGeodesicState s;
    try {
      s = geodesic::make_null_initial(chart, x, dir);
    } catch (const Error&) {
      continue;
    }
    if (polar_turning_sin(chart, s) < bounds.min_sin_theta) continue;
    try {
      const auto roots = geodesic::RadialPotential(geodesic::conserved_quantities(chart, s)).exterior_roots();
      const double outer = roots.back().r;
      if (outer >= bounds.min_periapsis * scale && outer < r0) return s;
    } catch (const Error&) {
      // no turning point: the orbit reaches the horizon
    }
  }
  throw Error(ErrorKind::InvalidSpec, "no scattering geodesic found within the sampling bounds");
}

}  // namespace kerrlab::harness
