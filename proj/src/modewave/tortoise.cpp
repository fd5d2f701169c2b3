#include "kerrlab/modewave/tortoise.hpp"

#include <cmath>
#include <sstream>

#include "kerrlab/error.hpp"

namespace kerrlab::modewave {

double tortoise(double r, double mass) {
  if (mass == 0.0) return r;
  if (!(r > 2.0 * mass)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "tortoise coordinate needs r > 2M (r=" << r << ", M=" << mass << ")";
    throw Error(ErrorKind::OutOfChart, msg.str());
  }
  return r + 2.0 * mass * std::log((r - 2.0 * mass) / (2.0 * mass));
}

double r_of_rstar(double rstar, double mass) {
  if (mass == 0.0) return rstar;
  const double m2 = 2.0 * mass;
  // g(u) = 2M(1 + e^u) + 2M u - r* is increasing and convex, so Newton from
  // any point with g > 0 decreases monotonically onto the root.
  double u = rstar / m2 - 1.0;
  if (rstar > m2) u = std::min(u, std::log(rstar / m2));
  for (int it = 0; it < 200; ++it) {
    const double eu = std::exp(u);
    const double g = m2 * (1.0 + eu) + m2 * u - rstar;
    const double step = g / (m2 * (eu + 1.0));
    u -= step;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(u))) break;
  }
  return m2 * (1.0 + std::exp(u));
}

double tortoise_jacobian(double r, double mass) { return mass == 0.0 ? 1.0 : 1.0 - 2.0 * mass / r; }

}  // namespace kerrlab::modewave
