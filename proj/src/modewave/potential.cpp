#include "kerrlab/modewave/potential.hpp"

#include <cmath>
#include <sstream>

#include "kerrlab/error.hpp"
#include "kerrlab/modewave/tortoise.hpp"

namespace kerrlab::modewave {

void validate(const PotentialSpec& spec) {
  std::ostringstream msg;
  if (spec.spin < 0 || spec.spin > 2) msg << "spin must be 0, 1 or 2 (got " << spec.spin << ")";
  else if (spec.l < spec.spin) msg << "multipole l=" << spec.l << " must satisfy l >= s=" << spec.spin;
  else if (!(spec.mass >= 0.0) || !std::isfinite(spec.mass)) msg << "mass must be finite and >= 0";
  else if (!std::isfinite(spec.epsilon)) msg << "epsilon must be finite";
  else if (spec.epsilon != 0.0 && !(spec.width > 0.0)) msg << "bump width must be positive";
  else if (spec.epsilon != 0.0 && spec.mass == 0.0) msg << "the imaginary bump sits at r=3M and needs M > 0";
  else return;
  throw Error(ErrorKind::InvalidSpec, msg.str());
}

namespace {

double centrifugal(const PotentialSpec& s, double r) {
  const double ll = static_cast<double>(s.l) * (s.l + 1);
  const double curvature = (1.0 - s.spin * s.spin) * 2.0 * s.mass;
  // skip vanishing terms so an l = 0 flat grid may pass through r = 0
  double v = 0.0;
  if (ll != 0.0) v += ll / (r * r);
  if (curvature != 0.0) v += curvature / (r * r * r);
  return v;
}

}  // namespace

double potential_real(const PotentialSpec& spec, double r) {
  const double v = centrifugal(spec, r);
  return v == 0.0 ? 0.0 : (1.0 - 2.0 * spec.mass / r) * v;
}

double potential_real_drstar(const PotentialSpec& spec, double r) {
  const double m = spec.mass;
  const double h = 1.0 - 2.0 * m / r;
  const double dh = 2.0 * m / (r * r);
  const double ll = static_cast<double>(spec.l) * (spec.l + 1);
  if (ll == 0.0 && (m == 0.0 || spec.spin == 1)) return 0.0;
  const double du = -2.0 * ll / (r * r * r) - 6.0 * (1.0 - spec.spin * spec.spin) * m / (r * r * r * r);
  return h * (dh * centrifugal(spec, r) + h * du);
}

double trapping_rstar(double mass) { return tortoise(3.0 * mass, mass); }

double potential_imag(const PotentialSpec& spec, double rstar) {
  if (spec.epsilon == 0.0) return 0.0;
  const double d = (rstar - trapping_rstar(spec.mass)) / spec.width;
  return spec.epsilon * std::exp(-0.5 * d * d);
}

std::complex<double> effective_potential(const PotentialSpec& spec, double r) {
  validate(spec);
  if (spec.mass > 0.0 && !(r > 2.0 * spec.mass)) throw Error(ErrorKind::OutOfChart, "potential needs r > 2M");
  const double vi = spec.epsilon == 0.0 ? 0.0 : potential_imag(spec, tortoise(r, spec.mass));
  return {potential_real(spec, r), vi};
}

}  // namespace kerrlab::modewave
