#include "kerrlab/geodesic/radial_potential.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "kerrlab/error.hpp"

namespace kerrlab::geodesic {

using geometry::Family;

namespace {

using Poly = std::vector<double>;

double eval(const Poly& p, double x) {
  double s = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) s = s * x + *it;
  return s;
}

Poly derivative(const Poly& p) {
  Poly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(static_cast<double>(i) * p[i]);
  return d;
}

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0.0) p.pop_back();
}

// Root of f on [lo, hi] given a sign change, to machine resolution.
double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Sign-change roots of p inside (lo, hi), found by splitting at the roots of
// p' so that each piece is monotone.
std::vector<double> monotone_roots(Poly p, double lo, double hi) {
  trim(p);
  std::vector<double> roots;
  if (p.size() <= 1) return roots;
  std::vector<double> cuts{lo};
  for (double c : monotone_roots(derivative(p), lo, hi)) cuts.push_back(c);
  cuts.push_back(hi);
  auto f = [&p](double x) { return eval(p, x); };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double fa = f(cuts[i]);
    const double fb = f(cuts[i + 1]);
    if (fa == 0.0 && i > 0) {
      roots.push_back(cuts[i]);
      continue;
    }
    if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) roots.push_back(bisect(f, cuts[i], cuts[i + 1]));
  }
  return roots;
}

double cauchy_bound(const Poly& p) {
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) m = std::max(m, std::abs(p[i] / p.back()));
  return 1.0 + m;
}

}  // namespace

RadialPotentialSpec conserved_quantities(const SpacetimeChart& chart, const NullGeodesicState& state) {
  const Vec4 p = lower(geometry::metric_components(chart, state.position), state.velocity);
  RadialPotentialSpec spec;
  spec.mass = chart.mass();
  spec.spin = chart.spin();
  spec.energy = -p[kT];
  spec.angular = p[kPhi];
  const double th = state.position[kTheta];
  const double c = std::cos(th), s = std::sin(th);
  const double a = spec.spin, e = spec.energy;
  spec.carter = p[kTheta] * p[kTheta] + c * c * (spec.angular * spec.angular / (s * s) - a * a * e * e);
  return spec;
}

RadialPotential::RadialPotential(const RadialPotentialSpec& spec) : spec_(spec) {
  const double e = spec.energy, l = spec.angular, q = spec.carter, m = spec.mass, a = spec.spin;
  if (!(m >= 0.0) || !std::isfinite(e) || !std::isfinite(l) || !std::isfinite(q) || std::abs(a) > m)
    throw Error(ErrorKind::InvalidSpec, "radial potential needs finite constants, M >= 0 and |a| <= M");
  k_ = q + (l - a * e) * (l - a * e);
  const double scale = q * q + std::pow(l - a * e, 4) + std::pow(e * m, 4);
  if (k_ < -1e-12 * std::sqrt(scale))
    throw Error(ErrorKind::InvalidSpec, "Q + (L_z - aE)^2 must be non-negative for a null geodesic");
  r_plus_ = m + std::sqrt(std::max(0.0, m * m - a * a));
  // [E r^2 + (E a^2 - a L)]^2 - (r^2 - 2 M r + a^2) K
  const double b = e * a * a - a * l;
  coeff_ = {b * b - a * a * k_, 2.0 * m * k_, 2.0 * e * b - k_, 0.0, e * e};
}

double RadialPotential::value(double r) const noexcept {
  const double e = spec_.energy, a = spec_.spin;
  const double w = e * (r * r + a * a) - a * spec_.angular;
  const double delta = r * r - 2.0 * spec_.mass * r + a * a;
  return w * w - delta * k_;
}

double RadialPotential::d1(double r) const noexcept {
  const double e = spec_.energy, a = spec_.spin;
  const double w = e * (r * r + a * a) - a * spec_.angular;
  return 4.0 * e * r * w - (2.0 * r - 2.0 * spec_.mass) * k_;
}

double RadialPotential::d2(double r) const noexcept {
  const double e = spec_.energy, a = spec_.spin;
  const double w = e * (r * r + a * a) - a * spec_.angular;
  return 4.0 * e * w + 8.0 * e * e * r * r - 2.0 * k_;
}

std::vector<RadialRoot> RadialPotential::exterior_roots() const {
  Poly p = coeff_;
  trim(p);
  std::vector<RadialRoot> out;
  if (p.size() > 1) {
    const double lo = r_plus_;
    const double hi = std::max(lo, 0.0) + cauchy_bound(p) + 1.0;
    for (double r : monotone_roots(p, lo, hi))
      if (r > lo) out.push_back({r, false});

    // Double roots touch zero without a sign change; they sit on critical points.
    for (double c : monotone_roots(derivative(p), lo, hi)) {
      if (!(c > lo)) continue;
      double scale = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) scale += std::abs(p[i]) * std::pow(c, static_cast<double>(i));
      if (std::abs(eval(p, c)) > 1e-12 * scale) continue;
      // a near-tangency split into two close simple roots by rounding is one double root
      out.erase(std::remove_if(out.begin(), out.end(),
                               [&](const RadialRoot& rr) { return std::abs(rr.r - c) < 1e-6 * (1.0 + c); }),
                out.end());
      out.push_back({c, true});
    }
    std::sort(out.begin(), out.end(), [](const RadialRoot& x, const RadialRoot& y) { return x.r < y.r; });
  }
  if (out.empty()) {
    std::ostringstream msg;
    msg << "R(r) has no real root with r > " << r_plus_ << " (E=" << spec_.energy << ", L_z=" << spec_.angular
        << ", Q=" << spec_.carter << ")";
    throw Error(ErrorKind::NoExteriorRoots, msg.str());
  }
  return out;
}

namespace {

struct Residuals {
  double r_value, r_d1, d_xi, d1_xi, r_d2;
};

// R and R' at E = 1, L_z = xi, Q = eta, with the partials used by Newton.
Residuals trapped_residuals(double m, double a, double eta, double r, double xi) {
  const double w = r * r + a * a - a * xi;
  const double delta = r * r - 2.0 * m * r + a * a;
  const double k = eta + (xi - a) * (xi - a);
  Residuals out{};
  out.r_value = w * w - delta * k;
  out.r_d1 = 4.0 * r * w - (2.0 * r - 2.0 * m) * k;
  out.d_xi = -2.0 * a * w - 2.0 * delta * (xi - a);
  out.d1_xi = -4.0 * r * a - 4.0 * (r - m) * (xi - a);
  out.r_d2 = 4.0 * w + 8.0 * r * r - 2.0 * k;
  return out;
}

}  // namespace

TrappedOrbit find_trapped(const SpacetimeChart& chart, double lo, double hi, Orbit orbit, double eta) {
  if (chart.family() == Family::Minkowski)
    throw Error(ErrorKind::FamilyMismatch, "trapped photon orbits need a Schwarzschild or Kerr chart");
  if (!(lo < hi) || !(eta >= 0.0)) throw Error(ErrorKind::InvalidSpec, "find_trapped needs lo < hi and eta >= 0");
  const double m = chart.mass();
  // spin sign only swaps which branch co-rotates; work with |a|
  const double a_signed = chart.spin();
  const double a = std::abs(a_signed);
  const bool flip = a_signed < 0.0;
  const char* label = orbit == Orbit::Prograde ? "prograde" : "retrograde";

  TrappedOrbit out;
  out.orbit = orbit;
  out.eta = eta;
  auto fail = [&](const char* why) {
    std::ostringstream msg;
    msg << "no " << label << " trapped orbit in (" << lo << ", " << hi << ") with eta=" << eta << ": " << why;
    throw Error(ErrorKind::NoTrappedOrbit, msg.str());
  };

  double r = 0.0, xi = 0.0;
  if (a == 0.0) {
    r = 3.0 * m;
    if (!(r > lo && r < hi)) fail("r = 3M lies outside the interval");
    if (eta > 27.0 * m * m) fail("eta exceeds 27 M^2");
    xi = std::sqrt(27.0 * m * m - eta) * (orbit == Orbit::Prograde ? 1.0 : -1.0);
  } else {
    // polar orbit radius separates the two branches
    auto polar = [&](double x) { return x * x * (3.0 * m - x) - a * a * (x + m); };
    const double r0 = bisect(polar, 2.0 * m, 3.0 * m);
    auto g = [&](double x) {
      const double t = x * (x - 3.0 * m) * (x - 3.0 * m);
      return x * x * x * (4.0 * a * a * m - t) - eta * a * a * (x - m) * (x - m);
    };
    const double blo = orbit == Orbit::Prograde ? std::max(lo, m) : std::max(lo, r0);
    const double bhi = orbit == Orbit::Prograde ? std::min(hi, r0) : hi;
    if (!(blo < bhi)) fail("branch does not overlap the interval");
    const double glo = g(blo), ghi = g(bhi);
    if (!((glo < 0.0 && ghi >= 0.0) || (glo >= 0.0 && ghi < 0.0))) fail("no sign change of the orbit condition");
    r = bisect(g, blo, bhi);
    xi = (r * r * (3.0 * m - r) - a * a * (r + m)) / (a * (r - m));

    // polish R = R' = 0 jointly in (r, xi)
    for (int it = 0; it < 8; ++it) {
      const Residuals res = trapped_residuals(m, a, eta, r, xi);
      const double j11 = res.r_d1, j12 = res.d_xi, j21 = res.r_d2, j22 = res.d1_xi;
      const double det = j11 * j22 - j12 * j21;
      if (det == 0.0 || !std::isfinite(det)) break;
      const double dr = (res.r_value * j22 - j12 * res.r_d1) / det;
      const double dxi = (j11 * res.r_d1 - j21 * res.r_value) / det;
      r -= dr;
      xi -= dxi;
      if (std::abs(dr) < 1e-16 * r && std::abs(dxi) < 1e-16 * (1.0 + std::abs(xi))) break;
    }
    if (!(r > lo && r < hi)) fail("polished root left the interval");
  }
  const Residuals res = trapped_residuals(m, a, eta, r, xi);
  out.r = r;
  out.xi = flip ? -xi : xi;
  out.residual_r = std::abs(res.r_value);
  out.residual_dr = std::abs(res.r_d1);
  return out;
}

TrappedOrbit find_trapped(const SpacetimeChart& chart, Orbit orbit, double eta) {
  return find_trapped(chart, chart.outer_horizon() * (1.0 + 1e-3), 10.0 * chart.mass(), orbit, eta);
}

}  // namespace kerrlab::geodesic
