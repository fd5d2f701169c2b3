#include "kerrlab/geometry/chart.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "kerrlab/error.hpp"

namespace kerrlab::geometry {

std::string_view to_string(Family family) noexcept {
  switch (family) {
    case Family::Minkowski: return "minkowski";
    case Family::Schwarzschild: return "schwarzschild";
    case Family::Kerr: return "kerr";
  }
  return "unknown";
}

Family family_from_string(std::string_view name) {
  if (name == "minkowski") return Family::Minkowski;
  if (name == "schwarzschild") return Family::Schwarzschild;
  if (name == "kerr") return Family::Kerr;
  throw Error(ErrorKind::InvalidSpec, "unknown spacetime family '" + std::string(name) + "'");
}

namespace {

void check_axis_margin(double margin) {
  if (!(margin >= 0.0 && margin < 0.5 * std::numbers::pi))
    throw Error(ErrorKind::InvalidSpec, "axis margin must lie in [0, pi/2)");
}

}  // namespace

SpacetimeChart SpacetimeChart::minkowski(double r_min, double axis_margin) {
  if (!(r_min >= 0.0)) throw Error(ErrorKind::InvalidSpec, "Minkowski chart requires r_min >= 0");
  check_axis_margin(axis_margin);
  return SpacetimeChart(Family::Minkowski, 0.0, 0.0, r_min, axis_margin);
}

SpacetimeChart SpacetimeChart::schwarzschild(double mass, std::optional<double> r_min, double axis_margin) {
  if (!(mass > 0.0)) throw Error(ErrorKind::InvalidSpec, "Schwarzschild chart requires M > 0");
  check_axis_margin(axis_margin);
  const double horizon = 2.0 * mass;
  const double floor = r_min.value_or(horizon * (1.0 + kDefaultHorizonMargin));
  if (!(floor > horizon)) throw Error(ErrorKind::InvalidSpec, "Schwarzschild chart requires r_min > 2M");
  return SpacetimeChart(Family::Schwarzschild, mass, 0.0, floor, axis_margin);
}

SpacetimeChart SpacetimeChart::kerr(double mass, double spin, std::optional<double> r_min, double axis_margin) {
  if (!(mass > 0.0)) throw Error(ErrorKind::InvalidSpec, "Kerr chart requires M > 0");
  if (!(std::abs(spin) < mass)) throw Error(ErrorKind::InvalidSpec, "Kerr chart requires |a| < M");
  check_axis_margin(axis_margin);
  const double horizon = mass + std::sqrt(mass * mass - spin * spin);
  const double floor = r_min.value_or(horizon * (1.0 + kDefaultHorizonMargin));
  if (!(floor > horizon)) throw Error(ErrorKind::InvalidSpec, "Kerr chart requires r_min > r_+");
  return SpacetimeChart(Family::Kerr, mass, spin, floor, axis_margin);
}

double SpacetimeChart::outer_horizon() const noexcept {
  switch (family_) {
    case Family::Minkowski: return 0.0;
    case Family::Schwarzschild: return 2.0 * mass_;
    case Family::Kerr: return mass_ + std::sqrt(mass_ * mass_ - spin_ * spin_);
  }
  return 0.0;
}

bool SpacetimeChart::contains(const Vec4& x) const noexcept {
  const double r = x[kR];
  const double theta = x[kTheta];
  return std::isfinite(r) && r > r_min_ && theta >= axis_margin_ && theta <= std::numbers::pi - axis_margin_;
}

void SpacetimeChart::require_inside(const Vec4& x) const {
  if (contains(x)) return;
  std::ostringstream msg;
  msg.precision(17);
  msg << "point (r=" << x[kR] << ", theta=" << x[kTheta] << ") outside " << to_string(family_)
      << " chart (r_min=" << r_min_ << ", axis margin=" << axis_margin_ << ")";
  throw Error(ErrorKind::OutOfChart, msg.str());
}

namespace {

// Static spherically symmetric charts: g = diag(-H, 1/H, r^2, r^2 sin^2).
MetricJet spherical_jet(double mass, double r, double theta) {
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const double h = 1.0 - 2.0 * mass / r;
  const double dh = 2.0 * mass / (r * r);
  MetricJet j;
  j.g[kT][kT] = -h;
  j.g[kR][kR] = 1.0 / h;
  j.g[kTheta][kTheta] = r * r;
  j.g[kPhi][kPhi] = r * r * s * s;
  j.dg_dr[kT][kT] = -dh;
  j.dg_dr[kR][kR] = -dh / (h * h);
  j.dg_dr[kTheta][kTheta] = 2.0 * r;
  j.dg_dr[kPhi][kPhi] = 2.0 * r * s * s;
  j.dg_dtheta[kPhi][kPhi] = 2.0 * r * r * s * c;
  return j;
}

MetricJet kerr_jet(double mass, double a, double r, double theta) {
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const double s2 = s * s;
  const double a2 = a * a;
  const double sigma = r * r + a2 * c * c;
  const double sigma2 = sigma * sigma;
  const double delta = r * r - 2.0 * mass * r + a2;
  const double dsigma_dr = 2.0 * r;
  const double dsigma_dth = -2.0 * a2 * c * s;
  const double ddelta_dr = 2.0 * r - 2.0 * mass;

  // 2Mr/Sigma and its derivatives appear in g_tt, g_tphi and g_phiphi.
  const double w = 2.0 * mass * r / sigma;
  const double dw_dr = 2.0 * mass * (sigma - r * dsigma_dr) / sigma2;
  const double dw_dth = -2.0 * mass * r * dsigma_dth / sigma2;

  MetricJet j;
  j.g[kT][kT] = -(1.0 - w);
  j.g[kT][kPhi] = j.g[kPhi][kT] = -w * a * s2;
  j.g[kR][kR] = sigma / delta;
  j.g[kTheta][kTheta] = sigma;
  const double b = r * r + a2 + w * a2 * s2;
  j.g[kPhi][kPhi] = b * s2;

  j.dg_dr[kT][kT] = dw_dr;
  j.dg_dr[kT][kPhi] = j.dg_dr[kPhi][kT] = -dw_dr * a * s2;
  j.dg_dr[kR][kR] = (dsigma_dr * delta - sigma * ddelta_dr) / (delta * delta);
  j.dg_dr[kTheta][kTheta] = dsigma_dr;
  j.dg_dr[kPhi][kPhi] = (2.0 * r + dw_dr * a2 * s2) * s2;

  const double ds2 = 2.0 * s * c;
  j.dg_dtheta[kT][kT] = dw_dth;
  j.dg_dtheta[kT][kPhi] = j.dg_dtheta[kPhi][kT] = -a * (dw_dth * s2 + w * ds2);
  j.dg_dtheta[kR][kR] = dsigma_dth / delta;
  j.dg_dtheta[kTheta][kTheta] = dsigma_dth;
  const double db = a2 * (dw_dth * s2 + w * ds2);
  j.dg_dtheta[kPhi][kPhi] = db * s2 + b * ds2;
  return j;
}

}  // namespace

MetricJet metric_jet(const SpacetimeChart& chart, const Vec4& x) {
  chart.require_inside(x);
  switch (chart.family()) {
    case Family::Minkowski: return spherical_jet(0.0, x[kR], x[kTheta]);
    case Family::Schwarzschild: return spherical_jet(chart.mass(), x[kR], x[kTheta]);
    case Family::Kerr: return kerr_jet(chart.mass(), chart.spin(), x[kR], x[kTheta]);
  }
  throw Error(ErrorKind::FamilyMismatch, "unsupported family");
}

Mat4 metric_components(const SpacetimeChart& chart, const Vec4& x) { return metric_jet(chart, x).g; }

Mat4 invert_block_metric(const Mat4& g) {
  Mat4 inv{};
  const double det = g[kT][kT] * g[kPhi][kPhi] - g[kT][kPhi] * g[kT][kPhi];
  inv[kT][kT] = g[kPhi][kPhi] / det;
  inv[kPhi][kPhi] = g[kT][kT] / det;
  inv[kT][kPhi] = inv[kPhi][kT] = -g[kT][kPhi] / det;
  inv[kR][kR] = 1.0 / g[kR][kR];
  inv[kTheta][kTheta] = 1.0 / g[kTheta][kTheta];
  return inv;
}

Mat4 inverse_metric(const SpacetimeChart& chart, const Vec4& x) {
  return invert_block_metric(metric_components(chart, x));
}

Connection christoffel(const SpacetimeChart& chart, const Vec4& x) {
  const MetricJet j = metric_jet(chart, x);
  const Mat4 ginv = invert_block_metric(j.g);
  // dg[c][a][b] = partial_c g_ab
  std::array<Mat4, 4> dg{};
  dg[kR] = j.dg_dr;
  dg[kTheta] = j.dg_dtheta;

  Connection gamma{};
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b)
      for (std::size_t c = b; c < 4; ++c) {
        double sum = 0.0;
        for (std::size_t d = 0; d < 4; ++d) {
          if (ginv[a][d] == 0.0) continue;
          sum += ginv[a][d] * (dg[b][d][c] + dg[c][d][b] - dg[d][b][c]);
        }
        gamma[a][b][c] = gamma[a][c][b] = 0.5 * sum;
      }
  return gamma;
}

}  // namespace kerrlab::geometry
