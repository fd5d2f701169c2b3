#include "kerrlab/geometry/generator.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "kerrlab/error.hpp"

namespace kerrlab::geometry {

std::string_view to_string(GeneratorKind kind) noexcept {
  switch (kind) {
    case GeneratorKind::T: return "T";
    case GeneratorKind::Phi: return "Phi";
    case GeneratorKind::R: return "R";
    case GeneratorKind::A: return "A";
    case GeneratorKind::TChi: return "T_chi";
  }
  return "?";
}

RadialProfile constant_profile(double c) {
  std::ostringstream name;
  name << "const(" << c << ")";
  return {name.str(), [c](double) { return c; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
}

RadialProfile photon_sphere_profile(double mass) {
  return {"1-3M/r", [mass](double r) { return 1.0 - 3.0 * mass / r; },
          [mass](double r) { return 3.0 * mass / (r * r); },
          [mass](double r) { return -6.0 * mass / (r * r * r); }};
}

double smooth_cutoff(double r, double r1, double r2) noexcept {
  if (r <= r1) return 1.0;
  if (r >= r2) return 0.0;
  const double s = (r - r1) / (r2 - r1);
  return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

double smooth_cutoff_d1(double r, double r1, double r2) noexcept {
  if (r <= r1 || r >= r2) return 0.0;
  const double s = (r - r1) / (r2 - r1);
  return -30.0 * s * s * (1.0 - s) * (1.0 - s) / (r2 - r1);
}

GeneratorField GeneratorField::time_translation() { return GeneratorField(GeneratorKind::T); }
GeneratorField GeneratorField::axial_rotation() { return GeneratorField(GeneratorKind::Phi); }

GeneratorField GeneratorField::radial() {
  GeneratorField g(GeneratorKind::R);
  g.profile_ = constant_profile(1.0);
  return g;
}

GeneratorField GeneratorField::radial_multiplier(RadialProfile profile) {
  if (!profile.value || !profile.d1 || !profile.d2)
    throw Error(ErrorKind::InvalidSpec, "radial profile needs value and two derivatives");
  GeneratorField g(GeneratorKind::A);
  g.profile_ = std::move(profile);
  return g;
}

GeneratorField GeneratorField::blended_time(const SpacetimeChart& kerr, double r1, double r2) {
  if (kerr.family() != Family::Kerr) throw Error(ErrorKind::FamilyMismatch, "T_chi is defined on Kerr charts only");
  if (!(r1 > kerr.r_min() && r2 > r1))
    throw Error(ErrorKind::InvalidSpec, "T_chi blend window must satisfy r_min < r1 < r2");
  GeneratorField g(GeneratorKind::TChi);
  const double a = kerr.spin();
  const double rp = kerr.outer_horizon();
  g.r1_ = r1;
  g.r2_ = r2;
  g.omega0_ = a / (rp * rp + a * a);
  return g;
}

GeneratorField GeneratorField::blended_time(const SpacetimeChart& kerr) {
  return blended_time(kerr, 5.0 * kerr.mass(), 6.0 * kerr.mass());
}

std::string GeneratorField::name() const {
  if (kind_ == GeneratorKind::A) return "A[" + profile_.name + "]";
  return std::string(to_string(kind_));
}

bool GeneratorField::is_killing_at(double r) const noexcept {
  switch (kind_) {
    case GeneratorKind::T:
    case GeneratorKind::Phi: return true;
    case GeneratorKind::TChi: return r <= r1_ || r >= r2_;
    default: return false;
  }
}

void require_compatible(const GeneratorField& gen, const SpacetimeChart& chart) {
  if (gen.kind() == GeneratorKind::TChi && chart.family() != Family::Kerr)
    throw Error(ErrorKind::FamilyMismatch, "T_chi requires a Kerr chart, got " + std::string(to_string(chart.family())));
}

Vec4 generator_eval(const GeneratorField& gen, const SpacetimeChart& chart, const Vec4& x) {
  require_compatible(gen, chart);
  chart.require_inside(x);
  const double r = x[kR];
  switch (gen.kind()) {
    case GeneratorKind::T: return {1.0, 0.0, 0.0, 0.0};
    case GeneratorKind::Phi: return {0.0, 0.0, 0.0, 1.0};
    case GeneratorKind::R:
    case GeneratorKind::A: return {0.0, gen.profile().value(r), 0.0, 0.0};
    case GeneratorKind::TChi:
      return {1.0, 0.0, 0.0, gen.omega0() * smooth_cutoff(r, gen.blend_inner(), gen.blend_outer())};
  }
  return {};
}

Mat4 metric_lie_derivative(const GeneratorField& gen, const SpacetimeChart& chart, const Vec4& x) {
  const Vec4 X = generator_eval(gen, chart, x);
  const MetricJet j = metric_jet(chart, x);
  const double r = x[kR];

  // dX[a][m] = partial_m X^a; every supported generator depends on r only.
  Mat4 dX{};
  switch (gen.kind()) {
    case GeneratorKind::R:
    case GeneratorKind::A: dX[kR][kR] = gen.profile().d1(r); break;
    case GeneratorKind::TChi:
      dX[kPhi][kR] = gen.omega0() * smooth_cutoff_d1(r, gen.blend_inner(), gen.blend_outer());
      break;
    default: break;
  }

  Mat4 lie{};
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = a; b < 4; ++b) {
      double v = X[kR] * j.dg_dr[a][b] + X[kTheta] * j.dg_dtheta[a][b];
      for (std::size_t l = 0; l < 4; ++l) v += j.g[l][b] * dX[l][a] + j.g[a][l] * dX[l][b];
      lie[a][b] = lie[b][a] = v;
    }
  return lie;
}

Mat4 deformation_tensor(const GeneratorField& gen, const SpacetimeChart& chart, const Vec4& x) {
  const Mat4 lie = metric_lie_derivative(gen, chart, x);
  return transform_both(inverse_metric(chart, x), lie);
}

ScanGrid ScanGrid::uniform(double r_lo, double r_hi, std::size_t nr, double theta_lo, double theta_hi,
                           std::size_t ntheta) {
  ScanGrid grid;
  auto fill = [](std::vector<double>& out, double lo, double hi, std::size_t n) {
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      out[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  fill(grid.r, r_lo, r_hi, nr);
  fill(grid.theta, theta_lo, theta_hi, ntheta);
  return grid;
}

ScanGrid ScanGrid::exterior(const SpacetimeChart& chart, double r_hi, std::size_t nr, std::size_t ntheta) {
  const double r_lo = chart.r_min() * (1.0 + 1e-9) + 1e-12;
  const double margin = chart.axis_margin();
  return uniform(r_lo, r_hi, nr, margin, std::numbers::pi - margin, ntheta);
}

TimelikeReport timelike_scan(const GeneratorField& gen, const SpacetimeChart& chart, const ScanGrid& grid) {
  require_compatible(gen, chart);
  if (grid.r.empty() || grid.theta.empty()) throw Error(ErrorKind::EmptyGrid, "timelike scan needs r and theta samples");
  TimelikeReport report;
  report.min_value = std::numeric_limits<double>::infinity();
  for (double r : grid.r)
    for (double theta : grid.theta) {
      const Vec4 x{0.0, r, theta, 0.0};
      const Vec4 X = generator_eval(gen, chart, x);
      const double value = -contract(metric_components(chart, x), X, X);
      const ScanSample sample{r, theta, value};
      ++report.samples;
      if (value < report.min_value) {
        report.min_value = value;
        report.worst = sample;
      }
      if (!(value > 0.0)) report.non_timelike.push_back(sample);
    }
  return report;
}

}  // namespace kerrlab::geometry
