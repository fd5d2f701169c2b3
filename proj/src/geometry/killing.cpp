#include "kerrlab/geometry/killing.hpp"

#include <cmath>

namespace kerrlab::geometry {

namespace {

// Rotation generators about the x, y, z axes in spherical components.
Mat4 rotation_generator_sum(double theta, double phi) {
  const double cot = std::cos(theta) / std::sin(theta);
  const Vec4 rot_x{0.0, 0.0, -std::sin(phi), -cot * std::cos(phi)};
  const Vec4 rot_y{0.0, 0.0, std::cos(phi), -cot * std::sin(phi)};
  const Vec4 rot_z{0.0, 0.0, 0.0, 1.0};
  Mat4 k{};
  for (const Vec4* v : {&rot_x, &rot_y, &rot_z})
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b) k[a][b] += (*v)[a] * (*v)[b];
  return k;
}

Mat4 carter_tensor(const SpacetimeChart& chart, const Vec4& x) {
  const double a = chart.spin();
  const double theta = x[kTheta];
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const Mat4 ginv = inverse_metric(chart, x);
  const Vec4 w{a * s * s, 0.0, 0.0, 1.0};
  Mat4 k{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) k[i][j] = w[i] * w[j] / (s * s) - a * a * c * c * ginv[i][j];
  k[kTheta][kTheta] += 1.0;
  return k;
}

}  // namespace

Mat4 killing_tensor_contravariant(const SpacetimeChart& chart, const Vec4& x) {
  chart.require_inside(x);
  if (chart.family() == Family::Minkowski) return rotation_generator_sum(x[kTheta], x[kPhi]);
  return carter_tensor(chart, x);
}

Mat4 killing_tensor_eval(const SpacetimeChart& chart, const Vec4& x) {
  return transform_both(metric_components(chart, x), killing_tensor_contravariant(chart, x));
}

double killing_quadratic(const SpacetimeChart& chart, const Vec4& x, const Vec4& velocity) {
  return contract(killing_tensor_eval(chart, x), velocity, velocity);
}

double killing_equation_residual(const SpacetimeChart& chart, const Vec4& x, double rel_step) {
  return killing_equation_residual(
      chart, x, [&chart](const Vec4& p) { return killing_tensor_eval(chart, p); }, rel_step);
}

double killing_equation_residual(const SpacetimeChart& chart, const Vec4& x,
                                 const std::function<Mat4(const Vec4&)>& covariant_tensor, double rel_step) {
  const Mat4 k = covariant_tensor(x);
  const Connection gamma = christoffel(chart, x);

  // dk[c] = partial_c K_ab; the charts are t- and phi-independent, and the
  // Minkowski rotation sum is phi-independent once contracted into K_ab.
  std::array<Mat4, 4> dk{};
  const std::array<std::pair<std::size_t, double>, 3> steps{
      {{kR, rel_step * x[kR]}, {kTheta, rel_step}, {kPhi, rel_step}}};
  for (const auto& [dir, h] : steps) {
    auto at = [&](double offset) {
      Vec4 p = x;
      p[dir] += offset;
      return covariant_tensor(p);
    };
    // fourth-order central stencil
    const Mat4 p1 = at(h), m1 = at(-h), p2 = at(2.0 * h), m2 = at(-2.0 * h);
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b)
        dk[dir][a][b] = (8.0 * (p1[a][b] - m1[a][b]) - (p2[a][b] - m2[a][b])) / (12.0 * h);
  }

  auto nabla = [&](std::size_t c, std::size_t a, std::size_t b) {
    double v = dk[c][a][b];
    for (std::size_t m = 0; m < 4; ++m) v -= gamma[m][c][a] * k[m][b] + gamma[m][c][b] * k[a][m];
    return v;
  };

  double worst = 0.0;
  for (std::size_t c = 0; c < 4; ++c)
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b) {
        const double sym = (nabla(c, a, b) + nabla(a, b, c) + nabla(b, c, a)) / 3.0;
        worst = std::max(worst, std::abs(sym));
      }
  const double scale = max_abs(k) / x[kR];
  return worst / scale;
}

}  // namespace kerrlab::geometry
