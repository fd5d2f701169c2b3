#include "kerrlab/geodesic/integrator.hpp"

#include <algorithm>
#include <cmath>

namespace kerrlab::geodesic {

namespace {

// Dormand-Prince tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                 a76 = 11.0 / 84.0;
// fifth-order minus embedded fourth-order weights
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// continuous extension
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr std::size_t N = 8;

}  // namespace

OdeState DenseSegment::operator()(double x) const {
  const double s = (x - x0) / h;
  const double s1 = 1.0 - s;
  OdeState y{};
  for (std::size_t i = 0; i < N; ++i)
    y[i] = coeff[0][i] + s * (coeff[1][i] + s1 * (coeff[2][i] + s * (coeff[3][i] + s1 * coeff[4][i])));
  return y;
}

DormandPrince45::DormandPrince45(OdeRhs rhs, StepperOptions options)
    : rhs_(std::move(rhs)), options_(options), h_(options.initial_step) {}

StepStatus DormandPrince45::step(double& x, OdeState& y, double x_end) {
  if (!have_k1_) {
    if (!rhs_(x, y, k1_)) return StepStatus::DomainExit;
    have_k1_ = true;
  }
  bool last_rejection_was_domain = false;
  while (true) {
    const double remaining = x_end - x;
    double h = std::min(h_, remaining);
    if (h < options_.min_step && h < remaining) {
      return last_rejection_was_domain ? StepStatus::DomainExit : StepStatus::Underflow;
    }

    OdeState k2, k3, k4, k5, k6, k7, yt, y1;
    auto stage = [&](OdeState& out, auto&& combine) {
      for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * combine(i);
      return rhs_(x, yt, out);
    };
    const OdeState& k1 = k1_;
    bool ok = stage(k2, [&](std::size_t i) { return a21 * k1[i]; }) &&
              stage(k3, [&](std::size_t i) { return a31 * k1[i] + a32 * k2[i]; }) &&
              stage(k4, [&](std::size_t i) { return a41 * k1[i] + a42 * k2[i] + a43 * k3[i]; }) &&
              stage(k5, [&](std::size_t i) { return a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]; }) &&
              stage(k6, [&](std::size_t i) {
                return a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i];
              });
    if (ok) {
      for (std::size_t i = 0; i < N; ++i)
        y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
      ok = rhs_(x + h, y1, k7);
    }
    if (!ok) {
      ++rejected_;
      h_ = 0.25 * h;
      last_rejection_was_domain = true;
      continue;
    }

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = options_.atol + options_.rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(err / N);

    if (err <= 1.0) {
      segment_.x0 = x;
      segment_.h = h;
      for (std::size_t i = 0; i < N; ++i) {
        const double ydiff = y1[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        segment_.coeff[0][i] = y[i];
        segment_.coeff[1][i] = ydiff;
        segment_.coeff[2][i] = bspl;
        segment_.coeff[3][i] = ydiff - h * k7[i] - bspl;
        segment_.coeff[4][i] =
            h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      const bool clipped = h < h_;
      x = (h == remaining) ? x_end : x + h;
      y = y1;
      k1_ = k7;
      ++accepted_;
      const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      // a step shortened to land on x_end says nothing about the natural size
      if (!clipped) h_ = h * fac;
      return StepStatus::Accepted;
    }
    ++rejected_;
    last_rejection_was_domain = false;
    h_ = h * std::max(0.2, 0.9 * std::pow(err, -0.2));
  }
}

}  // namespace kerrlab::geodesic
