#include "kerrlab/geodesic/null_geodesic.hpp"

#include <cmath>
#include <sstream>

#include "kerrlab/error.hpp"
#include "kerrlab/geodesic/integrator.hpp"

namespace kerrlab::geodesic {

using geometry::christoffel;
using geometry::metric_components;

std::string_view to_string(Termination t) noexcept {
  switch (t) {
    case Termination::SpanReached: return "span_reached";
    case Termination::OutOfChart: return "out_of_chart";
    case Termination::StepUnderflow: return "step_underflow";
  }
  return "?";
}

NullGeodesicState make_null_initial(const SpacetimeChart& chart, const Vec4& position, const SpatialDirection& dir) {
  chart.require_inside(position);
  if (dir.r == 0.0 && dir.theta == 0.0 && dir.phi == 0.0)
    throw Error(ErrorKind::DegenerateDirection, "spatial direction is zero");
  const Mat4 g = metric_components(chart, position);
  const Vec4 spatial{0.0, dir.r, dir.theta, dir.phi};

  // g_tt (v^t)^2 + 2 g_ti v^i v^t + g_ij v^i v^j = 0
  const double qa = g[kT][kT];
  double qb = 0.0;
  for (std::size_t i = 1; i < 4; ++i) qb += 2.0 * g[kT][i] * spatial[i];
  const double qc = contract(g, spatial, spatial);
  const double disc = qb * qb - 4.0 * qa * qc;
  if (!(qc > 0.0) || disc < 0.0 || qa == 0.0)
    throw Error(ErrorKind::DegenerateDirection, "direction admits no future-oriented null completion");

  // numerically stable pair of roots
  const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
  const double root1 = q / qa;
  const double root2 = q != 0.0 ? qc / q : root1;
  const double vt = std::max(root1, root2);
  if (!(vt > 0.0)) throw Error(ErrorKind::DegenerateDirection, "no future-oriented null completion");

  NullGeodesicState state;
  state.position = position;
  state.velocity = {vt, dir.r, dir.theta, dir.phi};
  return state;
}

double null_residual(const SpacetimeChart& chart, const NullGeodesicState& state) {
  const Mat4 g = metric_components(chart, state.position);
  const Vec4& v = state.velocity;
  double norm = 0.0, scale = 0.0;
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) {
      const double term = g[a][b] * v[a] * v[b];
      norm += term;
      scale += std::abs(term);
    }
  return scale == 0.0 ? 0.0 : std::abs(norm) / scale;
}

Vec4 geodesic_acceleration(const SpacetimeChart& chart, const Vec4& x, const Vec4& v) {
  const Connection gamma = christoffel(chart, x);
  Vec4 acc{};
  for (std::size_t a = 0; a < 4; ++a) {
    double s = 0.0;
    for (std::size_t b = 0; b < 4; ++b)
      for (std::size_t c = 0; c < 4; ++c) s += gamma[a][b][c] * v[b] * v[c];
    acc[a] = -s;
  }
  return acc;
}

namespace {

NullGeodesicState unpack(const OdeState& y, double lambda) {
  NullGeodesicState s;
  s.lambda = lambda;
  for (std::size_t i = 0; i < 4; ++i) {
    s.position[i] = y[i];
    s.velocity[i] = y[4 + i];
  }
  return s;
}

}  // namespace

Trajectory integrate_null(const NullGeodesicState& initial, const SpacetimeChart& chart, double span,
                          const IntegrationOptions& options) {
  if (!(span > 0.0)) throw Error(ErrorKind::InvalidSpec, "integration span must be positive");
  chart.require_inside(initial.position);

  OdeRhs rhs = [&chart](double, const OdeState& y, OdeState& dy) {
    const Vec4 x{y[0], y[1], y[2], y[3]};
    if (!chart.contains(x)) return false;
    const Vec4 v{y[4], y[5], y[6], y[7]};
    const Vec4 acc = geodesic_acceleration(chart, x, v);
    for (std::size_t i = 0; i < 4; ++i) {
      dy[i] = v[i];
      dy[4 + i] = acc[i];
    }
    return std::isfinite(acc[0]) && std::isfinite(acc[1]) && std::isfinite(acc[2]) && std::isfinite(acc[3]);
  };

  StepperOptions stepper_options;
  stepper_options.rtol = options.rtol;
  stepper_options.atol = options.atol;
  stepper_options.initial_step = std::min(options.initial_step, span);
  stepper_options.min_step = 1e-14 * std::max(1.0, span);
  DormandPrince45 stepper(rhs, stepper_options);

  Trajectory traj;
  auto record = [&](const NullGeodesicState& s) {
    traj.samples.push_back(s);
    traj.null_residual.push_back(null_residual(chart, s));
  };

  const double lambda0 = initial.lambda;
  const double lambda_end = lambda0 + span;
  OdeState y{};
  for (std::size_t i = 0; i < 4; ++i) {
    y[i] = initial.position[i];
    y[4 + i] = initial.velocity[i];
  }
  record(initial);

  double lambda = lambda0;
  std::size_t next_sample = 1;
  const bool dense = options.sample_spacing > 0.0;
  while (lambda < lambda_end) {
    const StepStatus status = stepper.step(lambda, y, lambda_end);
    if (status == StepStatus::DomainExit) {
      traj.termination = Termination::OutOfChart;
      break;
    }
    if (status == StepStatus::Underflow) {
      if (!options.underflow_is_termination) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "step size underflow at lambda=" << lambda << ", r=" << y[1] << ", theta=" << y[2];
        throw Error(ErrorKind::StepUnderflow, msg.str());
      }
      traj.termination = Termination::StepUnderflow;
      break;
    }
    if (dense) {
      const DenseSegment& seg = stepper.last_segment();
      while (true) {
        const double target = lambda0 + static_cast<double>(next_sample) * options.sample_spacing;
        if (target > lambda * (1.0 + 1e-15) + 1e-15 || target > lambda_end * (1.0 + 1e-15) + 1e-15) break;
        if (target >= lambda) {
          // coincides with the step end up to rounding: use the step value
          record(unpack(y, target));
        } else {
          record(unpack(seg(target), target));
        }
        ++next_sample;
      }
    } else {
      record(unpack(y, lambda));
    }
  }
  if (dense && traj.samples.back().lambda < lambda) record(unpack(y, lambda));

  traj.accepted_steps = stepper.accepted();
  traj.rejected_steps = stepper.rejected();
  return traj;
}

}  // namespace kerrlab::geodesic
