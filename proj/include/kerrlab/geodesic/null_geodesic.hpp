#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "kerrlab/geometry/chart.hpp"

namespace kerrlab::geodesic {

using geometry::SpacetimeChart;

struct NullGeodesicState {
  Vec4 position{};
  Vec4 velocity{};  // contravariant, per unit affine parameter
  double lambda = 0.0;
};

// Contravariant coordinate components of the spatial part of the velocity.
struct SpatialDirection {
  double r = 0.0;
  double theta = 0.0;
  double phi = 0.0;
};

// Completes a spatial direction to a future-oriented null velocity by solving
// g_ab v^a v^b = 0 for v^t and keeping the positive root (the larger one if
// both are positive, which can only happen inside an ergoregion).
NullGeodesicState make_null_initial(const SpacetimeChart& chart, const Vec4& position, const SpatialDirection& dir);

// |g_ab v^a v^b| / sum_ab |g_ab v^a v^b|; zero for an exactly null vector.
double null_residual(const SpacetimeChart& chart, const NullGeodesicState& state);

enum class Termination { SpanReached, OutOfChart, StepUnderflow };

std::string_view to_string(Termination t) noexcept;

struct IntegrationOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
  // Spacing of dense-output samples in affine parameter; 0 records every
  // accepted step instead.
  double sample_spacing = 0.0;
  double initial_step = 1e-2;
  // When false, step-size underflow raises Error(StepUnderflow); when true it
  // only ends the trajectory.
  bool underflow_is_termination = false;
};

struct Trajectory {
  std::vector<NullGeodesicState> samples;
  std::vector<double> null_residual;
  Termination termination = Termination::SpanReached;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
};

// Geodesic equation in first-order form with the analytic connection. The
// null constraint is monitored at every sample and never projected out.
Trajectory integrate_null(const NullGeodesicState& initial, const SpacetimeChart& chart, double span,
                          const IntegrationOptions& options = {});

// d^2 x^a / d lambda^2 = -Gamma^a_bc v^b v^c
Vec4 geodesic_acceleration(const SpacetimeChart& chart, const Vec4& x, const Vec4& v);

}  // namespace kerrlab::geodesic
