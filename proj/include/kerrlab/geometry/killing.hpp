#pragma once

#include <functional>

#include "kerrlab/geometry/chart.hpp"

namespace kerrlab::geometry {

// Irreducible Killing 2-tensor of the chart: the Carter tensor on Kerr (and
// its a -> 0 limit on Schwarzschild), the sum of squared rotation generators
// sum_i Theta_i Theta_i on Minkowski. Contracted twice with a null velocity
// it gives K = Q + (L_z - aE)^2, which reduces to the lowered-index total
// angular momentum gamma_theta^2 + gamma_phi^2 / sin^2(theta) when a = 0.
Mat4 killing_tensor_contravariant(const SpacetimeChart& chart, const Vec4& x);

// K_{ab}, the covariant components.
Mat4 killing_tensor_eval(const SpacetimeChart& chart, const Vec4& x);

// K_{ab} v^a v^b for a contravariant velocity v.
double killing_quadratic(const SpacetimeChart& chart, const Vec4& x, const Vec4& velocity);

// max |nabla_(c K_ab)| over components, divided by max|K_ab| / r. Partial
// derivatives of K come from fourth-order central differences with steps rel_step * r in r
// and rel_step in theta; the connection is the analytic one.
double killing_equation_residual(const SpacetimeChart& chart, const Vec4& x, double rel_step = 1e-4);

// Same audit for an arbitrary covariant symmetric tensor field.
double killing_equation_residual(const SpacetimeChart& chart, const Vec4& x,
                                 const std::function<Mat4(const Vec4&)>& covariant_tensor, double rel_step = 1e-4);

}  // namespace kerrlab::geometry
