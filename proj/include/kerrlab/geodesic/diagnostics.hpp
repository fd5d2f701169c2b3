#pragma once

#include "kerrlab/geodesic/null_geodesic.hpp"
#include "kerrlab/geometry/generator.hpp"
#include "kerrlab/ledger.hpp"

namespace kerrlab::geodesic {

using geometry::GeneratorField;

// e_X = -gamma_a X^a at each sample, indexed by lambda, with the sampled
// coordinate time alongside so the t-parameterised series can be recovered.
Ledger generator_energy(const Trajectory& traj, const SpacetimeChart& chart, const GeneratorField& gen);

// K_ab gamma^a gamma^b for the chart's Killing 2-tensor.
Ledger quadratic_invariant(const Trajectory& traj, const SpacetimeChart& chart);

// gamma^a gamma^b (L_X g)_ab = gamma_a gamma_b pi^{ab}.
double deformation_contraction(const SpacetimeChart& chart, const GeneratorField& gen, const NullGeodesicState& s);

// d e_X / d lambda along a geodesic, which is -1/2 of the contraction above.
double energy_rate(const SpacetimeChart& chart, const GeneratorField& gen, const NullGeodesicState& s);

struct Eg2Report {
  double delta_e = 0.0;      // e_X(end) - e_X(start)
  double integral = 0.0;     // int gamma_a gamma_b pi^{ab} d lambda, trapezoid over samples
  double predicted = 0.0;    // -integral / 2
  double residual = 0.0;     // |delta_e - predicted|
  std::size_t samples = 0;
};

// Compares the change in e_X with the integrated deformation. Never throws on
// the comparison itself; the residual is reported for the caller to judge.
Eg2Report eg2_audit(const Trajectory& traj, const SpacetimeChart& chart, const GeneratorField& gen);

// lambda, t, r, theta, phi, v^t, v^r, v^theta, v^phi, null_residual.
Ledger trajectory_ledger(const Trajectory& traj);

}  // namespace kerrlab::geodesic
