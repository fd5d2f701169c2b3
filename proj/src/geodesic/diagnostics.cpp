#include "kerrlab/geodesic/diagnostics.hpp"

#include <array>
#include <cmath>

#include "kerrlab/error.hpp"
#include "kerrlab/geometry/killing.hpp"

namespace kerrlab::geodesic {

using geometry::metric_components;

Ledger generator_energy(const Trajectory& traj, const SpacetimeChart& chart, const GeneratorField& gen) {
  geometry::require_compatible(gen, chart);
  Ledger ledger("energy_" + gen.name(), "lambda", "M");
  ledger.add_column("t", "M");
  ledger.add_column("e_" + gen.name(), "1");
  for (const auto& s : traj.samples) {
    const Vec4 lowered = lower(metric_components(chart, s.position), s.velocity);
    const double e = -dot(lowered, geometry::generator_eval(gen, chart, s.position));
    const std::array<double, 2> row{s.position[kT], e};
    ledger.append(s.lambda, row);
  }
  return ledger;
}

Ledger quadratic_invariant(const Trajectory& traj, const SpacetimeChart& chart) {
  Ledger ledger("killing_quadratic", "lambda", "M");
  ledger.add_column("t", "M");
  ledger.add_column("K", "M^2");
  for (const auto& s : traj.samples) {
    const std::array<double, 2> row{s.position[kT], geometry::killing_quadratic(chart, s.position, s.velocity)};
    ledger.append(s.lambda, row);
  }
  return ledger;
}

double deformation_contraction(const SpacetimeChart& chart, const GeneratorField& gen, const NullGeodesicState& s) {
  return contract(geometry::metric_lie_derivative(gen, chart, s.position), s.velocity, s.velocity);
}

double energy_rate(const SpacetimeChart& chart, const GeneratorField& gen, const NullGeodesicState& s) {
  return -0.5 * deformation_contraction(chart, gen, s);
}

Eg2Report eg2_audit(const Trajectory& traj, const SpacetimeChart& chart, const GeneratorField& gen) {
  Eg2Report report;
  report.samples = traj.samples.size();
  if (traj.samples.size() < 2) return report;
  const Ledger energy = generator_energy(traj, chart, gen);
  const auto& e = energy.columns()[1].values;
  report.delta_e = e.back() - e.front();

  double prev = deformation_contraction(chart, gen, traj.samples.front());
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    const double cur = deformation_contraction(chart, gen, traj.samples[i]);
    report.integral += 0.5 * (prev + cur) * (traj.samples[i].lambda - traj.samples[i - 1].lambda);
    prev = cur;
  }
  report.predicted = -0.5 * report.integral;
  report.residual = std::abs(report.delta_e - report.predicted);
  return report;
}

Ledger trajectory_ledger(const Trajectory& traj) {
  Ledger ledger("trajectory", "lambda", "M");
  ledger.add_column("t", "M");
  ledger.add_column("r", "M");
  ledger.add_column("theta", "rad");
  ledger.add_column("phi", "rad");
  ledger.add_column("v_t", "1");
  ledger.add_column("v_r", "1");
  ledger.add_column("v_theta", "1/M");
  ledger.add_column("v_phi", "1/M");
  ledger.add_column("null_residual", "1");
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& s = traj.samples[i];
    const std::array<double, 9> row{s.position[0], s.position[1], s.position[2], s.position[3], s.velocity[0],
                                    s.velocity[1], s.velocity[2], s.velocity[3], traj.null_residual[i]};
    ledger.append(s.lambda, row);
  }
  ledger.metadata()["termination"] = std::string(to_string(traj.termination));
  return ledger;
}

}  // namespace kerrlab::geodesic
