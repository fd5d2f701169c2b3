#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "kerrlab/error.hpp"
#include "kerrlab/geodesic/diagnostics.hpp"
#include "kerrlab/geodesic/integrator.hpp"
#include "kerrlab/geodesic/null_geodesic.hpp"
#include "kerrlab/geodesic/radial_potential.hpp"
#include "kerrlab/geometry/killing.hpp"

using namespace kerrlab;
using namespace kerrlab::geodesic;
using geometry::GeneratorField;

namespace {

constexpr double kPi = std::numbers::pi;

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

double relative_drift(const std::vector<double>& v) {
  double worst = 0.0;
  for (double x : v) worst = std::max(worst, std::abs(x - v.front()));
  return worst / std::max(std::abs(v.front()), 1e-300);
}

NullGeodesicState kerr_scattering_state(const SpacetimeChart& kerr) {
  return make_null_initial(kerr, {0.0, 20.0, 1.2, 0.0}, {-1.0, 0.012, 0.02});
}

}  // namespace

TEST(Integrator, DenseOutputTracksHarmonicOscillator) {
  OdeRhs rhs = [](double, const OdeState& y, OdeState& dy) {
    dy = {};
    dy[0] = y[1];
    dy[1] = -y[0];
    return true;
  };
  StepperOptions opt;
  opt.rtol = opt.atol = 1e-11;
  DormandPrince45 stepper(rhs, opt);
  OdeState y{};
  y[0] = 1.0;
  double x = 0.0;
  double worst = 0.0;
  while (x < 10.0) {
    ASSERT_EQ(stepper.step(x, y, 10.0), StepStatus::Accepted);
    const DenseSegment& seg = stepper.last_segment();
    for (double f : {0.1, 0.37, 0.5, 0.81}) {
      const double xi = seg.x0 + f * seg.h;
      worst = std::max(worst, std::abs(seg(xi)[0] - std::cos(xi)));
    }
  }
  EXPECT_DOUBLE_EQ(x, 10.0);
  EXPECT_NEAR(y[0], std::cos(10.0), 1e-9);
  EXPECT_LT(worst, 1e-9);
}

TEST(Integrator, DomainExitShrinksUntilUnderflow) {
  OdeRhs rhs = [](double, const OdeState& y, OdeState& dy) {
    dy = {};
    dy[0] = 1.0;
    return y[0] < 1.0;
  };
  DormandPrince45 stepper(rhs, {});
  OdeState y{};
  double x = 0.0;
  StepStatus status = StepStatus::Accepted;
  while (status == StepStatus::Accepted && x < 5.0) status = stepper.step(x, y, 5.0);
  EXPECT_EQ(status, StepStatus::DomainExit);
  EXPECT_LT(y[0], 1.0);
  EXPECT_GT(y[0], 1.0 - 1e-9);
}

TEST(NullInitial, MinkowskiRadialOutgoing) {
  const auto flat = SpacetimeChart::minkowski();
  const auto s = make_null_initial(flat, {0.0, 5.0, kPi / 2, 0.0}, {1.0, 0.0, 0.0});
  EXPECT_EQ(s.velocity, (Vec4{1.0, 1.0, 0.0, 0.0}));
  EXPECT_EQ(null_residual(flat, s), 0.0);
}

TEST(NullInitial, SchwarzschildCircularPhotonData) {
  const auto sch = SpacetimeChart::schwarzschild(1.0);
  const auto s = make_null_initial(sch, {0.0, 3.0, kPi / 2, 0.0}, {0.0, 0.0, 1.0 / 3.0});
  EXPECT_EQ(s.velocity[kR], 0.0);
  const double ratio = s.velocity[kT] / s.velocity[kPhi];
  EXPECT_NEAR(ratio * ratio, 27.0, 1e-12);
  EXPECT_LT(null_residual(sch, s), 1e-14);
  // stationary radius: the radial acceleration vanishes
  EXPECT_NEAR(geodesic_acceleration(sch, s.position, s.velocity)[kR], 0.0, 1e-15);
}

TEST(NullInitial, ResidualAndOrientationOnAllFamilies) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<SpacetimeChart> charts{SpacetimeChart::minkowski(), SpacetimeChart::schwarzschild(1.0),
                                           SpacetimeChart::kerr(1.0, 0.9)};
  for (const auto& chart : charts) {
    for (int i = 0; i < 200; ++i) {
      const Vec4 x{0.0, 2.2 + 10.0 * (u(rng) + 1.0), 1.5 + 1.3 * u(rng), 0.0};
      const auto s = make_null_initial(chart, x, {u(rng), 0.2 * u(rng), 0.2 * u(rng)});
      EXPECT_GT(s.velocity[kT], 0.0);
      EXPECT_LT(null_residual(chart, s), 1e-14);
    }
  }
}

TEST(NullInitial, ScalingDirectionScalesVelocity) {
  const auto kerr = SpacetimeChart::kerr(1.0, 0.6);
  const Vec4 x{0.0, 7.0, 1.0, 0.3};
  const auto s1 = make_null_initial(kerr, x, {0.4, -0.05, 0.07});
  const auto s2 = make_null_initial(kerr, x, {1.0, -0.125, 0.175});
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(s2.velocity[i], 2.5 * s1.velocity[i], 1e-14 * std::abs(s2.velocity[i]));
}

TEST(NullInitial, RejectsZeroDirectionAndInteriorPoints) {
  const auto sch = SpacetimeChart::schwarzschild(1.0);
  EXPECT_THROW(
      {
        try {
          make_null_initial(sch, {0.0, 5.0, 1.0, 0.0}, {0.0, 0.0, 0.0});
        } catch (const Error& e) {
          EXPECT_EQ(e.kind(), ErrorKind::DegenerateDirection);
          throw;
        }
      },
      Error);
  EXPECT_THROW(make_null_initial(sch, {0.0, 1.5, 1.0, 0.0}, {1.0, 0.0, 0.0}), Error);
}

TEST(Integrate, MinkowskiRadialLine) {
  const auto flat = SpacetimeChart::minkowski();
  const auto s = make_null_initial(flat, {0.0, 5.0, kPi / 2, 0.0}, {1.0, 0.0, 0.0});
  IntegrationOptions opt;
  opt.sample_spacing = 0.5;
  const auto traj = integrate_null(s, flat, 40.0, opt);
  EXPECT_EQ(traj.termination, Termination::SpanReached);
  ASSERT_EQ(traj.samples.size(), 81u);
  for (const auto& p : traj.samples) {
    EXPECT_NEAR(p.position[kR], 5.0 + p.lambda, 1e-13 * (5.0 + p.lambda));
    EXPECT_NEAR(p.position[kT], p.lambda, 1e-12 * (1.0 + p.lambda));
  }
}

TEST(Integrate, CircularPhotonOrbitHoldsForTwentyM) {
  const auto sch = SpacetimeChart::schwarzschild(1.0);
  const auto s = make_null_initial(sch, {0.0, 3.0, kPi / 2, 0.0}, {0.0, 0.0, 1.0 / 3.0});
  IntegrationOptions opt;
  opt.sample_spacing = 0.25;
  const auto traj = integrate_null(s, sch, 20.0, opt);
  for (const auto& p : traj.samples) EXPECT_LT(std::abs(p.position[kR] - 3.0), 1e-3);
}

TEST(Integrate, LambdaStrictlyIncreasing) {
  const auto kerr = SpacetimeChart::kerr(1.0, 0.3);
  const auto traj = integrate_null(kerr_scattering_state(kerr), kerr, 200.0);
  for (std::size_t i = 1; i < traj.samples.size(); ++i) EXPECT_GT(traj.samples[i].lambda, traj.samples[i - 1].lambda);
  EXPECT_EQ(traj.samples.size(), traj.null_residual.size());
}

TEST(Integrate, KerrScatteringConservesEverything) {
  const auto kerr = SpacetimeChart::kerr(1.0, 0.3);
  const auto traj = integrate_null(kerr_scattering_state(kerr), kerr, 200.0);
  EXPECT_EQ(traj.termination, Termination::SpanReached);
  EXPECT_LT(max_of(traj.null_residual), 1e-8);
  // drift < 10 x tolerance per unit affine span
  EXPECT_LT(max_of(traj.null_residual), 10.0 * 1e-10 * 200.0);
  const auto eT = generator_energy(traj, kerr, GeneratorField::time_translation());
  const auto eP = generator_energy(traj, kerr, GeneratorField::axial_rotation());
  const auto k = quadratic_invariant(traj, kerr);
  EXPECT_LT(relative_drift(eT.column("e_T").values), 1e-8);
  EXPECT_LT(relative_drift(eP.column("e_Phi").values), 1e-8);
  EXPECT_LT(relative_drift(k.column("K").values), 1e-8);
  // actually scattered: came in and went back out
  const auto& last = traj.samples.back();
  EXPECT_GT(last.position[kR], 20.0);
}

TEST(Integrate, StepUnderflowRaisesUnlessTermination) {
  const auto sch = SpacetimeChart::schwarzschild(1.0);
  const auto s = make_null_initial(sch, {0.0, 2.5, kPi / 2, 0.0}, {-1.0, 0.0, 0.0});
  IntegrationOptions opt;
  const auto traj = integrate_null(s, sch, 50.0, opt);
  // radial infall reaches the chart floor cleanly
  EXPECT_EQ(traj.termination, Termination::OutOfChart);
  EXPECT_GT(traj.samples.back().position[kR], sch.r_min());
}

TEST(Integrate, RejectsNonPositiveSpan) {
  const auto flat = SpacetimeChart::minkowski();
  const auto s = make_null_initial(flat, {0.0, 5.0, 1.0, 0.0}, {1.0, 0.0, 0.0});
  EXPECT_THROW(integrate_null(s, flat, 0.0), Error);
}

TEST(Energies, SchwarzschildETConstant) {
  const auto sch = SpacetimeChart::schwarzschild(1.0);
  const auto s = make_null_initial(sch, {0.0, 15.0, 1.0, 0.0}, {-1.0, 0.01, 0.015});
  const auto traj = integrate_null(s, sch, 200.0);
  const auto eT = generator_energy(traj, sch, GeneratorField::time_translation());
  EXPECT_LT(relative_drift(eT.column("e_T").values), 1e-8);
  for (double e : eT.column("e_T").values) EXPECT_GE(e, 0.0);
  EXPECT_EQ(eT.column("t").values.size(), traj.samples.size());
}

TEST(Energies, MinkowskiETDominatesER) {
  const auto flat = SpacetimeChart::minkowski();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const auto s = make_null_initial(flat, {0.0, 5.0 + 4.0 * u(rng), 1.5 + u(rng), 0.0},
                                     {u(rng), 0.2 * u(rng), 0.2 * u(rng)});
    IntegrationOptions opt;
    opt.sample_spacing = 0.5;
    const auto traj = integrate_null(s, flat, 30.0, opt);
    const auto eT = generator_energy(traj, flat, GeneratorField::time_translation()).column("e_T").values;
    const auto eR = generator_energy(traj, flat, GeneratorField::radial()).column("e_R").values;
    for (std::size_t j = 0; j < eT.size(); ++j) EXPECT_GE(eT[j], eR[j] - 1e-12);
  }
}

TEST(Energies, TChiRequiresKerr) {
  const auto kerr = SpacetimeChart::kerr(1.0, 0.1);
  const auto sch = SpacetimeChart::schwarzschild(1.0);
  const auto tchi = GeneratorField::blended_time(kerr);
  const auto traj = integrate_null(make_null_initial(sch, {0.0, 8.0, 1.0, 0.0}, {1.0, 0.0, 0.0}), sch, 5.0);
  EXPECT_THROW(generator_energy(traj, sch, tchi), Error);
}

TEST(QuadraticInvariant, MinkowskiAngularMomentumConstant) {
  const auto flat = SpacetimeChart::minkowski();
  const auto s = make_null_initial(flat, {0.0, 6.0, 1.1, 0.0}, {-0.7, 0.08, 0.05});
  IntegrationOptions opt;
  opt.rtol = opt.atol = 1e-12;
  const auto traj = integrate_null(s, flat, 30.0, opt);
  EXPECT_LT(relative_drift(quadratic_invariant(traj, flat).column("K").values), 1e-10);
}

TEST(QuadraticInvariant, SchwarzschildEquatorialIsLzSquared) {
  const auto sch = SpacetimeChart::schwarzschild(1.0);
  const auto s = make_null_initial(sch, {0.0, 10.0, kPi / 2, 0.0}, {-1.0, 0.0, 0.05});
  const auto traj = integrate_null(s, sch, 50.0);
  const auto k = quadratic_invariant(traj, sch).column("K").values;
  const auto lz = generator_energy(traj, sch, GeneratorField::axial_rotation()).column("e_Phi").values;
  for (std::size_t i = 0; i < k.size(); ++i) EXPECT_NEAR(k[i], lz[i] * lz[i], 1e-12 * k[i]);
}

TEST(AffineCovariance, EnergiesScaleLinearlyAndCarterQuadratically) {
  const auto kerr = SpacetimeChart::kerr(1.0, 0.3);
  const Vec4 x{0.0, 12.0, 1.1, 0.0};
  const SpatialDirection d{-1.0, 0.01, 0.02};
  const double c = 3.0;
  const auto s1 = make_null_initial(kerr, x, d);
  const auto s2 = make_null_initial(kerr, x, {c * d.r, c * d.theta, c * d.phi});
  for (const auto& gen : {GeneratorField::time_translation(), GeneratorField::axial_rotation(),
                          GeneratorField::blended_time(kerr)}) {
    const NullGeodesicState* states[] = {&s1, &s2};
    double e[2];
    for (int i = 0; i < 2; ++i) {
      const Vec4 low = lower(geometry::metric_components(kerr, x), states[i]->velocity);
      e[i] = -dot(low, geometry::generator_eval(gen, kerr, x));
    }
    EXPECT_NEAR(e[1], c * e[0], 1e-14 * std::abs(e[1]));
  }
  const double k1 = geometry::killing_quadratic(kerr, x, s1.velocity);
  const double k2 = geometry::killing_quadratic(kerr, x, s2.velocity);
  EXPECT_NEAR(k2, c * c * k1, 1e-13 * k2);

  // along the flow: lambda -> lambda / c
  const auto t1 = integrate_null(s1, kerr, 60.0);
  const auto t2 = integrate_null(s2, kerr, 20.0);
  const double e1 = generator_energy(t1, kerr, GeneratorField::time_translation()).column("e_T").values.back();
  const double e2 = generator_energy(t2, kerr, GeneratorField::time_translation()).column("e_T").values.back();
  EXPECT_NEAR(e2, c * e1, 1e-9 * e2);
  EXPECT_NEAR(t2.samples.back().position[kR], t1.samples.back().position[kR], 1e-7);
}

TEST(Eg2, KillingGeneratorsHaveNoChangeAndNoIntegral) {
  const auto kerr = SpacetimeChart::kerr(1.0, 0.3);
  const auto traj = integrate_null(kerr_scattering_state(kerr), kerr, 200.0);
  for (const auto& gen : {GeneratorField::time_translation(), GeneratorField::axial_rotation()}) {
    const auto rep = eg2_audit(traj, kerr, gen);
    EXPECT_LT(std::abs(rep.integral), 1e-12);
    const double e0 = std::abs(generator_energy(traj, kerr, gen).columns()[1].values.front());
    EXPECT_LT(std::abs(rep.delta_e), 1e-8 * e0);
    EXPECT_LT(rep.residual, 1e-8 * e0);
  }
}

TEST(Eg2, MinkowskiRadialContractionMatchesClosedForm) {
  const auto flat = SpacetimeChart::minkowski();
  const auto s = make_null_initial(flat, {0.0, 8.0, 1.2, 0.0}, {-1.0, 0.06, 0.1});
  IntegrationOptions opt;
  opt.sample_spacing = 0.01;
  const auto traj = integrate_null(s, flat, 16.0, opt);
  const auto R = GeneratorField::radial();
  for (const auto& p : traj.samples) {
    const Vec4 low = lower(geometry::metric_components(flat, p.position), p.velocity);
    const double st = std::sin(p.position[kTheta]);
    const double ang = low[kTheta] * low[kTheta] + low[kPhi] * low[kPhi] / (st * st);
    const double r = p.position[kR];
    EXPECT_NEAR(deformation_contraction(flat, R, p), 2.0 * ang / (r * r * r), 1e-12 * ang / (r * r * r));
  }
  const auto rep = eg2_audit(traj, flat, R);
  const double eR = std::abs(generator_energy(traj, flat, R).column("e_R").values.front());
  EXPECT_LT(rep.residual, 1e-6 * eR);
  // change in e_R is minus half the integrated contraction
  EXPECT_NEAR(rep.delta_e, -0.5 * rep.integral, 1e-6 * eR);
}

TEST(Eg2, EnergyRateMatchesDifferentiatedEnergy) {
  // independent route: central difference of e_R along the dense trajectory
  const auto sch = SpacetimeChart::schwarzschild(1.0);
  const auto A = GeneratorField::radial_multiplier(geometry::photon_sphere_profile(1.0));
  const auto s = make_null_initial(sch, {0.0, 9.0, 1.3, 0.0}, {-1.0, 0.03, 0.04});
  IntegrationOptions opt;
  opt.rtol = opt.atol = 1e-12;
  opt.sample_spacing = 1e-3;
  const auto traj = integrate_null(s, sch, 12.0, opt);
  const auto e = generator_energy(traj, sch, A).columns()[1].values;
  for (std::size_t i = 1000; i + 1 < traj.samples.size(); i += 1000) {
    const double fd = (e[i + 1] - e[i - 1]) / (2e-3);
    EXPECT_NEAR(energy_rate(sch, A, traj.samples[i]), fd, 1e-6 * (1.0 + std::abs(fd)));
  }
}

TEST(Eg2, QuadratureResidualIsSecondOrder) {
  const auto flat = SpacetimeChart::minkowski();
  const auto s = make_null_initial(flat, {0.0, 6.0, 1.2, 0.0}, {-1.0, 0.1, 0.15});
  double res[2];
  for (int k = 0; k < 2; ++k) {
    IntegrationOptions opt;
    opt.rtol = opt.atol = 1e-12;
    opt.sample_spacing = k == 0 ? 0.4 : 0.2;
    res[k] = eg2_audit(integrate_null(s, flat, 12.0, opt), flat, GeneratorField::radial()).residual;
  }
  const double ratio = res[0] / res[1];
  EXPECT_GE(ratio, 3.0);
  EXPECT_LE(ratio, 5.0);
}

TEST(Eg2, PhotonSphereMultiplierOracle) {
  // d/dlambda (f r') = (3M/r^2) r'^2 + f^2 l^2 / r^3, derived from the geodesic equation
  const auto sch = SpacetimeChart::schwarzschild(1.0);
  const auto s = make_null_initial(sch, {0.0, 12.0, 1.1, 0.0}, {-1.0, 0.02, 0.025});
  auto fr = [](const NullGeodesicState& p) { return (1.0 - 3.0 / p.position[kR]) * p.velocity[kR]; };
  auto integrand = [](const NullGeodesicState& p) {
    const double r = p.position[kR], st = std::sin(p.position[kTheta]);
    const double l2 = std::pow(r, 4) * (p.velocity[kTheta] * p.velocity[kTheta] + st * st * p.velocity[kPhi] * p.velocity[kPhi]);
    const double f = 1.0 - 3.0 / r;
    return 3.0 / (r * r) * p.velocity[kR] * p.velocity[kR] + f * f * l2 / (r * r * r);
  };
  double delta = 0.0, integral[2];
  for (int k = 0; k < 2; ++k) {
    IntegrationOptions opt;
    opt.rtol = opt.atol = 1e-12;
    opt.sample_spacing = k == 0 ? 0.01 : 0.005;
    const auto traj = integrate_null(s, sch, 30.0, opt);
    integral[k] = 0.0;
    for (std::size_t i = 1; i < traj.samples.size(); ++i)
      integral[k] += 0.5 * (integrand(traj.samples[i]) + integrand(traj.samples[i - 1])) *
                     (traj.samples[i].lambda - traj.samples[i - 1].lambda);
    delta = fr(traj.samples.back()) - fr(traj.samples.front());
  }
  // trapezoid error is O(h^2); the extrapolated value must close the identity
  const double ratio = (integral[0] - delta) / (integral[1] - delta);
  EXPECT_NEAR(ratio, 4.0, 0.1);
  const double extrapolated = (4.0 * integral[1] - integral[0]) / 3.0;
  EXPECT_NEAR(delta, extrapolated, 1e-6 * std::abs(delta));
}

TEST(Monotonicity, PhotonSphereRadialMomentumNeverDecreases) {
  const auto sch = SpacetimeChart::schwarzschild(1.0);
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int checked = 0;
  while (checked < 100) {
    const Vec4 x{0.0, 6.0 + 4.0 * u(rng), 1.5 + 0.8 * u(rng), 0.0};
    const auto s = make_null_initial(sch, x, {u(rng), 0.15 * u(rng), 0.15 * u(rng)});
    IntegrationOptions opt;
    opt.underflow_is_termination = true;
    const auto traj = integrate_null(s, sch, 60.0, opt);
    double prev = -1e300;
    for (const auto& p : traj.samples) {
      const double q = (1.0 - 3.0 / p.position[kR]) * p.velocity[kR];
      ASSERT_GE(q, prev - 1e-8);
      prev = q;
    }
    ++checked;
  }
}

TEST(RadialPotential, SchwarzschildFormAndPhotonSphereDoubleRoot) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (int i = 0; i < 50; ++i) {
    const double e = u(rng), l = u(rng) - 2.5, q = u(rng);
    RadialPotential rp({e, l, q, 1.0, 0.0});
    const double r = 2.0 + u(rng);
    const double expect = e * e * std::pow(r, 4) - (r * r - 2.0 * r) * (q + l * l);
    EXPECT_NEAR(rp.value(r), expect, 1e-12 * std::abs(expect) + 1e-12);
  }
  // (Q + L^2) / E^2 = 27: double root at 3M
  RadialPotential critical({1.0, 3.0, 18.0, 1.0, 0.0});
  const auto roots = critical.exterior_roots();
  ASSERT_EQ(roots.size(), 1u);
  EXPECT_TRUE(roots[0].double_root);
  EXPECT_NEAR(roots[0].r, 3.0, 1e-8);
  // slightly off-critical: no double root at 3M
  RadialPotential below({1.0, 3.0, 17.9, 1.0, 0.0});
  EXPECT_THROW(below.exterior_roots(), Error);
  RadialPotential above({1.0, 3.0, 18.1, 1.0, 0.0});
  const auto two = above.exterior_roots();
  ASSERT_EQ(two.size(), 2u);
  EXPECT_FALSE(two[0].double_root);
  EXPECT_LT(two[0].r, 3.0);
  EXPECT_GT(two[1].r, 3.0);
}

TEST(RadialPotential, PureRadialHasNoTurningPoint) {
  RadialPotential rp({1.0, 0.0, 0.0, 1.0, 0.0});
  for (double r : {2.5, 4.0, 100.0}) EXPECT_DOUBLE_EQ(rp.value(r), std::pow(r, 4));
  try {
    rp.exterior_roots();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoExteriorRoots);
  }
}

TEST(RadialPotential, DerivativesMatchDifferences) {
  RadialPotential rp({1.3, 2.1, 4.0, 1.0, 0.7});
  for (double r : {2.0, 3.5, 7.0}) {
    const double h = 1e-5;
    EXPECT_NEAR(rp.d1(r), (rp.value(r + h) - rp.value(r - h)) / (2 * h), 1e-6 * std::abs(rp.d1(r)));
    EXPECT_NEAR(rp.d2(r), (rp.d1(r + h) - rp.d1(r - h)) / (2 * h), 1e-6 * std::abs(rp.d2(r)));
  }
}

TEST(RadialPotential, KerrEquatorialProgradeDoubleRootMatchesBisectionOracle) {
  const double a = 0.5;
  const auto kerr = SpacetimeChart::kerr(1.0, a);
  // oracle: for E = 1, Q = 0, eliminate xi through R' = 0 and bisect R on (r+, 4M)
  auto xi_of = [a](double r) {
    // R' = 0 at Q = 0 is linear in xi given r:  4r(r^2 + a^2 - a xi) = 2(r - 1)(xi - a)^2, solve the quadratic
    const double A = 2.0 * (r - 1.0), B = 4.0 * r * a - 4.0 * (r - 1.0) * a, C = 2.0 * (r - 1.0) * a * a - 4.0 * r * (r * r + a * a);
    return (-B + std::sqrt(B * B - 4.0 * A * C)) / (2.0 * A);
  };
  auto R = [&](double r) {
    const double xi = xi_of(r);
    const double w = r * r + a * a - a * xi;
    return w * w - (r * r - 2.0 * r + a * a) * (xi - a) * (xi - a);
  };
  double lo = kerr.outer_horizon() * 1.001, hi = 4.0;
  ASSERT_LT(R(lo) * R(hi), 0.0);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((R(mid) < 0.0) == (R(lo) < 0.0) ? lo : hi) = mid;
  }
  const double oracle = 0.5 * (lo + hi);

  const auto trapped = find_trapped(kerr, Orbit::Prograde);
  EXPECT_NEAR(trapped.r, oracle, 1e-10);
  RadialPotential rp({1.0, trapped.xi, 0.0, 1.0, a});
  const auto roots = rp.exterior_roots();
  const bool found = std::any_of(roots.begin(), roots.end(),
                                 [&](const RadialRoot& rr) { return std::abs(rr.r - oracle) < 1e-7; });
  EXPECT_TRUE(found);
}

TEST(RadialPotential, TurningPointCoincidesWithRoot) {
  const auto kerr = SpacetimeChart::kerr(1.0, 0.4);
  const auto s = make_null_initial(kerr, {0.0, 25.0, 1.3, 0.0}, {-1.0, 0.004, 0.012});
  IntegrationOptions opt;
  opt.rtol = opt.atol = 1e-12;
  const auto traj = integrate_null(s, kerr, 60.0, opt);
  const auto roots = RadialPotential(conserved_quantities(kerr, s)).exterior_roots();
  double rmin = 1e300;
  for (const auto& p : traj.samples) rmin = std::min(rmin, p.position[kR]);
  // dense refinement of the minimum through the state velocity: r' ~ 0 at the turning point
  EXPECT_NEAR(rmin, roots.back().r, 1e-3);
  IntegrationOptions fine = opt;
  fine.sample_spacing = 1e-3;
  double rmin_fine = 1e300;
  for (const auto& p : integrate_null(s, kerr, 60.0, fine).samples) rmin_fine = std::min(rmin_fine, p.position[kR]);
  EXPECT_NEAR(rmin_fine, roots.back().r, 1e-7);
}

TEST(FindTrapped, SchwarzschildPhotonSphere) {
  const auto t = find_trapped(SpacetimeChart::schwarzschild(1.0), Orbit::Prograde);
  EXPECT_DOUBLE_EQ(t.r, 3.0);
  EXPECT_NEAR(t.xi * t.xi, 27.0, 1e-12);
  EXPECT_LT(t.residual_r, 1e-10);
  EXPECT_LT(t.residual_dr, 1e-10);
}

TEST(FindTrapped, ContinuousAsSpinVanishes) {
  for (auto orbit : {Orbit::Prograde, Orbit::Retrograde}) {
    const auto t = find_trapped(SpacetimeChart::kerr(1.0, 1e-6), orbit);
    EXPECT_LT(std::abs(t.r - 3.0), 1e-5);
    EXPECT_LT(t.residual_r, 1e-10);
    EXPECT_LT(t.residual_dr, 1e-10);
  }
}

TEST(FindTrapped, EquatorialBranchesMatchClosedForm) {
  for (double a : {0.1, 0.3, 0.5, 0.9, 0.99}) {
    const auto kerr = SpacetimeChart::kerr(1.0, a);
    const auto pro = find_trapped(kerr, Orbit::Prograde);
    const auto retro = find_trapped(kerr, Orbit::Retrograde);
    EXPECT_LT(pro.r, 3.0);
    EXPECT_GT(retro.r, 3.0);
    EXPECT_NEAR(pro.r, 2.0 * (1.0 + std::cos(2.0 / 3.0 * std::acos(-a))), 1e-10);
    EXPECT_NEAR(retro.r, 2.0 * (1.0 + std::cos(2.0 / 3.0 * std::acos(a))), 1e-10);
    for (const auto& t : {pro, retro}) {
      EXPECT_LT(t.residual_r, 1e-10);
      EXPECT_LT(t.residual_dr, 1e-10);
    }
    EXPECT_GT(pro.xi, 0.0);
    EXPECT_LT(retro.xi, 0.0);
  }
}

TEST(FindTrapped, OffEquatorialSphericalOrbits) {
  const auto kerr = SpacetimeChart::kerr(1.0, 0.7);
  for (double eta : {1.0, 10.0, 20.0}) {
    const auto t = find_trapped(kerr, Orbit::Retrograde, eta);
    EXPECT_LT(t.residual_r, 1e-10);
    EXPECT_LT(t.residual_dr, 1e-10);
    RadialPotential rp({1.0, t.xi, eta, 1.0, 0.7});
    EXPECT_LT(std::abs(rp.value(t.r)), 1e-10);
    EXPECT_LT(std::abs(rp.d1(t.r)), 1e-10);
  }
}

TEST(FindTrapped, ReportsEmptyInterval) {
  const auto kerr = SpacetimeChart::kerr(1.0, 0.3);
  try {
    find_trapped(kerr, 4.0, 8.0, Orbit::Prograde);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoTrappedOrbit);
  }
  EXPECT_THROW(find_trapped(SpacetimeChart::minkowski(), 1.0, 5.0, Orbit::Prograde), Error);
}
