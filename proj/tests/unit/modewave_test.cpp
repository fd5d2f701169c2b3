#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "kerrlab/error.hpp"
#include "kerrlab/modewave/evolve.hpp"
#include "kerrlab/modewave/functionals.hpp"
#include "kerrlab/modewave/mode_state.hpp"
#include "kerrlab/modewave/potential.hpp"
#include "kerrlab/modewave/tortoise.hpp"

using namespace kerrlab;
using namespace kerrlab::modewave;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidSpec;
}

Complex gaussian(double x, double center, double width) {
  const double d = (x - center) / width;
  return std::exp(-d * d);
}

ModeState flat_state(double delta, double half_width = 20.0, double cfl = 0.9) {
  return ModeState(Grid::with_spacing(-half_width, half_width, delta), {0, 0, 0.0}, cfl);
}

ModeState schwarzschild_packet(int s, int l, double delta, double lo, double hi, double cfl, double center = 0.0,
                               double width = 3.0) {
  ModeState st(Grid::with_spacing(lo, hi, delta), {s, l, 1.0}, cfl);
  st.set_data([&](double x) { return gaussian(x, center, width); }, [](double) { return Complex{}; });
  return st;
}

double max_abs_column(const Ledger& l, const char* name) {
  double m = 0.0;
  for (double v : l.column(name).values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST(Tortoise, Examples) {
  EXPECT_DOUBLE_EQ(tortoise(4.0, 1.0), 4.0);
  EXPECT_NEAR(r_of_rstar(4.0, 1.0), 4.0, 1e-13);
  EXPECT_NEAR(tortoise(3.0, 1.0), 3.0 + 2.0 * std::log(0.5), 1e-15);
  EXPECT_NEAR(tortoise(3.0, 1.0), 1.6137, 1e-4);
  EXPECT_DOUBLE_EQ(tortoise(7.0, 0.0), 7.0);
}

TEST(Tortoise, RoundTripAcrossTheLine) {
  for (double m : {0.5, 1.0, 3.0}) {
    for (double x = -10.0 * m; x <= 600.0; x += 0.37) {
      const double r = r_of_rstar(x, m);
      EXPECT_GT(r, 2.0 * m);
      EXPECT_NEAR(tortoise(r, m), x, 1e-12 * std::max(1.0, std::abs(x)));
    }
    for (double r : {2.0 * m * (1 + 1e-6), 2.5 * m, 3.0 * m, 10.0 * m, 1e4 * m})
      EXPECT_NEAR(r_of_rstar(tortoise(r, m), m), r, 1e-12 * r);
  }
  // deep in the horizon limit r rounds to 2M but stays finite
  EXPECT_GE(r_of_rstar(-500.0, 1.0), 2.0);
  EXPECT_THROW(tortoise(1.5, 1.0), Error);
}

TEST(Potential, Examples) {
  EXPECT_NEAR(potential_real({0, 0, 1.0}, 3.0), 2.0 / 81.0, 1e-16);
  EXPECT_NEAR(potential_real({1, 1, 1.0}, 4.0), 0.0625, 1e-16);
  for (double r : {0.5, 2.0, 9.0}) EXPECT_DOUBLE_EQ(potential_real({0, 3, 0.0}, r), 12.0 / (r * r));
  EXPECT_EQ(kind_of([] { validate({2, 1, 1.0}); }), ErrorKind::InvalidSpec);
  EXPECT_EQ(kind_of([] { validate({3, 3, 1.0}); }), ErrorKind::InvalidSpec);
  const auto v = effective_potential({0, 2, 1.0, 0.01, 1.0}, 3.0);
  EXPECT_NEAR(v.imag(), 0.01, 1e-15);
  EXPECT_EQ(effective_potential({0, 2, 1.0}, 3.0).imag(), 0.0);
}

TEST(Potential, ReductionOracleFromTortoiseGeometry) {
  // u = psi Y / r in the wave equation gives V = H l(l+1)/r^2 + (1/r) d^2 r / dr*^2;
  // the spin coupling subtracts s^2 H 2M/r^3. The second derivative is taken
  // numerically through the inverse tortoise map only.
  const double m = 1.0, h = 1e-3;
  for (int s = 0; s <= 2; ++s) {
    for (int l = s; l <= s + 3; ++l) {
      for (double x : {-5.0, 0.0, 1.6137, 4.0, 20.0}) {
        const double r = r_of_rstar(x, m);
        const double rpp = (r_of_rstar(x + h, m) - 2.0 * r + r_of_rstar(x - h, m)) / (h * h);
        const double hr = 1.0 - 2.0 * m / r;
        const double oracle = hr * l * (l + 1) / (r * r) + rpp / r - s * s * hr * 2.0 * m / (r * r * r);
        EXPECT_NEAR(potential_real({s, l, m}, r), oracle, 1e-7) << "s=" << s << " l=" << l << " r*=" << x;
      }
    }
  }
}

TEST(Potential, DecaysAtBothEndsAndDerivativeMatches) {
  const PotentialSpec spec{0, 2, 1.0};
  EXPECT_LT(potential_real(spec, r_of_rstar(-60.0, 1.0)), 1e-10);
  EXPECT_LT(potential_real(spec, 1e5), 1e-9);
  for (double x : {-3.0, 1.0, 6.0}) {
    const double d = 1e-5;
    const double fd = (potential_real(spec, r_of_rstar(x + d, 1.0)) - potential_real(spec, r_of_rstar(x - d, 1.0))) / (2 * d);
    EXPECT_NEAR(potential_real_drstar(spec, r_of_rstar(x, 1.0)), fd, 1e-8);
  }
}

TEST(Multiplier, PhotonSphereProfileDerivatives) {
  const auto p = photon_sphere_multiplier(1.0);
  EXPECT_NEAR(p.f(trapping_rstar(1.0)), 0.0, 1e-15);
  const double h = 1e-3;
  for (double x : {-4.0, 0.5, 1.6, 3.0, 12.0}) {
    EXPECT_NEAR(p.d1(x), (p.f(x + h) - p.f(x - h)) / (2 * h), 1e-7);
    const double d3 = (p.f(x + 2 * h) - 2 * p.f(x + h) + 2 * p.f(x - h) - p.f(x - 2 * h)) / (2 * h * h * h);
    EXPECT_NEAR(p.d3(x), d3, 1e-5);
  }
  EXPECT_EQ(kind_of([] { photon_sphere_multiplier(0.0); }), ErrorKind::ProfileUndefined);
  const auto t = tanh_multiplier(1.0, 2.0);
  for (double x : {-1.0, 0.7, 3.0}) {
    const double d3 = (t.f(x + 2 * h) - 2 * t.f(x + h) + 2 * t.f(x - h) - t.f(x - 2 * h)) / (2 * h * h * h);
    EXPECT_NEAR(t.d3(x), d3, 1e-5);
  }
}

TEST(ModeState, RejectsBadSetup) {
  const Grid g = Grid::with_spacing(-10, 10, 0.1);
  EXPECT_EQ(kind_of([&] { ModeState(g, {0, 2, 1.0}, 1.2); }), ErrorKind::CflViolation);
  EXPECT_EQ(kind_of([&] { ModeState(g, {1, 0, 1.0}); }), ErrorKind::InvalidSpec);
  EXPECT_EQ(kind_of([&] { ModeState(g, {0, 2, 0.0}); }), ErrorKind::InvalidSpec);
  ModeState st(g, {0, 2, 1.0});
  st.psi()[40] = std::nan("");
  EXPECT_EQ(kind_of([&] { Evolution run(st); }), ErrorKind::NonFiniteField);
}

TEST(Evolve, DAlembertSolutionAtSecondOrder) {
  double err[2];
  for (int k = 0; k < 2; ++k) {
    const double delta = k == 0 ? 0.05 : 0.025;
    auto st = flat_state(delta, 20.0, 0.5);
    st.set_data([](double x) { return gaussian(x, 0.0, 1.0); }, [](double) { return Complex{}; });
    Evolution run(st, {.ledger_stride = 1000000});
    run.advance_to(5.0);
    ASSERT_NEAR(st.time(), 5.0, 1e-9);
    err[k] = 0.0;
    for (std::size_t i = 0; i < st.size(); ++i) {
      const double x = st.rstar(i);
      const double exact = 0.5 * (std::exp(-(x - 5) * (x - 5)) + std::exp(-(x + 5) * (x + 5)));
      err[k] = std::max(err[k], std::abs(st.psi()[i] - exact));
    }
  }
  EXPECT_LT(err[0], 5e-3);
  EXPECT_NEAR(err[0] / err[1], 4.0, 0.5);
}

TEST(Evolve, ZeroFieldStaysZero) {
  auto st = flat_state(0.1);
  const auto ledger = evolve(st, 50);
  EXPECT_EQ(max_abs_column(ledger, "E"), 0.0);
  for (const auto& v : st.psi()) EXPECT_EQ(v, Complex{});
}

TEST(Evolve, LinearInTheData) {
  auto make = [](double a, double b) {
    auto st = schwarzschild_packet(0, 2, 0.1, -30, 40, 0.5);
    st.set_data([&](double x) { return a * gaussian(x, 0.0, 2.0) + b * Complex(0, 1) * gaussian(x, 5.0, 1.0); },
                [&](double x) { return b * gaussian(x, -3.0, 1.5); });
    evolve(st, 400);
    return st.psi();
  };
  const auto u = make(1.0, 0.0), v = make(0.0, 1.0), w = make(2.0, -3.0);
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(std::abs(w[i] - (2.0 * u[i] - 3.0 * v[i])), 0.0, 1e-12);
}

TEST(Evolve, BitwiseDeterministic) {
  auto run = [] {
    auto st = schwarzschild_packet(1, 2, 0.1, -30, 40, 0.5);
    return evolve(st, 300, {.ledger_stride = 7, .morawetz = photon_sphere_multiplier(1.0)});
  };
  const auto a = run(), b = run();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t c = 0; c < a.columns().size(); ++c) EXPECT_EQ(a.columns()[c].values, b.columns()[c].values);
}

TEST(Evolve, SommerfeldLetsPacketsLeave) {
  auto st = flat_state(0.05, 10.0, 0.5);
  st.set_data([](double x) { return gaussian(x, 0.0, 1.0); }, [](double) { return Complex{}; });
  const double e0 = energy(st);
  Evolution run(st, {.ledger_stride = 100});
  run.advance_to(20.0);
  EXPECT_LT(energy(st), 1e-4 * e0);
  // outflow is accounted for by the boundary flux integral
  EXPECT_LT(std::abs(run.ledger().column("energy_residual").values.back()), 1e-8 * e0);
}

TEST(Evolve, LedgerSamplesFollowStride) {
  auto st = schwarzschild_packet(0, 2, 0.1, -30, 40, 0.5);
  const auto ledger = evolve(st, 105, {.ledger_stride = 10});
  ASSERT_EQ(ledger.size(), 12u);
  EXPECT_EQ(ledger.index().front(), 0.0);
  EXPECT_NEAR(ledger.index()[1], 10 * st.dt(), 1e-15);
  EXPECT_NEAR(ledger.index().back(), 105 * st.dt(), 1e-12);
}

TEST(Energy, FlatGaussianConservedBeforeBoundary) {
  double drift[2];
  for (int k = 0; k < 2; ++k) {
    auto st = flat_state(k == 0 ? 0.05 : 0.025, 20.0, 0.5);
    st.set_data([](double x) { return gaussian(x, 0.0, 1.0); }, [](double) { return Complex{}; });
    Evolution run(st, {.ledger_stride = 10});
    run.advance_to(10.0);
    const auto& e = run.ledger().column("E").values;
    drift[k] = 0.0;
    for (double v : e) drift[k] = std::max(drift[k], std::abs(v - e.front()) / e.front());
  }
  EXPECT_LT(drift[0], 1e-3);
  EXPECT_NEAR(drift[0] / drift[1], 4.0, 0.5);
}

TEST(Energy, SchwarzschildModeShortRun) {
  auto st = schwarzschild_packet(0, 2, 0.05, -90, 110, 0.04);
  Evolution run(st, {.ledger_stride = 100});
  run.advance_to(60.0);
  const auto& e = run.ledger().column("E").values;
  double drift = 0.0;
  for (double v : e) drift = std::max(drift, std::abs(v - e.front()) / e.front());
  EXPECT_LT(drift, 1e-6);
  EXPECT_LT(max_abs_column(run.ledger(), "flux"), 1e-12);
}

TEST(Morawetz, TranslationOnFlatSpaceIsConserved) {
  auto st = flat_state(0.05, 30.0, 0.5);
  st.set_data([](double x) { return gaussian(x, 0.0, 1.5); }, [](double x) { return 0.3 * gaussian(x, 1.0, 1.0); });
  Evolution run(st, {.ledger_stride = 10, .morawetz = constant_multiplier(1.0)});
  run.advance_to(15.0);
  EXPECT_EQ(max_abs_column(run.ledger(), "B"), 0.0);
  const auto& i = run.ledger().column("I").values;
  for (double v : i) EXPECT_NEAR(v, i.front(), 1e-10 * std::abs(i.front()) + 1e-12);
}

TEST(Morawetz, PhotonSphereIdentityConvergesAtSecondOrder) {
  double res[2];
  for (int k = 0; k < 2; ++k) {
    auto st = schwarzschild_packet(0, 2, k == 0 ? 0.1 : 0.05, -60, 60, 0.5, 5.0, 2.0);
    Evolution run(st, {.ledger_stride = 1000000, .morawetz = photon_sphere_multiplier(1.0)});
    run.advance_to(30.0);
    res[k] = std::abs(run.ledger().column("morawetz_residual").values.back());
  }
  EXPECT_GE(res[0] / res[1], 3.0);
  EXPECT_LE(res[0] / res[1], 5.0);
}

TEST(ImFlux, VanishesForRealPotentialAndRealData) {
  auto real_v = schwarzschild_packet(0, 2, 0.1, -30, 40, 0.5);
  EXPECT_EQ(im_flux(real_v), 0.0);
  ModeState bump(Grid::with_spacing(-30, 40, 0.1), {0, 2, 1.0, 0.01, 1.0}, 0.5);
  bump.set_data([](double x) { return gaussian(x, 0.0, 2.0); }, [](double) { return Complex{}; });
  EXPECT_EQ(im_flux(bump), 0.0);
}

TEST(ImFlux, EnergyBalanceConvergesAtSecondOrder) {
  // dE/dt = -F + boundary flux for psi_tt = psi_xx - (V_R + i V_I) psi
  double res[2];
  for (int k = 0; k < 2; ++k) {
    ModeState st(Grid::with_spacing(-60, 60, k == 0 ? 0.1 : 0.05), {0, 2, 1.0, 0.01, 1.0}, 0.5);
    st.set_data([](double x) { return gaussian(x, 8.0, 2.0) * std::exp(Complex(0, 1.5 * x)); },
                [](double x) { return -Complex(0, 1.5) * gaussian(x, 8.0, 2.0) * std::exp(Complex(0, 1.5 * x)); });
    Evolution run(st, {.ledger_stride = 1000000});
    run.advance_to(25.0);
    res[k] = std::abs(run.ledger().column("energy_residual").values.back());
    EXPECT_GT(std::abs(run.ledger().column("int_F").values.back()), 1e-5);
  }
  EXPECT_GE(res[0] / res[1], 3.0);
  EXPECT_LE(res[0] / res[1], 5.0);
}

TEST(LocalEnergy, WindowBehaviour) {
  auto st = schwarzschild_packet(0, 2, 0.1, -30, 40, 0.5);
  EXPECT_DOUBLE_EQ(local_energy(st, -30, 40), energy(st));
  EXPECT_LT(local_energy(st, -5, 5), energy(st));
  auto zero = flat_state(0.1);
  EXPECT_EQ(local_energy(zero, -5, 5), 0.0);
  EXPECT_EQ(kind_of([&] { local_energy(st, -40, 0); }), ErrorKind::WindowOutsideGrid);
  EXPECT_DOUBLE_EQ(energy(st, true) > energy(st) ? 1.0 : 0.0, 1.0);
}

TEST(OrderN, DefinitionAndMismatch) {
  std::vector<ModeState> one{schwarzschild_packet(0, 2, 0.1, -30, 40, 0.5)};
  EXPECT_EQ(order_n_energy(one, 0), energy(one.front()));
  const std::vector<double> unit{1.0, 1.0};
  const std::vector<int> ls{1, 2};
  EXPECT_EQ(order_n_energy(unit, ls, 1), 8.0);
  std::vector<ModeState> mixed{schwarzschild_packet(0, 1, 0.1, -30, 40, 0.5), schwarzschild_packet(0, 2, 0.05, -30, 40, 0.5)};
  EXPECT_EQ(kind_of([&] { order_n_energy(mixed, 1); }), ErrorKind::GridMismatch);
}
