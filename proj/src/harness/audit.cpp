#include "kerrlab/harness/audit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>

#include "kerrlab/error.hpp"
#include "kerrlab/geodesic/diagnostics.hpp"
#include "kerrlab/geodesic/radial_potential.hpp"
#include "kerrlab/geometry/generator.hpp"
#include "kerrlab/geometry/killing.hpp"
#include "kerrlab/harness/parallel.hpp"
#include "kerrlab/harness/sampling.hpp"
#include "kerrlab/modewave/evolve.hpp"

namespace kerrlab::harness {

using geodesic::IntegrationOptions;
using geodesic::NullGeodesicState;
using geodesic::Trajectory;
using geometry::GeneratorField;
using geometry::SpacetimeChart;
using modewave::Complex;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double max_dev(const std::vector<double>& v) {
  double worst = 0.0;
  for (double x : v) worst = std::max(worst, std::abs(x - v.front()));
  return worst;
}

bool in_ratio_band(double r) { return r >= 3.0 && r <= 5.0; }

// Largest |c_i / ref - 1|.
double spread(const std::vector<double>& c, double ref) {
  double s = 0.0;
  for (double x : c) s = std::max(s, std::abs(x / ref - 1.0));
  return s;
}

std::mt19937_64 draw_engine(const AuditOptions& o, int criterion, std::size_t i) {
  return job_engine(o.seed, static_cast<std::uint64_t>(criterion) * 100000 + i);
}

Trajectory integrate(const NullGeodesicState& s, const SpacetimeChart& chart, double span, double tol,
                     double spacing = 0.0) {
  IntegrationOptions opt;
  opt.rtol = opt.atol = tol;
  opt.sample_spacing = spacing;
  opt.underflow_is_termination = true;
  return geodesic::integrate_null(s, chart, span, opt);
}

// ---------------------------------------------------------------- AC1

AuditEntry ac1(const AuditOptions& o, AuditEntry e) {
  const auto chart = SpacetimeChart::kerr(1.0, 0.3);
  constexpr std::size_t n = 20;
  const auto rows = parallel_map(n, o.jobs, [&](std::size_t i) {
    auto rng = draw_engine(o, 1, i);
    const auto traj = integrate(sample_scattering(chart, rng), chart, 200.0, 1e-10);
    const auto eT = geodesic::generator_energy(traj, chart, GeneratorField::time_translation()).columns()[1].values;
    const auto eP = geodesic::generator_energy(traj, chart, GeneratorField::axial_rotation()).columns()[1].values;
    const auto K = geodesic::quadratic_invariant(traj, chart).column("K").values;
    // e_Phi and K are measured against E*M and (E*M)^2 as well, so draws
    // with nearly zero angular momentum do not divide by zero.
    const double scale = std::abs(eT.front()) * chart.mass();
    return std::array<double, 5>{
        max_dev(eT) / std::abs(eT.front()), max_dev(eP) / std::max(std::abs(eP.front()), scale),
        max_dev(K) / std::max(std::abs(K.front()), scale * scale),
        *std::max_element(traj.null_residual.begin(), traj.null_residual.end()),
        traj.termination == geodesic::Termination::SpanReached ? 0.0 : 1.0};
  });
  std::array<double, 5> worst{};
  for (const auto& r : rows)
    for (std::size_t k = 0; k < 5; ++k) worst[k] = std::max(worst[k], r[k]);
  e.metrics = {{"drift_e_T", worst[0]}, {"drift_e_Phi", worst[1]}, {"drift_K", worst[2]},
               {"null_residual", worst[3]}, {"incomplete", worst[4]}};
  e.thresholds = {{"drift", 1e-8}};
  e.passed = worst[4] == 0.0 && *std::max_element(worst.begin(), worst.begin() + 4) < 1e-8;
  e.detail = "20 geodesics, Kerr a=0.3, span 200M: e_T " + sci(worst[0]) + ", e_Phi " + sci(worst[1]) + ", K " +
             sci(worst[2]) + ", null " + sci(worst[3]);
  return e;
}

// ---------------------------------------------------------------- AC2

struct Eg2Case {
  std::string label;
  SpacetimeChart chart;
  GeneratorField gen;
  NullGeodesicState initial;
  double span;
  double spacing;  // the coarse one; the fine run halves it
};

AuditEntry ac2(const AuditOptions& o, AuditEntry e) {
  const auto kerr = SpacetimeChart::kerr(1.0, 0.3);
  const auto flat = SpacetimeChart::minkowski();
  const auto sch = SpacetimeChart::schwarzschild(1.0);
  auto rng = draw_engine(o, 2, 0);
  std::vector<Eg2Case> cases{
      {"T/Kerr", kerr, GeneratorField::time_translation(), sample_scattering(kerr, rng), 200.0, 0.5},
      {"R/Minkowski", flat, GeneratorField::radial(),
       geodesic::make_null_initial(flat, {0.0, 12.0, 1.3, 0.0}, {-1.0, 0.01, 0.02}), 30.0, 0.01},
      {"A/Schwarzschild", sch, GeneratorField::radial_multiplier(geometry::photon_sphere_profile(1.0)),
       geodesic::make_null_initial(sch, {0.0, 15.0, 1.4, 0.0}, {-1.0, 0.005, 0.03}), 40.0, 0.01},
  };
  const auto reports = parallel_map(cases.size() * 2, o.jobs, [&](std::size_t k) {
    const auto& c = cases[k / 2];
    const double h = k % 2 == 0 ? c.spacing : c.spacing / 2.0;
    const auto traj = integrate(c.initial, c.chart, c.span, 1e-12, h);
    const auto rep = geodesic::eg2_audit(traj, c.chart, c.gen);
    const double e0 = geodesic::generator_energy(traj, c.chart, c.gen).columns()[1].values.front();
    return std::array<double, 4>{rep.residual, std::abs(rep.delta_e - rep.integral), e0, rep.delta_e};
  });
  e.passed = true;
  e.thresholds = {{"relative_residual", 1e-6}, {"ratio_lo", 3.0}, {"ratio_hi", 5.0}};
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& coarse = reports[2 * i];
    const auto& fine = reports[2 * i + 1];
    const double scale = std::max(1.0, std::abs(fine[2]));
    const bool killing = i == 0;
    const double ratio = coarse[0] / fine[0];
    const bool ok = fine[0] < 1e-6 * scale && (killing || in_ratio_band(ratio));
    e.passed = e.passed && ok;
    e.metrics["residual_" + cases[i].label] = fine[0];
    e.metrics["literal_residual_" + cases[i].label] = fine[1];
    if (!killing) e.metrics["ratio_" + cases[i].label] = ratio;
    e.detail += (e.detail.empty() ? "" : "; ") + cases[i].label + " residual " + sci(fine[0]) +
                (killing ? " (Killing, ratio undefined)" : ", ratio " + sci(ratio)) + ", literal |de - int| " +
                sci(fine[1]);
  }
  e.detail += "; identity compared with the -1/2 normalisation";
  return e;
}

// ---------------------------------------------------------------- AC3

AuditEntry ac3(const AuditOptions& o, AuditEntry e) {
  const auto flat = SpacetimeChart::minkowski();
  const auto radial = GeneratorField::radial();
  constexpr double h = 0.025;
  const auto rows = parallel_map(20, o.jobs, [&](std::size_t i) {
    auto rng = draw_engine(o, 3, i);
    const auto traj = integrate(sample_scattering(flat, rng), flat, 60.0, 1e-12, h);
    const auto eR = geodesic::generator_energy(traj, flat, radial).columns()[1].values;
    double worst_contraction = 0.0, worst_rate = 0.0, ratio_sum = 0.0;
    std::size_t count = 0;
    // Five-point central differences on the uniform dense samples; the last
    // sample sits at the span end and is off the uniform grid.
    for (std::size_t j = 2; j + 3 < traj.samples.size(); ++j) {
      const auto& s = traj.samples[j];
      const double r = s.position[kR], st = std::sin(s.position[kTheta]);
      const double lth = r * r * s.velocity[kTheta], lph = r * r * st * st * s.velocity[kPhi];
      const double oracle = 2.0 * (lth * lth + lph * lph / (st * st)) / (r * r * r);
      const double fd = (eR[j - 2] - 8.0 * eR[j - 1] + 8.0 * eR[j + 1] - eR[j + 2]) / (12.0 * h);
      const double contraction = geodesic::deformation_contraction(flat, radial, s);
      worst_contraction = std::max(worst_contraction, std::abs(contraction - oracle) / oracle);
      worst_rate = std::max(worst_rate, std::abs(fd + 0.5 * oracle) / (0.5 * oracle));
      ratio_sum += fd / oracle;
      ++count;
    }
    return std::array<double, 3>{worst_contraction, worst_rate, ratio_sum / static_cast<double>(count)};
  });
  double wc = 0.0, wr = 0.0, ratio = 0.0;
  for (const auto& r : rows) {
    wc = std::max(wc, r[0]);
    wr = std::max(wr, r[1]);
    ratio += r[2] / static_cast<double>(rows.size());
  }
  e.metrics = {{"contraction_vs_2L2_r3", wc}, {"de_dlambda_vs_minus_L2_r3", wr}, {"literal_ratio", ratio}};
  e.thresholds = {{"relative", 1e-6}};
  e.passed = wc < 1e-6 && wr < 1e-6;
  e.detail = "20 Minkowski geodesics: contraction vs 2L^2/r^3 " + sci(wc) + ", de_R/dlambda vs -L^2/r^3 " + sci(wr) +
             ", literal de_R/dlambda / (2L^2/r^3) = " + sci(ratio);
  return e;
}

// ---------------------------------------------------------------- AC4

AuditEntry ac4(const AuditOptions&, AuditEntry e) {
  const auto sch = SpacetimeChart::schwarzschild(1.0);
  const auto traj = integrate(geodesic::make_null_initial(sch, {0.0, 3.0, kHalfPi, 0.0}, {0.0, 0.0, 1.0}), sch, 20.0,
                              1e-10);
  double dev = 0.0;
  for (const auto& s : traj.samples) dev = std::max(dev, std::abs(s.position[kR] - 3.0));
  double worst = 0.0;
  for (double a : {0.0, 0.3, 0.6, 0.9})
    for (double eta : {0.0, 5.0, 15.0})
      for (auto orbit : {geodesic::Orbit::Prograde, geodesic::Orbit::Retrograde}) {
        const auto t = geodesic::find_trapped(a == 0.0 ? sch : SpacetimeChart::kerr(1.0, a), orbit, eta);
        worst = std::max({worst, t.residual_r, t.residual_dr});
      }
  const auto tiny = SpacetimeChart::kerr(1.0, 1e-6);
  const double cont = std::max(std::abs(geodesic::find_trapped(tiny, geodesic::Orbit::Prograde).r - 3.0),
                               std::abs(geodesic::find_trapped(tiny, geodesic::Orbit::Retrograde).r - 3.0));
  e.metrics = {{"orbit_deviation", dev}, {"root_residual", worst}, {"small_spin_offset", cont}};
  e.thresholds = {{"orbit_deviation", 1e-3}, {"root_residual", 1e-10}, {"small_spin_offset", 1e-5}};
  e.passed = dev < 1e-3 && worst < 1e-10 && cont < 1e-5;
  e.detail = "max |r-3M| over 20M " + sci(dev) + "; max |R|,|R'| " + sci(worst) + "; a=1e-6 offset " + sci(cont);
  return e;
}

// ---------------------------------------------------------------- AC5

AuditEntry ac5(const AuditOptions& o, AuditEntry e) {
  const auto sch = SpacetimeChart::schwarzschild(1.0);
  const auto rows = parallel_map(100, o.jobs, [&](std::size_t i) {
    auto rng = draw_engine(o, 5, i);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Vec4 x{0.0, 7.25 + 4.75 * u(rng), kHalfPi + 0.8 * u(rng), 0.0};
    const auto s = geodesic::make_null_initial(sch, x, {u(rng), 0.15 * u(rng), 0.15 * u(rng)});
    const auto traj = integrate(s, sch, 60.0, 1e-10);
    double prev = -std::numeric_limits<double>::infinity(), drop = 0.0;
    for (const auto& p : traj.samples) {
      const double q = (1.0 - 3.0 / p.position[kR]) * p.velocity[kR];
      drop = std::max(drop, prev - q);
      prev = q;
    }
    return drop;
  });
  const double worst = *std::max_element(rows.begin(), rows.end());
  e.metrics = {{"largest_decrease", worst}};
  e.thresholds = {{"slack", 1e-8}};
  e.passed = worst <= 1e-8;
  e.detail = "100 Schwarzschild geodesics, largest decrease of (1-3M/r) dr/dlambda " + sci(worst);
  return e;
}

// ---------------------------------------------------------------- wave helpers

struct WaveRun {
  double spacing;
  double half_width;  // domain is [-half_width, half_width]
  double cfl;
  double t_final;
  modewave::PotentialSpec spec;
  std::function<Complex(double)> psi;
  std::function<Complex(double)> pi;
  modewave::EvolveOptions options;
  double ledger_interval = 1.0;
};

Ledger run_wave(WaveRun w) {
  modewave::ModeState st(modewave::Grid::with_spacing(-w.half_width, w.half_width, w.spacing), w.spec, w.cfl);
  st.set_data(w.psi, w.pi);
  w.options.ledger_stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(w.ledger_interval / st.dt())));
  modewave::Evolution run(st, w.options);
  run.advance_to(w.t_final);
  return run.ledger();
}

Complex zero(double) { return Complex(0.0); }

Ledger conservation_run(int l, double spacing) {
  return run_wave({spacing, 230.0, 0.04, 200.0, {0, l, 1.0}, [](double x) { return Complex(std::exp(-x * x / 9.0)); },
                   zero, {}});
}

double energy_drift(const Ledger& ledger) {
  const auto& e = ledger.column("E").values;
  return max_dev(e) / e.front();
}

// ---------------------------------------------------------------- AC6

AuditEntry ac6(const AuditOptions& o, AuditEntry e) {
  const double spacings[] = {0.05, 0.025};
  const auto ledgers = parallel_map(2, o.jobs, [&](std::size_t k) { return conservation_run(2, spacings[k]); });
  const double coarse = energy_drift(ledgers[0]), fine = energy_drift(ledgers[1]);
  double flux = 0.0;
  for (double f : ledgers[0].column("int_flux").values) flux = std::max(flux, std::abs(f));
  const double ratio = coarse / fine;
  e.metrics = {{"drift_0.05", coarse}, {"drift_0.025", fine}, {"ratio", ratio}, {"boundary_flux", flux}};
  e.thresholds = {{"drift", 1e-6}, {"ratio_lo", 3.0}, {"ratio_hi", 5.0}};
  e.passed = coarse < 1e-6 && in_ratio_band(ratio);
  e.detail = "s=0 l=2 to t=200M: drift " + sci(coarse) + " at 0.05M, ratio " + sci(ratio) +
             ", integrated boundary flux " + sci(flux);
  return e;
}

// ---------------------------------------------------------------- AC7

AuditEntry ac7(const AuditOptions& o, AuditEntry e) {
  const double spacings[] = {0.1, 0.05, 0.025};
  const auto res = parallel_map(3, o.jobs, [&](std::size_t k) {
    modewave::EvolveOptions opt;
    opt.morawetz = modewave::photon_sphere_multiplier(1.0);
    const auto ledger = run_wave({spacings[k], 90.0, 0.5, 50.0, {0, 2, 1.0},
                                  [](double x) { return Complex(std::exp(-(x - 5.0) * (x - 5.0) / 4.0)); }, zero, opt});
    return std::abs(ledger.column("morawetz_residual").values.back());
  });
  const double r1 = res[0] / res[1], r2 = res[1] / res[2];
  e.metrics = {{"residual_0.1", res[0]}, {"residual_0.05", res[1]}, {"residual_0.025", res[2]},
               {"ratio_1", r1}, {"ratio_2", r2}};
  e.thresholds = {{"ratio_lo", 3.0}, {"ratio_hi", 5.0}};
  e.passed = in_ratio_band(r1) && in_ratio_band(r2);
  e.detail = "|I(t)-I(0)+int B| at t=50M: " + sci(res[0]) + ", " + sci(res[1]) + ", " + sci(res[2]) + "; ratios " +
             sci(r1) + ", " + sci(r2);
  return e;
}

// ---------------------------------------------------------------- AC8

AuditEntry ac8(const AuditOptions& o, AuditEntry e) {
  const double spacings[] = {0.1, 0.05, 0.025};
  const std::array<std::array<int, 2>, 4> modes{{{0, 2}, {0, 3}, {1, 2}, {1, 3}}};
  constexpr std::size_t draws = 5;
  const std::size_t per_res = modes.size() * draws;
  const auto ratios = parallel_map(3 * per_res, o.jobs, [&](std::size_t k) {
    const std::size_t res = k / per_res, m = (k % per_res) / draws, d = k % draws;
    auto rng = draw_engine(o, 8, m * draws + d);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double c = -20.0 + 40.0 * u(rng), w = 1.5 + 2.5 * u(rng), kw = -1.0 + 2.0 * u(rng);
    auto psi = [=](double x) { return std::exp(-0.5 * (x - c) * (x - c) / (w * w)) * std::exp(Complex(0.0, kw * x)); };
    modewave::EvolveOptions opt;
    opt.morawetz = modewave::photon_sphere_multiplier(1.0);
    const auto ledger = run_wave({spacings[res], 150.0, 0.5, 100.0, {modes[m][0], modes[m][1], 1.0}, psi, zero, opt,
                                  10.0});
    return ledger.column("int_B_gradient").values.back() / ledger.column("E").values.front();
  });
  std::vector<double> c(3, 0.0);
  for (std::size_t k = 0; k < ratios.size(); ++k) c[k / per_res] = std::max(c[k / per_res], ratios[k]);
  const double s = spread(c, c[2]);
  e.metrics = {{"C_0.1", c[0]}, {"C_0.05", c[1]}, {"C_0.025", c[2]}, {"spread", s}};
  e.thresholds = {{"spread", 0.2}};
  e.passed = s <= 0.2 && c[2] > 0.0;
  e.detail = "C = max over s in {0,1}, l in {2,3}, 5 draws of int_0^100 int f'|psi_x|^2 / E(0): " + sci(c[0]) + ", " +
             sci(c[1]) + ", " + sci(c[2]) + "; spread " + sci(s);
  return e;
}

// ---------------------------------------------------------------- AC9

AuditEntry ac9(const AuditOptions& o, AuditEntry e) {
  constexpr double eps = 0.01;
  const double spacings[] = {0.1, 0.05, 0.025};
  const auto rows = parallel_map(3, o.jobs, [&](std::size_t k) {
    auto g = [](double x) { return std::exp(-(x + 15.0) * (x + 15.0) / 8.0) * std::exp(Complex(0.0, 1.5 * x)); };
    auto rate = [g](double x) { return Complex((x + 15.0) / 4.0, -1.5) * g(x); };
    const auto ledger = run_wave({spacings[k], 90.0, 0.5, 50.0, {0, 2, 1.0, eps, 1.0}, g, rate, {}, 0.5});
    double res = 0.0, sup = 0.0;
    for (double r : ledger.column("energy_residual").values) res = std::max(res, std::abs(r));
    for (double x : ledger.column("E").values) sup = std::max(sup, x);
    const double e0 = ledger.column("E").values.front();
    return std::array<double, 2>{res / e0, (sup / e0 - 1.0) / eps};
  });
  const double r1 = rows[0][0] / rows[1][0], r2 = rows[1][0] / rows[2][0];
  const std::vector<double> c{rows[0][1], rows[1][1], rows[2][1]};
  const double s = spread(c, c[2]);
  e.metrics = {{"residual_0.1", rows[0][0]}, {"residual_0.05", rows[1][0]}, {"residual_0.025", rows[2][0]},
               {"ratio_1", r1}, {"ratio_2", r2}, {"C_0.1", c[0]}, {"C_0.05", c[1]}, {"C_0.025", c[2]}, {"C_spread", s}};
  e.thresholds = {{"ratio_lo", 3.0}, {"ratio_hi", 5.0}, {"C_spread", 0.2}};
  e.passed = in_ratio_band(r1) && in_ratio_band(r2) && s <= 0.2;
  e.detail = "eps=0.01: balance ratios " + sci(r1) + ", " + sci(r2) + "; sup E <= (1+C eps) E(0) with C " + sci(c[0]) +
             ", " + sci(c[1]) + ", " + sci(c[2]);
  return e;
}

// ---------------------------------------------------------------- AC10

double sup_abs(const Mat4& m) {
  double s = 0.0;
  for (const auto& row : m)
    for (double v : row) s = std::max(s, std::abs(v));
  return s;
}

struct ScanResult {
  double min_norm;
  double inside;
  double outside;
};

ScanResult scan_tchi(double a) {
  const auto chart = SpacetimeChart::kerr(1.0, a);
  const auto gen = GeneratorField::blended_time(chart, 5.0, 6.0);
  const auto grid = geometry::ScanGrid::exterior(chart, 20.0, 400, 64);
  ScanResult out{geometry::timelike_scan(gen, chart, grid).min_value, 0.0, 0.0};
  for (double r : grid.r)
    for (double th : grid.theta) {
      const double d = sup_abs(geometry::deformation_tensor(gen, chart, {0.0, r, th, 0.0}));
      double& slot = r > 5.0 && r < 6.0 ? out.inside : out.outside;
      slot = std::max(slot, d);
    }
  return out;
}

AuditEntry ac10(const AuditOptions& o, AuditEntry e) {
  const double spins[] = {0.05, 0.1, 0.2};
  const auto scans = parallel_map(3, o.jobs, [&](std::size_t k) { return scan_tchi(spins[k]); });
  std::vector<double> slope;
  for (std::size_t k = 0; k < 3; ++k) slope.push_back(scans[k].inside / spins[k]);
  const double mean = (slope[0] + slope[1] + slope[2]) / 3.0;
  const double lin = spread(slope, mean);
  const auto& s = scans[1];
  e.metrics = {{"min_neg_norm", s.min_norm}, {"deformation_outside", s.outside}, {"deformation_inside", s.inside},
               {"linearity", lin}};
  e.thresholds = {{"deformation_outside", 1e-12}, {"linearity", 0.15}};
  e.passed = s.min_norm > 0.0 && s.outside < 1e-12 && lin <= 0.15;
  e.detail = "a=0.1: min -g(T_chi,T_chi) " + sci(s.min_norm) + ", deformation outside (5M,6M) " + sci(s.outside) +
             "; sup/a for a=0.05,0.1,0.2: " + sci(slope[0]) + ", " + sci(slope[1]) + ", " + sci(slope[2]);
  return e;
}

// ---------------------------------------------------------------- AC11

AuditEntry ac11(const AuditOptions& o, AuditEntry e) {
  const std::vector<int> ls{1, 2, 3, 4};
  const auto ledgers = parallel_map(ls.size(), o.jobs, [&](std::size_t k) { return conservation_run(ls[k], 0.05); });
  e.thresholds = {{"drift", 1e-6}};
  e.passed = true;
  for (int n : {1, 2}) {
    std::vector<double> series;
    for (std::size_t t = 0; t < ledgers[0].size(); ++t) {
      std::vector<double> en;
      for (const auto& l : ledgers) en.push_back(l.column("E").values[t]);
      series.push_back(modewave::order_n_energy(en, ls, n));
    }
    const double drift = max_dev(series) / series.front();
    e.metrics["drift_order_" + std::to_string(n)] = drift;
    e.passed = e.passed && drift < 1e-6;
    e.detail += (e.detail.empty() ? "" : ", ") + ("order " + std::to_string(n) + " drift ") + sci(drift);
  }
  e.detail = "modes l=1..4 to t=200M at 0.05M: " + e.detail;
  return e;
}

// ---------------------------------------------------------------- AC12

AuditEntry ac12(const AuditOptions& o, AuditEntry e) {
  constexpr double threshold = 0.1;  // frozen after the refinement study
  const double spacings[] = {0.1, 0.05};
  const auto ratios = parallel_map(2, o.jobs, [&](std::size_t k) {
    modewave::EvolveOptions opt;
    opt.window = std::array<double, 2>{-20.0, 20.0};
    auto bump = [](double x) {
      const double y = x / 6.0;
      return Complex(std::abs(y) < 1.0 ? std::pow(1.0 - y * y, 4) : 0.0);
    };
    const auto ledger = run_wave({spacings[k], 200.0, 0.5, 150.0, {0, 2, 1.0}, bump, zero, opt, 10.0});
    const auto& le = ledger.column("local_E").values;
    return le.back() / le.front();
  });
  e.metrics = {{"ratio_0.1", ratios[0]}, {"ratio_0.05", ratios[1]}};
  e.thresholds = {{"ratio", threshold}};
  e.passed = ratios[0] < threshold && ratios[1] < threshold;
  e.detail = "local energy on |r*|<=20M at t=150M over initial: " + sci(ratios[0]) + " (0.1M), " + sci(ratios[1]) +
             " (0.05M)";
  return e;
}

using Runner = AuditEntry (*)(const AuditOptions&, AuditEntry);

struct Criterion {
  CriterionInfo info;
  Runner run;
};

const std::vector<Criterion>& table() {
  static const std::vector<Criterion> t{
      {{1, "conservation along Kerr null geodesics"}, ac1},
      {{2, "EG2 energy change audit"}, ac2},
      {{3, "Minkowski radial multiplier identity"}, ac3},
      {{4, "trapped photon orbits"}, ac4},
      {{5, "photon-sphere radial momentum monotone"}, ac5},
      {{6, "mode energy conservation"}, ac6},
      {{7, "Morawetz multiplier identity"}, ac7},
      {{8, "empirical Morawetz bound"}, ac8},
      {{9, "complex potential balance"}, ac9},
      {{10, "T_chi timelike and deformation support"}, ac10},
      {{11, "order-n energy conservation"}, ac11},
      {{12, "local energy decay"}, ac12},
  };
  return t;
}

}  // namespace

const std::vector<CriterionInfo>& acceptance_criteria() {
  static const std::vector<CriterionInfo> info = [] {
    std::vector<CriterionInfo> v;
    for (const auto& c : table()) v.push_back(c.info);
    return v;
  }();
  return info;
}

AuditEntry run_criterion(int id, const AuditOptions& options) {
  for (const auto& c : table()) {
    if (c.info.id != id) continue;
    AuditEntry e;
    e.id = "AC" + std::to_string(id);
    e.name = c.info.name;
    try {
      return c.run(options, e);
    } catch (const Error& err) {
      e.passed = false;
      e.detail = err.what();
      return e;
    }
  }
  throw Error(ErrorKind::ConstraintViolation, "criteria: no acceptance criterion " + std::to_string(id));
}

std::vector<AuditEntry> run_acceptance(const AuditOptions& options) {
  std::vector<int> ids = options.criteria;
  if (ids.empty())
    for (const auto& c : table()) ids.push_back(c.info.id);
  std::vector<AuditEntry> out;
  for (int id : ids) out.push_back(run_criterion(id, options));
  return out;
}

std::string summary_line(const AuditEntry& e) {
  return e.id + (e.passed ? " PASS " : " FAIL ") + e.name + ": " + e.detail;
}

RunManifest run_audit(const AuditOptions& options, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + out_dir.string() + ": " + ec.message());
  RunManifest m;
  m.version = artifact_version();
  m.seed = options.seed;
  m.started = utc_timestamp();
  std::string ids;
  for (int id : options.criteria) ids += (ids.empty() ? "" : ",") + std::to_string(id);
  m.config = "{\"kind\": \"audit\", \"seed\": " + std::to_string(options.seed) + ", \"criteria\": [" + ids + "]}";
  m.audit = run_acceptance(options);
  m.finished = utc_timestamp();
  write_manifest(m, out_dir);
  return m;
}

}  // namespace kerrlab::harness
