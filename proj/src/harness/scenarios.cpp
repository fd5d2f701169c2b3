#include "kerrlab/harness/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "kerrlab/error.hpp"
#include "kerrlab/geodesic/diagnostics.hpp"
#include "kerrlab/geodesic/radial_potential.hpp"
#include "kerrlab/geometry/generator.hpp"
#include "kerrlab/geometry/killing.hpp"
#include "kerrlab/harness/csv.hpp"
#include "kerrlab/harness/parallel.hpp"
#include "kerrlab/harness/sampling.hpp"
#include "kerrlab/modewave/evolve.hpp"

namespace kerrlab::harness {

namespace fs = std::filesystem;
using geometry::GeneratorField;
using geometry::SpacetimeChart;

namespace {

struct JobResult {
  JobRecord record;
  std::vector<AuditEntry> audit;
};

AuditEntry check(std::string id, std::string name, double value, double limit, std::string detail = {}) {
  AuditEntry e;
  e.id = std::move(id);
  e.name = std::move(name);
  e.passed = std::isfinite(value) && value < limit;
  e.metrics["value"] = value;
  e.thresholds["limit"] = limit;
  e.detail = std::move(detail);
  return e;
}

double relative_drift(const std::vector<double>& v) {
  double worst = 0.0;
  for (double x : v) worst = std::max(worst, std::abs(x - v.front()));
  return worst / std::max(std::abs(v.front()), 1e-300);
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir.string() + ": " + ec.message());
}

std::string job_label(const char* stem, std::size_t i) {
  std::ostringstream s;
  s << stem << '_';
  s.width(4);
  s.fill('0');
  s << i;
  return s.str();
}

// Writes the ledger under root/job/file and records the relative path.
void emit(const Ledger& ledger, const fs::path& root, JobRecord& job, const std::string& file) {
  const fs::path rel = fs::path(job.name) / file;
  emit_series(ledger, root / rel);
  job.files.push_back(rel.generic_string());
}

// Runs body as one job; any library error turns into a failed job and a
// failing audit entry, I/O errors propagate.
template <class Body>
JobResult guarded(const std::string& name, const fs::path& root, Body body) {
  JobResult out;
  out.record.name = name;
  make_dir(root / name);
  try {
    body(out);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::IoError) throw;
    out.record.status = "failed";
    out.record.message = e.what();
    AuditEntry a;
    a.id = name;
    a.name = "job completed";
    a.detail = e.what();
    out.audit.push_back(std::move(a));
  }
  return out;
}

// ---------------------------------------------------------------- geodesic

GeneratorField make_generator(const std::string& name, const SpacetimeChart& chart) {
  if (name == "T") return GeneratorField::time_translation();
  if (name == "Phi") return GeneratorField::axial_rotation();
  if (name == "R") return GeneratorField::radial();
  if (name == "A") return GeneratorField::radial_multiplier(geometry::photon_sphere_profile(chart.mass()));
  return GeneratorField::blended_time(chart);
}

geodesic::NullGeodesicState geodesic_initial(const ScenarioConfig& c, const SpacetimeChart& chart, std::size_t i) {
  const auto& g = c.geodesic;
  if (g.preset == "photon_orbit")
    return geodesic::make_null_initial(chart, {0.0, 3.0 * chart.mass(), std::numbers::pi / 2.0, 0.0}, {0.0, 0.0, 1.0});
  if (g.preset == "random") {
    auto rng = job_engine(c.seed, i);
    return sample_scattering(chart, rng);
  }
  return geodesic::make_null_initial(chart, g.position, {g.direction[0], g.direction[1], g.direction[2]});
}

JobResult geodesic_job(const ScenarioConfig& c, const fs::path& root, std::size_t i) {
  const std::string name = job_label("geodesic", i);
  return guarded(name, root, [&](JobResult& out) {
    const auto& g = c.geodesic;
    const auto chart = make_chart(c.chart);
    const auto initial = geodesic_initial(c, chart, i);
    geodesic::IntegrationOptions opt;
    opt.rtol = g.rtol;
    opt.atol = g.atol;
    opt.sample_spacing = g.sample_spacing;
    opt.underflow_is_termination = true;
    const auto traj = geodesic::integrate_null(initial, chart, g.span, opt);
    auto& job = out.record;
    emit(geodesic::trajectory_ledger(traj), root, job, "trajectory.csv");
    job.metrics["samples"] = static_cast<double>(traj.samples.size());
    job.metrics["lambda_end"] = traj.samples.back().lambda;
    job.metrics["accepted_steps"] = static_cast<double>(traj.accepted_steps);
    job.metrics["rejected_steps"] = static_cast<double>(traj.rejected_steps);
    job.message = std::string("termination: ") + std::string(geodesic::to_string(traj.termination));

    const double worst_null = *std::max_element(traj.null_residual.begin(), traj.null_residual.end());
    job.metrics["null_residual_max"] = worst_null;
    out.audit.push_back(check(name, "null residual", worst_null, g.drift_tolerance));

    for (const auto& gname : g.generators) {
      const auto gen = make_generator(gname, chart);
      const auto ledger = geodesic::generator_energy(traj, chart, gen);
      emit(ledger, root, job, "energy_" + gname + ".csv");
      const auto& e = ledger.columns()[1].values;
      const bool killing = gen.kind() == geometry::GeneratorKind::T || gen.kind() == geometry::GeneratorKind::Phi;
      if (killing) {
        const double drift = relative_drift(e);
        job.metrics["drift_" + gname] = drift;
        out.audit.push_back(check(name, "conservation e_" + gname, drift, g.drift_tolerance));
      }
      const auto eg2 = geodesic::eg2_audit(traj, chart, gen);
      job.metrics["eg2_delta_" + gname] = eg2.delta_e;
      job.metrics["eg2_integral_" + gname] = eg2.integral;
      const double scale = std::max(1.0, std::abs(e.front()));
      auto entry = check(name, "eg2 " + gname, eg2.residual, 1e-6 * scale,
                         "|delta e - (-1/2) int gamma gamma pi|, trapezoid over samples");
      entry.metrics["delta_e"] = eg2.delta_e;
      entry.metrics["integral"] = eg2.integral;
      out.audit.push_back(std::move(entry));
    }

    const auto k = geodesic::quadratic_invariant(traj, chart);
    emit(k, root, job, "invariant_K.csv");
    const double kd = relative_drift(k.column("K").values);
    job.metrics["drift_K"] = kd;
    out.audit.push_back(check(name, "conservation K", kd, g.drift_tolerance));

    if (g.preset == "photon_orbit") {
      const double m = chart.mass();
      double dev = 0.0;
      for (const auto& s : traj.samples)
        if (s.lambda <= 20.0 * m) dev = std::max(dev, std::abs(s.position[kR] - 3.0 * m));
      job.metrics["photon_orbit_deviation"] = dev;
      out.audit.push_back(check(name, "photon orbit |r-3M| for lambda <= 20M", dev, 1e-3 * m));
    }
  });
}

// ---------------------------------------------------------------- wave

std::string mode_label(const ModeConfig& m) { return "mode_s" + std::to_string(m.spin) + "_l" + std::to_string(m.l); }

void set_initial_data(modewave::ModeState& state, const WaveConfig& w) {
  using modewave::Complex;
  const double c = w.data_center, width = w.data_width, amp = w.data_amplitude, k = w.data_wavenumber;
  if (w.data_shape == "compact") {
    auto bump = [=](double x) {
      const double y = (x - c) / width;
      return std::abs(y) < 1.0 ? Complex(amp * std::pow(1.0 - y * y, 4)) : Complex(0.0);
    };
    state.set_data(bump, [](double) { return Complex(0.0); });
    return;
  }
  auto packet = [=](double x) {
    const double y = (x - c) / width;
    return amp * std::exp(-0.5 * y * y) * std::exp(Complex(0.0, k * x));
  };
  // k != 0: right-moving, pi = -psi_x
  auto rate = [=](double x) {
    if (k == 0.0) return Complex(0.0);
    return Complex((x - c) / (width * width), -k) * packet(x);
  };
  state.set_data(packet, rate);
}

struct WaveJob {
  JobResult result;
  std::vector<double> time;
  std::vector<double> energy;
};

WaveJob wave_job(const ScenarioConfig& c, const fs::path& root, std::size_t i) {
  const auto& w = c.wave;
  const auto& mode = w.modes[i];
  WaveJob out;
  out.result = guarded(mode_label(mode), root, [&](JobResult& res) {
    const double mass = c.chart.mass;
    const modewave::PotentialSpec spec{mode.spin, mode.l, mass, w.epsilon, w.bump_width};
    const auto left = mass == 0.0 ? modewave::BoundaryRule::Reflecting : modewave::BoundaryRule::Sommerfeld;
    modewave::ModeState state(modewave::Grid::with_spacing(w.lo, w.hi, w.spacing), spec, w.cfl, left);
    set_initial_data(state, w);
    modewave::EvolveOptions opt;
    opt.ledger_stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(w.ledger_interval / state.dt())));
    if (w.profile == "photon_sphere") opt.morawetz = modewave::photon_sphere_multiplier(mass);
    if (w.profile == "constant") opt.morawetz = modewave::constant_multiplier(1.0);
    opt.window = w.window;
    opt.induced_weight = w.induced_weight;
    modewave::Evolution evo(state, opt);
    evo.advance_to(w.t_final);
    const auto& ledger = evo.ledger();
    auto& job = res.record;
    emit(ledger, root, job, "ledger.csv");

    const auto& e = ledger.column("E").values;
    const double e0 = std::max(std::abs(e.front()), 1e-300);
    double balance = 0.0;
    for (double r : ledger.column("energy_residual").values) balance = std::max(balance, std::abs(r));
    job.metrics["E0"] = e.front();
    job.metrics["E_final"] = e.back();
    job.metrics["steps"] = static_cast<double>(evo.steps());
    job.metrics["dt"] = state.dt();
    job.metrics["energy_balance_residual"] = balance / e0;
    if (w.epsilon == 0.0) {
      res.audit.push_back(check(job.name, "energy conservation up to boundary flux", balance / e0,
                                       w.drift_tolerance));
    } else {
      double sup = 0.0;
      for (double x : e) sup = std::max(sup, x);
      job.metrics["sup_E_over_E0"] = sup / e0;
    }
    if (ledger.has_column("morawetz_residual")) {
      double m = 0.0;
      for (double r : ledger.column("morawetz_residual").values) m = std::max(m, std::abs(r));
      job.metrics["morawetz_residual"] = m;
      job.metrics["int_B_gradient"] = ledger.column("int_B_gradient").values.back();
    }
    if (ledger.has_column("local_E")) job.metrics["local_E_final_over_E0"] = ledger.column("local_E").values.back() / e0;
    out.time = ledger.index();
    out.energy = e;
  });
  return out;
}

// ---------------------------------------------------------------- trapped

JobResult trapped_job(const ScenarioConfig& c, const fs::path& root) {
  return guarded("trapped", root, [&](JobResult& out) {
    const auto chart = make_chart(c.chart);
    auto eta = c.trapped.eta;
    std::sort(eta.begin(), eta.end());
    eta.erase(std::unique(eta.begin(), eta.end()), eta.end());
    const double lo = c.trapped.lo.value_or(chart.outer_horizon() * (1.0 + 1e-3));
    const double hi = c.trapped.hi.value_or(10.0 * chart.mass());
    Ledger ledger("trapped", "eta", "M^2");
    for (const char* side : {"prograde", "retrograde"}) {
      const std::string s(side);
      ledger.add_column("r_" + s, "M");
      ledger.add_column("xi_" + s, "M");
      ledger.add_column("abs_R_" + s, "1");
      ledger.add_column("abs_dR_" + s, "1");
    }
    double worst = 0.0;
    for (double e : eta) {
      std::vector<double> row;
      for (auto orbit : {geodesic::Orbit::Prograde, geodesic::Orbit::Retrograde}) {
        const auto t = geodesic::find_trapped(chart, lo, hi, orbit, e);
        row.insert(row.end(), {t.r, t.xi, t.residual_r, t.residual_dr});
        worst = std::max({worst, t.residual_r, t.residual_dr});
      }
      ledger.append(e, row);
    }
    emit(ledger, root, out.record, "trapped.csv");
    out.record.metrics["max_residual"] = worst;
    out.audit.push_back(check("trapped", "|R|, |R'| at roots", worst, 1e-10));
  });
}

// ---------------------------------------------------------------- scan-tchi

double sup_norm(const Mat4& m) {
  double s = 0.0;
  for (const auto& row : m)
    for (double v : row) s = std::max(s, std::abs(v));
  return s;
}

JobResult scan_job(const ScenarioConfig& c, const fs::path& root) {
  return guarded("scan_tchi", root, [&](JobResult& out) {
    const auto& sc = c.scan;
    const auto chart = make_chart(c.chart);
    const auto gen = GeneratorField::blended_time(chart, sc.r1, sc.r2);
    const auto grid = geometry::ScanGrid::exterior(chart, sc.r_hi, sc.nr, sc.ntheta);
    const auto report = geometry::timelike_scan(gen, chart, grid);

    Ledger ledger("scan_tchi", "r", "M");
    ledger.add_column("min_theta_neg_norm", "1");
    ledger.add_column("deformation_sup", "1");
    double outside = 0.0, inside = 0.0;
    double support_lo = std::numeric_limits<double>::infinity(), support_hi = -support_lo;
    for (double r : grid.r) {
      double min_norm = std::numeric_limits<double>::infinity(), def = 0.0;
      for (double th : grid.theta) {
        const Vec4 x{0.0, r, th, 0.0};
        const Vec4 X = geometry::generator_eval(gen, chart, x);
        min_norm = std::min(min_norm, -contract(geometry::metric_components(chart, x), X, X));
        def = std::max(def, sup_norm(geometry::deformation_tensor(gen, chart, x)));
      }
      const double row[] = {min_norm, def};
      ledger.append(r, row);
      if (r > sc.r1 && r < sc.r2) {
        inside = std::max(inside, def);
      } else {
        outside = std::max(outside, def);
      }
      if (def > sc.deformation_tolerance) {
        support_lo = std::min(support_lo, r);
        support_hi = std::max(support_hi, r);
      }
    }
    emit(ledger, root, out.record, "scan.csv");
    auto& m = out.record.metrics;
    m["min_neg_norm"] = report.min_value;
    m["worst_r"] = report.worst.r;
    m["worst_theta"] = report.worst.theta;
    m["deformation_sup_inside"] = inside;
    m["deformation_sup_outside"] = outside;
    m["support_lo"] = support_lo;
    m["support_hi"] = support_hi;
    m["omega0"] = gen.omega0();
    auto timelike = check("scan_tchi", "T_chi timelike on the exterior grid", -report.min_value, 0.0,
                          "value is -min(-g(T_chi, T_chi))");
    timelike.passed = report.min_value > 0.0 && report.non_timelike.empty();
    out.audit.push_back(std::move(timelike));
    out.audit.push_back(check("scan_tchi", "deformation outside the blend window", outside, sc.deformation_tolerance));
  });
}

}  // namespace

RunManifest run_scenario(const ScenarioConfig& c, const fs::path& out_dir, std::size_t jobs) {
  make_dir(out_dir);
  RunManifest m;
  m.config = serialize(c);
  m.version = artifact_version();
  m.seed = c.seed;
  m.started = utc_timestamp();

  std::vector<JobResult> results;
  switch (c.kind) {
    case ScenarioKind::Geodesic: {
      const std::size_t n = c.geodesic.preset == "random" ? c.geodesic.count : 1;
      results = parallel_map(n, jobs, [&](std::size_t i) { return geodesic_job(c, out_dir, i); });
      break;
    }
    case ScenarioKind::Wave: {
      auto waves = parallel_map(c.wave.modes.size(), jobs, [&](std::size_t i) { return wave_job(c, out_dir, i); });
      bool complete = true;
      for (const auto& w : waves) complete = complete && w.result.record.status == "ok";
      nlohmann::json collection;
      collection["modes"] = nlohmann::json::array();
      for (std::size_t i = 0; i < waves.size(); ++i)
        collection["modes"].push_back({{"spin", c.wave.modes[i].spin},
                                       {"l", c.wave.modes[i].l},
                                       {"ledger", waves[i].result.record.files.empty() ? "" : waves[i].result.record.files[0]}});
      if (complete && !c.wave.order_n.empty()) {
        Ledger orders("order_n", "time", "M");
        std::vector<int> ls;
        for (const auto& md : c.wave.modes) ls.push_back(md.l);
        for (int n : c.wave.order_n) orders.add_column("E_order" + std::to_string(n), "1");
        collection["order_n"] = nlohmann::json::array();
        for (int n : c.wave.order_n) {
          std::vector<double> weights;
          for (int l : ls) weights.push_back(std::pow(static_cast<double>(l) * (l + 1), n));
          collection["order_n"].push_back({{"n", n}, {"weights", weights}});
        }
        const auto& t = waves.front().time;
        for (std::size_t k = 0; k < t.size(); ++k) {
          std::vector<double> e, row;
          for (const auto& w : waves) e.push_back(w.energy[k]);
          for (int n : c.wave.order_n) row.push_back(modewave::order_n_energy(e, ls, n));
          orders.append(t[k], row);
        }
        emit_series(orders, out_dir / "order_n.csv");
        m.files.push_back("order_n.csv");
        if (c.wave.epsilon == 0.0)
          for (std::size_t j = 0; j < c.wave.order_n.size(); ++j) {
            // Drift net of what left through the boundaries, per mode.
            double drift = 0.0, e0 = 0.0;
            for (std::size_t i = 0; i < waves.size(); ++i) {
              const double wgt = std::pow(static_cast<double>(ls[i]) * (ls[i] + 1), c.wave.order_n[j]);
              drift += wgt * waves[i].result.record.metrics.at("energy_balance_residual") * waves[i].energy.front();
              e0 += wgt * waves[i].energy.front();
            }
            m.audit.push_back(check("order_n", "order-" + std::to_string(c.wave.order_n[j]) + " energy conservation",
                                    drift / std::max(e0, 1e-300), c.wave.drift_tolerance));
          }
      }
      write_atomically(out_dir / "collection.json", collection.dump(2) + "\n");
      m.files.push_back("collection.json");
      for (auto& w : waves) results.push_back(std::move(w.result));
      break;
    }
    case ScenarioKind::Trapped: results.push_back(trapped_job(c, out_dir)); break;
    case ScenarioKind::ScanTchi: results.push_back(scan_job(c, out_dir)); break;
  }
  std::vector<AuditEntry> run_level = std::move(m.audit);
  m.audit.clear();
  for (auto& r : results) {
    m.jobs.push_back(std::move(r.record));
    for (auto& a : r.audit) m.audit.push_back(std::move(a));
  }
  for (auto& a : run_level) m.audit.push_back(std::move(a));
  m.finished = utc_timestamp();
  write_manifest(m, out_dir);
  return m;
}

}  // namespace kerrlab::harness
