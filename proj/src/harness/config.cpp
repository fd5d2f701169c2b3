#include "kerrlab/harness/config.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <type_traits>

#include "json.hpp"

#include "kerrlab/error.hpp"
#include "kerrlab/harness/csv.hpp"

namespace kerrlab::harness {

using nlohmann::json;
using geometry::Family;

std::string_view to_string(ScenarioKind kind) noexcept {
  switch (kind) {
    case ScenarioKind::Geodesic: return "geodesic";
    case ScenarioKind::Wave: return "wave";
    case ScenarioKind::Trapped: return "trapped";
    case ScenarioKind::ScanTchi: return "scan-tchi";
  }
  return "?";
}

ScenarioKind scenario_kind_from_string(std::string_view name) {
  for (auto k : {ScenarioKind::Geodesic, ScenarioKind::Wave, ScenarioKind::Trapped, ScenarioKind::ScanTchi})
    if (to_string(k) == name) return k;
  throw Error(ErrorKind::ConstraintViolation,
              "kind: must be one of geodesic, wave, trapped, scan-tchi (got '" + std::string(name) + "')");
}

namespace {

[[noreturn]] void violation(const std::string& key, const std::string& what) {
  throw Error(ErrorKind::ConstraintViolation, key + ": " + what);
}

// Typed access to one JSON object that remembers which keys were read, so
// anything left over can be reported as unknown.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) violation(path_.empty() ? "<root>" : path_, "must be an object");
  }

  std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }
  bool has(const std::string& k) const { return j_.contains(k); }

  template <class T>
  T get(const std::string& k, T fallback) {
    seen_.insert(k);
    if (!j_.contains(k) || j_.at(k).is_null()) return fallback;
    if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
      const bool ok = std::is_unsigned_v<T> ? j_.at(k).is_number_unsigned() : j_.at(k).is_number_integer();
      if (!ok) violation(key(k), std::is_unsigned_v<T> ? "must be a non-negative integer" : "must be an integer");
    }
    try {
      return j_.at(k).get<T>();
    } catch (const json::exception&) {
      violation(key(k), "has the wrong type (" + std::string(j_.at(k).type_name()) + ")");
    }
  }

  template <class T>
  std::optional<T> maybe(const std::string& k, std::optional<T> fallback) {
    if (!j_.contains(k) || j_.at(k).is_null()) {
      seen_.insert(k);
      return fallback;
    }
    return get<T>(k, T{});
  }

  double number(const std::string& k, double fallback) {
    const double v = get<double>(k, fallback);
    if (!std::isfinite(v)) violation(key(k), "must be finite");
    return v;
  }

  Section child(const std::string& k) {
    seen_.insert(k);
    static const json empty = json::object();
    if (!j_.contains(k) || j_.at(k).is_null()) return Section(empty, key(k));
    return Section(j_.at(k), key(k));
  }

  const json& raw(const std::string& k) {
    seen_.insert(k);
    return j_.at(k);
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) violation(key(k), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::string fmt(double v) { return format_double(v); }

void read_chart(Section s, ChartConfig& c) {
  const std::string fam = s.get<std::string>("family", std::string(geometry::to_string(c.family)));
  try {
    c.family = geometry::family_from_string(fam);
  } catch (const Error&) {
    violation(s.key("family"), "must be minkowski, schwarzschild or kerr (got '" + fam + "')");
  }
  c.mass = s.number("mass", c.family == Family::Minkowski ? 0.0 : c.mass);
  c.spin = s.number("spin", c.family == Family::Kerr ? c.spin : 0.0);
  s.finish();
  if (c.family == Family::Minkowski) {
    if (c.mass != 0.0 || c.spin != 0.0) violation(s.key("mass"), "Minkowski needs mass = 0 and spin = 0");
    return;
  }
  if (!(c.mass > 0.0)) violation(s.key("mass"), "must be > 0 (got " + fmt(c.mass) + ")");
  if (c.family == Family::Schwarzschild && c.spin != 0.0) violation(s.key("spin"), "Schwarzschild needs spin = 0");
  if (!(std::abs(c.spin) < c.mass))
    violation(s.key("spin"), "|a| < M required (got a=" + fmt(c.spin) + ", M=" + fmt(c.mass) + ")");
}

void read_geodesic(Section s, GeodesicConfig& g, const ChartConfig& chart) {
  g.preset = s.get<std::string>("preset", g.preset);
  if (g.preset != "custom" && g.preset != "photon_orbit" && g.preset != "random")
    violation(s.key("preset"), "must be custom, photon_orbit or random");
  g.position = s.get<std::array<double, 4>>("position", g.position);
  g.direction = s.get<std::array<double, 3>>("direction", g.direction);
  g.count = s.get<std::size_t>("count", g.count);
  g.span = s.number("span", g.span);
  g.rtol = s.number("rtol", g.rtol);
  g.atol = s.number("atol", g.atol);
  g.sample_spacing = s.number("sample_spacing", g.sample_spacing);
  g.generators = s.get<std::vector<std::string>>("generators", g.generators);
  g.drift_tolerance = s.number("drift_tolerance", g.drift_tolerance);
  s.finish();
  if (!(g.span > 0.0)) violation(s.key("span"), "must be > 0");
  if (!(g.rtol > 0.0)) violation(s.key("rtol"), "must be > 0");
  if (!(g.atol > 0.0)) violation(s.key("atol"), "must be > 0");
  if (g.sample_spacing < 0.0) violation(s.key("sample_spacing"), "must be >= 0");
  if (g.count == 0) violation(s.key("count"), "must be >= 1");
  if (!(g.drift_tolerance > 0.0)) violation(s.key("drift_tolerance"), "must be > 0");
  for (const auto& name : g.generators) {
    if (name != "T" && name != "Phi" && name != "R" && name != "A" && name != "T_chi")
      violation(s.key("generators"), "unknown generator '" + name + "' (T, Phi, R, A, T_chi)");
    if (name == "T_chi" && chart.family != Family::Kerr) violation(s.key("generators"), "T_chi needs a Kerr chart");
  }
  if (g.preset == "photon_orbit" && chart.family != Family::Schwarzschild)
    violation(s.key("preset"), "photon_orbit needs a Schwarzschild chart");
  if (g.preset == "custom") {
    const auto c = make_chart(chart);
    if (!c.contains({g.position[0], g.position[1], g.position[2], g.position[3]}))
      violation(s.key("position"), "must lie in the chart exterior (r > " + fmt(c.r_min()) + ", off the axis)");
    if (g.direction[0] == 0.0 && g.direction[1] == 0.0 && g.direction[2] == 0.0)
      violation(s.key("direction"), "must be nonzero");
  }
}

void read_wave(Section s, WaveConfig& w, const ChartConfig& chart) {
  if (s.has("modes")) {
    const json& modes = s.raw("modes");
    if (!modes.is_array() || modes.empty()) violation(s.key("modes"), "must be a nonempty array");
    w.modes.clear();
    for (std::size_t i = 0; i < modes.size(); ++i) {
      Section m(modes[i], s.key("modes") + "[" + std::to_string(i) + "]");
      ModeConfig mc;
      mc.spin = m.get<int>("spin", 0);
      mc.l = m.get<int>("l", 2);
      m.finish();
      if (mc.spin < 0 || mc.spin > 2) violation(m.key("spin"), "must be 0, 1 or 2");
      if (mc.l < mc.spin) violation(m.key("l"), "must satisfy l >= s");
      w.modes.push_back(mc);
    }
  } else {
    s.get<int>("modes", 0);
  }
  w.epsilon = s.number("epsilon", w.epsilon);
  w.bump_width = s.number("bump_width", w.bump_width);
  w.lo = s.number("lo", w.lo);
  w.hi = s.number("hi", w.hi);
  w.spacing = s.number("spacing", w.spacing);
  w.cfl = s.number("cfl", w.cfl);
  w.t_final = s.number("t_final", w.t_final);
  w.ledger_interval = s.number("ledger_interval", w.ledger_interval);
  w.profile = s.get<std::string>("profile", w.profile);
  w.window = s.maybe<std::array<double, 2>>("window", w.window);
  w.induced_weight = s.get<bool>("induced_weight", w.induced_weight);
  w.data_shape = s.get<std::string>("data_shape", w.data_shape);
  w.data_center = s.number("data_center", w.data_center);
  w.data_width = s.number("data_width", w.data_width);
  w.data_amplitude = s.number("data_amplitude", w.data_amplitude);
  w.data_wavenumber = s.number("data_wavenumber", w.data_wavenumber);
  w.order_n = s.get<std::vector<int>>("order_n", w.order_n);
  w.drift_tolerance = s.number("drift_tolerance", w.drift_tolerance);
  s.finish();
  if (chart.family == Family::Kerr) violation("chart.family", "the mode equations live on Schwarzschild or Minkowski");
  if (!(w.hi > w.lo)) violation(s.key("hi"), "must exceed lo");
  if (!(w.spacing > 0.0) || (w.hi - w.lo) / w.spacing < 4.0) violation(s.key("spacing"), "must be > 0 with at least 4 cells");
  if (!(w.cfl > 0.0 && w.cfl <= 1.0)) violation(s.key("cfl"), "must lie in (0, 1]");
  if (!(w.t_final > 0.0)) violation(s.key("t_final"), "must be > 0");
  if (!(w.ledger_interval > 0.0)) violation(s.key("ledger_interval"), "must be > 0");
  if (w.profile != "photon_sphere" && w.profile != "constant" && w.profile != "none")
    violation(s.key("profile"), "must be photon_sphere, constant or none");
  if (w.profile == "photon_sphere" && chart.mass == 0.0) violation(s.key("profile"), "photon_sphere needs M > 0");
  if (w.window && !((*w.window)[0] < (*w.window)[1] && (*w.window)[0] >= w.lo && (*w.window)[1] <= w.hi))
    violation(s.key("window"), "must be an increasing pair inside [lo, hi]");
  if (w.data_shape != "gaussian" && w.data_shape != "compact") violation(s.key("data_shape"), "must be gaussian or compact");
  if (!(w.data_width > 0.0)) violation(s.key("data_width"), "must be > 0");
  if (w.epsilon != 0.0 && !(w.bump_width > 0.0)) violation(s.key("bump_width"), "must be > 0");
  if (w.epsilon != 0.0 && chart.mass == 0.0) violation(s.key("epsilon"), "the bump sits at r = 3M and needs M > 0");
  for (int n : w.order_n)
    if (n < 0) violation(s.key("order_n"), "orders must be >= 0");
  if (chart.mass == 0.0 && !(w.lo > 0.0))
    for (const auto& m : w.modes)
      if (m.l > 0) violation(s.key("lo"), "flat modes with l > 0 need lo > 0 (r* = r)");
  if (!(w.drift_tolerance > 0.0)) violation(s.key("drift_tolerance"), "must be > 0");
}

void read_trapped(Section s, TrappedConfig& t, const ChartConfig& chart) {
  t.eta = s.get<std::vector<double>>("eta", t.eta);
  t.lo = s.maybe<double>("lo", t.lo);
  t.hi = s.maybe<double>("hi", t.hi);
  s.finish();
  if (chart.family == Family::Minkowski) violation("chart.family", "trapped orbits need Schwarzschild or Kerr");
  if (t.eta.empty()) violation(s.key("eta"), "must list at least one value");
  for (double e : t.eta)
    if (!(e >= 0.0) || !std::isfinite(e)) violation(s.key("eta"), "values must be finite and >= 0");
  if (t.lo && t.hi && !(*t.lo < *t.hi)) violation(s.key("hi"), "must exceed lo");
}

void read_scan(Section s, ScanConfig& c, const ChartConfig& chart) {
  c.r_hi = s.number("r_hi", c.r_hi);
  c.nr = s.get<std::size_t>("nr", c.nr);
  c.ntheta = s.get<std::size_t>("ntheta", c.ntheta);
  c.r1 = s.number("r1", c.r1);
  c.r2 = s.number("r2", c.r2);
  c.deformation_tolerance = s.number("deformation_tolerance", c.deformation_tolerance);
  s.finish();
  if (chart.family != Family::Kerr) violation("chart.family", "scan-tchi needs a Kerr chart");
  const auto k = make_chart(chart);
  if (!(c.r1 > k.r_min() && c.r2 > c.r1)) violation(s.key("r1"), "blend window must satisfy r_min < r1 < r2");
  if (!(c.r_hi > c.r2)) violation(s.key("r_hi"), "must exceed r2");
  if (c.nr < 2 || c.ntheta < 1) violation(s.key("nr"), "grid needs nr >= 2 and ntheta >= 1");
  if (!(c.deformation_tolerance > 0.0)) violation(s.key("deformation_tolerance"), "must be > 0");
}

ChartConfig default_chart(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Trapped: return {Family::Kerr, 1.0, 0.3};
    case ScenarioKind::ScanTchi: return {Family::Kerr, 1.0, 0.1};
    default: return {Family::Schwarzschild, 1.0, 0.0};
  }
}

}  // namespace

geometry::SpacetimeChart make_chart(const ChartConfig& c) {
  switch (c.family) {
    case Family::Minkowski: return geometry::SpacetimeChart::minkowski();
    case Family::Schwarzschild: return geometry::SpacetimeChart::schwarzschild(c.mass);
    case Family::Kerr: return geometry::SpacetimeChart::kerr(c.mass, c.spin);
  }
  throw Error(ErrorKind::InvalidSpec, "unknown family");
}

ScenarioConfig default_config(ScenarioKind kind) {
  ScenarioConfig c;
  c.kind = kind;
  c.chart = default_chart(kind);
  return c;
}

namespace {

json parse(std::string_view raw) {
  try {
    return json::parse(raw.begin(), raw.end());
  } catch (const json::parse_error& e) {
    std::ostringstream msg;
    msg << "byte " << e.byte << ": " << e.what();
    throw Error(ErrorKind::ParseError, msg.str());
  }
}

ScenarioConfig validate_json(const json& j);

}  // namespace

ScenarioConfig validate_config(std::string_view raw) { return validate_json(parse(raw)); }

ScenarioConfig validate_config(std::string_view raw, ScenarioKind expected) {
  json j = parse(raw);
  if (j.is_object() && !j.contains("kind")) j["kind"] = std::string(to_string(expected));
  auto c = validate_json(j);
  if (c.kind != expected)
    violation("kind", "config is for '" + std::string(to_string(c.kind)) + "', not '" +
                          std::string(to_string(expected)) + "'");
  return c;
}

namespace {

ScenarioConfig validate_json(const json& j) {
  Section root(j, "");
  if (!j.contains("kind")) violation("kind", "missing (geodesic, wave, trapped or scan-tchi)");
  const auto kind = scenario_kind_from_string(root.get<std::string>("kind", ""));
  ScenarioConfig c = default_config(kind);
  // chart defaults depend on the family actually requested
  if (j.contains("chart") && j["chart"].is_object() && j["chart"].contains("family")) {
    c.chart.mass = 1.0;
    c.chart.spin = 0.0;
  }
  read_chart(root.child("chart"), c.chart);
  c.seed = root.get<std::uint64_t>("seed", c.seed);
  c.output = root.get<std::string>("output", c.output);

  // only the section for this kind may be present
  const std::pair<const char*, ScenarioKind> sections[] = {{"geodesic", ScenarioKind::Geodesic},
                                                           {"wave", ScenarioKind::Wave},
                                                           {"trapped", ScenarioKind::Trapped},
                                                           {"scan", ScenarioKind::ScanTchi}};
  for (const auto& [name, k] : sections)
    if (k != kind && j.contains(name))
      violation(name, "section does not apply to kind '" + std::string(to_string(kind)) + "'");
  switch (kind) {
    case ScenarioKind::Geodesic: read_geodesic(root.child("geodesic"), c.geodesic, c.chart); break;
    case ScenarioKind::Wave: read_wave(root.child("wave"), c.wave, c.chart); break;
    case ScenarioKind::Trapped: read_trapped(root.child("trapped"), c.trapped, c.chart); break;
    case ScenarioKind::ScanTchi: read_scan(root.child("scan"), c.scan, c.chart); break;
  }
  root.finish();
  return c;
}

}  // namespace

std::string serialize(const ScenarioConfig& c) {
  json j;
  j["kind"] = to_string(c.kind);
  j["seed"] = c.seed;
  j["output"] = c.output;
  j["chart"] = {{"family", geometry::to_string(c.chart.family)}, {"mass", c.chart.mass}, {"spin", c.chart.spin}};
  switch (c.kind) {
    case ScenarioKind::Geodesic: {
      const auto& g = c.geodesic;
      j["geodesic"] = {{"preset", g.preset},
                       {"position", g.position},
                       {"direction", g.direction},
                       {"count", g.count},
                       {"span", g.span},
                       {"rtol", g.rtol},
                       {"atol", g.atol},
                       {"sample_spacing", g.sample_spacing},
                       {"generators", g.generators},
                       {"drift_tolerance", g.drift_tolerance}};
      break;
    }
    case ScenarioKind::Wave: {
      const auto& w = c.wave;
      json modes = json::array();
      for (const auto& m : w.modes) modes.push_back({{"spin", m.spin}, {"l", m.l}});
      j["wave"] = {{"modes", modes},
                   {"epsilon", w.epsilon},
                   {"bump_width", w.bump_width},
                   {"lo", w.lo},
                   {"hi", w.hi},
                   {"spacing", w.spacing},
                   {"cfl", w.cfl},
                   {"t_final", w.t_final},
                   {"ledger_interval", w.ledger_interval},
                   {"profile", w.profile},
                   {"window", w.window ? json(*w.window) : json(nullptr)},
                   {"induced_weight", w.induced_weight},
                   {"data_shape", w.data_shape},
                   {"data_center", w.data_center},
                   {"data_width", w.data_width},
                   {"data_amplitude", w.data_amplitude},
                   {"data_wavenumber", w.data_wavenumber},
                   {"order_n", w.order_n},
                   {"drift_tolerance", w.drift_tolerance}};
      break;
    }
    case ScenarioKind::Trapped:
      j["trapped"] = {{"eta", c.trapped.eta},
                      {"lo", c.trapped.lo ? json(*c.trapped.lo) : json(nullptr)},
                      {"hi", c.trapped.hi ? json(*c.trapped.hi) : json(nullptr)}};
      break;
    case ScenarioKind::ScanTchi:
      j["scan"] = {{"r_hi", c.scan.r_hi}, {"nr", c.scan.nr},  {"ntheta", c.scan.ntheta},
                   {"r1", c.scan.r1},     {"r2", c.scan.r2}, {"deformation_tolerance", c.scan.deformation_tolerance}};
      break;
  }
  return j.dump(2);
}

}  // namespace kerrlab::harness
