#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kerrlab/geometry/chart.hpp"

namespace kerrlab::harness {

enum class ScenarioKind { Geodesic, Wave, Trapped, ScanTchi };

std::string_view to_string(ScenarioKind kind) noexcept;
ScenarioKind scenario_kind_from_string(std::string_view name);

struct ChartConfig {
  geometry::Family family = geometry::Family::Schwarzschild;
  double mass = 1.0;
  double spin = 0.0;
};

struct GeodesicConfig {
  // "custom" uses position/direction; "photon_orbit" is circular photon data
  // at r = 3M; "random" draws `count` scattering geodesics from the seed.
  std::string preset = "custom";
  std::array<double, 4> position{0.0, 20.0, 1.2, 0.0};
  std::array<double, 3> direction{-1.0, 0.012, 0.02};
  std::size_t count = 1;
  double span = 200.0;
  double rtol = 1e-10;
  double atol = 1e-10;
  double sample_spacing = 0.0;
  std::vector<std::string> generators{"T", "Phi"};
  double drift_tolerance = 1e-8;
};

struct ModeConfig {
  int spin = 0;
  int l = 2;
};

struct WaveConfig {
  std::vector<ModeConfig> modes{{0, 2}};
  double epsilon = 0.0;
  double bump_width = 1.0;
  double lo = -100.0;
  double hi = 100.0;
  double spacing = 0.05;
  // Leapfrog energy error scales with dt^2; 0.04 keeps s=0 drift near 1e-7 at 0.05M.
  double cfl = 0.04;
  double t_final = 50.0;
  double ledger_interval = 1.0;
  std::string profile = "photon_sphere";  // photon_sphere | constant | none
  std::optional<std::array<double, 2>> window;
  bool induced_weight = false;
  std::string data_shape = "gaussian";  // gaussian | compact
  double data_center = 0.0;
  double data_width = 3.0;
  double data_amplitude = 1.0;
  double data_wavenumber = 0.0;  // > 0 makes the packet move right
  std::vector<int> order_n{1, 2};
  double drift_tolerance = 1e-6;
};

struct TrappedConfig {
  std::vector<double> eta{0.0};
  std::optional<double> lo;
  std::optional<double> hi;
};

struct ScanConfig {
  double r_hi = 20.0;
  std::size_t nr = 400;
  std::size_t ntheta = 64;
  double r1 = 5.0;
  double r2 = 6.0;
  double deformation_tolerance = 1e-12;
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::Geodesic;
  ChartConfig chart;
  std::uint64_t seed = 1;
  std::string output;  // empty: chosen by the caller
  GeodesicConfig geodesic;
  WaveConfig wave;
  TrappedConfig trapped;
  ScanConfig scan;
};

// Parses JSON text, fills defaults and checks every constraint. Syntax errors
// raise ParseError with the byte offset; bad values and unknown keys raise
// ConstraintViolation naming the key.
ScenarioConfig validate_config(std::string_view raw);
// As above for a known kind: a missing "kind" key is filled in, a different one is rejected.
ScenarioConfig validate_config(std::string_view raw, ScenarioKind expected);

// Normalised JSON with every field present; validate_config(serialize(c)) == c.
std::string serialize(const ScenarioConfig& config);

// Default configuration for a scenario kind (what validate_config returns for {"kind": ...}).
ScenarioConfig default_config(ScenarioKind kind);

geometry::SpacetimeChart make_chart(const ChartConfig& chart);

}  // namespace kerrlab::harness
