#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "kerrlab/error.hpp"
#include "kerrlab/harness/audit.hpp"
#include "kerrlab/harness/config.hpp"
#include "kerrlab/harness/scenarios.hpp"

namespace fs = std::filesystem;
using namespace kerrlab;
using namespace kerrlab::harness;

namespace {

enum Exit { kOk = 0, kInternal = 1, kConfig = 2, kAudit = 3, kIo = 4 };

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::IoError: return kIo;
    case ErrorKind::AuditFailure: return kAudit;
    case ErrorKind::ParseError:
    case ErrorKind::ConstraintViolation:
    case ErrorKind::InvalidSpec: return kConfig;
    default: return kInternal;
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path output_root() {
  const char* env = std::getenv("KERRLAB_OUT_ROOT");
  return env && *env ? fs::path(env) : fs::path("runs");
}

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 1;
  std::vector<int> criteria;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--out", f.out, "output directory (default: $KERRLAB_OUT_ROOT/<command>, else runs/<command>)");
  cmd->add_option("--seed", f.seed, "random seed, overrides the config");
  cmd->add_option("--jobs", f.jobs, "worker threads")->check(CLI::Range(std::size_t{1}, std::size_t{1024}));
}

int report(const RunManifest& m, const fs::path& dir) {
  for (const auto& job : m.jobs)
    if (job.status != "ok") std::cerr << "job " << job.name << " failed: " << job.message << '\n';
  std::size_t failed = 0;
  for (const auto& a : m.audit)
    if (!a.passed) {
      ++failed;
      std::cout << "FAIL " << a.id << ' ' << a.name << (a.detail.empty() ? "" : ": " + a.detail) << '\n';
    }
  std::cout << m.audit.size() - failed << '/' << m.audit.size() << " checks passed; manifest "
            << (dir / "manifest.json").string() << '\n';
  return m.all_passed() ? kOk : kAudit;
}

int run_kind(ScenarioKind kind, const Flags& f) {
  auto config = f.config.empty() ? default_config(kind) : validate_config(read_file(f.config), kind);
  if (f.seed) config.seed = *f.seed;
  fs::path dir = !f.out.empty() ? fs::path(f.out)
                 : !config.output.empty() ? fs::path(config.output)
                                          : output_root() / std::string(to_string(kind));
  config.output = dir.string();
  return report(run_scenario(config, dir, f.jobs), dir);
}

int run_audit_command(const Flags& f) {
  AuditOptions opt;
  opt.criteria = f.criteria;
  opt.jobs = f.jobs;
  opt.seed = f.seed.value_or(1);
  const fs::path dir = f.out.empty() ? output_root() / "audit" : fs::path(f.out);
  const auto m = run_audit(opt, dir);
  for (const auto& e : m.audit) std::cout << summary_line(e) << '\n';
  std::cout << "manifest " << (dir / "manifest.json").string() << '\n';
  return m.all_passed() ? kOk : kAudit;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kerrlab: energy, Morawetz and trapping audits on Kerr and Schwarzschild"};
  app.set_version_flag("--version", artifact_version());
  app.require_subcommand(1);
  Flags f;
  const std::pair<ScenarioKind, const char*> kinds[] = {
      {ScenarioKind::Geodesic, "integrate null geodesics and audit their energies"},
      {ScenarioKind::Wave, "evolve spin-s modes and record energy, Morawetz and flux ledgers"},
      {ScenarioKind::Trapped, "locate spherical photon orbits"},
      {ScenarioKind::ScanTchi, "check that T_chi is timelike and where it deforms the metric"},
  };
  std::vector<std::pair<CLI::App*, ScenarioKind>> commands;
  for (const auto& [kind, help] : kinds) {
    auto* cmd = app.add_subcommand(std::string(to_string(kind)), help);
    cmd->add_option("--config", f.config, "JSON scenario file (defaults apply when omitted)");
    add_common(cmd, f);
    commands.emplace_back(cmd, kind);
  }
  auto* audit = app.add_subcommand("audit", "run the built-in acceptance presets");
  add_common(audit, f);
  audit->add_option("--criteria", f.criteria, "criterion numbers to run (default: all)")
      ->check(CLI::Range(1, static_cast<int>(acceptance_criteria().size())));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (audit->parsed()) return run_audit_command(f);
    for (const auto& [cmd, kind] : commands)
      if (cmd->parsed()) return run_kind(kind, f);
  } catch (const Error& e) {
    std::cerr << "kerrlab: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "kerrlab: internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
