#include "kerrlab/harness/manifest.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>

#include "json.hpp"
#include "kerrlab/error.hpp"

#ifndef KERRLAB_VERSION
#define KERRLAB_VERSION "unknown"
#endif

namespace kerrlab::harness {

namespace fs = std::filesystem;
using nlohmann::json;

bool RunManifest::all_passed() const noexcept {
  for (const auto& a : audit)
    if (!a.passed) return false;
  return true;
}

bool RunManifest::all_jobs_ok() const noexcept {
  for (const auto& j : jobs)
    if (j.status != "ok") return false;
  return true;
}

std::string artifact_version() { return KERRLAB_VERSION; }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

// JSON has no inf/nan; keep them visible as strings rather than null.
json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

json numbers(const std::map<std::string, double>& m) {
  json out = json::object();
  for (const auto& [k, v] : m) out[k] = number(v);
  return out;
}

}  // namespace

std::string to_json(const RunManifest& m) {
  json j;
  j["version"] = m.version;
  j["seed"] = m.seed;
  j["started"] = m.started;
  j["finished"] = m.finished;
  j["config"] = m.config.empty() ? json(nullptr) : json::parse(m.config);
  j["files"] = m.files;
  j["jobs"] = json::array();
  for (const auto& job : m.jobs)
    j["jobs"].push_back({{"name", job.name},
                         {"status", job.status},
                         {"files", job.files},
                         {"metrics", numbers(job.metrics)},
                         {"message", job.message}});
  j["audit"] = json::array();
  std::size_t failed = 0;
  for (const auto& a : m.audit) {
    failed += a.passed ? 0 : 1;
    j["audit"].push_back({{"id", a.id},
                          {"name", a.name},
                          {"passed", a.passed},
                          {"metrics", numbers(a.metrics)},
                          {"thresholds", numbers(a.thresholds)},
                          {"detail", a.detail}});
  }
  j["summary"] = {{"checks", m.audit.size()}, {"failed", failed}, {"passed", m.all_passed()},
                  {"jobs_ok", m.all_jobs_ok()}};
  return j.dump(2) + "\n";
}

void write_atomically(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + tmp.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw Error(ErrorKind::IoError, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::IoError, "cannot rename onto " + path.string());
  }
}

fs::path write_manifest(const RunManifest& m, const fs::path& dir) {
  auto check = [&](const std::string& rel) {
    std::error_code ec;
    const auto size = fs::file_size(dir / rel, ec);
    if (ec || size == 0) throw Error(ErrorKind::IoError, "manifest names missing or empty file " + rel);
  };
  for (const auto& f : m.files) check(f);
  for (const auto& job : m.jobs)
    for (const auto& f : job.files) check(f);
  const auto path = dir / "manifest.json";
  write_atomically(path, to_json(m));
  return path;
}

}  // namespace kerrlab::harness
