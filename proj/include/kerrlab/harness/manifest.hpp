#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace kerrlab::harness {

struct JobRecord {
  std::string name;
  std::string status = "ok";  // ok | failed
  std::vector<std::string> files;  // relative to the run directory
  std::map<std::string, double> metrics;
  std::string message;
};

struct AuditEntry {
  std::string id;
  std::string name;
  bool passed = false;
  std::map<std::string, double> metrics;
  std::map<std::string, double> thresholds;
  std::string detail;
};

struct RunManifest {
  std::string config;  // normalised JSON snapshot
  std::string version;
  std::uint64_t seed = 0;
  std::string started;
  std::string finished;
  std::vector<JobRecord> jobs;
  std::vector<AuditEntry> audit;
  std::vector<std::string> files;  // run-level outputs not owned by a job

  bool all_passed() const noexcept;
  bool all_jobs_ok() const noexcept;
};

std::string utc_timestamp();

std::string to_json(const RunManifest& manifest);

// Checks that every named file exists and is non-empty (IoError otherwise),
// then writes dir/manifest.json through a temporary file and a rename.
std::filesystem::path write_manifest(const RunManifest& manifest, const std::filesystem::path& dir);

// Writes text to path via a sibling temporary file and rename; IoError on failure.
void write_atomically(const std::filesystem::path& path, const std::string& text);

std::string artifact_version();

}  // namespace kerrlab::harness
