#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "kerrlab/harness/manifest.hpp"

namespace kerrlab::harness {

struct AuditOptions {
  std::vector<int> criteria;  // empty: all of 1..12
  std::size_t jobs = 1;
  std::uint64_t seed = 1;
};

struct CriterionInfo {
  int id;
  std::string name;
};

const std::vector<CriterionInfo>& acceptance_criteria();

// Runs one built-in acceptance preset. Every numerical failure is folded
// into the entry (passed = false, detail says why).
AuditEntry run_criterion(int id, const AuditOptions& options);

std::vector<AuditEntry> run_acceptance(const AuditOptions& options);

// "AC<n> PASS|FAIL name: detail"
std::string summary_line(const AuditEntry& entry);

// run_acceptance plus a manifest in out_dir.
RunManifest run_audit(const AuditOptions& options, const std::filesystem::path& out_dir);

}  // namespace kerrlab::harness
