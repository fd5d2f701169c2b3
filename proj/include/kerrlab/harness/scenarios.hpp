#pragma once

#include <cstddef>
#include <filesystem>

#include "kerrlab/harness/config.hpp"
#include "kerrlab/harness/manifest.hpp"

namespace kerrlab::harness {

// Runs one scenario into out_dir: each job writes its own subdirectory, the
// manifest is assembled in job order afterwards and written last. Failed
// jobs and exceeded tolerances show up as failing audit entries, never as
// exceptions; only I/O problems (IoError) escape.
RunManifest run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir, std::size_t jobs = 1);

}  // namespace kerrlab::harness
