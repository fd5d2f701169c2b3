#pragma once

#include <filesystem>
#include <string>

#include "kerrlab/ledger.hpp"

namespace kerrlab::harness {

// Shortest decimal that parses back to the same double.
std::string format_double(double v);

// Header "index[unit],col[unit],..." then one row per sample, index first.
// The ledger must be nonempty; failures to write raise IoError.
void emit_series(const Ledger& ledger, const std::filesystem::path& path);

// Parses a file written by emit_series back into a ledger (metadata is not stored).
Ledger read_series(const std::filesystem::path& path);

}  // namespace kerrlab::harness
