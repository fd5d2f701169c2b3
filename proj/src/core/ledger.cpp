#include "kerrlab/ledger.hpp"

#include <algorithm>

#include "kerrlab/error.hpp"

namespace kerrlab {

Ledger::Ledger(std::string name, std::string index_name, std::string index_unit)
    : name_(std::move(name)), index_name_(std::move(index_name)), index_unit_(std::move(index_unit)) {}

std::size_t Ledger::add_column(std::string name, std::string unit) {
  if (!index_.empty())
    throw Error(ErrorKind::InvalidSpec, "ledger '" + name_ + "': columns must be declared before rows");
  columns_.push_back({std::move(name), std::move(unit), {}});
  return columns_.size() - 1;
}

void Ledger::append(double index, std::span<const double> row) {
  if (row.size() != columns_.size())
    throw Error(ErrorKind::InvalidSpec, "ledger '" + name_ + "': row width " + std::to_string(row.size()) +
                                            " != " + std::to_string(columns_.size()) + " columns");
  index_.push_back(index);
  for (std::size_t c = 0; c < row.size(); ++c) columns_[c].values.push_back(row[c]);
}

const LedgerColumn& Ledger::column(std::string_view name) const {
  auto it = std::find_if(columns_.begin(), columns_.end(), [&](const auto& c) { return c.name == name; });
  if (it == columns_.end())
    throw Error(ErrorKind::InvalidSpec, "ledger '" + name_ + "' has no column '" + std::string(name) + "'");
  return *it;
}

bool Ledger::has_column(std::string_view name) const noexcept {
  return std::any_of(columns_.begin(), columns_.end(), [&](const auto& c) { return c.name == name; });
}

}  // namespace kerrlab
