#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kerrlab {

struct LedgerColumn {
  std::string name;
  std::string unit;
  std::vector<double> values;
};

// A named time series of scalar functionals sharing one index column
// (affine parameter for geodesics, coordinate time for mode evolutions).
class Ledger {
 public:
  Ledger() = default;
  Ledger(std::string name, std::string index_name, std::string index_unit);

  std::size_t add_column(std::string name, std::string unit);
  void append(double index, std::span<const double> row);

  const std::string& name() const noexcept { return name_; }
  const std::string& index_name() const noexcept { return index_name_; }
  const std::string& index_unit() const noexcept { return index_unit_; }
  const std::vector<double>& index() const noexcept { return index_; }
  const std::vector<LedgerColumn>& columns() const noexcept { return columns_; }
  const LedgerColumn& column(std::string_view name) const;
  bool has_column(std::string_view name) const noexcept;
  std::size_t size() const noexcept { return index_.size(); }
  bool empty() const noexcept { return index_.empty(); }

  std::map<std::string, std::string>& metadata() noexcept { return metadata_; }
  const std::map<std::string, std::string>& metadata() const noexcept { return metadata_; }

 private:
  std::string name_;
  std::string index_name_;
  std::string index_unit_;
  std::vector<double> index_;
  std::vector<LedgerColumn> columns_;
  std::map<std::string, std::string> metadata_;
};

}  // namespace kerrlab
