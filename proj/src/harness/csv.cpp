#include "kerrlab/harness/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "kerrlab/error.hpp"

namespace kerrlab::harness {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string header_cell(const std::string& name, const std::string& unit) { return name + "[" + unit + "]"; }

std::pair<std::string, std::string> split_header(const std::string& cell) {
  const auto open = cell.find('[');
  if (open == std::string::npos || cell.back() != ']') return {cell, ""};
  return {cell.substr(0, open), cell.substr(open + 1, cell.size() - open - 2)};
}

}  // namespace

void emit_series(const Ledger& ledger, const std::filesystem::path& path) {
  if (ledger.empty()) throw Error(ErrorKind::InvalidSpec, "ledger '" + ledger.name() + "' has no rows to write");
  std::ostringstream out;
  out << header_cell(ledger.index_name(), ledger.index_unit());
  for (const auto& c : ledger.columns()) out << ',' << header_cell(c.name, c.unit);
  out << '\n';
  for (std::size_t i = 0; i < ledger.size(); ++i) {
    out << format_double(ledger.index()[i]);
    for (const auto& c : ledger.columns()) out << ',' << format_double(c.values[i]);
    out << '\n';
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  const std::string text = out.str();
  file.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!file) throw Error(ErrorKind::IoError, "failed writing " + path.string());
}

Ledger read_series(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::string line;
  if (!std::getline(file, line)) throw Error(ErrorKind::ParseError, path.string() + ": missing header");
  std::vector<std::string> cells;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
  }
  if (cells.empty()) throw Error(ErrorKind::ParseError, path.string() + ": empty header");
  const auto [index_name, index_unit] = split_header(cells[0]);
  Ledger ledger(path.stem().string(), index_name, index_unit);
  for (std::size_t c = 1; c < cells.size(); ++c) {
    const auto [name, unit] = split_header(cells[c]);
    ledger.add_column(name, unit);
  }
  std::size_t line_no = 1;
  std::vector<double> row(cells.size() - 1);
  while (std::getline(file, line)) {
    ++line_no;
    if (line.empty()) continue;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    std::vector<double> values;
    while (p < end) {
      double v = 0.0;
      const auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc{}) {
        std::ostringstream msg;
        msg << path.string() << ":" << line_no << ": bad number at column " << values.size() + 1;
        throw Error(ErrorKind::ParseError, msg.str());
      }
      values.push_back(v);
      p = res.ptr;
      if (p < end && *p == ',') ++p;
    }
    if (values.size() != cells.size()) {
      std::ostringstream msg;
      msg << path.string() << ":" << line_no << ": expected " << cells.size() << " fields, found " << values.size();
      throw Error(ErrorKind::ParseError, msg.str());
    }
    std::copy(values.begin() + 1, values.end(), row.begin());
    ledger.append(values[0], row);
  }
  return ledger;
}

}  // namespace kerrlab::harness
