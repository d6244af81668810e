#include "flagcurv/cli/render.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace flagcurv::cli {

std::string format_real(double x) {
  if (x == 0.0) x = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double round_real(double x) {
  const double r = std::strtod(format_real(x).c_str(), nullptr);
  return r == 0.0 ? 0.0 : r;
}

TextTable::TextTable(std::vector<std::string> header) { rows_.push_back(std::move(header)); }

void TextTable::add(std::vector<std::string> row) {
  if (row.size() != rows_.front().size()) throw std::logic_error("TextTable: row width mismatch");
  rows_.push_back(std::move(row));
}

std::string TextTable::str() const {
  const std::size_t cols = rows_.front().size();
  std::vector<std::size_t> width(cols, 0);
  for (const auto& row : rows_)
    for (std::size_t c = 0; c < cols; ++c) width[c] = std::max(width[c], row[c].size());

  std::ostringstream os;
  auto emit = [&](const std::vector<std::string>& row) {
    std::string line;
    for (std::size_t c = 0; c < cols; ++c) {
      const std::string pad(width[c] - row[c].size(), ' ');
      if (c > 0) line += "  ";
      line += c == 0 ? row[c] + pad : pad + row[c];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    os << line << '\n';
  };
  emit(rows_.front());
  std::size_t total = 0;
  for (std::size_t c = 0; c < cols; ++c) total += width[c] + (c > 0 ? 2 : 0);
  os << std::string(total, '-') << '\n';
  for (std::size_t r = 1; r < rows_.size(); ++r) emit(rows_[r]);
  return os.str();
}

}  // namespace flagcurv::cli
