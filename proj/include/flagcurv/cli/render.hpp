#pragma once

#include <string>
#include <vector>

namespace flagcurv::cli {

/// %.12g, with negative zero printed as 0.
std::string format_real(double x);

/// x rounded to 12 significant digits, so that JSON output carries exactly
/// the digits shown in tables.
double round_real(double x);

/// Column-aligned plain-text table; the first column is left-aligned, the
/// others right-aligned.
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header);

  void add(std::vector<std::string> row);
  std::string str() const;

 private:
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace flagcurv::cli
