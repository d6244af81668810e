#pragma once

#include <Eigen/Dense>

#include <string>

namespace flagcurv {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Default tolerances. Every check takes its tolerance explicitly; these are
/// the values the CLI uses unless a config overrides them.
struct Tolerances {
  double jacobi = 1e-9;
  double rank = 1e-10;
  double metric = 1e-9;
  double oracle = 1e-10;
  double boundary = 1e-12;
  double fd = 1e-6;
  double dependence = 1e-12;
  double orthonormal = 1e-10;

  bool operator==(const Tolerances&) const = default;
};

/// Result of a report-style check: the largest violation and where it sits.
template <typename Scalar>
struct DefectReport {
  bool ok = true;
  Scalar max_defect = Scalar(0);
  std::string location;
};

namespace detail {

template <typename Scalar>
void record_defect(DefectReport<Scalar>& report, Scalar defect,
                   const std::string& where) {
  using std::abs;
  const Scalar a = abs(defect);
  if (a > report.max_defect) {
    report.max_defect = a;
    report.location = where;
  }
}

template <typename Scalar>
void finish(DefectReport<Scalar>& report, double tol) {
  report.ok = report.max_defect <= Scalar(tol);
}

}  // namespace detail
}  // namespace flagcurv
