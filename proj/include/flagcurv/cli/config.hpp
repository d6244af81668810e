#pragma once

#include "flagcurv/curvature.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace flagcurv::cli {

/// One structure constant c_ij^k, 1-based as written in the document.
struct StructureEntry {
  int i = 0;
  int j = 0;
  int k = 0;
  double value = 0.0;

  bool operator==(const StructureEntry&) const = default;
};

/// A raw flag in m-coordinates (length m_dim).
struct FlagSpec {
  Vector<double> Y;
  Vector<double> U;
};

struct ConfigOptions {
  SignConvention sign_convention = SignConvention::OracleAligned;
  Method method = Method::General;
  GySource gy_source = GySource::Closed;
  double fd_step = 1e-5;
  Tolerances tolerances;
  std::uint64_t seed = 0;
  std::int64_t samples = 1000;
};

struct ProblemConfig {
  std::string name;
  Index dim = 0;
  Index h_dim = 0;
  std::vector<StructureEntry> structure_constants;
  Matrix<double> g0;
  Matrix<double> phi;
  Vector<double> X;
  std::vector<FlagSpec> flags;
  ConfigOptions options;
  /// Messages produced while normalizing the document (not serialized).
  std::vector<std::string> notices;

  Index m_dim() const { return dim - h_dim; }
  ReductiveSplit split() const { return ReductiveSplit(dim, h_dim); }
};

/// Exact equality of every serialized field; notices are ignored.
bool operator==(const ProblemConfig& a, const ProblemConfig& b);

/// Throws InputError with line/column context for syntax errors and a
/// field path for schema errors.
ProblemConfig parse_config_text(const std::string& text, const std::string& source = "<config>");
ProblemConfig parse_config_file(const std::string& path);

/// Canonical JSON document with every default made explicit.
std::string serialize_config(const ProblemConfig& config);

Method parse_method(const std::string& s);
SignConvention parse_convention(const std::string& s);
GySource parse_gy_source(const std::string& s);
CurvatureVariant parse_variant(const std::string& s);

LieAlgebra<double> build_algebra(const ProblemConfig& config);
InvariantMetric<double> build_metric(const ProblemConfig& config);
FinslerSpace<double> build_space(const ProblemConfig& config);

/// Full-coordinate vector with zero h-part.
Vector<double> embed(const ProblemConfig& config, const Vector<double>& m_coords);

}  // namespace flagcurv::cli
