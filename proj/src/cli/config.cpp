#include "flagcurv/cli/config.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace flagcurv::cli {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    throw InputError(source_ + ": field " + (path.empty() ? "/" : path) + ": " + what);
  }

  void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) const {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : obj.items()) {
      bool known = false;
      for (const char* k : keys) known = known || key == k;
      if (!known) fail(path + "/" + key, "unknown field");
    }
  }

  double real(const json& v, const std::string& path) const {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
  }

  std::int64_t integer(const json& v, const std::string& path) const {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<std::int64_t>(d);
    }
    fail(path, "expected an integer");
  }

  std::string string(const json& v, const std::string& path) const {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
  }

  Vector<double> vector(const json& v, const std::string& path, Index n) const {
    if (!v.is_array()) fail(path, "expected an array of " + std::to_string(n) + " numbers");
    if (static_cast<Index>(v.size()) != n)
      fail(path, "expected length " + std::to_string(n) + ", got " + std::to_string(v.size()));
    Vector<double> out(n);
    for (Index i = 0; i < n; ++i) out(i) = real(v[static_cast<std::size_t>(i)], path + "/" + std::to_string(i));
    return out;
  }

  Matrix<double> matrix(const json& v, const std::string& path, Index n) const {
    if (!v.is_array() || static_cast<Index>(v.size()) != n)
      fail(path, "expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix (array of rows)");
    Matrix<double> out(n, n);
    for (Index r = 0; r < n; ++r)
      out.row(r) = vector(v[static_cast<std::size_t>(r)], path + "/" + std::to_string(r), n).transpose();
    return out;
  }

 private:
  std::string source_;
};

std::string describe(const StructureEntry& e) {
  std::ostringstream os;
  os << "(" << e.i << "," << e.j << "," << e.k << "," << e.value << ")";
  return os.str();
}

void read_tolerances(const Reader& rd, const json& t, const std::string& path, Tolerances& tol) {
  rd.only_keys(t, path, {"jacobi", "rank", "metric", "oracle", "boundary", "fd", "dependence", "orthonormal"});
  auto set = [&](const char* key, double& field) {
    if (!t.contains(key)) return;
    field = rd.real(t[key], path + "/" + key);
    if (!(field > 0.0)) rd.fail(path + "/" + key, "tolerance must be positive");
  };
  set("jacobi", tol.jacobi);
  set("rank", tol.rank);
  set("metric", tol.metric);
  set("oracle", tol.oracle);
  set("boundary", tol.boundary);
  set("fd", tol.fd);
  set("dependence", tol.dependence);
  set("orthonormal", tol.orthonormal);
}

void read_options(const Reader& rd, const json& o, ConfigOptions& opt) {
  const std::string path = "/options";
  rd.only_keys(o, path, {"sign_convention", "method", "gy_source", "fd_step", "tolerances", "seed", "samples"});
  try {
    if (o.contains("sign_convention"))
      opt.sign_convention = parse_convention(rd.string(o["sign_convention"], path + "/sign_convention"));
    if (o.contains("method")) opt.method = parse_method(rd.string(o["method"], path + "/method"));
    if (o.contains("gy_source")) opt.gy_source = parse_gy_source(rd.string(o["gy_source"], path + "/gy_source"));
  } catch (const InputError& err) {
    rd.fail(path, err.what());
  }
  if (o.contains("fd_step")) {
    opt.fd_step = rd.real(o["fd_step"], path + "/fd_step");
    if (!(opt.fd_step > 0.0)) rd.fail(path + "/fd_step", "must be positive");
  }
  if (o.contains("seed")) {
    if (o["seed"].is_number_unsigned()) {
      opt.seed = o["seed"].get<std::uint64_t>();
    } else {
      const auto s = rd.integer(o["seed"], path + "/seed");
      if (s < 0) rd.fail(path + "/seed", "must be non-negative");
      opt.seed = static_cast<std::uint64_t>(s);
    }
  }
  if (o.contains("samples")) {
    opt.samples = rd.integer(o["samples"], path + "/samples");
    if (opt.samples <= 0) rd.fail(path + "/samples", "must be positive");
  }
  if (o.contains("tolerances")) read_tolerances(rd, o["tolerances"], path + "/tolerances", opt.tolerances);
}

/// Checks indices and records notices for entries that the antisymmetric
/// normalization changes.
void normalize_entries(const Reader& rd, ProblemConfig& c) {
  using Key = std::tuple<int, int, int>;
  std::map<Key, double> given;
  for (std::size_t n = 0; n < c.structure_constants.size(); ++n) {
    const auto& e = c.structure_constants[n];
    const std::string path = "/structure_constants/" + std::to_string(n);
    for (int idx : {e.i, e.j, e.k})
      if (idx < 1 || idx > c.dim)
        rd.fail(path, "entry " + describe(e) + " has index " + std::to_string(idx) +
                          " out of range [1," + std::to_string(c.dim) + "]");
    if (!given.emplace(Key{e.i, e.j, e.k}, e.value).second)
      rd.fail(path, "entry " + describe(e) + " repeats an earlier (i,j,k)");
    if (e.i == e.j && e.value != 0.0)
      c.notices.push_back("structure constant " + describe(e) + " has i = j; antisymmetry sets it to 0");
  }
  for (const auto& [key, v] : given) {
    const auto [i, j, k] = key;
    if (i >= j) continue;
    const auto mirror = given.find(Key{j, i, k});
    if (mirror != given.end() && mirror->second != -v) {
      std::ostringstream os;
      os << "structure constants c_" << i << j << "^" << k << " = " << v << " and c_" << j << i
         << "^" << k << " = " << mirror->second << " are not antisymmetric; using "
         << 0.5 * (v - mirror->second);
      c.notices.push_back(os.str());
    }
  }
}

ordered_json vector_json(const Vector<double>& v) {
  ordered_json out = ordered_json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

ordered_json matrix_json(const Matrix<double>& m) {
  ordered_json out = ordered_json::array();
  for (Index r = 0; r < m.rows(); ++r) out.push_back(vector_json(m.row(r).transpose()));
  return out;
}

bool same(const Matrix<double>& a, const Matrix<double>& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

}  // namespace

Method parse_method(const std::string& s) {
  if (s == "general") return Method::General;
  if (s == "naturally-reductive") return Method::NaturallyReductive;
  if (s == "bi-invariant") return Method::BiInvariant;
  throw InputError("unknown method '" + s + "' (general, naturally-reductive, bi-invariant)");
}

SignConvention parse_convention(const std::string& s) {
  if (s == "oracle-aligned") return SignConvention::OracleAligned;
  if (s == "paper-verbatim") return SignConvention::Transcribed;
  throw InputError("unknown sign convention '" + s + "' (oracle-aligned, paper-verbatim)");
}

GySource parse_gy_source(const std::string& s) {
  if (s == "closed") return GySource::Closed;
  if (s == "fd") return GySource::Fd;
  throw InputError("unknown g_Y source '" + s + "' (closed, fd)");
}

CurvatureVariant parse_variant(const std::string& s) {
  if (s == "statement") return CurvatureVariant::Statement;
  if (s == "proof") return CurvatureVariant::Proof;
  throw InputError("unknown variant '" + s + "' (statement, proof)");
}

bool operator==(const ProblemConfig& a, const ProblemConfig& b) {
  if (a.name != b.name || a.dim != b.dim || a.h_dim != b.h_dim) return false;
  if (a.structure_constants != b.structure_constants) return false;
  if (!same(a.g0, b.g0) || !same(a.phi, b.phi) || !same(a.X, b.X)) return false;
  if (a.flags.size() != b.flags.size()) return false;
  for (std::size_t n = 0; n < a.flags.size(); ++n)
    if (!same(a.flags[n].Y, b.flags[n].Y) || !same(a.flags[n].U, b.flags[n].U)) return false;
  const auto& p = a.options;
  const auto& q = b.options;
  return p.sign_convention == q.sign_convention && p.method == q.method &&
         p.gy_source == q.gy_source && p.fd_step == q.fd_step && p.tolerances == q.tolerances &&
         p.seed == q.seed && p.samples == q.samples;
}

ProblemConfig parse_config_text(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(err.byte > 0 ? err.byte - 1 : 0, text.size());
    for (std::size_t n = 0; n < end; ++n) {
      if (text[n] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = err.what();
    const auto colon = what.find("syntax error");
    if (colon != std::string::npos) what = what.substr(colon);
    throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
  }

  const Reader rd(source);
  rd.only_keys(doc, "", {"name", "dim", "h_dim", "structure_constants", "g0", "phi", "X", "flags", "options"});
  ProblemConfig c;
  c.name = doc.contains("name") ? rd.string(doc["name"], "/name") : std::string("unnamed");
  if (!doc.contains("dim")) rd.fail("/dim", "required field missing");
  c.dim = rd.integer(doc["dim"], "/dim");
  if (c.dim < 1) rd.fail("/dim", "must be at least 1");
  c.h_dim = doc.contains("h_dim") ? rd.integer(doc["h_dim"], "/h_dim") : 0;
  if (c.h_dim < 0 || c.h_dim > c.dim) rd.fail("/h_dim", "must lie in [0, dim]");
  const Index m = c.m_dim();

  if (!doc.contains("structure_constants")) rd.fail("/structure_constants", "required field missing");
  const json& sc = doc["structure_constants"];
  if (!sc.is_array()) rd.fail("/structure_constants", "expected an array of [i, j, k, value] entries");
  for (std::size_t n = 0; n < sc.size(); ++n) {
    const std::string path = "/structure_constants/" + std::to_string(n);
    if (!sc[n].is_array() || sc[n].size() != 4) rd.fail(path, "expected [i, j, k, value]");
    StructureEntry e;
    e.i = static_cast<int>(rd.integer(sc[n][0], path + "/0"));
    e.j = static_cast<int>(rd.integer(sc[n][1], path + "/1"));
    e.k = static_cast<int>(rd.integer(sc[n][2], path + "/2"));
    e.value = rd.real(sc[n][3], path + "/3");
    c.structure_constants.push_back(e);
  }
  normalize_entries(rd, c);

  c.g0 = doc.contains("g0") ? rd.matrix(doc["g0"], "/g0", c.dim) : Matrix<double>::Identity(c.dim, c.dim);
  c.phi = doc.contains("phi") ? rd.matrix(doc["phi"], "/phi", m) : Matrix<double>::Identity(m, m);
  c.X = doc.contains("X") ? rd.vector(doc["X"], "/X", m) : Vector<double>::Zero(m);

  if (doc.contains("flags")) {
    const json& fl = doc["flags"];
    if (!fl.is_array()) rd.fail("/flags", "expected an array of {\"Y\": [...], \"U\": [...]}");
    for (std::size_t n = 0; n < fl.size(); ++n) {
      const std::string path = "/flags/" + std::to_string(n);
      rd.only_keys(fl[n], path, {"Y", "U"});
      if (!fl[n].contains("Y") || !fl[n].contains("U")) rd.fail(path, "flag needs both Y and U");
      c.flags.push_back({rd.vector(fl[n]["Y"], path + "/Y", m), rd.vector(fl[n]["U"], path + "/U", m)});
    }
  }
  if (doc.contains("options")) read_options(rd, doc["options"], c.options);
  return c;
}

ProblemConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::string serialize_config(const ProblemConfig& c) {
  ordered_json doc;
  doc["name"] = c.name;
  doc["dim"] = c.dim;
  doc["h_dim"] = c.h_dim;
  ordered_json sc = ordered_json::array();
  for (const auto& e : c.structure_constants) sc.push_back(ordered_json::array({e.i, e.j, e.k, e.value}));
  doc["structure_constants"] = sc;
  doc["g0"] = matrix_json(c.g0);
  doc["phi"] = matrix_json(c.phi);
  doc["X"] = vector_json(c.X);
  ordered_json flags = ordered_json::array();
  for (const auto& f : c.flags) {
    ordered_json one;
    one["Y"] = vector_json(f.Y);
    one["U"] = vector_json(f.U);
    flags.push_back(one);
  }
  doc["flags"] = flags;
  const auto& o = c.options;
  ordered_json opt;
  opt["sign_convention"] = to_string(o.sign_convention);
  opt["method"] = to_string(o.method);
  opt["gy_source"] = to_string(o.gy_source);
  opt["fd_step"] = o.fd_step;
  opt["seed"] = o.seed;
  opt["samples"] = o.samples;
  const auto& t = o.tolerances;
  opt["tolerances"] = {{"jacobi", t.jacobi},   {"rank", t.rank},         {"metric", t.metric},
                       {"oracle", t.oracle},   {"boundary", t.boundary}, {"fd", t.fd},
                       {"dependence", t.dependence}, {"orthonormal", t.orthonormal}};
  doc["options"] = opt;
  return doc.dump(2) + "\n";
}

LieAlgebra<double> build_algebra(const ProblemConfig& c) {
  StructureTensor<double> tensor(c.dim);
  for (const auto& e : c.structure_constants) tensor(e.i - 1, e.j - 1, e.k - 1) = e.value;
  // Unpaired entries get their antisymmetric partner before normalization.
  for (const auto& e : c.structure_constants) {
    const bool mirrored = std::any_of(c.structure_constants.begin(), c.structure_constants.end(),
                                      [&](const StructureEntry& f) {
                                        return f.i == e.j && f.j == e.i && f.k == e.k;
                                      });
    if (!mirrored) tensor(e.j - 1, e.i - 1, e.k - 1) = -e.value;
  }
  return LieAlgebra<double>(tensor);
}

InvariantMetric<double> build_metric(const ProblemConfig& c) {
  return inner_from_phi<double>(c.g0, c.phi, c.split(), c.options.tolerances.metric);
}

Vector<double> embed(const ProblemConfig& c, const Vector<double>& m_coords) {
  return embed_m(c.split(), m_coords);
}

FinslerSpace<double> build_space(const ProblemConfig& c) {
  return FinslerSpace<double>(build_algebra(c), build_metric(c), embed(c, c.X), c.options.tolerances);
}

}  // namespace flagcurv::cli
