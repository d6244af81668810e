#include "flagcurv/cli/commands.hpp"

#include "flagcurv/berwald.hpp"
#include "flagcurv/cli/render.hpp"
#include "flagcurv/scan.hpp"

#include "json.hpp"

#include <algorithm>
#include <sstream>

namespace flagcurv::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

ordered_json real_json(double x) { return round_real(x); }

ordered_json vector_json(const Vector<double>& v) {
  ordered_json out = ordered_json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(real_json(v(i)));
  return out;
}

ordered_json matrix_columns_json(const Matrix<double>& m) {
  ordered_json out = ordered_json::array();
  for (Index c = 0; c < m.cols(); ++c) out.push_back(vector_json(m.col(c)));
  return out;
}

std::string format_vector(const Vector<double>& v) {
  std::string out = "(";
  for (Index i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_real(v(i));
  return out + ")";
}

std::string dump(const ordered_json& doc) { return doc.dump(2) + "\n"; }

ordered_json header(const char* command, const ProblemConfig& config) {
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = command;
  doc["config"] = config.name;
  return doc;
}

Vector<double> m_part(const ProblemConfig& config, const Vector<double>& full) {
  return full.tail(config.m_dim());
}

/// Config options with command-line overrides applied.
struct Effective {
  SignConvention convention;
  Method method;
  GySource gy_source;
  double fd_step;
  std::int64_t samples;
  std::uint64_t seed;
  CurvatureVariant variant;

  CurvatureOptions curvature() const {
    CurvatureOptions o;
    o.method = method;
    o.convention = convention;
    o.variant = variant;
    o.gy_source = gy_source;
    o.fd_step = fd_step;
    return o;
  }
};

Effective effective(const ProblemConfig& config, const RunOptions& run) {
  const auto& o = config.options;
  Effective e{run.convention.value_or(o.sign_convention),
              run.method.value_or(o.method),
              run.gy_source.value_or(o.gy_source),
              run.fd_step.value_or(o.fd_step),
              run.samples.value_or(o.samples),
              run.seed.value_or(o.seed),
              run.variant};
  if (!(e.fd_step > 0.0)) throw InputError("--fd-step must be positive");
  if (e.samples <= 0) throw InputError("--samples must be positive");
  return e;
}

template <typename Report>
CheckRow defect_row(const std::string& name, const Report& r, bool hard) {
  CheckRow row;
  row.name = name;
  row.ok = r.ok;
  row.hard = hard;
  row.defect = static_cast<double>(r.max_defect);
  if (!r.ok) row.detail = "worst at " + r.location;
  return row;
}

CheckRow not_applicable(const std::string& name, const std::string& why) {
  CheckRow row;
  row.name = name;
  row.applicable = false;
  row.hard = false;
  row.detail = why;
  return row;
}

std::string status(const CheckRow& row) {
  if (!row.applicable) return "n/a";
  if (row.ok) return "ok";
  return row.hard ? "FAIL" : "warn";
}

/// Shared gate of the curvature and scan commands.
void require_valid(const ProblemConfig& config, const RunOptions& run, std::string& errors) {
  const ValidationReport report = validate_config(config);
  if (report.ok()) return;
  std::string list;
  for (const auto& f : report.failures()) list += (list.empty() ? "" : ", ") + f;
  if (!run.force)
    throw PreconditionError("configuration fails validation (" + list +
                            "); run validate for details or pass --force for diagnostics");
  errors += "warning: --force: continuing although validation fails (" + list + ")\n";
}

CommandResult failure(const std::exception& err) {
  CommandResult r;
  r.exit_code = exit_code_for(err);
  r.errors = std::string("error: ") + err.what() + "\n";
  return r;
}

}  // namespace

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckRow& c) { return !c.applicable || !c.hard || c.ok; });
}

std::vector<std::string> ValidationReport::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks)
    if (c.applicable && c.hard && !c.ok) out.push_back(c.name);
  return out;
}

int exit_code_for(const std::exception& err) {
  if (dynamic_cast<const PreconditionError*>(&err) || dynamic_cast<const DomainError*>(&err))
    return kExitPrecondition;
  if (dynamic_cast<const NumericError*>(&err)) return kExitNumeric;
  if (dynamic_cast<const InputError*>(&err) || dynamic_cast<const ValidationError*>(&err) ||
      dynamic_cast<const FlagError*>(&err))
    return kExitValidation;
  return kExitNumeric;
}

ValidationReport validate_config(const ProblemConfig& config) {
  ValidationReport report;
  report.notices = config.notices;
  const Tolerances& tol = config.options.tolerances;
  const auto L = build_algebra(config);
  const ReductiveSplit split = config.split();

  CheckRow jac;
  jac.name = "jacobi";
  jac.defect = jacobi_defect(L);
  jac.ok = jac.defect <= tol.jacobi;
  if (!jac.ok) jac.detail = "bracket does not satisfy the Jacobi identity";
  report.checks.push_back(jac);

  const auto red = check_reductive(L, split, tol.metric);
  CheckRow sub;
  sub.name = "h_subalgebra";
  sub.ok = red.subalgebra_ok;
  CheckRow inv;
  inv.name = "reductive_split";
  inv.ok = red.ad_invariant_ok;
  if (!red.ok()) {
    (red.subalgebra_ok ? inv : sub).defect = static_cast<double>(red.max_defect);
    (red.subalgebra_ok ? inv : sub).detail = "worst at " + red.location;
  }
  report.checks.push_back(sub);
  report.checks.push_back(inv);

  std::optional<InvariantMetric<double>> metric;
  try {
    metric = build_metric(config);
    CheckRow row;
    row.name = "metric";
    report.checks.push_back(row);
  } catch (const ValidationError& err) {
    CheckRow row;
    row.name = "metric";
    row.ok = false;
    row.detail = err.what();
    report.checks.push_back(row);
    return report;
  }

  const FinslerSpace<double> space(L, *metric, embed(config, config.X), tol);
  const auto& checks = space.checks();
  report.checks.push_back(defect_row("g0_bi_invariant", checks.g0_bi_invariance, true));
  report.checks.push_back(defect_row("ad_h_invariant", checks.ad_h_invariance, true));
  report.checks.push_back(defect_row("X_h_invariant", checks.drift_h_invariance, true));
  report.checks.push_back(defect_row("naturally_reductive", checks.naturally_reductive, false));
  if (checks.g_bi_invariance)
    report.checks.push_back(defect_row("g_bi_invariant", *checks.g_bi_invariance, false));
  else
    report.checks.push_back(not_applicable("g_bi_invariant", "h_dim > 0"));

  CheckRow fin;
  fin.name = "finsler";
  fin.ok = checks.finsler.ok;
  fin.defect = checks.finsler.norm_X;
  fin.detail = "||X||_g = " + format_real(checks.finsler.norm_X) + (fin.ok ? " < 1" : " is not < 1");
  report.checks.push_back(fin);

  CheckRow flags;
  flags.name = "flags";
  flags.detail = std::to_string(config.flags.size()) + " flag(s)";
  for (std::size_t n = 0; n < config.flags.size(); ++n) {
    try {
      const auto f = orthonormalize_flag(metric->gram(), embed(config, config.flags[n].Y),
                                         embed(config, config.flags[n].U), tol.dependence);
      (void)f;
    } catch (const FlagError& err) {
      flags.ok = false;
      flags.detail = "flag " + std::to_string(n + 1) + ": " + err.what();
      break;
    }
  }
  report.checks.push_back(flags);

  const Vector<double> X = space.drift();
  if (X.cwiseAbs().maxCoeff() == 0.0) {
    CheckRow row;
    row.name = "berwald_admissible";
    row.detail = "X = 0 (Riemannian)";
    report.checks.push_back(row);
  } else if (split.h_dim > 0) {
    report.checks.push_back(not_applicable("berwald_admissible", "obstructions are checked for h_dim = 0 only"));
  } else {
    const auto ob = berwald_obstructions(L, metric->gram(), X, BerwaldOptions{0, 0}, tol);
    CheckRow row;
    row.name = "berwald_admissible";
    row.ok = ob.berwald_admissible;
    if (ob.perfect) {
      row.detail = "the algebra is perfect ([g,g] = g), so no nonzero left-invariant X is parallel "
                   "and the curvature formula, which needs a Berwald metric, does not apply";
      row.defect = static_cast<double>(ob.drift_bracket_defect);
    } else if (!ob.drift_in_parallel_space) {
      row.detail = "X is not g-orthogonal to [g,g]";
      row.defect = static_cast<double>(ob.drift_bracket_defect);
    } else if (!ob.ad_skew.ok) {
      row.detail = "ad(X) is not skew-adjoint, worst at " + ob.ad_skew.location;
      row.defect = static_cast<double>(ob.ad_skew.max_defect);
    } else {
      row.detail = "X is parallel (Koszul defect " + format_real(static_cast<double>(ob.koszul_parallel.max_defect)) + ")";
    }
    report.checks.push_back(row);
  }
  return report;
}

CommandResult cmd_validate(const ProblemConfig& config, const RunOptions& run) {
  CommandResult result;
  try {
    const ValidationReport report = validate_config(config);
    result.exit_code = report.ok() ? kExitOk : kExitValidation;
    if (run.output == OutputFormat::Json) {
      ordered_json doc = header("validate", config);
      doc["ok"] = report.ok();
      doc["notices"] = report.notices;
      ordered_json rows = ordered_json::array();
      for (const auto& c : report.checks) {
        ordered_json row;
        row["name"] = c.name;
        row["status"] = status(c);
        row["hard"] = c.hard;
        row["defect"] = real_json(c.defect);
        row["detail"] = c.detail;
        rows.push_back(row);
      }
      doc["checks"] = rows;
      result.output = dump(doc);
    } else {
      std::ostringstream os;
      os << "config: " << config.name << "  dim " << config.dim << "  h_dim " << config.h_dim << "\n";
      for (const auto& n : report.notices) os << "note: " << n << "\n";
      TextTable table({"check", "status", "defect", "detail"});
      for (const auto& c : report.checks)
        table.add({c.name, status(c), c.applicable ? format_real(c.defect) : "-", c.detail});
      os << table.str();
      os << (report.ok() ? "valid\n" : "INVALID\n");
      result.output = os.str();
    }
  } catch (const std::exception& err) {
    return failure(err);
  }
  return result;
}

CommandResult cmd_curvature(const ProblemConfig& config, const RunOptions& run) {
  CommandResult result;
  try {
    const Effective eff = effective(config, run);
    if (config.flags.empty()) throw InputError("config has no flags to evaluate");
    require_valid(config, run, result.errors);
    const FinslerSpace<double> space = build_space(config);
    const CurvatureOptions copt = eff.curvature();
    const Tolerances& tol = config.options.tolerances;

    std::vector<std::string> notices = config.notices;
    std::vector<CurvatureReport<double>> reports;
    for (std::size_t n = 0; n < config.flags.size(); ++n) {
      const Flag<double> raw{embed(config, config.flags[n].Y), embed(config, config.flags[n].U)};
      if (orthonormality_defect(space.metric().gram(), raw) > tol.orthonormal)
        notices.push_back("flag " + std::to_string(n + 1) + " re-orthonormalized");
      try {
        reports.push_back(flag_curvature(space, raw, copt));
      } catch (const FlagError& err) {
        throw FlagError("flag " + std::to_string(n + 1) + ": " + err.what());
      }
      const auto& r = reports.back();
      if (r.oracle.sign_mismatch)
        result.errors += "warning: flag " + std::to_string(n + 1) + ": sign mismatch against the " +
                         r.oracle.source + " oracle (URYY " + format_real(r.URYY) + " vs " +
                         format_real(r.oracle.URYY) + ")\n";
    }

    if (run.output == OutputFormat::Json) {
      ordered_json doc = header("curvature", config);
      doc["convention"] = to_string(eff.convention);
      doc["method"] = to_string(eff.method);
      doc["variant"] = to_string(eff.variant);
      doc["gy_source"] = to_string(eff.gy_source);
      doc["forced"] = run.force;
      doc["notices"] = notices;
      ordered_json rows = ordered_json::array();
      for (std::size_t n = 0; n < reports.size(); ++n) {
        const auto& r = reports[n];
        ordered_json row;
        row["index"] = n + 1;
        row["Y"] = vector_json(m_part(config, r.flag.Y));
        row["U"] = vector_json(m_part(config, r.flag.U));
        row["K"] = real_json(r.K);
        row["XRYY"] = real_json(r.XRYY);
        row["URYY"] = real_json(r.URYY);
        row["RYYY"] = real_json(r.RYYY);
        row["numerator"] = real_json(r.numerator);
        row["denominator"] = real_json(r.denominator);
        row["XY"] = real_json(r.XY);
        row["XU"] = real_json(r.XU);
        row["K_definition"] = real_json(r.K_definition);
        row["numerator_identity_defect"] = real_json(r.numerator_identity_defect);
        row["XRYY_term2_g0"] = r.XRYY_term2_g0 ? real_json(*r.XRYY_term2_g0) : ordered_json(nullptr);
        ordered_json oracle;
        oracle["available"] = r.oracle.available;
        oracle["source"] = r.oracle.source;
        oracle["XRYY"] = real_json(r.oracle.XRYY);
        oracle["URYY"] = real_json(r.oracle.URYY);
        oracle["agrees"] = r.oracle.agrees;
        oracle["sign_mismatch"] = r.oracle.sign_mismatch;
        row["oracle"] = oracle;
        rows.push_back(row);
      }
      doc["flags"] = rows;
      result.output = dump(doc);
    } else {
      std::ostringstream os;
      os << "config: " << config.name << "  convention: " << to_string(eff.convention)
         << "  method: " << to_string(eff.method) << "  variant: " << to_string(eff.variant) << "\n";
      for (const auto& n : notices) os << "note: " << n << "\n";
      TextTable table({"flag", "K", "<X,R>", "<U,R>", "<Y,R>", "numerator", "denominator", "<X,Y>",
                       "<X,U>", "K(g_Y)", "oracle"});
      for (std::size_t n = 0; n < reports.size(); ++n) {
        const auto& r = reports[n];
        std::string oracle = "-";
        if (r.oracle.available)
          oracle = r.oracle.source + (r.oracle.agrees ? " ok" : r.oracle.sign_mismatch ? " SIGN" : " DIFF");
        table.add({std::to_string(n + 1), format_real(r.K), format_real(r.XRYY), format_real(r.URYY),
                   format_real(r.RYYY), format_real(r.numerator), format_real(r.denominator),
                   format_real(r.XY), format_real(r.XU), format_real(r.K_definition), oracle});
      }
      os << table.str();
      result.output = os.str();
    }
  } catch (const std::exception& err) {
    auto f = failure(err);
    f.errors = result.errors + f.errors;
    return f;
  }
  return result;
}

CommandResult cmd_scan(const ProblemConfig& config, const RunOptions& run) {
  CommandResult result;
  try {
    const Effective eff = effective(config, run);
    require_valid(config, run, result.errors);
    const FinslerSpace<double> space = build_space(config);
    const auto s = scan_flags(space, eff.curvature(), eff.samples, eff.seed);

    if (run.output == OutputFormat::Json) {
      ordered_json doc = header("scan", config);
      doc["convention"] = to_string(eff.convention);
      doc["method"] = to_string(eff.method);
      doc["variant"] = to_string(eff.variant);
      doc["samples"] = s.samples;
      doc["seed"] = eff.seed;
      doc["min_K"] = real_json(s.min_K);
      doc["max_K"] = real_json(s.max_K);
      doc["mean_K"] = real_json(s.mean_K);
      auto flag_json = [&](std::int64_t index, const Flag<double>& f) {
        ordered_json j;
        j["sample"] = index;
        j["Y"] = vector_json(m_part(config, f.Y));
        j["U"] = vector_json(m_part(config, f.U));
        return j;
      };
      doc["argmin"] = flag_json(s.argmin, s.argmin_flag);
      doc["argmax"] = flag_json(s.argmax, s.argmax_flag);
      result.output = dump(doc);
    } else {
      std::ostringstream os;
      os << "config: " << config.name << "  convention: " << to_string(eff.convention)
         << "  method: " << to_string(eff.method) << "  samples: " << s.samples
         << "  seed: " << eff.seed << "\n";
      TextTable table({"statistic", "K", "sample", "Y", "U"});
      table.add({"min", format_real(s.min_K), std::to_string(s.argmin),
                 format_vector(m_part(config, s.argmin_flag.Y)), format_vector(m_part(config, s.argmin_flag.U))});
      table.add({"max", format_real(s.max_K), std::to_string(s.argmax),
                 format_vector(m_part(config, s.argmax_flag.Y)), format_vector(m_part(config, s.argmax_flag.U))});
      table.add({"mean", format_real(s.mean_K), "-", "-", "-"});
      os << table.str();
      result.output = os.str();
    }
  } catch (const std::exception& err) {
    auto f = failure(err);
    f.errors = result.errors + f.errors;
    return f;
  }
  return result;
}

CommandResult cmd_berwald(const ProblemConfig& config, const RunOptions& run) {
  CommandResult result;
  try {
    const Effective eff = effective(config, run);
    if (config.h_dim != 0) throw PreconditionError("berwald: obstructions are implemented for h_dim = 0 only");
    const auto L = build_algebra(config);
    const auto metric = build_metric(config);
    const Vector<double> X = embed(config, config.X);
    const auto ob = berwald_obstructions(L, metric.gram(), X, BerwaldOptions{eff.samples, eff.seed},
                                         config.options.tolerances);

    if (run.output == OutputFormat::Json) {
      ordered_json doc = header("berwald", config);
      doc["X"] = vector_json(config.X);
      doc["perfect"] = ob.perfect;
      doc["parallel_space"] = matrix_columns_json(ob.parallel_space);
      doc["admissible_space"] = matrix_columns_json(ob.admissible_space);
      doc["drift_bracket_defect"] = real_json(ob.drift_bracket_defect);
      doc["drift_in_parallel_space"] = ob.drift_in_parallel_space;
      doc["ad_skew"] = {{"ok", ob.ad_skew.ok},
                        {"defect", real_json(ob.ad_skew.max_defect)},
                        {"location", ob.ad_skew.location}};
      doc["berwald_admissible"] = ob.berwald_admissible;
      doc["koszul_parallel"] = {{"ok", ob.koszul_parallel.ok},
                                {"defect", real_json(ob.koszul_parallel.max_defect)},
                                {"location", ob.koszul_parallel.location}};
      doc["riemannian"] = ob.riemannian;
      if (ob.sectional) {
        const auto& s = *ob.sectional;
        ordered_json sec;
        sec["samples"] = s.samples;
        sec["seed"] = eff.seed;
        sec["min_K"] = real_json(s.min_K);
        sec["max_K"] = real_json(s.max_K);
        sec["negative_count"] = s.negative_count;
        sec["printed_condition_consistent"] = s.printed_condition_consistent;
        sec["milnor_condition_consistent"] = s.milnor_condition_consistent;
        sec["ok"] = s.ok;
        ordered_json wit = ordered_json::array();
        for (const auto& w : s.witnesses) {
          ordered_json j;
          j["kind"] = w.kind;
          j["u"] = vector_json(w.u);
          j["K"] = real_json(w.K);
          j["u_orthogonal_to_image_X"] = w.u_orthogonal_to_image_X;
          j["X_orthogonal_to_image_u"] = w.X_orthogonal_to_image_u;
          wit.push_back(j);
        }
        sec["witnesses"] = wit;
        doc["sectional_along_X"] = sec;
      } else {
        doc["sectional_along_X"] = nullptr;
      }
      result.output = dump(doc);
    } else {
      std::ostringstream os;
      auto yes = [](bool b) { return b ? "yes" : "no"; };
      os << "config: " << config.name << "  X = " << format_vector(config.X) << "\n";
      TextTable table({"property", "value", "defect", "detail"});
      table.add({"perfect algebra", yes(ob.perfect), "-", ""});
      table.add({"parallel space dim", std::to_string(ob.parallel_space.cols()), "-", "{x : g(x,[g,g]) = 0}"});
      table.add({"admissible space dim", std::to_string(ob.admissible_space.cols()), "-", "ad(x) also skew"});
      table.add({"X in parallel space", yes(ob.drift_in_parallel_space), format_real(ob.drift_bracket_defect), ""});
      table.add({"ad(X) skew-adjoint", yes(ob.ad_skew.ok), format_real(ob.ad_skew.max_defect),
                 ob.ad_skew.ok ? "" : ob.ad_skew.location});
      table.add({"berwald admissible", yes(ob.berwald_admissible), "-", ""});
      table.add({"X parallel (Koszul)", yes(ob.koszul_parallel.ok), format_real(ob.koszul_parallel.max_defect),
                 ob.koszul_parallel.ok ? "" : ob.koszul_parallel.location});
      if (ob.sectional) {
        const auto& s = *ob.sectional;
        table.add({"K(X,u) min", format_real(s.min_K), "-", std::to_string(s.samples) + " samples"});
        table.add({"K(X,u) max", format_real(s.max_K), "-", ""});
        table.add({"K(X,u) < 0 count", std::to_string(s.negative_count), "-", ""});
        table.add({"equality: X _|_ [u,g]", yes(s.milnor_condition_consistent), "-", ""});
        table.add({"equality: u _|_ [X,g]", yes(s.printed_condition_consistent), "-", ""});
      }
      os << table.str();
      result.output = os.str();
    }
  } catch (const std::exception& err) {
    return failure(err);
  }
  return result;
}

CommandResult run_command(const std::string& command, const std::string& path, const RunOptions& run) {
  ProblemConfig config;
  try {
    config = parse_config_file(path);
  } catch (const std::exception& err) {
    CommandResult r;
    r.exit_code = kExitValidation;
    r.errors = std::string("error: ") + err.what() + "\n";
    return r;
  }
  if (command == "validate") return cmd_validate(config, run);
  if (command == "curvature") return cmd_curvature(config, run);
  if (command == "scan") return cmd_scan(config, run);
  if (command == "berwald") return cmd_berwald(config, run);
  CommandResult r;
  r.exit_code = kExitUsage;
  r.errors = "error: unknown command '" + command + "'\n";
  return r;
}

}  // namespace flagcurv::cli
