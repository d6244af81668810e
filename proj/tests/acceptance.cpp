#include "flagcurv/cli/commands.hpp"
#include "support/fixtures.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace flagcurv;
using namespace flagcurv::cli;
using namespace flagcurv::testing;

namespace {

ProblemConfig load(const char* name) {
  return parse_config_file(std::string(FLAGCURV_CONFIG_DIR) + "/" + name + ".json");
}

Flag<double> config_flag(const ProblemConfig& c, std::size_t n) {
  return {embed(c, c.flags[n].Y), embed(c, c.flags[n].U)};
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

CurvatureOptions options(Method m, SignConvention s = SignConvention::OracleAligned) {
  CurvatureOptions o;
  o.method = m;
  o.convention = s;
  return o;
}

/// Collects named checks for one criterion and renders a single detail line.
class Criterion {
 public:
  void near(const std::string& what, double got, double want, double tol) {
    const double err = std::abs(got - want);
    record(err <= tol, what + "=" + format(got) + " (want " + format(want) + ", err " + format(err) + ")");
  }
  void at_most(const std::string& what, double got, double bound) {
    record(got <= bound, what + "=" + format(got) + " <= " + format(bound));
  }
  void expect(bool ok, const std::string& what) { record(ok, what); }
  bool ok() const { return ok_; }
  const std::string& detail() const { return ok_ ? summary_ : failures_; }
  void note(const std::string& text) { summary_ += (summary_.empty() ? "" : "; ") + text; }

 private:
  static std::string format(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
  }
  void record(bool ok, const std::string& text) {
    if (!ok) {
      ok_ = false;
      failures_ += (failures_.empty() ? "" : "; ") + text;
    }
  }

  bool ok_ = true;
  std::string summary_;
  std::string failures_;
};

void ac1(Criterion& c) {
  const ProblemConfig cfg = load("su2");
  const FinslerSpace<double> space = build_space(cfg);
  const Flag<double> flag{e(3, 0), e(3, 1)};
  for (Method m : {Method::General, Method::NaturallyReductive, Method::BiInvariant})
    c.near(std::string("K[") + to_string(m) + "]", flag_curvature(space, flag, options(m)).K, 0.25, 1e-10);
  const auto scan = scan_flags(space, options(Method::General), 1000, cfg.options.seed);
  c.at_most("scan max-min", scan.max_K - scan.min_K, 1e-9);
  c.near("scan mean", scan.mean_K, 0.25, 1e-9);
  c.note("K = 0.25 for every method; 1000-flag scan spread " + sci(scan.max_K - scan.min_K));
}

void ac2(Criterion& c) {
  const ProblemConfig cfg = load("su2_u1");
  const FinslerSpace<double> space = build_space(cfg);
  std::mt19937_64 rng(2);
  double worst = 0.0;
  for (int n = 0; n < 50; ++n) {
    const Flag<double> flag{embed(cfg, random_vector(2, rng)), embed(cfg, random_vector(2, rng))};
    for (Method m : {Method::General, Method::NaturallyReductive})
      worst = std::max(worst, std::abs(flag_curvature(space, flag, options(m)).K - 1.0));
  }
  for (std::size_t n = 0; n < cfg.flags.size(); ++n)
    worst = std::max(worst, std::abs(flag_curvature(space, config_flag(cfg, n)).K - 1.0));
  c.at_most("max |K-1|", worst, 1e-10);
  c.note("K = 1 on 100 random flags (general and naturally-reductive), max err " + sci(worst));
}

void ac3(Criterion& c) {
  const ProblemConfig cfg = load("su2_r");
  const FinslerSpace<double> space = build_space(cfg);
  const Flag<double> flag = config_flag(cfg, 0);
  const auto r = flag_curvature(space, flag, options(Method::General));
  c.near("<X,Y>", r.XY, 0.0, 1e-12);
  c.near("<X,U>", r.XU, 1.0 / (2.0 * std::sqrt(2.0)), 1e-12);
  c.near("XRYY", r.XRYY, 0.0, 1e-12);
  c.near("URYY", r.URYY, 0.125, 1e-12);
  c.near("numerator", r.numerator, 0.125, 1e-12);
  c.near("denominator", r.denominator, 1.25, 1e-12);
  c.near("K", r.K, 0.1, 1e-9);

  const LieAlgebra<double> L = build_algebra(cfg);
  const Vec& X = cfg.X;
  const Vec& Y = r.flag.Y;
  const Vec& U = r.flag.U;
  const Vec dd = bracket(L, Y, Vec(bracket(L, U, Y)));
  const double xy = X.dot(Y), xu = X.dot(U);
  const double num = 6.0 * X.dot(dd) * xu + U.dot(dd) * (1.0 - xy * xy);
  const double den = 4.0 * std::pow(1.0 + xy, 4) * (2.0 * xu * xu - xy * xy + 1.0);
  c.near("<U,[Y,[U,Y]]>", U.dot(dd), 0.5, 1e-12);
  c.near("double-bracket numerator", num, 0.5, 1e-12);
  c.near("double-bracket denominator", den, 5.0, 1e-12);
  c.near("double-bracket K", num / den, 0.1, 1e-9);

  for (Method m : {Method::NaturallyReductive, Method::BiInvariant})
    c.near(std::string("K[") + to_string(m) + "] - K[general]", flag_curvature(space, flag, options(m)).K,
           r.K, 1e-9);
  c.expect(r.oracle.available && r.oracle.agrees, "Koszul oracle agrees");
  c.note("K = 0.1; general-formula URYY = numerator = 1/8 over 1.25; double-bracket form <U,[Y,[U,Y]]> = numerator = 1/2 over 5");
}

struct RandomCase {
  FinslerSpace<double> space;
  Flag<double> flag;
};

std::vector<RandomCase> random_cases(int count) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> norm(0.0, 0.8);
  std::vector<RandomCase> out;
  while (static_cast<int>(out.size()) < count) {
    const CompactAlgebra ca = random_compact_algebra(rng);
    const Index n = ca.algebra.dim();
    const Mat S = random_spd(n, rng);
    const Mat phi = ca.g0.ldlt().solve(S);
    const auto metric = inner_from_phi<double>(ca.g0, phi, ReductiveSplit(n, 0));
    const Vec X = scaled_to(random_vector(n, rng), metric.gram(), norm(rng));
    FinslerSpace<double> space(ca.algebra, metric, X);
    if (!space.checks().structure_ok() || !space.checks().finsler.ok) continue;
    const Flag<double> flag{random_vector(n, rng), random_vector(n, rng)};
    out.push_back({std::move(space), flag});
  }
  return out;
}

void ac4(Criterion& c, const std::vector<RandomCase>& cases) {
  const auto start = std::chrono::steady_clock::now();
  double worst_rel = 0.0, worst_euler = 0.0;
  std::mt19937_64 rng(5);
  for (const auto& rc : cases) {
    const FinslerData<double> d = rc.space.finsler();
    const FinslerData<long double> w = d.cast<long double>();
    const Index n = d.gram.rows();
    const Vec Y = rc.flag.Y;
    const Vec vs[3] = {Y, random_vector(n, rng), random_vector(n, rng)};
    for (const Vec& u : vs)
      for (const Vec& v : vs) {
        const long double fd = g_Y_fd<long double>(w, Y.cast<long double>(), u.cast<long double>(),
                                                   v.cast<long double>(), 1e-5L);
        const double closed = g_Y_closed<double>(d, Y, u, v);
        worst_rel = std::max(worst_rel, static_cast<double>(std::abs(closed - fd) /
                                                            std::max(1.0L, std::abs(fd))));
      }
    const double F = F_eval<double>(d, Y);
    worst_euler = std::max(worst_euler, std::abs(g_Y_closed<double>(d, Y, Y, Y) - F * F));
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(cases.size() >= 100, "at least 100 configurations");
  c.at_most("closed vs FD relative error", worst_rel, 1e-6);
  c.at_most("Euler identity", worst_euler, 1e-8);
  c.at_most("runtime seconds", seconds, 5.0);
  std::ostringstream os;
  os << cases.size() << " configs, worst g_Y rel err " << worst_rel << ", Euler " << worst_euler << ", "
     << seconds << " s";
  c.note(os.str());
}

void ac5(Criterion& c, const std::vector<RandomCase>& cases) {
  double worst = 0.0;
  for (const auto& rc : cases) {
    const FinslerData<double> d = rc.space.finsler();
    const Flag<double> flag = orthonormalize_flag(d.gram, rc.flag.Y, rc.flag.U, 1e-10);
    worst = std::max(worst, denominator_identity(d, flag).defect);
  }
  c.at_most("denominator identity defect", worst, 1e-9);
  c.note(std::to_string(cases.size()) + " flags, worst defect " + sci(worst));
}

void ac6(Criterion& c, const std::vector<RandomCase>& cases) {
  double worst = 0.0, worst_ry = 0.0;
  for (const auto& rc : cases) {
    const FinslerData<double> d = rc.space.finsler();
    const Flag<double> flag = orthonormalize_flag(d.gram, rc.flag.Y, rc.flag.U, 1e-10);
    const auto conn = koszul_connection(rc.space.algebra(), d.gram);
    const Vec R = curvature(conn, rc.space.algebra(), flag.U, flag.Y, flag.Y);
    worst = std::max(worst, numerator_identity_check(d, flag, R).defect);
    worst_ry = std::max(worst_ry, std::abs(d.inner(R, flag.Y)));
  }
  c.at_most("numerator identity defect", worst, 1e-9);
  c.at_most("|<R(U,Y)Y,Y>|", worst_ry, 1e-10);
  std::ostringstream os;
  os << "Koszul R on " << cases.size() << " flags, worst defect " << worst << ", |<R,Y>| " << worst_ry;
  c.note(os.str());
}

void ac7(Criterion& c) {
  const FinslerSpace<double> space = build_space(load("su2"));
  const Flag<double> flag{e(3, 0), e(3, 1)};
  const auto verbatim = flag_curvature(space, flag, options(Method::General, SignConvention::Transcribed));
  const auto aligned = flag_curvature(space, flag, options(Method::General, SignConvention::OracleAligned));
  c.near("verbatim URYY", verbatim.URYY, -0.25, 1e-12);
  c.near("oracle URYY", verbatim.oracle.URYY, 0.25, 1e-12);
  c.expect(verbatim.oracle.sign_mismatch, "sign mismatch flagged");
  c.expect(!aligned.oracle.sign_mismatch, "no mismatch when oracle-aligned");
  c.expect(verbatim.URYY == -aligned.URYY && verbatim.XRYY == -aligned.XRYY &&
               verbatim.RYYY == -aligned.RYYY && verbatim.K == -aligned.K,
           "exact negatives");
  c.note("paper-verbatim URYY = -0.25 vs oracle +0.25, mismatch flagged, exact negatives");
}

void ac8(Criterion& c) {
  const Mat I3 = Mat::Identity(3, 3);
  std::mt19937_64 rng(8);
  for (int n = 0; n < 20; ++n) {
    const Vec X = scaled_to(random_vector(3, rng), I3, 0.5);
    const auto r = berwald_obstructions(su2(), I3, X);
    c.expect(r.perfect && !r.berwald_admissible && r.parallel_space.cols() == 0, "su(2) obstructed");
  }
  ProblemConfig su2_drift = load("su2");
  su2_drift.X = 0.3 * e(3, 2);
  RunOptions json;
  json.output = OutputFormat::Json;
  const CommandResult cli = cmd_berwald(su2_drift, json);
  c.expect(cli.exit_code == kExitOk && cli.output.find("\"berwald_admissible\": false") != std::string::npos &&
               cli.output.find("\"parallel_space\": []") != std::string::npos,
           "cmd_berwald on su(2) reports not admissible with parallel_space {0}");

  const LieAlgebra<double> H = heisenberg();
  const auto heis = berwald_obstructions(H, I3, Vec(0.5 * e(3, 0)));
  const Mat P = heis.parallel_space;
  c.expect(P.cols() == 2 && P.row(2).cwiseAbs().maxCoeff() < 1e-12, "Heisenberg parallel space = span{e1,e2}");
  for (int n = 0; n < 20; ++n) {
    const Vec X = scaled_to(P * random_vector(2, rng), I3, 0.5);
    const auto r = berwald_obstructions(H, I3, X);
    c.expect(r.drift_in_parallel_space && !r.ad_skew.ok && !r.berwald_admissible,
             "Heisenberg ad-skew fails on the parallel space");
  }

  const auto sr = berwald_obstructions(su2_plus_r(), Mat(Mat::Identity(4, 4)), Vec(0.5 * e(4, 3)));
  c.expect(sr.berwald_admissible, "su(2)+R admissible");
  c.at_most("su(2)+R Koszul parallel defect", sr.koszul_parallel.max_defect, 1e-10);
  c.note("su(2) obstructed for 20 drifts; Heisenberg parallel space dim 2, ad-skew fails; su(2)+R admissible");
}

void ac9(Criterion& c) {
  const LieAlgebra<double> L = su2_plus_r();
  const Vec X = 0.5 * e(4, 3);
  BerwaldOptions opt;
  opt.samples = 1000;
  opt.seed = 9;
  const auto r = berwald_obstructions(L, Mat(Mat::Identity(4, 4)), X, opt);
  c.expect(r.sectional.has_value(), "sectional report present");
  if (!r.sectional) return;
  const auto& s = *r.sectional;
  c.expect(s.samples == 1000, "1000 samples");
  c.at_most("max |K(X,u)|", std::max(std::abs(s.min_K), std::abs(s.max_K)), 1e-10);
  c.expect(s.negative_count == 0, "no negative samples");
  c.at_most("|[X,g]|", L.ad(X).cwiseAbs().maxCoeff(), 0.0);
  c.expect(s.printed_condition_consistent && s.milnor_condition_consistent, "equality condition consistent");
  c.note("1000 samples of K(X,u) all 0, image [X,g] = {0}");
}

void ac10(Criterion& c) {
  RunOptions json;
  json.output = OutputFormat::Json;
  for (const char* name : {"su2", "su2_r"}) {
    const ProblemConfig cfg = load(name);
    const CommandResult a = cmd_scan(cfg, json);
    const CommandResult b = cmd_scan(cfg, json);
    c.expect(a.exit_code == kExitOk && !a.output.empty(), std::string(name) + " scan succeeds");
    c.expect(a.output == b.output, std::string(name) + " scan output byte-identical");
  }
  c.note("two in-process scans byte-identical for su2 and su2_r");
}

}  // namespace

int main() {
  int failed = 0;
  auto run = [&](const char* id, const std::function<void(Criterion&)>& body) {
    Criterion c;
    try {
      body(c);
    } catch (const std::exception& err) {
      c.expect(false, std::string("exception: ") + err.what());
    }
    std::printf("%-6s %s  %s\n", id, c.ok() ? "PASS" : "FAIL", c.detail().c_str());
    if (!c.ok()) ++failed;
  };

  const std::vector<RandomCase> cases = random_cases(120);
  run("AC-1", ac1);
  run("AC-2", ac2);
  run("AC-3", ac3);
  run("AC-4", [&](Criterion& c) { ac4(c, cases); });
  run("AC-5", [&](Criterion& c) { ac5(c, cases); });
  run("AC-6", [&](Criterion& c) { ac6(c, cases); });
  run("AC-7", ac7);
  run("AC-8", ac8);
  run("AC-9", ac9);
  run("AC-10", ac10);
  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
