#pragma once

#include "flagcurv/finsler.hpp"
#include "flagcurv/riemann.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace flagcurv {

/// paper-verbatim: the bracket contractions exactly as transcribed.
/// oracle-aligned: the same contractions times the global sign that makes
/// them equal <Z, R(U,Y)Y> under R(U,V) = [∇_U, ∇_V] - ∇_[U,V].
enum class SignConvention { OracleAligned, Transcribed };

/// general: bracket contractions with phi and phi^{-1} (any invariant metric).
/// naturally-reductive: R(U,Y)Y = 1/4 [Y,[U,Y]_m]_m + [Y,[U,Y]_h].
/// bi-invariant: double-bracket closed form, h trivial.
enum class Method { General, NaturallyReductive, BiInvariant };

/// First term of <R(U,Y)Y,U>: `Statement` pairs it with [Y,U], `Proof` with
/// [Y,X]. Only `Statement` reduces to the Riemannian sectional curvature at
/// X = 0.
enum class CurvatureVariant { Statement, Proof };

/// Source of g_Y for the definitional quotient g_Y(R,U) / (g_Y(Y,Y) g_Y(U,U) - g_Y(Y,U)^2).
enum class GySource { Closed, Fd };

inline const char* to_string(SignConvention c) {
  return c == SignConvention::OracleAligned ? "oracle-aligned" : "paper-verbatim";
}
inline const char* to_string(Method m) {
  switch (m) {
    case Method::General: return "general";
    case Method::NaturallyReductive: return "naturally-reductive";
    case Method::BiInvariant: return "bi-invariant";
  }
  return "?";
}
inline const char* to_string(CurvatureVariant v) {
  return v == CurvatureVariant::Statement ? "statement" : "proof";
}
inline const char* to_string(GySource s) { return s == GySource::Closed ? "closed" : "fd"; }

/// The four printed terms of a bracket contraction. term2_g0 is term 2
/// evaluated with <.,.>_0 in place of the printed <.,.>.
template <typename Scalar>
struct ContractionTerms {
  std::array<Scalar, 4> terms{};
  Scalar term2_g0 = Scalar(0);

  Scalar value() const { return terms[0] + terms[1] + terms[2] + terms[3]; }
  Scalar value_with_g0_term2() const { return terms[0] + term2_g0 + terms[2] + terms[3]; }
};

/// <X, R(U,Y)Y> as transcribed:
///   1/4 (<[phiU,Y]+[U,phiY], [Y,X]>_0 + <[U,Y], [phiY,X]+[Y,phiX]>_0)
/// + 3/4 <[Y,U], [Y,X]_m>
/// + 1/2 <[U,phiX]+[X,phiU], phi^{-1}[Y,phiY]>_0
/// - 1/4 <[U,phiY]+[Y,phiU], phi^{-1}([Y,phiX]+[X,phiY])>_0
/// X may be any vector of m; the expression is linear in it.
template <typename Scalar>
ContractionTerms<Scalar> puttmann_XRYY_terms(const LieAlgebra<Scalar>& L,
                                             const InvariantMetric<Scalar>& g,
                                             const Vector<Scalar>& X, const Vector<Scalar>& Y,
                                             const Vector<Scalar>& U) {
  const auto& split = g.split();
  auto br = [&](const Vector<Scalar>& a, const Vector<Scalar>& b) { return bracket(L, a, b); };
  const Vector<Scalar> pX = g.phi() * X, pY = g.phi() * Y, pU = g.phi() * U;
  const Vector<Scalar> YX = br(Y, X), YU = br(Y, U);
  const Vector<Scalar> YX_m = project(split, YX, Part::M);

  ContractionTerms<Scalar> t;
  t.terms[0] = Scalar(0.25) * (g.inner0(br(pU, Y) + br(U, pY), YX) +
                               g.inner0(br(U, Y), br(pY, X) + br(Y, pX)));
  t.terms[1] = Scalar(0.75) * g.inner(YU, YX_m);
  t.terms[2] =
      Scalar(0.5) * g.inner0(br(U, pX) + br(X, pU), g.phi_inverse() * br(Y, pY));
  t.terms[3] = Scalar(-0.25) * g.inner0(br(U, pY) + br(Y, pU),
                                        g.phi_inverse() * (br(Y, pX) + br(X, pY)));
  t.term2_g0 = Scalar(0.75) * g.inner0(YU, YX_m);
  return t;
}

/// <R(U,Y)Y, U> as transcribed:
///   1/2 <[phiU,Y]+[U,phiY], [Y,U]>_0      (Statement; Proof pairs with [Y,X])
/// + 3/4 <[Y,U], [Y,U]_m>
/// + <[U,phiU], phi^{-1}[Y,phiY]>_0
/// - 1/4 <[U,phiY]+[Y,phiU], phi^{-1}([Y,phiU]+[U,phiY])>_0
template <typename Scalar>
ContractionTerms<Scalar> puttmann_URYY_terms(const LieAlgebra<Scalar>& L,
                                             const InvariantMetric<Scalar>& g,
                                             const Vector<Scalar>& Y, const Vector<Scalar>& U,
                                             CurvatureVariant variant = CurvatureVariant::Statement,
                                             const Vector<Scalar>* X = nullptr) {
  const auto& split = g.split();
  auto br = [&](const Vector<Scalar>& a, const Vector<Scalar>& b) { return bracket(L, a, b); };
  const Vector<Scalar> pY = g.phi() * Y, pU = g.phi() * U;
  const Vector<Scalar> YU = br(Y, U);
  const Vector<Scalar> YU_m = project(split, YU, Part::M);

  Vector<Scalar> partner = YU;
  if (variant == CurvatureVariant::Proof) {
    if (X == nullptr) throw InputError("puttmann_URYY: proof variant needs the drift vector");
    partner = br(Y, *X);
  }
  ContractionTerms<Scalar> t;
  t.terms[0] = Scalar(0.5) * g.inner0(br(pU, Y) + br(U, pY), partner);
  t.terms[1] = Scalar(0.75) * g.inner(YU, YU_m);
  t.terms[2] = g.inner0(br(U, pU), g.phi_inverse() * br(Y, pY));
  const Vector<Scalar> mixed = br(U, pY) + br(Y, pU);
  t.terms[3] = Scalar(-0.25) * g.inner0(mixed, g.phi_inverse() * (br(Y, pU) + br(U, pY)));
  t.term2_g0 = Scalar(0.75) * g.inner0(YU, YU_m);
  return t;
}

namespace detail {

inline double calibrate_puttmann_sign() {
  // su(2), g0 = phi = I, flag (e1, e2): compare the transcribed <R(U,Y)Y,U>
  // against the Koszul curvature.
  StructureTensor<double> c(3);
  c.set_bracket(0, 1, 2, 1.0);
  c.set_bracket(1, 2, 0, 1.0);
  c.set_bracket(2, 0, 1, 1.0);
  const LieAlgebra<double> su2(c);
  const Matrix<double> I = Matrix<double>::Identity(3, 3);
  const auto g = inner_from_phi<double>(I, I, ReductiveSplit(3, 0));
  const Vector<double> Y = Vector<double>::Unit(3, 0), U = Vector<double>::Unit(3, 1);
  const double transcribed = puttmann_URYY_terms(su2, g, Y, U).value();
  const auto conn = koszul_connection(su2, g.gram());
  const double oracle = g.inner(curvature(conn, su2, U, Y, Y), U);
  return transcribed * oracle < 0 ? -1.0 : 1.0;
}

}  // namespace detail

/// Global sign relating the transcribed contractions to the oracle
/// convention, calibrated once on first use.
inline double puttmann_sign() {
  static const double sign = detail::calibrate_puttmann_sign();
  return sign;
}

template <typename Scalar>
Scalar convention_sign(SignConvention c) {
  return c == SignConvention::OracleAligned ? Scalar(puttmann_sign()) : Scalar(1);
}

template <typename Scalar>
Scalar puttmann_XRYY(const LieAlgebra<Scalar>& L, const InvariantMetric<Scalar>& g,
                     const Vector<Scalar>& X, const Vector<Scalar>& Y, const Vector<Scalar>& U,
                     SignConvention convention) {
  return convention_sign<Scalar>(convention) * puttmann_XRYY_terms(L, g, X, Y, U).value();
}

template <typename Scalar>
Scalar puttmann_URYY(const LieAlgebra<Scalar>& L, const InvariantMetric<Scalar>& g,
                     const Vector<Scalar>& Y, const Vector<Scalar>& U, SignConvention convention,
                     CurvatureVariant variant = CurvatureVariant::Statement,
                     const Vector<Scalar>* X = nullptr) {
  return convention_sign<Scalar>(convention) *
         puttmann_URYY_terms(L, g, Y, U, variant, X).value();
}

/// The full vector R(U,Y)Y in m, recovered from the XRYY contraction against
/// each basis vector of m and the inverse of the metric on m.
template <typename Scalar>
Vector<Scalar> puttmann_R_vector(const LieAlgebra<Scalar>& L, const InvariantMetric<Scalar>& g,
                                 const Vector<Scalar>& Y, const Vector<Scalar>& U,
                                 SignConvention convention) {
  const auto& split = g.split();
  const Index m = split.m_dim();
  Vector<Scalar> covector(m);
  for (Index k = 0; k < m; ++k)
    covector(k) = puttmann_XRYY(L, g, Vector<Scalar>(Vector<Scalar>::Unit(split.dim, split.h_dim + k)),
                                Y, U, convention);
  const Vector<Scalar> rm = g.gram_m().ldlt().solve(covector);
  return embed_m(split, rm);
}

/// Structural checks of a configuration, evaluated once.
template <typename Scalar>
struct SpaceChecks {
  Scalar jacobi_defect = Scalar(0);
  bool jacobi_ok = true;
  ReductiveReport<Scalar> reductive;
  DefectReport<Scalar> g0_bi_invariance;
  DefectReport<Scalar> ad_h_invariance;
  DefectReport<Scalar> naturally_reductive;
  /// Bi-invariance of g itself; only meaningful for h_dim = 0.
  std::optional<DefectReport<Scalar>> g_bi_invariance;
  /// [h, X] = 0: X extends to a G-invariant vector field.
  DefectReport<Scalar> drift_h_invariance;
  FinslerValidity<Scalar> finsler;

  bool structure_ok() const {
    return jacobi_ok && reductive.ok() && g0_bi_invariance.ok && ad_h_invariance.ok &&
           drift_h_invariance.ok;
  }

  std::string failed_structure() const {
    std::string out;
    auto add = [&](bool ok, const char* name) {
      if (!ok) out += (out.empty() ? "" : ", ") + std::string(name);
    };
    add(jacobi_ok, "Jacobi identity");
    add(reductive.subalgebra_ok, "h subalgebra");
    add(reductive.ad_invariant_ok, "reductive split");
    add(g0_bi_invariance.ok, "bi-invariant g0");
    add(ad_h_invariance.ok, "ad(h)-invariant metric");
    add(drift_h_invariance.ok, "ad(h)-invariant X");
    return out;
  }
};

/// An invariant (alpha, beta)-metric F = (alpha + beta)^2 / alpha on G/H:
/// Lie algebra, invariant metric and drift X in m. All data is immutable and
/// the checks (and, for trivial h, the Levi-Civita connection) are computed at
/// construction.
template <typename Scalar>
class FinslerSpace {
 public:
  FinslerSpace(LieAlgebra<Scalar> algebra, InvariantMetric<Scalar> metric, Vector<Scalar> drift,
               Tolerances tol = {})
      : algebra_(std::move(algebra)),
        metric_(std::move(metric)),
        drift_(std::move(drift)),
        tol_(tol) {
    const auto& split = metric_.split();
    if (algebra_.dim() != split.dim) throw InputError("metric and algebra dimensions differ");
    if (drift_.size() != split.dim) throw InputError("drift vector has the wrong length");
    if (split.h_dim > 0 && drift_.head(split.h_dim).cwiseAbs().maxCoeff() != Scalar(0))
      throw InputError("drift vector must lie in m");

    checks_.jacobi_defect = jacobi_defect(algebra_);
    checks_.jacobi_ok = checks_.jacobi_defect <= Scalar(tol_.jacobi);
    checks_.reductive = check_reductive(algebra_, split, tol_.metric);
    checks_.g0_bi_invariance = check_bi_invariance(algebra_, metric_.g0(), tol_.metric);
    checks_.ad_h_invariance = check_ad_h_invariance(algebra_, metric_, tol_.metric);
    checks_.naturally_reductive = check_naturally_reductive(algebra_, metric_, tol_.metric);
    if (split.h_dim == 0) {
      checks_.g_bi_invariance = check_bi_invariance(algebra_, metric_.gram(), tol_.metric);
      connection_ = koszul_connection(algebra_, metric_.gram());
    }
    for (Index z = 0; z < split.h_dim; ++z) {
      const Vector<Scalar> zx = algebra_.ad(z) * drift_;
      for (Index k = 0; k < split.dim; ++k)
        detail::record_defect(checks_.drift_h_invariance, zx(k),
                              "[e" + std::to_string(z + 1) + ",X] component e" +
                                  std::to_string(k + 1));
    }
    detail::finish(checks_.drift_h_invariance, tol_.metric);
    checks_.finsler = validate_finsler(finsler(), tol_.boundary);
  }

  const LieAlgebra<Scalar>& algebra() const { return algebra_; }
  const InvariantMetric<Scalar>& metric() const { return metric_; }
  const ReductiveSplit& split() const { return metric_.split(); }
  const Vector<Scalar>& drift() const { return drift_; }
  const Tolerances& tolerances() const { return tol_; }
  const SpaceChecks<Scalar>& checks() const { return checks_; }
  const std::optional<ConnectionTable<Scalar>>& connection() const { return connection_; }
  FinslerData<Scalar> finsler() const { return {metric_.gram(), drift_}; }

  bool bi_invariant() const {
    return checks_.g_bi_invariance.has_value() && checks_.g_bi_invariance->ok;
  }

 private:
  LieAlgebra<Scalar> algebra_;
  InvariantMetric<Scalar> metric_;
  Vector<Scalar> drift_;
  Tolerances tol_;
  SpaceChecks<Scalar> checks_;
  std::optional<ConnectionTable<Scalar>> connection_;
};

struct CurvatureOptions {
  Method method = Method::General;
  SignConvention convention = SignConvention::OracleAligned;
  CurvatureVariant variant = CurvatureVariant::Statement;
  GySource gy_source = GySource::Closed;
  double fd_step = 1e-5;
  bool richardson = false;
};

template <typename Scalar>
struct OracleComparison {
  bool available = false;
  std::string source;  // "koszul" or "naturally-reductive"
  Scalar XRYY = Scalar(0);
  Scalar URYY = Scalar(0);
  bool agrees = false;
  bool sign_mismatch = false;
};

template <typename Scalar>
struct CurvatureReport {
  Scalar K = Scalar(0);
  Scalar XRYY = Scalar(0);
  Scalar URYY = Scalar(0);
  Scalar RYYY = Scalar(0);
  Scalar numerator = Scalar(0);
  Scalar denominator = Scalar(0);
  Scalar XY = Scalar(0);
  Scalar XU = Scalar(0);
  SignConvention convention = SignConvention::OracleAligned;
  Method method = Method::General;
  CurvatureVariant variant = CurvatureVariant::Statement;
  Flag<Scalar> flag;
  /// g_Y(R,U) / (g_Y(Y,Y) g_Y(U,U) - g_Y(Y,U)^2) with g_Y from `gy_source`.
  Scalar K_definition = Scalar(0);
  GySource gy_source = GySource::Closed;
  Scalar numerator_identity_defect = Scalar(0);
  /// General method only: XRYY with term 2 taken in <.,.>_0.
  std::optional<Scalar> XRYY_term2_g0;
  OracleComparison<Scalar> oracle;
};

namespace detail {

template <typename Scalar>
Vector<Scalar> checked_m_vector(const ReductiveSplit& split, const Vector<Scalar>& v,
                                const char* what) {
  if (v.size() != split.dim)
    throw InputError(std::string(what) + ": vector length does not match the algebra");
  if (split.h_dim > 0 && v.head(split.h_dim).cwiseAbs().maxCoeff() != Scalar(0))
    throw InputError(std::string(what) + ": flag vectors must lie in m");
  return v;
}

template <typename Scalar>
void assemble(CurvatureReport<Scalar>& r) {
  const Scalar b = r.XY, xu = r.XU;
  r.numerator = Scalar(6) * r.XRYY * xu + r.URYY * (Scalar(1) - b * b);
  r.denominator = std::pow(Scalar(1) + b, 4) * (Scalar(2) * xu * xu - b * b + Scalar(1));
  if (!(r.denominator > Scalar(0)))
    throw NumericError("flag curvature: denominator is not positive");
  r.K = r.numerator / r.denominator;
  if (!std::isfinite(static_cast<double>(r.K))) throw NumericError("flag curvature is not finite");
}

template <typename Scalar>
Scalar definitional_K(const FinslerData<Scalar>& d, const Flag<Scalar>& flag,
                      const Vector<Scalar>& R, const CurvatureOptions& options) {
  const Vector<Scalar>& Y = flag.Y;
  const Vector<Scalar>& U = flag.U;
  if (options.gy_source == GySource::Closed) {
    const Scalar gyy = g_Y_closed(d, Y, Y, Y), guu = g_Y_closed(d, Y, U, U),
                 guy = g_Y_closed(d, Y, U, Y);
    return g_Y_closed(d, Y, R, U) / (gyy * guu - guy * guy);
  }
  using Wide = long double;
  const FinslerData<Wide> w = d.template cast<Wide>();
  const Vector<Wide> Yw = Y.template cast<Wide>(), Uw = U.template cast<Wide>(),
                     Rw = R.template cast<Wide>();
  const Wide h = static_cast<Wide>(options.fd_step);
  const Wide gyy = g_Y_fd(w, Yw, Yw, Yw, h, options.richardson),
             guu = g_Y_fd(w, Yw, Uw, Uw, h, options.richardson),
             guy = g_Y_fd(w, Yw, Uw, Yw, h, options.richardson);
  return static_cast<Scalar>(g_Y_fd(w, Yw, Rw, Uw, h, options.richardson) /
                             (gyy * guu - guy * guy));
}

}  // namespace detail

/// g_Y(R(U,Y)Y, U) through the closed-form g_Y against
/// (1+<X,Y>)^2 {2<X,U><Y,R>(1-2<X,Y>) + 6<X,R><X,U> + <R,U>(1-<X,Y>^2)}.
template <typename Scalar>
IdentityCheck<Scalar> numerator_identity_check(const FinslerData<Scalar>& d,
                                               const Flag<Scalar>& flag,
                                               const Vector<Scalar>& Ruyy) {
  const Vector<Scalar>& X = d.drift;
  const Scalar b = d.inner(X, flag.Y), xu = d.inner(X, flag.U);
  IdentityCheck<Scalar> out;
  out.lhs = g_Y_closed(d, flag.Y, Ruyy, flag.U);
  out.rhs = (Scalar(1) + b) * (Scalar(1) + b) *
            (Scalar(2) * xu * d.inner(flag.Y, Ruyy) * (Scalar(1) - Scalar(2) * b) +
             Scalar(6) * d.inner(X, Ruyy) * xu + d.inner(Ruyy, flag.U) * (Scalar(1) - b * b));
  out.defect = std::abs(out.lhs - out.rhs);
  return out;
}

/// Bi-invariant closed form:
/// K = [6<X,[Y,[U,Y]]><X,U> + <U,[Y,[U,Y]]>(1 - <X,Y>^2)] / [4 (1+<X,Y>)^4 (2<X,U>^2 - <X,Y>^2 + 1)].
template <typename Scalar>
CurvatureReport<Scalar> flag_curvature_biinvariant(const LieAlgebra<Scalar>& L,
                                                   const Matrix<Scalar>& gram,
                                                   const Vector<Scalar>& X,
                                                   const Flag<Scalar>& raw_flag,
                                                   const Tolerances& tol = {}) {
  const auto bi = check_bi_invariance(L, gram, tol.metric);
  if (!bi.ok)
    throw PreconditionError("bi-invariant method: metric is not bi-invariant (defect " +
                            std::to_string(static_cast<double>(bi.max_defect)) + " at " +
                            bi.location + ")");
  const FinslerData<Scalar> d{gram, X};
  if (!validate_finsler(d, tol.boundary).ok)
    throw PreconditionError("bi-invariant method: ||X||_g must be < 1");

  CurvatureReport<Scalar> r;
  r.method = Method::BiInvariant;
  r.flag = orthonormalize_flag(gram, raw_flag.Y, raw_flag.U, tol.dependence);
  const Vector<Scalar>& Y = r.flag.Y;
  const Vector<Scalar>& U = r.flag.U;
  const Vector<Scalar> dbl = bracket(L, Y, bracket(L, U, Y));
  r.XY = d.inner(X, Y);
  r.XU = d.inner(X, U);
  const Scalar x_dbl = d.inner(X, dbl), u_dbl = d.inner(U, dbl);
  const Scalar b = r.XY, xu = r.XU;
  // Reported in the scaling of the general formula: R(U,Y)Y = 1/4 [Y,[U,Y]].
  r.numerator = (Scalar(6) * x_dbl * xu + u_dbl * (Scalar(1) - b * b)) / Scalar(4);
  r.denominator = std::pow(Scalar(1) + b, 4) * (Scalar(2) * xu * xu - b * b + Scalar(1));
  r.K = (Scalar(6) * x_dbl * xu + u_dbl * (Scalar(1) - b * b)) / (Scalar(4) * r.denominator);
  r.XRYY = x_dbl / Scalar(4);
  r.URYY = u_dbl / Scalar(4);
  r.RYYY = d.inner(Y, dbl) / Scalar(4);
  const Vector<Scalar> R = dbl / Scalar(4);
  r.K_definition = detail::definitional_K(d, r.flag, R, CurvatureOptions{});
  r.numerator_identity_defect = numerator_identity_check(d, r.flag, R).defect;
  return r;
}

/// Flag curvature K(P,Y) of F = (alpha+beta)^2/alpha at the origin:
/// K = [6 <X,R(U,Y)Y><X,U> + <R(U,Y)Y,U>(1 - <X,Y>^2)] / [(1+<X,Y>)^4 (2<X,U>^2 - <X,Y>^2 + 1)].
/// The flag is re-orthonormalized first. Throws PreconditionError when the
/// method's structural requirements fail.
template <typename Scalar>
CurvatureReport<Scalar> flag_curvature(const FinslerSpace<Scalar>& space, const Flag<Scalar>& raw_flag,
                                       const CurvatureOptions& options = {}) {
  const auto& L = space.algebra();
  const auto& g = space.metric();
  const auto& split = space.split();
  const auto& checks = space.checks();
  const auto& tol = space.tolerances();
  const Vector<Scalar>& X = space.drift();

  const Vector<Scalar> y = detail::checked_m_vector(split, raw_flag.Y, "flag");
  const Vector<Scalar> u = detail::checked_m_vector(split, raw_flag.U, "flag");
  if (!checks.finsler.ok)
    throw PreconditionError("Finsler condition fails: ||X||_g = " +
                            std::to_string(static_cast<double>(checks.finsler.norm_X)) +
                            " is not < 1");
  if (!checks.structure_ok())
    throw PreconditionError("structural checks fail (" + checks.failed_structure() +
                            "); run validate for details");

  if (options.method == Method::BiInvariant) {
    if (split.h_dim != 0)
      throw PreconditionError("bi-invariant method requires h_dim = 0");
    auto r = flag_curvature_biinvariant(L, g.gram(), X, Flag<Scalar>{y, u}, tol);
    r.convention = options.convention;
    return r;
  }
  if (options.method == Method::NaturallyReductive && !checks.naturally_reductive.ok)
    throw PreconditionError("naturally-reductive method: configuration is not naturally "
                            "reductive (defect " +
                            std::to_string(static_cast<double>(checks.naturally_reductive.max_defect)) +
                            " at " + checks.naturally_reductive.location + ")");

  CurvatureReport<Scalar> r;
  r.method = options.method;
  r.convention = options.convention;
  r.variant = options.variant;
  r.gy_source = options.gy_source;
  r.flag = orthonormalize_flag(g.gram(), y, u, tol.dependence);
  const Vector<Scalar>& Y = r.flag.Y;
  const Vector<Scalar>& U = r.flag.U;
  r.XY = g.inner(X, Y);
  r.XU = g.inner(X, U);

  Vector<Scalar> R;
  if (options.method == Method::General) {
    const auto xr = puttmann_XRYY_terms(L, g, X, Y, U);
    const auto ur = puttmann_URYY_terms(L, g, Y, U, options.variant, &X);
    const Scalar sign = convention_sign<Scalar>(options.convention);
    r.XRYY = sign * xr.value();
    r.URYY = sign * ur.value();
    r.RYYY = sign * puttmann_XRYY_terms(L, g, Y, Y, U).value();
    r.XRYY_term2_g0 = sign * xr.value_with_g0_term2();
    R = puttmann_R_vector(L, g, Y, U, options.convention);
  } else {
    R = detail::nat_reductive_R_unchecked(L, split, U, Y, tol.metric);
    r.XRYY = g.inner(X, R);
    r.URYY = g.inner(U, R);
    r.RYYY = g.inner(Y, R);
  }
  detail::assemble(r);

  const FinslerData<Scalar> d = space.finsler();
  r.K_definition = detail::definitional_K(d, r.flag, R, options);
  r.numerator_identity_defect = numerator_identity_check(d, r.flag, R).defect;

  std::optional<Vector<Scalar>> oracle_R;
  if (space.connection()) {
    oracle_R = curvature(*space.connection(), L, U, Y, Y);
    r.oracle.source = "koszul";
  } else if (checks.naturally_reductive.ok) {
    oracle_R = detail::nat_reductive_R_unchecked(L, split, U, Y, tol.metric);
    r.oracle.source = "naturally-reductive";
  }
  if (oracle_R) {
    r.oracle.available = true;
    r.oracle.XRYY = g.inner(X, *oracle_R);
    r.oracle.URYY = g.inner(U, *oracle_R);
    const Scalar slack = Scalar(1e-9);
    r.oracle.agrees = std::abs(r.oracle.XRYY - r.XRYY) <= slack &&
                      std::abs(r.oracle.URYY - r.URYY) <= slack;
    auto opposite = [&](Scalar a, Scalar b) {
      return std::abs(a) > slack && std::abs(b) > slack && a * b < Scalar(0);
    };
    r.oracle.sign_mismatch = opposite(r.URYY, r.oracle.URYY) || opposite(r.XRYY, r.oracle.XRYY);
  }
  return r;
}

}  // namespace flagcurv
