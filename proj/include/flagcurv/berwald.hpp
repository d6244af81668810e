#pragma once

#include "flagcurv/riemann.hpp"
#include "flagcurv/sampling.hpp"

#include <Eigen/SVD>

#include <cstdint>
#include <optional>
#include <vector>

namespace flagcurv {

namespace detail {

/// Columns of V spanning the numerical null space of A.
template <typename Scalar>
Matrix<Scalar> null_space(const Matrix<Scalar>& A, Index n, double tol_rank) {
  if (A.rows() == 0) return Matrix<Scalar>::Identity(n, n);
  Eigen::JacobiSVD<Matrix<Scalar>> svd(A, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const Scalar cutoff =
      Scalar(tol_rank) * std::max(Scalar(1), sigma.size() ? sigma(0) : Scalar(0));
  Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > cutoff) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

/// Modified Gram-Schmidt (two passes) in the inner product `gram`.
template <typename Scalar>
Matrix<Scalar> g_orthonormalize(const Matrix<Scalar>& basis, const Matrix<Scalar>& gram) {
  Matrix<Scalar> out(basis.rows(), 0);
  for (Index c = 0; c < basis.cols(); ++c) {
    Vector<Scalar> v = basis.col(c);
    for (int pass = 0; pass < 2; ++pass)
      for (Index k = 0; k < out.cols(); ++k) v -= out.col(k).dot(gram * v) * out.col(k);
    const Scalar n2 = v.dot(gram * v);
    if (n2 <= Scalar(1e-20)) continue;
    out.conservativeResize(Eigen::NoChange, out.cols() + 1);
    out.col(out.cols() - 1) = v / std::sqrt(n2);
  }
  return out;
}

}  // namespace detail

template <typename Scalar>
bool is_perfect(const LieAlgebra<Scalar>& L, double tol_rank = 1e-10) {
  return derived_subalgebra(L, tol_rank).cols() == L.dim();
}

/// g-orthonormal basis (columns) of {x : g(x, [g,g]) = 0}. A parallel drift
/// vector must lie in this space.
template <typename Scalar>
Matrix<Scalar> parallel_obstruction_space(const LieAlgebra<Scalar>& L, const Matrix<Scalar>& gram,
                                          double tol_rank = 1e-10) {
  const Matrix<Scalar> derived = derived_subalgebra(L, tol_rank);
  const Matrix<Scalar> constraints = derived.transpose() * gram;
  return detail::g_orthonormalize<Scalar>(detail::null_space(constraints, L.dim(), tol_rank), gram);
}

/// <[X,u],v> + <u,[X,v]> = 0 over basis pairs.
template <typename Scalar>
DefectReport<Scalar> ad_skew_check(const LieAlgebra<Scalar>& L, const Matrix<Scalar>& gram,
                                   const Vector<Scalar>& X, double tol) {
  DefectReport<Scalar> report;
  const Matrix<Scalar> adX = L.ad(X);
  const Matrix<Scalar> s = gram * adX + adX.transpose() * gram;
  for (Index u = 0; u < L.dim(); ++u)
    for (Index v = 0; v < L.dim(); ++v)
      detail::record_defect(report, s(v, u),
                            "(u=e" + std::to_string(u + 1) + ", v=e" + std::to_string(v + 1) + ")");
  detail::finish(report, tol);
  return report;
}

/// Subspace of the parallel obstruction space on which ad(x) is also
/// g-skew-adjoint: the drift vectors passing both necessary conditions.
template <typename Scalar>
Matrix<Scalar> admissible_drift_space(const LieAlgebra<Scalar>& L, const Matrix<Scalar>& gram,
                                      double tol_rank = 1e-10) {
  const Matrix<Scalar> P = parallel_obstruction_space(L, gram, tol_rank);
  const Index n = L.dim();
  if (P.cols() == 0) return P;
  Matrix<Scalar> M(n * n, P.cols());
  for (Index k = 0; k < P.cols(); ++k) {
    const Matrix<Scalar> adp = L.ad(Vector<Scalar>(P.col(k)));
    const Matrix<Scalar> s = gram * adp + adp.transpose() * gram;
    M.col(k) = Eigen::Map<const Vector<Scalar>>(s.data(), n * n);
  }
  const Matrix<Scalar> coeffs = detail::null_space(M, P.cols(), tol_rank);
  return detail::g_orthonormalize<Scalar>(P * coeffs, gram);
}

/// max_i |∇_{e_i} X|: zero iff X is parallel.
template <typename Scalar>
DefectReport<Scalar> koszul_parallel_check(const ConnectionTable<Scalar>& conn,
                                           const Vector<Scalar>& X, double tol) {
  DefectReport<Scalar> report;
  for (Index i = 0; i < conn.dim(); ++i) {
    const Vector<Scalar> d = conn.gamma[i] * X;
    for (Index k = 0; k < d.size(); ++k)
      detail::record_defect(report, d(k),
                            "∇_e" + std::to_string(i + 1) + " X component e" + std::to_string(k + 1));
  }
  detail::finish(report, tol);
  return report;
}

template <typename Scalar>
struct SectionalWitness {
  std::string kind;  // "sample", "orthogonal", "non-orthogonal"
  Vector<Scalar> u;
  Scalar K = Scalar(0);
  /// g(u, [X, g]) = 0: the equality condition as printed.
  bool u_orthogonal_to_image_X = false;
  /// g(X, [u, g]) = 0: the equality condition of Milnor's lemma.
  bool X_orthogonal_to_image_u = false;
};

template <typename Scalar>
struct SectionalSignReport {
  std::int64_t samples = 0;
  Scalar min_K = Scalar(0);
  Scalar max_K = Scalar(0);
  std::int64_t negative_count = 0;
  std::vector<SectionalWitness<Scalar>> witnesses;
  /// Over samples and witnesses: (K <= tol) matches each equality condition.
  bool printed_condition_consistent = true;
  bool milnor_condition_consistent = true;
  bool ok = false;
};

namespace detail {

template <typename Scalar>
bool orthogonal_to_image(const LieAlgebra<Scalar>& L, const Matrix<Scalar>& gram,
                         const Vector<Scalar>& a, const Vector<Scalar>& b, double tol) {
  // g(a, [b, e_j]) for all j
  const Vector<Scalar> row = (gram * a).transpose() * L.ad(b);
  return row.cwiseAbs().maxCoeff() <= Scalar(tol);
}

}  // namespace detail

/// Samples K(X,u) = sectional(X,u) for u uniform on the g-unit sphere
/// orthogonal to X, plus constructed witnesses orthogonal / not orthogonal to
/// [X, g]. Requires X != 0.
template <typename Scalar>
SectionalSignReport<Scalar> sectional_along_X_sign(const LieAlgebra<Scalar>& L,
                                                   const Matrix<Scalar>& gram,
                                                   const ConnectionTable<Scalar>& conn,
                                                   const Vector<Scalar>& X, std::int64_t n_samples,
                                                   std::uint64_t seed, double tol = 1e-10) {
  const Scalar xx = X.dot(gram * X);
  if (!(xx > Scalar(0))) throw DomainError("sectional_along_X_sign: X must be nonzero");
  if (L.dim() < 2) throw DomainError("sectional_along_X_sign: need dim >= 2");
  const Vector<Scalar> Xn = X / std::sqrt(xx);

  SectionalSignReport<Scalar> report;
  report.samples = n_samples;
  auto evaluate = [&](const std::string& kind, const Vector<Scalar>& u) {
    SectionalWitness<Scalar> w;
    w.kind = kind;
    w.u = u;
    w.K = sectional(L, gram, conn, X, u);
    w.u_orthogonal_to_image_X = detail::orthogonal_to_image(L, gram, u, X, tol);
    w.X_orthogonal_to_image_u = detail::orthogonal_to_image(L, gram, Xn, u, tol);
    const bool zero = w.K <= Scalar(tol);
    if (zero != w.u_orthogonal_to_image_X) report.printed_condition_consistent = false;
    if (zero != w.X_orthogonal_to_image_u) report.milnor_condition_consistent = false;
    if (w.K < -Scalar(tol)) ++report.negative_count;
    return w;
  };

  const SphereSampler<Scalar> sampler(gram);
  Rng rng(seed);
  std::optional<SectionalWitness<Scalar>> lowest;
  for (std::int64_t s = 0; s < n_samples; ++s) {
    const auto w = evaluate("sample", sampler.unit_orthogonal(Xn, rng));
    if (s == 0 || w.K < report.min_K) {
      report.min_K = w.K;
      lowest = w;
    }
    if (s == 0 || w.K > report.max_K) report.max_K = w.K;
  }
  if (lowest) report.witnesses.push_back(*lowest);

  // Image [X, g] and its g-orthogonal complement inside X^perp.
  const Matrix<Scalar> image = detail::g_orthonormalize<Scalar>(L.ad(X), gram);
  Matrix<Scalar> stacked(L.dim(), image.cols() + 1);
  stacked << Xn, image;
  const Matrix<Scalar> span_x_image = detail::g_orthonormalize<Scalar>(stacked, gram);
  const Matrix<Scalar> complement = detail::g_orthonormalize<Scalar>(
      detail::null_space(Matrix<Scalar>(span_x_image.transpose() * gram), L.dim(), 1e-10), gram);
  if (complement.cols() > 0)
    report.witnesses.push_back(evaluate("orthogonal", Vector<Scalar>(complement.col(0))));
  for (Index k = 0; k < image.cols(); ++k) {
    Vector<Scalar> v = image.col(k);
    v -= v.dot(gram * Xn) * Xn;
    const Scalar n2 = v.dot(gram * v);
    if (n2 > Scalar(1e-20)) {
      report.witnesses.push_back(evaluate("non-orthogonal", Vector<Scalar>(v / std::sqrt(n2))));
      break;
    }
  }
  report.ok = report.negative_count == 0 && report.milnor_condition_consistent;
  return report;
}

template <typename Scalar>
struct ObstructionReport {
  bool perfect = false;
  Matrix<Scalar> parallel_space;
  Matrix<Scalar> admissible_space;
  /// max |g(X, d)| over an orthonormal basis d of [g, g].
  Scalar drift_bracket_defect = Scalar(0);
  bool drift_in_parallel_space = false;
  DefectReport<Scalar> ad_skew;
  /// Necessary conditions: X in parallel_space and ad(X) skew-adjoint.
  bool berwald_admissible = false;
  /// Direct check that X is parallel for the Levi-Civita connection.
  DefectReport<Scalar> koszul_parallel;
  bool riemannian = false;
  std::optional<SectionalSignReport<Scalar>> sectional;
};

struct BerwaldOptions {
  std::int64_t samples = 1000;
  std::uint64_t seed = 0;
};

/// Lie-group case (trivial h): collects every obstruction for a drift X.
template <typename Scalar>
ObstructionReport<Scalar> berwald_obstructions(const LieAlgebra<Scalar>& L,
                                               const Matrix<Scalar>& gram, const Vector<Scalar>& X,
                                               const BerwaldOptions& options = {},
                                               const Tolerances& tol = {}) {
  ObstructionReport<Scalar> r;
  r.perfect = is_perfect(L, tol.rank);
  r.parallel_space = parallel_obstruction_space(L, gram, tol.rank);
  r.admissible_space = admissible_drift_space(L, gram, tol.rank);
  const Matrix<Scalar> derived = derived_subalgebra(L, tol.rank);
  for (Index k = 0; k < derived.cols(); ++k)
    r.drift_bracket_defect =
        std::max(r.drift_bracket_defect, std::abs(X.dot(gram * derived.col(k))));
  r.drift_in_parallel_space = r.drift_bracket_defect <= Scalar(tol.metric);
  r.ad_skew = ad_skew_check(L, gram, X, tol.metric);
  r.berwald_admissible = r.drift_in_parallel_space && r.ad_skew.ok;
  const auto conn = koszul_connection(L, gram);
  r.koszul_parallel = koszul_parallel_check(conn, X, tol.oracle);
  r.riemannian = X.cwiseAbs().maxCoeff() == Scalar(0);
  if (r.berwald_admissible && !r.riemannian && L.dim() >= 2)
    r.sectional = sectional_along_X_sign(L, gram, conn, X, options.samples, options.seed, tol.oracle);
  return r;
}

}  // namespace flagcurv
