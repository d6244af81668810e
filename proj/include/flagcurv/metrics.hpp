#pragma once

#include "flagcurv/algebra.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <sstream>

namespace flagcurv {

namespace detail {

inline std::string triple(const char* a, Index i, const char* b, Index j, const char* c,
                          Index k) {
  std::ostringstream s;
  s << "(" << a << "=e" << i + 1 << ", " << b << "=e" << j + 1 << ", " << c << "=e" << k + 1
    << ")";
  return s.str();
}

}  // namespace detail

/// The invariant inner product <x, y> = <phi x, y>_0 together with the data
/// that defines it. phi is given on m and extended by the identity on h.
/// Vectors are always in full g coordinates; gram() restricted to m is the
/// inner product of the homogeneous space.
template <typename Scalar>
class InvariantMetric {
 public:
  using VectorType = Vector<Scalar>;
  using MatrixType = Matrix<Scalar>;

  InvariantMetric(ReductiveSplit split, MatrixType g0, MatrixType phi_m, MatrixType phi,
                  MatrixType phi_inverse, MatrixType gram)
      : split_(split),
        g0_(std::move(g0)),
        phi_m_(std::move(phi_m)),
        phi_(std::move(phi)),
        phi_inverse_(std::move(phi_inverse)),
        gram_(std::move(gram)) {}

  const ReductiveSplit& split() const { return split_; }
  Index dim() const { return split_.dim; }
  const MatrixType& g0() const { return g0_; }
  const MatrixType& phi_m() const { return phi_m_; }
  const MatrixType& phi() const { return phi_; }
  const MatrixType& phi_inverse() const { return phi_inverse_; }
  const MatrixType& gram() const { return gram_; }
  MatrixType gram_m() const { return gram_.bottomRightCorner(split_.m_dim(), split_.m_dim()); }

  Scalar inner(const VectorType& x, const VectorType& y) const { return x.dot(gram_ * y); }
  Scalar inner0(const VectorType& x, const VectorType& y) const { return x.dot(g0_ * y); }
  Scalar norm(const VectorType& x) const { return std::sqrt(inner(x, x)); }

  template <typename NewScalar>
  InvariantMetric<NewScalar> cast() const {
    return InvariantMetric<NewScalar>(split_, g0_.template cast<NewScalar>(),
                                      phi_m_.template cast<NewScalar>(),
                                      phi_.template cast<NewScalar>(),
                                      phi_inverse_.template cast<NewScalar>(),
                                      gram_.template cast<NewScalar>());
  }

 private:
  ReductiveSplit split_;
  MatrixType g0_, phi_m_, phi_, phi_inverse_, gram_;
};

/// Builds <.,.> = <phi ., .>_0 from g0 (dim x dim) and phi (m_dim x m_dim).
/// Throws ValidationError naming the failing entry or eigenvalue when g0 is
/// not symmetric positive-definite, h and m are not g0-orthogonal, or phi is
/// not g0-self-adjoint and positive.
template <typename Scalar>
InvariantMetric<Scalar> inner_from_phi(const Matrix<Scalar>& g0, const Matrix<Scalar>& phi_m,
                                       const ReductiveSplit& split, double tol = 1e-9) {
  using MatrixType = Matrix<Scalar>;
  const Index n = split.dim, h = split.h_dim, m = split.m_dim();
  if (g0.rows() != n || g0.cols() != n) throw InputError("g0 must be dim x dim");
  if (phi_m.rows() != m || phi_m.cols() != m) throw InputError("phi must be m_dim x m_dim");

  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (std::abs(g0(i, j) - g0(j, i)) > Scalar(tol)) {
        std::ostringstream msg;
        msg << "g0 is not symmetric at (" << i + 1 << "," << j + 1 << ")";
        throw ValidationError(msg.str());
      }
  const MatrixType g0s = Scalar(0.5) * (g0 + g0.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixType> g0_eigen(g0s, Eigen::EigenvaluesOnly);
  if (g0_eigen.eigenvalues()(0) <= Scalar(0)) {
    std::ostringstream msg;
    msg << "g0 is not positive-definite: smallest eigenvalue " << g0_eigen.eigenvalues()(0);
    throw ValidationError(msg.str());
  }
  for (Index i = 0; i < h; ++i)
    for (Index j = h; j < n; ++j)
      if (std::abs(g0s(i, j)) > Scalar(tol)) {
        std::ostringstream msg;
        msg << "m is not the g0-orthogonal complement of h: g0(" << i + 1 << "," << j + 1
            << ") = " << g0s(i, j);
        throw ValidationError(msg.str());
      }

  const MatrixType g0_mm = g0s.bottomRightCorner(m, m);
  // <phi x, y>_0 = x^T phi^T g0 y
  const MatrixType g_mm = phi_m.transpose() * g0_mm;
  for (Index i = 0; i < m; ++i)
    for (Index j = i + 1; j < m; ++j)
      if (std::abs(g_mm(i, j) - g_mm(j, i)) > Scalar(tol)) {
        std::ostringstream msg;
        msg << "phi is not g0-self-adjoint: <phi e" << h + i + 1 << ", e" << h + j + 1
            << ">_0 = " << g_mm(i, j) << " but <e" << h + i + 1 << ", phi e" << h + j + 1
            << ">_0 = " << g_mm(j, i);
        throw ValidationError(msg.str());
      }
  const MatrixType g_mm_s = Scalar(0.5) * (g_mm + g_mm.transpose());
  if (m > 0) {
    Eigen::SelfAdjointEigenSolver<MatrixType> g_eigen(g_mm_s, Eigen::EigenvaluesOnly);
    if (g_eigen.eigenvalues()(0) <= Scalar(0)) {
      std::ostringstream msg;
      msg << "phi is not positive-definite: <phi x, x>_0 has eigenvalue "
          << g_eigen.eigenvalues()(0);
      throw ValidationError(msg.str());
    }
  }

  MatrixType phi = MatrixType::Identity(n, n);
  phi.bottomRightCorner(m, m) = phi_m;
  MatrixType phi_inverse = MatrixType::Identity(n, n);
  if (m > 0) phi_inverse.bottomRightCorner(m, m) = phi_m.partialPivLu().inverse();

  MatrixType gram = g0s;
  gram.bottomRightCorner(m, m) = g_mm_s;
  return InvariantMetric<Scalar>(split, g0s, phi_m, phi, phi_inverse, gram);
}

/// <[z,x],y> + <x,[z,y]> = 0 over all basis triples, for a form `gram` on g.
template <typename Scalar>
DefectReport<Scalar> check_bi_invariance(const LieAlgebra<Scalar>& L, const Matrix<Scalar>& gram,
                                         double tol) {
  DefectReport<Scalar> report;
  const Index n = L.dim();
  for (Index z = 0; z < n; ++z) {
    // entry (y, x) = <[z,x], y> + <x, [z,y]>
    const Matrix<Scalar> s = gram * L.ad(z) + L.ad(z).transpose() * gram;
    for (Index x = 0; x < n; ++x)
      for (Index y = 0; y < n; ++y)
        detail::record_defect(report, s(y, x), detail::triple("z", z, "x", x, "y", y));
  }
  detail::finish(report, tol);
  return report;
}

/// ad(h)-invariance of the inner product on m:
/// <[z,x]_m, y> + <x, [z,y]_m> = 0 for z in h, x, y in m.
template <typename Scalar>
DefectReport<Scalar> check_ad_h_invariance(const LieAlgebra<Scalar>& L,
                                           const InvariantMetric<Scalar>& g, double tol) {
  DefectReport<Scalar> report;
  const ReductiveSplit& split = g.split();
  const Index n = split.dim;
  for (Index z = 0; z < split.h_dim; ++z)
    for (Index x = split.h_dim; x < n; ++x)
      for (Index y = split.h_dim; y < n; ++y) {
        const Vector<Scalar> zx = project(split, Vector<Scalar>(L.ad(z).col(x)), Part::M);
        const Vector<Scalar> zy = project(split, Vector<Scalar>(L.ad(z).col(y)), Part::M);
        const Scalar d = g.inner(zx, L.basis_vector(y)) + g.inner(L.basis_vector(x), zy);
        detail::record_defect(report, d, detail::triple("z", z, "x", x, "y", y));
      }
  detail::finish(report, tol);
  return report;
}

/// Natural reductivity: <x, [z,y]_m> + <[z,x]_m, y> = 0 for x, y, z in m.
template <typename Scalar>
DefectReport<Scalar> check_naturally_reductive(const LieAlgebra<Scalar>& L,
                                               const InvariantMetric<Scalar>& g, double tol) {
  DefectReport<Scalar> report;
  const ReductiveSplit& split = g.split();
  const Index n = split.dim;
  for (Index z = split.h_dim; z < n; ++z)
    for (Index x = split.h_dim; x < n; ++x)
      for (Index y = split.h_dim; y < n; ++y) {
        const Vector<Scalar> zx = project(split, Vector<Scalar>(L.ad(z).col(x)), Part::M);
        const Vector<Scalar> zy = project(split, Vector<Scalar>(L.ad(z).col(y)), Part::M);
        const Scalar d = g.inner(L.basis_vector(x), zy) + g.inner(zx, L.basis_vector(y));
        detail::record_defect(report, d, detail::triple("z", z, "x", x, "y", y));
      }
  detail::finish(report, tol);
  return report;
}

/// A flag (P, Y) given by a g-orthonormal pair: Y is the flagpole, U completes
/// it to a basis of P.
template <typename Scalar>
struct Flag {
  Vector<Scalar> Y;
  Vector<Scalar> U;
};

/// Gram-Schmidt in the inner product `gram`, with one re-orthogonalization
/// pass. Throws FlagError if y = 0 or u is (numerically) parallel to y, i.e.
/// 1 - cos^2(y, u) <= tol_dep.
template <typename Scalar>
Flag<Scalar> orthonormalize_flag(const Matrix<Scalar>& gram, const Vector<Scalar>& y,
                                 const Vector<Scalar>& u, double tol_dep = 1e-12) {
  if (y.size() != gram.rows() || u.size() != gram.rows())
    throw InputError("orthonormalize_flag: vector length does not match metric");
  auto ip = [&](const Vector<Scalar>& a, const Vector<Scalar>& b) { return a.dot(gram * b); };
  const Scalar yy = ip(y, y), uu = ip(u, u), yu = ip(y, u);
  if (!(yy > Scalar(0))) throw FlagError("degenerate flag: flagpole is zero");
  if (!(uu > Scalar(0))) throw FlagError("degenerate flag: second vector is zero");
  if (Scalar(1) - yu * yu / (yy * uu) <= Scalar(tol_dep))
    throw FlagError("degenerate flag: vectors are linearly dependent");

  Flag<Scalar> flag;
  flag.Y = y / std::sqrt(yy);
  Vector<Scalar> w = u - ip(u, flag.Y) * flag.Y;
  w -= ip(w, flag.Y) * flag.Y;
  flag.U = w / std::sqrt(ip(w, w));
  return flag;
}

template <typename Scalar>
Scalar orthonormality_defect(const Matrix<Scalar>& gram, const Flag<Scalar>& flag) {
  auto ip = [&](const Vector<Scalar>& a, const Vector<Scalar>& b) { return a.dot(gram * b); };
  using std::abs;
  return std::max({abs(ip(flag.Y, flag.Y) - Scalar(1)), abs(ip(flag.U, flag.U) - Scalar(1)),
                   abs(ip(flag.Y, flag.U))});
}

}  // namespace flagcurv
