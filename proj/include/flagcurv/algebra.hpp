#pragma once

#include "flagcurv/errors.hpp"
#include "flagcurv/types.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace flagcurv {

/// Dense rank-3 tensor of structure constants: c(i, j, k) is the coefficient
/// of e_k in [e_i, e_j]. Indices are 0-based.
template <typename Scalar>
class StructureTensor {
 public:
  explicit StructureTensor(Index dim)
      : dim_(dim), data_(static_cast<std::size_t>(dim * dim * dim), Scalar(0)) {
    if (dim <= 0) throw InputError("structure tensor: dimension must be positive");
  }

  Index dim() const { return dim_; }

  Scalar& operator()(Index i, Index j, Index k) { return data_[offset(i, j, k)]; }
  Scalar operator()(Index i, Index j, Index k) const { return data_[offset(i, j, k)]; }

  /// Sets [e_i, e_j] += value * e_k together with the mirrored entry.
  void set_bracket(Index i, Index j, Index k, Scalar value) {
    (*this)(i, j, k) = value;
    (*this)(j, i, k) = -value;
  }

 private:
  std::size_t offset(Index i, Index j, Index k) const {
    return static_cast<std::size_t>((i * dim_ + j) * dim_ + k);
  }

  Index dim_;
  std::vector<Scalar> data_;
};

/// A finite-dimensional real Lie algebra given by structure constants.
///
/// The bracket is stored as the adjoint matrices ad(e_i), with
/// ad(e_i)(k, j) = c(i, j, k), so [x, y] = sum_i x_i ad(e_i) y.
/// A raw tensor that is not exactly antisymmetric is replaced by
/// 1/2 (c_ijk - c_jik); was_antisymmetrized() reports that this happened.
template <typename Scalar>
class LieAlgebra {
 public:
  using VectorType = Vector<Scalar>;
  using MatrixType = Matrix<Scalar>;

  explicit LieAlgebra(const StructureTensor<Scalar>& raw,
                      std::vector<std::string> labels = {})
      : dim_(raw.dim()), labels_(std::move(labels)) {
    if (!labels_.empty() && static_cast<Index>(labels_.size()) != dim_)
      throw InputError("lie algebra: label count does not match dimension");
    StructureTensor<Scalar> c = raw;
    for (Index i = 0; i < dim_; ++i)
      for (Index j = 0; j < dim_; ++j)
        for (Index k = 0; k < dim_; ++k)
          if (raw(i, j, k) != -raw(j, i, k)) antisymmetrized_ = true;
    if (antisymmetrized_) {
      for (Index i = 0; i < dim_; ++i)
        for (Index j = 0; j < dim_; ++j)
          for (Index k = 0; k < dim_; ++k)
            c(i, j, k) = Scalar(0.5) * (raw(i, j, k) - raw(j, i, k));
    }
    ad_.assign(static_cast<std::size_t>(dim_), MatrixType::Zero(dim_, dim_));
    for (Index i = 0; i < dim_; ++i)
      for (Index j = 0; j < dim_; ++j)
        for (Index k = 0; k < dim_; ++k) ad_[i](k, j) = c(i, j, k);
  }

  Index dim() const { return dim_; }
  bool was_antisymmetrized() const { return antisymmetrized_; }
  const std::vector<std::string>& labels() const { return labels_; }

  Scalar structure_constant(Index i, Index j, Index k) const { return ad_[i](k, j); }

  /// ad(e_i) as a matrix acting on coordinate vectors.
  const MatrixType& ad(Index i) const { return ad_[static_cast<std::size_t>(i)]; }

  /// ad(x) = sum_i x_i ad(e_i).
  MatrixType ad(const VectorType& x) const {
    check_length(x, "ad");
    MatrixType out = MatrixType::Zero(dim_, dim_);
    for (Index i = 0; i < dim_; ++i)
      if (x(i) != Scalar(0)) out += x(i) * ad_[i];
    return out;
  }

  VectorType basis_vector(Index i) const { return VectorType::Unit(dim_, i); }

  template <typename NewScalar>
  LieAlgebra<NewScalar> cast() const {
    StructureTensor<NewScalar> c(dim_);
    for (Index i = 0; i < dim_; ++i)
      for (Index j = 0; j < dim_; ++j)
        for (Index k = 0; k < dim_; ++k)
          c(i, j, k) = static_cast<NewScalar>(structure_constant(i, j, k));
    return LieAlgebra<NewScalar>(c, labels_);
  }

  void check_length(const VectorType& x, const char* what) const {
    if (x.size() != dim_) {
      std::ostringstream msg;
      msg << what << ": vector has length " << x.size() << ", algebra dimension is "
          << dim_;
      throw InputError(msg.str());
    }
  }

 private:
  Index dim_;
  std::vector<std::string> labels_;
  std::vector<MatrixType> ad_;
  bool antisymmetrized_ = false;
};

/// [x, y] from the structure constants.
template <typename Scalar>
Vector<Scalar> bracket(const LieAlgebra<Scalar>& L, const Vector<Scalar>& x,
                       const Vector<Scalar>& y) {
  L.check_length(x, "bracket");
  L.check_length(y, "bracket");
  Vector<Scalar> out = Vector<Scalar>::Zero(L.dim());
  for (Index i = 0; i < L.dim(); ++i)
    if (x(i) != Scalar(0)) out.noalias() += x(i) * (L.ad(i) * y);
  return out;
}

/// Max over basis triples i < j < k of the sup-norm of the Jacobiator.
template <typename Scalar>
Scalar jacobi_defect(const LieAlgebra<Scalar>& L) {
  const Index n = L.dim();
  Scalar worst(0);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      for (Index k = j + 1; k < n; ++k) {
        const Vector<Scalar> ei = L.basis_vector(i), ej = L.basis_vector(j),
                             ek = L.basis_vector(k);
        const Vector<Scalar> jac = bracket(L, ei, bracket(L, ej, ek)) +
                                   bracket(L, ej, bracket(L, ek, ei)) +
                                   bracket(L, ek, bracket(L, ei, ej));
        worst = std::max(worst, jac.cwiseAbs().maxCoeff());
      }
  return worst;
}

/// Orthonormal (standard coordinates) basis of span{[e_i, e_j]}, one vector per
/// column. Singular values at or below tol_rank * max(1, sigma_max) are dropped.
template <typename Scalar>
Matrix<Scalar> derived_subalgebra(const LieAlgebra<Scalar>& L, double tol_rank = 1e-10) {
  const Index n = L.dim();
  if (n < 2) return Matrix<Scalar>::Zero(n, 0);
  Matrix<Scalar> brackets(n, n * (n - 1) / 2);
  Index col = 0;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) brackets.col(col++) = L.ad(i).col(j);
  Eigen::JacobiSVD<Matrix<Scalar>> svd(brackets, Eigen::ComputeThinU);
  const auto& sigma = svd.singularValues();
  const Scalar cutoff =
      Scalar(tol_rank) * std::max(Scalar(1), sigma.size() ? sigma(0) : Scalar(0));
  Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > cutoff) ++rank;
  return svd.matrixU().leftCols(rank);
}

/// Structure constants in the basis given by the columns of `basis`
/// (expressed in the old coordinates).
template <typename Scalar>
LieAlgebra<Scalar> change_basis(const LieAlgebra<Scalar>& L, const Matrix<Scalar>& basis) {
  const Index n = L.dim();
  if (basis.rows() != n || basis.cols() != n)
    throw InputError("change_basis: basis must be a square matrix of the algebra dimension");
  Eigen::FullPivLU<Matrix<Scalar>> lu(basis);
  if (!lu.isInvertible()) throw InputError("change_basis: basis is singular");
  StructureTensor<Scalar> c(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const Vector<Scalar> b =
          lu.solve(bracket(L, Vector<Scalar>(basis.col(i)), Vector<Scalar>(basis.col(j))));
      for (Index k = 0; k < n; ++k) c(i, j, k) = b(k);
    }
  // Round-off can break exact antisymmetry; restore it without flagging.
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j)
      for (Index k = 0; k < n; ++k) {
        const Scalar v = Scalar(0.5) * (c(i, j, k) - c(j, i, k));
        c(i, j, k) = v;
        c(j, i, k) = -v;
      }
  return LieAlgebra<Scalar>(c);
}

/// Direct sum a ⊕ b, with a's basis first.
template <typename Scalar>
LieAlgebra<Scalar> direct_sum(const LieAlgebra<Scalar>& a, const LieAlgebra<Scalar>& b) {
  const Index na = a.dim(), nb = b.dim();
  StructureTensor<Scalar> c(na + nb);
  for (Index i = 0; i < na; ++i)
    for (Index j = 0; j < na; ++j)
      for (Index k = 0; k < na; ++k) c(i, j, k) = a.structure_constant(i, j, k);
  for (Index i = 0; i < nb; ++i)
    for (Index j = 0; j < nb; ++j)
      for (Index k = 0; k < nb; ++k) c(na + i, na + j, na + k) = b.structure_constant(i, j, k);
  return LieAlgebra<Scalar>(c);
}

/// Basis-adapted reductive split g = h ⊕ m: h is spanned by the first h_dim
/// basis vectors, m by the remaining ones.
struct ReductiveSplit {
  Index dim = 0;
  Index h_dim = 0;

  ReductiveSplit() = default;
  ReductiveSplit(Index dim_, Index h_dim_) : dim(dim_), h_dim(h_dim_) {
    if (dim_ <= 0 || h_dim_ < 0 || h_dim_ > dim_)
      throw InputError("reductive split: need 0 <= h_dim <= dim and dim > 0");
  }

  Index m_dim() const { return dim - h_dim; }
  bool in_h(Index i) const { return i < h_dim; }
  bool operator==(const ReductiveSplit&) const = default;
};

enum class Part { H, M };

template <typename Scalar>
Vector<Scalar> project(const ReductiveSplit& split, const Vector<Scalar>& x, Part part) {
  if (x.size() != split.dim) throw InputError("project: vector length does not match split");
  Vector<Scalar> out = x;
  if (part == Part::H)
    out.tail(split.m_dim()).setZero();
  else
    out.head(split.h_dim).setZero();
  return out;
}

/// Embeds an m-coordinate vector into g (zero h-part).
template <typename Scalar>
Vector<Scalar> embed_m(const ReductiveSplit& split, const Vector<Scalar>& xm) {
  if (xm.size() != split.m_dim())
    throw InputError("embed_m: vector length does not match m dimension");
  Vector<Scalar> out = Vector<Scalar>::Zero(split.dim);
  out.tail(split.m_dim()) = xm;
  return out;
}

template <typename Scalar>
Vector<Scalar> restrict_m(const ReductiveSplit& split, const Vector<Scalar>& x) {
  return x.tail(split.m_dim());
}

template <typename Scalar>
struct ReductiveReport {
  bool subalgebra_ok = true;
  bool ad_invariant_ok = true;
  Scalar max_defect = Scalar(0);
  std::string location;
  bool ok() const { return subalgebra_ok && ad_invariant_ok; }
};

/// Checks [h, h] ⊆ h and [h, m] ⊆ m on basis brackets.
template <typename Scalar>
ReductiveReport<Scalar> check_reductive(const LieAlgebra<Scalar>& L,
                                        const ReductiveSplit& split, double tol) {
  if (split.dim != L.dim()) throw InputError("check_reductive: split dimension mismatch");
  ReductiveReport<Scalar> report;
  Scalar sub_defect(0), inv_defect(0);
  const Index h = split.h_dim;
  auto note = [&](Scalar value, Scalar& bucket, Index i, Index j, Index k) {
    const Scalar a = std::abs(value);
    bucket = std::max(bucket, a);
    if (a > report.max_defect) {
      report.max_defect = a;
      std::ostringstream where;
      where << "[e" << i + 1 << ",e" << j + 1 << "] component e" << k + 1;
      report.location = where.str();
    }
  };
  for (Index i = 0; i < h; ++i) {
    for (Index j = 0; j < L.dim(); ++j) {
      const auto col = L.ad(i).col(j);
      if (j < h) {
        for (Index k = h; k < L.dim(); ++k) note(col(k), sub_defect, i, j, k);
      } else {
        for (Index k = 0; k < h; ++k) note(col(k), inv_defect, i, j, k);
      }
    }
  }
  report.subalgebra_ok = sub_defect <= Scalar(tol);
  report.ad_invariant_ok = inv_defect <= Scalar(tol);
  return report;
}

}  // namespace flagcurv
