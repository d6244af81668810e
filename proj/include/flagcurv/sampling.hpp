#pragma once

#include "flagcurv/errors.hpp"
#include "flagcurv/types.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <random>

namespace flagcurv {

using Rng = std::mt19937_64;

/// Uniform samples on unit spheres of an inner product space (R^n, gram).
/// A standard Gaussian z is mapped through L^{-T} (gram = L L^T), an isometry
/// onto (R^n, gram), so directions are uniform for the g-measure.
template <typename Scalar>
class SphereSampler {
 public:
  explicit SphereSampler(const Matrix<Scalar>& gram) : gram_(gram), llt_(gram) {
    if (llt_.info() != Eigen::Success) throw NumericError("sphere sampler: metric is not positive-definite");
  }

  Vector<Scalar> gaussian(Rng& rng) const {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector<Scalar> z(gram_.rows());
    for (Index i = 0; i < z.size(); ++i) z(i) = static_cast<Scalar>(normal(rng));
    return llt_.matrixU().solve(z);
  }

  /// Uniform on {v : <v,v> = 1}.
  Vector<Scalar> unit(Rng& rng) const {
    for (;;) {
      Vector<Scalar> v = gaussian(rng);
      const Scalar n2 = v.dot(gram_ * v);
      if (n2 > Scalar(1e-24)) return v / std::sqrt(n2);
    }
  }

  /// Uniform on the unit sphere of the g-orthogonal complement of the unit
  /// vector `pole`.
  Vector<Scalar> unit_orthogonal(const Vector<Scalar>& pole, Rng& rng) const {
    for (;;) {
      Vector<Scalar> v = gaussian(rng);
      v -= v.dot(gram_ * pole) * pole;
      v -= v.dot(gram_ * pole) * pole;
      const Scalar n2 = v.dot(gram_ * v);
      if (n2 > Scalar(1e-24)) return v / std::sqrt(n2);
    }
  }

 private:
  Matrix<Scalar> gram_;
  Eigen::LLT<Matrix<Scalar>> llt_;
};

}  // namespace flagcurv
