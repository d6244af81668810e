#pragma once

// Named algebras and random generators shared by the test suites.

#include "flagcurv/flagcurv.hpp"

#include <random>

namespace flagcurv::testing {

using Vec = Vector<double>;
using Mat = Matrix<double>;

inline LieAlgebra<double> abelian(Index n) { return LieAlgebra<double>(StructureTensor<double>(n)); }

/// [e1,e2] = e3, [e2,e3] = e1, [e3,e1] = e2.
inline LieAlgebra<double> su2() {
  StructureTensor<double> c(3);
  c.set_bracket(0, 1, 2, 1.0);
  c.set_bracket(1, 2, 0, 1.0);
  c.set_bracket(2, 0, 1, 1.0);
  return LieAlgebra<double>(c);
}

/// su(2) ⊕ R with e4 central.
inline LieAlgebra<double> su2_plus_r() { return direct_sum(su2(), abelian(1)); }

/// [e1,e2] = e3.
inline LieAlgebra<double> heisenberg() {
  StructureTensor<double> c(3);
  c.set_bracket(0, 1, 2, 1.0);
  return LieAlgebra<double>(c);
}

/// Euclidean motions of the plane: [e1,e2] = e3, [e1,e3] = -e2.
inline LieAlgebra<double> e2() {
  StructureTensor<double> c(3);
  c.set_bracket(0, 1, 2, 1.0);
  c.set_bracket(0, 2, 1, -1.0);
  return LieAlgebra<double>(c);
}

/// su(2) with basis (e3, e1, e2): h = span{first vector} gives SU(2)/U(1).
/// The cyclic relabeling leaves the structure constants unchanged.
inline LieAlgebra<double> su2_u1() { return su2(); }

/// u(2) = su(2) ⊕ R in the basis (e3+e4, e1, e2, e3-e4); h = span{e3+e4}
/// gives S^3 = U(2)/U(1).
inline Mat u2_diag_basis() {
  Mat P = Mat::Zero(4, 4);
  P(2, 0) = 1;
  P(3, 0) = 1;
  P(0, 1) = 1;
  P(1, 2) = 1;
  P(2, 3) = 1;
  P(3, 3) = -1;
  return P;
}
inline LieAlgebra<double> u2_over_u1() { return change_basis(su2_plus_r(), u2_diag_basis()); }

inline Vec e(Index n, Index i) { return Vec::Unit(n, i); }

inline InvariantMetric<double> identity_metric(Index dim, Index h_dim) {
  return inner_from_phi<double>(Mat::Identity(dim, dim), Mat::Identity(dim - h_dim, dim - h_dim),
                                ReductiveSplit(dim, h_dim));
}

/// Random symmetric positive-definite matrix with eigenvalues >= floor.
inline Mat random_spd(Index n, std::mt19937_64& rng, double floor = 0.3) {
  std::normal_distribution<double> normal;
  Mat A(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) A(i, j) = normal(rng);
  return A * A.transpose() / double(n) + floor * Mat::Identity(n, n);
}

inline Vec random_vector(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vec v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

inline Mat random_invertible(Index n, std::mt19937_64& rng) {
  for (;;) {
    Mat A = Mat::Identity(n, n);
    std::normal_distribution<double> normal(0.0, 0.5);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) A(i, j) += normal(rng);
    if (std::abs(A.determinant()) > 0.2) return A;
  }
}

/// Random Lie algebra of dimension <= 6: a direct sum of small factors in a
/// random basis.
inline LieAlgebra<double> random_algebra(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 5);
  std::bernoulli_distribution stop(0.5);
  auto factor = [&]() {
    switch (pick(rng)) {
      case 0: return su2();
      case 1: return heisenberg();
      case 2: return e2();
      case 3: return abelian(2);
      case 4: return abelian(1);
      default: return su2();
    }
  };
  LieAlgebra<double> out = factor();
  while (out.dim() < 3 || (out.dim() < 5 && !stop(rng))) {
    const auto f = factor();
    if (out.dim() + f.dim() <= 6) out = direct_sum(out, f);
  }
  return change_basis(out, random_invertible(out.dim(), rng));
}

/// Compact algebra (sums of su(2) and R) in a random basis, with the
/// bi-invariant form carried along: g0 = P^T P.
struct CompactAlgebra {
  LieAlgebra<double> algebra;
  Mat g0;
};

inline CompactAlgebra random_compact_algebra(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 3);
  LieAlgebra<double> base = su2();
  switch (pick(rng)) {
    case 0: break;
    case 1: base = su2_plus_r(); break;
    case 2: base = direct_sum(su2(), su2()); break;
    default: base = direct_sum(su2_plus_r(), abelian(1)); break;
  }
  const Mat P = random_invertible(base.dim(), rng);
  return {change_basis(base, P), P.transpose() * P};
}

/// Vector with g-norm `norm`.
inline Vec scaled_to(const Vec& v, const Mat& gram, double norm) {
  return v * (norm / std::sqrt(v.dot(gram * v)));
}

}  // namespace flagcurv::testing
