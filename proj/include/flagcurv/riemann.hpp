#pragma once

#include "flagcurv/metrics.hpp"

#include <vector>

namespace flagcurv {

/// Levi-Civita connection on left-invariant fields: gamma[i] has
/// ∇_{e_i} e_j in column j, so ∇_x y = sum_i x_i gamma[i] y.
template <typename Scalar>
struct ConnectionTable {
  std::vector<Matrix<Scalar>> gamma;

  Index dim() const { return static_cast<Index>(gamma.size()); }

  Vector<Scalar> covariant(const Vector<Scalar>& x, const Vector<Scalar>& y) const {
    Vector<Scalar> out = Vector<Scalar>::Zero(y.size());
    for (Index i = 0; i < dim(); ++i)
      if (x(i) != Scalar(0)) out.noalias() += x(i) * (gamma[i] * y);
    return out;
  }
};

/// Koszul formula for a left-invariant metric `gram` on the Lie group of L:
/// 2<∇_x y, z> = <[x,y],z> - <[y,z],x> + <[z,x],y>.
template <typename Scalar>
ConnectionTable<Scalar> koszul_connection(const LieAlgebra<Scalar>& L, const Matrix<Scalar>& gram) {
  const Index n = L.dim();
  if (gram.rows() != n || gram.cols() != n)
    throw InputError("koszul_connection: metric dimension mismatch");
  Eigen::LDLT<Matrix<Scalar>> solver(gram);
  ConnectionTable<Scalar> conn;
  conn.gamma.assign(static_cast<std::size_t>(n), Matrix<Scalar>::Zero(n, n));
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y) {
      Vector<Scalar> rhs(n);
      const Vector<Scalar> xy = L.ad(x).col(y);
      for (Index z = 0; z < n; ++z) {
        const Vector<Scalar> yz = L.ad(y).col(z);
        const Vector<Scalar> zx = L.ad(z).col(x);
        rhs(z) = xy.dot(gram.col(z)) - yz.dot(gram.col(x)) + zx.dot(gram.col(y));
      }
      conn.gamma[x].col(y) = solver.solve(Scalar(0.5) * rhs);
    }
  return conn;
}

/// Lie-group case only: the homogeneous-space metric must have trivial h.
template <typename Scalar>
ConnectionTable<Scalar> koszul_connection(const LieAlgebra<Scalar>& L,
                                          const InvariantMetric<Scalar>& g) {
  if (g.split().h_dim != 0)
    throw PreconditionError(
        "koszul_connection: unsupported configuration (h_dim != 0); use nat_reductive_R");
  return koszul_connection(L, g.gram());
}

/// max |<∇_x y, z> + <y, ∇_x z>| over basis triples.
template <typename Scalar>
Scalar metric_compatibility_defect(const ConnectionTable<Scalar>& conn, const Matrix<Scalar>& gram) {
  Scalar worst(0);
  for (Index x = 0; x < conn.dim(); ++x) {
    const Matrix<Scalar> s = gram * conn.gamma[x];
    worst = std::max(worst, (s + s.transpose()).cwiseAbs().maxCoeff());
  }
  return worst;
}

/// max |∇_x y - ∇_y x - [x,y]| over basis pairs.
template <typename Scalar>
Scalar torsion_defect(const ConnectionTable<Scalar>& conn, const LieAlgebra<Scalar>& L) {
  Scalar worst(0);
  for (Index x = 0; x < conn.dim(); ++x)
    for (Index y = 0; y < conn.dim(); ++y) {
      const Vector<Scalar> t = conn.gamma[x].col(y) - conn.gamma[y].col(x) - L.ad(x).col(y);
      worst = std::max(worst, t.cwiseAbs().maxCoeff());
    }
  return worst;
}

/// R(u,v)w = ∇_u ∇_v w - ∇_v ∇_u w - ∇_[u,v] w on left-invariant fields.
template <typename Scalar>
Vector<Scalar> curvature(const ConnectionTable<Scalar>& conn, const LieAlgebra<Scalar>& L,
                         const Vector<Scalar>& u, const Vector<Scalar>& v,
                         const Vector<Scalar>& w) {
  return conn.covariant(u, conn.covariant(v, w)) - conn.covariant(v, conn.covariant(u, w)) -
         conn.covariant(bracket(L, u, v), w);
}

/// Sectional curvature <R(u,x)x,u> / (<x,x><u,u> - <x,u>^2).
template <typename Scalar>
Scalar sectional(const LieAlgebra<Scalar>& L, const Matrix<Scalar>& gram,
                 const ConnectionTable<Scalar>& conn, const Vector<Scalar>& x,
                 const Vector<Scalar>& u, double tol_dep = 1e-12) {
  auto ip = [&](const Vector<Scalar>& a, const Vector<Scalar>& b) { return a.dot(gram * b); };
  const Scalar xx = ip(x, x), uu = ip(u, u), xu = ip(x, u);
  const Scalar area = xx * uu - xu * xu;
  if (!(xx > Scalar(0)) || !(uu > Scalar(0)) || area <= Scalar(tol_dep) * xx * uu)
    throw FlagError("sectional: vectors are linearly dependent");
  return ip(curvature(conn, L, u, x, x), u) / area;
}

namespace detail {

/// 1/4 [y,[u,y]_m]_m + [y,[u,y]_h], without checking natural reductivity.
template <typename Scalar>
Vector<Scalar> nat_reductive_R_unchecked(const LieAlgebra<Scalar>& L, const ReductiveSplit& split,
                                         const Vector<Scalar>& u, const Vector<Scalar>& y,
                                         double tol) {
  const Vector<Scalar> uy = bracket(L, u, y);
  const Vector<Scalar> m_part =
      project(split, bracket(L, y, project(split, uy, Part::M)), Part::M);
  const Vector<Scalar> h_term = bracket(L, y, project(split, uy, Part::H));
  if (split.h_dim > 0 && h_term.head(split.h_dim).cwiseAbs().maxCoeff() > Scalar(tol))
    throw PreconditionError("nat_reductive_R: [Y,[U,Y]_h] has a component in h; "
                            "the decomposition is not ad(h)-invariant");
  return Scalar(0.25) * m_part + project(split, h_term, Part::M);
}

}  // namespace detail

/// R(U,Y)Y for a naturally reductive homogeneous space:
/// 1/4 [Y,[U,Y]_m]_m + [Y,[U,Y]_h]. u and y are full-coordinate vectors in m.
template <typename Scalar>
Vector<Scalar> nat_reductive_R(const LieAlgebra<Scalar>& L, const InvariantMetric<Scalar>& g,
                               const Vector<Scalar>& u, const Vector<Scalar>& y,
                               double tol = 1e-9) {
  const auto nr = check_naturally_reductive(L, g, tol);
  if (!nr.ok)
    throw PreconditionError("nat_reductive_R: configuration is not naturally reductive (defect " +
                            std::to_string(static_cast<double>(nr.max_defect)) + " at " +
                            nr.location + ")");
  return detail::nat_reductive_R_unchecked(L, g.split(), u, y, tol);
}

}  // namespace flagcurv
