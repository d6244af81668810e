#pragma once

// Independent curvature oracle for homogeneous spaces with h != 0: the
// projection G -> G/H is a Riemannian submersion for the left-invariant
// metric on G that extends g by g0 on h, and O'Neill's formula gives
// <R(a,b)b,a>_{G/H} = <R(a,b)b,a>_G + 3/4 |[a,b]_h|^2 for a, b in m.

#include "flagcurv/flagcurv.hpp"

namespace flagcurv::testing {

inline double submersion_quadratic(const LieAlgebra<double>& L, const InvariantMetric<double>& g,
                                   const ConnectionTable<double>& conn, const Vector<double>& a,
                                   const Vector<double>& b) {
  const Vector<double> top = curvature(conn, L, a, b, b);
  const Vector<double> v = project(g.split(), bracket(L, a, b), Part::H);
  return top.dot(g.gram() * a) + 0.75 * v.dot(g.gram() * v);
}

/// <Z, R(U,Y)Y> on G/H by polarization of the quadratic form in U.
inline double submersion_ZRYY(const LieAlgebra<double>& L, const InvariantMetric<double>& g,
                              const Vector<double>& Z, const Vector<double>& U,
                              const Vector<double>& Y) {
  const auto conn = koszul_connection(L, g.gram());
  const Vector<double> plus = Z + U, minus = Z - U;
  return 0.25 * (submersion_quadratic(L, g, conn, plus, Y) -
                 submersion_quadratic(L, g, conn, minus, Y));
}

/// R(U,Y)Y in full coordinates (zero h-part).
inline Vector<double> submersion_R_vector(const LieAlgebra<double>& L,
                                          const InvariantMetric<double>& g, const Vector<double>& U,
                                          const Vector<double>& Y) {
  const auto& split = g.split();
  const Index m = split.m_dim();
  Vector<double> covector(m);
  for (Index k = 0; k < m; ++k)
    covector(k) = submersion_ZRYY(L, g, Vector<double>::Unit(split.dim, split.h_dim + k), U, Y);
  return embed_m(split, Vector<double>(g.gram_m().ldlt().solve(covector)));
}

}  // namespace flagcurv::testing
