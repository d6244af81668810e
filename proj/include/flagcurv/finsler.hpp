#pragma once

#include "flagcurv/metrics.hpp"

#include <array>
#include <cmath>

namespace flagcurv {

/// F = (alpha + beta)^2 / alpha with alpha(y) = sqrt(<y,y>) and
/// beta(y) = <X, y>. `gram` is the Riemannian inner product, `drift` is X.
template <typename Scalar>
struct FinslerData {
  Matrix<Scalar> gram;
  Vector<Scalar> drift;

  Scalar inner(const Vector<Scalar>& a, const Vector<Scalar>& b) const { return a.dot(gram * b); }

  template <typename NewScalar>
  FinslerData<NewScalar> cast() const {
    return {gram.template cast<NewScalar>(), drift.template cast<NewScalar>()};
  }
};

template <typename Scalar>
struct FinslerValidity {
  bool ok = false;
  Scalar norm_X = Scalar(0);
  Scalar margin = Scalar(0);
};

/// F is a Finsler metric iff ||X||_g < 1; accepted when ||X|| < 1 - tol_boundary.
template <typename Scalar>
FinslerValidity<Scalar> validate_finsler(const FinslerData<Scalar>& d, double tol_boundary = 1e-12) {
  FinslerValidity<Scalar> v;
  v.norm_X = std::sqrt(d.inner(d.drift, d.drift));
  v.margin = Scalar(1) - v.norm_X;
  v.ok = v.norm_X < Scalar(1) - Scalar(tol_boundary);
  return v;
}

template <typename Scalar>
Scalar F_eval(const FinslerData<Scalar>& d, const Vector<Scalar>& y) {
  const Scalar alpha2 = d.inner(y, y);
  if (!(alpha2 > Scalar(0))) throw DomainError("F_eval: y must be nonzero");
  const Scalar alpha = std::sqrt(alpha2);
  const Scalar s = alpha + d.inner(d.drift, y);
  return s * s / alpha;
}

/// The printed four-block expansion of g_Y(U,V), evaluated for both argument
/// orders. The printed expression is not symmetric in (U,V); the fundamental
/// tensor is its symmetric part.
template <typename Scalar>
struct FundamentalTensorTerms {
  std::array<Scalar, 4> uv{};
  std::array<Scalar, 4> vu{};

  Scalar raw_uv() const { return uv[0] + uv[1] + uv[2] + uv[3]; }
  Scalar raw_vu() const { return vu[0] + vu[1] + vu[2] + vu[3]; }
  Scalar value() const { return Scalar(0.5) * (raw_uv() + raw_vu()); }
  Scalar asymmetry() const { return raw_uv() - raw_vu(); }
};

namespace detail {

template <typename Scalar>
std::array<Scalar, 4> printed_gy_blocks(const FinslerData<Scalar>& d, const Vector<Scalar>& Y,
                                        const Vector<Scalar>& U, const Vector<Scalar>& V) {
  const Scalar yy = d.inner(Y, Y);
  if (!(yy > Scalar(0))) throw DomainError("g_Y: flagpole Y must be nonzero");
  const Vector<Scalar>& X = d.drift;
  const Scalar a = std::sqrt(yy);
  const Scalar b = d.inner(X, Y);
  const Scalar s = a + b;
  const Scalar xu = d.inner(X, U), xv = d.inner(X, V);
  const Scalar yu = d.inner(Y, U), yv = d.inner(Y, V);
  const Scalar uv = d.inner(U, V);
  const Scalar s2 = s * s, s3 = s2 * s, s4 = s2 * s2;

  std::array<Scalar, 4> t;
  t[0] = Scalar(4) * s3 / std::pow(a, 5) * (xv * yu - yv * xu);
  t[1] = Scalar(2) * s2 / yy *
         (uv + xu * xv - b * yv * yu / (a * yy) + (xu * yv + b * uv + xv * yu) / a);
  t[2] = s4 / (yy * yy * yy) * (Scalar(4) * yu * yv - uv * yy);
  t[3] = Scalar(4) * s2 / yy * (yv / a + xv) *
         (yu / a + xu - Scalar(2) * yu / a - Scalar(2) * b * yu / yy);
  return t;
}

}  // namespace detail

template <typename Scalar>
FundamentalTensorTerms<Scalar> g_Y_closed_terms(const FinslerData<Scalar>& d,
                                                const Vector<Scalar>& Y, const Vector<Scalar>& u,
                                                const Vector<Scalar>& v) {
  FundamentalTensorTerms<Scalar> terms;
  terms.uv = detail::printed_gy_blocks(d, Y, u, v);
  terms.vu = detail::printed_gy_blocks(d, Y, v, u);
  return terms;
}

/// Closed-form fundamental tensor g_Y(u, v) (symmetric part of the printed
/// expansion).
template <typename Scalar>
Scalar g_Y_closed(const FinslerData<Scalar>& d, const Vector<Scalar>& Y, const Vector<Scalar>& u,
                  const Vector<Scalar>& v) {
  return g_Y_closed_terms(d, Y, u, v).value();
}

/// g_Y as a matrix in the coordinate basis.
template <typename Scalar>
Matrix<Scalar> fundamental_tensor(const FinslerData<Scalar>& d, const Vector<Scalar>& Y) {
  const Index n = Y.size();
  Matrix<Scalar> out(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j) {
      out(i, j) = g_Y_closed<Scalar>(d, Y, Vector<Scalar>::Unit(n, i), Vector<Scalar>::Unit(n, j));
      out(j, i) = out(i, j);
    }
  return out;
}

namespace detail {

template <typename Scalar>
Scalar F_squared_guarded(const FinslerData<Scalar>& d, const Vector<Scalar>& y) {
  if (!(d.inner(y, y) > Scalar(0)))
    throw DomainError("g_Y_fd: stencil leaves the domain of F (alpha <= 0); reduce the step");
  const Scalar f = F_eval(d, y);
  return f * f;
}

template <typename Scalar>
Scalar central_mixed(const FinslerData<Scalar>& d, const Vector<Scalar>& Y,
                     const Vector<Scalar>& u, const Vector<Scalar>& v, Scalar h) {
  const Scalar fpp = F_squared_guarded<Scalar>(d, Y + h * u + h * v);
  const Scalar fpm = F_squared_guarded<Scalar>(d, Y + h * u - h * v);
  const Scalar fmp = F_squared_guarded<Scalar>(d, Y - h * u + h * v);
  const Scalar fmm = F_squared_guarded<Scalar>(d, Y - h * u - h * v);
  return Scalar(0.5) * (fpp - fpm - fmp + fmm) / (Scalar(4) * h * h);
}

}  // namespace detail

/// Central-difference approximation of 1/2 d^2/ds dt F^2(Y + s u + t v) at 0.
/// With `richardson`, combines steps h and h/2 to cancel the O(h^2) term.
/// Evaluate with Scalar = long double when the result is used as an oracle:
/// at h = 1e-5 double-precision cancellation alone is ~1e-6 relative.
template <typename Scalar>
Scalar g_Y_fd(const FinslerData<Scalar>& d, const Vector<Scalar>& Y, const Vector<Scalar>& u,
              const Vector<Scalar>& v, Scalar step = Scalar(1e-5), bool richardson = false) {
  if (!(step > Scalar(0))) throw DomainError("g_Y_fd: step must be positive");
  if (!(d.inner(Y, Y) > Scalar(0))) throw DomainError("g_Y_fd: flagpole Y must be nonzero");
  const Scalar coarse = detail::central_mixed(d, Y, u, v, step);
  if (!richardson) return coarse;
  const Scalar fine = detail::central_mixed(d, Y, u, v, step / Scalar(2));
  return (Scalar(4) * fine - coarse) / Scalar(3);
}

/// Directional derivative of F at y along v, by central differences.
template <typename Scalar>
Scalar F_directional_fd(const FinslerData<Scalar>& d, const Vector<Scalar>& y,
                        const Vector<Scalar>& v, Scalar step = Scalar(1e-5)) {
  return (F_eval<Scalar>(d, y + step * v) - F_eval<Scalar>(d, y - step * v)) /
         (Scalar(2) * step);
}

template <typename Scalar>
struct IdentityCheck {
  Scalar lhs = Scalar(0);
  Scalar rhs = Scalar(0);
  Scalar defect = Scalar(0);
};

/// g_Y(Y,Y) g_Y(U,U) - g_Y(U,Y)^2 against (1+<X,Y>)^6 (2<X,U>^2 - <X,Y>^2 + 1)
/// for a g-orthonormal flag.
template <typename Scalar>
IdentityCheck<Scalar> denominator_identity(const FinslerData<Scalar>& d, const Flag<Scalar>& flag,
                                           double tol_orthonormal = 1e-10) {
  if (orthonormality_defect(d.gram, flag) > Scalar(tol_orthonormal))
    throw PreconditionError("denominator_identity: flag is not g-orthonormal");
  const Vector<Scalar>& Y = flag.Y;
  const Vector<Scalar>& U = flag.U;
  IdentityCheck<Scalar> out;
  const Scalar gyy = g_Y_closed(d, Y, Y, Y);
  const Scalar guu = g_Y_closed(d, Y, U, U);
  const Scalar guy = g_Y_closed(d, Y, U, Y);
  out.lhs = gyy * guu - guy * guy;
  const Scalar xy = d.inner(d.drift, Y), xu = d.inner(d.drift, U);
  out.rhs = std::pow(Scalar(1) + xy, 6) * (Scalar(2) * xu * xu - xy * xy + Scalar(1));
  out.defect = std::abs(out.lhs - out.rhs);
  return out;
}

}  // namespace flagcurv
