#pragma once

#include "flagcurv/curvature.hpp"
#include "flagcurv/sampling.hpp"

#include <cstdint>

namespace flagcurv {

template <typename Scalar>
struct ScanSummary {
  std::int64_t samples = 0;
  Scalar min_K = Scalar(0);
  Scalar max_K = Scalar(0);
  Scalar mean_K = Scalar(0);
  std::int64_t argmin = -1;
  std::int64_t argmax = -1;
  Flag<Scalar> argmin_flag;
  Flag<Scalar> argmax_flag;
};

/// Draws `n_samples` flags (Y uniform on the g-unit sphere of m, U uniform on
/// the unit sphere of Y's complement in m) from a generator seeded with
/// `seed`, and summarizes K. Ties in min/max keep the lowest sample index.
template <typename Scalar>
ScanSummary<Scalar> scan_flags(const FinslerSpace<Scalar>& space, const CurvatureOptions& options,
                               std::int64_t n_samples, std::uint64_t seed) {
  const ReductiveSplit& split = space.split();
  if (split.m_dim() < 2) throw DomainError("scan_flags: m must have dimension >= 2 to carry a flag");
  if (n_samples <= 0) throw InputError("scan_flags: sample count must be positive");

  const SphereSampler<Scalar> sampler(space.metric().gram_m());
  Rng rng(seed);
  ScanSummary<Scalar> summary;
  summary.samples = n_samples;
  Scalar total(0);
  for (std::int64_t s = 0; s < n_samples; ++s) {
    const Vector<Scalar> ym = sampler.unit(rng);
    const Vector<Scalar> um = sampler.unit_orthogonal(ym, rng);
    const Flag<Scalar> flag{embed_m(split, ym), embed_m(split, um)};
    const auto report = flag_curvature(space, flag, options);
    total += report.K;
    if (s == 0 || report.K < summary.min_K) {
      summary.min_K = report.K;
      summary.argmin = s;
      summary.argmin_flag = report.flag;
    }
    if (s == 0 || report.K > summary.max_K) {
      summary.max_K = report.K;
      summary.argmax = s;
      summary.argmax_flag = report.flag;
    }
  }
  summary.mean_K = total / Scalar(n_samples);
  return summary;
}

}  // namespace flagcurv
