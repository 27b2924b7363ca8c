#pragma once

#include <cstdint>

#include "henon/params.hpp"
#include "henon/radial.hpp"

namespace henon {

struct OracleEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::int64_t samples = 0;
};

/// Monte Carlo estimate of
///   [f]^p = \int_{R^N}\int_{R^N} |f(|x|) - f(|y|)|^p |x - y|^{-(N+sp)} dx dy
/// sampled directly in R^N, independent of the radial kernel reduction.
/// Deterministic for a given seed regardless of thread count.
/// Throws Error(Configuration) for fewer than 10^4 samples and
/// Error(NotApplicable) for s = 1.
OracleEstimate seminorm_oracle(const RadialFunction& f, const Params& params,
                               std::int64_t samples, std::uint64_t seed);

}  // namespace henon
