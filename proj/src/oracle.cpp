#include "henon/oracle.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "henon/error.hpp"
#include "henon/parallel.hpp"

namespace henon {

namespace {

constexpr std::int64_t kChunk = 1 << 16;

struct Moments {
  double sum = 0.0;
  double sumsq = 0.0;
};

}  // namespace

OracleEstimate seminorm_oracle(const RadialFunction& f, const Params& params,
                               std::int64_t samples, std::uint64_t seed) {
  params.validate();
  if (!params.fractional()) throw Error(ErrorKind::NotApplicable, "oracle needs s < 1");
  if (samples < 10000) throw Error(ErrorKind::Configuration, "oracle needs at least 1e4 samples");
  if (f.grid().dimension() != params.N) {
    throw Error(ErrorKind::Configuration, "grid dimension differs from N");
  }
  OracleEstimate est;
  est.samples = samples;
  if (f.is_zero()) return est;

  const int N = params.N;
  const double p = params.p;
  const double sp = params.s * params.p;
  const double R = f.grid().radius();
  const double inner = 0.25 * R;
  const double vol_outer = ball_volume(N) * std::pow(R, N);
  const double vol_inner = ball_volume(N) * std::pow(inner, N);
  const double omega = sphere_area(N);
  // Step length density: rho^{a1-1} below ell, rho^{-b-1} above.
  const double ell = R / 8.0;
  const double a1 = p - sp;
  const double b = sp;
  const double C = a1 * b / (a1 + b);
  const double p_below = b / (a1 + b);

  const std::int64_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<Moments> parts(chunks);
  parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t chunk) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(chunk)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> normal;
    std::vector<double> x(N), dir(N);
    auto direction = [&] {
      double norm = 0.0;
      do {
        norm = 0.0;
        for (int i = 0; i < N; ++i) {
          dir[i] = normal(rng);
          norm += dir[i] * dir[i];
        }
      } while (norm == 0.0);
      norm = std::sqrt(norm);
      for (double& v : dir) v /= norm;
    };
    const std::int64_t lo = static_cast<std::int64_t>(chunk) * kChunk;
    const std::int64_t n = std::min(kChunk, samples - lo);
    Moments m;
    for (std::int64_t i = 0; i < n; ++i) {
      const double ball = unif(rng) < 0.5 ? R : inner;
      const double rx = ball * std::pow(1.0 - unif(rng), 1.0 / N);
      direction();
      for (int k = 0; k < N; ++k) x[k] = rx * dir[k];
      const double u = 1.0 - unif(rng);
      double rho;
      double g;
      if (unif(rng) < p_below) {
        rho = ell * std::pow(u, 1.0 / a1);
        g = C * std::pow(rho / ell, a1 - 1.0) / ell;
      } else {
        rho = ell * std::pow(u, -1.0 / b);
        g = C * std::pow(rho / ell, -b - 1.0) / ell;
      }
      direction();
      double ry2 = 0.0;
      for (int k = 0; k < N; ++k) {
        const double y = x[k] + rho * dir[k];
        ry2 += y * y;
      }
      const double ry = std::sqrt(ry2);
      double value = 0.0;
      if (ry > rx && rho > 0.0) {
        const double diff = std::abs(interpolate(f, rx) - interpolate(f, ry));
        if (diff > 0.0) {
          const double q1 = 0.5 / vol_outer + (rx < inner ? 0.5 / vol_inner : 0.0);
          const double q2 = g / (omega * std::pow(rho, N - 1));
          value = 2.0 * std::pow(diff, p) * std::pow(rho, -(N + sp)) / (q1 * q2);
        }
      }
      m.sum += value;
      m.sumsq += value * value;
    }
    parts[chunk] = m;
  });
  Moments total;
  for (const Moments& m : parts) {
    total.sum += m.sum;
    total.sumsq += m.sumsq;
  }
  const double n = static_cast<double>(samples);
  const double mean = total.sum / n;
  const double var = std::max(0.0, total.sumsq / n - mean * mean);
  est.value = mean;
  est.standard_error = std::sqrt(var / n);
  return est;
}

}  // namespace henon
