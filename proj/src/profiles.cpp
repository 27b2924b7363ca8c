#include "henon/profiles.hpp"

#include <cmath>
#include <random>

#include "henon/error.hpp"

namespace henon {

RadialFunction gaussian_bump(const GridPtr& grid, double center, double width,
                             double amplitude) {
  if (!(width > 0.0)) throw Error(ErrorKind::Configuration, "bump width must be positive");
  return RadialFunction::sample(grid, [&](double r) {
    const double z = (r - center) / width;
    return amplitude * std::exp(-z * z);
  });
}

RadialFunction compact_bump(const GridPtr& grid, double center, double width,
                            double amplitude) {
  if (!(width > 0.0)) throw Error(ErrorKind::Configuration, "bump width must be positive");
  return RadialFunction::sample(grid, [&](double r) {
    const double z = (r - center) / width;
    const double b = 1.0 - z * z;
    return b > 0.0 ? amplitude * b * b : 0.0;
  });
}

std::vector<RadialFunction> bump_family(const GridPtr& grid, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double R = grid->radius();
  std::vector<RadialFunction> family;
  family.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double center = R / 3.0 * unif(rng);
    const double width = R / 30.0 * std::pow(6.0, unif(rng));
    const double amplitude = 0.5 * std::pow(4.0, unif(rng));
    family.push_back(gaussian_bump(grid, center, width, amplitude));
  }
  return family;
}

}  // namespace henon
