#pragma once

#include <cstdint>
#include <vector>

#include "henon/radial.hpp"

namespace henon {

/// amplitude * exp(-((r - center)/width)^2), zero at R.
RadialFunction gaussian_bump(const GridPtr& grid, double center, double width,
                             double amplitude = 1.0);

/// amplitude * (1 - ((r - center)/width)^2)_+^2, zero at R.
RadialFunction compact_bump(const GridPtr& grid, double center, double width,
                            double amplitude = 1.0);

/// Seeded family of positive Gaussian bumps with centers in [0, R/3],
/// widths in [R/30, R/5] and amplitudes in [0.5, 2].
std::vector<RadialFunction> bump_family(const GridPtr& grid, int count, std::uint64_t seed);

}  // namespace henon
