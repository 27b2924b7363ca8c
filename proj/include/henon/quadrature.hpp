#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace henon {

/// Quadrature rule on the reference interval [0, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;

  std::size_t size() const { return x.size(); }
};

/// Gauss-Legendre rule with n points mapped to [0, 1]. Rules are built once
/// per order and shared.
const GaussRule& gauss_legendre(int n);

/// Integrates f over [a, b] with the given rule.
double integrate(const GaussRule& rule, double a, double b,
                 const std::function<double(double)>& f);

/// Integrates f over [a, b] where f has an integrable algebraic singularity
/// at x = a. The interval is split geometrically toward a over `levels`
/// dyadic pieces; the remaining piece [a, a + 2^-levels (b - a)] is
/// approximated by a power law with exponent `tail_exponent` fitted at its
/// right end (pass a negative exponent <= -1 to drop the remainder).
double integrate_dyadic(const GaussRule& rule, double a, double b, int levels,
                        double tail_exponent,
                        const std::function<double(double)>& f);

}  // namespace henon
