#include "henon/quadrature.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <cmath>
#include <map>
#include <mutex>

#include "henon/error.hpp"

namespace henon {

namespace {

GaussRule build_rule(int n) {
  // legendre_p_zeros returns the nonnegative roots of P_n in ascending order.
  const auto zeros = boost::math::legendre_p_zeros<double>(n);
  GaussRule rule;
  rule.x.reserve(n);
  rule.w.reserve(n);
  auto weight = [n](double z) {
    const double dp = boost::math::legendre_p_prime<double>(n, z);
    return 2.0 / ((1.0 - z * z) * dp * dp);
  };
  for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) {
    if (*it == 0.0) continue;
    rule.x.push_back(0.5 * (1.0 - *it));
    rule.w.push_back(0.5 * weight(*it));
  }
  if (n % 2 == 1) {
    rule.x.push_back(0.5);
    rule.w.push_back(0.5 * weight(0.0));
  }
  for (auto it = zeros.begin(); it != zeros.end(); ++it) {
    if (*it == 0.0) continue;
    rule.x.push_back(0.5 * (1.0 + *it));
    rule.w.push_back(0.5 * weight(*it));
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1 || n > 64) {
    throw Error(ErrorKind::Configuration,
                "Gauss-Legendre order must be in [1, 64], got " + std::to_string(n));
  }
  static std::mutex mutex;
  static std::map<int, GaussRule> rules;
  std::lock_guard lock(mutex);
  auto it = rules.find(n);
  if (it == rules.end()) it = rules.emplace(n, build_rule(n)).first;
  return it->second;
}

double integrate(const GaussRule& rule, double a, double b,
                 const std::function<double(double)>& f) {
  const double h = b - a;
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k) sum += rule.w[k] * f(a + h * rule.x[k]);
  return sum * h;
}

double integrate_dyadic(const GaussRule& rule, double a, double b, int levels,
                        double tail_exponent,
                        const std::function<double(double)>& f) {
  double sum = 0.0;
  double hi = b;
  for (int level = 0; level < levels; ++level) {
    const double lo = a + 0.5 * (hi - a);
    sum += integrate(rule, lo, hi, f);
    hi = lo;
  }
  if (tail_exponent > -1.0) {
    const double eps = hi - a;
    sum += f(hi) * eps / (tail_exponent + 1.0);
  }
  return sum;
}

}  // namespace henon
