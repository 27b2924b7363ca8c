#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "henon/error.hpp"
#include "henon/kernel.hpp"
#include "henon/oracle.hpp"

using namespace henon;
using std::numbers::pi;

namespace {

Params fractional(int N, double s, double p) {
  Params P;
  P.N = N;
  P.s = s;
  P.p = p;
  P.gamma = 0.0;
  return P;
}

// \int_{S^2} |r e_1 - rho sigma|^{-e} d sigma by adaptive polar-angle quadrature
double sphere_oracle(double r, double rho, double e) {
  auto f = [&](double th) {
    return std::sin(th) * std::pow(r * r + rho * rho - 2.0 * r * rho * std::cos(th), -0.5 * e);
  };
  return 2.0 * pi * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, pi, 15, 1e-14);
}

}  // namespace

TEST_CASE("angular kernel closed forms") {
  CHECK(angular_kernel(2.0, 1.0, 1, 0.5, 2.0) == doctest::Approx(10.0 / 9.0).epsilon(1e-15));
  CHECK(angular_kernel(2.0, 1.0, 3, 0.5, 2.0) == doctest::Approx(4.0 * pi / 9.0).epsilon(1e-13));
  CHECK(angular_kernel(2.0, 1.0, 3, 0.5, 2.0) ==
        doctest::Approx(sphere_oracle(2.0, 1.0, 4.0)).epsilon(1e-8));
  CHECK_THROWS_AS(angular_kernel(1.0, 1.0, 3, 0.5, 2.0), Error);
}

TEST_CASE("angular kernel against surface quadrature") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.05, 4.0);
  for (int t = 0; t < 20; ++t) {
    const double r = u(rng), rho = u(rng);
    for (double s : {0.3, 0.7}) {
      const double e = 3.0 + 2.0 * s;
      CHECK(angular_kernel(r, rho, 3, s, 2.0) == doctest::Approx(sphere_oracle(r, rho, e)).epsilon(1e-8));
      CHECK(angular_kernel_quadrature(r, rho, 3, s, 2.0) ==
            doctest::Approx(sphere_oracle(r, rho, e)).epsilon(1e-8));
    }
  }
}

TEST_CASE("angular kernel symmetry and sign") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.01, 10.0);
  for (int t = 0; t < 50; ++t) {
    const double r = u(rng), rho = u(rng);
    for (int N : {1, 2, 3, 4}) {
      const double a = angular_kernel(r, rho, N, 0.4, 2.5);
      const double b = angular_kernel(rho, r, N, 0.4, 2.5);
      CHECK(a > 0.0);
      CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
  }
}

TEST_CASE("kernel matrix structure") {
  auto g = make_grid(1, 4.0, 24, 1.0);
  const Params P = fractional(1, 0.5, 2.0);
  const KernelMatrix K = assemble_kernel_matrix(*g, P);
  CHECK(K.min_weight() >= 0.0);
  for (int c = 0; c < K.size(); ++c) {
    for (int d = c + 2; d < K.size(); ++d) {
      CHECK(K.pair_mass(c, d) == doctest::Approx(K.pair_mass(d, c)).epsilon(1e-14));
      CHECK(K.pair_mass(c, d) > 0.0);
      if (c >= 1 && d + 1 < K.size()) CHECK(K.pair_mass(c, d + 1) < K.pair_mass(c, d));
    }
  }
  Params local;
  CHECK_THROWS_AS(assemble_kernel_matrix(*g, local), Error);
}

TEST_CASE("seminorm basics") {
  auto g = make_grid(3, 5.0, 40, 1.5);
  const Params P = fractional(3, 0.5, 2.0);
  CHECK(gagliardo_seminorm(RadialFunction(g), P) == 0.0);

  Params local;
  auto f = RadialFunction::sample(g, [](double r) { return std::exp(-r * r); });
  CHECK(gagliardo_seminorm(f, local) == radial_gradient_norm(f, 2.0));

  const double a = gagliardo_integral(f, P);
  const double b = gagliardo_integral(f.scaled(-2.0), P);
  CHECK(b == doctest::Approx(4.0 * a).epsilon(1e-12));
  CHECK(a > 0.0);
}

TEST_CASE("stale kernel") {
  auto g = make_grid(3, 5.0, 30, 1.5);
  auto h = make_grid(3, 5.0, 31, 1.5);
  const Params P = fractional(3, 0.5, 2.0);
  const KernelMatrix K = assemble_kernel_matrix(*g, P);
  auto fg = RadialFunction::sample(g, [](double r) { return std::exp(-r); });
  auto fh = RadialFunction::sample(h, [](double r) { return std::exp(-r); });
  CHECK_NOTHROW(gagliardo_integral(fg, P, &K));
  CHECK_THROWS_AS(gagliardo_integral(fh, P, &K), Error);
  Params Q = P;
  Q.s = 0.6;
  CHECK_THROWS_AS(gagliardo_integral(fg, Q, &K), Error);
}

TEST_CASE("kernel cache round trip") {
  auto g = make_grid(2, 3.0, 20, 2.0);
  const Params P = fractional(2, 0.6, 2.0);
  const KernelMatrix K = assemble_kernel_matrix(*g, P);
  const auto dir = std::filesystem::temp_directory_path() / "henon_kernel_test";
  std::filesystem::create_directories(dir);
  const auto file = dir / "k.bin";
  K.save(file);
  const KernelMatrix L = KernelMatrix::load(file);
  auto f = RadialFunction::sample(g, [](double r) { return 1.0 / (1.0 + r * r); });
  CHECK(K.integral(f) == L.integral(f));
  CHECK(L.grid_hash() == g->hash());

  auto a = cached_kernel(*g, P, {}, dir);
  CHECK(std::filesystem::exists(kernel_cache_file(dir, *g, P, {})));
  CHECK(a->integral(f) == K.integral(f));

  {
    std::ofstream bad(dir / "bad.bin", std::ios::binary);
    bad << "not a kernel";
  }
  CHECK_THROWS_AS(KernelMatrix::load(dir / "bad.bin"), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("local integral equals full integral for localized profiles") {
  auto g = make_grid(3, 6.0, 60, 1.0);
  const Params P = fractional(3, 0.4, 2.5);
  const KernelMatrix K = assemble_kernel_matrix(*g, P);
  std::vector<double> v(g->size(), 0.0);
  for (int i = 20; i < 30; ++i) v[i] = std::sin(0.3 * i);
  RadialFunction f(g, v);
  CHECK(K.integral_local(f, 20, 30) == doctest::Approx(K.integral(f)).epsilon(1e-12));
}

TEST_CASE("kernel gradient matches finite differences") {
  auto g = make_grid(2, 4.0, 24, 1.5);
  const Params P = fractional(2, 0.5, 3.0);
  const KernelMatrix K = assemble_kernel_matrix(*g, P);
  auto f = RadialFunction::sample(g, [](double r) { return std::exp(-r * r) * (1.0 + 0.3 * r); });
  std::vector<double> grad(g->size(), 0.0);
  K.add_gradient(f, 1.0, grad);
  const double h = 1e-6;
  for (int i : {0, 1, 7, 15, 22}) {
    std::vector<double> up(f.values().begin(), f.values().end());
    std::vector<double> dn = up;
    up[i] += h;
    dn[i] -= h;
    const double fd = (K.integral(RadialFunction(g, up)) - K.integral(RadialFunction(g, dn))) / (2 * h);
    CHECK(grad[i] == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("monte carlo oracle") {
  auto g = make_grid(1, 4.0, 100, 1.0);
  const Params P = fractional(1, 0.5, 2.0);
  CHECK_THROWS_AS(seminorm_oracle(RadialFunction(g), P, 100, 1), Error);
  const OracleEstimate zero = seminorm_oracle(RadialFunction(g), P, 20000, 1);
  CHECK(zero.value == 0.0);
  CHECK(zero.standard_error == 0.0);

  auto tent = RadialFunction::sample(g, [](double r) { return std::max(0.0, 1.0 - r / 2.0); });
  const OracleEstimate a = seminorm_oracle(tent, P, 1000000, 3);
  const OracleEstimate b = seminorm_oracle(tent, P, 1000000, 3);
  CHECK(a.value == b.value);
  const double quad = gagliardo_integral(tent, P);
  CHECK(std::abs(a.value - quad) <= 3.0 * a.standard_error);
}
