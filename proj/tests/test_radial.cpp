#include <cmath>
#include <numbers>

#include "doctest.h"
#include "henon/error.hpp"
#include "henon/radial.hpp"

using namespace henon;
using std::numbers::pi;

TEST_CASE("sphere area") {
  CHECK(sphere_area(1) == doctest::Approx(2.0));
  CHECK(sphere_area(2) == doctest::Approx(2.0 * pi));
  CHECK(sphere_area(3) == doctest::Approx(4.0 * pi));
  CHECK(sphere_area(4) == doctest::Approx(2.0 * pi * pi));
  CHECK_THROWS_AS(sphere_area(0), Error);
}

TEST_CASE("grid nodes") {
  auto g = make_grid(3, 1.0, 4, 1.0);
  REQUIRE(g->size() == 4);
  const double uniform[] = {0.25, 0.5, 0.75, 1.0};
  for (int i = 0; i < 4; ++i) CHECK(g->node(i) == doctest::Approx(uniform[i]).epsilon(1e-15));

  auto h = make_grid(3, 8.0, 4, 2.0);
  const double power[] = {0.5, 2.0, 4.5, 8.0};
  for (int i = 0; i < 4; ++i) CHECK(h->node(i) == doctest::Approx(power[i]).epsilon(1e-15));

  auto c = make_grid(3, 1.0, 64, 3.0);
  int inside = 0;
  for (double r : c->nodes()) inside += r <= 1.0 / 8.0 + 1e-15;
  CHECK(inside >= 32);

  CHECK_THROWS_AS(make_grid(3, -1.0, 10, 1.0), Error);
  CHECK_THROWS_AS(make_grid(3, 1.0, 2, 1.0), Error);
}

TEST_CASE("locate") {
  auto g = make_grid(2, 3.0, 30, 2.0);
  for (int c = 0; c < g->cell_count(); ++c) {
    const double mid = 0.5 * (g->cell_lo(c) + g->cell_hi(c));
    CHECK(g->locate(mid) == c);
  }
}

TEST_CASE("interpolation of nodal values") {
  auto g = make_grid(3, 2.0, 8, 1.0);
  auto f = RadialFunction::sample(g, [](double) { return 1.0; });
  CHECK(f[g->size() - 1] == 0.0);
  const double mid = 0.5 * (g->node(0) + g->node(1));
  const double v = interpolate(f, mid);
  CHECK(v >= std::min(f[0], f[1]));
  CHECK(v <= std::max(f[0], f[1]));
  CHECK(interpolate(f, 0.0) == f[0]);
  CHECK(interpolate(f, 2.0) == 0.0);
  CHECK(interpolate(f, 4.0) == 0.0);
  CHECK_THROWS_AS(interpolate(f, -1.0), Error);

  auto lin = RadialFunction::sample(g, [](double r) { return 3.0 - 1.5 * r; });
  const double r = 0.5 * (g->node(3) + g->node(4));
  CHECK(interpolate(lin, r) == doctest::Approx(3.0 - 1.5 * r));
}

TEST_CASE("weighted lp norms") {
  auto g = make_grid(3, 2.0, 16, 1.0);
  CHECK(weighted_lp_norm(RadialFunction(g), 2.0, 0.0) == 0.0);
  CHECK_THROWS_AS(weighted_lp_norm(RadialFunction(g), 2.0, -3.0), Error);

  // sharpening indicator of the unit ball
  double prev0 = 1e300, prev2 = 1e300;
  for (int M : {200, 800, 3200}) {
    auto h = make_grid(3, 2.0, M, 1.0);
    const double dr = 2.0 / M;
    auto f = RadialFunction::sample(h, [&](double r) {
      return std::clamp((1.0 + dr - r) / dr, 0.0, 1.0);
    });
    const double e0 = std::abs(std::pow(weighted_lp_norm(f, 2.0, 0.0), 2) - 4.0 * pi / 3.0);
    const double e2 = std::abs(std::pow(weighted_lp_norm(f, 2.0, 2.0), 2) - 4.0 * pi / 5.0);
    CHECK(e0 < prev0);
    CHECK(e2 < prev2);
    prev0 = e0;
    prev2 = e2;
  }
  CHECK(prev0 < 1e-2);
  CHECK(prev2 < 1e-2);
}

TEST_CASE("quadrature converges at second order") {
  // 4 pi \int r^2 e^{-2 r^2} dr = (pi/2)^{3/2}
  const double exact = std::pow(pi / 2.0, 1.5);
  double prev = 0.0;
  for (int M : {50, 100, 200, 400}) {
    auto g = make_grid(3, 6.0, M, 1.0);
    auto f = RadialFunction::sample(g, [](double r) { return std::exp(-r * r); });
    const double err = std::abs(std::pow(weighted_lp_norm(f, 2.0, 0.0), 2) - exact);
    if (prev > 0.0) CHECK(prev / err > 3.0);
    prev = err;
  }
}

TEST_CASE("gradient norm of a tent") {
  auto g1 = make_grid(1, 5.0, 20, 1.0);
  auto z = RadialFunction(g1);
  CHECK(radial_gradient_norm(z, 2.0) == 0.0);

  // the tent's first cell is flat, so compare against the nodal slope integral
  auto t1 = RadialFunction::sample(g1, [](double r) { return 1.0 - r / 5.0; });
  const double len1 = 5.0 - g1->node(0);
  CHECK(radial_gradient_norm(t1, 2.0) ==
        doctest::Approx(std::sqrt(2.0 * len1 / 25.0)).epsilon(1e-12));

  auto g3 = make_grid(3, 1.0, 50, 1.0);
  auto t3 = RadialFunction::sample(g3, [](double r) { return 1.0 - r; });
  const double r0 = g3->node(0);
  CHECK(radial_gradient_norm(t3, 2.0) ==
        doctest::Approx(std::sqrt(4.0 * pi / 3.0 * (1.0 - r0 * r0 * r0))).epsilon(1e-12));

  auto g = make_grid(3, 1.0, 4000, 1.0);
  auto t = RadialFunction::sample(g, [](double r) { return 1.0 - r; });
  CHECK(radial_gradient_norm(t, 2.0) == doctest::Approx(std::sqrt(4.0 * pi / 3.0)).epsilon(1e-6));
}

TEST_CASE("gradient of the lp integral matches finite differences") {
  auto g = make_grid(2, 3.0, 20, 1.5);
  auto f = RadialFunction::sample(g, [](double r) { return std::exp(-r) * (1.0 + r); });
  const CellQuadrature quad = weighted_quadrature(*g, 1.0);
  std::vector<double> grad(g->size(), 0.0);
  add_lp_integral_gradient(f, quad, 3.0, 1.0, grad);
  std::vector<double> gg(g->size(), 0.0);
  add_gradient_integral_gradient(f, 3.0, 1.0, gg);
  const double h = 1e-6;
  for (int i : {0, 3, 10, 18}) {
    std::vector<double> up(f.values().begin(), f.values().end());
    std::vector<double> dn = up;
    up[i] += h;
    dn[i] -= h;
    RadialFunction fu(g, up), fd(g, dn);
    const double fd_lp = (lp_integral(fu, quad, 3.0) - lp_integral(fd, quad, 3.0)) / (2 * h);
    const double fd_gr =
        (weighted_gradient_integral(fu, 3.0) - weighted_gradient_integral(fd, 3.0)) / (2 * h);
    CHECK(grad[i] == doctest::Approx(fd_lp).epsilon(1e-6));
    CHECK(gg[i] == doctest::Approx(fd_gr).epsilon(1e-6));
  }
}
