#include <cmath>

#include "doctest.h"
#include "henon/error.hpp"
#include "henon/profiles.hpp"
#include "henon/verify.hpp"

using namespace henon;

namespace {

const GridPtr& grid() {
  static const GridPtr g = make_grid(3, 12.0, 100, 1.5);
  return g;
}

}  // namespace

TEST_CASE("strauss ratio is degree-zero homogeneous") {
  Model m(Params{}, grid());
  auto f = gaussian_bump(grid(), 1.0, 2.0);
  const StraussResult a = strauss_check(m, f);
  const StraussResult b = strauss_check(m, f.scaled(5.0));
  CHECK(b.C_est == doctest::Approx(a.C_est).epsilon(1e-13));
  CHECK(std::isfinite(a.C_est));
  CHECK_THROWS_AS(strauss_check(m, RadialFunction(grid())), Error);
  Params P;
  P.gamma = 0.0;
  P.s = 0.4;
  Model mp(P, make_grid(3, 5.0, 20, 1.0));
  CHECK_THROWS_AS(strauss_check(mp, gaussian_bump(mp.grid_ptr(), 0.0, 1.0)), Error);
}

TEST_CASE("interpolation ratio homogeneity") {
  Model m(Params{}, grid());
  const InterpolationExponents ex = interpolation_exponents(m.params());
  for (const RadialFunction& f : bump_family(grid(), 10, 8)) {
    const double a = interpolation_ratio(m, f, ex, EtaVariant::Homogeneous);
    const double b = interpolation_ratio(m, f.scaled(2.0), ex, EtaVariant::Homogeneous);
    CHECK(std::abs(b / a - 1.0) < 1e-10);
    const double c = interpolation_ratio(m, f, ex, EtaVariant::Printed);
    const double d = interpolation_ratio(m, f.scaled(2.0), ex, EtaVariant::Printed);
    const double drift = m.params().q - ex.eta_printed - ex.omega;
    CHECK(d / c == doctest::Approx(std::pow(2.0, drift)).epsilon(1e-10));
  }
  const InterpolationResult r = interpolation_check(m, bump_family(grid(), 10, 8));
  CHECK(r.ratios.size() == 10);
  CHECK(std::isfinite(r.max_ratio));
}

TEST_CASE("probe without weak vanishing is not applicable") {
  Model m(Params{}, grid());
  auto f = gaussian_bump(grid(), 0.0, 2.0);
  const ProbeSequence s = probe_sequence(m, {f, f, f, f}, 0.1);
  CHECK(s.status == ProbeStatus::NotApplicable);
  CHECK(s.values.size() == 4);
}

TEST_CASE("translated bumps lose their source mass") {
  Model m(Params{}, make_grid(3, 40.0, 200, 1.0));
  const CompactnessReport r = compactness_probe(m);
  CHECK(r.translated.status == ProbeStatus::Pass);
  CHECK(r.concentrating.status != ProbeStatus::Fail);
  CHECK(r.pass);
}

TEST_CASE("translation escaping the domain is inconclusive") {
  Model m(Params{}, make_grid(3, 2.0, 60, 1.0));
  const CompactnessReport r = compactness_probe(m);
  CHECK(r.translated.status == ProbeStatus::Inconclusive);
  CHECK(!r.translated.note.empty());
}

TEST_CASE("level-set truncations of a constant") {
  Model m(Params{}, grid());
  auto f = RadialFunction::sample(grid(), [](double) { return 0.5; });
  const DeGiorgiTrace t = degiorgi_trace(m, f, 4);
  REQUIRE(t.truncations.size() == 5);
  for (int i = 0; i + 1 < f.size(); ++i) CHECK(t.truncations[0][i] == 0.5);
  for (int k = 1; k <= 4; ++k) CHECK(t.truncations[k].is_zero());
  CHECK(t.constants[0] == 1.0);
  CHECK(t.constants[1] == 81.0);
  CHECK(t.delta == 1.0);
  CHECK(t.limit_value == 0.0);
  CHECK_THROWS_AS(degiorgi_trace(m, f.scaled(-1.0), 3), Error);
}

TEST_CASE("level-set energies converge to the limit") {
  Model m(Params{}, grid());
  auto f = gaussian_bump(grid(), 0.0, 2.0, 1.6);
  const DeGiorgiTrace t = degiorgi_trace(m, f, 30);
  CHECK(t.monotone);
  CHECK(t.nested);
  CHECK(t.energies.back() == doctest::Approx(t.limit_value).epsilon(1e-6));
}

TEST_CASE("smallness rescaling") {
  Model m(Params{}, grid());
  auto f = gaussian_bump(grid(), 0.0, 2.0, 3.0);
  const RadialFunction g = rescale_for_smallness(m, f, 1e-3);
  CHECK(m.source_integral(g) == doctest::Approx(5e-4).epsilon(1e-12));
}

TEST_CASE("scaling decay") {
  Model m(Params{}, grid());
  CHECK(m.params().tau() == 0.5);
  CHECK(std::pow(4.0, -m.params().tau()) == 0.5);
  const ScalingReport z = scaling_decay_check(m, RadialFunction(grid()), {1.5, 2.0, 4.0}, 2.0);
  CHECK(z.pass);
  const ScalingReport r = scaling_decay_check(m, gaussian_bump(grid(), 0.0, 1.5), {1.5, 2.0, 4.0}, 2.0);
  CHECK(r.pass);
  for (const ScalingEntry& e : r.entries) {
    CHECK(e.norm_ok);
    CHECK(e.quotient_ok);
  }
  CHECK_THROWS_AS(scaling_decay_check(m, gaussian_bump(grid(), 0.0, 1.5), {0.5}, 2.0), Error);
  Params P;
  P.gamma = 0.0;
  P.s = 0.6;
  P.q = 3.0;
  P.beta = 0.8;  // = p(1 - s)
  Model mp(P, make_grid(3, 5.0, 20, 1.0));
  CHECK_THROWS_AS(scaling_decay_check(mp, gaussian_bump(mp.grid_ptr(), 0.0, 1.0), {2.0}, 2.0), Error);
}

TEST_CASE("pohozaev threshold") {
  Params P;
  P.q = 6.5;
  const PohozaevReport r = pohozaev_sign_check(P, 1000, 1);
  CHECK(r.threshold == 6.0);
  CHECK(r.threshold_matches);
  CHECK(r.samples_positive);
  CHECK(r.holds);
  P.q = 6.0;
  CHECK(!pohozaev_sign_check(P, 1000, 1).holds);
  P.q = 4.0;
  CHECK(!pohozaev_sign_check(P, 1000, 1).holds);
}

TEST_CASE("gradient checker") {
  Model m(Params{}, grid());
  auto f = gaussian_bump(grid(), 0.5, 2.0);
  auto d = compact_bump(grid(), 1.0, 3.0);
  const GradientCheck c = gradient_check(m, f, d, 1e-5);
  CHECK(c.relative_error < 1e-5);
}
