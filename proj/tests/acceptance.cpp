// One line per acceptance criterion; exit status 1 if any line fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "henon/error.hpp"
#include "henon/profiles.hpp"
#include "henon/solver.hpp"
#include "henon/verify.hpp"

using namespace henon;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Params reference() { return Params{}; }

SolveReport solve(const Params& P, double R, int M, double grading, const SolverConfig& c = {}) {
  const Model model(P, make_grid(P.N, R, M, grading));
  return solve_ground_state(model, c);
}

Outcome kernel_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  int passed = 0, total = 0;
  double worst = 0.0;
  for (int N : {1, 2, 3}) {
    for (double s : {0.3, 0.5, 0.7}) {
      for (double p : {2.0, 3.0}) {
        Params P;
        P.N = N;
        P.s = s;
        P.p = p;
        P.gamma = 0.0;
        const GridPtr grid = make_grid(N, 10.0, 200, 2.0);
        const Model model(P, grid);
        const KernelOracleCheck c =
            kernel_oracle_check(model, gaussian_bump(grid, 0.0, 1.5), 10'000'000, 7);
        worst = std::max(worst, std::abs(c.quadrature - c.oracle.value) / c.tolerance);
        passed += c.pass;
        ++total;
      }
    }
  }
  const double t = seconds_since(t0);
  return {passed == total && t < 600.0,
          fmt("%d/%d within max(2%%, 3 se), worst |diff|/tol %.3f, %.0f s (limit 600 s)", passed,
              total, worst, t)};
}

RadialFunction random_profile(const GridPtr& grid, std::mt19937_64& rng, bool positive) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double R = grid->radius();
  const double c = u(rng) * R / 3.0;
  const double w = R / 20.0 + u(rng) * R / 4.0;
  const double a = 0.5 + 1.5 * u(rng);
  const double k = 1.0 + 4.0 * u(rng);
  const double ph = 6.0 * u(rng);
  return RadialFunction::sample(grid, [&](double r) {
    const double bump = a * std::exp(-std::pow((r - c) / w, 2));
    return positive ? bump : bump * std::sin(k * r / w + ph);
  });
}

Outcome gradient_triples() {
  std::mt19937_64 rng(20);
  std::uniform_int_distribution<int> pick(0, 4);
  const std::vector<std::tuple<int, double, double, double, double>> sets = {
      {3, 1.0, 2.0, 1.0, 0.0}, {3, 1.0, 2.0, 1.0, 1.0}, {2, 1.0, 3.0, 0.5, 0.5},
      {3, 0.5, 2.0, 0.0, 0.0}, {1, 0.6, 2.5, 0.0, 0.5}};
  int passed = 0;
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto [N, s, p, gamma, alpha] = sets[pick(rng)];
    Params P;
    P.N = N;
    P.s = s;
    P.p = p;
    P.gamma = gamma;
    P.alpha = alpha;
    P.q = p + 1.5;
    const GridPtr grid = make_grid(N, 8.0, 40, 2.0);
    const Model model(P, grid);
    const GradientCheck g =
        gradient_check(model, random_profile(grid, rng, true), random_profile(grid, rng, false), 1e-5);
    worst = std::max(worst, g.relative_error);
    passed += g.relative_error < 1e-5;
  }
  return {passed == 20, fmt("%d/20 below 1e-5, worst relative error %.2e", passed, worst)};
}

bool positive_interior(const RadialFunction& f) {
  for (int i = 0; i + 1 < f.size(); ++i) {
    if (!(f[i] > 0.0)) return false;
  }
  return true;
}

SolveReport reference_solution;

Outcome existence(const Params& P, bool store, bool report_peak) {
  const auto t0 = std::chrono::steady_clock::now();
  const SolveReport base = solve(P, 15.0, 400, 2.0);
  const double t = seconds_since(t0);
  const SolveReport fine = solve(P, 15.0, 800, 2.0);
  const SolveReport wide = solve(P, 30.0, 400, 2.0);
  if (store) reference_solution = base;
  const double dm = rel(fine.nehari_level, base.nehari_level);
  const double dr = rel(wide.nehari_level, base.nehari_level);
  const bool ok_conv = base.converged && fine.converged && wide.converged &&
                       base.residual <= 1e-6 && fine.residual <= 1e-6 && wide.residual <= 1e-6;
  const bool ok = ok_conv && dm < 0.01 && dr < 0.01 && positive_interior(base.solution) && t < 120.0;
  std::string d = fmt("level %.6f residual %.1e, M->2M %.3f%%, R->2R %.3f%%, positive %s, %.2f s",
                      base.nehari_level, base.residual, 100 * dm, 100 * dr,
                      positive_interior(base.solution) ? "yes" : "no", t);
  if (report_peak) d += fmt(", peak_radius %.4g", base.diagnostics.peak_radius);
  return {ok, d};
}

Outcome threshold() {
  SolverConfig c;
  c.max_iterations = 20000;
  c.min_width = 1e-3;
  c.width_levels = 6;
  c.restarts = 18;
  auto pair = [&](double q) {
    Params P = reference();
    P.q = q;
    return std::pair{solve(P, 15.0, 400, 5.0, c), solve(P, 30.0, 800, 5.0, c)};
  };
  const auto [a5, b5] = pair(5.5);
  const auto [a6, b6] = pair(6.5);
  const double drift = rel(b5.nehari_level, a5.nehari_level);
  const double drop = (a6.nehari_level - b6.nehari_level) / a6.nehari_level;
  const double conc = b6.diagnostics.concentration_index;
  return {drift <= 0.02 && drop >= 0.2 && conc >= 0.5,
          fmt("q=5.5 drift %.3f%% (<= 2%%); q=6.5 level %.4f -> %.4f, drop %.1f%% (>= 20%%), "
              "concentration %.3f (>= 0.5)",
              100 * drift, a6.nehari_level, b6.nehari_level, 100 * drop, conc)};
}

Outcome mountain_pass() {
  const Model model(reference(), make_grid(3, 15.0, 400, 2.0));
  const MountainPassReport r = mountain_pass_geometry_check(model, 1e-2, 100, 1);
  return {r.condition_i && r.witness_found && r.pass,
          fmt("min J on sphere %.3e, witness t %.4g with J %.4g", r.min_energy, r.witness_t,
              r.witness_energy)};
}

Outcome degiorgi() {
  const Model model(reference(), reference_solution.solution.grid_ptr());
  const RadialFunction small = rescale_for_smallness(model, reference_solution.solution, 1e-3);
  const DeGiorgiTrace tr = degiorgi_trace(model, small, 30);
  const double ratio = tr.energies.back() / tr.energies.front();
  return {tr.monotone && tr.vanishes && tr.recursion_holds,
          fmt("monotone %s, E_30/E_0 %.2e (<= 1e-12), C-hat defined at %d levels, spread %.3g (< 10)",
              tr.monotone ? "yes" : "no", ratio, tr.chat_defined, tr.chat_spread)};
}

Outcome strauss() {
  auto max_c = [](int M) {
    const GridPtr grid = make_grid(3, 15.0, M, 2.0);
    const Model model(reference(), grid);
    double best = 0.0;
    for (const RadialFunction& f : bump_family(grid, 50, 1)) {
      best = std::max(best, strauss_check(model, f).C_est);
    }
    return best;
  };
  const double a = max_c(200);
  const double b = max_c(400);
  const double change = rel(b, a);
  return {std::isfinite(a) && change < 0.1,
          fmt("max C_est %.6f, refined %.6f, change %.3f%% (< 10%%)", a, b, 100 * change)};
}

Outcome interpolation() {
  const GridPtr grid = make_grid(3, 15.0, 400, 2.0);
  const Model model(reference(), grid);
  const auto family = bump_family(grid, 50, 3);
  const InterpolationResult res = interpolation_check(model, family);
  double drift = 0.0;
  for (const RadialFunction& f : family) {
    const double a = interpolation_ratio(model, f, res.exponents, EtaVariant::Homogeneous);
    const double b = interpolation_ratio(model, f.scaled(2.0), res.exponents, EtaVariant::Homogeneous);
    drift = std::max(drift, rel(b, a));
  }
  const bool exact = res.exponents.eta + res.exponents.omega == model.params().q;
  return {drift <= 1e-10 && std::isfinite(res.max_ratio) && exact,
          fmt("max drift under u->2u %.1e (<= 1e-10), max ratio %.4g, eta+omega=q %s", drift,
              res.max_ratio, exact ? "exact" : "inexact")};
}

Outcome scaling_and_pohozaev() {
  const Model model(reference(), reference_solution.solution.grid_ptr());
  const ScalingReport rep =
      scaling_decay_check(model, reference_solution.solution, {1.5, 2.0, 4.0}, 2.0, 1e-6);
  double worst = 0.0;
  for (const ScalingEntry& e : rep.entries) worst = std::max(worst, e.norm_ratio / e.decay_bound);

  double thr_err = 0.0;
  for (auto [N, p, s, gamma, alpha] :
       {std::tuple{3, 2.0, 1.0, 1.0, 0.0}, std::tuple{3, 2.0, 1.0, 1.0, 1.0},
        std::tuple{2, 3.0, 0.5, 0.0, 0.5}, std::tuple{3, 2.0, 0.5, 0.0, 0.0},
        std::tuple{4, 2.5, 0.7, 0.0, -0.5}}) {
    Params P;
    P.N = N;
    P.p = p;
    P.s = s;
    P.gamma = gamma;
    P.alpha = alpha;
    P.q = p + 1.0;
    const PohozaevReport r = pohozaev_sign_check(P, 1000, 1);
    const double exact = p * (N + alpha) / (N - s * p);
    thr_err = std::max(thr_err, rel(r.threshold, exact) / std::numeric_limits<double>::epsilon());
  }
  return {rep.pass && thr_err <= 4.0,
          fmt("max ||u_l||/(l^-tau ||u||) %.6f, quotient bounds %s, threshold error %.1f ulp",
              worst, rep.pass ? "hold" : "fail", thr_err)};
}

Verdict expected_verdict(const Params& P) {
  const double sp = P.s * P.p;
  const bool s_ok = 1.0 / P.p < P.s && sp < P.N;
  const bool a_ok = P.alpha > -sp;
  const double den = P.gamma > 0.0 ? P.N - P.p : P.N - sp;
  if (!(den > 0.0) || !s_ok || !a_ok) return Verdict::Unclassified;
  const double ps = P.p * (P.N + P.alpha) / den;
  const bool cond2 = P.alpha - P.beta + (P.q - P.p) * (1.0 - P.N) / P.p < 0.0;
  if (P.q > P.p && P.q < ps && cond2) return Verdict::ExistsGuaranteed;
  if (P.q > ps && P.beta > P.p * (1.0 - P.s)) return Verdict::NonexistenceGuaranteed;
  return Verdict::Unclassified;
}

Outcome classification() {
  int correct = 0, total = 0;
  Params P = reference();
  for (auto [q, want] : {std::pair{4.0, Verdict::ExistsGuaranteed},
                         std::pair{7.0, Verdict::NonexistenceGuaranteed},
                         std::pair{6.0, Verdict::Unclassified}}) {
    P.q = q;
    correct += classify(P).verdict == want;
    ++total;
  }
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dim(1, 4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    Params Q;
    Q.N = dim(rng);
    Q.p = 1.5 + 2.0 * u(rng);
    const bool local = u(rng) < 0.4;
    Q.gamma = local ? 0.25 + 0.75 * u(rng) : 0.0;
    Q.s = local ? 1.0 : 0.2 + 0.8 * u(rng);
    Q.alpha = -1.0 + 3.0 * u(rng);
    Q.beta = 0.1 + 4.0 * u(rng);
    Q.q = 1.1 + 9.0 * u(rng);
    const AdmissibilityReport r = classify(Q);
    correct += r.verdict == expected_verdict(Q) && !(r.q_range && r.q_supercritical);
    ++total;
  }
  return {correct == total, fmt("%d/%d exact", correct, total)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"kernel oracle equivalence", kernel_oracle},
      {"gradient correctness", gradient_triples},
      {"reference existence", [] { return existence(reference(), true, false); }},
      {"Henon weight existence",
       [] {
         Params P = reference();
         P.alpha = 1.0;
         return existence(P, false, true);
       }},
      {"threshold behavior", threshold},
      {"mountain-pass geometry", mountain_pass},
      {"De Giorgi trace", degiorgi},
      {"Strauss decay", strauss},
      {"interpolation", interpolation},
      {"scaling and Pohozaev", scaling_and_pohozaev},
      {"classification", classification},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
