// henon: solve, sweep and verify the radial mixed local-nonlocal Henon problem.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "henon/error.hpp"
#include "henon/functional.hpp"
#include "henon/io.hpp"
#include "henon/kernel.hpp"
#include "henon/profiles.hpp"
#include "henon/solver.hpp"
#include "henon/sweep.hpp"
#include "henon/verify.hpp"

namespace {

using namespace henon;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  int N = 3;
  std::string p = "2", q = "4", s = "1", gamma = "1", alpha = "0", beta = "2";
  double R = 15.0;
  int M = 400;
  double grading = 2.0;
  double tol = 1e-6;
  int max_iter = 5000;
  int restarts = 3;
  std::uint64_t seed = 1;
  double samples = 1e6;
  double min_width = 0.0;
  int width_levels = 1;
  std::string out;
  std::string plot;
  std::string initial;
  bool classify_only = false;
  std::string suite;
};

double number(const std::string& name, const std::string& text) {
  const Range r = parse_range(text);
  if (r.start != r.stop) throw UsageError("--" + name + " takes a single value here");
  return r.start;
}

Params params_from(const Options& o) {
  Params P;
  P.N = o.N;
  P.p = number("p", o.p);
  P.q = number("q", o.q);
  P.s = number("s", o.s);
  P.gamma = number("gamma", o.gamma);
  P.alpha = number("alpha", o.alpha);
  P.beta = number("beta", o.beta);
  return P;
}

SolverConfig solver_from(const Options& o) {
  SolverConfig c;
  c.max_iterations = o.max_iter;
  c.residual_tolerance = o.tol;
  c.restarts = o.restarts;
  c.seed = o.seed;
  c.min_width = o.min_width;
  c.width_levels = o.width_levels;
  return c;
}

void add_common(CLI::App* app, Options& o) {
  app->add_option("--N", o.N, "dimension");
  app->add_option("--p", o.p, "operator exponent");
  app->add_option("--q", o.q, "source exponent");
  app->add_option("--s", o.s, "fractional order in (0, 1]");
  app->add_option("--gamma", o.gamma, "weight of the local part");
  app->add_option("--alpha", o.alpha, "source weight exponent");
  app->add_option("--beta", o.beta, "confinement weight exponent");
  app->add_option("--R", o.R, "truncation radius");
  app->add_option("--M", o.M, "grid nodes");
  app->add_option("--grading", o.grading, "node grading exponent");
  app->add_option("--tol", o.tol, "residual tolerance");
  app->add_option("--max-iter", o.max_iter, "iteration cap per restart");
  app->add_option("--restarts", o.restarts, "number of restarts");
  app->add_option("--min-width", o.min_width, "smallest initial bump width");
  app->add_option("--width-levels", o.width_levels, "initial bump widths between R/8 and --min-width");
  app->add_option("--seed", o.seed, "random seed");
  app->add_option("--out", o.out, "output file (default: standard output)");
  app->set_config("--config", "", "key = value configuration file");
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_text(o.out, text);
  }
}

int run_solve(const Options& o) {
  const Params P = params_from(o);
  P.validate();
  if (!(P.q > P.p)) throw UsageError("q must exceed p");
  const AdmissibilityReport cls = classify(P);
  std::cerr << "classification: " << to_string(cls.verdict) << '\n';
  if (cls.verdict == Verdict::NonexistenceGuaranteed) {
    std::cerr << "warning: parameters lie in the nonexistence region; running anyway\n";
  }
  const GridPtr grid = make_grid(P.N, o.R, o.M, o.grading);
  const Model model(P, grid);
  std::optional<RadialFunction> initial;
  if (!o.initial.empty()) {
    Params stored;
    RadialFunction f = solution_from_json(Json::parse(read_text(o.initial)), &stored);
    initial = RadialFunction(grid, std::vector<double>(f.values().begin(), f.values().end()));
  }
  const SolveReport rep = solve_ground_state(model, solver_from(o), initial);
  emit(o, to_json(rep, P).dump(2) + "\n");
  std::cerr << "converged=" << (rep.converged ? "true" : "false")
            << " residual=" << format_double(rep.residual)
            << " nehari_level=" << format_double(rep.nehari_level)
            << " iterations=" << rep.iterations << '\n';
  return rep.converged ? kExitOk : kExitFailure;
}

int run_sweep_command(const Options& o) {
  SweepSpec spec;
  spec.base.N = o.N;
  const std::pair<const char*, const std::string*> fields[] = {
      {"q", &o.q}, {"alpha", &o.alpha}, {"beta", &o.beta},
      {"gamma", &o.gamma}, {"s", &o.s}, {"p", &o.p}};
  for (const auto& [name, text] : fields) {
    const Range r = parse_range(*text);
    const bool swept = text->find(':') != std::string::npos;
    if (swept) {
      if (r.values().empty()) throw UsageError(std::string("empty range for --") + name);
      spec.ranges.emplace_back(name, r);
    }
    Params& b = spec.base;
    const double v = r.start;
    if (std::string(name) == "q") b.q = v;
    else if (std::string(name) == "alpha") b.alpha = v;
    else if (std::string(name) == "beta") b.beta = v;
    else if (std::string(name) == "gamma") b.gamma = v;
    else if (std::string(name) == "s") b.s = v;
    else b.p = v;
  }
  if (spec.ranges.empty()) throw UsageError("sweep needs at least one start:stop:step range");
  spec.R = o.R;
  spec.M = o.M;
  spec.grading = o.grading;
  spec.solver = solver_from(o);
  spec.classify_only = o.classify_only;
  const SweepResult result = run_sweep(spec);
  for (const std::string& line : result.skipped) std::cerr << line << '\n';
  std::ostringstream csv;
  write_csv(csv, result.rows);
  emit(o, csv.str());
  std::string plot = o.plot;
  if (plot.empty() && !o.out.empty() && spec.ranges.size() >= 2) plot = o.out + ".plot.csv";
  if (!plot.empty()) {
    std::ostringstream pd;
    write_plot_data(pd, spec, result.rows);
    write_text(plot, pd.str());
  }
  return kExitOk;
}

struct SuiteResult {
  Json records = Json::array();
  bool pass = true;

  void add(Json record) {
    pass = pass && record["pass"].get<bool>();
    std::cerr << (record["pass"].get<bool>() ? "PASS " : "FAIL ")
              << record["name"].get<std::string>() << '\n';
    records.push_back(std::move(record));
  }
};

RadialFunction random_profile(const GridPtr& grid, std::mt19937_64& rng, bool positive) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double R = grid->radius();
  const double center = 0.3 * R * unif(rng);
  const double width = R * (0.05 + 0.2 * unif(rng));
  const RadialFunction b = gaussian_bump(grid, center, width, 0.5 + unif(rng));
  std::vector<double> v(grid->size(), 0.0);
  for (int i = 0; i + 1 < grid->size(); ++i) {
    const double noise = 0.2 * (2.0 * unif(rng) - 1.0);
    v[i] = positive ? b[i] * (1.0 + noise) + 0.01 * unif(rng) : b[i] * noise + 0.1 * (unif(rng) - 0.5);
  }
  return RadialFunction(grid, std::move(v));
}

int run_verify(const Options& o) {
  static const std::vector<std::string> suites = {"strauss", "interpolation", "compactness",
                                                  "degiorgi", "scaling", "pohozaev",
                                                  "kernel-oracle", "gradient"};
  if (std::find(suites.begin(), suites.end(), o.suite) == suites.end()) {
    throw UsageError("unknown suite '" + o.suite + "'");
  }
  Params P = params_from(o);
  if (o.suite == "kernel-oracle" && P.s == 1.0) {
    P.s = 0.5;
    P.gamma = 0.0;
  }
  P.validate();
  SuiteResult out;
  const auto seed = o.seed;

  if (o.suite == "strauss") {
    auto max_c = [&](int M) {
      const GridPtr grid = make_grid(P.N, o.R, M, o.grading);
      const Model model(P, grid);
      double best = 0.0;
      for (const RadialFunction& f : bump_family(grid, 50, seed)) {
        best = std::max(best, strauss_check(model, f).C_est);
      }
      return best;
    };
    const double a = max_c(o.M);
    const double b = max_c(2 * o.M);
    const double change = std::abs(b - a) / a;
    out.add(check_record("strauss", P, std::isfinite(a) && change < 0.1, change, 0.1, 0.0,
                         Json{{"max_C_est", a}, {"max_C_est_refined", b}}));
  } else if (o.suite == "interpolation") {
    const GridPtr grid = make_grid(P.N, o.R, o.M, o.grading);
    const Model model(P, grid);
    const auto family = bump_family(grid, 20, seed);
    const InterpolationResult res = interpolation_check(model, family);
    double drift = 0.0;
    for (const RadialFunction& f : family) {
      const double a = interpolation_ratio(model, f, res.exponents, EtaVariant::Homogeneous);
      const double b = interpolation_ratio(model, f.scaled(2.0), res.exponents, EtaVariant::Homogeneous);
      drift = std::max(drift, std::abs(b - a) / a);
    }
    const double sum = res.exponents.eta + res.exponents.omega;
    const bool pass = drift <= 1e-10 && std::isfinite(res.max_ratio) && sum == P.q;
    out.add(check_record("interpolation", P, pass, drift, 1e-10, 0.0,
                         Json{{"max_ratio", res.max_ratio},
                              {"max_ratio_printed_eta", res.max_ratio_printed},
                              {"printed_eta_drift_exponent", res.drift_exponent},
                              {"eta", res.exponents.eta},
                              {"omega", res.exponents.omega},
                              {"eta_printed", res.exponents.eta_printed}}));
  } else if (o.suite == "compactness") {
    const GridPtr grid = make_grid(P.N, o.R, o.M, o.grading);
    const Model model(P, grid);
    const CompactnessReport rep = compactness_probe(model);
    const double ratio = rep.translated.values.empty()
                             ? 0.0
                             : rep.translated.values.back() / rep.translated.values.front();
    out.add(check_record("compactness", P, rep.pass, ratio, 0.1, 0.0,
                         Json{{"translated", to_json(rep.translated)},
                              {"concentrating", to_json(rep.concentrating)}}));
  } else if (o.suite == "degiorgi") {
    if (!(P.q > P.p)) throw UsageError("q must exceed p");
    const GridPtr grid = make_grid(P.N, o.R, o.M, o.grading);
    const Model model(P, grid);
    const SolveReport sol = solve_ground_state(model, solver_from(o));
    const RadialFunction small = rescale_for_smallness(model, sol.solution, 1e-3);
    const DeGiorgiTrace tr = degiorgi_trace(model, small, 30);
    const bool pass = tr.vanishes && tr.monotone && tr.nested && tr.recursion_holds;
    out.add(check_record("degiorgi", P, pass, tr.energies.back() / tr.energies.front(), 1e-12,
                         0.0, to_json(tr)));
  } else if (o.suite == "scaling") {
    const GridPtr grid = make_grid(P.N, o.R, o.M, o.grading);
    const Model model(P, grid);
    const RadialFunction f = gaussian_bump(grid, 0.0, 1.0);
    const ScalingReport rep = scaling_decay_check(model, f, {1.5, 2.0, 4.0}, 2.0);
    Json entries = Json::array();
    double worst = 0.0;
    for (const ScalingEntry& e : rep.entries) {
      worst = std::max(worst, e.norm_ratio / e.decay_bound);
      entries.push_back(Json{{"lambda", e.lambda},
                             {"norm_ratio", e.norm_ratio},
                             {"decay_bound", e.decay_bound},
                             {"quotient_lhs", e.quotient_lhs},
                             {"quotient_rhs", e.quotient_rhs},
                             {"constant", e.constant}});
    }
    out.add(check_record("scaling", P, rep.pass, worst, 1.0, rep.tolerance,
                         Json{{"tau", rep.tau}, {"entries", entries}}));
  } else if (o.suite == "pohozaev") {
    const PohozaevReport rep = pohozaev_sign_check(P, 1000, seed);
    std::cerr << "threshold " << format_double(rep.threshold) << '\n';
    out.add(check_record("pohozaev", P, rep.threshold_matches && rep.sign_consistent,
                         rep.threshold, rep.p_star, 0.0,
                         Json{{"holds", rep.holds}, {"samples_positive", rep.samples_positive}}));
  } else if (o.suite == "kernel-oracle") {
    const GridPtr grid = make_grid(P.N, o.R, o.M, o.grading);
    const Model model(P, grid);
    const RadialFunction f = gaussian_bump(grid, 0.0, o.R / 8.0);
    const auto samples = static_cast<std::int64_t>(std::llround(o.samples));
    const KernelOracleCheck chk = kernel_oracle_check(model, f, samples, seed);
    out.add(check_record("kernel-oracle", P, chk.pass, chk.quadrature, chk.oracle.value,
                         chk.tolerance,
                         Json{{"standard_error", chk.oracle.standard_error},
                              {"samples", chk.oracle.samples}}));
  } else if (o.suite == "gradient") {
    std::mt19937_64 rng(seed);
    const Params base = P;
    std::vector<Params> sets;
    for (auto [N, s, p, gamma, alpha] :
         {std::tuple{3, 1.0, 2.0, 1.0, 0.0}, std::tuple{3, 1.0, 2.0, 1.0, 1.0},
          std::tuple{2, 1.0, 3.0, 0.5, 0.5}, std::tuple{3, 0.5, 2.0, 0.0, 0.0},
          std::tuple{1, 0.6, 2.5, 0.0, 0.5}}) {
      Params q = base;
      q.N = N;
      q.s = s;
      q.p = p;
      q.gamma = gamma;
      q.alpha = alpha;
      q.q = p + 1.5;
      sets.push_back(q);
    }
    int passed = 0;
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const Params& Q = sets[k % sets.size()];
      const GridPtr grid = make_grid(Q.N, 8.0, 40, 2.0);
      const Model model(Q, grid);
      const RadialFunction f = random_profile(grid, rng, true);
      const RadialFunction d = random_profile(grid, rng, false);
      const GradientCheck g = gradient_check(model, f, d, 1e-5);
      worst = std::max(worst, g.relative_error);
      if (g.relative_error < 1e-5) ++passed;
    }
    out.add(check_record("gradient", P, passed == 20, worst, 1e-5, 0.0,
                         Json{{"passed", passed}, {"checks", 20}}));
  }
  emit(o, out.records.dump(2) + "\n");
  return out.pass ? kExitOk : kExitFailure;
}

int run_kernel_build(const Options& o) {
  const Params P = params_from(o);
  P.validate();
  if (!P.fractional()) throw UsageError("kernel build needs s < 1");
  const GridPtr grid = make_grid(P.N, o.R, o.M, o.grading);
  std::filesystem::path path = o.out;
  if (path.empty()) {
    const auto dir = cache_dir_from_env();
    if (!dir) throw UsageError("give --out or set HENON_CACHE_DIR");
    std::filesystem::create_directories(*dir);
    path = kernel_cache_file(*dir, *grid, P, {});
  }
  const KernelMatrix K = assemble_kernel_matrix(*grid, P);
  K.save(path);
  std::cout << path.string() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial ground states and checks for the mixed local-nonlocal Henon problem"};
  app.require_subcommand(1);
  Options o;

  CLI::App* solve = app.add_subcommand("solve", "compute a ground state");
  add_common(solve, o);
  solve->add_option("--initial", o.initial, "solution JSON used as the first initial guess");

  CLI::App* sweep = app.add_subcommand("sweep", "phase diagram over start:stop:step ranges");
  add_common(sweep, o);
  sweep->add_option("--plot", o.plot, "plot-data output (x,y,class)");
  sweep->add_flag("--classify-only", o.classify_only, "skip the solver");

  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  add_common(verify, o);
  verify->add_option("suite", o.suite, "strauss | interpolation | compactness | degiorgi | "
                                       "scaling | pohozaev | kernel-oracle | gradient")
      ->required();
  verify->add_option("--samples", o.samples, "Monte Carlo samples");

  CLI::App* kernel = app.add_subcommand("kernel", "kernel utilities");
  kernel->require_subcommand(1);
  CLI::App* build = kernel->add_subcommand("build", "assemble and store a kernel");
  add_common(build, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (solve->parsed()) return run_solve(o);
    if (sweep->parsed()) return run_sweep_command(o);
    if (verify->parsed()) return run_verify(o);
    if (build->parsed()) return run_kernel_build(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const henon::Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    const bool usage = e.kind() == ErrorKind::Configuration ||
                       e.kind() == ErrorKind::InvalidDimension ||
                       e.kind() == ErrorKind::SupercriticalDimension ||
                       e.kind() == ErrorKind::Precondition ||
                       e.kind() == ErrorKind::WeightSingularity;
    return usage ? kExitUsage : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
