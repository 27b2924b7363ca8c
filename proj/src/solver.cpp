#include "henon/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <random>

#include "henon/error.hpp"
#include "henon/parallel.hpp"
#include "henon/profiles.hpp"

namespace henon {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

double seminorm_part(const EnergyBreakdown& e, const Params& P) {
  if (P.gamma > 0.0) return e.grad_term * P.p / P.gamma;
  return e.nonlocal_term * P.p / (1.0 - P.gamma);
}

double norm_from(const EnergyBreakdown& e, const Params& P) {
  return std::pow(e.confinement_term * P.p, 1.0 / P.p) + std::pow(seminorm_part(e, P), 1.0 / P.p);
}

// Tridiagonal model of the local part plus the weighted mass, restricted to
// the free nodes.
class Preconditioner {
 public:
  explicit Preconditioner(const Model& model) {
    const RadialGrid& g = model.grid();
    const Params& P = model.params();
    const int N = g.dimension();
    const int n = g.size() - 1;
    const double omega = sphere_area(N);
    diag_.assign(n, 0.0);
    off_.assign(n, 0.0);
    for (int c = 1; c < g.size(); ++c) {
      const double h = g.cell_width(c);
      const double m = omega * (std::pow(g.cell_hi(c), N) - std::pow(g.cell_lo(c), N)) / N / (h * h);
      if (c - 1 < n) diag_[c - 1] += m;
      if (c < n) {
        diag_[c] += m;
        off_[c - 1] -= m;
      }
    }
    for (int i = 0; i < n; ++i) {
      const double r = g.node(i);
      const double left = i == 0 ? r : 0.5 * g.cell_width(i);
      const double right = 0.5 * g.cell_width(i + 1);
      const double w = std::pow(r, P.beta) + 1.0;
      diag_[i] += omega * w * std::pow(r, N - 1) * (left + right);
    }
  }

  // Solves T z = v (Thomas algorithm).
  std::vector<double> solve(const std::vector<double>& v) const {
    const std::size_t n = diag_.size();
    std::vector<double> c(n), d(n), z(n);
    double b = diag_[0];
    c[0] = off_[0] / b;
    d[0] = v[0] / b;
    for (std::size_t i = 1; i < n; ++i) {
      b = diag_[i] - off_[i - 1] * c[i - 1];
      c[i] = i + 1 < n ? off_[i] / b : 0.0;
      d[i] = (v[i] - off_[i - 1] * d[i - 1]) / b;
    }
    z[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) z[i] = d[i] - c[i] * z[i + 1];
    return z;
  }

 private:
  std::vector<double> diag_;
  std::vector<double> off_;
};

struct Point {
  std::vector<double> x;  // free nodal values
  double A = 0.0;
  double B = 0.0;
  std::vector<double> dA;
  std::vector<double> dB;
};

struct RunResult {
  RadialFunction u;
  double Q = std::numeric_limits<double>::infinity();
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
  bool valid = false;
  std::vector<double> level_history;
  std::vector<double> residual_history;
  double ps_constant = 0.0;
};

class Run {
 public:
  Run(const Model& model, const SolverConfig& config, const Preconditioner& pre)
      : model_(model), config_(config), pre_(pre), P_(model.params()),
        n_(model.grid().size() - 1) {}

  RunResult operator()(std::vector<double> x0) {
    RunResult out;
    for (double& v : x0) v = std::abs(v);
    Point cur = evaluate(x0, true);
    if (!(cur.B > 0.0) || !(cur.A > 0.0)) return out;
    rescale(cur);
    const double level_factor = 1.0 / P_.p - 1.0 / P_.q;
    std::deque<std::pair<std::vector<double>, std::vector<double>>> pairs;
    int failures = 0;
    for (int it = 0;; ++it) {
      const RadialFunction u = to_function(cur.x);
      std::vector<double> gJ(n_ + 1, 0.0);
      for (int i = 0; i < n_; ++i) gJ[i] = cur.dA[i] / P_.p - cur.dB[i] / P_.q;
      const double res = model_.residual(u, gJ);
      const double Q = quotient(cur);
      out.level_history.push_back(level_factor * cur.A);
      out.residual_history.push_back(res);
      const EnergyBreakdown e = model_.energy(u);
      const double nrm = norm_from(e, P_);
      out.ps_constant = std::max(out.ps_constant,
                                 (1.0 - P_.p / P_.q) * std::pow(nrm, P_.p) / (P_.p + nrm));
      out.u = u;
      out.Q = Q;
      out.residual = res;
      out.iterations = it;
      out.valid = true;
      if (res <= config_.residual_tolerance) {
        out.converged = true;
        break;
      }
      if (it >= config_.max_iterations) break;

      const std::vector<double> g = grad_quotient(cur);
      std::vector<double> d = direction(g, pairs);
      double slope = dot(g, d);
      if (!(slope < 0.0)) {
        pairs.clear();
        d = direction(g, pairs);
        slope = dot(g, d);
        if (!(slope < 0.0)) break;
      }
      double step = config_.initial_step;
      if (pairs.empty()) step = std::min(step, 0.1 * max_abs(cur.x) / max_abs(d));
      bool accepted = false;
      std::vector<double> trial(n_);
      Point next;
      for (int k = 0; k < 60; ++k) {
        for (int i = 0; i < n_; ++i) trial[i] = std::abs(cur.x[i] + step * d[i]);
        next = evaluate(trial, false);
        if (next.B > 0.0) {
          double dec = 0.0;
          for (int i = 0; i < n_; ++i) dec += g[i] * (trial[i] - cur.x[i]);
          if (quotient(next) <= Q + config_.sufficient_decrease * dec) {
            accepted = true;
            break;
          }
        }
        step *= config_.shrink;
      }
      if (!accepted) {
        if (pairs.empty() || ++failures > 3) break;
        pairs.clear();
        continue;
      }
      next = evaluate(trial, true);
      std::vector<double> s(n_), y(n_);
      const std::vector<double> gn = grad_quotient(next);
      for (int i = 0; i < n_; ++i) {
        s[i] = trial[i] - cur.x[i];
        y[i] = gn[i] - g[i];
      }
      const double sy = dot(s, y);
      if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
        pairs.emplace_back(std::move(s), std::move(y));
        if (static_cast<int>(pairs.size()) > config_.memory) pairs.pop_front();
      }
      rescale(next);
      cur = std::move(next);
    }
    return out;
  }

 private:
  RadialFunction to_function(const std::vector<double>& x) const {
    std::vector<double> v(x);
    v.push_back(0.0);
    return RadialFunction(model_.grid_ptr(), std::move(v));
  }

  Point evaluate(const std::vector<double>& x, bool with_gradient) const {
    Point pt;
    pt.x = x;
    const RadialFunction f = to_function(x);
    const EnergyBreakdown e = model_.energy(f);
    pt.A = e.A;
    pt.B = e.B;
    if (with_gradient) {
      model_.split_gradient(f, pt.dA, pt.dB);
      pt.dA.resize(n_);
      pt.dB.resize(n_);
    }
    return pt;
  }

  double quotient(const Point& pt) const { return pt.A / std::pow(pt.B, P_.p / P_.q); }

  std::vector<double> grad_quotient(const Point& pt) const {
    std::vector<double> g(n_);
    const double scale = std::pow(pt.B, -P_.p / P_.q);
    const double ratio = P_.p / P_.q * pt.A / pt.B;
    for (int i = 0; i < n_; ++i) g[i] = scale * (pt.dA[i] - ratio * pt.dB[i]);
    return g;
  }

  // Moves pt onto the Nehari manifold; all terms are homogeneous.
  void rescale(Point& pt) const {
    const double t = nehari_scale(pt.A, pt.B, P_.p, P_.q);
    for (double& v : pt.x) v *= t;
    pt.A *= std::pow(t, P_.p);
    pt.B *= std::pow(t, P_.q);
    const double ta = std::pow(t, P_.p - 1.0);
    const double tb = std::pow(t, P_.q - 1.0);
    for (double& v : pt.dA) v *= ta;
    for (double& v : pt.dB) v *= tb;
  }

  std::vector<double> direction(
      const std::vector<double>& g,
      const std::deque<std::pair<std::vector<double>, std::vector<double>>>& pairs) const {
    std::vector<double> q = g;
    std::vector<double> alpha(pairs.size());
    for (std::size_t j = pairs.size(); j-- > 0;) {
      const auto& [s, y] = pairs[j];
      alpha[j] = dot(s, q) / dot(s, y);
      for (int i = 0; i < n_; ++i) q[i] -= alpha[j] * y[i];
    }
    std::vector<double> r = pre_.solve(q);
    if (!pairs.empty()) {
      const auto& [s, y] = pairs.back();
      const double gamma = dot(s, y) / dot(y, pre_.solve(y));
      for (double& v : r) v *= gamma;
    }
    for (std::size_t j = 0; j < pairs.size(); ++j) {
      const auto& [s, y] = pairs[j];
      const double beta = dot(y, r) / dot(s, y);
      for (int i = 0; i < n_; ++i) r[i] += s[i] * (alpha[j] - beta);
    }
    for (double& v : r) v = -v;
    return r;
  }

  const Model& model_;
  const SolverConfig& config_;
  const Preconditioner& pre_;
  const Params& P_;
  int n_;
};

double decay_fit(const RadialFunction& u) {
  const RadialGrid& g = u.grid();
  const auto v = u.values();
  const auto peak = std::max_element(v.begin(), v.end());
  const double top = *peak;
  if (!(top > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (int i = static_cast<int>(peak - v.begin()) + 1; i + 1 < g.size(); ++i) {
    if (v[i] < 1e-6 * top || v[i] > 0.1 * top) continue;
    const double x = std::log(g.node(i));
    const double y = std::log(v[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 3) return std::numeric_limits<double>::quiet_NaN();
  const double den = n * sxx - sx * sx;
  if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / den;
}

}  // namespace

void SolverConfig::validate() const {
  auto bad = [](const char* what) { throw Error(ErrorKind::Configuration, what); };
  if (max_iterations < 0) bad("max_iterations must be nonnegative");
  if (!(residual_tolerance > 0.0)) bad("residual tolerance must be positive");
  if (!(shrink > 0.0 && shrink < 1.0)) bad("shrink factor must lie in (0, 1)");
  if (!(initial_step > 0.0)) bad("initial step must be positive");
  if (!(sufficient_decrease > 0.0 && sufficient_decrease < 1.0)) {
    bad("sufficient-decrease constant must lie in (0, 1)");
  }
  if (restarts < 1) bad("at least one restart is required");
  if (memory < 1) bad("L-BFGS memory must be positive");
  if (width_levels < 1) bad("width_levels must be positive");
  if (min_width < 0.0) bad("min_width must be nonnegative");
}

double nehari_scale(double A, double B, double p, double q) {
  if (q == p) throw Error(ErrorKind::Configuration, "Nehari scaling needs q != p");
  if (!(B > 0.0)) throw Error(ErrorKind::DegenerateDirection, "B(f) = 0: direction carries no source mass");
  if (!(A > 0.0)) throw Error(ErrorKind::DegenerateDirection, "A(f) = 0");
  return std::pow(A / B, 1.0 / (q - p));
}

double nehari_scale(const Model& model, const RadialFunction& f) {
  const EnergyBreakdown e = model.energy(f);
  return nehari_scale(e.A, e.B, model.params().p, model.params().q);
}

double nehari_quotient(const Model& model, const RadialFunction& f) {
  const EnergyBreakdown e = model.energy(f);
  if (!(e.B > 0.0)) throw Error(ErrorKind::DegenerateDirection, "B(f) = 0");
  return e.A / std::pow(e.B, model.params().p / model.params().q);
}

SolveReport solve_ground_state(const Model& model, const SolverConfig& config,
                               const std::optional<RadialFunction>& initial) {
  config.validate();
  const Params& P = model.params();
  if (!(P.q > P.p)) throw Error(ErrorKind::Configuration, "q must exceed p");
  const GridPtr& grid = model.grid_ptr();
  const double R = grid->radius();
  const int M = grid->size();

  std::vector<double> widths;
  const double w0 = R / 8.0;
  const double w1 = config.min_width > 0.0 ? std::min(config.min_width, w0) : w0;
  for (int j = 0; j < config.width_levels; ++j) {
    const double t = config.width_levels == 1 ? 0.0 : static_cast<double>(j) / (config.width_levels - 1);
    widths.push_back(w0 * std::pow(w1 / w0, t));
  }
  const double centers[3] = {0.0, R / 8.0, R / 4.0};

  std::vector<std::vector<double>> guesses;
  for (int k = 0; k < config.restarts; ++k) {
    std::vector<double> x(M - 1);
    if (k == 0 && initial && !initial->is_zero()) {
      if (initial->grid().hash() != grid->hash()) {
        throw Error(ErrorKind::StaleKernel, "initial guess lives on a different grid");
      }
      auto v = initial->values();
      std::copy(v.begin(), v.end() - 1, x.begin());
    } else {
      const double center = centers[k % 3];
      const double width = widths[(k / 3) % widths.size()];
      std::mt19937_64 rng(config.seed + static_cast<std::uint64_t>(k));
      std::uniform_real_distribution<double> jitter(-0.05, 0.05);
      const RadialFunction b = gaussian_bump(grid, center, width);
      for (int i = 0; i + 1 < M; ++i) x[i] = b[i] * (1.0 + jitter(rng));
    }
    guesses.push_back(std::move(x));
  }

  const Preconditioner pre(model);
  std::vector<RunResult> runs(guesses.size());
  model.hat_norms();
  parallel_for(guesses.size(), [&](std::size_t k) {
    try {
      runs[k] = Run(model, config, pre)(guesses[k]);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateDirection) throw;
    }
  });

  int best = -1;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const RunResult& r = runs[k];
    if (!r.valid || !std::isfinite(r.Q)) continue;
    if (best < 0) {
      best = static_cast<int>(k);
      continue;
    }
    const RunResult& b = runs[best];
    if (r.converged != b.converged ? r.converged : r.Q < b.Q) best = static_cast<int>(k);
  }
  if (best < 0) throw Error(ErrorKind::NoCandidate, "no restart produced a usable profile");

  RunResult& r = runs[best];
  SolveReport report;
  report.solution = r.u;
  report.energy = model.energy(r.u);
  report.residual = r.residual;
  report.nehari_level = (1.0 / P.p - 1.0 / P.q) * report.energy.A;
  report.iterations = r.iterations;
  report.converged = r.converged;
  report.level_history = std::move(r.level_history);
  report.residual_history = std::move(r.residual_history);
  report.best_restart = best;
  report.restarts_run = static_cast<int>(runs.size());
  report.nonexistence_region = classify(P).verdict == Verdict::NonexistenceGuaranteed;
  report.diagnostics.decay_exponent_fit = decay_fit(r.u);
  report.diagnostics.concentration_index = model.source_fraction_inside(r.u, 0.05);
  const auto v = r.u.values();
  const int peak = static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
  report.diagnostics.peak_radius = peak == 0 ? 0.0 : grid->node(peak);
  report.diagnostics.ps_constant = r.ps_constant;
  return report;
}

MountainPassReport mountain_pass_geometry_check(const Model& model, double radius, int samples,
                                                std::uint64_t seed) {
  if (!(radius > 0.0)) throw Error(ErrorKind::Configuration, "radius must be positive");
  if (samples < 1) throw Error(ErrorKind::Configuration, "samples must be positive");
  const Params& P = model.params();
  const GridPtr& grid = model.grid_ptr();
  const double R = grid->radius();
  const int M = grid->size();
  MountainPassReport rep;
  rep.radius = radius;
  rep.samples = samples;
  rep.superhomogeneous = P.q > P.p;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double min_energy = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    const double center = 0.5 * R * unif(rng);
    const double width = R / 20.0 * std::pow(5.0, unif(rng));
    const double sign = unif(rng) < 0.5 ? -1.0 : 1.0;
    const RadialFunction b = gaussian_bump(grid, center, width);
    std::vector<double> v(M, 0.0);
    for (int i = 0; i + 1 < M; ++i) v[i] = sign * b[i] * (1.0 + 0.5 * (2.0 * unif(rng) - 1.0));
    RadialFunction w(grid, std::move(v));
    const double nrm = model.norm(w);
    if (!(nrm > 0.0)) continue;
    w = w.scaled(radius / nrm);
    min_energy = std::min(min_energy, model.energy(w).J);
  }
  rep.min_energy = min_energy;
  rep.condition_i = min_energy > 0.0;

  RadialFunction w = gaussian_bump(grid, 0.0, R / 8.0);
  w = w.scaled(1.0 / model.norm(w));
  std::vector<double> ts;
  for (double t = 2.0 * radius; t < 1e3; t *= 2.0) ts.push_back(t);
  ts.push_back(1e3);
  std::vector<double> J(ts.size());
  for (std::size_t j = 0; j < ts.size(); ++j) J[j] = model.energy(w.scaled(ts[j])).J;
  std::size_t first = ts.size();
  for (std::size_t j = ts.size(); j-- > 0;) {
    if (!(J[j] < 0.0)) break;
    first = j;
  }
  if (first < ts.size()) {
    rep.witness_found = true;
    rep.witness_t = ts[first];
    rep.witness_energy = J[first];
    rep.witness_norm = ts[first];
  }
  rep.pass = rep.condition_i && rep.witness_found && rep.superhomogeneous;
  return rep;
}

}  // namespace henon
