#include "henon/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "henon/error.hpp"
#include "henon/profiles.hpp"

namespace henon {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double l2_dot(const RadialFunction& a, const RadialFunction& b) {
  const CellQuadrature quad = weighted_quadrature(a.grid(), 0.0);
  double s = 0.0;
  for (std::size_t k = 0; k < quad.size(); ++k) {
    s += quad.weight[k] * a.cell_value(quad.cell[k], quad.xi[k]) *
         b.cell_value(quad.cell[k], quad.xi[k]);
  }
  return s;
}

}  // namespace

double sobolev_norm(const Model& model, const RadialFunction& f) {
  const double p = model.params().p;
  return weighted_lp_norm(f, p, 0.0) + std::pow(model.seminorm_integral(f), 1.0 / p);
}

StraussResult strauss_check(const Model& model, const RadialFunction& f) {
  const Params& P = model.params();
  if (!(1.0 / P.p < P.s && P.s * P.p < P.N)) {
    throw Error(ErrorKind::Precondition, "decay estimate needs 1/p < s and sp < N");
  }
  if (f.is_zero()) throw Error(ErrorKind::UndefinedRatio, "ratio undefined for f = 0");
  StraussResult out;
  const RadialGrid& g = f.grid();
  const double e = (P.N - 1.0) / P.p;
  for (int i = 0; i + 1 < g.size(); ++i) {
    out.weighted_sup = std::max(out.weighted_sup, std::abs(f[i]) * std::pow(g.node(i), e));
  }
  out.norm = sobolev_norm(model, f);
  out.C_est = out.weighted_sup / out.norm;
  return out;
}

double interpolation_ratio(const Model& model, const RadialFunction& f,
                           const InterpolationExponents& ex, EtaVariant variant) {
  const double p = model.params().p;
  const double eta = variant == EtaVariant::Homogeneous ? ex.eta : ex.eta_printed;
  const double top = model.source_integral(f);
  const double sob = sobolev_norm(model, f);
  const double conf = std::pow(model.confinement_integral(f), 1.0 / p);
  if (!(sob > 0.0) || !(conf > 0.0)) throw Error(ErrorKind::UndefinedRatio, "ratio undefined for f = 0");
  return top / (std::pow(sob, eta) * std::pow(conf, ex.omega));
}

InterpolationResult interpolation_check(const Model& model,
                                        const std::vector<RadialFunction>& family) {
  InterpolationResult out;
  out.exponents = interpolation_exponents(model.params());
  out.drift_exponent = model.params().q - out.exponents.eta_printed - out.exponents.omega;
  for (const RadialFunction& f : family) {
    const double a = interpolation_ratio(model, f, out.exponents, EtaVariant::Homogeneous);
    const double b = interpolation_ratio(model, f, out.exponents, EtaVariant::Printed);
    out.ratios.push_back(a);
    out.ratios_printed.push_back(b);
    out.max_ratio = std::max(out.max_ratio, a);
    out.max_ratio_printed = std::max(out.max_ratio_printed, b);
  }
  return out;
}

std::string_view to_string(ProbeStatus s) {
  switch (s) {
    case ProbeStatus::Pass: return "PASS";
    case ProbeStatus::Fail: return "FAIL";
    case ProbeStatus::Inconclusive: return "INCONCLUSIVE";
    case ProbeStatus::NotApplicable: return "NOT_APPLICABLE";
  }
  return "FAIL";
}

ProbeSequence probe_sequence(const Model& model, const std::vector<RadialFunction>& sequence,
                             double fraction) {
  ProbeSequence out;
  out.kind = "custom";
  if (sequence.empty()) throw Error(ErrorKind::Configuration, "empty sequence");
  const double q = model.params().q;
  for (const RadialFunction& f : sequence) {
    const double n = model.norm(f);
    if (!(n > 0.0)) throw Error(ErrorKind::UndefinedRatio, "sequence contains f = 0");
    out.values.push_back(std::pow(model.source_integral(f), 1.0 / q) / n);
    out.parameter.push_back(static_cast<double>(out.parameter.size()));
  }
  const RadialFunction& a = sequence.front();
  const RadialFunction& b = sequence.back();
  const double corr = l2_dot(a, b) / std::sqrt(l2_dot(a, a) * l2_dot(b, b));
  if (sequence.size() < 2 || corr >= 0.9) {
    out.status = ProbeStatus::NotApplicable;
    out.note = "sequence does not vanish weakly";
    return out;
  }
  out.status = out.values.back() < fraction * out.values.front() ? ProbeStatus::Pass
                                                                   : ProbeStatus::Fail;
  return out;
}

CompactnessReport compactness_probe(const Model& model, const CompactnessOptions& options) {
  const GridPtr& grid = model.grid_ptr();
  const double R = grid->radius();
  const double q = model.params().q;
  auto value = [&](const RadialFunction& f) {
    return std::pow(model.source_integral(f), 1.0 / q) / model.norm(f);
  };
  CompactnessReport rep;

  ProbeSequence& tr = rep.translated;
  tr.kind = "translated";
  const double width = R / 16.0;
  tr.status = ProbeStatus::Inconclusive;
  for (int n = 0; n < options.max_steps; ++n) {
    const double center = R / 8.0 + n * width;
    if (center + width >= R) {
      tr.note = "bumps reached the truncation radius before the trend was established; raise R";
      break;
    }
    tr.parameter.push_back(center);
    tr.values.push_back(value(compact_bump(grid, center, width)));
    if (tr.values.back() < options.fraction * tr.values.front()) {
      tr.status = ProbeStatus::Pass;
      tr.note.clear();
      break;
    }
  }

  ProbeSequence& co = rep.concentrating;
  co.kind = "concentrating";
  co.status = ProbeStatus::Inconclusive;
  const double resolution = 8.0 * grid->node(0);
  double w = R / 8.0;
  for (int n = 0; n < options.max_steps; ++n, w *= 0.5) {
    if (w < resolution) {
      co.note = "bumps fell below the mesh resolution near the origin; refine the grid";
      if (co.values.size() >= 2 && !(co.values.back() < co.values.front())) {
        co.note += " (no decrease observed yet)";
      }
      break;
    }
    co.parameter.push_back(w);
    co.values.push_back(value(compact_bump(grid, 0.0, w)));
    if (co.values.back() < options.fraction * co.values.front()) {
      co.status = ProbeStatus::Pass;
      co.note.clear();
      break;
    }
  }
  rep.pass = tr.status == ProbeStatus::Pass && co.status != ProbeStatus::Fail;
  return rep;
}

DeGiorgiTrace degiorgi_trace(const Model& model, const RadialFunction& f, int K) {
  if (K < 1) throw Error(ErrorKind::Configuration, "K must be positive");
  for (double v : f.values()) {
    if (v < 0.0) throw Error(ErrorKind::Domain, "level-set trace needs f >= 0");
  }
  const Params& P = model.params();
  const int M = f.size();
  DeGiorgiTrace tr;
  tr.delta = (P.q - P.p) / P.p;
  try {
    tr.exponent_printed = interpolation_exponents(P).degiorgi_exponent_printed;
  } catch (const Error&) {
    tr.exponent_printed = kNaN;
  }
  for (int k = 0; k <= K; ++k) {
    const double level = 1.0 - std::ldexp(1.0, -k);
    std::vector<double> v(M);
    for (int i = 0; i < M; ++i) v[i] = std::max(f[i] - level, 0.0);
    v.back() = 0.0;
    tr.truncations.emplace_back(f.grid_ptr(), std::move(v));
    tr.energies.push_back(model.source_integral(tr.truncations.back()));
  }
  for (int k = 0; k < K; ++k) tr.constants.push_back(std::pow(std::ldexp(1.0, k + 1) - 1.0, P.q));
  {
    std::vector<double> v(M);
    for (int i = 0; i < M; ++i) v[i] = std::max(f[i] - 1.0, 0.0);
    v.back() = 0.0;
    tr.limit_value = model.source_integral(RadialFunction(f.grid_ptr(), std::move(v)));
  }
  const double e = P.q / P.p;
  tr.chat.assign(K, kNaN);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int k = 1; k < K; ++k) {
    const double Ek = tr.energies[k];
    const double En = tr.energies[k + 1];
    if (Ek > 0.0 && En > 0.0) {
      tr.chat[k] = En / (std::pow(tr.constants[k], e) * std::pow(Ek, e));
      lo = std::min(lo, tr.chat[k]);
      hi = std::max(hi, tr.chat[k]);
      ++tr.chat_defined;
    }
  }
  tr.chat_spread = tr.chat_defined > 0 ? hi / lo : 1.0;
  tr.recursion_holds = tr.chat_spread < 10.0;
  tr.vanishes = tr.energies[K] <= 1e-12 * tr.energies[0];
  tr.monotone = true;
  for (int k = 0; k < K; ++k) {
    if (tr.energies[k + 1] > tr.energies[k]) tr.monotone = false;
  }
  tr.nested = true;
  for (int k = 0; k < K; ++k) {
    const RadialFunction& a = tr.truncations[k];
    const RadialFunction& b = tr.truncations[k + 1];
    const double cut = std::ldexp(1.0, -(k + 1));
    for (int i = 0; i < M; ++i) {
      if (b[i] > a[i]) tr.nested = false;
      if (b[i] > 0.0 && !(a[i] > cut)) tr.nested = false;
    }
  }
  return tr;
}

RadialFunction rescale_for_smallness(const Model& model, const RadialFunction& f, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::Configuration, "eps must be positive");
  std::vector<double> v(f.values().begin(), f.values().end());
  for (double& x : v) x = std::max(x, 0.0);
  const RadialFunction pos(f.grid_ptr(), std::move(v));
  const double B = model.source_integral(pos);
  if (!(B > 0.0)) throw Error(ErrorKind::DegenerateDirection, "profile has no positive part");
  return f.scaled(std::pow(0.5 * eps / B, 1.0 / model.params().q));
}

RadialFunction dilate(const RadialFunction& f, double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::Configuration, "dilation factor must be positive");
  const RadialGrid& g = f.grid();
  std::vector<double> v(g.size(), 0.0);
  for (int i = 0; i + 1 < g.size(); ++i) v[i] = interpolate(f, lambda * g.node(i));
  return RadialFunction(f.grid_ptr(), std::move(v));
}

ScalingReport scaling_decay_check(const Model& model, const RadialFunction& f,
                                  const std::vector<double>& lambdas, double r,
                                  double tolerance) {
  const Params& P = model.params();
  if (!(P.beta > P.p * (1.0 - P.s))) {
    throw Error(ErrorKind::Precondition, "scaling bound needs beta > p(1 - s)");
  }
  if (!(r > 1.0)) throw Error(ErrorKind::Precondition, "difference-quotient exponent must exceed 1");
  const int N = P.N;
  ScalingReport rep;
  rep.tau = P.tau();
  rep.tolerance = tolerance;
  rep.pass = true;
  const double base = model.norm(f);
  const double grad_moment = weighted_gradient_integral(f, r, r);
  const CellQuadrature quad = weighted_quadrature(f.grid(), 0.0);
  for (double lambda : lambdas) {
    if (!(lambda > 1.0)) throw Error(ErrorKind::Precondition, "dilation factors must exceed 1");
    ScalingEntry e;
    e.lambda = lambda;
    const RadialFunction u = dilate(f, lambda);
    const double scaled = model.norm(u);
    e.decay_bound = std::pow(lambda, -rep.tau);
    e.norm_ratio = base > 0.0 ? scaled / base : 0.0;
    e.norm_ok = scaled <= e.decay_bound * base * (1.0 + tolerance);
    std::vector<double> diff(f.size());
    for (int i = 0; i < f.size(); ++i) diff[i] = (u[i] - f[i]) / (lambda - 1.0);
    e.quotient_lhs = lp_integral(RadialFunction(f.grid_ptr(), std::move(diff)), quad, r);
    const double m = N + r - 1.0;
    e.constant = (1.0 - std::pow(lambda, -m)) / (m * (lambda - 1.0));
    e.quotient_rhs = e.constant * grad_moment;
    e.quotient_ok = e.quotient_lhs <= e.quotient_rhs * (1.0 + tolerance);
    rep.pass = rep.pass && e.norm_ok && e.quotient_ok;
    rep.entries.push_back(e);
  }
  return rep;
}

PohozaevReport pohozaev_sign_check(const Params& params, int samples, std::uint64_t seed) {
  const Params& P = params;
  const double tau = P.tau();
  if (!(tau > 0.0)) throw Error(ErrorKind::Precondition, "needs tau = (N - sp)/p > 0");
  PohozaevReport rep;
  rep.threshold = (P.N + P.alpha) / tau;
  rep.p_star = P.p * (P.N + P.alpha) / (P.N - P.s * P.p);
  rep.threshold_matches = std::abs(rep.threshold - rep.p_star) <=
                          4.0 * std::numeric_limits<double>::epsilon() * std::abs(rep.p_star);
  rep.samples = samples;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(1e-3, 10.0);
  std::uniform_real_distribution<double> value(-5.0, 5.0);
  const double predicted = tau - (P.N + P.alpha) / P.q;
  rep.samples_positive = samples > 0;
  rep.sign_consistent = true;
  for (int k = 0; k < samples; ++k) {
    const double x = radius(rng);
    double t = value(rng);
    if (t == 0.0) t = 1.0;
    const double xa = std::pow(x, P.alpha);
    const double at = std::abs(t);
    const double f = xa * std::pow(at, P.q - 2.0) * t;
    const double F = xa * std::pow(at, P.q) / P.q;
    const double xFx = P.alpha * F;
    const double lhs = tau * t * f;
    const double rhs = P.N * F + xFx;
    const double d = lhs - rhs;
    if (!(d > 0.0)) rep.samples_positive = false;
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    const bool tiny = std::abs(d) <= 64.0 * std::numeric_limits<double>::epsilon() * scale;
    if (predicted == 0.0 ? !tiny : (!tiny && (d > 0.0) != (predicted > 0.0))) {
      rep.sign_consistent = false;
    }
  }
  rep.holds = P.q > rep.threshold && rep.samples_positive;
  return rep;
}

GradientCheck gradient_check(const Model& model, const RadialFunction& f,
                             const RadialFunction& direction, double h) {
  GradientCheck out;
  const std::vector<double> g = model.gradient(f);
  for (int i = 0; i < f.size(); ++i) out.directional += g[i] * direction[i];
  std::vector<double> plus(f.size()), minus(f.size());
  for (int i = 0; i < f.size(); ++i) {
    plus[i] = f[i] + h * direction[i];
    minus[i] = f[i] - h * direction[i];
  }
  const double Jp = model.energy(RadialFunction(f.grid_ptr(), std::move(plus))).J;
  const double Jm = model.energy(RadialFunction(f.grid_ptr(), std::move(minus))).J;
  out.finite_difference = (Jp - Jm) / (2.0 * h);
  const double scale = std::max(std::abs(out.directional), std::abs(out.finite_difference));
  out.relative_error = scale > 0.0 ? std::abs(out.directional - out.finite_difference) / scale : 0.0;
  return out;
}

KernelOracleCheck kernel_oracle_check(const Model& model, const RadialFunction& f,
                                      std::int64_t samples, std::uint64_t seed) {
  KernelOracleCheck out;
  out.quadrature = model.seminorm_integral(f);
  out.oracle = seminorm_oracle(f, model.params(), samples, seed);
  out.tolerance = std::max(0.02 * std::abs(out.oracle.value), 3.0 * out.oracle.standard_error);
  out.pass = std::abs(out.quadrature - out.oracle.value) <= out.tolerance;
  return out;
}

}  // namespace henon
