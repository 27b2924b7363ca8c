#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "henon/functional.hpp"
#include "henon/oracle.hpp"

namespace henon {

/// ||f||_p + [f]_{s,p} (unweighted).
double sobolev_norm(const Model& model, const RadialFunction& f);

struct StraussResult {
  double C_est = 0.0;
  double weighted_sup = 0.0;  // sup |f(r)| r^{(N-1)/p} over nodes
  double norm = 0.0;          // ||f||_p + [f]_{s,p}
};

/// Throws Error(Precondition) unless 1/p < s and sp < N, and
/// Error(UndefinedRatio) for f = 0.
StraussResult strauss_check(const Model& model, const RadialFunction& f);

struct InterpolationResult {
  InterpolationExponents exponents;
  std::vector<double> ratios;
  std::vector<double> ratios_printed;
  double max_ratio = 0.0;
  double max_ratio_printed = 0.0;
  /// u -> t u multiplies the printed-exponent ratio by t^{drift_exponent}.
  double drift_exponent = 0.0;
};

/// ||u||_{q,alpha}^q / (||u||_{s,p}^eta ||u||_{p,beta}^omega) over the family.
double interpolation_ratio(const Model& model, const RadialFunction& f,
                           const InterpolationExponents& ex, EtaVariant variant);
InterpolationResult interpolation_check(const Model& model,
                                        const std::vector<RadialFunction>& family);

enum class ProbeStatus { Pass, Fail, Inconclusive, NotApplicable };
std::string_view to_string(ProbeStatus s);

struct ProbeSequence {
  std::string kind;
  std::vector<double> parameter;  // bump center or width along the sequence
  std::vector<double> values;     // ||u_n||_{q,alpha} with ||u_n||_{s,p,beta} = 1
  ProbeStatus status = ProbeStatus::Fail;
  std::string note;
};

struct CompactnessOptions {
  double fraction = 0.1;
  int max_steps = 40;
};

struct CompactnessReport {
  ProbeSequence translated;
  ProbeSequence concentrating;
  bool pass = false;
};

/// Evaluates an arbitrary sequence. Reports NotApplicable when the last term
/// is still strongly correlated with the first (no weak vanishing).
ProbeSequence probe_sequence(const Model& model, const std::vector<RadialFunction>& sequence,
                             double fraction);

/// Bumps translated toward R and bumps concentrating at 0, each normalized
/// in ||.||_{s,p,beta}. PASS if the translated sequence drops below
/// `fraction` of its first value. The concentrating sequence is PASS or, once
/// the widths reach the mesh resolution, INCONCLUSIVE.
CompactnessReport compactness_probe(const Model& model, const CompactnessOptions& options = {});

struct DeGiorgiTrace {
  std::vector<RadialFunction> truncations;   // w_k, k = 0..K
  std::vector<double> energies;              // E_k = \int |x|^alpha w_k^q
  std::vector<double> constants;             // C_{k+1} = (2^{k+1} - 1)^q, k = 0..K-1
  double delta = 0.0;                        // (q - p)/p
  double exponent_printed = 0.0;
  std::vector<double> chat;                  // E_{k+1} / (C_{k+1}^{q/p} E_k^{q/p}), NaN if undefined
  int chat_defined = 0;
  double chat_spread = 1.0;                  // max/min over defined entries
  double limit_value = 0.0;                  // \int |x|^alpha (u - 1)_+^q
  bool vanishes = false;                     // E_K <= 1e-12 E_0
  bool monotone = false;
  bool nested = false;
  bool recursion_holds = false;              // chat_spread < 10
};

DeGiorgiTrace degiorgi_trace(const Model& model, const RadialFunction& f, int K);

/// t f with \int |x|^alpha (t f)_+^q = eps / 2.
RadialFunction rescale_for_smallness(const Model& model, const RadialFunction& f, double eps);

/// u(lambda r) resampled on the same grid.
RadialFunction dilate(const RadialFunction& f, double lambda);

struct ScalingEntry {
  double lambda = 0.0;
  double norm_ratio = 0.0;        // ||u_lambda|| / ||u||
  double decay_bound = 0.0;       // lambda^{-tau}
  double quotient_lhs = 0.0;
  double quotient_rhs = 0.0;      // C_{N,r} \int |grad u|^r |x|^r
  double constant = 0.0;
  bool norm_ok = false;
  bool quotient_ok = false;
};

struct ScalingReport {
  std::vector<ScalingEntry> entries;
  double tau = 0.0;
  double tolerance = 1e-6;
  bool pass = false;
};

/// Throws Error(Precondition) unless beta > p(1 - s), every lambda > 1 and r > 1.
ScalingReport scaling_decay_check(const Model& model, const RadialFunction& f,
                                  const std::vector<double>& lambdas, double r,
                                  double tolerance = 1e-6);

struct PohozaevReport {
  double threshold = 0.0;        // (N + alpha)/tau
  double p_star = 0.0;
  bool threshold_matches = false;
  int samples = 0;
  bool samples_positive = false; // pointwise inequality held at every sample
  bool sign_consistent = false;  // sampled sign equals sign(tau - (N + alpha)/q)
  bool holds = false;
};

PohozaevReport pohozaev_sign_check(const Params& params, int samples, std::uint64_t seed);

struct GradientCheck {
  double directional = 0.0;
  double finite_difference = 0.0;
  double relative_error = 0.0;
};

/// Central difference of J along `direction` against <gradient, direction>.
GradientCheck gradient_check(const Model& model, const RadialFunction& f,
                             const RadialFunction& direction, double h);

struct KernelOracleCheck {
  double quadrature = 0.0;
  OracleEstimate oracle;
  double tolerance = 0.0;  // max(2% of oracle, 3 standard errors)
  bool pass = false;
};

KernelOracleCheck kernel_oracle_check(const Model& model, const RadialFunction& f,
                                      std::int64_t samples, std::uint64_t seed);

}  // namespace henon
