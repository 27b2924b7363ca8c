#include "henon/params.hpp"

#include <cmath>
#include <sstream>

#include "henon/error.hpp"

namespace henon {

void Params::validate() const {
  if (N < 1) throw Error(ErrorKind::InvalidDimension, "N must be >= 1");
  auto bad = [](const char* what) { throw Error(ErrorKind::Configuration, what); };
  if (!std::isfinite(p) || !(p > 1.0)) bad("p must exceed 1");
  if (!std::isfinite(q) || !(q > 1.0)) bad("q must exceed 1");
  if (!std::isfinite(s) || !(s > 0.0 && s <= 1.0)) bad("s must lie in (0, 1]");
  if (!std::isfinite(gamma) || !(gamma >= 0.0 && gamma <= 1.0)) bad("gamma must lie in [0, 1]");
  if (!std::isfinite(alpha)) bad("alpha must be finite");
  if (!std::isfinite(beta) || !(beta > 0.0)) bad("beta must be positive");
  if (gamma > 0.0 && s != 1.0) bad("a local part (gamma > 0) requires s = 1");
}

double Params::p_star() const {
  const double denom = gamma == 0.0 ? N - s * p : N - p;
  if (!(denom > 0.0)) {
    throw Error(ErrorKind::SupercriticalDimension,
                "critical exponent undefined: sp >= N (or p >= N with a local part)");
  }
  return p * (N + alpha) / denom;
}

double p_star(const Params& params) { return params.p_star(); }

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::ExistsGuaranteed: return "EXISTS_GUARANTEED";
    case Verdict::NonexistenceGuaranteed: return "NONEXISTENCE_GUARANTEED";
    case Verdict::Unclassified: return "UNCLASSIFIED";
  }
  return "UNCLASSIFIED";
}

Verdict verdict_from_string(std::string_view name) {
  if (name == "EXISTS_GUARANTEED") return Verdict::ExistsGuaranteed;
  if (name == "NONEXISTENCE_GUARANTEED") return Verdict::NonexistenceGuaranteed;
  if (name == "UNCLASSIFIED") return Verdict::Unclassified;
  throw Error(ErrorKind::Configuration, "unknown verdict '" + std::string(name) + "'");
}

AdmissibilityReport classify(const Params& params) {
  const Params& P = params;
  AdmissibilityReport r;
  const double sp = P.s * P.p;
  r.s_range = 1.0 / P.p < P.s && P.s < static_cast<double>(P.N) / P.p;
  r.alpha_range = P.alpha > -sp;
  r.condition_2 = P.alpha - P.beta + (P.q - P.p) * (1.0 - P.N) / P.p < 0.0;
  r.beta_nonexist = P.beta > P.p * (1.0 - P.s);
  const double denom = P.gamma == 0.0 ? P.N - sp : P.N - P.p;
  if (denom > 0.0) {
    const double ps = P.p_star();
    r.q_range = P.p < P.q && P.q < ps;
    r.q_supercritical = P.q > ps;
  }
  if (r.s_range && r.alpha_range && r.q_range && r.condition_2) {
    r.verdict = Verdict::ExistsGuaranteed;
  } else if (r.s_range && r.alpha_range && r.beta_nonexist && r.q_supercritical) {
    r.verdict = Verdict::NonexistenceGuaranteed;
  }
  return r;
}

double phi_p(double t, double p) {
  if (t == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(t), p - 1.0), t);
}

InterpolationExponents interpolation_exponents(const Params& params) {
  const Params& P = params;
  const double sp = P.s * P.p;
  InterpolationExponents ex;
  // Value forced by q = p(N + c)/(N - sp).
  ex.c = P.q * (P.N - sp) / P.p - P.N;
  if (!(ex.c > -sp && ex.c < P.alpha)) {
    std::ostringstream msg;
    msg << "auxiliary exponent c = " << ex.c << " outside (" << -sp << ", " << P.alpha
        << "); requires p < q < p(N + alpha)/(N - sp)";
    throw Error(ErrorKind::ExponentDerivation, msg.str());
  }
  ex.e1 = P.alpha - ex.c;
  ex.e2 = -(P.alpha - P.beta + (P.q - P.p) * (1.0 - P.N) / P.p);
  if (!(ex.e2 > 0.0)) {
    std::ostringstream msg;
    msg << "e2 = " << ex.e2 << " must be positive (alpha - beta + (q - p)(1 - N)/p < 0)";
    throw Error(ErrorKind::ExponentDerivation, msg.str());
  }
  const double sum = ex.e1 + ex.e2;
  ex.omega = P.p * ex.e1 / sum;
  // (q e2 + (q - p) e1)/(e1 + e2), written so that eta + omega = q holds.
  ex.eta = P.q - ex.omega;
  ex.eta_printed = (P.p * ex.e2 + (P.q - P.p) * ex.e1) / sum;
  ex.degiorgi_exponent_printed = (P.p * ex.e2 + P.q * ex.e1) / (P.p * ex.e1 + P.p * ex.e2);
  return ex;
}

}  // namespace henon
