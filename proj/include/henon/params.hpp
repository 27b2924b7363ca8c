#pragma once

#include <string>
#include <string_view>

namespace henon {

/// Problem parameters for
///   gamma (-Delta)_p u + (1 - gamma) (-Delta)_p^s u + |x|^beta |u|^{p-2} u
///     = |x|^alpha |u|^{q-2} u   in R^N.
///
/// A local part (gamma > 0) forces s = 1, matching the choice of W^{1,p} as
/// the energy space.
struct Params {
  int N = 3;
  double p = 2.0;
  double q = 4.0;
  double s = 1.0;
  double gamma = 1.0;
  double alpha = 0.0;
  double beta = 2.0;

  /// Throws Error(Configuration) when a field is out of range.
  void validate() const;

  bool fractional() const { return s < 1.0; }

  /// Critical exponent p(N + alpha)/(N - sp) for gamma = 0, p(N + alpha)/(N - p)
  /// otherwise. Throws Error(SupercriticalDimension) if the denominator is <= 0.
  double p_star() const;

  /// (N - sp)/p.
  double tau() const { return (N - s * p) / p; }
};

enum class Verdict { ExistsGuaranteed, NonexistenceGuaranteed, Unclassified };

std::string_view to_string(Verdict v);
Verdict verdict_from_string(std::string_view name);

struct AdmissibilityReport {
  bool s_range = false;        // 1/p < s < N/p
  bool alpha_range = false;    // alpha > -sp
  bool q_range = false;        // p < q < p*
  bool condition_2 = false;    // alpha - beta + (q - p)(1 - N)/p < 0
  bool beta_nonexist = false;  // beta > p(1 - s)
  bool q_supercritical = false;
  Verdict verdict = Verdict::Unclassified;
};

AdmissibilityReport classify(const Params& params);

/// |t|^{p-2} t, extended by 0 at t = 0.
double phi_p(double t, double p);

double p_star(const Params& params);

/// Bookkeeping for the weighted interpolation inequality
///   \int |x|^alpha |u|^q <= C ||u||_{s,p}^eta ||u||_{p,beta}^omega.
struct InterpolationExponents {
  double c = 0.0;
  double e1 = 0.0;
  double e2 = 0.0;
  double eta = 0.0;
  double omega = 0.0;
  /// eta as printed in the source derivation, (p e2 + (q - p) e1)/(e1 + e2).
  double eta_printed = 0.0;
  /// Level-set recursion exponent (p e2 + q e1)/(p e1 + p e2) from the same source.
  double degiorgi_exponent_printed = 0.0;
};

enum class EtaVariant { Homogeneous, Printed };

/// Throws Error(ExponentDerivation) when c leaves (-sp, alpha) or e1, e2 are
/// not both positive.
InterpolationExponents interpolation_exponents(const Params& params);

}  // namespace henon
