#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "henon/params.hpp"
#include "henon/solver.hpp"

namespace henon {

/// start:stop:step with stop included when hit (up to rounding).
struct Range {
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;

  /// Values start + i*step rounded to a 1e-12 grid. Empty when the range is.
  std::vector<double> values() const;
};

/// Parses "start:stop:step" or a single number (a one-point range).
Range parse_range(const std::string& text);

struct SweepSpec {
  Params base;
  /// Swept parameter names (q, alpha, beta, gamma, s, p) with their ranges,
  /// in nesting order (first is outermost).
  std::vector<std::pair<std::string, Range>> ranges;
  double R = 15.0;
  int M = 200;
  double grading = 2.0;
  SolverConfig solver;
  bool classify_only = false;
};

struct SweepRow {
  Params params;
  double R = 0.0;
  int M = 0;
  Verdict verdict = Verdict::Unclassified;
  bool solved = false;
  bool converged = false;
  double nehari_level = 0.0;
  double residual = 0.0;
  double concentration_index = 0.0;
  double peak_radius = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<std::string> skipped;  // one reason per rejected tuple
};

/// Throws Error(Configuration) for an empty range, an unknown parameter name
/// or when nothing is swept.
SweepResult run_sweep(const SweepSpec& spec);

/// Header N,p,q,s,gamma,alpha,beta,R,M,verdict,converged,nehari_level,
/// residual,concentration_index,peak_radius; unsolved rows leave the
/// solver columns empty.
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// x,y,class for the first two swept parameters.
void write_plot_data(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRow>& rows);

}  // namespace henon
