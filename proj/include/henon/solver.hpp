#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "henon/functional.hpp"

namespace henon {

struct SolverConfig {
  int max_iterations = 5000;
  double residual_tolerance = 1e-6;
  double initial_step = 1.0;
  double shrink = 0.5;
  double sufficient_decrease = 1e-4;
  int restarts = 3;
  std::uint64_t seed = 1;
  int memory = 10;
  /// Initial bump widths are log-spaced from R/8 down to this value (0 keeps R/8 only).
  double min_width = 0.0;
  int width_levels = 1;

  void validate() const;
};

struct SolveDiagnostics {
  double decay_exponent_fit = 0.0;   // NaN when too few tail points
  double concentration_index = 0.0;
  double peak_radius = 0.0;
  double ps_constant = 0.0;          // max (1 - p/q)||u_n||^p / (p + ||u_n||)
};

struct SolveReport {
  RadialFunction solution;
  EnergyBreakdown energy;
  double residual = 0.0;
  double nehari_level = 0.0;
  int iterations = 0;
  bool converged = false;
  SolveDiagnostics diagnostics;
  std::vector<double> level_history;     // Nehari level after each accepted step
  std::vector<double> residual_history;
  int best_restart = 0;
  int restarts_run = 0;
  bool nonexistence_region = false;
};

/// A(f)/B(f)^{p/q}.
double nehari_quotient(const Model& model, const RadialFunction& f);

/// t* = (A/B)^{1/(q-p)}. Throws Error(DegenerateDirection) when B = 0 and
/// Error(Configuration) when q = p.
double nehari_scale(const Model& model, const RadialFunction& f);
double nehari_scale(double A, double B, double p, double q);

/// Minimizes the Nehari quotient over nonnegative profiles by projected,
/// preconditioned L-BFGS with backtracking, keeping every iterate on the
/// Nehari manifold. Restarts from seeded bumps centered at 0, R/8 and R/4;
/// a nonzero `initial` is used for the first run. Throws Error(NoCandidate)
/// if no run produces a usable profile.
SolveReport solve_ground_state(const Model& model, const SolverConfig& config,
                               const std::optional<RadialFunction>& initial = std::nullopt);

struct MountainPassReport {
  double radius = 0.0;
  int samples = 0;
  double min_energy = 0.0;       // min J over sampled directions at norm `radius`
  bool condition_i = false;
  bool witness_found = false;
  double witness_t = 0.0;
  double witness_energy = 0.0;
  double witness_norm = 0.0;
  bool superhomogeneous = false; // q > p
  bool pass = false;
};

MountainPassReport mountain_pass_geometry_check(const Model& model, double radius, int samples,
                                                std::uint64_t seed);

}  // namespace henon
