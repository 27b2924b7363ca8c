#pragma once

#include <memory>
#include <vector>

#include "henon/kernel.hpp"
#include "henon/params.hpp"
#include "henon/radial.hpp"

namespace henon {

struct EnergyBreakdown {
  double grad_term = 0.0;        // (gamma/p) ||grad u||_p^p
  double nonlocal_term = 0.0;    // ((1 - gamma)/p) [u]_{s,p}^p
  double confinement_term = 0.0; // (1/p) ||u||_{p,beta}^p
  double source_term = 0.0;      // (1/q) ||u||_{q,alpha}^q
  double J = 0.0;
  double A = 0.0;
  double B = 0.0;
};

/// Discretized energy
///   J(u) = (gamma/p)||grad u||^p + ((1-gamma)/p)[u]^p + (1/p)||u||_{p,beta}^p
///          - (1/q)||u||_{q,alpha}^q
/// on a fixed grid. For s = 1 the seminorm [u] is ||grad u||_p. Holds the
/// quadratures and the kernel so repeated evaluations are cheap.
class Model {
 public:
  /// Builds (or fetches from cache) the kernel when s < 1 and none is given.
  Model(const Params& params, GridPtr grid, KernelPtr kernel = nullptr);

  const Params& params() const { return params_; }
  const RadialGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const KernelMatrix* kernel() const { return kernel_.get(); }

  double gradient_integral(const RadialFunction& f) const;    // ||grad f||_p^p
  double seminorm_integral(const RadialFunction& f) const;    // [f]_{s,p}^p
  double confinement_integral(const RadialFunction& f) const; // ||f||_{p,beta}^p
  double source_integral(const RadialFunction& f) const;      // ||f||_{q,alpha}^q
  /// Share of the source integral carried by r <= fraction * R.
  double source_fraction_inside(const RadialFunction& f, double fraction) const;

  EnergyBreakdown energy(const RadialFunction& f) const;

  /// dA/dv_i and dB/dv_i for the free nodes; entries for the last node are 0.
  void split_gradient(const RadialFunction& f, std::vector<double>& dA,
                      std::vector<double>& dB) const;

  /// dJ/dv_i = <J'(f), phi_i>; the last entry (node at R) is 0.
  std::vector<double> gradient(const RadialFunction& f) const;

  /// ||f||_{s,p,beta} = ||f||_{p,beta} + [f]_{s,p}.
  double norm(const RadialFunction& f) const;

  /// ||phi_i||_{s,p,beta} for each free node.
  const std::vector<double>& hat_norms() const;

  /// max_i |<J'(f), phi_i>| / (||phi_i||_{s,p,beta} max(1, ||f||_{s,p,beta}^{p-1})).
  double residual(const RadialFunction& f) const;
  /// Same, from an already computed gradient.
  double residual(const RadialFunction& f, const std::vector<double>& grad) const;

 private:
  void check(const RadialFunction& f) const;

  struct HatCache;

  Params params_;
  GridPtr grid_;
  KernelPtr kernel_;
  CellQuadrature confinement_quad_;
  CellQuadrature source_quad_;
  std::shared_ptr<HatCache> hats_;
};

EnergyBreakdown energy(const RadialFunction& f, const Params& params,
                       KernelPtr kernel = nullptr);
std::vector<double> gradient(const RadialFunction& f, const Params& params,
                             KernelPtr kernel = nullptr);
double residual(const RadialFunction& f, const Params& params, KernelPtr kernel = nullptr);

}  // namespace henon
