#include "henon/functional.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "henon/error.hpp"

namespace henon {

struct Model::HatCache {
  std::once_flag once;
  std::vector<double> norms;
};

Model::Model(const Params& params, GridPtr grid, KernelPtr kernel)
    : params_(params), grid_(std::move(grid)), kernel_(std::move(kernel)),
      hats_(std::make_shared<HatCache>()) {
  params_.validate();
  if (grid_->dimension() != params_.N) {
    throw Error(ErrorKind::Configuration, "grid dimension differs from N");
  }
  if (params_.fractional()) {
    if (!kernel_) kernel_ = cached_kernel(*grid_, params_);
    if (kernel_->grid_hash() != grid_->hash()) {
      throw Error(ErrorKind::StaleKernel, "kernel was assembled for a different grid");
    }
    if (kernel_->dimension() != params_.N || kernel_->s() != params_.s ||
        kernel_->p() != params_.p) {
      throw Error(ErrorKind::StaleKernel, "kernel was assembled for different exponents");
    }
  } else {
    kernel_.reset();
  }
  confinement_quad_ = weighted_quadrature(*grid_, params_.beta);
  source_quad_ = weighted_quadrature(*grid_, params_.alpha);
}

void Model::check(const RadialFunction& f) const {
  if (f.grid().hash() != grid_->hash()) {
    throw Error(ErrorKind::StaleKernel, "profile lives on a different grid");
  }
}

double Model::gradient_integral(const RadialFunction& f) const {
  check(f);
  return weighted_gradient_integral(f, params_.p, 0.0);
}

double Model::seminorm_integral(const RadialFunction& f) const {
  check(f);
  if (kernel_) return kernel_->integral(f);
  return weighted_gradient_integral(f, params_.p, 0.0);
}

double Model::confinement_integral(const RadialFunction& f) const {
  check(f);
  return lp_integral(f, confinement_quad_, params_.p);
}

double Model::source_integral(const RadialFunction& f) const {
  check(f);
  return lp_integral(f, source_quad_, params_.q);
}

double Model::source_fraction_inside(const RadialFunction& f, double fraction) const {
  check(f);
  const double cut = fraction * grid_->radius();
  double inside = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < source_quad_.size(); ++k) {
    const int c = source_quad_.cell[k];
    const double xi = source_quad_.xi[k];
    const double v = f.cell_value(c, xi);
    if (v == 0.0) continue;
    const double w = source_quad_.weight[k] * std::pow(std::abs(v), params_.q);
    const double r = c == 0 ? 0.0 : grid_->cell_lo(c) + xi * grid_->cell_width(c);
    total += w;
    if (r <= cut) inside += w;
  }
  return total > 0.0 ? inside / total : 0.0;
}

EnergyBreakdown Model::energy(const RadialFunction& f) const {
  const Params& P = params_;
  EnergyBreakdown e;
  const double G = P.gamma > 0.0 ? gradient_integral(f) : 0.0;
  const double S = P.gamma < 1.0 ? seminorm_integral(f) : 0.0;
  const double C = confinement_integral(f);
  const double B = source_integral(f);
  e.grad_term = P.gamma / P.p * G;
  e.nonlocal_term = (1.0 - P.gamma) / P.p * S;
  e.confinement_term = C / P.p;
  e.source_term = B / P.q;
  e.A = P.gamma * G + (1.0 - P.gamma) * S + C;
  e.B = B;
  e.J = e.grad_term + e.nonlocal_term + e.confinement_term - e.source_term;
  return e;
}

void Model::split_gradient(const RadialFunction& f, std::vector<double>& dA,
                           std::vector<double>& dB) const {
  check(f);
  const Params& P = params_;
  const int M = grid_->size();
  dA.assign(M, 0.0);
  dB.assign(M, 0.0);
  if (P.gamma > 0.0) add_gradient_integral_gradient(f, P.p, P.gamma, dA);
  if (P.gamma < 1.0) {
    if (kernel_) {
      kernel_->add_gradient(f, 1.0 - P.gamma, dA);
    } else {
      add_gradient_integral_gradient(f, P.p, 1.0 - P.gamma, dA);
    }
  }
  add_lp_integral_gradient(f, confinement_quad_, P.p, 1.0, dA);
  add_lp_integral_gradient(f, source_quad_, P.q, 1.0, dB);
  dA.back() = 0.0;
  dB.back() = 0.0;
}

std::vector<double> Model::gradient(const RadialFunction& f) const {
  std::vector<double> dA, dB;
  split_gradient(f, dA, dB);
  for (std::size_t i = 0; i < dA.size(); ++i) dA[i] = dA[i] / params_.p - dB[i] / params_.q;
  return dA;
}

double Model::norm(const RadialFunction& f) const {
  const double p = params_.p;
  return std::pow(confinement_integral(f), 1.0 / p) + std::pow(seminorm_integral(f), 1.0 / p);
}

const std::vector<double>& Model::hat_norms() const {
  std::call_once(hats_->once, [this] {
    const int M = grid_->size();
    const double p = params_.p;
    std::vector<double> norms(M - 1);
    std::vector<double> values(M, 0.0);
    for (int i = 0; i + 1 < M; ++i) {
      values[i] = 1.0;
      RadialFunction phi(grid_, values);
      const double C = lp_integral(phi, confinement_quad_, p);
      const double S = kernel_ ? kernel_->integral_local(phi, i, i + 1)
                               : weighted_gradient_integral(phi, p, 0.0);
      norms[i] = std::pow(C, 1.0 / p) + std::pow(S, 1.0 / p);
      values[i] = 0.0;
    }
    hats_->norms = std::move(norms);
  });
  return hats_->norms;
}

double Model::residual(const RadialFunction& f, const std::vector<double>& grad) const {
  if (f.is_zero()) return 0.0;
  const std::vector<double>& hats = hat_norms();
  const double scale = std::max(1.0, std::pow(norm(f), params_.p - 1.0));
  double worst = 0.0;
  for (std::size_t i = 0; i < hats.size(); ++i) {
    worst = std::max(worst, std::abs(grad[i]) / hats[i]);
  }
  return worst / scale;
}

double Model::residual(const RadialFunction& f) const { return residual(f, gradient(f)); }

EnergyBreakdown energy(const RadialFunction& f, const Params& params, KernelPtr kernel) {
  return Model(params, f.grid_ptr(), std::move(kernel)).energy(f);
}

std::vector<double> gradient(const RadialFunction& f, const Params& params, KernelPtr kernel) {
  return Model(params, f.grid_ptr(), std::move(kernel)).gradient(f);
}

double residual(const RadialFunction& f, const Params& params, KernelPtr kernel) {
  return Model(params, f.grid_ptr(), std::move(kernel)).residual(f);
}

}  // namespace henon
