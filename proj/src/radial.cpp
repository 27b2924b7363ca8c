#include "henon/radial.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <sstream>

#include "henon/error.hpp"

namespace henon {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

template <typename T>
void fnv_mix(std::uint64_t& h, const T& value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  for (unsigned char b : bytes) {
    h ^= b;
    h *= kFnvPrime;
  }
}

void check_exponent(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw Error(ErrorKind::Configuration, "norm exponent must be >= 1");
  }
}

}  // namespace

double sphere_area(int N) {
  if (N < 1) throw Error(ErrorKind::InvalidDimension, "dimension must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

double ball_volume(int N) { return sphere_area(N) / N; }

RadialGrid::RadialGrid(int N, double R, int M, double grading, int quadrature_order)
    : dimension_(N), radius_(R), grading_(grading), quadrature_order_(quadrature_order) {
  if (N < 1) throw Error(ErrorKind::InvalidDimension, "dimension must be >= 1");
  if (!(R > 0.0) || !std::isfinite(R)) {
    throw Error(ErrorKind::Configuration, "truncation radius must be positive");
  }
  if (M < kMinNodes) {
    throw Error(ErrorKind::Configuration,
                "grid needs at least " + std::to_string(kMinNodes) + " nodes");
  }
  if (!(grading >= 1.0) || !std::isfinite(grading)) {
    throw Error(ErrorKind::Configuration, "grading exponent must be >= 1");
  }
  rule_ = &gauss_legendre(quadrature_order);
  nodes_.resize(M);
  for (int i = 0; i < M; ++i) {
    nodes_[i] = R * std::pow(static_cast<double>(i + 1) / M, grading);
  }
  nodes_.back() = R;
  for (int i = 1; i < M; ++i) {
    if (!(nodes_[i] > nodes_[i - 1])) {
      throw Error(ErrorKind::Configuration, "grid nodes collapse; lower the grading");
    }
  }
  hash_ = kFnvOffset;
  fnv_mix(hash_, dimension_);
  fnv_mix(hash_, radius_);
  fnv_mix(hash_, grading_);
  fnv_mix(hash_, M);
  fnv_mix(hash_, quadrature_order_);
  for (double r : nodes_) fnv_mix(hash_, r);
}

int RadialGrid::locate(double r) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), r);
  if (it == nodes_.end()) return size() - 1;
  return static_cast<int>(it - nodes_.begin());
}

GridPtr make_grid(int N, double R, int M, double grading, int quadrature_order) {
  return std::make_shared<const RadialGrid>(N, R, M, grading, quadrature_order);
}

RadialFunction::RadialFunction(GridPtr grid)
    : grid_(std::move(grid)), values_(grid_->size(), 0.0) {}

RadialFunction::RadialFunction(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_->size()) {
    throw Error(ErrorKind::Configuration, "value count does not match the grid");
  }
  if (values_.back() != 0.0) {
    throw Error(ErrorKind::Domain, "radial function must vanish at the truncation radius");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorKind::Domain, "non-finite nodal value");
  }
}

RadialFunction RadialFunction::sample(GridPtr grid,
                                      const std::function<double(double)>& profile) {
  std::vector<double> values(grid->size());
  for (int i = 0; i + 1 < grid->size(); ++i) values[i] = profile(grid->node(i));
  values.back() = 0.0;
  return RadialFunction(std::move(grid), std::move(values));
}

bool RadialFunction::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

RadialFunction RadialFunction::scaled(double t) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= t;
  v.back() = 0.0;
  return RadialFunction(grid_, std::move(v));
}

double interpolate(const RadialFunction& f, double r) {
  if (!(r >= 0.0)) throw Error(ErrorKind::Domain, "radius must be nonnegative");
  const RadialGrid& g = f.grid();
  if (r >= g.radius()) return 0.0;
  const int c = g.locate(r);
  if (c == 0) return f[0];
  const double xi = (r - g.cell_lo(c)) / g.cell_width(c);
  return f.cell_value(c, xi);
}

CellQuadrature weighted_quadrature(const RadialGrid& grid, double w) {
  const int N = grid.dimension();
  const double a = N - 1 + w;
  if (!(a > -1.0)) {
    std::ostringstream msg;
    msg << "weight r^" << a << " is not integrable at the origin";
    throw Error(ErrorKind::WeightSingularity, msg.str());
  }
  const double omega = sphere_area(N);
  const GaussRule& rule = grid.rule();
  CellQuadrature q;
  const std::size_t n = 1 + (grid.cell_count() - 1) * rule.size();
  q.cell.reserve(n);
  q.xi.reserve(n);
  q.weight.reserve(n);
  q.cell.push_back(0);
  q.xi.push_back(0.5);
  q.weight.push_back(omega * std::pow(grid.node(0), a + 1.0) / (a + 1.0));
  for (int c = 1; c < grid.cell_count(); ++c) {
    const double lo = grid.cell_lo(c);
    const double h = grid.cell_width(c);
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const double r = lo + h * rule.x[k];
      q.cell.push_back(c);
      q.xi.push_back(rule.x[k]);
      q.weight.push_back(omega * h * rule.w[k] * std::pow(r, a));
    }
  }
  return q;
}

double lp_integral(const RadialFunction& f, const CellQuadrature& quad, double p) {
  double sum = 0.0;
  for (std::size_t k = 0; k < quad.size(); ++k) {
    const double v = f.cell_value(quad.cell[k], quad.xi[k]);
    if (v != 0.0) sum += quad.weight[k] * std::pow(std::abs(v), p);
  }
  return sum;
}

void add_lp_integral_gradient(const RadialFunction& f, const CellQuadrature& quad,
                              double p, double factor, std::span<double> grad) {
  const RadialGrid& g = f.grid();
  for (std::size_t k = 0; k < quad.size(); ++k) {
    const int c = quad.cell[k];
    const double xi = quad.xi[k];
    const double v = f.cell_value(c, xi);
    if (v == 0.0) continue;
    const double d = factor * quad.weight[k] * p * std::copysign(std::pow(std::abs(v), p - 1.0), v);
    if (c == 0) {
      grad[0] += d;
    } else {
      grad[g.left_node(c)] += d * (1.0 - xi);
      grad[g.right_node(c)] += d * xi;
    }
  }
}

double weighted_lp_norm(const RadialFunction& f, double p, double w) {
  check_exponent(p);
  const CellQuadrature quad = weighted_quadrature(f.grid(), w);
  return std::pow(lp_integral(f, quad, p), 1.0 / p);
}

double weighted_gradient_integral(const RadialFunction& f, double p, double w) {
  check_exponent(p);
  const RadialGrid& g = f.grid();
  const int N = g.dimension();
  const double e = N + w;
  if (!(e > 0.0)) throw Error(ErrorKind::WeightSingularity, "gradient weight not integrable");
  const double omega = sphere_area(N);
  double sum = 0.0;
  for (int c = 1; c < g.cell_count(); ++c) {
    const double s = f.slope(c);
    if (s == 0.0) continue;
    const double mass = omega * (std::pow(g.cell_hi(c), e) - std::pow(g.cell_lo(c), e)) / e;
    sum += mass * std::pow(std::abs(s), p);
  }
  return sum;
}

void add_gradient_integral_gradient(const RadialFunction& f, double p, double factor,
                                    std::span<double> grad) {
  const RadialGrid& g = f.grid();
  const int N = g.dimension();
  const double omega = sphere_area(N);
  for (int c = 1; c < g.cell_count(); ++c) {
    const double s = f.slope(c);
    if (s == 0.0) continue;
    const double mass = omega * (std::pow(g.cell_hi(c), N) - std::pow(g.cell_lo(c), N)) / N;
    const double d = factor * mass * p * std::copysign(std::pow(std::abs(s), p - 1.0), s) /
                     g.cell_width(c);
    grad[c] += d;
    grad[c - 1] -= d;
  }
}

double radial_gradient_norm(const RadialFunction& f, double p) {
  return std::pow(weighted_gradient_integral(f, p, 0.0), 1.0 / p);
}

}  // namespace henon
