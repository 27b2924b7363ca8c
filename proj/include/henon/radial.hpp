#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "henon/quadrature.hpp"

namespace henon {

/// Surface measure of the unit sphere S^{N-1} in R^N (2 for N = 1).
double sphere_area(int N);

/// Volume of the unit ball in R^N.
double ball_volume(int N);

/// Truncated radial mesh on [0, R] with power-law node placement
/// r_i = R ((i + 1) / M)^grading, i = 0..M-1.
///
/// The mesh has M cells. Cell 0 is [0, r_0], on which profiles are constant
/// (even reflection through the origin); cell c >= 1 is [r_{c-1}, r_c].
class RadialGrid {
 public:
  static constexpr int kMinNodes = 4;
  static constexpr int kDefaultQuadratureOrder = 6;

  RadialGrid(int N, double R, int M, double grading,
             int quadrature_order = kDefaultQuadratureOrder);

  int dimension() const { return dimension_; }
  double radius() const { return radius_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  double grading() const { return grading_; }
  int quadrature_order() const { return quadrature_order_; }

  std::span<const double> nodes() const { return nodes_; }
  double node(int i) const { return nodes_[i]; }

  int cell_count() const { return size(); }
  double cell_lo(int c) const { return c == 0 ? 0.0 : nodes_[c - 1]; }
  double cell_hi(int c) const { return nodes_[c]; }
  double cell_width(int c) const { return cell_hi(c) - cell_lo(c); }
  int left_node(int c) const { return c == 0 ? 0 : c - 1; }
  int right_node(int c) const { return c; }

  /// Cell containing r for 0 <= r < R.
  int locate(double r) const;

  const GaussRule& rule() const { return *rule_; }

  /// Digest of everything that determines the mesh geometry.
  std::uint64_t hash() const { return hash_; }

 private:
  int dimension_;
  double radius_;
  double grading_;
  int quadrature_order_;
  std::vector<double> nodes_;
  const GaussRule* rule_;
  std::uint64_t hash_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr make_grid(int N, double R, int M, double grading,
                  int quadrature_order = RadialGrid::kDefaultQuadratureOrder);

/// Nodal values of a radial profile on a RadialGrid. The value at R is 0 and
/// the profile is extended by zero beyond R.
class RadialFunction {
 public:
  RadialFunction() = default;
  explicit RadialFunction(GridPtr grid);
  RadialFunction(GridPtr grid, std::vector<double> values);

  /// Samples `profile` at the nodes; the last node is forced to 0.
  static RadialFunction sample(GridPtr grid, const std::function<double(double)>& profile);

  const RadialGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }

  std::span<const double> values() const { return values_; }
  double operator[](int i) const { return values_[i]; }
  int size() const { return static_cast<int>(values_.size()); }

  /// Value at local coordinate xi in [0, 1] of cell c.
  double cell_value(int c, double xi) const {
    const int l = grid_->left_node(c);
    const int r = grid_->right_node(c);
    return values_[l] + xi * (values_[r] - values_[l]);
  }

  /// Piecewise-constant derivative on cell c (zero on cell 0).
  double slope(int c) const {
    if (c == 0) return 0.0;
    return (values_[c] - values_[c - 1]) / grid_->cell_width(c);
  }

  bool is_zero() const;

  RadialFunction scaled(double t) const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

/// Piecewise-linear value at r >= 0; constant on [0, r_0], zero for r >= R.
double interpolate(const RadialFunction& f, double r);

/// Cell quadrature for integrals of the form w_{N-1} \int_0^R r^{N-1+w} g(r) dr.
/// Cell 0 carries a single exact point because profiles are constant there.
struct CellQuadrature {
  std::vector<int> cell;
  std::vector<double> xi;
  std::vector<double> weight;

  std::size_t size() const { return cell.size(); }
};

CellQuadrature weighted_quadrature(const RadialGrid& grid, double w);

/// w_{N-1} \int r^{N-1+w} |f|^p dr using a prebuilt quadrature.
double lp_integral(const RadialFunction& f, const CellQuadrature& quad, double p);

/// Adds d/dv_i of lp_integral, scaled by `factor`, into `grad`.
void add_lp_integral_gradient(const RadialFunction& f, const CellQuadrature& quad,
                              double p, double factor, std::span<double> grad);

/// (w_{N-1} \int_0^R r^{N-1+w} |f(r)|^p dr)^{1/p}.
double weighted_lp_norm(const RadialFunction& f, double p, double w);

/// w_{N-1} \int_0^R r^{N-1+w} |f'(r)|^p dr, exact for piecewise-linear f.
double weighted_gradient_integral(const RadialFunction& f, double p, double w = 0.0);

/// Adds d/dv_i of weighted_gradient_integral(f, p, 0), scaled by `factor`.
void add_gradient_integral_gradient(const RadialFunction& f, double p, double factor,
                                    std::span<double> grad);

/// ||grad f||_p for the radial profile.
double radial_gradient_norm(const RadialFunction& f, double p);

}  // namespace henon
