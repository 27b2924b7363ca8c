#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "henon/params.hpp"
#include "henon/radial.hpp"

namespace henon {

/// Angular reduction of the Gagliardo kernel |x - y|^{-(N+sp)} for radial
/// profiles:
///   k(r, rho) = \int_{S^{N-1}} |r e_1 - rho sigma|^{-(N+sp)} d sigma,
/// so that [u]^p = w_{N-1} \int\int |u(r) - u(rho)|^p r^{N-1} rho^{N-1} k dr drho.
/// For N = 1 this is |r - rho|^{-(1+sp)} + (r + rho)^{-(1+sp)}. N = 3 uses the
/// closed form, other N >= 2 an adaptive angular quadrature.
double angular_kernel(double r, double rho, int N, double s, double p);

/// Same quantity by angular quadrature only (N >= 2).
double angular_kernel_quadrature(double r, double rho, int N, double s, double p);

struct KernelOptions {
  int far_order = 6;      // Gauss points per cell for separated cell pairs
  int near_order = 8;     // Gauss points per sub-interval in singular integrals
  int dyadic_levels = 20; // geometric refinement toward coincident points
  double far_radius_factor = 4.0;  // exterior quadrature up to this multiple of R

  bool operator==(const KernelOptions&) const = default;
};

/// Precomputed quadrature weights for the Gagliardo double integral of
/// piecewise-linear radial profiles on a fixed grid.
///
/// The upper triangle is stored row-major by cell pair (c, d), c <= d:
///  - d == c: scalar weight D_c multiplying |slope_c|^p (self interaction);
///  - d == c + 1: a one-dimensional rule (u_m, W_m) for the pair sharing a
///    node, multiplying |slope_c u + slope_{c+1} (1 - u)|^p;
///  - d >= c + 2: a far_order x far_order block W_ab multiplying
///    |f(x_a) - f(y_b)|^p at the Gauss points of the two cells.
/// Exterior points carry the interaction with (R, infinity), where f = 0.
/// All weights already include both orderings of the pair.
class KernelMatrix {
 public:
  std::uint64_t grid_hash() const { return grid_hash_; }
  int dimension() const { return N_; }
  double s() const { return s_; }
  double p() const { return p_; }
  int size() const { return M_; }
  const KernelOptions& options() const { return options_; }

  double self_weight(int c) const { return self_[c]; }
  std::span<const double> adjacent_u(int c) const;
  std::span<const double> adjacent_w(int c) const;
  /// Block for cells (c, d) with |c - d| >= 2, row index over cell c points.
  std::vector<double> far_block(int c, int d) const;
  /// \int_{cell c}\int_{cell d} w_{N-1} r^{N-1} rho^{N-1} k dr drho for
  /// |c - d| >= 2; symmetric by construction.
  double pair_mass(int c, int d) const;

  std::span<const int> exterior_cells() const { return ext_cell_; }
  std::span<const double> exterior_xi() const { return ext_xi_; }
  std::span<const double> exterior_weights() const { return ext_w_; }

  /// Local Gauss coordinates of the far-field points inside each cell.
  const GaussRule& cell_rule() const { return gauss_legendre(options_.far_order); }

  /// Smallest stored weight; nonnegative for a valid matrix.
  double min_weight() const;

  /// [f]_{s,p}^p.
  double integral(const RadialFunction& f) const;
  /// [f]_{s,p}^p restricted to cell pairs touching [cell_lo, cell_hi]. Equals
  /// integral(f) when f vanishes outside those cells.
  double integral_local(const RadialFunction& f, int cell_lo, int cell_hi) const;
  /// Adds factor * d/dv_i [f]^p into grad.
  void add_gradient(const RadialFunction& f, double factor, std::span<double> grad) const;

  void save(const std::filesystem::path& path) const;
  static KernelMatrix load(const std::filesystem::path& path);

 private:
  friend KernelMatrix assemble_kernel_matrix(const RadialGrid&, const Params&,
                                             const KernelOptions&);
  std::size_t far_offset(int c, int d) const;
  void check_grid(const RadialFunction& f) const;

  std::uint64_t grid_hash_ = 0;
  int N_ = 0;
  double s_ = 0.0;
  double p_ = 0.0;
  int M_ = 0;
  KernelOptions options_;
  std::vector<double> cell_width_;
  std::vector<double> self_;
  std::vector<double> adj_u_;
  std::vector<double> adj_w_;
  std::vector<std::size_t> far_row_;
  std::vector<double> far_;
  std::vector<int> ext_cell_;
  std::vector<double> ext_xi_;
  std::vector<double> ext_w_;
};

using KernelPtr = std::shared_ptr<const KernelMatrix>;

/// Throws Error(NotApplicable) for s = 1.
KernelMatrix assemble_kernel_matrix(const RadialGrid& grid, const Params& params,
                                    const KernelOptions& options = {});

/// Returns a kernel for (grid, N, s, p), reusing an in-process cache and, when
/// HENON_CACHE_DIR (or `cache_dir`) names a directory, a file cache.
KernelPtr cached_kernel(const RadialGrid& grid, const Params& params,
                        const KernelOptions& options = {},
                        std::optional<std::filesystem::path> cache_dir = std::nullopt);

std::filesystem::path kernel_cache_file(const std::filesystem::path& dir,
                                        const RadialGrid& grid, const Params& params,
                                        const KernelOptions& options);

/// Directory named by HENON_CACHE_DIR, if set.
std::optional<std::filesystem::path> cache_dir_from_env();

/// [f]_{s,p}. For s = 1 this is the gradient norm; for s < 1 the kernel is
/// used (and assembled on the fly when none is given). Throws
/// Error(StaleKernel) if the kernel was built for another grid or exponents.
double gagliardo_seminorm(const RadialFunction& f, const Params& params,
                          const KernelMatrix* kernel = nullptr);

/// [f]_{s,p}^p.
double gagliardo_integral(const RadialFunction& f, const Params& params,
                          const KernelMatrix* kernel = nullptr);

}  // namespace henon
