#include "henon/kernel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

#include "henon/error.hpp"
#include "henon/parallel.hpp"

namespace henon {

namespace {

constexpr char kMagic[8] = {'H', 'N', 'K', 'R', 'N', 'L', '0', '1'};
constexpr std::uint32_t kFormatVersion = 1;

inline double abs_pow(double z, double p) {
  const double a = std::abs(z);
  if (p == 2.0) return a * a;
  if (p == 3.0) return a * a * a;
  if (a == 0.0) return 0.0;
  return std::pow(a, p);
}

inline double signed_pow(double z, double e) {
  if (z == 0.0) return 0.0;
  if (e == 1.0) return z;
  if (e == 2.0) return z * std::abs(z);
  return std::copysign(std::pow(std::abs(z), e), z);
}

void check_pair(double r, double rho, int N) {
  if (N < 1) throw Error(ErrorKind::InvalidDimension, "dimension must be >= 1");
  if (!(r > 0.0) || !(rho > 0.0) || !std::isfinite(r) || !std::isfinite(rho)) {
    throw Error(ErrorKind::Domain, "kernel radii must be positive and finite");
  }
  if (r == rho) throw Error(ErrorKind::Singularity, "kernel is singular on the diagonal r = rho");
}

// Evaluates k(r, rho) and the radial density w_{N-1} r^{N-1} rho^{N-1} k.
class KernelEval {
 public:
  KernelEval(int N, double s, double p, bool force_quadrature = false)
      : N_(N), a_(N + s * p), b_(1.0 + s * p), numeric_(force_quadrature || (N != 1 && N != 3)) {
    omega_ = sphere_area(N);
    if (N >= 2) omega_angle_ = sphere_area(N - 1);
    inner_ = &gauss_legendre(10);
  }

  double k(double r, double rho) const {
    if (N_ == 1 && !numeric_) {
      return std::pow(std::abs(r - rho), -b_) + std::pow(r + rho, -b_);
    }
    const double m = std::max(r, rho);
    const double t = std::min(r, rho) / m;
    if (!numeric_) {
      // 2 pi [(1 - t)^{-b} - (1 + t)^{-b}] / (b t), scaled by m^{-(b+2)}.
      const double scale = 2.0 * std::numbers::pi * std::pow(m, -(b_ + 2.0));
      if (t < 1e-300) return scale * 2.0;
      const double diff = std::expm1(-b_ * std::log1p(-t)) - std::expm1(-b_ * std::log1p(t));
      return scale * diff / (b_ * t);
    }
    return std::pow(m, -a_) * omega_angle_ * angular(t);
  }

  double density(double r, double rho) const {
    double w = omega_ * k(r, rho);
    if (N_ > 1) w *= std::pow(r * rho, N_ - 1);
    return w;
  }

 private:
  // \int_0^pi sin^{N-2} theta ((1 - t)^2 + 4 t sin^2(theta/2))^{-a/2} d theta.
  double angular(double t) const {
    const double gap = 1.0 - t;
    const double theta0 = t > 0.0 ? gap / std::sqrt(t) : std::numbers::pi;
    const GaussRule& rule = *inner_;
    auto piece = [&](double lo, double hi) {
      double sum = 0.0;
      const double h = hi - lo;
      for (std::size_t j = 0; j < rule.size(); ++j) {
        const double th = lo + h * rule.x[j];
        const double sh = std::sin(0.5 * th);
        const double D = gap * gap + 4.0 * t * sh * sh;
        double v = std::pow(D, -0.5 * a_);
        if (N_ > 2) v *= std::pow(std::sin(th), N_ - 2);
        sum += rule.w[j] * v;
      }
      return sum * h;
    };
    double hi = std::min(theta0, std::numbers::pi);
    double total = piece(0.0, hi);
    while (hi < std::numbers::pi) {
      const double next = std::min(2.0 * hi, std::numbers::pi);
      total += piece(hi, next);
      hi = next;
    }
    return total;
  }

  int N_;
  double a_;
  double b_;
  bool numeric_;
  double omega_ = 0.0;
  double omega_angle_ = 0.0;
  const GaussRule* inner_;
};

template <typename T>
void put(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  in.read(reinterpret_cast<char*>(bytes), sizeof(T));
  if (!in) throw Error(ErrorKind::Io, "truncated kernel file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

double angular_kernel(double r, double rho, int N, double s, double p) {
  check_pair(r, rho, N);
  return KernelEval(N, s, p).k(r, rho);
}

double angular_kernel_quadrature(double r, double rho, int N, double s, double p) {
  check_pair(r, rho, N);
  if (N < 2) throw Error(ErrorKind::InvalidDimension, "angular quadrature needs N >= 2");
  return KernelEval(N, s, p, true).k(r, rho);
}

std::span<const double> KernelMatrix::adjacent_u(int c) const {
  const std::size_t n = 2 * options_.near_order;
  return std::span<const double>(adj_u_).subspan(c * n, n);
}

std::span<const double> KernelMatrix::adjacent_w(int c) const {
  const std::size_t n = 2 * options_.near_order;
  return std::span<const double>(adj_w_).subspan(c * n, n);
}

std::size_t KernelMatrix::far_offset(int c, int d) const {
  const std::size_t G = options_.far_order;
  return far_row_[c] + static_cast<std::size_t>(d - c - 2) * G * G;
}

std::vector<double> KernelMatrix::far_block(int c, int d) const {
  if (std::abs(c - d) < 2 || c < 0 || d < 0 || c >= M_ || d >= M_) {
    throw Error(ErrorKind::Configuration, "far block needs cells at least two apart");
  }
  const std::size_t G = options_.far_order;
  std::vector<double> block(G * G);
  const bool swap = c > d;
  const std::size_t off = swap ? far_offset(d, c) : far_offset(c, d);
  for (std::size_t a = 0; a < G; ++a) {
    for (std::size_t b = 0; b < G; ++b) {
      block[a * G + b] = swap ? far_[off + b * G + a] : far_[off + a * G + b];
    }
  }
  return block;
}

double KernelMatrix::pair_mass(int c, int d) const {
  const std::vector<double> block = far_block(c, d);
  double sum = 0.0;
  for (double w : block) sum += w;
  return 0.5 * sum;
}

double KernelMatrix::min_weight() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto* v : {&self_, &adj_w_, &far_, &ext_w_}) {
    for (double w : *v) m = std::min(m, w);
  }
  return m;
}

void KernelMatrix::check_grid(const RadialFunction& f) const {
  if (f.grid().hash() != grid_hash_) {
    throw Error(ErrorKind::StaleKernel, "kernel was assembled for a different grid");
  }
}

double KernelMatrix::integral_local(const RadialFunction& f, int cell_lo, int cell_hi) const {
  check_grid(f);
  const GaussRule& rule = cell_rule();
  const int G = options_.far_order;
  cell_lo = std::max(cell_lo, 0);
  cell_hi = std::min(cell_hi, M_ - 1);
  auto touches = [&](int c) { return c >= cell_lo && c <= cell_hi; };

  std::vector<double> F(static_cast<std::size_t>(M_) * G);
  std::vector<double> slope(M_);
  for (int c = 0; c < M_; ++c) {
    slope[c] = f.slope(c);
    for (int a = 0; a < G; ++a) F[c * G + a] = f.cell_value(c, rule.x[a]);
  }

  double sum = 0.0;
  for (int c = std::max(cell_lo, 1); c <= cell_hi; ++c) sum += self_[c] * abs_pow(slope[c], p_);
  const int n = 2 * options_.near_order;
  for (int c = std::max(cell_lo - 1, 0); c + 1 < M_ && c <= cell_hi; ++c) {
    for (int m = 0; m < n; ++m) {
      const double u = adj_u_[c * n + m];
      sum += adj_w_[c * n + m] * abs_pow(slope[c] * u + slope[c + 1] * (1.0 - u), p_);
    }
  }

  auto block = [&](int c, int d) {
    const double* W = &far_[far_offset(c, d)];
    double acc = 0.0;
    for (int a = 0; a < G; ++a) {
      const double fa = F[c * G + a];
      for (int b = 0; b < G; ++b) acc += W[a * G + b] * abs_pow(fa - F[d * G + b], p_);
    }
    return acc;
  };
  if (cell_lo == 0 && cell_hi == M_ - 1) {
    std::vector<double> row(M_, 0.0);
    parallel_for(static_cast<std::size_t>(M_), [&](std::size_t ci) {
      const int c = static_cast<int>(ci);
      double acc = 0.0;
      for (int d = c + 2; d < M_; ++d) acc += block(c, d);
      row[c] = acc;
    });
    for (double v : row) sum += v;
  } else {
    for (int c = cell_lo; c <= cell_hi; ++c) {
      for (int d = c + 2; d < M_; ++d) sum += block(c, d);
      for (int d = 0; d + 2 <= c; ++d) {
        if (!touches(d)) sum += block(d, c);
      }
    }
  }

  for (std::size_t e = 0; e < ext_w_.size(); ++e) {
    if (!touches(ext_cell_[e])) continue;
    sum += ext_w_[e] * abs_pow(f.cell_value(ext_cell_[e], ext_xi_[e]), p_);
  }
  return sum;
}

double KernelMatrix::integral(const RadialFunction& f) const {
  return integral_local(f, 0, M_ - 1);
}

void KernelMatrix::add_gradient(const RadialFunction& f, double factor,
                                std::span<double> grad) const {
  check_grid(f);
  const RadialGrid& g = f.grid();
  const GaussRule& rule = cell_rule();
  const int G = options_.far_order;
  const double e = p_ - 1.0;

  std::vector<double> F(static_cast<std::size_t>(M_) * G);
  std::vector<double> slope(M_);
  for (int c = 0; c < M_; ++c) {
    slope[c] = f.slope(c);
    for (int a = 0; a < G; ++a) F[c * G + a] = f.cell_value(c, rule.x[a]);
  }

  std::vector<double> dS(M_, 0.0);
  for (int c = 1; c < M_; ++c) dS[c] += factor * self_[c] * p_ * signed_pow(slope[c], e);
  const int n = 2 * options_.near_order;
  for (int c = 0; c + 1 < M_; ++c) {
    for (int m = 0; m < n; ++m) {
      const double u = adj_u_[c * n + m];
      const double z = slope[c] * u + slope[c + 1] * (1.0 - u);
      if (z == 0.0) continue;
      const double coef = factor * adj_w_[c * n + m] * p_ * signed_pow(z, e);
      dS[c] += coef * u;
      dS[c + 1] += coef * (1.0 - u);
    }
  }

  std::vector<double> dF(F.size(), 0.0);
  for (int c = 0; c < M_; ++c) {
    for (int d = c + 2; d < M_; ++d) {
      const double* W = &far_[far_offset(c, d)];
      for (int a = 0; a < G; ++a) {
        const double fa = F[c * G + a];
        double acc = 0.0;
        for (int b = 0; b < G; ++b) {
          const double z = fa - F[d * G + b];
          if (z == 0.0) continue;
          const double gz = W[a * G + b] * signed_pow(z, e);
          acc += gz;
          dF[d * G + b] -= gz;
        }
        dF[c * G + a] += acc;
      }
    }
  }
  for (double& v : dF) v *= factor * p_;

  for (int c = 1; c < M_; ++c) {
    const double d = dS[c] / g.cell_width(c);
    grad[c] += d;
    grad[c - 1] -= d;
  }
  for (int c = 0; c < M_; ++c) {
    const int l = g.left_node(c);
    const int r = g.right_node(c);
    for (int a = 0; a < G; ++a) {
      grad[l] += dF[c * G + a] * (1.0 - rule.x[a]);
      grad[r] += dF[c * G + a] * rule.x[a];
    }
  }
  for (std::size_t k = 0; k < ext_w_.size(); ++k) {
    const int c = ext_cell_[k];
    const double xi = ext_xi_[k];
    const double v = f.cell_value(c, xi);
    if (v == 0.0) continue;
    const double d = factor * ext_w_[k] * p_ * signed_pow(v, e);
    grad[g.left_node(c)] += d * (1.0 - xi);
    grad[g.right_node(c)] += d * xi;
  }
}

KernelMatrix assemble_kernel_matrix(const RadialGrid& grid, const Params& params,
                                    const KernelOptions& options) {
  params.validate();
  if (!params.fractional()) {
    throw Error(ErrorKind::NotApplicable, "no nonlocal kernel for s = 1");
  }
  if (grid.dimension() != params.N) {
    throw Error(ErrorKind::Configuration, "grid dimension differs from N");
  }
  if (options.far_order < 1 || options.near_order < 1 || options.dyadic_levels < 1 ||
      !(options.far_radius_factor > 1.0)) {
    throw Error(ErrorKind::Configuration, "invalid kernel quadrature options");
  }
  const int N = params.N;
  const double s = params.s;
  const double p = params.p;
  const double sp = s * p;
  const int M = grid.size();
  const int G = options.far_order;
  const int L = options.dyadic_levels;
  const GaussRule& far_rule = gauss_legendre(G);
  const GaussRule& near_rule = gauss_legendre(options.near_order);
  const KernelEval kernel(N, s, p);
  auto density = [&](double r, double rho) { return kernel.density(r, rho); };

  KernelMatrix K;
  K.grid_hash_ = grid.hash();
  K.N_ = N;
  K.s_ = s;
  K.p_ = p;
  K.M_ = M;
  K.options_ = options;
  K.cell_width_.resize(M);
  for (int c = 0; c < M; ++c) K.cell_width_[c] = grid.cell_width(c);

  std::vector<double> x(static_cast<std::size_t>(M) * G), gw(x.size());
  for (int c = 0; c < M; ++c) {
    const double lo = grid.cell_lo(c);
    const double h = grid.cell_width(c);
    for (int a = 0; a < G; ++a) {
      x[c * G + a] = lo + h * far_rule.x[a];
      gw[c * G + a] = h * far_rule.w[a];
    }
  }

  K.far_row_.assign(M, 0);
  std::size_t total = 0;
  for (int c = 0; c < M; ++c) {
    K.far_row_[c] = total;
    total += static_cast<std::size_t>(std::max(0, M - c - 2)) * G * G;
  }
  K.far_.assign(total, 0.0);
  parallel_for(static_cast<std::size_t>(M), [&](std::size_t ci) {
    const int c = static_cast<int>(ci);
    for (int d = c + 2; d < M; ++d) {
      double* W = &K.far_[K.far_offset(c, d)];
      for (int a = 0; a < G; ++a) {
        for (int b = 0; b < G; ++b) {
          W[a * G + b] = 2.0 * gw[c * G + a] * gw[d * G + b] * density(x[c * G + a], x[d * G + b]);
        }
      }
    }
  });

  K.self_.assign(M, 0.0);
  parallel_for(static_cast<std::size_t>(M - 1), [&](std::size_t i) {
    const int c = static_cast<int>(i) + 1;
    const double lo = grid.cell_lo(c);
    const double hi = grid.cell_hi(c);
    auto inner = [&](double d) {
      if (d <= 0.0) return 0.0;
      const double len = hi - d - lo;
      double sum = 0.0;
      for (std::size_t j = 0; j < near_rule.size(); ++j) {
        const double xx = lo + len * near_rule.x[j];
        sum += near_rule.w[j] * density(xx, xx + d);
      }
      return std::pow(d, p) * sum * len;
    };
    K.self_[c] = 2.0 * integrate_dyadic(near_rule, 0.0, hi - lo, L, p - 1.0 - sp, inner);
  });

  const int n = 2 * options.near_order;
  K.adj_u_.assign(static_cast<std::size_t>(std::max(0, M - 1)) * n, 0.0);
  K.adj_w_.assign(K.adj_u_.size(), 0.0);
  parallel_for(static_cast<std::size_t>(M - 1), [&](std::size_t ci) {
    const int c = static_cast<int>(ci);
    const double xs = grid.cell_hi(c);
    const double h1 = grid.cell_width(c);
    const double h2 = grid.cell_width(c + 1);
    const double ustar = h1 / (h1 + h2);
    int m = 0;
    for (auto [ulo, uhi] : {std::pair{0.0, ustar}, std::pair{ustar, 1.0}}) {
      for (std::size_t j = 0; j < near_rule.size(); ++j, ++m) {
        const double u = ulo + (uhi - ulo) * near_rule.x[j];
        const double tmax = std::min(h1 / u, h2 / (1.0 - u));
        auto radial = [&](double t) {
          return std::pow(t, p + 1.0) * density(xs - t * u, xs + t * (1.0 - u));
        };
        const double Gu = integrate_dyadic(near_rule, 0.0, tmax, L, p - sp, radial);
        K.adj_u_[c * n + m] = u;
        K.adj_w_[c * n + m] = 2.0 * (uhi - ulo) * near_rule.w[j] * Gu;
      }
    }
  });

  const double R = grid.radius();
  const double Rf = options.far_radius_factor * R;
  const double omega = sphere_area(N);
  auto exterior = [&](double r) {
    const double d = R - r;
    double sum = 0.0;
    for (int j = 0;; ++j) {
      const double lo = R + (std::ldexp(1.0, j) - 1.0) * d;
      if (lo >= Rf) break;
      const double hi = std::min(R + (std::ldexp(1.0, j + 1) - 1.0) * d, Rf);
      const double h = hi - lo;
      for (std::size_t k = 0; k < near_rule.size(); ++k) {
        const double rho = lo + h * near_rule.x[k];
        sum += h * near_rule.w[k] * std::pow(rho, N - 1) * kernel.k(r, rho);
      }
    }
    const double U = std::pow(r / Rf, sp);
    double mean = 0.0;
    for (std::size_t k = 0; k < near_rule.size(); ++k) {
      mean += near_rule.w[k] * kernel.k(std::pow(U * near_rule.x[k], 1.0 / sp), 1.0);
    }
    sum += std::pow(Rf, -sp) / sp * mean;
    return 2.0 * omega * std::pow(r, N - 1) * sum;
  };
  for (int c = 0; c + 1 < M; ++c) {
    for (int a = 0; a < G; ++a) {
      K.ext_cell_.push_back(c);
      K.ext_xi_.push_back(far_rule.x[a]);
      K.ext_w_.push_back(gw[c * G + a]);
    }
  }
  {
    const int c = M - 1;
    const double lo = grid.cell_lo(c);
    const double h = grid.cell_width(c);
    double top = h;
    for (int j = 0; j < L; ++j) {
      const double bottom = 0.5 * top;
      for (int a = 0; a < G; ++a) {
        const double tau = bottom + (top - bottom) * far_rule.x[a];
        K.ext_cell_.push_back(c);
        K.ext_xi_.push_back((R - tau - lo) / h);
        K.ext_w_.push_back((top - bottom) * far_rule.w[a]);
      }
      top = bottom;
    }
  }
  parallel_for(K.ext_w_.size(), [&](std::size_t e) {
    const int c = K.ext_cell_[e];
    const double r = grid.cell_lo(c) + grid.cell_width(c) * K.ext_xi_[e];
    K.ext_w_[e] *= exterior(r);
  });
  return K;
}

void KernelMatrix::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write kernel file " + path.string());
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kFormatVersion);
  put<std::int32_t>(out, N_);
  put<double>(out, s_);
  put<double>(out, p_);
  put<std::int32_t>(out, M_);
  put<std::uint64_t>(out, grid_hash_);
  put<std::int32_t>(out, options_.far_order);
  put<std::int32_t>(out, options_.near_order);
  put<std::int32_t>(out, options_.dyadic_levels);
  put<double>(out, options_.far_radius_factor);
  for (double h : cell_width_) put<double>(out, h);
  const int n = 2 * options_.near_order;
  const int G = options_.far_order;
  for (int c = 0; c < M_; ++c) {
    put<double>(out, self_[c]);
    if (c + 1 < M_) {
      for (int m = 0; m < n; ++m) put<double>(out, adj_u_[c * n + m]);
      for (int m = 0; m < n; ++m) put<double>(out, adj_w_[c * n + m]);
    }
    for (int d = c + 2; d < M_; ++d) {
      const double* W = &far_[far_offset(c, d)];
      for (int k = 0; k < G * G; ++k) put<double>(out, W[k]);
    }
  }
  put<std::uint64_t>(out, ext_w_.size());
  for (std::size_t e = 0; e < ext_w_.size(); ++e) {
    put<std::int32_t>(out, ext_cell_[e]);
    put<double>(out, ext_xi_[e]);
    put<double>(out, ext_w_[e]);
  }
  if (!out) throw Error(ErrorKind::Io, "failed writing kernel file " + path.string());
}

KernelMatrix KernelMatrix::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open kernel file " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw Error(ErrorKind::Io, "not a kernel file: " + path.string());
  }
  if (get<std::uint32_t>(in) != kFormatVersion) {
    throw Error(ErrorKind::Io, "unsupported kernel file version");
  }
  KernelMatrix K;
  K.N_ = get<std::int32_t>(in);
  K.s_ = get<double>(in);
  K.p_ = get<double>(in);
  K.M_ = get<std::int32_t>(in);
  K.grid_hash_ = get<std::uint64_t>(in);
  K.options_.far_order = get<std::int32_t>(in);
  K.options_.near_order = get<std::int32_t>(in);
  K.options_.dyadic_levels = get<std::int32_t>(in);
  K.options_.far_radius_factor = get<double>(in);
  const int M = K.M_;
  const int G = K.options_.far_order;
  const int n = 2 * K.options_.near_order;
  if (M < RadialGrid::kMinNodes || M > (1 << 20) || G < 1 || G > 64 || n < 2 || n > 128) {
    throw Error(ErrorKind::Io, "corrupt kernel header");
  }
  K.cell_width_.resize(M);
  for (double& h : K.cell_width_) h = get<double>(in);
  K.self_.resize(M);
  K.adj_u_.resize(static_cast<std::size_t>(M - 1) * n);
  K.adj_w_.resize(K.adj_u_.size());
  K.far_row_.assign(M, 0);
  std::size_t total = 0;
  for (int c = 0; c < M; ++c) {
    K.far_row_[c] = total;
    total += static_cast<std::size_t>(std::max(0, M - c - 2)) * G * G;
  }
  K.far_.resize(total);
  for (int c = 0; c < M; ++c) {
    K.self_[c] = get<double>(in);
    if (c + 1 < M) {
      for (int m = 0; m < n; ++m) K.adj_u_[c * n + m] = get<double>(in);
      for (int m = 0; m < n; ++m) K.adj_w_[c * n + m] = get<double>(in);
    }
    for (int d = c + 2; d < M; ++d) {
      double* W = &K.far_[K.far_offset(c, d)];
      for (int k = 0; k < G * G; ++k) W[k] = get<double>(in);
    }
  }
  const auto count = get<std::uint64_t>(in);
  if (count > (1u << 28)) throw Error(ErrorKind::Io, "corrupt kernel exterior table");
  K.ext_cell_.resize(count);
  K.ext_xi_.resize(count);
  K.ext_w_.resize(count);
  for (std::size_t e = 0; e < count; ++e) {
    K.ext_cell_[e] = get<std::int32_t>(in);
    K.ext_xi_[e] = get<double>(in);
    K.ext_w_[e] = get<double>(in);
    if (K.ext_cell_[e] < 0 || K.ext_cell_[e] >= M) {
      throw Error(ErrorKind::Io, "corrupt kernel exterior table");
    }
  }
  return K;
}

std::optional<std::filesystem::path> cache_dir_from_env() {
  const char* dir = std::getenv("HENON_CACHE_DIR");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  return std::filesystem::path(dir);
}

std::filesystem::path kernel_cache_file(const std::filesystem::path& dir,
                                        const RadialGrid& grid, const Params& params,
                                        const KernelOptions& options) {
  std::ostringstream name;
  name << "kernel-N" << params.N << "-s" << params.s << "-p" << params.p << "-M" << grid.size()
       << "-" << std::hex << grid.hash() << std::dec << "-o" << options.far_order << "."
       << options.near_order << "." << options.dyadic_levels << "."
       << options.far_radius_factor << ".bin";
  return dir / name.str();
}

KernelPtr cached_kernel(const RadialGrid& grid, const Params& params,
                        const KernelOptions& options,
                        std::optional<std::filesystem::path> cache_dir) {
  using Key = std::tuple<std::uint64_t, int, double, double, int, int, int, double>;
  static std::mutex mutex;
  static std::map<Key, KernelPtr> memory;
  const Key key{grid.hash(), params.N, params.s, params.p, options.far_order,
                options.near_order, options.dyadic_levels, options.far_radius_factor};
  {
    std::lock_guard lock(mutex);
    auto it = memory.find(key);
    if (it != memory.end()) return it->second;
  }
  if (!cache_dir) cache_dir = cache_dir_from_env();
  KernelPtr result;
  std::filesystem::path file;
  if (cache_dir) {
    file = kernel_cache_file(*cache_dir, grid, params, options);
    std::error_code ec;
    if (std::filesystem::exists(file, ec)) {
      try {
        auto loaded = std::make_shared<KernelMatrix>(KernelMatrix::load(file));
        if (loaded->grid_hash() == grid.hash() && loaded->dimension() == params.N &&
            loaded->s() == params.s && loaded->p() == params.p && loaded->options() == options) {
          result = std::move(loaded);
        }
      } catch (const Error&) {
        result.reset();
      }
    }
  }
  if (!result) {
    result = std::make_shared<KernelMatrix>(assemble_kernel_matrix(grid, params, options));
    if (cache_dir) {
      std::error_code ec;
      std::filesystem::create_directories(*cache_dir, ec);
      try {
        result->save(file);
      } catch (const Error&) {
      }
    }
  }
  std::lock_guard lock(mutex);
  if (memory.size() >= 6) memory.clear();
  memory.emplace(key, result);
  return result;
}

double gagliardo_integral(const RadialFunction& f, const Params& params,
                          const KernelMatrix* kernel) {
  if (!params.fractional()) return weighted_gradient_integral(f, params.p, 0.0);
  if (kernel == nullptr) {
    return cached_kernel(f.grid(), params)->integral(f);
  }
  if (kernel->dimension() != params.N || kernel->s() != params.s || kernel->p() != params.p) {
    throw Error(ErrorKind::StaleKernel, "kernel was assembled for different exponents");
  }
  return kernel->integral(f);
}

double gagliardo_seminorm(const RadialFunction& f, const Params& params,
                          const KernelMatrix* kernel) {
  return std::pow(gagliardo_integral(f, params, kernel), 1.0 / params.p);
}

}  // namespace henon
