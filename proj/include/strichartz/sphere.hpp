#pragma once

// Sphere (S^2 in R^3) quantities: the extension of axisymmetric functions,
// the coefficients c_k of the deficit Hessian at the constant function, the
// f_eps = 1 + eps Y_2^0 family, the two-peak family 1 + e^{i y.theta}, and a
// Nelder-Mead search for small values of the stability quotient.
//
// Extension convention: (f sigma)^(x) = int_{S^2} f(theta) e^{-i x.theta} dsigma,
// so that sigma^(x) = 4 pi sin|x|/|x| and (Y_k^0 sigma)^(x) = 4 pi (-i)^k j_k(|x|) Y_k^0(x/|x|).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "strichartz/optimize.hpp"
#include "strichartz/quad.hpp"
#include "strichartz/specfun.hpp"

namespace strichartz::sphere {

inline constexpr double pi = std::numbers::pi;
using cplx = std::complex<double>;

struct SphereConstants {
  double M = 2.0 * pi;           // sharp extension constant
  double sphere_area = 4.0 * pi;
  double q = 4.0;
};

inline constexpr SphereConstants constants{};

/// 8 pi^2 / 5.
inline double spectral_gap_sphere() { return 8.0 * pi * pi / 5.0; }

/// (2 - sqrt 2) 4 pi^2.
inline double two_peak_sphere() { return (2.0 - std::sqrt(2.0)) * 4.0 * pi * pi; }

/// ||sigma^||_4^4 = 256 pi^6.
inline double quartic_constant() { return 256.0 * std::pow(pi, 6); }

/// f(theta) = sum_k a_k Y_k^0(theta).
struct AxisymCoeffs {
  std::vector<cplx> a;

  int max_degree() const { return static_cast<int>(a.size()) - 1; }

  double norm_sq() const {
    double s = 0.0;
    for (const cplx& c : a) s += std::norm(c);
    return s;
  }

  /// The constant function 1 = sqrt(4 pi) Y_0^0.
  static AxisymCoeffs one() { return {{cplx{std::sqrt(4.0 * pi), 0.0}}}; }

  /// f_eps = 1 + eps Y_2^0.
  static AxisymCoeffs f_epsilon(double eps) { return {{cplx{std::sqrt(4.0 * pi), 0.0}, 0.0, eps}}; }
};

inline double extension_constant(double radius) { return 4.0 * pi * specfun::sinc(radius); }

inline double extension_constant(const std::array<double, 3>& x) {
  return extension_constant(std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
}

/// (-i)^k.
inline cplx minus_i_power(int k) {
  switch (k % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

/// (f sigma)^ at |x| = r, cos(angle to the symmetry axis) = costheta.
inline cplx extension_axisym(const AxisymCoeffs& f, double r, double costheta) {
  if (r < 0.0) throw std::domain_error("extension_axisym: r must be >= 0");
  cplx sum{0.0, 0.0};
  for (int k = 0; k <= f.max_degree(); ++k) {
    if (f.a[k] == cplx{}) continue;
    sum += f.a[k] * minus_i_power(k) * (4.0 * pi * specfun::spherical_bessel_or_limit(k, r) * specfun::ylm0(k, costheta));
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Hessian coefficients c_k

inline double ck_closed(int k) {
  if (k < 0) throw std::domain_error("ck_closed: k must be >= 0");
  return 1.0 / ((2.0 * k + 1.0) * pi);
}

struct CkQuadrature {
  double c = 0.0;       // (4/pi^2) int sin^2 r j_k^2 dr
  double a_part = 0.0;  // (2/pi^2) int j_k^2 dr
  double b_part = 0.0;  // (2/pi^2) int cos(2r) j_k^2 dr;  c = a_part - b_part
  double c_error = 0.0;
  double b_error = 0.0;
  bool converged = false;
};

/// The large-r expansion of j_k^2 proceeds in powers of k^2/r, so the truncation
/// radius is raised to at least 25 k^2 pi and six extrapolation levels are used.
inline CkQuadrature ck_quadrature(int k, const quad::QuadratureSpec& spec_in = {}) {
  if (k < 0) throw std::domain_error("ck_quadrature: k must be >= 0");
  quad::QuadratureSpec spec = spec_in;
  spec.truncation_radius = std::max(spec.truncation_radius, 25.0 * k * k * pi);
  spec.extrapolation_levels = std::max(spec.extrapolation_levels, 6);
  const auto jk2 = [k](double r) {
    const double j = specfun::spherical_bessel_or_limit(k, r);
    return j * j;
  };
  const double s = 2.0 / (pi * pi);
  const quad::QuadResult c = quad::integrate_semi_infinite_oscillatory(
      [&](double r) { const double sn = std::sin(r); return 2.0 * sn * sn * jk2(r); }, spec);
  const quad::QuadResult a = quad::integrate_semi_infinite_oscillatory(jk2, spec);
  const quad::QuadResult b =
      quad::integrate_semi_infinite_oscillatory([&](double r) { return std::cos(2.0 * r) * jk2(r); }, spec);
  CkQuadrature out;
  out.c = s * c.value;
  out.a_part = s * a.value;
  out.b_part = s * b.value;
  out.c_error = s * c.error;
  out.b_error = s * b.error;
  out.converged = c.converged && a.converged && b.converged;
  return out;
}

// ---------------------------------------------------------------------------
// Second variation at the constant function

/// How the term Re(a_k)^2 of the Hessian is read for complex coefficients.
enum class RealPartReading { real_part_squared, real_of_square };

struct HessianForm {
  double hessian_value = 0.0;
  double norm_sq = 0.0;
  double quotient = 0.0;  // hessian_value / (2 norm_sq)
};

inline HessianForm deficit_hessian_sphere(const AxisymCoeffs& f,
                                          RealPartReading reading = RealPartReading::real_part_squared) {
  for (int k = 0; k <= std::min(1, f.max_degree()); ++k) {
    if (f.a[k] != cplx{}) throw std::invalid_argument("deficit_hessian_sphere: a_0 and a_1 must vanish");
  }
  const double m2 = constants.M * constants.M;
  const double c0 = ck_closed(0);
  HessianForm out;
  double weighted = 0.0;
  for (int k = 2; k <= f.max_degree(); ++k) {
    const cplx a = f.a[k];
    const double re = reading == RealPartReading::real_part_squared ? a.real() * a.real() : (a * a).real();
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    out.norm_sq += std::norm(a);
    weighted += ck_closed(k) * (4.0 * std::norm(a) + 2.0 * sign * re);
  }
  if (!(out.norm_sq > 0.0)) throw std::invalid_argument("deficit_hessian_sphere: zero function");
  out.hessian_value = 2.0 * m2 * out.norm_sq - m2 / c0 * weighted;
  out.quotient = out.hessian_value / (2.0 * out.norm_sq);
  return out;
}

// ---------------------------------------------------------------------------
// Quartic norms

/// ||(f sigma)^||_4^4 by radial panels with an exact Gauss-Legendre rule in cos(theta)
/// (|ext|^4 is a polynomial of degree 4K in cos(theta) for coefficients up to degree K).
inline quad::QuadResult quartic_norm(const AxisymCoeffs& f, const quad::QuadratureSpec& spec = {}) {
  if (f.a.empty()) throw std::invalid_argument("quartic_norm: empty coefficients");
  const int kmax = f.max_degree();
  const quad::GaussRule rule = quad::gauss_legendre(2 * kmax + 2);
  std::vector<std::vector<double>> ylm(rule.nodes.size(), std::vector<double>(kmax + 1));
  for (std::size_t l = 0; l < rule.nodes.size(); ++l) {
    for (int k = 0; k <= kmax; ++k) ylm[l][k] = specfun::ylm0(k, rule.nodes[l]);
  }
  std::vector<cplx> radial(kmax + 1);
  const auto integrand = [&](double r) {
    for (int k = 0; k <= kmax; ++k) {
      radial[k] = f.a[k] * minus_i_power(k) * (4.0 * pi * specfun::spherical_bessel_or_limit(k, r));
    }
    double s = 0.0;
    for (std::size_t l = 0; l < rule.nodes.size(); ++l) {
      cplx e{0.0, 0.0};
      for (int k = 0; k <= kmax; ++k) e += radial[k] * ylm[l][k];
      const double m2 = std::norm(e);
      s += rule.weights[l] * m2 * m2;
    }
    return 2.0 * pi * r * r * s;
  };
  return quad::integrate_semi_infinite_oscillatory(integrand, spec);
}

// ---------------------------------------------------------------------------
// Distance to the modulated constants

struct MConstant {
  double m_value = 0.0;
  double r_star = 0.0;          // |x| of the maximizer
  double costheta_star = 1.0;   // cos of its angle to the symmetry axis
  int evaluations = 0;
};

/// Search over |x| in [0, 30] and the axis angle in [0, pi].
inline opt::SearchSpec default_m_search() {
  opt::SearchSpec s;
  s.box = {{0.0, 30.0}, {0.0, pi}};
  s.grid_per_axis = 1;  // unused: seeds are built explicitly
  s.multistart_count = 4;
  s.x_tol = 1e-10;
  s.f_tol = 1e-14;
  s.max_iters = 400;
  s.initial_step = 0.02;
  return s;
}

namespace detail {

// Seeds at half-unit radial steps and 13 angles, plus the origin first.
inline std::vector<std::vector<double>> m_seeds(const opt::SearchSpec& s) {
  std::vector<std::vector<double>> seeds{{0.0, 0.0}};
  const double rmax = s.box[0].hi;
  const int nr = static_cast<int>(std::ceil(2.0 * rmax));
  for (int i = 1; i <= nr; ++i) {
    for (int j = 0; j <= 12; ++j) seeds.push_back({rmax * i / nr, s.box[1].lo + (s.box[1].hi - s.box[1].lo) * j / 12.0});
  }
  return seeds;
}

}  // namespace detail

/// m(f) = (1/4pi) sup_x (Re (f sigma)^(x))^2, the squared projection onto the
/// unit-norm modulated constants.
inline MConstant m_constant_distance(const AxisymCoeffs& f, const opt::SearchSpec& search = default_m_search()) {
  const opt::SearchSpec& s = search;
  if (s.box.size() != 2) throw std::invalid_argument("m_constant_distance: box must be (|x|, angle)");
  const auto objective = [&](const std::vector<double>& p) {
    const double re = extension_axisym(f, p[0], std::cos(p[1])).real();
    return re * re / (4.0 * pi);
  };
  const opt::BoxResult r = opt::maximize_box(objective, s, detail::m_seeds(s));
  return {r.value, r.x[0], std::cos(r.x[1]), r.evaluations};
}

// ---------------------------------------------------------------------------
// The f_eps family

/// Upper end of the eps window in which sup_x of the projection is attained at x = 0.
inline double epsilon_window() { return 2.0 * (1.0 - std::sin(1.0)) * std::sqrt(5.0 * pi) / 35.0; }

class OnManifold : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct FEpsilon {
  double epsilon = 0.0;
  double norm_sq = 0.0;        // 4 pi + eps^2
  double quartic_norm = 0.0;   // I_0 + delta_quartic
  double delta_quartic = 0.0;  // quartic_norm - 256 pi^6, integrated directly
  double quartic_error = 0.0;
  double m_numeric = 0.0;      // m(f_eps) from the search
  double r_star = 0.0;
  double dist_sq = 0.0;
  bool in_window = false;      // dist_sq = eps^2 when true, norm_sq - m_numeric otherwise
  double deficit = 0.0;
  double quotient = 0.0;
  double error_estimate = 0.0;
};

/// Rayleigh quotient delta(f_eps)/dist(f_eps, C)^2. The quartic norm is split as
/// 256 pi^6 + Delta with Delta = int b (4a^3 + 6a^2 b + 4ab^2 + b^3), a = sigma^,
/// b = eps (Y_2^0 sigma)^, so the cancellation in the deficit is done analytically.
inline FEpsilon rayleigh_f_epsilon(double eps, const quad::QuadratureSpec& spec = {},
                                   const opt::SearchSpec& search = default_m_search()) {
  if (!std::isfinite(eps)) throw std::domain_error("rayleigh_f_epsilon: eps must be finite");
  if (eps == 0.0) throw OnManifold("rayleigh_f_epsilon: f_0 = 1 lies on the manifold of constants");
  FEpsilon out;
  out.epsilon = eps;
  out.norm_sq = 4.0 * pi + eps * eps;

  const quad::GaussRule rule = quad::gauss_legendre(6);
  std::vector<double> y2(rule.nodes.size());
  for (std::size_t l = 0; l < y2.size(); ++l) y2[l] = specfun::y20(rule.nodes[l]);
  const auto integrand = [&](double r) {
    const double a = 4.0 * pi * specfun::sinc(r);
    const double bj = -4.0 * pi * eps * specfun::spherical_bessel_or_limit(2, r);
    double s = 0.0;
    for (std::size_t l = 0; l < y2.size(); ++l) {
      const double b = bj * y2[l];
      s += rule.weights[l] * b * (4.0 * a * a * a + 6.0 * a * a * b + 4.0 * a * b * b + b * b * b);
    }
    return 2.0 * pi * r * r * s;
  };
  const quad::QuadResult delta = quad::require_converged(
      quad::integrate_semi_infinite_oscillatory(integrand, spec), "rayleigh_f_epsilon");
  const double i0 = quartic_constant();
  out.delta_quartic = delta.value;
  out.quartic_error = delta.error;
  out.quartic_norm = i0 + delta.value;

  const MConstant m = m_constant_distance(AxisymCoeffs::f_epsilon(eps), search);
  out.m_numeric = m.m_value;
  out.r_star = m.r_star;
  out.in_window = std::abs(eps) < epsilon_window();
  out.dist_sq = out.in_window ? eps * eps : out.norm_sq - out.m_numeric;
  if (!(out.dist_sq > 0.0)) throw OnManifold("rayleigh_f_epsilon: zero distance to the manifold");

  // M^2 (4pi + eps^2) - sqrt(I_0 + Delta), with M^2 4pi = sqrt(I_0).
  const double m2 = constants.M * constants.M;
  const double root_i0 = std::sqrt(i0);
  out.deficit = m2 * eps * eps - delta.value / (std::sqrt(out.quartic_norm) + root_i0);
  out.quotient = out.deficit / out.dist_sq;
  out.error_estimate = delta.error / (2.0 * root_i0) / out.dist_sq;
  return out;
}

// ---------------------------------------------------------------------------
// Two-peak family f_y = 1 + e^{i y.theta}

struct SphereTwoPeak {
  double y = 0.0;
  double norm_sq = 0.0;
  double quartic_norm = 0.0;
  double j22 = 0.0;       // int sigma^(x)^2 sigma^(x+y)^2 dx
  double j22_error = 0.0;
  double m_value = 0.0;
  double dist_sq = 0.0;
  double deficit = 0.0;
  double quotient = 0.0;
  double error_estimate = 0.0;
};

/// int_{R^3} sigma^(x)^2 sigma^(x+y)^2 dx in bipolar coordinates:
/// (2pi/|y|) int_0^inf r F(r) int_{|r-|y||}^{r+|y|} s F(s) ds dr with F = sigma^2,
/// where the inner integral is 8pi^2 [Cin(2(r+|y|)) - Cin(2|r-|y||)].
/// The tail expansion in 1/r only settles for r >> |y|, so the truncation radius is
/// raised to at least 128|y| with six extrapolation levels and the relative
/// tolerance is floored at 1e-8. Accuracy degrades for |y| << 1 through cancellation.
inline quad::QuadResult two_peak_cross_quartic(double y, const quad::QuadratureSpec& spec = {}) {
  if (!(y > 0.0)) throw std::domain_error("two_peak_cross_quartic: |y| must be > 0");
  quad::QuadratureSpec local = spec;
  local.truncation_radius = std::max(spec.truncation_radius, spec.panel_width * std::ceil(128.0 * y / spec.panel_width));
  local.extrapolation_levels = std::max(spec.extrapolation_levels, 6);
  local.rel_tol = std::max(spec.rel_tol, 1e-8);
  const double scale = (2.0 * pi / y) * 16.0 * pi * pi * 8.0 * pi * pi;
  const auto integrand = [&](double r) {
    const double sn = std::sin(r);
    const double outer = r > 1e-8 ? sn * sn / r : r;
    return outer * (specfun::cosine_integral_cin(2.0 * (r + y)) - specfun::cosine_integral_cin(2.0 * std::abs(r - y)));
  };
  local.abs_tol = spec.abs_tol / scale;
  quad::QuadResult r = quad::integrate_semi_infinite_oscillatory(integrand, local);
  r.value *= scale;
  r.error *= scale;
  r.tail *= scale;
  r.tail_envelope *= scale;
  return r;
}

/// Rayleigh quotient of f_y = 1 + e^{i y.theta}, y along the symmetry axis.
/// ||(f_y sigma)^||_4^4 = 2 I_0 + 8 I_0 sin|y|/|y| + 6 J_22; the three-one cross
/// terms reduce exactly to I_0 sin|y|/|y| because sigma*sigma*sigma is constant on S^2.
inline SphereTwoPeak two_peak_quotient_sphere(double y, const quad::QuadratureSpec& spec = {},
                                              opt::SearchSpec search = default_m_search()) {
  if (!(y > 0.0) || !std::isfinite(y)) throw std::domain_error("two_peak_quotient_sphere: |y| must be positive");
  SphereTwoPeak out;
  out.y = y;
  const double s = specfun::sinc(y);
  out.norm_sq = 8.0 * pi + 8.0 * pi * s;
  const quad::QuadResult j22 =
      quad::require_converged(two_peak_cross_quartic(y, spec), "two_peak_quotient_sphere");
  out.j22 = j22.value;
  out.j22_error = j22.error;
  const double i0 = quartic_constant();
  out.quartic_norm = 2.0 * i0 + 8.0 * i0 * s + 6.0 * j22.value;

  // m(f_y) = 4 pi sup_x (sinc|x| + sinc|x - y|)^2 over (|x|, axis angle).
  search.box.resize(2);
  search.box[0] = {0.0, y + 30.0};
  search.box[1] = {0.0, pi};
  std::vector<std::vector<double>> seeds = detail::m_seeds(search);
  seeds.insert(seeds.begin() + 1, {y, 0.0});
  const auto objective = [&](const std::vector<double>& p) {
    const double r = p[0];
    const double dist = std::sqrt(std::max(0.0, r * r + y * y - 2.0 * r * y * std::cos(p[1])));
    const double v = specfun::sinc(r) + specfun::sinc(dist);
    return 4.0 * pi * v * v;
  };
  out.m_value = opt::maximize_box(objective, search, seeds).value;
  out.dist_sq = out.norm_sq - out.m_value;
  if (!(out.dist_sq > 0.0)) throw OnManifold("two_peak_quotient_sphere: zero distance to the manifold");

  const double m2 = constants.M * constants.M;
  const double root = std::sqrt(out.quartic_norm);
  out.deficit = m2 * out.norm_sq - root;
  out.quotient = out.deficit / out.dist_sq;
  out.error_estimate = 6.0 * j22.error / (2.0 * root) / out.dist_sq;
  return out;
}

// ---------------------------------------------------------------------------
// Minimizing-sequence search

struct SphereSearchOptions {
  int basis_size = 6;            // coefficients a_0..a_N
  double seed_epsilon = 0.03;    // seed f = 1 + eps Y_2^0
  double coefficient_bound = 4.0;
  int nodes_per_panel = 10;      // radial Gauss-Legendre nodes per pi-panel
  opt::SearchSpec search;        // box is filled in from coefficient_bound
  opt::SearchSpec m_search = default_m_search();
  quad::QuadratureSpec quadrature;
  double required_gain = 0.01;   // must beat 8 pi^2/5 by this much

  SphereSearchOptions() {
    search.multistart_count = 1;
    search.max_evaluations = 2000;
    search.max_iters = 100000;
    search.x_tol = 1e-8;
    search.f_tol = 1e-12;
    search.initial_step = 0.02;
  }
};

struct TraceEntry {
  int evaluation = 0;
  double quotient = 0.0;
  double dist_sq = 0.0;
  double deficit = 0.0;
  std::vector<double> coeffs;
};

struct SphereSearchResult {
  std::vector<double> best_coeffs;  // a_0..a_N
  double quotient = 0.0;            // upper bound on the stability constant
  double seed_quotient = 0.0;
  int evaluations = 0;
  bool budget_exhausted = false;
  bool success = false;             // quotient < 8 pi^2/5 - required_gain
  std::vector<TraceEntry> trace;    // improving iterates only, so quotients decrease
};

/// Evaluates the stability quotient of real axisymmetric f = sum_{k<=N} a_k Y_k^0.
/// The quartic norm uses a fixed radial x angular product rule so that repeated
/// evaluations are cheap.
class SphereQuotient {
 public:
  SphereQuotient(int basis_size, int nodes_per_panel, const quad::QuadratureSpec& spec,
                 opt::SearchSpec m_search)
      : n_(basis_size), grid_(spec, nodes_per_panel, 2 * basis_size + 2), m_search_(std::move(m_search)) {
    for (double r : grid_.radii()) {
      std::vector<double> row(n_ + 1);
      for (int k = 0; k <= n_; ++k) row[k] = 4.0 * pi * specfun::spherical_bessel_or_limit(k, r);
      bessel_.push_back(std::move(row));
    }
    for (double c : grid_.cosines()) {
      std::vector<double> row(n_ + 1);
      for (int k = 0; k <= n_; ++k) row[k] = specfun::ylm0(k, c);
      harmonics_.push_back(std::move(row));
    }
  }

  struct Value {
    double quotient = 0.0;
    double deficit = 0.0;
    double dist_sq = 0.0;
    double quartic_norm = 0.0;
  };

  Value operator()(const std::vector<double>& a) const {
    if (static_cast<int>(a.size()) != n_ + 1) throw std::invalid_argument("SphereQuotient: wrong coefficient count");
    const double quartic = grid_.integrate([&](std::size_t i, std::size_t l) {
      // Even degrees contribute to the real part of the extension, odd degrees to the imaginary part.
      double re = 0.0;
      double im = 0.0;
      for (int k = 0; k <= n_; ++k) {
        const double t = a[k] * bessel_[i][k] * harmonics_[l][k];
        switch (k % 4) {
          case 0: re += t; break;
          case 1: im -= t; break;
          case 2: re -= t; break;
          default: im += t; break;
        }
      }
      const double m2 = re * re + im * im;
      return m2 * m2;
    });
    AxisymCoeffs f;
    double norm = 0.0;
    for (double c : a) {
      f.a.emplace_back(c, 0.0);
      norm += c * c;
    }
    Value v;
    v.quartic_norm = quartic;
    v.dist_sq = norm - m_constant_distance(f, m_search_).m_value;
    v.deficit = constants.M * constants.M * norm - std::sqrt(quartic);
    v.quotient = v.deficit / v.dist_sq;
    return v;
  }

 private:
  int n_;
  quad::RadialAngularGrid grid_;
  opt::SearchSpec m_search_;
  std::vector<std::vector<double>> bessel_;
  std::vector<std::vector<double>> harmonics_;
};

/// Minimizes the quotient over real coefficients a_1..a_N with a_0 = sqrt(4 pi)
/// held fixed (the quotient is invariant under scaling f). The seed f_eps is
/// evaluated first, so a budget of one evaluation returns the seed quotient.
inline SphereSearchResult minimize_rayleigh_sphere(const SphereSearchOptions& options = {}) {
  const int n = options.basis_size;
  if (n < 3) throw std::domain_error("minimize_rayleigh_sphere: basis size must be >= 3");
  if (!(options.coefficient_bound > 0.0)) throw std::domain_error("minimize_rayleigh_sphere: bad coefficient bound");
  const SphereQuotient quotient(n, options.nodes_per_panel, options.quadrature, options.m_search);
  const double a0 = std::sqrt(4.0 * pi);
  const auto full = [&](const std::vector<double>& free) {
    std::vector<double> a{a0};
    a.insert(a.end(), free.begin(), free.end());
    return a;
  };

  opt::SearchSpec search = options.search;
  search.box.assign(n, {-options.coefficient_bound, options.coefficient_bound});
  std::vector<double> seed(n, 0.0);
  seed[1] = options.seed_epsilon;  // a_2

  SphereSearchResult out;
  int count = 0;
  double best = std::numeric_limits<double>::infinity();
  const auto objective = [&](const std::vector<double>& free) {
    const std::vector<double> a = full(free);
    const SphereQuotient::Value v = quotient(a);
    ++count;
    if (count == 1) out.seed_quotient = v.quotient;
    if (v.quotient < best) {
      best = v.quotient;
      out.trace.push_back({count, v.quotient, v.dist_sq, v.deficit, a});
    }
    return v.quotient;
  };
  const opt::BoxResult r = opt::minimize_box(objective, search, {seed});
  out.best_coeffs = full(r.x);
  out.quotient = r.value;
  out.evaluations = r.evaluations;
  out.budget_exhausted = r.budget_exhausted;
  out.success = out.quotient < spectral_gap_sphere() - options.required_gain;
  return out;
}

}  // namespace strichartz::sphere
