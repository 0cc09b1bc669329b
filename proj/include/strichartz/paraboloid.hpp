#pragma once

// Paraboloid quantities: the spectral-gap coefficients c_d(m) and constants,
// the two-peak constant, and deficit / distance evaluation for centered
// Gaussian superpositions.
//
// Conventions: G(x) = e^{-pi |x|^2}, G_lambda(x) = lambda^{d/2} G(lambda x),
// q = 2 + 4/d, e^{it Delta} G_lambda has the closed form used by
// propagate_gaussian below.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "strichartz/optimize.hpp"
#include "strichartz/quad.hpp"
#include "strichartz/specfun.hpp"

namespace strichartz::paraboloid {

inline constexpr double pi = std::numbers::pi;
using cplx = std::complex<double>;

struct Dim {
  int d = 1;

  void validate() const {
    if (d < 1) throw std::domain_error("Dim: d must be >= 1, got " + std::to_string(d));
  }
  double q() const { return 2.0 + 4.0 / d; }
  double half() const { return 0.5 * d; }
  bool sharp_constant_known() const { return d == 1 || d == 2; }
  /// Sharp Strichartz constant S_d, known for d = 1, 2 only.
  double sharp_constant() const {
    if (d == 1) return std::pow(12.0, -1.0 / 12.0);
    if (d == 2) return std::pow(2.0, -0.5);
    throw std::domain_error("sharp constant S_d is only known for d = 1, 2");
  }
};

struct GaussianTerm {
  double amplitude = 1.0;
  double scale = 1.0;
};

/// f(x) = sum_i a_i lambda_i^{d/2} e^{-pi lambda_i^2 |x|^2}.
struct GaussianSuperposition {
  std::vector<GaussianTerm> terms;

  void validate() const {
    if (terms.empty()) throw std::invalid_argument("GaussianSuperposition: needs at least one term");
    for (const GaussianTerm& t : terms) {
      if (!(t.scale > 0.0) || !std::isfinite(t.scale)) {
        throw std::invalid_argument("GaussianSuperposition: scales must be positive and finite");
      }
      if (!std::isfinite(t.amplitude)) throw std::invalid_argument("GaussianSuperposition: non-finite amplitude");
    }
  }

  /// f_lambda = G + G_lambda.
  static GaussianSuperposition two_peak(double lambda) { return {{{1.0, 1.0}, {1.0, lambda}}}; }
};

/// Coefficients of f = sum_m a(m) L_m^{d/2-1}(2 pi |x|^2) e^{-pi |x|^2}.
struct RadialHermiteCoeffs {
  std::vector<cplx> a;
};

enum class Provenance { closed_form, quadrature, optimization };

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::closed_form: return "closed_form";
    case Provenance::quadrature: return "quadrature";
    case Provenance::optimization: return "optimization";
  }
  return "unknown";
}

struct ConstantRecord {
  std::string name;
  std::string exact_expression;
  double value = 0.0;
  Provenance provenance = Provenance::closed_form;
  double error_estimate = 0.0;
};

// ---------------------------------------------------------------------------
// c_d(m)

inline double cdm_sum(const Dim& dim, int m) {
  dim.validate();
  if (m < 0) throw std::domain_error("cdm_sum: m must be >= 0");
  const double q = dim.q();
  const double s = 1.0 - 2.0 / q;  // 2/(d+2)
  const double t = 2.0 / q;        // d/(d+2)
  double sum = 0.0;
  for (int j = 0; j <= m; ++j) {
    sum += specfun::binomial(m + dim.half() - 1.0, m - j) * specfun::binomial(m, j) *
           std::pow(s, 2 * (m - j)) * std::pow(t, 2 * j);
  }
  return 0.5 * q * sum;
}

/// c_d(2) in closed form.
inline double cdm_closed2(const Dim& dim) {
  dim.validate();
  const double d = dim.d;
  return (d * d * d + 4.0 * d * d + 10.0 * d + 4.0) / std::pow(d + 2.0, 3);
}

/// c_2(m) = 2 binom(2m, m) / 4^m.
inline double cdm_central_binomial(int m) {
  if (m < 0) throw std::domain_error("cdm_central_binomial: m must be >= 0");
  double ratio = 1.0;  // binom(2m, m) / 4^m
  for (int i = 1; i <= m; ++i) ratio *= (2.0 * i - 1.0) / (2.0 * i);
  return 2.0 * ratio;
}

namespace detail {

inline void require_jacobi_dim(const Dim& dim, const char* what) {
  dim.validate();
  if (dim.d <= 2) throw std::domain_error(std::string(what) + ": requires d >= 3");
}

inline double jacobi_x(const Dim& dim) {
  const double d = dim.d;
  return (d * d + 4.0) / (d * d - 4.0);
}

inline double jacobi_y(const Dim& dim) {
  const double d = dim.d;
  return (d - 2.0) / (d + 2.0);
}

}  // namespace detail

/// c_d(m) = (1 + 2/d) y^m P_m^{(0, d/2-1)}(x), y = (d-2)/(d+2), x = (d^2+4)/(d^2-4).
inline double cdm_jacobi(const Dim& dim, int m) {
  detail::require_jacobi_dim(dim, "cdm_jacobi");
  if (m < 0) throw std::domain_error("cdm_jacobi: m must be >= 0");
  return (1.0 + 2.0 / dim.d) * std::pow(detail::jacobi_y(dim), m) *
         specfun::jacobi(m, 0.0, dim.half() - 1.0, detail::jacobi_x(dim));
}

/// c_1(m) from its trigonometric integral:
/// (3 / 2pi) int_0^pi [((2cos t + 1)/3)^{2m} + ((2cos t - 1)/3)^{2m}] dt.
inline quad::QuadResult c1m_integral(int m, const quad::QuadratureSpec& spec = {}) {
  if (m < 0) throw std::domain_error("c1m_integral: m must be >= 0");
  const auto f = [m](double t) {
    const double c = std::cos(t);
    return std::pow((2.0 * c + 1.0) / 3.0, 2 * m) + std::pow((2.0 * c - 1.0) / 3.0, 2 * m);
  };
  quad::QuadratureSpec local = spec;
  local.abs_tol = spec.abs_tol * 2.0 * pi / 3.0;
  quad::QuadResult r = quad::integrate_finite(f, 0.0, pi, local);
  r.value *= 3.0 / (2.0 * pi);
  r.error *= 3.0 / (2.0 * pi);
  return r;
}

/// r_m = P_{m+1}/P_m for the Jacobi pair (0, d/2-1) at x = (d^2+4)/(d^2-4), by the
/// forward recurrence from r_0 = d/(d-2). A near-zero r_{m-1} switches to the
/// direct quotient.
inline double jacobi_ratio_rm(const Dim& dim, int m) {
  detail::require_jacobi_dim(dim, "jacobi_ratio_rm");
  if (m < 0) throw std::domain_error("jacobi_ratio_rm: m must be >= 0");
  const double alpha = 0.0;
  const double beta = dim.half() - 1.0;
  const double x = detail::jacobi_x(dim);
  const double ab = alpha + beta;
  double r = 1.0 / detail::jacobi_y(dim) - 2.0 / (dim.d - 2.0);
  for (int n = 1; n <= m; ++n) {
    // P_{n+1} = ((a x + b) P_n - c P_{n-1}) / lead, written for degree N = n + 1.
    const double big_n = n + 1.0;
    const double s = 2.0 * big_n + ab;
    const double lead = 2.0 * big_n * (big_n + ab) * (s - 2.0);
    const double a = (s - 1.0) * s * (s - 2.0) / lead;
    const double b = (s - 1.0) * (alpha * alpha - beta * beta) / lead;
    const double c = 2.0 * (big_n + alpha - 1.0) * (big_n + beta - 1.0) * s / lead;
    if (std::abs(r) < 1e-8) {
      r = specfun::jacobi(n + 1, alpha, beta, x) / specfun::jacobi(n, alpha, beta, x);
      continue;
    }
    r = a * x + b - c / r;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Constants

inline ConstantRecord spectral_gap_paraboloid(const Dim& dim) {
  dim.validate();
  const double d = dim.d;
  const double value = (d * d + d + 2.0) / std::pow(d + 2.0, 3) * std::pow(2.0, 2.0 / (d + 2.0)) *
                       std::pow(d / (d + 2.0), d * d / (2.0 * d + 4.0));
  return {"C_SG(d=" + std::to_string(dim.d) + ")",
          "(d^2+d+2)/(d+2)^3 * 2^(2/(d+2)) * (d/(d+2))^(d^2/(2d+4))", value, Provenance::closed_form, 0.0};
}

inline ConstantRecord two_peak_paraboloid(const Dim& dim) {
  dim.validate();
  const double d = dim.d;
  const double value = (std::pow(2.0, 2.0 / (d + 2.0)) - 1.0) * std::pow(d / (d + 2.0), d * d / (2.0 * d + 4.0));
  return {"C_TP(d=" + std::to_string(dim.d) + ")", "(2^(2/(d+2)) - 1) * (d/(d+2))^(d^2/(2d+4))", value,
          Provenance::closed_form, 0.0};
}

struct VanishingCheck {
  bool holds = false;
  double lhs = 0.0;     // 1 - 2^{-2/(d+2)}
  double rhs = 0.0;     // (d^2+d+2)/(d+2)^3
  double margin = 0.0;  // lhs - rhs
};

/// The polynomial inequality equivalent to C_SG(d) < C_TP(d).
inline VanishingCheck check_tp_vanishing(const Dim& dim) {
  dim.validate();
  const double d = dim.d;
  VanishingCheck out;
  out.lhs = 1.0 - std::pow(2.0, -2.0 / (d + 2.0));
  out.rhs = (d * d + d + 2.0) / std::pow(d + 2.0, 3);
  out.margin = out.lhs - out.rhs;
  out.holds = out.margin > 0.0;
  return out;
}

struct HessianForm {
  double hessian_value = 0.0;
  double norm_sq = 0.0;
  double quotient = 0.0;  // hessian_value / (2 norm_sq)
};

/// Second variation of the deficit at G in the radial Laguerre-Gaussian basis.
inline HessianForm deficit_hessian_paraboloid(const Dim& dim, const RadialHermiteCoeffs& f) {
  dim.validate();
  for (std::size_t m = 0; m < std::min<std::size_t>(2, f.a.size()); ++m) {
    if (f.a[m] != cplx{}) {
      throw std::invalid_argument("deficit_hessian_paraboloid: a(0) and a(1) must vanish");
    }
  }
  const double d = dim.d;
  const double alpha = dim.half() - 1.0;
  const double prefactor = std::pow(2.0, (2.0 - d) / (2.0 + d)) * std::pow(dim.q(), -d * d / (2.0 * d + 4.0));
  HessianForm out;
  for (std::size_t m = 2; m < f.a.size(); ++m) {
    const double weight = std::norm(f.a[m]) * specfun::laguerre_at_zero(static_cast<int>(m), alpha);
    out.hessian_value += (1.0 - cdm_sum(dim, static_cast<int>(m))) * weight;
    out.norm_sq += weight;
  }
  out.hessian_value *= prefactor;
  out.norm_sq *= std::pow(2.0, -dim.half());
  if (!(out.norm_sq > 0.0)) throw std::invalid_argument("deficit_hessian_paraboloid: zero function");
  out.quotient = out.hessian_value / (2.0 * out.norm_sq);
  return out;
}

// ---------------------------------------------------------------------------
// Two-peak family f_lambda = G + G_lambda

/// <G_lambda, G_mu> = (lambda mu / (lambda^2 + mu^2))^{d/2}.
inline double gaussian_overlap(const Dim& dim, double lambda, double mu) {
  return std::pow(lambda * mu / (lambda * lambda + mu * mu), dim.half());
}

inline double overlap_H(const Dim& dim, double lambda, double mu) {
  dim.validate();
  if (!(lambda > 0.0) || !(mu > 0.0)) throw std::domain_error("overlap_H: lambda and mu must be > 0");
  return gaussian_overlap(dim, 1.0, mu) + gaussian_overlap(dim, lambda, mu);
}

struct OptimalMu {
  double mu_star = 0.0;
  double h_value = 0.0;
  double lo = 0.0;  // search interval
  double hi = 0.0;
};

inline opt::SearchSpec default_scalar_search() {
  opt::SearchSpec s;
  s.grid_per_axis = 401;
  s.multistart_count = 3;
  s.x_tol = 1e-13;
  s.max_iters = 200;
  return s;
}

/// Maximizer of H_lambda over [sqrt(lambda), 1], where it is known to lie.
inline OptimalMu optimal_mu(const Dim& dim, double lambda, const opt::SearchSpec& search = default_scalar_search()) {
  dim.validate();
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::domain_error("optimal_mu: lambda must lie in (0, 1)");
  OptimalMu out;
  out.lo = std::sqrt(lambda);
  out.hi = 1.0;
  const opt::ScalarResult r =
      opt::maximize_scalar([&](double mu) { return overlap_H(dim, lambda, mu); }, out.lo, out.hi, search);
  out.mu_star = r.argmax;
  out.h_value = r.value;
  return out;
}

/// ||f||_2^2 for a superposition.
inline double norm_sq(const Dim& dim, const GaussianSuperposition& f) {
  dim.validate();
  f.validate();
  double s = 0.0;
  for (const GaussianTerm& a : f.terms) {
    for (const GaussianTerm& b : f.terms) s += a.amplitude * b.amplitude * gaussian_overlap(dim, a.scale, b.scale);
  }
  return s;
}

inline double two_peak_norm_sq(const Dim& dim, double lambda) {
  dim.validate();
  if (!(lambda > 0.0)) throw std::domain_error("two_peak_norm_sq: lambda must be > 0");
  return std::pow(2.0, 1.0 - dim.half()) + 2.0 * std::pow(lambda, dim.half()) * std::pow(1.0 + lambda * lambda, -dim.half());
}

/// ||e^{it Delta} G_lambda||_q^q, independent of lambda.
inline double qnorm_gaussian(const Dim& dim) {
  dim.validate();
  return 1.0 / (4.0 * std::pow(dim.q(), dim.half()));
}

/// e^{it Delta} G_lambda (x) = lambda^{d/2} (1 + 4 pi i t lambda^2)^{-d/2} exp(-pi lambda^2 |x|^2 / (1 + 4 pi i t lambda^2)).
inline cplx propagate_gaussian(const Dim& dim, double lambda, double t, double radius) {
  const cplx w{1.0, 4.0 * pi * t * lambda * lambda};
  return std::pow(lambda, dim.half()) * std::pow(w, -dim.half()) * std::exp(-pi * lambda * lambda * radius * radius / w);
}

struct QNorm {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

/// ||e^{it Delta} f||_q^q for d in {1, 2}, where q/2 is an integer. |u|^q expands
/// into a (q/2 + q/2)-fold sum of Gaussian products; each space integral is
/// S^{-d/2} with S the sum of the (conjugated) complex widths, leaving one
/// time integral, which is even in t.
inline QNorm qnorm_superposition(const Dim& dim, const GaussianSuperposition& f,
                                 const quad::QuadratureSpec& spec = {}) {
  dim.validate();
  f.validate();
  if (dim.d != 1 && dim.d != 2) throw std::domain_error("qnorm_superposition: requires d = 1 or 2");
  const int half_q = dim.d == 1 ? 3 : 2;
  const std::size_t n = f.terms.size();
  const double h = dim.half();

  std::vector<cplx> coeff(n);
  std::vector<cplx> width(n);
  const auto integrand = [&](double t) {
    for (std::size_t i = 0; i < n; ++i) {
      const double l2 = f.terms[i].scale * f.terms[i].scale;
      const cplx w{1.0, 4.0 * pi * t * l2};
      coeff[i] = f.terms[i].amplitude * std::pow(f.terms[i].scale, h) * std::pow(w, -h);
      width[i] = l2 / w;
    }
    // Iterate over index tuples (i_1..i_{q/2}; k_1..k_{q/2}) as a mixed-radix counter.
    std::vector<std::size_t> idx(2 * half_q, 0);
    double total = 0.0;
    while (true) {
      cplx c{1.0, 0.0};
      cplx s{0.0, 0.0};
      for (int j = 0; j < half_q; ++j) {
        c *= coeff[idx[j]] * std::conj(coeff[idx[half_q + j]]);
        s += width[idx[j]] + std::conj(width[idx[half_q + j]]);
      }
      total += (c * std::pow(s, -h)).real();
      int pos = 0;
      while (pos < 2 * half_q && ++idx[pos] == n) idx[pos++] = 0;
      if (pos == 2 * half_q) break;
    }
    return 2.0 * total;
  };

  std::vector<double> scales;
  for (const GaussianTerm& term : f.terms) scales.push_back(1.0 / (4.0 * pi * term.scale * term.scale));
  const quad::QuadResult r =
      quad::require_converged(quad::integrate_semi_infinite_smooth(integrand, scales, spec), "qnorm_superposition");
  return {r.value, r.error, r.evaluations};
}

/// The d = 2 instance (q = 4).
inline QNorm qnorm_superposition_d2(const GaussianSuperposition& f, const quad::QuadratureSpec& spec = {}) {
  return qnorm_superposition(Dim{2}, f, spec);
}

struct GaussianDistance {
  double dist_sq = 0.0;
  double mu_star = 0.0;
  double m_value = 0.0;
  double norm_sq = 0.0;
  double log_mu_lo = 0.0;  // search box in log(mu)
  double log_mu_hi = 0.0;
};

/// dist(f, Gaussians)^2 = ||f||^2 - m(f), m(f) = 2^{d/2} sup_mu (sum_i a_i <G_{lambda_i}, G_mu>)^2.
/// The supremum over mu > 0 is searched in log(mu) over the scale range of f
/// widened by e^3 on each side; for an equal-amplitude pair the symmetry
/// mu -> lambda_1 lambda_2 / mu halves the interval.
inline GaussianDistance dist_to_gaussians(const Dim& dim, const GaussianSuperposition& f,
                                          const opt::SearchSpec& search = default_scalar_search()) {
  dim.validate();
  f.validate();
  for (const GaussianTerm& t : f.terms) {
    if (!(t.amplitude > 0.0)) throw std::domain_error("dist_to_gaussians: amplitudes must be positive");
  }
  double lo = f.terms.front().scale;
  double hi = lo;
  for (const GaussianTerm& t : f.terms) {
    lo = std::min(lo, t.scale);
    hi = std::max(hi, t.scale);
  }
  GaussianDistance out;
  out.log_mu_lo = std::log(lo) - 3.0;
  out.log_mu_hi = std::log(hi) + 3.0;
  const bool symmetric_pair = f.terms.size() == 2 && f.terms[0].amplitude == f.terms[1].amplitude && lo < hi;
  if (symmetric_pair) out.log_mu_lo = 0.5 * (std::log(lo) + std::log(hi));

  const auto projection = [&](double log_mu) {
    const double mu = std::exp(log_mu);
    double s = 0.0;
    for (const GaussianTerm& t : f.terms) s += t.amplitude * gaussian_overlap(dim, t.scale, mu);
    return s * s;
  };
  const opt::ScalarResult r = opt::maximize_scalar(projection, out.log_mu_lo, out.log_mu_hi, search);
  out.mu_star = std::exp(r.argmax);
  out.m_value = std::pow(2.0, dim.half()) * r.value;
  out.norm_sq = norm_sq(dim, f);
  out.dist_sq = out.norm_sq - out.m_value;
  return out;
}

struct Deficit {
  double value = 0.0;
  double norm_sq = 0.0;
  double qnorm_q = 0.0;  // ||e^{it Delta} f||_q^q
  double error = 0.0;
};

/// delta(f) = S_d^2 ||f||^2 - ||e^{it Delta} f||_q^2, d in {1, 2}.
inline Deficit deficit(const Dim& dim, const GaussianSuperposition& f, const quad::QuadratureSpec& spec = {}) {
  const double s = dim.sharp_constant();
  Deficit out;
  out.norm_sq = norm_sq(dim, f);
  const QNorm qn = qnorm_superposition(dim, f, spec);
  out.qnorm_q = qn.value;
  const double exponent = 2.0 / dim.q();
  const double qnorm_sq = std::pow(qn.value, exponent);
  out.value = s * s * out.norm_sq - qnorm_sq;
  out.error = exponent * qnorm_sq / qn.value * qn.error;
  return out;
}

/// Raised when a Rayleigh quotient is requested at a point of the maximizer manifold.
class OnManifold : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct TwoPeakPoint {
  double lambda = 0.0;
  double norm_sq = 0.0;
  double qnorm_q = 0.0;
  double deficit = 0.0;
  double dist_sq = 0.0;
  double mu_star = 0.0;
  double quotient = 0.0;
  double error_estimate = 0.0;
};

/// delta(f_lambda) / dist(f_lambda, Gaussians)^2 for d in {1, 2}.
inline TwoPeakPoint two_peak_quotient_paraboloid(const Dim& dim, double lambda, const quad::QuadratureSpec& spec = {}) {
  dim.validate();
  if (!dim.sharp_constant_known()) throw std::domain_error("two_peak_quotient_paraboloid: requires d = 1 or 2");
  if (!(lambda > 0.0)) throw std::domain_error("two_peak_quotient_paraboloid: lambda must be > 0");
  const GaussianSuperposition f = GaussianSuperposition::two_peak(lambda);
  TwoPeakPoint out;
  out.lambda = lambda;
  const GaussianDistance dist = dist_to_gaussians(dim, f);
  out.dist_sq = dist.dist_sq;
  out.mu_star = dist.mu_star;
  if (!(out.dist_sq > 1e-12 * dist.norm_sq)) {
    throw OnManifold("two_peak_quotient_paraboloid: f_lambda lies on the Gaussian manifold (lambda = " +
                     std::to_string(lambda) + ")");
  }
  const Deficit def = deficit(dim, f, spec);
  out.norm_sq = def.norm_sq;
  out.qnorm_q = def.qnorm_q;
  out.deficit = def.value;
  out.quotient = def.value / out.dist_sq;
  out.error_estimate = def.error / out.dist_sq;
  return out;
}

}  // namespace strichartz::paraboloid
