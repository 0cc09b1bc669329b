#pragma once

// Orthogonal polynomials and spherical Bessel functions.
//
// Everything here is a pure function in double precision. Domain violations
// throw std::domain_error; no function keeps state.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace strichartz::specfun {

inline constexpr double pi = std::numbers::pi;

namespace detail {

inline void require_parameter_above_minus_one(double value, const char* name) {
  if (!(value > -1.0)) {
    throw std::domain_error(std::string(name) + " must be > -1, got " + std::to_string(value));
  }
}

}  // namespace detail

/// Degree/parameter bundle for Laguerre (alpha) and Jacobi (alpha, beta) evaluations.
struct PolynomialIndex {
  int degree = 0;
  double alpha = 0.0;
  double beta = 0.0;

  void validate() const {
    if (degree < 0) throw std::domain_error("polynomial degree must be nonnegative");
    detail::require_parameter_above_minus_one(alpha, "alpha");
    detail::require_parameter_above_minus_one(beta, "beta");
  }
};

/// Generalized binomial coefficient C(top, k) for integer k >= 0 and real top with
/// top - k > -1. Small k uses the running product, large k the log-gamma form.
inline double binomial(double top, int k) {
  if (k < 0) return 0.0;
  if (k == 0) return 1.0;
  if (!(top - k > -1.0)) {
    throw std::domain_error("binomial: requires top - k > -1");
  }
  if (k <= 60) {
    double value = 1.0;
    for (int i = 1; i <= k; ++i) value *= (top - k + i) / i;
    return value;
  }
  return std::exp(std::lgamma(top + 1.0) - std::lgamma(k + 1.0) - std::lgamma(top - k + 1.0));
}

/// Generalized Laguerre polynomial L_m^alpha(x) by the three-term recurrence
/// (n+1) L_{n+1} = (2n+1+alpha-x) L_n - (n+alpha) L_{n-1}.
inline double laguerre(int m, double alpha, double x) {
  PolynomialIndex{m, alpha, 0.0}.validate();
  double prev = 1.0;
  if (m == 0) return prev;
  double curr = 1.0 + alpha - x;
  for (int n = 1; n < m; ++n) {
    const double next = ((2.0 * n + 1.0 + alpha - x) * curr - (n + alpha) * prev) / (n + 1.0);
    prev = curr;
    curr = next;
  }
  return curr;
}

/// L_m^alpha(0) = C(m + alpha, m).
inline double laguerre_at_zero(int m, double alpha) {
  PolynomialIndex{m, alpha, 0.0}.validate();
  return binomial(m + alpha, m);
}

/// Jacobi polynomial P_m^{(alpha,beta)}(x), seeded with P_0 = 1 and
/// P_1 = (alpha+1) + (alpha+beta+2)(x-1)/2. Valid for any real x, including x > 1.
inline double jacobi(int m, double alpha, double beta, double x) {
  PolynomialIndex{m, alpha, beta}.validate();
  double prev = 1.0;
  if (m == 0) return prev;
  double curr = (alpha + 1.0) + 0.5 * (alpha + beta + 2.0) * (x - 1.0);
  const double ab = alpha + beta;
  for (int n = 2; n <= m; ++n) {
    const double s = 2.0 * n + ab;
    const double lead = 2.0 * n * (n + ab) * (s - 2.0);
    const double mid = (s - 1.0) * (s * (s - 2.0) * x + alpha * alpha - beta * beta);
    const double tail = 2.0 * (n + alpha - 1.0) * (n + beta - 1.0) * s;
    const double next = (mid * curr - tail * prev) / lead;
    prev = curr;
    curr = next;
  }
  return curr;
}

/// Legendre polynomial P_k(c).
inline double legendre(int k, double c) {
  if (k < 0) throw std::domain_error("legendre: degree must be nonnegative");
  double prev = 1.0;
  if (k == 0) return prev;
  double curr = c;
  for (int n = 1; n < k; ++n) {
    const double next = ((2.0 * n + 1.0) * c * curr - n * prev) / (n + 1.0);
    prev = curr;
    curr = next;
  }
  return curr;
}

/// Orthonormal axisymmetric spherical harmonic Y_k^0 as a function of cos(theta).
inline double ylm0(int k, double costheta) {
  if (std::abs(costheta) > 1.0) throw std::domain_error("ylm0: |cos(theta)| must be <= 1");
  return std::sqrt((2.0 * k + 1.0) / (4.0 * pi)) * legendre(k, costheta);
}

/// Y_2^0 = sqrt(5/(16 pi)) (3 c^2 - 1).
inline double y20(double costheta) {
  if (std::abs(costheta) > 1.0) throw std::domain_error("y20: |cos(theta)| must be <= 1");
  return std::sqrt(5.0 / (16.0 * pi)) * (3.0 * costheta * costheta - 1.0);
}

/// sin(r)/r with its Taylor series below 1e-6.
inline double sinc(double r) {
  if (std::abs(r) < 1e-6) return 1.0 - r * r / 6.0;
  return std::sin(r) / r;
}

namespace detail {

inline double spherical_bessel_series(int k, double r) {
  double lead = 1.0;
  for (int i = 1; i <= k; ++i) lead *= r / (2.0 * i + 1.0);
  const double half_r2 = 0.5 * r * r;
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < 500; ++n) {
    term *= -half_r2 / (n * (2.0 * k + 2.0 * n + 1.0));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return lead * sum;
}

inline double spherical_bessel_upward(int k, double r) {
  const double s = std::sin(r);
  const double c = std::cos(r);
  double prev = s / r;
  if (k == 0) return prev;
  double curr = s / (r * r) - c / r;
  if (k == 1) return curr;
  for (int n = 1; n < k; ++n) {
    const double next = (2.0 * n + 1.0) / r * curr - prev;
    prev = curr;
    curr = next;
  }
  return curr;
}

// Miller's algorithm: run the recurrence downward from an index well above k,
// then fix the scale against whichever of j_0, j_1 is larger in magnitude.
inline double spherical_bessel_downward(int k, double r) {
  const int start = k + static_cast<int>(std::ceil(10.0 + r));
  double upper = 0.0;
  double curr = 1e-300;
  double at_k = 0.0;
  double at_one = 0.0;
  for (int n = start; n >= 1; --n) {
    // curr = j_n (unnormalized), upper = j_{n+1}
    if (n == k) at_k = curr;
    if (n == 1) at_one = curr;
    const double lower = (2.0 * n + 1.0) / r * curr - upper;
    upper = curr;
    curr = lower;
    if (std::abs(curr) > 1e250) {
      curr *= 1e-250;
      upper *= 1e-250;
      at_k *= 1e-250;
      at_one *= 1e-250;
    }
  }
  const double at_zero = curr;
  if (k == 0) at_k = at_zero;
  const double j0 = std::sin(r) / r;
  const double j1 = std::sin(r) / (r * r) - std::cos(r) / r;
  if (std::abs(j0) >= std::abs(j1)) return at_k * (j0 / at_zero);
  return at_k * (j1 / at_one);
}

}  // namespace detail

/// Spherical Bessel function j_k(r) for r > 0.
///
/// Branches: ascending series for r < max(1, k/2); closed forms with upward
/// recurrence when k <= r; normalized downward recurrence otherwise.
inline double spherical_bessel(int k, double r) {
  if (k < 0) throw std::domain_error("spherical_bessel: order must be nonnegative");
  if (!(r > 0.0)) throw std::domain_error("spherical_bessel: argument must be positive");
  if (r < std::max(1.0, 0.5 * k)) return detail::spherical_bessel_series(k, r);
  if (k <= r) return detail::spherical_bessel_upward(k, r);
  return detail::spherical_bessel_downward(k, r);
}

/// j_k(r) extended to r = 0 by its limit (1 for k = 0, 0 otherwise).
inline double spherical_bessel_or_limit(int k, double r) {
  if (r == 0.0) return k == 0 ? 1.0 : 0.0;
  return spherical_bessel(k, r);
}

/// Entire cosine integral Cin(z) = int_0^z (1 - cos t)/t dt = gamma + ln z - Ci(z).
/// Power series for z <= 4, otherwise Ci(z) from the continued fraction of E_1(iz).
inline double cosine_integral_cin(double z) {
  if (z < 0.0) return cosine_integral_cin(-z);
  if (z == 0.0) return 0.0;
  if (z <= 4.0) {
    const double z2 = z * z;
    double term = 1.0;  // (-1)^{k+1} z^{2k} / (2k)!
    double sum = 0.0;
    for (int k = 1; k < 100; ++k) {
      term *= (k == 1 ? 1.0 : -1.0) * z2 / ((2.0 * k - 1.0) * (2.0 * k));
      const double add = term / (2.0 * k);
      sum += add;
      if (std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }
  // Lentz evaluation of E_1(iz) = -Ci(z) + i (Si(z) - pi/2).
  constexpr double tiny = 1e-300;
  std::complex<double> b{1.0, z};
  std::complex<double> c = 1.0 / tiny;
  std::complex<double> d = 1.0 / b;
  std::complex<double> h = d;
  for (int i = 2; i < 1000; ++i) {
    const double a = -static_cast<double>((i - 1) * (i - 1));
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const std::complex<double> del = c * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < 1e-16) break;
  }
  h *= std::complex<double>{std::cos(z), -std::sin(z)};
  const double ci = -h.real();
  return std::numbers::egamma + std::log(z) - ci;
}

}  // namespace strichartz::specfun
