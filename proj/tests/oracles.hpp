#pragma once

// Reference computations for the tests. Nothing here calls into the library:
// special functions come from the C++17 special math functions or explicit
// sums, integrals from Boost.Math quadrature.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/minima.hpp>

namespace oracle {

inline constexpr double pi = std::numbers::pi;
using cplx = std::complex<double>;

/// binom(top, k) through the gamma function, in long double.
inline long double binomial_gamma_ld(long double top, int k) {
  if (k < 0) return 0.0L;
  return std::tgamma(top + 1.0L) / (std::tgamma(k + 1.0L) * std::tgamma(top - k + 1.0L));
}

inline double binomial_gamma(double top, int k) { return static_cast<double>(binomial_gamma_ld(top, k)); }

/// L_m^alpha(x) = sum_j (-1)^j binom(m + alpha, m - j) x^j / j!.
inline double laguerre_explicit(int m, double alpha, double x) {
  double s = 0.0;
  for (int j = 0; j <= m; ++j) {
    s += (j % 2 ? -1.0 : 1.0) * binomial_gamma(m + alpha, m - j) * std::pow(x, j) / std::tgamma(j + 1.0);
  }
  return s;
}

/// P_m^{(a,b)}(x) = sum_s binom(m+a, m-s) binom(m+b, s) ((x-1)/2)^s ((x+1)/2)^{m-s}.
/// Summed in long double: the terms alternate in sign for |x| < 1.
inline double jacobi_explicit(int m, double a, double b, double x) {
  long double s = 0.0L;
  const long double lo = 0.5L * (static_cast<long double>(x) - 1.0L);
  const long double hi = 0.5L * (static_cast<long double>(x) + 1.0L);
  for (int j = 0; j <= m; ++j) {
    s += binomial_gamma_ld(m + static_cast<long double>(a), m - j) * binomial_gamma_ld(m + static_cast<long double>(b), j) *
         std::pow(lo, j) * std::pow(hi, m - j);
  }
  return static_cast<double>(s);
}

/// Y_k^0 from the standard library Legendre polynomial.
inline double ylm0(int k, double c) {
  return std::sqrt((2.0 * k + 1.0) / (4.0 * pi)) * std::legendre(static_cast<unsigned>(k), c);
}

inline double sph_bessel(int k, double r) {
  if (r == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::sph_bessel(static_cast<unsigned>(k), r);
}

inline double finite(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

inline double half_line(const std::function<double(double)>& f) {
  boost::math::quadrature::exp_sinh<double> rule;
  return rule.integrate(f, 1e-12);
}

/// Cin(z) = int_0^z (1 - cos t)/t dt.
inline double cin(double z) {
  return finite([](double t) { return t < 1e-8 ? 0.5 * t : (1.0 - std::cos(t)) / t; }, 0.0, z);
}

// ---------------------------------------------------------------------------
// Paraboloid

/// e^{it Delta} of lambda^{d/2} exp(-pi lambda^2 |x|^2), written out independently.
inline cplx schrodinger_gaussian(int d, double lambda, double t, double r) {
  const cplx w{1.0, 4.0 * pi * t * lambda * lambda};
  return std::pow(cplx{lambda, 0.0}, 0.5 * d) / std::pow(w, 0.5 * d) * std::exp(-pi * lambda * lambda * r * r / w);
}

struct Term {
  double amplitude;
  double scale;
};

/// ||e^{it Delta} f||_{L^q(R x R^d)}^q by nested quadrature in (t, |x|), d in {1, 2}.
inline double spacetime_qnorm(int d, const std::vector<Term>& f) {
  const double q = 2.0 + 4.0 / d;
  const auto u = [&](double t, double r) {
    cplx s{0.0, 0.0};
    for (const Term& term : f) s += term.amplitude * schrodinger_gaussian(d, term.scale, t, r);
    return s;
  };
  const auto space = [&](double t) {
    const auto g = [&](double r) {
      const double m = std::pow(std::abs(u(t, r)), q);
      return d == 1 ? 2.0 * m : 2.0 * pi * r * m;
    };
    return half_line(g);
  };
  // |u(-t)| = |u(t)| for real initial data.
  return 2.0 * half_line(space);
}

/// argmax of H(mu) = <G_1, G_mu> + <G_lambda, G_mu> on [lo, hi] by Brent's method.
inline double optimal_mu_brent(int d, double lambda, double lo, double hi) {
  const auto overlap = [d](double a, double b) { return std::pow(a * b / (a * a + b * b), 0.5 * d); };
  const auto neg = [&](double mu) { return -(overlap(1.0, mu) + overlap(lambda, mu)); };
  return boost::math::tools::brent_find_minima(neg, lo, hi, 50).first;
}

/// <G_a, G_b> by radial quadrature in dimension d.
inline double overlap_quadrature(int d, double a, double b) {
  const double area = 2.0 * std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d);
  const auto g = [&](double r) {
    const double e = std::exp(-pi * (a * a + b * b) * r * r);
    return e == 0.0 ? 0.0 : area * std::pow(r, d - 1) * std::pow(a * b, 0.5 * d) * e;
  };
  return half_line(g);
}

/// Dense scan of 2^{d/2} sup_mu (sum_i a_i <G_{l_i}, G_mu>)^2 over log mu in [lo, hi].
inline double m_gaussian_scan(int d, const std::vector<Term>& f, double lo, double hi, int n) {
  double best = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double mu = std::exp(lo + (hi - lo) * i / n);
    double s = 0.0;
    for (const Term& t : f) s += t.amplitude * std::pow(t.scale * mu / (t.scale * t.scale + mu * mu), 0.5 * d);
    best = std::max(best, s * s);
  }
  return std::pow(2.0, 0.5 * d) * best;
}

// ---------------------------------------------------------------------------
// Sphere

/// int_{S^2} f(theta) e^{-i x.theta} dsigma for axisymmetric f = sum a_k Y_k^0 and
/// x = r (sin alpha, 0, cos alpha): Gauss-Legendre in cos(theta), trapezoid in phi.
inline cplx extension_direct(const std::vector<double>& a, double r, double alpha) {
  const auto& nodes = boost::math::quadrature::gauss<double, 60>::abscissa();
  const auto& weights = boost::math::quadrature::gauss<double, 60>::weights();
  const int nphi = 128;
  cplx total{0.0, 0.0};
  const auto at = [&](double c, double w) {
    double f = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) f += a[k] * ylm0(static_cast<int>(k), c);
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    cplx inner{0.0, 0.0};
    for (int j = 0; j < nphi; ++j) {
      const double phi = 2.0 * pi * j / nphi;
      const double dot = r * (std::sin(alpha) * s * std::cos(phi) + std::cos(alpha) * c);
      inner += std::exp(cplx{0.0, -dot});
    }
    total += w * f * inner * (2.0 * pi / nphi);
  };
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    at(nodes[i], weights[i]);
    if (nodes[i] != 0.0) at(-nodes[i], weights[i]);
  }
  return total;
}

/// Dense scan of (1/4pi) (Re (f sigma)^(x))^2 over |x| in [0, rmax], angle in [0, pi].
inline double m_constant_scan(const std::vector<double>& a, double rmax, int nr, int nangle) {
  double best = 0.0;
  for (int i = 0; i <= nr; ++i) {
    const double r = rmax * i / nr;
    for (int j = 0; j <= nangle; ++j) {
      const double c = std::cos(pi * j / nangle);
      double re = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) {
        // (-i)^k is real for even k; odd k contribute only to the imaginary part.
        if (k % 2) continue;
        const double sign = (k / 2) % 2 ? -1.0 : 1.0;
        re += a[k] * sign * 4.0 * pi * sph_bessel(static_cast<int>(k), r) * ylm0(static_cast<int>(k), c);
      }
      best = std::max(best, re * re / (4.0 * pi));
    }
  }
  return best;
}

}  // namespace oracle
