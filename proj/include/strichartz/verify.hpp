#pragma once

// Invariant suites run by `strichartz-stab verify`. Each check reports the
// measured residual against its tolerance; a suite passes when every check does.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "strichartz/paraboloid.hpp"
#include "strichartz/quad.hpp"
#include "strichartz/report.hpp"
#include "strichartz/specfun.hpp"
#include "strichartz/sphere.hpp"

namespace strichartz::verify {

struct Check {
  std::string suite;
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string note;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"specfun", "quadrature", "paraboloid", "sphere"};
  return names;
}

namespace detail {

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

/// Residual-below-tolerance check.
inline Check within(const std::string& suite, const std::string& name, double residual, double tol,
                    std::string note = {}) {
  return {suite, name, residual, tol, residual <= tol, std::move(note)};
}

/// A strict inequality lhs < rhs, reported with the (nonpositive) residual lhs - rhs.
inline Check below(const std::string& suite, const std::string& name, double worst_gap, std::string note = {}) {
  return {suite, name, worst_gap, 0.0, worst_gap < 0.0, std::move(note)};
}

/// P_m^{(a,b)}(x) = 2^{-m} sum_j C(m+a, j) C(m+b, m-j) (x-1)^{m-j} (x+1)^j.
inline double jacobi_explicit(int m, double a, double b, double x) {
  double s = 0.0;
  for (int j = 0; j <= m; ++j) {
    s += specfun::binomial(m + a, j) * specfun::binomial(m + b, m - j) * std::pow(x - 1.0, m - j) * std::pow(x + 1.0, j);
  }
  return s * std::pow(2.0, -m);
}

/// int_{S^2} g(cos theta) dsigma for a polynomial g of degree < 2n.
inline double sphere_integral(const std::function<double(double)>& g, int n = 12) {
  const quad::GaussRule rule = quad::gauss_legendre(n);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * g(rule.nodes[i]);
  return 2.0 * specfun::pi * s;
}

}  // namespace detail

inline std::vector<Check> specfun_suite() {
  const std::string s = "specfun";
  std::vector<Check> out;
  double worst = 0.0;
  for (int m = 0; m <= 30; ++m) {
    for (double a : {-0.5, 0.0, 0.5, 1.0, 1.5}) {
      worst = std::max(worst, detail::rel_diff(specfun::laguerre(m, a, 0.0), specfun::laguerre_at_zero(m, a)));
    }
  }
  out.push_back(detail::within(s, "laguerre(m, a, 0) = binom(m+a, m), m <= 30", worst, 1e-12));

  worst = 0.0;
  for (int d = 3; d <= 10; ++d) {
    const double beta = 0.5 * d - 1.0;
    const double x0 = (d * d + 4.0) / (d * d - 4.0);
    for (int m = 0; m <= 20; ++m) {
      for (double x : {1.05, x0}) {
        worst = std::max(worst, detail::rel_diff(specfun::jacobi(m, 0.0, beta, x), detail::jacobi_explicit(m, 0.0, beta, x)));
      }
    }
  }
  out.push_back(detail::within(s, "jacobi recurrence = explicit sum, m <= 20, d = 3..10", worst, 1e-10));

  worst = 0.0;
  for (int i = 0; i <= 120; ++i) {
    const double r = std::pow(10.0, -4.0 + 6.0 * i / 120.0);
    for (int k = 1; k < 12; ++k) {
      const double lhs = specfun::spherical_bessel(k + 1, r);
      const double rhs = (2.0 * k + 1.0) / r * specfun::spherical_bessel(k, r) - specfun::spherical_bessel(k - 1, r);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  out.push_back(detail::within(s, "j_{k+1} = (2k+1)/r j_k - j_{k-1}, k <= 12, r in [1e-4, 100]", worst, 1e-9));

  out.push_back(detail::within(s, "j_2(1) = 2 sin 1 - 3 cos 1",
                               std::abs(specfun::spherical_bessel(2, 1.0) - (2.0 * std::sin(1.0) - 3.0 * std::cos(1.0))),
                               1e-14));
  const auto y2 = [](double c) { return specfun::y20(c); };
  out.push_back(detail::within(s, "int (Y_2^0)^2 dsigma = 1",
                               std::abs(detail::sphere_integral([&](double c) { return y2(c) * y2(c); }) - 1.0), 1e-10));
  out.push_back(detail::within(s, "int Y_2^0 dsigma = 0", std::abs(detail::sphere_integral(y2)), 1e-10));
  out.push_back(detail::within(
      s, "int (Y_2^0)^3 dsigma = sqrt5/(7 sqrt pi)",
      std::abs(detail::sphere_integral([&](double c) { return y2(c) * y2(c) * y2(c); }) -
               std::sqrt(5.0) / (7.0 * std::sqrt(specfun::pi))),
      1e-12));
  return out;
}

inline std::vector<Check> quadrature_suite(const quad::QuadratureSpec& spec = {}) {
  const std::string s = "quadrature";
  const double pi = quad::pi;
  std::vector<Check> out;
  const auto j2 = [](double r) { return specfun::spherical_bessel_or_limit(2, r); };
  const auto sin4 = [](double r) {
    const double v = specfun::sinc(r);
    return v * v * std::sin(r) * std::sin(r);
  };
  const auto sin2j22 = [&](double r) { return std::sin(r) * std::sin(r) * j2(r) * j2(r); };
  const auto rsinj23 = [&](double r) { return r * std::sin(r) * j2(r) * j2(r) * j2(r); };

  struct Case {
    const char* name;
    std::function<double(double)> f;
    double exact;
  };
  const std::vector<Case> cases{{"int sin^4 r / r^2 = pi/4", sin4, pi / 4.0},
                                {"int sin^2 r j_2^2 = pi/20", sin2j22, pi / 20.0},
                                {"int r sin r j_2^3 = -pi/28", rsinj23, -pi / 28.0}};
  for (const Case& c : cases) {
    const quad::QuadResult r = quad::integrate_semi_infinite_oscillatory(c.f, spec);
    out.push_back(detail::within(s, c.name, std::abs(r.value - c.exact), 1e-8,
                                 "estimate " + report::format_double(r.error) + (r.converged ? "" : ", not converged")));
    quad::QuadratureSpec shifted = spec;
    shifted.panel_offset = 0.5 * pi;
    const quad::QuadResult r2 = quad::integrate_semi_infinite_oscillatory(c.f, shifted);
    out.push_back(detail::within(s, std::string(c.name) + ": panel grid shifted by pi/2", std::abs(r2.value - r.value),
                                 std::max(r.error + r2.error, 1e-12)));
  }

  const quad::QuadResult i0 = sphere::quartic_norm(sphere::AxisymCoeffs::one(), spec);
  out.push_back(detail::within(s, "||sigma^||_4^4 = 256 pi^6 (relative)",
                               std::abs(i0.value / sphere::quartic_constant() - 1.0), 1e-6));
  return out;
}

inline std::vector<Check> paraboloid_suite(const quad::QuadratureSpec& spec = {}) {
  using namespace paraboloid;
  const std::string s = "paraboloid";
  std::vector<Check> out;

  double worst_jacobi = 0.0;
  double worst_central = 0.0;
  double worst_trig = 0.0;
  for (int m = 0; m <= 30; ++m) {
    for (int d = 3; d <= 10; ++d) worst_jacobi = std::max(worst_jacobi, detail::rel_diff(cdm_jacobi({d}, m), cdm_sum({d}, m)));
    worst_central = std::max(worst_central, detail::rel_diff(cdm_central_binomial(m), cdm_sum({2}, m)));
    worst_trig = std::max(worst_trig, detail::rel_diff(c1m_integral(m, spec).value, cdm_sum({1}, m)));
  }
  out.push_back(detail::within(s, "c_d(m): binomial sum = Jacobi route, d = 3..10, m <= 30", worst_jacobi, 1e-10));
  out.push_back(detail::within(s, "c_2(m): binomial sum = 2 binom(2m,m)/4^m, m <= 30", worst_central, 1e-10));
  out.push_back(detail::within(s, "c_1(m): binomial sum = trigonometric integral, m <= 30", worst_trig, 1e-10));

  double worst = 0.0;
  for (int d = 1; d <= 20; ++d) worst = std::max(worst, std::abs(cdm_sum({d}, 1) - 1.0));
  out.push_back(detail::within(s, "c_d(1) = 1, d <= 20", worst, 1e-12));

  double gap = -std::numeric_limits<double>::infinity();
  for (int d = 1; d <= 20; ++d) {
    for (int m = 2; m < 30; ++m) gap = std::max(gap, cdm_sum({d}, m + 1) - cdm_sum({d}, m));
  }
  out.push_back(detail::below(s, "c_d(m+1) < c_d(m), 2 <= m <= 30, d <= 20", gap));

  gap = -std::numeric_limits<double>::infinity();
  for (int d = 3; d <= 12; ++d) {
    const double bound = (d + 2.0) / (d - 2.0);
    for (int m = 2; m <= 30; ++m) gap = std::max(gap, jacobi_ratio_rm({d}, m) - bound);
  }
  out.push_back(detail::below(s, "r_m < (d+2)/(d-2), d = 3..12, 2 <= m <= 30", gap));

  worst = 0.0;
  for (int d = 3; d <= 10; ++d) {
    for (int m = 1; m <= 30; ++m) {
      const double direct = specfun::jacobi(m + 1, 0.0, 0.5 * d - 1.0, (d * d + 4.0) / (d * d - 4.0)) /
                            specfun::jacobi(m, 0.0, 0.5 * d - 1.0, (d * d + 4.0) / (d * d - 4.0));
      worst = std::max(worst, detail::rel_diff(jacobi_ratio_rm({d}, m), direct));
    }
  }
  out.push_back(detail::within(s, "r_m recurrence = direct Jacobi quotient", worst, 1e-10));

  worst = 0.0;
  for (int d = 1; d <= 10; ++d) {
    RadialHermiteCoeffs e2{{0.0, 0.0, 1.0}};
    worst = std::max(worst, detail::rel_diff(deficit_hessian_paraboloid({d}, e2).quotient, spectral_gap_paraboloid({d}).value));
  }
  out.push_back(detail::within(s, "Hessian quotient at a = e_2 equals C_SG(d), d <= 10", worst, 1e-12));

  gap = -std::numeric_limits<double>::infinity();
  for (int d = 1; d <= 100; ++d) gap = std::max(gap, spectral_gap_paraboloid({d}).value - two_peak_paraboloid({d}).value);
  out.push_back(detail::below(s, "C_SG(d) < C_TP(d), d = 1..100", gap));

  worst = 0.0;
  for (int d = 1; d <= 2; ++d) {
    for (double lambda : {0.3, 1.0, 7.0}) {
      const GaussianSuperposition g{{{1.0, lambda}}};
      worst = std::max(worst, detail::rel_diff(qnorm_superposition({d}, g, spec).value, qnorm_gaussian({d})));
    }
  }
  out.push_back(detail::within(s, "Gaussian-sum q-norm of a single Gaussian = closed form, d = 1, 2", worst, 1e-9));

  const GaussianSuperposition pair{{{1.0, 1.0}, {0.7, 0.4}}};
  const GaussianSuperposition pair_scaled{{{2.0, 3.0}, {1.4, 1.2}}};
  const double base = qnorm_superposition_d2(pair, spec).value;
  out.push_back(detail::within(s, "q-norm homogeneous of degree 4 and scale invariant (d = 2)",
                               detail::rel_diff(qnorm_superposition_d2(pair_scaled, spec).value, 16.0 * base), 1e-9));

  const double mu = optimal_mu({2}, 1e-4).mu_star;
  out.push_back(detail::within(s, "optimal mu(lambda = 1e-4, d = 2) = 1 - 2 lambda to O(lambda^2)",
                               std::abs(mu - (1.0 - 2e-4)), 5e-6));
  return out;
}

inline std::vector<Check> sphere_suite(const quad::QuadratureSpec& spec = {}) {
  using namespace sphere;
  const std::string s = "sphere";
  std::vector<Check> out;

  double worst_c = 0.0;
  double worst_b = 0.0;
  for (int k = 0; k <= 8; ++k) {
    const CkQuadrature c = ck_quadrature(k, spec);
    worst_c = std::max(worst_c, std::abs(c.c - ck_closed(k)));
    worst_b = std::max(worst_b, std::abs(c.b_part));
  }
  out.push_back(detail::within(s, "c_k quadrature = 1/((2k+1) pi), k <= 8", worst_c, 1e-6));
  out.push_back(detail::within(s, "|B_k| = 0, k <= 8", worst_b, 1e-6));

  const double target = spectral_gap_sphere();
  AxisymCoeffs e2{{0.0, 0.0, 1.0}};
  out.push_back(detail::within(s, "Hessian quotient at real e_2 = 8 pi^2/5",
                               std::abs(deficit_hessian_sphere(e2).quotient - target), 1e-10));
  int argmin = 2;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 2; k <= 10; ++k) {
    AxisymCoeffs f;
    f.a.assign(k + 1, 0.0);
    f.a[k] = 1.0;
    const double q = deficit_hessian_sphere(f).quotient;
    if (q < best) {
      best = q;
      argmin = k;
    }
  }
  out.push_back(detail::within(s, "single-mode Hessian scan k = 2..10 minimized at k = 2", std::abs(argmin - 2.0), 0.0));

  // Least-squares line through the f_eps quotients.
  const std::vector<double> eps{0.005, 0.01, 0.02};
  std::vector<double> q;
  for (double e : eps) q.push_back(rayleigh_f_epsilon(e, spec).quotient);
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    mx += eps[i] / eps.size();
    my += q[i] / eps.size();
  }
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    sxy += (eps[i] - mx) * (q[i] - my);
    sxx += (eps[i] - mx) * (eps[i] - mx);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  const double predicted_slope = -8.0 * std::sqrt(5.0) * std::pow(specfun::pi, 1.5) / 49.0;
  out.push_back(detail::within(s, "f_eps quotient fit: intercept = 8 pi^2/5 (relative)", std::abs(intercept / target - 1.0), 1e-3));
  out.push_back(detail::within(s, "f_eps quotient fit: slope = -8 sqrt5 pi^{3/2}/49 (relative)",
                               std::abs(slope / predicted_slope - 1.0), 1e-2));

  const SphereTwoPeak tp = two_peak_quotient_sphere(100.0, spec);
  out.push_back(detail::within(s, "two-peak quotient at |y| = 100 within 5% of (2 - sqrt2) 4 pi^2",
                               std::abs(tp.quotient / two_peak_sphere() - 1.0), 0.05));
  return out;
}

inline std::vector<Check> run_suite(const std::string& suite, const quad::QuadratureSpec& spec = {}) {
  if (suite == "specfun") return specfun_suite();
  if (suite == "quadrature") return quadrature_suite(spec);
  if (suite == "paraboloid") return paraboloid_suite(spec);
  if (suite == "sphere") return sphere_suite(spec);
  if (suite == "all") {
    std::vector<Check> out;
    for (const std::string& name : suite_names()) {
      std::vector<Check> part = run_suite(name, spec);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  throw std::invalid_argument("unknown verification suite '" + suite + "'");
}

}  // namespace strichartz::verify
