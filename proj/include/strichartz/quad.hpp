#pragma once

// Adaptive quadrature on finite intervals and semi-infinite oscillatory integrals.
//
// Semi-infinite integrals are summed panel by panel (panels of fixed width,
// default pi) up to a truncation radius R. The remaining tail is removed by
// extrapolating the partial sums S(R_j) at R/2^(L-1), ..., R/2, R in inverse
// powers of R starting at R^{1-p}, where p is the envelope exponent of the
// integrand. This expansion holds for integrands of the form sum_j r^{-j} P_j(r)
// with P_j periodic of the panel width, which covers every product of spherical
// Bessel and trigonometric factors used in this library.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace strichartz::quad {

inline constexpr double pi = std::numbers::pi;

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_panels = 2000;           // adaptive subdivisions per finite integral
  double truncation_radius = 400.0 * pi;
  double envelope_exponent = 2.0;  // integrand assumed O(r^{-p}) beyond R
  double panel_width = pi;
  double panel_offset = 0.0;       // first panel boundary after 0
  int extrapolation_levels = 4;

  void validate() const {
    if (!(abs_tol > 0.0)) throw std::invalid_argument("QuadratureSpec: abs_tol must be > 0");
    if (!(rel_tol > 0.0)) throw std::invalid_argument("QuadratureSpec: rel_tol must be > 0");
    if (max_panels < 1) throw std::invalid_argument("QuadratureSpec: max_panels must be >= 1");
    if (!(truncation_radius > 0.0)) throw std::invalid_argument("QuadratureSpec: R must be > 0");
    if (!(envelope_exponent > 1.0)) {
      throw std::invalid_argument("QuadratureSpec: envelope exponent must be > 1");
    }
    if (!(panel_width > 0.0)) throw std::invalid_argument("QuadratureSpec: panel width must be > 0");
    if (panel_offset < 0.0 || panel_offset >= panel_width) {
      throw std::invalid_argument("QuadratureSpec: panel offset must lie in [0, width)");
    }
    if (extrapolation_levels < 1) {
      throw std::invalid_argument("QuadratureSpec: extrapolation levels must be >= 1");
    }
  }
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
  int panels = 0;
  int evaluations = 0;
  double tail = 0.0;            // extrapolated contribution beyond R (semi-infinite only)
  double tail_envelope = 0.0;   // C R^{1-p}/(p-1) from the sampled envelope constant
  std::string diagnostic;
};

using Integrand = std::function<double(double)>;

/// Raised by callers that need a converged integral; carries the failed result.
class QuadratureFailure : public std::runtime_error {
 public:
  QuadratureFailure(const std::string& what, QuadResult result)
      : std::runtime_error(what + ": " + result.diagnostic), result_(std::move(result)) {}
  const QuadResult& result() const { return result_; }

 private:
  QuadResult result_;
};

inline const QuadResult& require_converged(const QuadResult& r, const std::string& what) {
  if (!r.converged) throw QuadratureFailure(what, r);
  return r;
}

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15 constants).
inline constexpr double kronrod_nodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kronrod_weights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double gauss_weights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
};

template <class F>
Segment kronrod15(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_center = f(center);
  double gauss = f_center * gauss_weights[3];
  double kronrod = f_center * kronrod_weights[7];
  double abs_sum = std::abs(kronrod);
  double fv1[7];
  double fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kronrod_nodes[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[j] = f1;
    fv2[j] = f2;
    kronrod += kronrod_weights[j] * (f1 + f2);
    abs_sum += kronrod_weights[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += gauss_weights[j / 2] * (f1 + f2);
  }
  const double mean = 0.5 * kronrod;
  double asc = kronrod_weights[7] * std::abs(f_center - mean);
  for (int j = 0; j < 7; ++j) {
    asc += kronrod_weights[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
  }
  const double result = kronrod * half;
  abs_sum *= std::abs(half);
  asc *= std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  const double round = 50.0 * std::numeric_limits<double>::epsilon() * abs_sum;
  if (abs_sum > std::numeric_limits<double>::min() / (50.0 * std::numeric_limits<double>::epsilon())) {
    err = std::max(err, round);
  }
  return {a, b, result, err};
}

struct ByError {
  bool operator()(const Segment& x, const Segment& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.a > y.a;
  }
};

// Solve the (small, dense) system A c = rhs by partial-pivot elimination.
inline std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < n; ++row) {
      if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
    }
    std::swap(a[col], a[pivot]);
    std::swap(rhs[col], rhs[pivot]);
    for (std::size_t row = col + 1; row < n; ++row) {
      const double factor = a[row][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
      rhs[row] -= factor * rhs[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = rhs[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

}  // namespace detail

/// Weights w_j such that S_inf ~= sum_j w_j S(R_j) under the model
/// S(R) = S_inf + sum_{i>=1} c_i R^{-(p-1)-(i-1)}.
inline std::vector<double> tail_extrapolation_weights(const std::vector<double>& radii, double p) {
  const std::size_t n = radii.size();
  if (n == 0) throw std::invalid_argument("tail_extrapolation_weights: no radii");
  // Row i of the system is the model at R_i; the weights are the first row of the inverse,
  // obtained by solving A^T w = e_0.
  std::vector<std::vector<double>> at(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    at[0][i] = 1.0;
    for (std::size_t k = 1; k < n; ++k) {
      at[k][i] = std::pow(radii[i], -(p - 1.0) - static_cast<double>(k - 1));
    }
  }
  std::vector<double> e0(n, 0.0);
  e0[0] = 1.0;
  return detail::solve_dense(std::move(at), std::move(e0));
}

/// Adaptive integral over [a, b] with the 7/15 Gauss-Kronrod pair per panel and
/// global bisection of the worst panel.
template <class F>
QuadResult integrate_finite(const F& f, double a, double b, const QuadratureSpec& spec) {
  spec.validate();
  if (!(a < b)) throw std::invalid_argument("integrate_finite: requires a < b");
  std::priority_queue<detail::Segment, std::vector<detail::Segment>, detail::ByError> heap;
  detail::Segment first = detail::kronrod15(f, a, b);
  heap.push(first);
  double total = first.value;
  double total_error = first.error;
  int evaluations = 15;
  int panels = 1;
  while (total_error > std::max(spec.abs_tol, spec.rel_tol * std::abs(total)) &&
         panels < spec.max_panels) {
    detail::Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(worst);
      break;
    }
    detail::Segment left = detail::kronrod15(f, worst.a, mid);
    detail::Segment right = detail::kronrod15(f, mid, worst.b);
    evaluations += 30;
    ++panels;
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  std::vector<detail::Segment> segments;
  segments.reserve(heap.size());
  while (!heap.empty()) {
    segments.push_back(heap.top());
    heap.pop();
  }
  std::sort(segments.begin(), segments.end(),
            [](const detail::Segment& x, const detail::Segment& y) { return x.a < y.a; });
  QuadResult result;
  for (const auto& s : segments) {
    result.value += s.value;
    result.error += s.error;
  }
  result.panels = panels;
  result.evaluations = evaluations;
  result.converged = result.error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(result.value));
  if (!result.converged) {
    result.diagnostic = "integrate_finite: panel budget exhausted on [" + std::to_string(a) + ", " +
                        std::to_string(b) + "], error " + std::to_string(result.error);
  }
  return result;
}

/// Panel boundaries 0 = e_0 < e_1 < ... covering [0, R] for the given spec.
inline std::vector<double> panel_edges(const QuadratureSpec& spec) {
  std::vector<double> edges{0.0};
  double edge = spec.panel_offset > 0.0 ? spec.panel_offset : spec.panel_width;
  while (edge <= spec.truncation_radius * (1.0 + 1e-12)) {
    edges.push_back(edge);
    edge += spec.panel_width;
  }
  if (edges.size() < 2) edges.push_back(spec.panel_width);
  return edges;
}

/// Indices into panel_edges() used as extrapolation nodes (R/2^(L-1), ..., R).
inline std::vector<std::size_t> extrapolation_nodes(const std::vector<double>& edges, int levels) {
  std::vector<std::size_t> nodes;
  const std::size_t last = edges.size() - 1;
  for (int j = levels - 1; j >= 0; --j) {
    const double target = edges[last] / std::pow(2.0, j);
    std::size_t best = 1;
    for (std::size_t i = 1; i <= last; ++i) {
      if (std::abs(edges[i] - target) < std::abs(edges[best] - target)) best = i;
    }
    if (nodes.empty() || best > nodes.back()) nodes.push_back(best);
  }
  return nodes;
}

/// Integral over (0, inf) of an integrand decaying like r^{-p} beyond R with
/// panel-periodic oscillation. The reported error combines the panel quadrature
/// errors (weighted by the extrapolation weights) and the change of the L-level
/// tail extrapolation when its nodes are shifted down by one halving.
template <class F>
QuadResult integrate_semi_infinite_oscillatory(const F& f, const QuadratureSpec& spec) {
  spec.validate();
  const std::vector<double> edges = panel_edges(spec);
  const std::size_t count = edges.size() - 1;
  QuadratureSpec local = spec;
  local.abs_tol = spec.abs_tol / (10.0 * static_cast<double>(count));
  local.rel_tol = spec.rel_tol * 1e-2;

  std::vector<double> partial(edges.size(), 0.0);
  std::vector<double> partial_error(edges.size(), 0.0);
  QuadResult out;
  bool panels_ok = true;
  std::string panel_message;
  for (std::size_t i = 0; i < count; ++i) {
    const QuadResult r = integrate_finite(f, edges[i], edges[i + 1], local);
    partial[i + 1] = partial[i] + r.value;
    partial_error[i + 1] = partial_error[i] + r.error;
    out.evaluations += r.evaluations;
    out.panels += r.panels;
    if (!r.converged && panels_ok) {
      panels_ok = false;
      panel_message = r.diagnostic;
    }
  }

  // Same-order extrapolations over the nodes R/2^(L-1)..R and R/2^L..R/2; their
  // difference bounds the extrapolation error of the first.
  const double p = spec.envelope_exponent;
  const std::vector<std::size_t> all_nodes = extrapolation_nodes(edges, spec.extrapolation_levels + 1);
  const auto extrapolate = [&](std::size_t first, std::size_t n, double* weighted_error) {
    std::vector<double> radii;
    for (std::size_t j = first; j < first + n; ++j) radii.push_back(edges[all_nodes[j]]);
    const std::vector<double> w = tail_extrapolation_weights(radii, p);
    double v = 0.0;
    double e = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      v += w[j] * partial[all_nodes[first + j]];
      e += std::abs(w[j]) * partial_error[all_nodes[first + j]];
    }
    if (weighted_error != nullptr) *weighted_error = e;
    return v;
  };
  const std::size_t order = std::min<std::size_t>(spec.extrapolation_levels, all_nodes.size());
  double weighted_error = 0.0;
  const double value = extrapolate(all_nodes.size() - order, order, &weighted_error);
  double extrapolation_change = std::numeric_limits<double>::infinity();
  if (all_nodes.size() > order) {
    extrapolation_change = std::abs(value - extrapolate(all_nodes.size() - order - 1, order, nullptr));
  }
  extrapolation_change = std::max(extrapolation_change, 1e-15 * std::abs(value));

  // Envelope constant sampled over the last two panels.
  double envelope = 0.0;
  const double r_end = edges.back();
  const double r_begin = edges[std::max<std::size_t>(0, edges.size() >= 3 ? edges.size() - 3 : 0)];
  for (int s = 0; s <= 64; ++s) {
    const double r = r_begin + (r_end - r_begin) * s / 64.0;
    if (r > 0.0) envelope = std::max(envelope, std::abs(f(r)) * std::pow(r, p));
  }
  out.tail_envelope = envelope * std::pow(r_end, 1.0 - p) / (p - 1.0);
  out.tail = value - partial.back();
  out.value = value;
  out.error = weighted_error + extrapolation_change;
  out.converged = panels_ok && out.error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
  if (!panels_ok) {
    out.diagnostic = panel_message;
  } else if (!out.converged) {
    out.diagnostic = "semi-infinite: tail extrapolation change " + std::to_string(extrapolation_change) +
                     " exceeds tolerance (envelope bound " + std::to_string(out.tail_envelope) +
                     ", R = " + std::to_string(r_end) + ")";
  }
  return out;
}

/// Integral over (0, inf) of a smooth, non-oscillatory integrand with algebraic decay
/// r^{-p}, p > 1. The integrand may vary on several scales: [0, s_1], [s_1, s_2], ...
/// are integrated directly and (s_max, inf) through r = s_max/u.
template <class F>
QuadResult integrate_semi_infinite_smooth(const F& f, std::vector<double> scales, const QuadratureSpec& spec) {
  spec.validate();
  if (scales.empty()) throw std::invalid_argument("integrate_semi_infinite_smooth: no scales");
  for (double s : scales) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw std::invalid_argument("integrate_semi_infinite_smooth: scales must be positive and finite");
    }
  }
  std::sort(scales.begin(), scales.end());
  scales.erase(std::unique(scales.begin(), scales.end(),
                           [](double a, double b) { return std::abs(a - b) <= 1e-12 * b; }),
               scales.end());
  QuadratureSpec piece = spec;
  piece.abs_tol = spec.abs_tol / static_cast<double>(scales.size() + 1);
  QuadResult out;
  const auto add = [&](const QuadResult& r) {
    out.value += r.value;
    out.error += r.error;
    out.panels += r.panels;
    out.evaluations += r.evaluations;
    if (!r.converged && out.diagnostic.empty()) out.diagnostic = r.diagnostic;
  };
  double left = 0.0;
  for (double s : scales) {
    add(integrate_finite(f, left, s, piece));
    left = s;
  }
  const double last = scales.back();
  const auto mapped = [&](double u) { return f(last / u) * last / (u * u); };
  const QuadResult outer = integrate_finite(mapped, 0.0, 1.0, piece);
  add(outer);
  out.tail = outer.value;
  out.converged = out.diagnostic.empty() && out.error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(out.value));
  if (!out.converged && out.diagnostic.empty()) {
    out.diagnostic = "semi-infinite smooth: error " + std::to_string(out.error) + " exceeds tolerance";
  }
  return out;
}

template <class F>
QuadResult integrate_semi_infinite_smooth(const F& f, double scale, const QuadratureSpec& spec) {
  return integrate_semi_infinite_smooth(f, std::vector<double>{scale}, spec);
}

/// Integral over R^3 of an azimuthally symmetric integrand g(r, cos theta):
/// int_0^inf int_{-1}^{1} g(r, c) 2 pi r^2 dc dr. The 2 pi r^2 factor is applied here.
template <class G>
QuadResult integrate_radial_3d(const G& g, const QuadratureSpec& spec) {
  spec.validate();
  QuadratureSpec angular = spec;
  angular.abs_tol = 1e-16;
  angular.rel_tol = std::min(spec.rel_tol * 1e-3, 1e-13);
  angular.max_panels = 200;
  bool angular_ok = true;
  std::string angular_message;
  const auto radial = [&](double r) {
    const QuadResult inner = integrate_finite([&](double c) { return g(r, c); }, -1.0, 1.0, angular);
    if (!inner.converged && angular_ok) {
      angular_ok = false;
      angular_message = inner.diagnostic;
    }
    return 2.0 * pi * r * r * inner.value;
  };
  QuadResult out = integrate_semi_infinite_oscillatory(radial, spec);
  if (!angular_ok) {
    out.converged = false;
    out.diagnostic = "angular: " + angular_message;
  }
  return out;
}

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton iteration on P_n).
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

/// A fixed tensor-product rule for azimuthally symmetric integrals over R^3:
/// Gauss-Legendre per radial panel, the tail extrapolation folded into the
/// radial weights, and Gauss-Legendre in cos(theta). Intended for repeated
/// evaluation of integrands whose angular dependence is a polynomial of bounded
/// degree (exact for degree < 2 * angular_nodes).
class RadialAngularGrid {
 public:
  RadialAngularGrid(const QuadratureSpec& spec, int nodes_per_panel, int angular_nodes) {
    spec.validate();
    const std::vector<double> edges = panel_edges(spec);
    const std::vector<std::size_t> nodes = extrapolation_nodes(edges, spec.extrapolation_levels);
    std::vector<double> radii;
    for (std::size_t idx : nodes) radii.push_back(edges[idx]);
    const std::vector<double> w = tail_extrapolation_weights(radii, spec.envelope_exponent);
    const GaussRule radial_rule = gauss_legendre(nodes_per_panel);
    for (std::size_t panel = 0; panel + 1 < edges.size(); ++panel) {
      // Partial sum S(R_j) contains this panel iff its right edge index <= nodes[j].
      double panel_weight = 0.0;
      for (std::size_t j = 0; j < nodes.size(); ++j) {
        if (panel + 1 <= nodes[j]) panel_weight += w[j];
      }
      if (panel_weight == 0.0) continue;
      const double a = edges[panel];
      const double b = edges[panel + 1];
      for (int i = 0; i < nodes_per_panel; ++i) {
        const double r = 0.5 * (a + b) + 0.5 * (b - a) * radial_rule.nodes[i];
        radii_.push_back(r);
        radial_weights_.push_back(panel_weight * 0.5 * (b - a) * radial_rule.weights[i] * 2.0 * pi * r * r);
      }
    }
    const GaussRule angular = gauss_legendre(angular_nodes);
    cosines_ = angular.nodes;
    angular_weights_ = angular.weights;
  }

  const std::vector<double>& radii() const { return radii_; }
  const std::vector<double>& radial_weights() const { return radial_weights_; }
  const std::vector<double>& cosines() const { return cosines_; }
  const std::vector<double>& angular_weights() const { return angular_weights_; }

  template <class G>
  double integrate(const G& g) const {
    double total = 0.0;
    for (std::size_t i = 0; i < radii_.size(); ++i) {
      double inner = 0.0;
      for (std::size_t l = 0; l < cosines_.size(); ++l) inner += angular_weights_[l] * g(i, l);
      total += radial_weights_[i] * inner;
    }
    return total;
  }

 private:
  std::vector<double> radii_;
  std::vector<double> radial_weights_;
  std::vector<double> cosines_;
  std::vector<double> angular_weights_;
};

}  // namespace strichartz::quad
