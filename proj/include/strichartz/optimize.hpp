#pragma once

// Derivative-free search: golden-section refinement for scalar maximization and
// a box-constrained Nelder-Mead with multistart seeds for vector problems.
// Everything is deterministic; ties between seeds go to the smaller index.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace strichartz::opt {

struct Bounds {
  double lo = 0.0;
  double hi = 0.0;
};

struct SearchSpec {
  int multistart_count = 3;     // local searches started from the best seeds
  std::vector<Bounds> box;      // one interval per coordinate (ignored by maximize_scalar)
  int grid_per_axis = 9;        // uniform seed grid resolution
  double x_tol = 1e-10;
  double f_tol = 1e-13;
  int max_iters = 2000;         // per local search
  int max_evaluations = 0;      // total objective evaluations, 0 = unlimited
  double initial_step = 0.1;    // Nelder-Mead simplex edge as a fraction of the box width

  void validate(std::size_t dimension) const {
    if (multistart_count < 1) throw std::invalid_argument("SearchSpec: multistart_count must be >= 1");
    if (grid_per_axis < 1) throw std::invalid_argument("SearchSpec: grid_per_axis must be >= 1");
    if (!(x_tol > 0.0) || !(f_tol > 0.0)) throw std::invalid_argument("SearchSpec: tolerances must be > 0");
    if (max_iters < 1) throw std::invalid_argument("SearchSpec: max_iters must be >= 1");
    if (max_evaluations < 0) throw std::invalid_argument("SearchSpec: max_evaluations must be >= 0");
    if (!(initial_step > 0.0)) throw std::invalid_argument("SearchSpec: initial_step must be > 0");
    if (dimension != 0 && box.size() != dimension) {
      throw std::invalid_argument("SearchSpec: box has " + std::to_string(box.size()) +
                                  " intervals, expected " + std::to_string(dimension));
    }
    for (const Bounds& b : box) {
      if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || !(b.lo <= b.hi)) {
        throw std::invalid_argument("SearchSpec: box bounds must be finite with lo <= hi");
      }
    }
  }
};

/// Thrown when the objective returns NaN or infinity; carries the offending point.
class NonFiniteObjective : public std::runtime_error {
 public:
  NonFiniteObjective(std::vector<double> point, double value)
      : std::runtime_error(describe(point, value)), point_(std::move(point)), value_(value) {}

  const std::vector<double>& point() const { return point_; }
  double value() const { return value_; }

 private:
  static std::string describe(const std::vector<double>& point, double value) {
    std::ostringstream os;
    os.precision(17);
    os << "objective returned " << value << " at (";
    for (std::size_t i = 0; i < point.size(); ++i) os << (i ? ", " : "") << point[i];
    os << ")";
    return os.str();
  }

  std::vector<double> point_;
  double value_;
};

struct ScalarResult {
  double argmax = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

struct BoxResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  int local_searches = 0;
  bool budget_exhausted = false;
};

/// Called after every objective evaluation with the point and its value.
using Observer = std::function<void(const std::vector<double>&, double)>;

namespace detail {

inline double checked(double value, double x) {
  if (!std::isfinite(value)) throw NonFiniteObjective({x}, value);
  return value;
}

inline double checked(double value, const std::vector<double>& x) {
  if (!std::isfinite(value)) throw NonFiniteObjective(x, value);
  return value;
}

inline void clamp_into(std::vector<double>& x, const std::vector<Bounds>& box) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], box[i].lo, box[i].hi);
}

// Evaluation wrapper for minimization: counts calls, enforces the budget,
// tracks the best point and forwards to the observer.
template <class F>
class Counted {
 public:
  Counted(const F& f, int budget, const Observer* observer)
      : f_(f), budget_(budget), observer_(observer) {}

  bool exhausted() const { return budget_ > 0 && count_ >= budget_; }
  int count() const { return count_; }
  const std::vector<double>& best_x() const { return best_x_; }
  double best_value() const { return best_value_; }

  double operator()(const std::vector<double>& x) {
    const double v = checked(static_cast<double>(f_(x)), x);
    ++count_;
    if (v < best_value_) {
      best_value_ = v;
      best_x_ = x;
    }
    if (observer_ != nullptr && *observer_) (*observer_)(x, v);
    return v;
  }

 private:
  const F& f_;
  int budget_;
  const Observer* observer_;
  int count_ = 0;
  std::vector<double> best_x_;
  double best_value_ = std::numeric_limits<double>::infinity();
};

template <class F>
void nelder_mead(Counted<F>& eval, std::vector<double> start, double start_value, const SearchSpec& spec) {
  const std::size_t n = start.size();
  if (n == 0) return;
  std::vector<std::vector<double>> simplex{start};
  std::vector<double> values{start_value};
  for (std::size_t i = 0; i < n && !eval.exhausted(); ++i) {
    std::vector<double> vertex = start;
    const double width = spec.box[i].hi - spec.box[i].lo;
    double step = spec.initial_step * width;
    if (vertex[i] + step > spec.box[i].hi) step = -step;
    vertex[i] += step;
    clamp_into(vertex, spec.box);
    values.push_back(eval(vertex));
    simplex.push_back(std::move(vertex));
  }
  if (simplex.size() != n + 1) return;

  std::vector<std::size_t> order(n + 1);
  const auto point = [&](const std::vector<double>& centroid, const std::vector<double>& worst, double t) {
    std::vector<double> p(n);
    for (std::size_t j = 0; j < n; ++j) p[j] = centroid[j] + t * (worst[j] - centroid[j]);
    clamp_into(p, spec.box);
    return p;
  };

  for (int iter = 0; iter < spec.max_iters && !eval.exhausted(); ++iter) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[n - 1];

    double size = 0.0;
    for (std::size_t v = 0; v <= n; ++v) {
      for (std::size_t j = 0; j < n; ++j) size = std::max(size, std::abs(simplex[v][j] - simplex[best][j]));
    }
    if (values[worst] - values[best] <= spec.f_tol && size <= spec.x_tol) break;
    if (size <= 1e-3 * spec.x_tol) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t v = 0; v <= n; ++v) {
      if (v == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[v][j] / static_cast<double>(n);
    }

    std::vector<double> reflected = point(centroid, simplex[worst], -1.0);
    const double fr = eval(reflected);
    if (fr < values[best]) {
      if (eval.exhausted()) {
        simplex[worst] = std::move(reflected);
        values[worst] = fr;
        break;
      }
      std::vector<double> expanded = point(centroid, simplex[worst], -2.0);
      const double fe = eval(expanded);
      if (fe < fr) {
        simplex[worst] = std::move(expanded);
        values[worst] = fe;
      } else {
        simplex[worst] = std::move(reflected);
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = std::move(reflected);
      values[worst] = fr;
      continue;
    }
    if (eval.exhausted()) break;
    const bool outside = fr < values[worst];
    std::vector<double> contracted = point(centroid, simplex[worst], outside ? -0.5 : 0.5);
    const double fc = eval(contracted);
    if (fc < std::min(fr, values[worst])) {
      simplex[worst] = std::move(contracted);
      values[worst] = fc;
      continue;
    }
    for (std::size_t v = 0; v <= n && !eval.exhausted(); ++v) {
      if (v == best) continue;
      for (std::size_t j = 0; j < n; ++j) simplex[v][j] = simplex[best][j] + 0.5 * (simplex[v][j] - simplex[best][j]);
      values[v] = eval(simplex[v]);
    }
  }
}

inline std::vector<std::vector<double>> grid_seeds(const SearchSpec& spec) {
  std::vector<std::vector<double>> seeds{{}};
  for (const Bounds& b : spec.box) {
    std::vector<std::vector<double>> next;
    for (const auto& prefix : seeds) {
      for (int i = 0; i < spec.grid_per_axis; ++i) {
        std::vector<double> p = prefix;
        const double t = spec.grid_per_axis == 1 ? 0.5 : static_cast<double>(i) / (spec.grid_per_axis - 1);
        p.push_back(b.lo + t * (b.hi - b.lo));
        next.push_back(std::move(p));
      }
    }
    seeds = std::move(next);
  }
  return seeds;
}

}  // namespace detail

/// Maximize f over [lo, hi]: scan grid_per_axis uniform points, then refine the
/// best multistart_count grid points by golden section on their neighbouring cells.
template <class F>
ScalarResult maximize_scalar(const F& f, double lo, double hi, const SearchSpec& spec) {
  spec.validate(0);
  if (!(lo < hi)) throw std::invalid_argument("maximize_scalar: requires lo < hi");
  const int n = std::max(spec.grid_per_axis, 3);
  ScalarResult out;
  std::vector<double> xs(n);
  std::vector<double> fs(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = lo + (hi - lo) * i / (n - 1);
    fs[i] = detail::checked(static_cast<double>(f(xs[i])), xs[i]);
  }
  out.evaluations = n;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] > fs[b]; });
  out.argmax = xs[order[0]];
  out.value = fs[order[0]];

  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  const int starts = std::min(spec.multistart_count, n);
  for (int s = 0; s < starts; ++s) {
    const int i = order[s];
    double a = xs[std::max(i - 1, 0)];
    double b = xs[std::min(i + 1, n - 1)];
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    double fc = detail::checked(static_cast<double>(f(c)), c);
    double fd = detail::checked(static_cast<double>(f(d)), d);
    out.evaluations += 2;
    for (int iter = 0; iter < spec.max_iters && (b - a) > spec.x_tol; ++iter) {
      if (fc >= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - ratio * (b - a);
        fc = detail::checked(static_cast<double>(f(c)), c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + ratio * (b - a);
        fd = detail::checked(static_cast<double>(f(d)), d);
      }
      ++out.evaluations;
    }
    const double x = fc >= fd ? c : d;
    const double v = std::max(fc, fd);
    if (v > out.value) {
      out.value = v;
      out.argmax = x;
    }
  }
  return out;
}

/// Minimize f over spec.box. Seeds are the uniform grid unless explicit seeds are
/// given; Nelder-Mead (projected onto the box) runs from the best multistart_count
/// seeds. The result is the best point evaluated anywhere, so it never exceeds the
/// value at any seed.
template <class F>
BoxResult minimize_box(const F& f, const SearchSpec& spec, std::vector<std::vector<double>> seeds = {},
                       const Observer& observer = {}) {
  spec.validate(spec.box.size());
  if (spec.box.empty()) throw std::invalid_argument("minimize_box: empty box");
  if (seeds.empty()) seeds = detail::grid_seeds(spec);
  for (auto& s : seeds) {
    if (s.size() != spec.box.size()) throw std::invalid_argument("minimize_box: seed dimension mismatch");
    detail::clamp_into(s, spec.box);
  }

  detail::Counted<F> eval(f, spec.max_evaluations, &observer);
  std::vector<double> seed_values;
  for (const auto& s : seeds) {
    if (eval.exhausted()) break;
    seed_values.push_back(eval(s));
  }
  std::vector<std::size_t> order(seed_values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return seed_values[a] < seed_values[b]; });

  BoxResult out;
  const std::size_t starts = std::min<std::size_t>(spec.multistart_count, order.size());
  for (std::size_t s = 0; s < starts && !eval.exhausted(); ++s) {
    detail::nelder_mead(eval, seeds[order[s]], seed_values[order[s]], spec);
    ++out.local_searches;
  }
  out.x = eval.best_x();
  out.value = eval.best_value();
  out.evaluations = eval.count();
  out.budget_exhausted = eval.exhausted();
  return out;
}

/// Maximization counterpart of minimize_box; the observer sees the original values.
template <class F>
BoxResult maximize_box(const F& f, const SearchSpec& spec, std::vector<std::vector<double>> seeds = {},
                       const Observer& observer = {}) {
  const auto negated = [&](const std::vector<double>& x) { return -static_cast<double>(f(x)); };
  Observer flipped;
  if (observer) flipped = [&](const std::vector<double>& x, double v) { observer(x, -v); };
  BoxResult out = minimize_box(negated, spec, std::move(seeds), flipped);
  out.value = -out.value;
  return out;
}

}  // namespace strichartz::opt
