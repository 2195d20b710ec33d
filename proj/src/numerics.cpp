#include "alh/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "alh/errors.hpp"

namespace alh::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

int sign(double v) { return (v > 0.0) - (v < 0.0); }

std::string bracket_text(double lo, double hi) {
  std::ostringstream os;
  os.precision(17);
  os << "[" << lo << ", " << hi << "]";
  return os.str();
}

}  // namespace

double bisect(const ScalarFn& f, double lo, double hi, double rel_tol, int max_iter) {
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (sign(f_lo) == sign(f_hi)) {
    throw NumericalError("bisect: no sign change on " + bracket_text(lo, hi));
  }
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return mid;
    const double width = hi - lo;
    if (width <= rel_tol * std::max(std::abs(mid), std::numeric_limits<double>::min())) {
      return mid;
    }
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if (sign(f_mid) == sign(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  throw NumericalError("bisect: no convergence within " + std::to_string(max_iter) +
                       " iterations, last bracket " + bracket_text(lo, hi));
}

std::optional<PositiveRoot> largest_positive_cubic_root(double a1, double a0) {
  const auto p = [&](double r) { return (r * r + a1) * r + a0; };
  const auto dp = [&](double r) { return 3.0 * r * r + a1; };
  const double r_max = 1.0 + std::max(std::abs(a1), std::abs(a0));

  double lo = 0.0;
  if (a1 < 0.0) {
    // P has exactly one positive critical point, a local minimum.
    const double r_star = std::sqrt(-a1 / 3.0);
    const double p_star = p(r_star);
    const double scale = std::max({1.0, std::abs(a0), std::abs(a1) * r_star, r_star * r_star * r_star});
    if (std::abs(p_star) <= 64.0 * kEps * scale) return PositiveRoot{r_star, true};
    if (p_star > 0.0) return std::nullopt;
    lo = r_star;
  } else if (a0 >= 0.0) {
    return std::nullopt;
  }

  double r = bisect(p, lo, r_max, 1e-15);
  for (int i = 0; i < 3; ++i) {
    const double slope = dp(r);
    if (slope == 0.0) break;
    const double next = r - p(r) / slope;
    if (!(std::abs(p(next)) < std::abs(p(r)))) break;
    r = next;
  }
  if (!(r > 0.0)) return std::nullopt;
  return PositiveRoot{r, std::abs(dp(r)) < 1e-8};
}

std::optional<double> rightmost_zero_scan(const ScalarFn& f, double lo, double hi,
                                          int grid_points) {
  if (!(hi > lo) || !(lo > 0.0) || grid_points < 2) {
    throw DomainError("rightmost_zero_scan: need 0 < lo < hi, got " + bracket_text(lo, hi));
  }
  const double ratio = std::log(hi / lo) / static_cast<double>(grid_points - 1);
  std::vector<double> xs(static_cast<std::size_t>(grid_points));
  std::vector<double> fs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = i + 1 == xs.size() ? hi : lo * std::exp(ratio * static_cast<double>(i));
    fs[i] = f(xs[i]);
  }
  for (std::size_t i = xs.size() - 1; i > 0; --i) {
    if (fs[i] == 0.0) return xs[i];
    if (sign(fs[i]) * sign(fs[i - 1]) < 0) {
      const double a = xs[i - 1];
      const double b = xs[i];
      double root = bisect(f, a, b, 1e-15);
      // Secant polish, kept only when it stays inside the bracket and helps.
      const double h = 1e-7 * std::max(std::abs(root), 1e-300);
      const double slope = (f(root + h) - f(root - h)) / (2.0 * h);
      if (slope != 0.0 && std::isfinite(slope)) {
        const double next = root - f(root) / slope;
        if (next >= a && next <= b && std::abs(f(next)) < std::abs(f(root))) root = next;
      }
      return root;
    }
  }
  if (fs.front() == 0.0) return xs.front();
  return std::nullopt;
}

Extrapolated richardson(std::span<const double> values, std::span<const int> exponents) {
  if (values.size() <= exponents.size()) {
    throw DomainError("richardson: need more samples than elimination levels");
  }
  std::vector<double> prev(values.begin(), values.end());
  std::vector<double> level = prev;
  for (const int p : exponents) {
    const double factor = std::ldexp(1.0, p);
    prev = level;
    level.resize(prev.size() - 1);
    for (std::size_t i = 0; i + 1 < prev.size(); ++i) {
      level[i] = (factor * prev[i + 1] - prev[i]) / (factor - 1.0);
    }
  }
  const double value = level.back();
  const double error = exponents.empty() ? 0.0 : std::abs(value - prev.back());
  return {value, error};
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 3 || y_.size() != n) {
    throw DomainError("MonotoneCubic: need at least 3 samples with matching sizes");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) throw DomainError("MonotoneCubic: abscissae must increase strictly");
  }
  std::vector<double> h(n - 1);
  std::vector<double> delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    delta[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  slope_.assign(n, 0.0);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0) continue;
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    slope_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
  }
  // One-sided three-point end slopes, limited to keep monotonicity.
  const auto end_slope = [](double h0, double h1, double d0, double d1) {
    double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (sign(d) != sign(d0)) {
      d = 0.0;
    } else if (sign(d0) != sign(d1) && std::abs(d) > 3.0 * std::abs(d0)) {
      d = 3.0 * d0;
    }
    return d;
  };
  slope_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  slope_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

std::size_t MonotoneCubic::segment(double x) const {
  if (!contains(x)) {
    throw DomainError("MonotoneCubic: " + std::to_string(x) + " outside " +
                      bracket_text(x_.front(), x_.back()));
  }
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const auto idx = static_cast<std::size_t>(std::distance(x_.begin(), it));
  return std::min(idx == 0 ? 0 : idx - 1, x_.size() - 2);
}

double MonotoneCubic::value(double x) const {
  const std::size_t k = segment(x);
  const double h = x_[k + 1] - x_[k];
  const double t = (x - x_[k]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2.0 * t3 - 3.0 * t2 + 1.0) * y_[k] + (t3 - 2.0 * t2 + t) * h * slope_[k] +
         (-2.0 * t3 + 3.0 * t2) * y_[k + 1] + (t3 - t2) * h * slope_[k + 1];
}

double MonotoneCubic::derivative(double x) const {
  const std::size_t k = segment(x);
  const double h = x_[k + 1] - x_[k];
  const double t = (x - x_[k]) / h;
  const double t2 = t * t;
  return ((6.0 * t2 - 6.0 * t) * y_[k] + (-6.0 * t2 + 6.0 * t) * y_[k + 1]) / h +
         (3.0 * t2 - 4.0 * t + 1.0) * slope_[k] + (3.0 * t2 - 2.0 * t) * slope_[k + 1];
}

double MonotoneCubic::second_derivative(double x) const {
  const std::size_t k = segment(x);
  const double h = x_[k + 1] - x_[k];
  const double t = (x - x_[k]) / h;
  return ((12.0 * t - 6.0) * (y_[k] - y_[k + 1]) / h + (6.0 * t - 4.0) * slope_[k] +
          (6.0 * t - 2.0) * slope_[k + 1]) /
         h;
}

double central_derivative(const ScalarFn& f, double x, double h) {
  return (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h);
}

}  // namespace alh::numerics
