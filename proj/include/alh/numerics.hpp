#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace alh::numerics {

using ScalarFn = std::function<double(double)>;

/// Bisection on [lo, hi] where f(lo) and f(hi) have opposite signs (or one
/// vanishes). Stops when the bracket is below rel_tol * max(1, |x|).
double bisect(const ScalarFn& f, double lo, double hi, double rel_tol = 1e-14,
              int max_iter = 400);

struct PositiveRoot {
  double r;
  bool double_root;
};

/// Largest positive root of the depressed cubic r^3 + a1 r + a0.
/// Returns nullopt when no root r > 0 exists. Tangential (double) roots are
/// reported with double_root = true.
std::optional<PositiveRoot> largest_positive_cubic_root(double a1, double a0);

/// Rightmost zero of f on (lo, hi] found by scanning a logarithmic grid for
/// sign changes, refining by bisection and polishing with one secant-Newton
/// step. Returns nullopt when f has no sign change on the grid.
std::optional<double> rightmost_zero_scan(const ScalarFn& f, double lo, double hi,
                                          int grid_points = 2048);

/// One classical fourth-order Runge-Kutta step for y' = f(t, y).
template <class F>
double rk4_step(F&& f, double t, double y, double h) {
  const double k1 = f(t, y);
  const double k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
  const double k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
  const double k4 = f(t + h, y + h * k3);
  return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct Extrapolated {
  double value;
  double error;  // |last level - previous level|
};

/// Richardson extrapolation of samples taken at step sizes h, h/2, h/4, ...
/// (values[i] at h / 2^i). exponents[k] is the power of h removed at level k+1;
/// values.size() must exceed exponents.size().
Extrapolated richardson(std::span<const double> values, std::span<const int> exponents);

/// Piecewise cubic Hermite interpolant with Fritsch-Carlson slope limiting
/// (monotone where the data is monotone). Values, first and second derivatives
/// all come from the same cubic on each interval.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double value(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;

  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  bool contains(double x) const { return x >= x_.front() && x <= x_.back(); }

 private:
  std::size_t segment(double x) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> slope_;
};

/// Five-point centered first derivative.
double central_derivative(const ScalarFn& f, double x, double h);

}  // namespace alh::numerics
