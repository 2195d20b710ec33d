#include "alh/asymptotics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "alh/errors.hpp"
#include "alh/geometry.hpp"
#include "alh/numerics.hpp"

namespace alh {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

SubstitutionMap::SubstitutionMap(Curvature k, std::vector<double> r, std::vector<double> offset,
                                 std::vector<double> offset_slope)
    : curvature_(k), r_(std::move(r)), offset_(std::move(offset)), slope_(std::move(offset_slope)) {
  if (r_.size() < 2 || offset_.size() != r_.size() || slope_.size() != r_.size()) {
    throw DomainError("SubstitutionMap: inconsistent table sizes");
  }
}

std::size_t SubstitutionMap::segment(double r) const {
  if (!contains(r)) {
    throw DomainError("substitution map: r = " + num(r) + " outside [" + num(r_.front()) + ", " +
                      num(r_.back()) + "]");
  }
  const auto it = std::upper_bound(r_.begin(), r_.end(), r);
  const auto idx = static_cast<std::size_t>(std::distance(r_.begin(), it));
  return std::min(idx == 0 ? 0 : idx - 1, r_.size() - 2);
}

double SubstitutionMap::offset(double r) const {
  const std::size_t k = segment(r);
  const double h = r_[k + 1] - r_[k];
  const double t = (r - r_[k]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2.0 * t3 - 3.0 * t2 + 1.0) * offset_[k] + (t3 - 2.0 * t2 + t) * h * slope_[k] +
         (-2.0 * t3 + 3.0 * t2) * offset_[k + 1] + (t3 - t2) * h * slope_[k + 1];
}

double SubstitutionMap::drho_dr(double r) const {
  const std::size_t k = segment(r);
  const double h = r_[k + 1] - r_[k];
  const double t = (r - r_[k]) / h;
  const double t2 = t * t;
  const double doffset = (6.0 * t2 - 6.0 * t) * (offset_[k] - offset_[k + 1]) / h +
                         (3.0 * t2 - 4.0 * t + 1.0) * slope_[k] + (3.0 * t2 - 2.0 * t) * slope_[k + 1];
  return 1.0 - doffset;
}

double SubstitutionMap::r_of_rho(double rho_target) const {
  const double lo_rho = rho_start();
  const double hi_rho = rho_end();
  const double slack = 1e-13 * std::max(1.0, std::abs(hi_rho));
  if (rho_target < lo_rho - slack || rho_target > hi_rho + slack) {
    throw DomainError("substitution map: rho = " + num(rho_target) + " outside [" + num(lo_rho) +
                      ", " + num(hi_rho) + "]");
  }
  double lo = r_.front();
  double hi = r_.back();
  if (rho_target <= lo_rho) return lo;
  if (rho_target >= hi_rho) return hi;
  double r = std::clamp(rho_target + offset(std::clamp(rho_target, lo, hi)), lo, hi);
  for (int i = 0; i < 100; ++i) {
    const double f = rho(r) - rho_target;
    if (f == 0.0) return r;
    if (f > 0.0) {
      hi = std::min(hi, r);
    } else {
      lo = std::max(lo, r);
    }
    double next = r - f / drho_dr(r);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - r) <= 4.0 * std::numeric_limits<double>::epsilon() * r) return next;
    r = next;
  }
  throw NumericalError("substitution map: inverse did not converge for rho = " + num(rho_target));
}

double SubstitutionMap::trace_h(double r) const {
  const double d = offset(r);
  const double rho_r = r - d;
  // r^2 - rho^2 = delta (2r - delta)
  return 2.0 * rho_r * d * (2.0 * r - d);
}

SubstitutionMap build_substitution(const RadialPotential& p, double r_start, double r_end,
                                   SubstitutionOptions options) {
  if (!(r_start > 0.0) || !(r_end > r_start)) {
    throw DomainError("build_substitution: need 0 < r_start < r_end");
  }
  if (r_end / r_start < 1e3 * (1.0 - 1e-12)) {
    throw DomainError("build_substitution: r_end/r_start = " + num(r_end / r_start) +
                      " < 1e3; asymptotics unreliable");
  }
  if (options.steps_per_decade < 16) {
    throw DomainError("build_substitution: steps_per_decade must be at least 16");
  }
  if (!p.contains(r_start) || !p.contains(r_end) || !(p.phi(r_start) > 0.0)) {
    throw DomainError("build_substitution: phi must be positive on [" + num(r_start) + ", " +
                      num(r_end) + "]");
  }
  const double k = p.k();
  const double decades = std::log10(r_end / r_start);
  const auto steps = static_cast<std::size_t>(std::ceil(decades * options.steps_per_decade));
  const double x_end = std::log(r_end);
  const double x_start = std::log(r_start);
  const double dx = (x_end - x_start) / static_cast<double>(steps);

  // d delta / dr = 1 - sqrt(1 + q), q = (k + rho^2 - phi)/phi, rho = r - delta.
  const auto slope = [&](double r, double delta) {
    const double phi = p.phi(r);
    if (!(phi > 0.0)) {
      throw NumericalError("build_substitution: phi(" + num(r) + ") <= 0 inside the map");
    }
    const double rho = r - delta;
    if (!(k + rho * rho > 0.0)) {
      throw NumericalError("build_substitution: k + rho^2 <= 0 at r = " + num(r) +
                           "; the hyperbolic chart ends before r_start");
    }
    const double q = (-p.deviation(r) - 2.0 * r * delta + delta * delta) / phi;
    return -q / (1.0 + std::sqrt(1.0 + q));
  };
  const auto rhs_x = [&](double x, double delta) {
    const double r = std::exp(x);
    return r * slope(r, delta);
  };

  std::vector<double> r(steps + 1);
  std::vector<double> offset(steps + 1);
  std::vector<double> slopes(steps + 1);
  r[steps] = r_end;
  offset[steps] = -p.deviation(r_end) / (6.0 * r_end);
  slopes[steps] = slope(r_end, offset[steps]);
  for (std::size_t i = steps; i > 0; --i) {
    const double x = x_start + dx * static_cast<double>(i);
    const double x_next = i - 1 == 0 ? x_start : x_start + dx * static_cast<double>(i - 1);
    offset[i - 1] = numerics::rk4_step(rhs_x, x, offset[i], x_next - x);
    r[i - 1] = i - 1 == 0 ? r_start : std::exp(x_next);
    slopes[i - 1] = slope(r[i - 1], offset[i - 1]);
    if (!std::isfinite(offset[i - 1])) {
      throw NumericalError("build_substitution: ODE blew up at r = " + num(r[i - 1]));
    }
  }
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (!(r[i] - offset[i] > r[i - 1] - offset[i - 1])) {
      throw NumericalError("build_substitution: rho not strictly increasing near r = " + num(r[i]));
    }
  }
  const double ratio = (r_end - offset.back()) / r_end;
  if (std::abs(ratio - 1.0) > 1e-6) {
    throw NumericalError("build_substitution: rho/r = " + num(ratio) +
                         " at r_end; choose a larger r_end");
  }
  return SubstitutionMap(p.curvature(), std::move(r), std::move(offset), std::move(slopes));
}

MassAspectResult mass_aspect_extract(const RadialPotential& /*p*/, const SubstitutionMap& map,
                                     ExtractionOptions options) {
  if (map.r_end() / map.r_start() < 1e3 * (1.0 - 1e-12)) {
    throw DomainError("mass_aspect_extract: map must cover at least three decades");
  }
  // Stay an octave inside the outer end, where the matching condition was imposed.
  const double rho_top = map.rho_end() / 8.0;
  std::array<double, 4> values{};
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double rho_target = rho_top / std::ldexp(1.0, static_cast<int>(values.size() - 1 - i));
    const double r = map.r_of_rho(rho_target);
    const double d = map.offset(r);
    const double rho = r - d;
    values[i] = 1.5 * rho * d * (2.0 * r - d);
  }
  static constexpr std::array<int, 3> kExponents{1, 2, 3};
  const auto ex = numerics::richardson(values, kExponents);
  if (!(ex.error <= options.tolerance)) {
    throw ExtractionError("mass_aspect_extract: Richardson levels disagree by " + num(ex.error) +
                          " > " + num(options.tolerance));
  }
  return {ex.value, ex.value, ex.value, ex.error};
}

ExpansionFit expansion_fit(std::span<const ExpansionSample> samples) {
  if (samples.size() < 4) {
    throw ExtractionError("expansion_fit: need at least 4 samples, got " +
                          std::to_string(samples.size()));
  }
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double ratio = samples[i].rho / samples[i - 1].rho;
    if (!(samples[i - 1].rho > 0.0) || std::abs(ratio - 2.0) > 1e-9) {
      throw ExtractionError("expansion_fit: samples must be dyadic in rho (ratio " + num(ratio) +
                            " at index " + std::to_string(i) + ")");
    }
  }
  const double rho_min = samples.front().rho;
  const double rho_max = samples.back().rho;
  if (rho_max / rho_min < 100.0 * (1.0 - 1e-12)) {
    throw ExtractionError("expansion_fit: samples span " + num(rho_max / rho_min) +
                          " < 100; ill-conditioned");
  }
  const auto outer = samples.subspan(samples.size() - 4);
  double v_max = 0.0;
  for (const auto& s : outer) v_max = std::max(v_max, std::abs(s.value));
  // Round-off in a value, amplified by rho when a2 is read off.
  const double roundoff_a2 = 64.0 * std::numeric_limits<double>::epsilon() * v_max * rho_max;

  std::array<double, 4> work{};
  static constexpr std::array<int, 3> kQuadratic{2, 3, 4};
  static constexpr std::array<int, 3> kLinear{1, 2, 3};

  for (std::size_t i = 0; i < 4; ++i) work[i] = outer[i].value / (outer[i].rho * outer[i].rho);
  const auto a0 = numerics::richardson(work, kQuadratic);

  for (std::size_t i = 0; i < 4; ++i) {
    work[i] = outer[i].value - a0.value * outer[i].rho * outer[i].rho;
  }
  const auto a1 = numerics::richardson(work, kLinear);

  for (std::size_t i = 0; i < 4; ++i) {
    work[i] = outer[i].rho *
              (outer[i].value - a0.value * outer[i].rho * outer[i].rho - a1.value);
  }
  const auto a2 = numerics::richardson(work, kLinear);

  const double propagated =
      a0.error * rho_max * rho_max * rho_max + a1.error * rho_max + a2.error + roundoff_a2;
  if (roundoff_a2 > 1e-2 * std::max(1.0, std::abs(a2.value))) {
    throw ExtractionError("expansion_fit: ill-conditioned, round-off bound on a2 is " +
                          num(roundoff_a2) + " (max |value| " + num(v_max) + ", rho_max " +
                          num(rho_max) + ")");
  }
  return {a0.value, a1.value, a2.value, propagated};
}

std::vector<ExpansionSample> sample_dyadic(const SubstitutionMap& map, double rho_lo, int count,
                                           const std::function<double(double)>& f_of_r) {
  std::vector<ExpansionSample> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    const double rho = rho_lo * std::ldexp(1.0, i);
    const double r = map.r_of_rho(rho);
    out.push_back({rho, f_of_r(r)});
  }
  return out;
}

double conformal_area(const ConformalInfinity& inf, const RadialPotential& p,
                      const SubstitutionMap& map, double r) {
  require_compatible(inf, p);
  if (!map.contains(r)) throw DomainError("conformal_area: r = " + num(r) + " outside the map");
  const double ratio = r / map.rho(r);
  return inf.area() * ratio * ratio;
}

double conformal_mean_curvature_residual(const RadialPotential& p, const SubstitutionMap& map,
                                         double r) {
  const double h = 1e-3 * r;
  if (!map.contains(r - 2.0 * h) || !map.contains(r + 2.0 * h)) {
    throw NumericalError("conformal_mean_curvature_residual: stencil around r = " + num(r) +
                         " leaves the map");
  }
  const double mean_curvature = mean_curvature_sphere(p, r);
  const double rho = map.rho(r);
  const double s = 1.0 / rho;
  // g~ = psi du^2 + chi g_hat with psi = 1/(rho^2 phi), chi = u^2/rho^2.
  const double inv_sqrt_psi = rho * std::sqrt(p.phi(r));
  const auto chi = [&](double u) {
    const double q = u / map.rho(u);
    return q * q;
  };
  const auto s_of = [&](double u) { return 1.0 / map.rho(u); };
  const double dchi = numerics::central_derivative(chi, r, h);
  const double ds = numerics::central_derivative(s_of, r, h);
  const double tilde_h = dchi / chi(r) * inv_sqrt_psi;
  const double nu_s = -ds * inv_sqrt_psi;
  return std::abs(mean_curvature - (s * tilde_h + 2.0 * nu_s));
}

}  // namespace alh
