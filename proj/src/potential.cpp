#include "alh/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "alh/errors.hpp"

namespace alh {

Curvature curvature_from_int(int k) {
  switch (k) {
    case -1: return Curvature::hyperbolic;
    case 0: return Curvature::flat;
    case 1: return Curvature::spherical;
    default: throw DomainError("curvature sign must be -1, 0 or 1, got " + std::to_string(k));
  }
}

std::string_view to_string(Curvature k) {
  switch (k) {
    case Curvature::hyperbolic: return "hyperbolic";
    case Curvature::flat: return "flat";
    case Curvature::spherical: return "spherical";
  }
  return "?";
}

ConformalInfinity ConformalInfinity::of_genus(int genus) {
  if (genus < 0) throw DomainError("genus must be nonnegative, got " + std::to_string(genus));
  const double c = std::max(1.0, static_cast<double>(genus - 1));
  const Curvature k = genus == 0 ? Curvature::spherical
                      : genus == 1 ? Curvature::flat
                                   : Curvature::hyperbolic;
  // Gauss-Bonnet for k = -1; the flat torus is normalized to 4 pi.
  return ConformalInfinity(genus, k, 4.0 * std::numbers::pi * c, c);
}

std::string_view to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::kottler: return "kottler";
    case PotentialKind::perturbed_kottler: return "perturbed-kottler";
    case PotentialKind::tabulated: return "tabulated";
  }
  return "?";
}

RadialPotential::RadialPotential(Curvature k, std::variant<Analytic, Tabulated> data,
                                 PotentialKind kind)
    : curvature_(k), data_(std::move(data)), kind_(kind) {}

RadialPotential RadialPotential::kottler(Curvature k, double mass) {
  if (!std::isfinite(mass)) throw DomainError("kottler: mass must be finite");
  RadialPotential p(k, Analytic{mass, 0.0}, PotentialKind::kottler);
  if (const auto root = numerics::largest_positive_cubic_root(value(k), -2.0 * mass)) {
    p.r_min_ = root->r;
  }
  return p;
}

RadialPotential RadialPotential::perturbed_kottler(Curvature k, double mass, double epsilon) {
  if (!std::isfinite(mass) || !std::isfinite(epsilon)) {
    throw DomainError("perturbed_kottler: parameters must be finite");
  }
  RadialPotential p(k, Analytic{mass, epsilon}, PotentialKind::perturbed_kottler);
  // r^2 phi is the quartic r^4 + k r^2 - 2 m r + eps; its roots are bounded by
  // the Cauchy radius.
  const double kv = value(k);
  const double bound = 1.0 + std::max({std::abs(kv), 2.0 * std::abs(mass), std::abs(epsilon)});
  const auto quartic = [=](double r) { return ((r * r + kv) * r - 2.0 * mass) * r + epsilon; };
  if (const auto root = numerics::rightmost_zero_scan(quartic, 1e-9 * bound, bound, 4096)) {
    p.r_min_ = *root;
  }
  return p;
}

RadialPotential RadialPotential::tabulated(Curvature k, std::vector<double> r,
                                           std::vector<double> phi) {
  if (r.empty() || r.front() <= 0.0) throw DomainError("tabulated: radii must be positive");
  for (double v : phi) {
    if (!(v >= 0.0)) throw DomainError("tabulated: phi samples must be nonnegative");
  }
  const double r0 = r.front();
  auto spline = std::make_shared<const numerics::MonotoneCubic>(std::move(r), std::move(phi));
  RadialPotential p(k, Tabulated{std::move(spline)}, PotentialKind::tabulated);
  p.r_min_ = r0;
  return p;
}

PotentialKind RadialPotential::kind() const { return kind_; }

double RadialPotential::mass() const {
  if (const auto* a = std::get_if<Analytic>(&data_)) return a->mass;
  throw DomainError("mass parameter is undefined for a tabulated potential");
}

double RadialPotential::epsilon() const {
  if (const auto* a = std::get_if<Analytic>(&data_)) return a->epsilon;
  throw DomainError("epsilon parameter is undefined for a tabulated potential");
}

double RadialPotential::domain_end() const {
  if (const auto* t = std::get_if<Tabulated>(&data_)) return t->spline->x_max();
  return std::numeric_limits<double>::infinity();
}

bool RadialPotential::contains(double r) const {
  const double slack = 1e-14 * std::max(1.0, r_min_);
  return r > 0.0 && r >= r_min_ - slack && r <= domain_end();
}

void RadialPotential::require_in_domain(double r) const {
  if (!contains(r)) {
    throw DomainError("radius " + std::to_string(r) + " outside potential domain [" +
                      std::to_string(r_min_) + ", " + std::to_string(domain_end()) + "]");
  }
}

double RadialPotential::phi(double r) const {
  require_in_domain(r);
  if (const auto* t = std::get_if<Tabulated>(&data_)) {
    return t->spline->value(std::clamp(r, t->spline->x_min(), t->spline->x_max()));
  }
  return r * r + k() + deviation(r);
}

double RadialPotential::dphi(double r) const {
  require_in_domain(r);
  if (const auto* t = std::get_if<Tabulated>(&data_)) {
    return t->spline->derivative(std::clamp(r, t->spline->x_min(), t->spline->x_max()));
  }
  const auto& a = std::get<Analytic>(data_);
  return 2.0 * r + 2.0 * a.mass / (r * r) - 2.0 * a.epsilon / (r * r * r);
}

double RadialPotential::d2phi(double r) const {
  require_in_domain(r);
  if (const auto* t = std::get_if<Tabulated>(&data_)) {
    return t->spline->second_derivative(std::clamp(r, t->spline->x_min(), t->spline->x_max()));
  }
  const auto& a = std::get<Analytic>(data_);
  const double r2 = r * r;
  return 2.0 - 4.0 * a.mass / (r2 * r) + 6.0 * a.epsilon / (r2 * r2);
}

double RadialPotential::deviation(double r) const {
  if (const auto* a = std::get_if<Analytic>(&data_)) {
    require_in_domain(r);
    return -2.0 * a->mass / r + a->epsilon / (r * r);
  }
  return phi(r) - r * r - k();
}

double RadialPotential::ddeviation(double r) const {
  if (const auto* a = std::get_if<Analytic>(&data_)) {
    require_in_domain(r);
    return 2.0 * a->mass / (r * r) - 2.0 * a->epsilon / (r * r * r);
  }
  return dphi(r) - 2.0 * r;
}

double RadialPotential::d2deviation(double r) const {
  if (const auto* a = std::get_if<Analytic>(&data_)) {
    require_in_domain(r);
    const double r2 = r * r;
    return -4.0 * a->mass / (r2 * r) + 6.0 * a->epsilon / (r2 * r2);
  }
  return d2phi(r) - 2.0;
}

}  // namespace alh
