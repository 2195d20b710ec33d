#include "alh/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "alh/errors.hpp"

namespace alh {

namespace {

const double kCriticalMass = -1.0 / (3.0 * std::sqrt(3.0));

// phi may dip a few ulps below zero right at a horizon.
double clamp_phi(const RadialPotential& p, double r) {
  const double phi = p.phi(r);
  const double slack = 1e-14 * std::max(1.0, r * r);
  if (phi < -slack) {
    throw DomainError("phi(" + std::to_string(r) + ") = " + std::to_string(phi) +
                      " < 0: radius lies inside the horizon");
  }
  return phi < 0.0 ? 0.0 : phi;
}

}  // namespace

std::optional<HorizonRoot> largest_zero(Curvature k, double m) {
  if (!std::isfinite(m)) throw DomainError("largest_zero: mass must be finite");
  const auto root = numerics::largest_positive_cubic_root(value(k), -2.0 * m);
  if (!root) return std::nullopt;
  return HorizonRoot{root->r, root->double_root};
}

double mass_from_horizon(Curvature k, double r) { return 0.5 * (r * r * r + value(k) * r); }

double minimum_mass(Curvature k) { return k == Curvature::hyperbolic ? kCriticalMass : 0.0; }

KottlerSpace kottler_build(Curvature k, double m) {
  const double m_min = minimum_mass(k);
  if (!std::isfinite(m) || m < m_min - 1e-15 * std::abs(m_min)) {
    throw DomainError("kottler_build: mass " + std::to_string(m) + " not admissible for k = " +
                      std::to_string(static_cast<int>(k)) + "; admissible interval is [" +
                      std::to_string(m_min) + ", inf)");
  }
  const auto root = largest_zero(k, m);
  KottlerSpace space{k, m, 0.0, 0.0, false, RadialPotential::kottler(k, m)};
  if (!root) {
    // k = 0 or +1 with m = 0: no positive horizon.
    space.critical = k == Curvature::flat;
    return space;
  }
  space.horizon_radius = root->r;
  if (root->double_root) {
    space.critical = true;
    return space;
  }
  space.surface_gravity = (3.0 * root->r * root->r + value(k)) / (2.0 * root->r);
  return space;
}

double scalar_curvature_excess(const RadialPotential& p, double r) {
  return -2.0 * p.ddeviation(r) / r - 2.0 * p.deviation(r) / (r * r);
}

double scalar_curvature(const RadialPotential& p, double r) {
  return -6.0 + scalar_curvature_excess(p, r);
}

RicciComponents ricci_components(const RadialPotential& p, double r) {
  const double dd = p.ddeviation(r);
  return {-2.0 - dd / r, -(2.0 + 0.5 * dd / r + p.deviation(r) / (r * r))};
}

double mean_curvature_sphere(const RadialPotential& p, double r) {
  return 2.0 * std::sqrt(clamp_phi(p, r)) / r;
}

void require_compatible(const ConformalInfinity& inf, const RadialPotential& p) {
  if (inf.curvature() != p.curvature()) {
    throw DomainError("genus " + std::to_string(inf.genus()) + " requires k = " +
                      std::to_string(static_cast<int>(inf.curvature())) +
                      " but the potential has k = " +
                      std::to_string(static_cast<int>(p.curvature())));
  }
}

double hawking_mass_sphere(const ConformalInfinity& inf, const RadialPotential& p, double r) {
  require_compatible(inf, p);
  const double c = inf.c();
  // phi - r^2 = k + deviation; keeps precision at large r.
  const double excess = p.k() + p.deviation(r);
  clamp_phi(p, r);
  return 0.5 * std::sqrt(c) * r * (1.0 - inf.genus() - c * excess);
}

StaticResidual static_residual(const RadialPotential& p, double r) {
  const double phi = p.phi(r);
  if (!(phi > 1e-14 * std::max(1.0, r * r))) {
    throw DomainError("static_residual: V = sqrt(phi) is not smooth at r = " + std::to_string(r));
  }
  const double dd = p.ddeviation(r);
  const double d2d = p.d2deviation(r);
  if (!std::isfinite(dd) || !std::isfinite(d2d)) {
    throw NumericalError("static_residual: derivative evaluation failed at r = " +
                         std::to_string(r));
  }
  // phi = r^2 + k + dev; the r^2 + k part solves both equations exactly.
  const double laplace = std::sqrt(phi) * std::abs(dd / r + 0.5 * d2d);
  const double radial = std::abs(dd / r + 0.5 * d2d);
  const double tangential = std::abs(dd / r + p.deviation(r) / (r * r));
  return {laplace, std::max(radial, tangential)};
}

CriticalData critical_data(Curvature k) {
  switch (k) {
    case Curvature::hyperbolic:
      return {kCriticalMass,
              "double root r = 1/sqrt(3); two-ended metric on (0, inf) x Sigma_hat, one end "
              "asymptotically locally hyperbolic, the other asymptotic to the cylinder "
              "dt^2 + g_hat/3"};
    case Curvature::flat:
      return {0.0, "largest zero at r = 0; the metric becomes dt^2 + e^{2t} g_hat"};
    case Curvature::spherical:
      return {0.0, "no horizon; the completed metric is hyperbolic space"};
  }
  return {0.0, ""};
}

}  // namespace alh
