#include "alh/static_compare.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "alh/asymptotics.hpp"
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

struct OmegaPoint {
  double r;
  double sqrt_omega;
};

OmegaPoint omega_point(const ReferencePotential& ref, double V) {
  const double r = r_of_V(ref, V);
  return {r, r + ref.m0 / (r * r)};
}

}  // namespace

KappaMasses kappa_to_mass(Curvature k, double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw DomainError("kappa_to_mass: surface gravity must be positive, got " + num(kappa));
  }
  const double kv = value(k);
  // kappa = (3 r^2 + k)/(2r)  <=>  3 r^2 - 2 kappa r + k = 0
  const double disc = kappa * kappa - 3.0 * kv;
  if (k != Curvature::spherical) {
    const double r = (kappa + std::sqrt(disc)) / 3.0;
    return {{mass_from_horizon(k, r)}, true, ""};
  }
  if (disc < 0.0) {
    throw DomainError("kappa_to_mass: for k = +1 the surface gravity is at least sqrt(3), got " +
                      num(kappa));
  }
  const double s = std::sqrt(disc);
  return {{mass_from_horizon(k, (kappa + s) / 3.0), mass_from_horizon(k, (kappa - s) / 3.0)},
          false,
          "k = +1: kappa(r_m) is not monotone, both horizon branches share this surface gravity"};
}

double mass_to_kappa(Curvature k, double m) { return kottler_build(k, m).surface_gravity; }

ReferencePotential make_reference(Curvature k, double m0) {
  const KottlerSpace space = kottler_build(k, m0);
  if (!(space.horizon_radius > 0.0)) {
    throw DomainError("reference potential needs a horizon; k = " +
                      std::to_string(static_cast<int>(k)) + ", m0 = " + num(m0) + " has none");
  }
  return {k, m0, space.surface_gravity, space.horizon_radius};
}

double r_of_V(const ReferencePotential& ref, double V) {
  if (!(V >= 0.0)) throw DomainError("r_of_V: V must be nonnegative, got " + num(V));
  if (V == 0.0) return ref.horizon_radius;
  const auto root = numerics::largest_positive_cubic_root(value(ref.curvature) - V * V, -2.0 * ref.m0);
  if (!root) throw NumericalError("r_of_V: no positive root for V = " + num(V));
  return root->r;
}

double omega_eval(const ReferencePotential& ref, double V) {
  const double s = omega_point(ref, V).sqrt_omega;
  return s * s;
}

OmegaDerivatives omega_derivatives(const ReferencePotential& ref, double V) {
  if (!(V > 0.0)) throw DomainError("omega_derivatives: V must be positive, got " + num(V));
  const auto [r, sqrt_omega] = omega_point(ref, V);
  const double r3 = r * r * r;
  const double d1 = 2.0 * V * (1.0 - 2.0 * ref.m0 / r3);
  const double d2 = d1 / V + 12.0 * V * V * ref.m0 / (sqrt_omega * r3 * r);
  return {d1, d2};
}

AlphaCoefficient alpha_coefficient(const ReferencePotential& ref, double V) {
  if (!(V > 0.0)) throw DomainError("alpha_coefficient: V must be positive, got " + num(V));
  const auto [r, sqrt_omega] = omega_point(ref, V);
  const double omega = sqrt_omega * sqrt_omega;
  const double d1 = omega_derivatives(ref, V).d1;
  const double d2_ode =
      (0.75 * d1 * d1 - 3.0 * V * d1 + 9.0 * V * V + omega * d1 / V - 3.0 * d1 * V) / omega;
  const AlphaCoefficient out{d1 / V - d2_ode,
                             -12.0 * V * V * ref.m0 / (sqrt_omega * r * r * r * r)};
  if (std::abs(out.difference_form - out.closed_form) > 1e-9) {
    throw NumericalError("alpha_coefficient: difference form " + num(out.difference_form) +
                         " and closed form " + num(out.closed_form) + " disagree at V = " + num(V));
  }
  return out;
}

double omega_ode_residual(const ReferencePotential& ref, double V) {
  const double omega = omega_eval(ref, V);
  const auto [d1, d2] = omega_derivatives(ref, V);
  const double lhs = d2 * omega + 3.0 * d1 * V;
  const double rhs = 0.75 * d1 * d1 - 3.0 * V * d1 + 9.0 * V * V + omega / V * d1;
  return std::abs(lhs - rhs);
}

double potential_derivative_residual(const ReferencePotential& ref, double r) {
  if (!(r > ref.horizon_radius)) {
    throw DomainError("potential_derivative_residual: r = " + num(r) +
                      " is not outside the horizon r_m = " + num(ref.horizon_radius));
  }
  const double V = std::sqrt(r * r + value(ref.curvature) - 2.0 * ref.m0 / r);
  const double dV_dr = (r + ref.m0 / (r * r)) / V;
  return std::abs(dV_dr - std::sqrt(omega_eval(ref, V)) / V);
}

double boundary_gauss_curvature(const ReferencePotential& ref) {
  if (!(ref.kappa > 0.0)) {
    throw DomainError("boundary_gauss_curvature: critical reference (kappa = 0) has no "
                      "nondegenerate horizon");
  }
  // omega'' -> omega'/V -> 2 (1 - 2 m0 / r_m^3) as V -> 0.
  const double r = ref.horizon_radius;
  return -(1.0 - 2.0 * ref.m0 / (r * r * r));
}

ComparisonReport cs_compare(const RadialPotential& data, int genus, CompareOptions options) {
  if (data.curvature() != Curvature::hyperbolic) {
    throw DomainError("cs_compare: the comparison is stated for k = -1");
  }
  if (genus < 2) throw DomainError("cs_compare: genus must be at least 2, got " + std::to_string(genus));
  if (options.grid_points < 8) throw DomainError("cs_compare: grid_points must be at least 8");
  const ConformalInfinity inf = ConformalInfinity::of_genus(genus);
  const double r_h = data.domain_start();
  if (!(r_h > 0.0) || std::abs(data.phi(r_h)) > 1e-10 * std::max(1.0, r_h * r_h)) {
    throw DomainError("cs_compare: data has no horizon at the inner end of its domain");
  }

  const double r_far = std::min(1e3 * r_h, data.domain_end());
  const auto grid = [&](int i, double lo, double hi) {
    return lo * std::pow(hi / lo, static_cast<double>(i) / (options.grid_points - 1));
  };

  ComparisonReport rep{};
  rep.genus = genus;
  for (int i = 0; i < options.grid_points; ++i) {
    const double r = grid(i, r_h * (1.0 + 1e-2), r_far);
    rep.static_residual = std::max(rep.static_residual, static_residual(data, r).max());
  }
  if (!(rep.static_residual <= options.static_tolerance)) {
    throw NonStaticError("cs_compare: data is not static, residual " + num(rep.static_residual) +
                             " > " + num(options.static_tolerance),
                         rep.static_residual);
  }

  rep.kappa = 0.5 * data.dphi(r_h);
  if (!(rep.kappa > 0.0)) throw HypothesisError("cs_compare: degenerate horizon (kappa = 0)");
  if (rep.kappa > 1.0 + 1e-12) {
    throw HypothesisError("cs_compare: kappa = " + num(rep.kappa) +
                          " > 1, i.e. m0 > 0; the comparison needs 0 < kappa <= 1");
  }
  rep.m0 = kappa_to_mass(Curvature::hyperbolic, rep.kappa).masses.front();
  const ReferencePotential ref = make_reference(Curvature::hyperbolic, rep.m0);

  rep.sup_W_minus_W0 = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < options.grid_points; ++i) {
    const double r = grid(i, r_h * (1.0 + 1e-3), std::min(1e2 * r_h, r_far));
    const double dphi = data.dphi(r);
    const double w = 0.25 * dphi * dphi;
    const double w0 = omega_eval(ref, std::sqrt(data.phi(r)));
    rep.sup_W_minus_W0 = std::max(rep.sup_W_minus_W0, w - w0);
  }

  rep.boundary_K = value(data.curvature()) / (r_h * r_h);
  rep.reference_K = boundary_gauss_curvature(ref);

  const double r_start = 2.0 * (r_h + 1.0);
  const SubstitutionMap map = build_substitution(data, r_start, std::min(1e4 * r_start, data.domain_end()));
  rep.mu = mass_aspect_extract(data, map).mu;

  const double horizon_area = inf.area() * r_h * r_h;
  rep.frak_r = std::sqrt(horizon_area / (4.0 * std::numbers::pi * (genus - 1)));
  rep.r0 = ref.horizon_radius;
  rep.cubic_residual = std::abs(2.0 * rep.m0 + rep.r0 - rep.r0 * rep.r0 * rep.r0);

  const double tol = options.equality_tolerance;
  rep.w_le_w0 = rep.sup_W_minus_W0 <= tol;
  rep.k_ge_k0 = rep.boundary_K >= rep.reference_K - tol;
  rep.mu_le_m0 = rep.mu <= rep.m0 + options.mass_tolerance;
  rep.frak_r_ge_r0 = rep.frak_r >= rep.r0 - tol;
  rep.cubic_ok = rep.cubic_residual <= 1e-10;
  rep.r0_ge_inv_sqrt3 = rep.m0 > 0.0 || rep.r0 >= 1.0 / std::sqrt(3.0) - 1e-15;
  rep.all_equalities = std::abs(rep.sup_W_minus_W0) <= tol &&
                       std::abs(rep.boundary_K - rep.reference_K) <= tol &&
                       std::abs(rep.mu - rep.m0) <= options.mass_tolerance &&
                       std::abs(rep.frak_r - rep.r0) <= tol;
  return rep;
}

double static_flow_H_evolution_residual(const RadialPotential& p, double r, double static_tolerance) {
  const double phi = p.phi(r);
  if (phi < -1e-14 * std::max(1.0, r * r)) {
    throw DomainError("static_flow_H_evolution_residual: r = " + num(r) + " is inside the horizon");
  }
  if (phi <= 0.0) return 0.0;
  const double res = static_residual(p, r).max();
  if (!(res <= static_tolerance)) {
    throw NonStaticError("static_flow_H_evolution_residual: static residual " + num(res) + " at r = " +
                             num(r),
                         res);
  }
  double h = 1e-3 * r;
  const double room = r - p.domain_start();
  if (p.domain_start() > 0.0) h = std::min(h, 0.25 * room);
  if (std::isfinite(p.domain_end())) h = std::min(h, 0.25 * (p.domain_end() - r));
  if (!(h > 0.0)) throw NumericalError("static_flow_H_evolution_residual: no room for a stencil");
  // Normal speed V moves the coordinate radius at dr/dt = V sqrt(phi) = phi.
  const auto H_of = [&](double u) { return mean_curvature_sphere(p, u); };
  const double dH_dt = phi * numerics::central_derivative(H_of, r, h);
  const double H = mean_curvature_sphere(p, r);
  const double nu_V = 0.5 * p.dphi(r);  // sqrt(phi) dV/dr
  const double A2 = 2.0 * phi / (r * r);
  return std::abs(dH_dt - (H * nu_V - A2 * std::sqrt(phi)));
}

}  // namespace alh
