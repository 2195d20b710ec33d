#pragma once

#include <optional>
#include <string>

#include "alh/potential.hpp"

namespace alh {

struct HorizonRoot {
  double r;
  bool double_root;
};

/// Largest positive zero of r^2 + k - 2m/r, or nullopt when there is none.
std::optional<HorizonRoot> largest_zero(Curvature k, double m);

/// Mass whose Kottler potential vanishes at r: (r^3 + k r) / 2.
double mass_from_horizon(Curvature k, double r);

/// Smallest admissible Kottler mass for curvature k.
double minimum_mass(Curvature k);

/// Exact Kottler reference space. For critical or horizonless inputs
/// horizon_radius is the (double or absent) root and surface_gravity is 0.
struct KottlerSpace {
  Curvature curvature;
  double mass;
  double horizon_radius;
  double surface_gravity;
  bool critical;
  RadialPotential potential;
};

KottlerSpace kottler_build(Curvature k, double m);

/// Scalar curvature R = -2 phi'/r + 2 (k - phi)/r^2.
double scalar_curvature(const RadialPotential& p, double r);
/// R + 6, computed from the deviation so it stays accurate at large r.
double scalar_curvature_excess(const RadialPotential& p, double r);

/// Ricci curvature in the orthonormal frame adapted to the spheres.
struct RicciComponents {
  double radial;      // Ric(n, n) = -phi'/r
  double tangential;  // Ric(e, e) = -(phi'/(2r) + (phi - k)/r^2)
};
RicciComponents ricci_components(const RadialPotential& p, double r);

/// Outward mean curvature 2 sqrt(phi)/r of the coordinate sphere {r} x Sigma_hat.
double mean_curvature_sphere(const RadialPotential& p, double r);

/// Hawking mass of a coordinate sphere,
///   (sqrt(c) r / 2) (1 - genus - c (phi - r^2)).
double hawking_mass_sphere(const ConformalInfinity& inf, const RadialPotential& p, double r);

/// Residuals of the static equations Delta V = 3V and Ric = Hess V / V - 3g for
/// V = sqrt(phi), in the orthonormal frame.
struct StaticResidual {
  double laplace_residual;
  double ricci_residual;
  double max() const { return laplace_residual > ricci_residual ? laplace_residual : ricci_residual; }
};
StaticResidual static_residual(const RadialPotential& p, double r);

struct CriticalData {
  double critical_mass;
  std::string description;
};
CriticalData critical_data(Curvature k);

/// Throws unless the conformal infinity and the potential share the curvature sign.
void require_compatible(const ConformalInfinity& inf, const RadialPotential& p);

}  // namespace alh
