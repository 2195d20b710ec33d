#pragma once

#include <string>
#include <vector>

#include "alh/potential.hpp"

namespace alh {

/// Masses whose Kottler space has surface gravity kappa. One entry for
/// k in {-1, 0}; for k = +1 kappa(r_m) is not monotone and both branches are
/// returned with bijective = false.
struct KappaMasses {
  std::vector<double> masses;  // ordered by decreasing horizon radius
  bool bijective;
  std::string warning;
};

KappaMasses kappa_to_mass(Curvature k, double kappa);
/// Surface gravity of the Kottler space of mass m (0 when critical or horizonless).
double mass_to_kappa(Curvature k, double m);

/// Reference Kottler space used for the comparison, with
/// omega(V) = (r(V) + m0/r(V)^2)^2 and r(V) the largest root of
/// r^2 + k - 2 m0/r = V^2.
struct ReferencePotential {
  Curvature curvature;
  double m0;
  double kappa;
  double horizon_radius;
};

ReferencePotential make_reference(Curvature k, double m0);

double r_of_V(const ReferencePotential& ref, double V);
double omega_eval(const ReferencePotential& ref, double V);

struct OmegaDerivatives {
  double d1;
  double d2;
};
OmegaDerivatives omega_derivatives(const ReferencePotential& ref, double V);

struct AlphaCoefficient {
  /// omega'/V - omega'' with omega'' taken from the second-order ODE for omega.
  double difference_form;
  /// -12 V^2 m0 / (sqrt(omega) r^4).
  double closed_form;
};
/// Throws NumericalError when the two forms disagree by more than 1e-9.
AlphaCoefficient alpha_coefficient(const ReferencePotential& ref, double V);

/// |omega'' omega + 3 omega' V - (3/4 omega'^2 - 3 V omega' + 9 V^2 + omega omega'/V)|.
double omega_ode_residual(const ReferencePotential& ref, double V);

/// |dV/dr - sqrt(omega(V))/V| with V = sqrt(r^2 + k - 2 m0/r), r > r_m.
double potential_derivative_residual(const ReferencePotential& ref, double r);

/// K = -(1/2) omega''(0), the Gauss curvature of the reference horizon.
double boundary_gauss_curvature(const ReferencePotential& ref);

struct CompareOptions {
  double static_tolerance = 1e-8;
  double equality_tolerance = 1e-8;
  double mass_tolerance = 1e-4;
  int grid_points = 256;
};

struct ComparisonReport {
  int genus;
  double kappa;
  double static_residual;
  double sup_W_minus_W0;
  double boundary_K;
  double reference_K;
  double mu;
  double m0;
  double frak_r;
  double r0;
  double cubic_residual;

  bool w_le_w0;
  bool k_ge_k0;
  bool mu_le_m0;
  bool frak_r_ge_r0;
  bool cubic_ok;
  bool r0_ge_inv_sqrt3;
  /// Every inequality above holds with equality to tolerance.
  bool all_equalities;

  bool all_verdicts() const {
    return w_le_w0 && k_ge_k0 && mu_le_m0 && frak_r_ge_r0 && cubic_ok && r0_ge_inv_sqrt3;
  }
};

/// Compares a static data set with horizon (k = -1, genus >= 2) against the
/// Kottler space of the same surface gravity.
ComparisonReport cs_compare(const RadialPotential& data, int genus, CompareOptions options = {});

/// |dH/dt - (H nu(V) - |A|^2 V)| for coordinate spheres moving with normal
/// speed V, the mean curvature vector being -H nu. dH/dt is a finite difference.
double static_flow_H_evolution_residual(const RadialPotential& p, double r,
                                        double static_tolerance = 1e-8);

}  // namespace alh
