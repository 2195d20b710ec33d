#pragma once

#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "alh/asymptotics.hpp"
#include "alh/potential.hpp"

namespace alh {

/// One leaf of the inverse mean curvature flow of coordinate spheres.
struct FlowState {
  double t;
  double r;
  double rho;  // NaN unless a substitution map covering r was attached
  double area;
  double H;
  double hawking_mass;
  double geroch_rate;
  double scalar_curvature;
  double traceless_A_norm;  // coordinate spheres are umbilic
  int euler_char;
};

struct FlowTrajectory {
  std::vector<FlowState> states;
  double start_radius = 0.0;
  bool monotone = true;
  /// Largest drop of the Hawking mass between consecutive states (0 if none).
  double max_violation = 0.0;
};

struct FlowOptions {
  int steps = 4096;
};

/// Integrates dr/dt = sqrt(phi)/H, the outward speed 1/H expressed in the
/// coordinate r, with fixed-step RK4 from r0 up to t_max.
FlowTrajectory imcf_integrate(const ConformalInfinity& inf, const RadialPotential& p, double r0,
                              double t_max, FlowOptions options = {});

/// Fills the rho column for states whose radius the map covers.
void attach_rho(FlowTrajectory& traj, const SubstitutionMap& map);

/// (16 pi)^{-3/2} |Sigma|^{3/2} (R + 6): d m_H/dt for umbilic spheres of
/// constant H and Euler characteristic equal to that of the surface at infinity.
double geroch_rate(const ConformalInfinity& inf, const RadialPotential& p, double r);

enum class BracketVerdict { holds, violated, not_applicable };
std::string_view to_string(BracketVerdict v);

struct BracketResult {
  BracketVerdict verdict;
  double rho0;
  /// Smallest distance from rho(r(t)) to the nearer bracket end over t > 0.
  double min_margin;
};

/// Checks (rho0 - 1) e^{t/2} + 1 <= rho(r(t)) <= (rho0 + 1) e^{t/2} - 1 along the
/// trajectory. Starts with rho0 < 10 are reported as not applicable.
BracketResult bracket_check(const FlowTrajectory& traj, const SubstitutionMap& map);

/// Hawking mass sqrt(A/16pi) (1 - genus - (int H^2 - 4A)/16pi).
double hawking_mass(int genus, double area, double h2_integral);

/// (1/gamma) sqrt(A/16pi) (1 - genus + A/4pi), gamma = max(1, genus - 1)^{3/2}.
double penrose_rhs(int genus, double area);

struct LowerBound {
  double bound;
  double minimizer_area;
};

/// Minimum over A >= 0 of sqrt(A/16pi) (1 - genus + A/4pi); genus >= 1.
LowerBound hawking_lower_bound(int genus);

struct WeightedMassAspect {
  double mu;
  double weight;
};

/// -(weighted mean of |mu|^{2/3})^{3/2} c^{3/2}; weights must add up to the area
/// of the surface at infinity and every mu must be nonpositive.
double holder_bound(std::span<const WeightedMassAspect> samples, const ConformalInfinity& inf);

enum class JumpVerdict { holds, violated, hypotheses_not_met };
std::string_view to_string(JumpVerdict v);

/// Compares Hawking masses across a jump of the weak flow. Hypotheses: area
/// does not decrease, int H^2 does not increase, and before the jump either
/// m_H >= 0 (genus <= 1) or area >= 4 pi (genus - 1)/3 and
/// m_H >= -((genus - 1)/3)^{3/2}.
JumpVerdict jump_bound_check(double area_before, double area_after, double h2_before,
                             double h2_after, int genus);

/// t, r, rho, area, H, hawking_mass, geroch_rate, scalar_curvature with 17
/// significant digits.
void write_trajectory_csv(std::ostream& out, const FlowTrajectory& traj);

}  // namespace alh
