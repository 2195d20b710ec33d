#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "alh/potential.hpp"

namespace alh {

/// Change of radial coordinate r -> rho putting phi^{-1} dr^2 into the
/// hyperbolic form (k + rho^2)^{-1} drho^2, with r - rho -> 0 at infinity.
///
/// The table stores the offset delta(r) = r - rho(r) together with its exact
/// r-derivative from the ODE, so rho is recovered by cubic Hermite
/// interpolation without cancellation in r^2 - rho^2.
class SubstitutionMap {
 public:
  SubstitutionMap(Curvature k, std::vector<double> r, std::vector<double> offset,
                  std::vector<double> offset_slope);

  Curvature curvature() const { return curvature_; }
  double r_start() const { return r_.front(); }
  double r_end() const { return r_.back(); }
  double rho_start() const { return r_.front() - offset_.front(); }
  double rho_end() const { return r_.back() - offset_.back(); }
  bool contains(double r) const { return r >= r_.front() && r <= r_.back(); }

  double rho(double r) const { return r - offset(r); }
  /// delta(r) = r - rho(r).
  double offset(double r) const;
  double drho_dr(double r) const;
  /// Inverse map; rho must lie in [rho_start, rho_end].
  double r_of_rho(double rho) const;
  /// Compactification coordinate s = 1/rho.
  double s(double r) const { return 1.0 / rho(r); }
  /// tr_ghat h = 2 rho (r^2 - rho^2) for warped products.
  double trace_h(double r) const;

  std::span<const double> radii() const { return r_; }
  std::span<const double> offsets() const { return offset_; }

 private:
  std::size_t segment(double r) const;

  Curvature curvature_;
  std::vector<double> r_;
  std::vector<double> offset_;
  std::vector<double> slope_;
};

struct SubstitutionOptions {
  int steps_per_decade = 256;
};

/// Integrates d rho/dr = sqrt((k + rho^2)/phi) inward from r_end, where the
/// asymptotic matching delta(r_end) = -(phi - r^2 - k)/(6 r_end) fixes the
/// scaling freedom rho -> c rho.
SubstitutionMap build_substitution(const RadialPotential& p, double r_start, double r_end,
                                   SubstitutionOptions options = {});

struct MassAspectResult {
  double mu;
  double m;
  double m_bar;
  double error_estimate;
};

struct ExtractionOptions {
  /// Largest allowed disagreement between the last two Richardson levels.
  double tolerance = 1e-5;
};

/// mu = (3/2) lim rho (r^2 - rho^2), Richardson-extrapolated over four dyadic
/// radii in the outer part of the map.
MassAspectResult mass_aspect_extract(const RadialPotential& p, const SubstitutionMap& map,
                                     ExtractionOptions options = {});

struct ExpansionSample {
  double rho;
  double value;
};

/// value = a0 rho^2 + a1 + a2 / rho + o(1/rho).
struct ExpansionFit {
  double a0;
  double a1;
  double a2;
  double error_estimate;
};

/// Successive elimination: a0 from value/rho^2, then a1 from value - a0 rho^2,
/// then a2 from rho (value - a0 rho^2 - a1), each Richardson-accelerated over
/// the four outermost samples. Samples must be dyadic in rho, at least four,
/// spanning two decades.
ExpansionFit expansion_fit(std::span<const ExpansionSample> samples);

/// Samples f(r(rho)) at rho = rho_lo * 2^i, i < count.
std::vector<ExpansionSample> sample_dyadic(const SubstitutionMap& map, double rho_lo, int count,
                                           const std::function<double(double)>& f_of_r);

/// Area 4 pi c r^2 / rho^2 of the coordinate sphere in the compactified metric
/// rho^{-2} g.
double conformal_area(const ConformalInfinity& inf, const RadialPotential& p,
                      const SubstitutionMap& map, double r);

/// |H - (s H~ + 2 nu~(s))| for the coordinate sphere at r, where H~ is the mean
/// curvature in g~ = rho^{-2} g = psi(u) du^2 + chi(u) g_hat (outward) and
/// nu~ the inward g~-unit normal. Derivatives of chi and s are taken by
/// finite differences of the map.
double conformal_mean_curvature_residual(const RadialPotential& p, const SubstitutionMap& map,
                                         double r);

}  // namespace alh
