#pragma once

#include <memory>
#include <string_view>
#include <variant>
#include <vector>

#include "alh/numerics.hpp"

namespace alh {

/// Constant Gauss curvature k of the surface at infinity.
enum class Curvature : int { hyperbolic = -1, flat = 0, spherical = 1 };

constexpr double value(Curvature k) { return static_cast<double>(static_cast<int>(k)); }
Curvature curvature_from_int(int k);
std::string_view to_string(Curvature k);

/// The constant-curvature surface at infinity, normalized so that its area is
/// 4 pi c with c = max(1, genus - 1).
class ConformalInfinity {
 public:
  static ConformalInfinity of_genus(int genus);

  int genus() const { return genus_; }
  Curvature curvature() const { return curvature_; }
  double area() const { return area_; }
  /// Topological factor max(1, genus - 1); gamma = c^{3/2}.
  double c() const { return c_; }
  int euler_char() const { return 2 - 2 * genus_; }

 private:
  ConformalInfinity(int genus, Curvature k, double area, double c)
      : genus_(genus), curvature_(k), area_(area), c_(c) {}

  int genus_;
  Curvature curvature_;
  double area_;
  double c_;
};

enum class PotentialKind { kottler, perturbed_kottler, tabulated };
std::string_view to_string(PotentialKind kind);

/// Radial profile phi(r) = V(r)^2 of the warped product
///   g = phi(r)^{-1} dr^2 + r^2 g_hat.
/// Immutable; copies share tabulated data.
class RadialPotential {
 public:
  /// phi = r^2 + k - 2m/r.
  static RadialPotential kottler(Curvature k, double mass);
  /// phi = r^2 + k - 2m/r + eps/r^2.
  static RadialPotential perturbed_kottler(Curvature k, double mass, double epsilon);
  /// phi interpolated from samples by a monotone cubic.
  static RadialPotential tabulated(Curvature k, std::vector<double> r, std::vector<double> phi);

  PotentialKind kind() const;
  Curvature curvature() const { return curvature_; }
  double k() const { return value(curvature_); }

  /// Mass parameter of the analytic kinds; throws for tabulated.
  double mass() const;
  /// Perturbation amplitude (0 for Kottler); throws for tabulated.
  double epsilon() const;

  /// Inner end of the domain: largest zero of phi if any, else 0 (analytic),
  /// or the first sample (tabulated).
  double domain_start() const { return r_min_; }
  /// +infinity for analytic kinds, the last sample for tabulated.
  double domain_end() const;
  bool contains(double r) const;

  double phi(double r) const;
  double dphi(double r) const;
  double d2phi(double r) const;
  /// phi(r) - r^2 - k, evaluated without cancellation for the analytic kinds.
  double deviation(double r) const;
  /// First and second r-derivatives of the deviation.
  double ddeviation(double r) const;
  double d2deviation(double r) const;

 private:
  struct Analytic {
    double mass;
    double epsilon;
  };
  struct Tabulated {
    std::shared_ptr<const numerics::MonotoneCubic> spline;
  };

  RadialPotential(Curvature k, std::variant<Analytic, Tabulated> data, PotentialKind kind);
  void require_in_domain(double r) const;

  Curvature curvature_;
  std::variant<Analytic, Tabulated> data_;
  PotentialKind kind_;
  double r_min_ = 0.0;
};

}  // namespace alh
