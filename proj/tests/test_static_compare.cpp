#include <doctest.h>

#include <cmath>
#include <vector>

#include "alh/errors.hpp"
#include "alh/geometry.hpp"
#include "alh/static_compare.hpp"

using namespace alh;

namespace {

const double kMcrit = -1.0 / (3.0 * std::sqrt(3.0));

// Largest root of r^3 + k r - 2 m - V^2 r by bisection.
double r_oracle(int k, double m, double V) {
  const auto f = [&](double r) { return r * r * r + (k - V * V) * r - 2.0 * m; };
  double lo = std::sqrt(std::max(0.0, (V * V - k) / 3.0));
  double hi = 10.0 + V + std::abs(m);
  for (int i = 0; i < 300; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double omega_oracle(int k, double m, double V) {
  const double r = r_oracle(k, m, V);
  const double w = r + m / (r * r);
  return w * w;
}

}  // namespace

TEST_CASE("surface gravity to mass") {
  const auto a = kappa_to_mass(Curvature::hyperbolic, 1.0);
  REQUIRE(a.masses.size() == 1);
  CHECK(std::abs(a.masses[0]) < 1e-14);
  CHECK(a.bijective);

  const auto b = kappa_to_mass(Curvature::hyperbolic, 1e-7);
  CHECK(b.masses[0] == doctest::Approx(kMcrit).epsilon(1e-9));

  const auto c = kappa_to_mass(Curvature::spherical, 2.0);
  REQUIRE(c.masses.size() == 2);
  CHECK_FALSE(c.bijective);
  CHECK_FALSE(c.warning.empty());
  CHECK(c.masses[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.masses[1] == doctest::Approx(5.0 / 27.0).epsilon(1e-12));
  // kappa = r_m + m / r_m^2 on both branches
  for (double m : c.masses) {
    const double r = r_oracle(1, m, 0.0);
    CHECK(r + m / (r * r) == doctest::Approx(2.0).epsilon(1e-10));
  }

  CHECK_THROWS_AS(kappa_to_mass(Curvature::hyperbolic, 0.0), DomainError);
  CHECK_THROWS_AS(kappa_to_mass(Curvature::flat, -1.0), DomainError);
  CHECK_THROWS_AS(kappa_to_mass(Curvature::spherical, 1.0), DomainError);
}

TEST_CASE("bijection round trip and monotonicity") {
  for (auto k : {Curvature::hyperbolic, Curvature::flat}) {
    double prev = -1.0;
    for (double kappa = 0.05; kappa < 6.0; kappa *= 1.3) {
      const double m = kappa_to_mass(k, kappa).masses.at(0);
      CHECK(mass_to_kappa(k, m) == doctest::Approx(kappa).epsilon(1e-12));
      CHECK(m > prev);
      prev = m;
    }
  }
  CHECK(mass_to_kappa(Curvature::hyperbolic, kMcrit) == 0.0);
}

TEST_CASE("omega examples") {
  const auto zero = make_reference(Curvature::hyperbolic, 0.0);
  CHECK(omega_eval(zero, std::sqrt(3.0)) == doctest::Approx(4.0).epsilon(1e-14));
  for (double m : {-0.15, -0.1, 0.0, 0.4}) {
    const auto ref = make_reference(Curvature::hyperbolic, m);
    CHECK(omega_eval(ref, 0.0) == doctest::Approx(ref.kappa * ref.kappa).epsilon(1e-12));
    CHECK(r_of_V(ref, 0.0) == doctest::Approx(ref.horizon_radius).epsilon(1e-12));
    for (double V : {0.3, 1.0, 4.0}) {
      CHECK(omega_eval(ref, V) == doctest::Approx(omega_oracle(-1, m, V)).epsilon(1e-12));
      CHECK(omega_eval(ref, V) > 0.0);
    }
  }
  const auto ref = make_reference(Curvature::hyperbolic, -0.1);
  CHECK(r_of_V(ref, 1.0) == doctest::Approx(1.3615).epsilon(1e-4));
  CHECK(omega_eval(ref, 1.0) == doctest::Approx(1.710).epsilon(1e-3));
  CHECK_THROWS_AS(omega_eval(ref, -0.1), DomainError);
  CHECK_THROWS_AS(make_reference(Curvature::spherical, -0.1), DomainError);
}

TEST_CASE("omega derivatives") {
  const auto zero = make_reference(Curvature::hyperbolic, 0.0);
  const auto d = omega_derivatives(zero, 2.0);
  CHECK(d.d1 == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(d.d2 == doctest::Approx(2.0).epsilon(1e-14));

  const double h = 1e-4;
  for (int k : {-1, 0}) {
    for (double m : {-0.1, 0.3}) {
      if (k == 0 && m < 0) continue;
      const auto ref = make_reference(curvature_from_int(k), m);
      for (double V : {0.5, 1.0, 3.0}) {
        const double wp = omega_oracle(k, m, V + h), w0 = omega_oracle(k, m, V), wm = omega_oracle(k, m, V - h);
        const auto od = omega_derivatives(ref, V);
        CHECK(std::abs(od.d1 - (wp - wm) / (2.0 * h)) <= 1e-6);
        CHECK(std::abs(od.d2 - (wp - 2.0 * w0 + wm) / (h * h)) <= 1e-4);
      }
    }
  }
  const auto ref = make_reference(Curvature::hyperbolic, -0.1);
  CHECK(std::abs(omega_derivatives(ref, 1e-8).d1) < 1e-7);
  CHECK_THROWS_AS(omega_derivatives(ref, 0.0), DomainError);
}

TEST_CASE("alpha coefficient") {
  const auto zero = make_reference(Curvature::hyperbolic, 0.0);
  for (double V : {0.1, 1.0, 7.0}) CHECK(std::abs(alpha_coefficient(zero, V).closed_form) < 1e-14);

  const auto neg = make_reference(Curvature::hyperbolic, -0.1);
  const double r = r_oracle(-1, -0.1, 1.0);
  const double expected = 1.2 / (std::sqrt(omega_oracle(-1, -0.1, 1.0)) * std::pow(r, 4));
  CHECK(alpha_coefficient(neg, 1.0).closed_form == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(0.267).epsilon(2e-3));

  for (double m : {kMcrit + 1e-3, -0.1, 0.1, 0.5}) {
    const auto ref = make_reference(Curvature::hyperbolic, m);
    for (int i = 1; i <= 50; ++i) {
      const double V = 0.1 * i;
      const auto a = alpha_coefficient(ref, V);
      CHECK(std::abs(a.difference_form - a.closed_form) <= 1e-9);
      CHECK((m > 0 ? a.closed_form < 0.0 : a.closed_form > 0.0));
    }
  }
}

TEST_CASE("omega master ODE") {
  const auto zero = make_reference(Curvature::hyperbolic, 0.0);
  for (double V : {0.2, 1.0, 5.0}) CHECK(omega_ode_residual(zero, V) <= 1e-12);
  const auto a = make_reference(Curvature::hyperbolic, -0.15);
  for (double V : {0.5, 1.0, 2.0}) CHECK(omega_ode_residual(a, V) <= 1e-8);
  CHECK(omega_ode_residual(make_reference(Curvature::flat, 0.3), 1.0) <= 1e-8);
}

TEST_CASE("potential derivative") {
  CHECK(potential_derivative_residual(make_reference(Curvature::hyperbolic, 0.0), 2.0) <= 1e-14);
  const auto ref = make_reference(Curvature::hyperbolic, 0.5);
  CHECK(potential_derivative_residual(ref, 3.0) <= 1e-10);
  CHECK(potential_derivative_residual(ref, 1e5) <= 1e-10);
  CHECK_THROWS_AS(potential_derivative_residual(ref, ref.horizon_radius), DomainError);
}

TEST_CASE("boundary Gauss curvature") {
  CHECK(boundary_gauss_curvature(make_reference(Curvature::hyperbolic, 0.0)) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(boundary_gauss_curvature(make_reference(Curvature::spherical, 1.0)) == doctest::Approx(1.0).epsilon(1e-12));
  for (double m : {-0.1, 0.2, 3.0}) {
    const auto ref = make_reference(Curvature::hyperbolic, m);
    const double rm = largest_zero(Curvature::hyperbolic, m)->r;
    const double K = boundary_gauss_curvature(ref);
    CHECK(K == doctest::Approx(-1.0 / (rm * rm)).epsilon(1e-8));
    // omega is even in V: omega(h) = kappa^2 - K h^2 + O(h^4)
    const double h = 1e-3;
    const double fd = -(omega_oracle(-1, m, h) - omega_oracle(-1, m, 0.0)) / (h * h);
    CHECK(K == doctest::Approx(fd).epsilon(1e-5));
  }
  CHECK_THROWS_AS(boundary_gauss_curvature(make_reference(Curvature::hyperbolic, kMcrit)), DomainError);
}

TEST_CASE("comparison on Kottler data") {
  const auto rep = cs_compare(RadialPotential::kottler(Curvature::hyperbolic, -0.1), 2);
  CHECK(rep.all_verdicts());
  CHECK(rep.all_equalities);
  CHECK(std::abs(rep.sup_W_minus_W0) <= 1e-8);
  CHECK(rep.boundary_K == doctest::Approx(rep.reference_K).epsilon(1e-8));
  CHECK(rep.m0 == doctest::Approx(-0.1).epsilon(1e-10));
  CHECK(std::abs(rep.mu - rep.m0) <= 1e-4);
  CHECK(rep.frak_r == doctest::Approx(rep.r0).epsilon(1e-10));

  const auto three = cs_compare(RadialPotential::kottler(Curvature::hyperbolic, 0.0), 3);
  CHECK(three.all_verdicts());
  CHECK(three.all_equalities);
  CHECK(std::abs(three.m0) < 1e-12);
  CHECK(three.r0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(three.frak_r == doctest::Approx(1.0).epsilon(1e-12));

  const auto c = cs_compare(RadialPotential::kottler(Curvature::hyperbolic, -0.15), 2);
  CHECK(c.cubic_residual <= 1e-10);
  CHECK(std::abs(2.0 * -0.15 + c.r0 - c.r0 * c.r0 * c.r0) <= 1e-10);
  CHECK(c.r0 == doctest::Approx(r_oracle(-1, -0.15, 0.0)).epsilon(1e-12));
  CHECK(c.r0_ge_inv_sqrt3);
}

TEST_CASE("comparison errors") {
  CHECK_THROWS_AS(cs_compare(RadialPotential::kottler(Curvature::hyperbolic, 0.2), 2), HypothesisError);
  CHECK_THROWS_AS(cs_compare(RadialPotential::perturbed_kottler(Curvature::hyperbolic, -0.1, 0.05), 2), NonStaticError);
  CHECK_THROWS_AS(cs_compare(RadialPotential::kottler(Curvature::hyperbolic, -0.1), 1), DomainError);
  CHECK_THROWS_AS(cs_compare(RadialPotential::kottler(Curvature::flat, 0.1), 2), DomainError);
}

TEST_CASE("mean curvature evolution under the static flow") {
  const auto p = RadialPotential::kottler(Curvature::hyperbolic, 0.0);
  CHECK(static_flow_H_evolution_residual(p, 2.0) <= 1e-8);
  // both sides equal sqrt(phi) phi'/r - 2 phi^{3/2}/r^2 = sqrt(3)/2 at r = 2
  const double phi = 3.0, dphi = 4.0, r = 2.0;
  CHECK(std::sqrt(phi) * dphi / r - 2.0 * std::pow(phi, 1.5) / (r * r) == doctest::Approx(std::sqrt(3.0) / 2.0));
  CHECK(static_flow_H_evolution_residual(p, 1.0) == 0.0);
  CHECK(static_flow_H_evolution_residual(RadialPotential::kottler(Curvature::hyperbolic, 0.3), 3.0) <= 1e-8);
  CHECK_THROWS_AS(static_flow_H_evolution_residual(p, 0.5), DomainError);
  CHECK_THROWS_AS(
      static_flow_H_evolution_residual(RadialPotential::perturbed_kottler(Curvature::hyperbolic, 0.0, 0.3), 2.0),
      NonStaticError);
}
