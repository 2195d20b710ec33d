#include "alh/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

#include "alh/errors.hpp"
#include "alh/geometry.hpp"
#include "alh/numerics.hpp"

namespace alh {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double topological_c(int genus) { return std::max(1.0, static_cast<double>(genus - 1)); }

FlowState make_state(const ConformalInfinity& inf, const RadialPotential& p, double t, double r) {
  FlowState s{};
  s.t = t;
  s.r = r;
  s.rho = std::numeric_limits<double>::quiet_NaN();
  s.area = inf.area() * r * r;
  s.H = mean_curvature_sphere(p, r);
  s.hawking_mass = hawking_mass_sphere(inf, p, r);
  s.geroch_rate = geroch_rate(inf, p, r);
  s.scalar_curvature = scalar_curvature(p, r);
  s.traceless_A_norm = 0.0;
  s.euler_char = inf.euler_char();
  return s;
}

}  // namespace

FlowTrajectory imcf_integrate(const ConformalInfinity& inf, const RadialPotential& p, double r0,
                              double t_max, FlowOptions options) {
  require_compatible(inf, p);
  if (!(r0 > 0.0) || !std::isfinite(r0)) throw DomainError("imcf_integrate: r0 must be positive");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw DomainError("imcf_integrate: t_max must be positive");
  }
  if (options.steps < 1) throw DomainError("imcf_integrate: steps must be at least 1");
  if (!p.contains(r0) || !(p.phi(r0) > 0.0)) {
    throw FlowError("imcf_integrate: start radius " + num(r0) +
                    " is on or inside the horizon (phi <= 0)");
  }

  const auto speed = [&](double /*t*/, double r) {
    if (!p.contains(r)) {
      throw FlowError("imcf_integrate: flow left the potential domain at r = " + num(r));
    }
    const double phi = p.phi(r);
    if (!(phi > 0.0)) throw FlowError("imcf_integrate: horizon encountered at r = " + num(r));
    return std::sqrt(phi) / mean_curvature_sphere(p, r);
  };

  const double dt = t_max / options.steps;
  FlowTrajectory traj;
  traj.start_radius = r0;
  traj.states.reserve(static_cast<std::size_t>(options.steps) + 1);
  traj.states.push_back(make_state(inf, p, 0.0, r0));
  double r = r0;
  for (int i = 1; i <= options.steps; ++i) {
    const double t = dt * (i - 1);
    const double t_next = i == options.steps ? t_max : dt * i;
    if (!(t_next > t)) throw NumericalError("imcf_integrate: step size underflow at t = " + num(t));
    r = numerics::rk4_step(speed, t, r, t_next - t);
    if (!std::isfinite(r)) throw NumericalError("imcf_integrate: radius overflow at t = " + num(t_next));
    traj.states.push_back(make_state(inf, p, t_next, r));
  }

  double worst = 0.0;
  double scale = 1.0;
  for (std::size_t i = 1; i < traj.states.size(); ++i) {
    worst = std::max(worst, traj.states[i - 1].hawking_mass - traj.states[i].hawking_mass);
    scale = std::max(scale, std::abs(traj.states[i].hawking_mass));
  }
  traj.max_violation = worst;
  traj.monotone = worst <= 1e-8 * scale;
  return traj;
}

void attach_rho(FlowTrajectory& traj, const SubstitutionMap& map) {
  for (auto& s : traj.states) {
    s.rho = map.contains(s.r) ? map.rho(s.r) : std::numeric_limits<double>::quiet_NaN();
  }
}

double geroch_rate(const ConformalInfinity& inf, const RadialPotential& p, double r) {
  require_compatible(inf, p);
  if (!(p.phi(r) > 0.0)) throw DomainError("geroch_rate: phi(" + num(r) + ") <= 0");
  const double area = inf.area() * r * r;
  return std::pow(16.0 * kPi, -1.5) * std::pow(area, 1.5) * scalar_curvature_excess(p, r);
}

std::string_view to_string(BracketVerdict v) {
  switch (v) {
    case BracketVerdict::holds: return "holds";
    case BracketVerdict::violated: return "violated";
    case BracketVerdict::not_applicable: return "not_applicable";
  }
  return "?";
}

BracketResult bracket_check(const FlowTrajectory& traj, const SubstitutionMap& map) {
  if (traj.states.empty()) throw DomainError("bracket_check: empty trajectory");
  for (const auto& s : traj.states) {
    if (!map.contains(s.r)) {
      throw DomainError("bracket_check: substitution map [" + num(map.r_start()) + ", " +
                        num(map.r_end()) + "] does not cover r = " + num(s.r));
    }
  }
  const double rho0 = map.rho(traj.states.front().r);
  BracketResult out{BracketVerdict::not_applicable, rho0, std::numeric_limits<double>::infinity()};
  if (rho0 < 10.0) return out;
  out.verdict = BracketVerdict::holds;
  for (const auto& s : traj.states) {
    if (!(s.t > 0.0)) continue;
    const double grow = std::exp(0.5 * s.t);
    const double lower = (rho0 - 1.0) * grow + 1.0;
    const double upper = (rho0 + 1.0) * grow - 1.0;
    const double rho = map.rho(s.r);
    const double margin = std::min(rho - lower, upper - rho);
    out.min_margin = std::min(out.min_margin, margin);
    if (margin < -1e-12 * rho) out.verdict = BracketVerdict::violated;
  }
  return out;
}

double hawking_mass(int genus, double area, double h2_integral) {
  if (genus < 0) throw DomainError("hawking_mass: genus must be nonnegative");
  if (!(area >= 0.0)) throw DomainError("hawking_mass: area must be nonnegative");
  return std::sqrt(area / (16.0 * kPi)) *
         (1.0 - genus - (h2_integral - 4.0 * area) / (16.0 * kPi));
}

double penrose_rhs(int genus, double area) {
  if (genus < 0) throw DomainError("penrose_rhs: genus must be nonnegative");
  if (!(area >= 0.0)) throw DomainError("penrose_rhs: area must be nonnegative");
  const double gamma = std::pow(topological_c(genus), 1.5);
  return std::sqrt(area / (16.0 * kPi)) * (1.0 - genus + area / (4.0 * kPi)) / gamma;
}

LowerBound hawking_lower_bound(int genus) {
  if (genus < 1) {
    throw DomainError("hawking_lower_bound: genus must be at least 1, got " + std::to_string(genus));
  }
  // In x = A/4pi the function is (sqrt(x)/2)(1 - genus + x), with derivative
  // (1 - genus + 3x)/(4 sqrt(x)).
  const double x = (genus - 1) / 3.0;
  const LowerBound out{-std::pow(x, 1.5), 4.0 * kPi * x};
  if (genus > 1) {
    const auto slope = [genus](double y) { return (1.0 - genus + 3.0 * y) / (4.0 * std::sqrt(y)); };
    const double dx = 1e-6 * x;
    if (!(slope(x - dx) < 0.0 && slope(x + dx) > 0.0)) {
      throw NumericalError("hawking_lower_bound: no derivative sign change at the minimizer");
    }
  }
  return out;
}

double holder_bound(std::span<const WeightedMassAspect> samples, const ConformalInfinity& inf) {
  if (samples.empty()) throw DomainError("holder_bound: no samples");
  double total = 0.0;
  double acc = 0.0;
  for (const auto& s : samples) {
    if (s.mu > 0.0) {
      throw DomainError("holder_bound: mass aspect sample " + num(s.mu) +
                        " is positive; the bound needs sup mu <= 0");
    }
    if (!(s.weight >= 0.0)) throw DomainError("holder_bound: weights must be nonnegative");
    total += s.weight;
    acc += s.weight * std::cbrt(s.mu * s.mu);
  }
  if (std::abs(total - inf.area()) > 1e-9 * inf.area()) {
    throw DomainError("holder_bound: weights add up to " + num(total) + ", expected area " +
                      num(inf.area()));
  }
  return -std::pow(acc / total, 1.5) * std::pow(inf.c(), 1.5);
}

std::string_view to_string(JumpVerdict v) {
  switch (v) {
    case JumpVerdict::holds: return "holds";
    case JumpVerdict::violated: return "violated";
    case JumpVerdict::hypotheses_not_met: return "hypotheses_not_met";
  }
  return "?";
}

JumpVerdict jump_bound_check(double area_before, double area_after, double h2_before,
                             double h2_after, int genus) {
  if (genus < 0) throw DomainError("jump_bound_check: genus must be nonnegative");
  if (!(area_before > 0.0) || !(area_after > 0.0)) {
    throw DomainError("jump_bound_check: areas must be positive");
  }
  if (area_after < area_before || h2_after > h2_before) return JumpVerdict::hypotheses_not_met;
  const double m_before = hawking_mass(genus, area_before, h2_before);
  const double m_after = hawking_mass(genus, area_after, h2_after);
  if (genus <= 1) {
    if (m_before < 0.0) return JumpVerdict::hypotheses_not_met;
  } else {
    const auto lb = hawking_lower_bound(genus);
    if (area_before < lb.minimizer_area || m_before < lb.bound) {
      return JumpVerdict::hypotheses_not_met;
    }
  }
  const double tol = 1e-12 * std::max({1.0, std::abs(m_before), std::abs(m_after)});
  return m_after >= m_before - tol ? JumpVerdict::holds : JumpVerdict::violated;
}

void write_trajectory_csv(std::ostream& out, const FlowTrajectory& traj) {
  out << "t,r,rho,area,H,hawking_mass,geroch_rate,scalar_curvature\n";
  char buf[512];
  for (const auto& s : traj.states) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, s.r,
                  s.rho, s.area, s.H, s.hawking_mass, s.geroch_rate, s.scalar_curvature);
    out << buf;
  }
}

}  // namespace alh
