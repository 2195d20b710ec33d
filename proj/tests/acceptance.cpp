// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "alh/asymptotics.hpp"
#include "alh/flow.hpp"
#include "alh/geometry.hpp"
#include "alh/scenario.hpp"
#include "alh/static_compare.hpp"

using namespace alh;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
const double kMcrit = -1.0 / (3.0 * std::sqrt(3.0));

struct Outcome {
  bool pass = true;
  std::string detail;

  // Records a quantity and its threshold; the outcome fails once any value exceeds its bound.
  void at_most(const std::string& what, double value, double bound) {
    if (!(value <= bound)) {
      pass = false;
      detail += what + "=" + fmt(value) + ">" + fmt(bound) + " ";
    }
  }
  void require(const std::string& what, bool ok) {
    if (!ok) {
      pass = false;
      detail += what + " ";
    }
  }
  void note(const std::string& what, double value) { notes += what + "=" + fmt(value) + " "; }

  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
  }
  std::string notes;
};

Outcome kottler_exactness() {
  Outcome o;
  const std::vector<std::pair<int, double>> cases{{-1, 0.0}, {-1, -0.1}, {-1, kMcrit + 1e-3}, {0, 0.5}, {1, 1.0}};
  double worst_r = 0.0, worst_static = 0.0, worst_cubic = 0.0, worst_kappa = 0.0;
  for (const auto& [k, m] : cases) {
    const auto s = kottler_build(curvature_from_int(k), m);
    const double rm = s.horizon_radius;
    worst_cubic = std::max(worst_cubic, std::abs(2.0 * m - (rm * rm * rm + k * rm)));
    worst_kappa = std::max(worst_kappa, std::abs(s.surface_gravity - (3.0 * rm * rm + k) / (2.0 * rm)));
    for (int i = 0; i < 20; ++i) {
      const double r = 1.05 * rm * std::pow(100.0, i / 19.0);
      worst_r = std::max(worst_r, std::abs(scalar_curvature(s.potential, r) + 6.0));
      worst_static = std::max(worst_static, static_residual(s.potential, r).max());
    }
  }
  o.at_most("|R+6|", worst_r, 1e-10);
  o.at_most("static", worst_static, 1e-9);
  o.at_most("cubic", worst_cubic, 1e-12);
  o.at_most("kappa", worst_kappa, 1e-12);
  o.note("max|R+6|", worst_r);
  o.note("max_static", worst_static);
  return o;
}

Outcome equality_case() {
  Outcome o;
  double worst_mh = 0.0, worst_rhs = 0.0;
  for (int genus : {2, 3}) {
    const double c = genus - 1.0;
    const auto inf = ConformalInfinity::of_genus(genus);
    for (double m : {-0.15, -0.1, 0.0}) {
      const auto s = kottler_build(Curvature::hyperbolic, m);
      const auto traj = imcf_integrate(inf, s.potential, 1.5 * s.horizon_radius, 4.0);
      for (const auto& st : traj.states) {
        worst_mh = std::max(worst_mh, std::abs(st.hawking_mass - std::pow(c, 1.5) * m));
      }
      const double area = 4.0 * kPi * c * s.horizon_radius * s.horizon_radius;
      worst_rhs = std::max(worst_rhs, std::abs(penrose_rhs(genus, area) - m));
    }
  }
  o.at_most("m_H", worst_mh, 1e-6);
  o.at_most("penrose_rhs", worst_rhs, 1e-10);
  o.note("max|m_H-c^1.5 m|", worst_mh);
  o.note("max|rhs-m|", worst_rhs);
  return o;
}

Outcome geroch_monotonicity() {
  Outcome o;
  const int genus = 2;
  const auto inf = ConformalInfinity::of_genus(genus);
  const double c = 1.0, m = 0.1;
  double worst_violation = 0.0, worst_closed = 0.0, worst_fd_ratio = 0.0;
  for (double eps : {0.0, 0.05, 0.2}) {
    const auto p = RadialPotential::perturbed_kottler(Curvature::hyperbolic, m, eps);
    const auto traj = imcf_integrate(inf, p, 2.0, 4.0);
    worst_violation = std::max(worst_violation, traj.max_violation);
    o.require("monotone(eps=" + Outcome::fmt(eps) + ")", traj.monotone);
    const auto& st = traj.states;
    const double dt = st[1].t - st[0].t;
    for (std::size_t i = 0; i < st.size(); ++i) {
      worst_closed = std::max(worst_closed, std::abs(st[i].geroch_rate - std::pow(c, 1.5) * eps / (4.0 * st[i].r)));
      if (i == 0 || i + 1 == st.size()) continue;
      const double fd = (st[i + 1].hawking_mass - st[i - 1].hawking_mass) / (2.0 * dt);
      worst_fd_ratio = std::max(worst_fd_ratio, std::abs(fd - st[i].geroch_rate) / (dt * dt));
    }
  }
  o.at_most("violation", worst_violation, 1e-8);
  o.at_most("rate_closed_form", worst_closed, 1e-8);
  o.at_most("fd/dt^2", worst_fd_ratio, 1.0);
  const auto down = imcf_integrate(inf, RadialPotential::perturbed_kottler(Curvature::hyperbolic, m, -0.2), 2.0, 4.0);
  o.require("decrease_detected(eps=-0.2)", !down.monotone && down.max_violation > 1e-8);
  o.note("max_violation", worst_violation);
  o.note("eps=-0.2 drop", down.max_violation);
  return o;
}

Outcome mass_aspect() {
  Outcome o;
  double worst = 0.0;
  for (double m : {-0.15, 0.0, 0.5}) {
    const auto s = kottler_build(Curvature::hyperbolic, m);
    const double r_start = 2.0 * (s.horizon_radius + 1.0);
    for (int spd : {256, 512}) {
      const auto map = build_substitution(s.potential, r_start, 1e4 * r_start, {spd});
      worst = std::max(worst, std::abs(mass_aspect_extract(s.potential, map).mu - m));
    }
  }
  o.at_most("|mu-m|", worst, 1e-4);
  o.note("max|mu-m|", worst);
  return o;
}

Outcome expansion_coefficients() {
  Outcome o;
  const double m = 0.5;
  const auto s = kottler_build(Curvature::hyperbolic, m);
  const auto& p = s.potential;
  const double r_start = 2.0 * (s.horizon_radius + 1.0);
  const auto map = build_substitution(p, r_start, 1e4 * r_start);
  const double rho_hi = std::exp2(std::floor(std::log2(map.rho_end() / 16.0)));
  const double rho_lo = rho_hi / 128.0;
  const auto w = expansion_fit(sample_dyadic(map, rho_lo, 8, [&](double r) {
    const double d = p.dphi(r);
    return 0.25 * d * d;
  }));
  const auto v = expansion_fit(sample_dyadic(map, rho_lo, 8, [&](double r) { return p.phi(r); }));
  o.at_most("|W.a2-8m/3|", std::abs(w.a2 - 8.0 * m / 3.0), 1e-3);
  o.at_most("|V2.a2+4m/3|", std::abs(v.a2 + 4.0 * m / 3.0), 1e-3);
  // self-reference: the mass of the Kottler space with the same surface gravity
  const double m0 = kappa_to_mass(Curvature::hyperbolic, s.surface_gravity).masses.at(0);
  const double mu = mass_aspect_extract(p, map).mu;
  o.at_most("|mu_W-m0|", std::abs(0.375 * w.a2 - m0), 1e-3);
  o.at_most("|mu_V2-m0|", std::abs(-0.75 * v.a2 - m0), 1e-3);
  o.at_most("|mu-m0|", std::abs(mu - m0), 1e-3);
  o.note("W.a2", w.a2);
  o.note("V2.a2", v.a2);
  return o;
}

Outcome lower_bounds() {
  Outcome o;
  const int points = 10000;
  const double spacing = 40.0 * kPi / (points - 1);
  for (int genus : {2, 3, 4}) {
    const auto lb = hawking_lower_bound(genus);
    const double expected = -std::pow((genus - 1) / 3.0, 1.5);
    double best = std::numeric_limits<double>::infinity(), argbest = 0.0;
    for (int i = 0; i < points; ++i) {
      const double a = spacing * i;
      const double f = std::sqrt(a / (16.0 * kPi)) * (1.0 - genus + a / (4.0 * kPi));
      if (f < best) {
        best = f;
        argbest = a;
      }
    }
    const std::string g = "(g=" + std::to_string(genus) + ")";
    o.at_most("bound_mismatch" + g, std::abs(lb.bound - expected), 1e-14);
    o.require("scan>=bound" + g, best >= expected - 1e-9);
    o.at_most("argmin_offset" + g, std::abs(argbest - 4.0 * kPi * (genus - 1) / 3.0), spacing);
  }
  DeterministicRng rng(2024);
  int admissible = 0, violated = 0, attempts = 0;
  while (admissible < 10000 && attempts < 1000000) {
    ++attempts;
    const int genus = 2 + static_cast<int>(rng.uniform() * 4.0);
    const double a_before = 4.0 * kPi * (genus - 1) * rng.uniform(1.0 / 3.0, 4.0);
    const double a_after = a_before * rng.uniform(1.0, 2.0);
    const double h2_before = (4.0 * a_before + 16.0 * kPi) * rng.uniform();
    const double h2_after = h2_before * rng.uniform();
    const auto v = jump_bound_check(a_before, a_after, h2_before, h2_after, genus);
    if (v == JumpVerdict::hypotheses_not_met) continue;
    ++admissible;
    if (v == JumpVerdict::violated) ++violated;
  }
  o.require("10^4 admissible tuples", admissible == 10000);
  o.require("no jump violations", violated == 0);
  o.note("admissible", admissible);
  o.note("violated", violated);
  return o;
}

Outcome static_chain() {
  Outcome o;
  double worst_ode = 0.0, worst_alpha = 0.0, worst_K = 0.0;
  bool signs = true;
  for (int i = 0; i < 20; ++i) {
    const double m0 = kMcrit + 0.01 + (1.0 - kMcrit - 0.01) * i / 19.0;
    const auto ref = make_reference(Curvature::hyperbolic, m0);
    const double rm = largest_zero(Curvature::hyperbolic, m0)->r;
    worst_K = std::max(worst_K, std::abs(boundary_gauss_curvature(ref) + 1.0 / (rm * rm)));
    for (int j = 0; j < 20; ++j) {
      const double V = 0.1 + 4.9 * j / 19.0;
      worst_ode = std::max(worst_ode, omega_ode_residual(ref, V));
      const auto a = alpha_coefficient(ref, V);
      worst_alpha = std::max(worst_alpha, std::abs(a.difference_form - a.closed_form));
      const int sa = (a.closed_form > 0) - (a.closed_form < 0);
      const int sm = (m0 > 0) - (m0 < 0);
      if (sa != -sm) signs = false;
    }
  }
  o.at_most("ode", worst_ode, 1e-8);
  o.at_most("alpha_forms", worst_alpha, 1e-9);
  o.require("sign(alpha)=-sign(m0)", signs);
  o.at_most("|K-k/rm^2|", worst_K, 1e-8);
  for (int genus : {2, 3}) {
    for (double m : {-0.15, -0.1, -0.05, 0.0}) {
      const auto rep = cs_compare(RadialPotential::kottler(Curvature::hyperbolic, m), genus);
      const std::string tag = "(g=" + std::to_string(genus) + ",m=" + Outcome::fmt(m) + ")";
      o.require("verdicts" + tag, rep.all_verdicts());
      o.require("equalities" + tag, rep.all_equalities);
      o.at_most("cubic" + tag, std::abs(2.0 * rep.m0 + rep.r0 - rep.r0 * rep.r0 * rep.r0), 1e-10);
      o.require("r0>=1/sqrt3" + tag, rep.r0 >= 1.0 / std::sqrt(3.0));
    }
  }
  o.note("max_ode", worst_ode);
  o.note("max|dK|", worst_K);
  return o;
}

Outcome conformal_identities() {
  Outcome o;
  const std::vector<RadialPotential> profiles{RadialPotential::kottler(Curvature::hyperbolic, 0.5),
                                              RadialPotential::kottler(Curvature::hyperbolic, -0.1),
                                              RadialPotential::perturbed_kottler(Curvature::hyperbolic, 0.2, 0.1)};
  const auto inf = ConformalInfinity::of_genus(2);
  double worst_res = 0.0, worst_ratio = 0.0;
  for (const auto& p : profiles) {
    const auto map = build_substitution(p, 3.0, 3e4);
    for (double r : {10.0, 100.0}) worst_res = std::max(worst_res, conformal_mean_curvature_residual(p, map, r));
    const auto traj = imcf_integrate(inf, p, 5.0, 6.0, {600});
    double C = 0.0;
    for (const auto& st : traj.states) {
      const double dev = std::abs(conformal_area(inf, p, map, st.r) - inf.area());
      if (C == 0.0 && st.t >= 1.0 - 1e-12) C = dev * std::exp(0.5 * st.t);
      if (st.t >= 1.0 - 1e-12) worst_ratio = std::max(worst_ratio, dev / (C * std::exp(-0.5 * st.t)));
    }
  }
  o.at_most("residual", worst_res, 1e-6);
  o.at_most("dev/(C e^{-t/2})", worst_ratio, 1.0 + 1e-12);
  o.note("max_residual", worst_res);
  o.note("max_ratio", worst_ratio);
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool same_tree(const fs::path& a, const fs::path& b) {
  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    ++files;
    const auto other = b / fs::relative(e.path(), a);
    if (!fs::exists(other) || slurp(e.path()) != slurp(other)) return false;
  }
  std::size_t other_files = 0;
  for (const auto& e : fs::recursive_directory_iterator(b)) other_files += e.is_regular_file();
  return files > 0 && files == other_files;
}

Outcome determinism() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "alh_acceptance_determinism";
  fs::remove_all(root);
  const char* singles[] = {
      R"({"kind": "kottler", "mass": -0.1})",
      R"({"kind": "flow", "mass": -0.1, "r0": 3, "t_max": 2, "steps": 512})",
      R"({"kind": "mass-aspect", "mass": 0.5})",
      R"({"kind": "penrose", "genus": 3, "mass": -0.1, "seed": 11, "jump_samples": 2000})",
      R"({"kind": "static-compare", "mass": -0.1})",
  };
  int idx = 0;
  for (const char* text : singles) {
    const auto c = parse_config(Json::parse(text));
    const auto a = root / ("single_" + std::to_string(idx) + "_a");
    const auto b = root / ("single_" + std::to_string(idx) + "_b");
    const auto ra = run(c, a);
    const auto rb = run(c, b);
    o.require(std::string(to_string(c.kind)) + "_exit0", ra.exit_code == 0 && rb.exit_code == 0);
    o.require(std::string(to_string(c.kind)) + "_identical", same_tree(a, b));
    ++idx;
  }
  const auto sweep_cfg = parse_config(Json::parse(R"({"kind": "sweep",
      "template": {"kind": "flow", "r0": 4, "t_max": 2, "steps": 512},
      "vary": {"mass": [-0.15, -0.1, 0.0], "genus": [2, 3]}})"));
  const auto serial = run(sweep_cfg, root / "sweep_serial", 1);
  const auto parallel = run(sweep_cfg, root / "sweep_parallel", 4);
  o.require("sweep_exit0", serial.exit_code == 0 && parallel.exit_code == 0);
  o.require("sweep_parallel_equals_serial", same_tree(root / "sweep_serial", root / "sweep_parallel"));
  o.note("sweep_members", static_cast<double>(serial.members.size()));
  fs::remove_all(root);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"kottler_exactness", kottler_exactness},
      {"penrose_equality_case", equality_case},
      {"geroch_monotonicity", geroch_monotonicity},
      {"mass_aspect_extraction", mass_aspect},
      {"expansion_coefficients", expansion_coefficients},
      {"lower_bound_functionals", lower_bounds},
      {"static_comparison_chain", static_chain},
      {"conformal_identities", conformal_identities},
      {"plumbing_determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %zu %-26s %.2fs  %s%s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs,
                o.notes.c_str(), o.detail.c_str());
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
