#include "alh/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "alh/asymptotics.hpp"
#include "alh/flow.hpp"
#include "alh/geometry.hpp"
#include "alh/static_compare.hpp"

namespace alh {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------- parsing

const std::set<std::string>& allowed_keys(ScenarioKind kind) {
  static const std::set<std::string> kottler{"kind", "curvature", "genus", "mass", "tolerance",
                                             "radii"};
  static const std::set<std::string> flow{"kind",    "curvature", "genus", "mass", "tolerance",
                                          "epsilon", "r0",        "t_max", "steps"};
  static const std::set<std::string> mass_aspect{"kind",      "curvature", "genus",
                                                 "mass",      "tolerance", "epsilon",
                                                 "r_start",   "r_end",     "steps_per_decade"};
  static const std::set<std::string> penrose{"kind",         "curvature", "genus",      "mass",
                                             "tolerance",    "seed",      "jump_samples",
                                             "scan_points"};
  static const std::set<std::string> static_compare{"kind", "curvature", "genus", "mass",
                                                    "tolerance"};
  static const std::set<std::string> sweep{"kind", "members", "template", "vary"};
  switch (kind) {
    case ScenarioKind::kottler: return kottler;
    case ScenarioKind::flow: return flow;
    case ScenarioKind::mass_aspect: return mass_aspect;
    case ScenarioKind::penrose: return penrose;
    case ScenarioKind::static_compare: return static_compare;
    case ScenarioKind::sweep: return sweep;
  }
  return kottler;
}

double get_number(const Json& j, const std::string& key) {
  const Json& v = j.at(key);
  if (!v.is_number()) throw ValidationError("config key '" + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ValidationError("config key '" + key + "' must be finite");
  return d;
}

long long get_integer(const Json& j, const std::string& key) {
  const Json& v = j.at(key);
  if (!v.is_number_integer()) throw ValidationError("config key '" + key + "' must be an integer");
  return v.get<long long>();
}

int get_int(const Json& j, const std::string& key, long long lo, long long hi) {
  const long long v = get_integer(j, key);
  if (v < lo || v > hi) {
    throw ValidationError("config key '" + key + "' = " + std::to_string(v) + " outside [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return static_cast<int>(v);
}

int default_genus(int curvature) { return curvature == -1 ? 2 : curvature == 0 ? 1 : 0; }
int curvature_of_genus(int genus) { return genus == 0 ? 1 : genus == 1 ? 0 : -1; }

std::vector<ScenarioConfig> expand_template(const Json& tmpl, const Json& vary) {
  if (!tmpl.is_object()) throw ValidationError("sweep 'template' must be an object");
  if (!vary.is_object()) throw ValidationError("sweep 'vary' must be an object of lists");
  std::vector<Json> combos{tmpl};
  for (const auto& [key, values] : vary.items()) {
    if (key == "kind") throw ValidationError("sweep 'vary' cannot change the scenario kind");
    if (!values.is_array() || values.empty()) {
      throw ValidationError("sweep 'vary." + key + "' must be a non-empty list");
    }
    std::vector<Json> next;
    for (const auto& base : combos) {
      for (const auto& v : values) {
        Json c = base;
        c[key] = v;
        next.push_back(std::move(c));
      }
    }
    combos = std::move(next);
  }
  std::vector<ScenarioConfig> out;
  for (const auto& c : combos) out.push_back(parse_config(c));
  return out;
}

// ---------------------------------------------------------------- running

class Checks {
 public:
  explicit Checks(std::vector<Check>& out) : out_(out) {}
  void at_most(std::string name, double value, double threshold) {
    out_.push_back({std::move(name), true, value <= threshold, value, threshold});
  }
  void at_least(std::string name, double value, double threshold) {
    out_.push_back({std::move(name), true, value >= threshold, value, threshold});
  }
  void flag(std::string name, bool passed) {
    out_.push_back({std::move(name), true, passed, passed ? 1.0 : 0.0, 1.0});
  }
  void not_applicable(std::string name) {
    out_.push_back({std::move(name), false, true, std::nan(""), std::nan("")});
  }

 private:
  std::vector<Check>& out_;
};

RadialPotential make_potential(const ScenarioConfig& c) {
  const Curvature k = curvature_from_int(c.curvature);
  if (c.epsilon == 0.0) return kottler_build(k, c.mass).potential;
  return RadialPotential::perturbed_kottler(k, c.mass, c.epsilon);
}

double horizon_of(const ScenarioConfig& c) { return make_potential(c).domain_start(); }

double default_r0(const ScenarioConfig& c) { return c.r0.value_or(horizon_of(c) + 1.0); }
double default_r_start(const ScenarioConfig& c) {
  return c.r_start.value_or(2.0 * (horizon_of(c) + 1.0));
}
double default_r_end(const ScenarioConfig& c) { return c.r_end.value_or(1e4 * default_r_start(c)); }

void run_kottler(const ScenarioConfig& c, RunReport& rep, const std::filesystem::path&) {
  const double tol = c.tolerance.value_or(1e-10);
  const Curvature k = curvature_from_int(c.curvature);
  const KottlerSpace space = kottler_build(k, c.mass);
  const ConformalInfinity inf = ConformalInfinity::of_genus(c.genus);
  const RadialPotential& p = space.potential;
  const double r_h = space.horizon_radius;
  const double lo = r_h > 0.0 ? 1.05 * r_h : 0.05;
  const double hi = 100.0 * std::max(1.0, r_h);

  double max_r = 0.0;
  double max_static = 0.0;
  double max_mh = 0.0;
  const double expected_mh = std::pow(inf.c(), 1.5) * c.mass;
  for (int i = 0; i < c.radii; ++i) {
    const double r = c.radii == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (c.radii - 1));
    max_r = std::max(max_r, std::abs(scalar_curvature(p, r) + 6.0));
    max_static = std::max(max_static, static_residual(p, r).max());
    max_mh = std::max(max_mh, std::abs(hawking_mass_sphere(inf, p, r) - expected_mh));
  }

  Checks checks(rep.checks);
  if (r_h > 0.0) {
    const double kv = value(k);
    checks.at_most("horizon_cubic_relation",
                   std::abs(2.0 * c.mass - (r_h * r_h * r_h + kv * r_h)),
                   1e-12 * std::max(1.0, std::abs(c.mass)));
  } else {
    checks.not_applicable("horizon_cubic_relation");
  }
  if (r_h > 0.0 && !space.critical) {
    checks.at_most("surface_gravity_matches_potential",
                   std::abs(space.surface_gravity - 0.5 * p.dphi(r_h)),
                   1e-12 * std::max(1.0, space.surface_gravity));
  } else {
    checks.not_applicable("surface_gravity_matches_potential");
  }
  checks.at_most("scalar_curvature_minus_6", max_r, tol);
  checks.at_most("static_equations", max_static, 10.0 * tol);
  checks.at_most("hawking_mass_constant", max_mh, tol * std::max(1.0, std::abs(expected_mh)));

  const CriticalData crit = critical_data(k);
  rep.results["space"] = to_json(space);
  rep.results["critical_mass"] = crit.critical_mass;
  rep.results["critical_description"] = crit.description;
  rep.results["radii"] = c.radii;
  rep.results["radius_range"] = Json::array({lo, hi});
  rep.results["max_abs_R_plus_6"] = max_r;
  rep.results["max_static_residual"] = max_static;
  rep.results["hawking_mass"] = expected_mh;
}

void run_flow(const ScenarioConfig& c, RunReport& rep, const std::filesystem::path& out_dir) {
  const double tol = c.tolerance.value_or(1e-8);
  const ConformalInfinity inf = ConformalInfinity::of_genus(c.genus);
  const RadialPotential p = make_potential(c);
  const double r0 = default_r0(c);
  FlowTrajectory traj = imcf_integrate(inf, p, r0, c.t_max, FlowOptions{c.steps});

  // The hyperbolic chart may end above r0 (k + rho^2 <= 0); then start further out.
  const double r_final = traj.states.back().r;
  double map_start = r0;
  const auto build_map = [&] {
    return build_substitution(p, map_start, std::max(1e3 * map_start, 8.0 * r_final));
  };
  std::optional<SubstitutionMap> built;
  try {
    built = build_map();
  } catch (const NumericalError&) {
    map_start = std::max(r0, 2.0 * (p.domain_start() + 1.0));
    built = build_map();
  }
  const SubstitutionMap& map = *built;
  const double map_end = map.r_end();
  attach_rho(traj, map);

  const auto& s = traj.states;
  const double dt = c.t_max / c.steps;
  const double gamma = std::pow(inf.c(), 1.5);
  double area_err = 0.0;
  double rate_fd_err = 0.0;
  double rate_closed_err = 0.0;
  double max_rate = 0.0;
  double equality_err = 0.0;
  double min_excess = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i) {
    area_err = std::max(area_err, std::abs(s[i].area / s[0].area / std::exp(s[i].t) - 1.0));
    rate_closed_err =
        std::max(rate_closed_err, std::abs(s[i].geroch_rate - gamma * c.epsilon / (4.0 * s[i].r)));
    max_rate = std::max(max_rate, std::abs(s[i].geroch_rate));
    equality_err = std::max(equality_err, std::abs(s[i].hawking_mass - gamma * c.mass));
    min_excess = std::min(min_excess, s[i].scalar_curvature + 6.0);
    if (i > 0 && i + 1 < s.size()) {
      const double fd = (s[i + 1].hawking_mass - s[i - 1].hawking_mass) / (2.0 * dt);
      rate_fd_err = std::max(rate_fd_err, std::abs(s[i].geroch_rate - fd));
    }
  }
  const double closed_final = r0 * std::exp(0.5 * c.t_max);
  double mh_scale = 1.0;
  for (const auto& st : s) mh_scale = std::max(mh_scale, std::abs(st.hawking_mass));

  Checks checks(rep.checks);
  checks.at_most("area_grows_like_exp_t", area_err, 1e-8);
  checks.at_most("final_radius_matches_closed_form", std::abs(r_final / closed_final - 1.0), 1e-8);
  if (min_excess >= -1e-12) {
    checks.at_most("hawking_mass_nondecreasing", traj.max_violation, tol * mh_scale);
  } else {
    checks.not_applicable("hawking_mass_nondecreasing");
  }
  if (c.epsilon < 0.0) {
    checks.at_least("hawking_mass_decrease_detected", traj.max_violation, tol * mh_scale);
  } else {
    checks.not_applicable("hawking_mass_decrease_detected");
  }
  checks.at_most("geroch_rate_closed_form", rate_closed_err, 1e-8);
  checks.at_most("geroch_rate_vs_finite_difference", rate_fd_err, dt * dt * std::max(1.0, max_rate));
  if (c.epsilon == 0.0) {
    checks.at_most("hawking_mass_equality_case", equality_err, 1e-6);
  } else {
    checks.not_applicable("hawking_mass_equality_case");
  }
  Json bracket = Json::object();
  if (map_start <= r0) {
    const BracketResult b = bracket_check(traj, map);
    if (b.verdict == BracketVerdict::not_applicable) {
      checks.not_applicable("bracket");
    } else {
      checks.flag("bracket", b.verdict == BracketVerdict::holds);
    }
    bracket["verdict"] = to_string(b.verdict);
    bracket["rho0"] = b.rho0;
    bracket["min_margin"] = b.min_margin;
  } else {
    checks.not_applicable("bracket");
    bracket["verdict"] = to_string(BracketVerdict::not_applicable);
  }

  rep.results["r0"] = r0;
  rep.results["horizon_radius"] = p.domain_start();
  rep.results["final_radius"] = r_final;
  rep.results["closed_form_final_radius"] = closed_final;
  rep.results["hawking_mass_initial"] = s.front().hawking_mass;
  rep.results["hawking_mass_final"] = s.back().hawking_mass;
  rep.results["monotone"] = traj.monotone;
  rep.results["max_violation"] = traj.max_violation;
  rep.results["min_R_plus_6"] = min_excess;
  rep.results["substitution_range"] = Json::array({map_start, map_end});
  rep.results["bracket"] = bracket;

  if (!out_dir.empty()) {
    std::ostringstream csv;
    write_trajectory_csv(csv, traj);
    write_file(out_dir / "trajectory.csv", csv.str());
    rep.outputs.push_back("trajectory.csv");
  }
}

void run_mass_aspect(const ScenarioConfig& c, RunReport& rep, const std::filesystem::path& out_dir) {
  const double tol = c.tolerance.value_or(1e-4);
  const RadialPotential p = make_potential(c);
  const double r_start = default_r_start(c);
  const double r_end = default_r_end(c);
  const SubstitutionMap map = build_substitution(p, r_start, r_end, {c.steps_per_decade});
  const MassAspectResult mu = mass_aspect_extract(p, map);
  const SubstitutionMap fine = build_substitution(p, r_start, r_end, {2 * c.steps_per_decade});
  const MassAspectResult mu_fine = mass_aspect_extract(p, fine);
  const SubstitutionMap longer = build_substitution(p, r_start, 2.0 * r_end, {c.steps_per_decade});
  const MassAspectResult mu_long = mass_aspect_extract(p, longer);

  const double rho_hi = std::exp2(std::floor(std::log2(map.rho_end() / 16.0)));
  const double rho_lo = rho_hi / 128.0;
  if (rho_lo < map.rho_start()) {
    throw ExtractionError("mass-aspect: map too short for an 8-point dyadic expansion fit");
  }
  const auto w_samples =
      sample_dyadic(map, rho_lo, 8, [&](double r) { const double d = p.dphi(r); return 0.25 * d * d; });
  const auto v_samples = sample_dyadic(map, rho_lo, 8, [&](double r) { return p.phi(r); });
  const ExpansionFit w_fit = expansion_fit(w_samples);
  const ExpansionFit v_fit = expansion_fit(v_samples);

  Checks checks(rep.checks);
  const double m = c.mass;
  checks.at_most("mu_matches_mass", std::abs(mu.mu - m), tol);
  checks.at_most("mu_invariant_under_step_halving", std::abs(mu_fine.mu - mu.mu), tol);
  checks.at_most("mu_invariant_under_r_end_doubling", std::abs(mu_long.mu - mu.mu), tol);
  checks.at_most("W_a0_is_1", std::abs(w_fit.a0 - 1.0), 10.0 * tol);
  checks.at_most("W_a2_is_8m_over_3", std::abs(w_fit.a2 - 8.0 * m / 3.0), 10.0 * tol);
  checks.at_most("V2_a1_is_k", std::abs(v_fit.a1 - c.curvature), 10.0 * tol);
  checks.at_most("V2_a2_is_minus_4m_over_3", std::abs(v_fit.a2 + 4.0 * m / 3.0), 10.0 * tol);
  checks.at_most("mu_consistency_W", std::abs(0.375 * w_fit.a2 - mu.mu), 10.0 * tol);
  checks.at_most("mu_consistency_V2", std::abs(-0.75 * v_fit.a2 - mu.mu), 10.0 * tol);

  Json expansions = Json::array({to_json("W", w_fit), to_json("V2", v_fit)});
  rep.results["r_start"] = r_start;
  rep.results["r_end"] = r_end;
  rep.results["mass_aspect"] = to_json(mu);
  rep.results["mu_step_halved"] = mu_fine.mu;
  rep.results["mu_r_end_doubled"] = mu_long.mu;
  rep.results["expansions"] = expansions;
  if (!out_dir.empty()) {
    write_file(out_dir / "expansion.json", dump(expansions));
    rep.outputs.push_back("expansion.json");
  }
}

void run_penrose(const ScenarioConfig& c, RunReport& rep, const std::filesystem::path&) {
  const double tol = c.tolerance.value_or(1e-10);
  const int g = c.genus;
  const ConformalInfinity inf = ConformalInfinity::of_genus(g);
  const KottlerSpace space = kottler_build(inf.curvature(), c.mass);
  Checks checks(rep.checks);

  if (space.horizon_radius > 0.0) {
    const double area = inf.area() * space.horizon_radius * space.horizon_radius;
    const double rhs = penrose_rhs(g, area);
    checks.at_most("penrose_equality_on_kottler", std::abs(rhs - c.mass), tol);
    rep.results["horizon_area"] = area;
    rep.results["penrose_rhs"] = rhs;
  } else {
    checks.not_applicable("penrose_equality_on_kottler");
  }

  if (c.mass <= 0.0) {
    const WeightedMassAspect constant{c.mass, inf.area()};
    const double hb = holder_bound(std::span(&constant, 1), inf);
    checks.at_most("holder_bound_constant_aspect", std::abs(hb - std::pow(inf.c(), 1.5) * c.mass), tol);
    rep.results["holder_bound"] = hb;
  } else {
    checks.not_applicable("holder_bound_constant_aspect");
  }

  if (g >= 1) {
    const LowerBound lb = hawking_lower_bound(g);
    const double a_max = 40.0 * kPi;
    const double spacing = a_max / (c.scan_points - 1);
    double best = std::numeric_limits<double>::infinity();
    double best_area = 0.0;
    for (int i = 0; i < c.scan_points; ++i) {
      const double a = spacing * i;
      const double f = std::sqrt(a / (16.0 * kPi)) * (1.0 - g + a / (4.0 * kPi));
      if (f < best) {
        best = f;
        best_area = a;
      }
    }
    checks.at_least("lower_bound_scan", best - lb.bound, -1e-9);
    checks.at_most("lower_bound_minimizer", std::abs(best_area - lb.minimizer_area), spacing);
    rep.results["lower_bound"] = lb.bound;
    rep.results["minimizer_area"] = lb.minimizer_area;
    rep.results["scan_min"] = best;
    rep.results["scan_argmin"] = best_area;
  } else {
    checks.not_applicable("lower_bound_scan");
    checks.not_applicable("lower_bound_minimizer");
  }

  DeterministicRng rng(c.seed);
  int holds = 0;
  int violated = 0;
  int not_met = 0;
  const double b = g >= 2 ? (g - 1) / 3.0 : 0.0;
  for (int i = 0; i < c.jump_samples; ++i) {
    const double a = b + 1e-3 + 10.0 * rng.uniform();
    const double y_max = g >= 2 ? 1.0 - g + a + 2.0 * std::pow(b, 1.5) / std::sqrt(a) : 1.0 - g + a;
    const double y = (1.0 - 1e-9) * y_max * rng.uniform();
    const double area = 4.0 * kPi * a;
    const double h2 = 16.0 * kPi * y;
    const double area_after = area * (1.0 + 2.0 * rng.uniform());
    const double h2_after = h2 * rng.uniform();
    switch (jump_bound_check(area, area_after, h2, h2_after, g)) {
      case JumpVerdict::holds: ++holds; break;
      case JumpVerdict::violated: ++violated; break;
      case JumpVerdict::hypotheses_not_met: ++not_met; break;
    }
  }
  if (c.jump_samples > 0) {
    checks.at_most("jump_bound_violations", violated, 0.0);
    checks.at_most("jump_samples_inadmissible", not_met, 0.0);
  } else {
    checks.not_applicable("jump_bound_violations");
    checks.not_applicable("jump_samples_inadmissible");
  }
  rep.results["jump_samples"] = c.jump_samples;
  rep.results["jump_holds"] = holds;
  rep.results["jump_violated"] = violated;
  rep.results["jump_inadmissible"] = not_met;
}

void run_static_compare(const ScenarioConfig& c, RunReport& rep, const std::filesystem::path&) {
  CompareOptions opts;
  if (c.tolerance) opts.equality_tolerance = *c.tolerance;
  const RadialPotential p = RadialPotential::kottler(Curvature::hyperbolic, c.mass);
  const ComparisonReport cmp = cs_compare(p, c.genus, opts);
  Checks checks(rep.checks);
  checks.flag("W_le_W0", cmp.w_le_w0);
  checks.flag("K_ge_K0", cmp.k_ge_k0);
  checks.flag("mu_le_m0", cmp.mu_le_m0);
  checks.flag("frak_r_ge_r0", cmp.frak_r_ge_r0);
  checks.at_most("cubic_residual", cmp.cubic_residual, 1e-10);
  checks.flag("r0_ge_inv_sqrt3", cmp.r0_ge_inv_sqrt3);
  checks.flag("all_equalities", cmp.all_equalities);
  rep.results["comparison"] = to_json(cmp);
}

void write_report(const RunReport& rep, const std::filesystem::path& out_dir) {
  if (out_dir.empty()) return;
  write_file(out_dir / "report.json", dump(to_json(rep)));
}

RunReport run_impl(const ScenarioConfig& config, const std::filesystem::path& out_dir,
                   unsigned threads) {
  const auto t0 = std::chrono::steady_clock::now();
  RunReport rep;
  rep.config = config;
  try {
    validate(config);
    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
    switch (config.kind) {
      case ScenarioKind::kottler: run_kottler(config, rep, out_dir); break;
      case ScenarioKind::flow: run_flow(config, rep, out_dir); break;
      case ScenarioKind::mass_aspect: run_mass_aspect(config, rep, out_dir); break;
      case ScenarioKind::penrose: run_penrose(config, rep, out_dir); break;
      case ScenarioKind::static_compare: run_static_compare(config, rep, out_dir); break;
      case ScenarioKind::sweep: {
        rep.members = sweep(config.members, out_dir, threads);
        int worst = 0;
        for (const auto& m : rep.members) worst = std::max(worst, m.exit_code);
        if (!out_dir.empty()) {
          write_file(out_dir / "summary.csv", sweep_summary_csv(rep.members));
          rep.outputs.push_back("summary.csv");
        }
        rep.exit_code = worst;
        break;
      }
    }
    if (config.kind != ScenarioKind::sweep) rep.exit_code = rep.all_passed() ? 0 : 1;
  } catch (const ValidationError& e) {
    rep.exit_code = 2;
    rep.error = e.what();
  } catch (const HypothesisError& e) {
    rep.exit_code = 2;
    rep.error = e.what();
  } catch (const std::exception& e) {
    rep.exit_code = 1;
    rep.error = e.what();
  }
  if (!out_dir.empty()) {
    rep.outputs.push_back("report.json");
    try {
      std::filesystem::create_directories(out_dir);
      write_report(rep, out_dir);
    } catch (const std::exception& e) {
      rep.exit_code = std::max(rep.exit_code, 1);
      rep.error += std::string(rep.error.empty() ? "" : "; ") + e.what();
    }
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kottler: return "kottler";
    case ScenarioKind::flow: return "flow";
    case ScenarioKind::mass_aspect: return "mass-aspect";
    case ScenarioKind::penrose: return "penrose";
    case ScenarioKind::static_compare: return "static-compare";
    case ScenarioKind::sweep: return "sweep";
  }
  return "?";
}

ScenarioKind scenario_kind_from_string(std::string_view name) {
  for (auto k : {ScenarioKind::kottler, ScenarioKind::flow, ScenarioKind::mass_aspect,
                 ScenarioKind::penrose, ScenarioKind::static_compare, ScenarioKind::sweep}) {
    if (to_string(k) == name) return k;
  }
  throw ValidationError("unknown scenario kind '" + std::string(name) + "'");
}

ScenarioConfig parse_config(const Json& j) {
  if (!j.is_object()) throw ValidationError("scenario config must be a JSON object");
  if (!j.contains("kind") || !j.at("kind").is_string()) {
    throw ValidationError("scenario config needs a string 'kind'");
  }
  ScenarioConfig c;
  c.kind = scenario_kind_from_string(j.at("kind").get<std::string>());
  const auto& allowed = allowed_keys(c.kind);
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) {
      throw ValidationError("unknown key '" + key + "' for scenario kind '" +
                            std::string(to_string(c.kind)) + "'");
    }
  }

  if (c.kind == ScenarioKind::sweep) {
    if (j.contains("members")) {
      if (!j.at("members").is_array()) throw ValidationError("sweep 'members' must be a list");
      for (const auto& m : j.at("members")) c.members.push_back(parse_config(m));
    }
    if (j.contains("template") != j.contains("vary")) {
      throw ValidationError("sweep 'template' and 'vary' must be given together");
    }
    if (j.contains("template")) {
      for (auto& m : expand_template(j.at("template"), j.at("vary"))) c.members.push_back(std::move(m));
    }
    for (const auto& m : c.members) {
      if (m.kind == ScenarioKind::sweep) throw ValidationError("sweeps cannot be nested");
    }
    return c;
  }

  const bool has_curvature = j.contains("curvature");
  const bool has_genus = j.contains("genus");
  if (has_curvature) c.curvature = get_int(j, "curvature", -1, 1);
  if (has_genus) c.genus = get_int(j, "genus", 0, 1000);
  if (has_genus && !has_curvature) c.curvature = curvature_of_genus(c.genus);
  if (has_curvature && !has_genus) c.genus = default_genus(c.curvature);
  if (j.contains("mass")) c.mass = get_number(j, "mass");
  if (j.contains("epsilon")) c.epsilon = get_number(j, "epsilon");
  if (j.contains("tolerance")) c.tolerance = get_number(j, "tolerance");
  if (j.contains("radii")) c.radii = get_int(j, "radii", 1, 100000);
  if (j.contains("r0")) c.r0 = get_number(j, "r0");
  if (j.contains("t_max")) c.t_max = get_number(j, "t_max");
  if (j.contains("steps")) c.steps = get_int(j, "steps", 1, 10000000);
  if (j.contains("r_start")) c.r_start = get_number(j, "r_start");
  if (j.contains("r_end")) c.r_end = get_number(j, "r_end");
  if (j.contains("steps_per_decade")) c.steps_per_decade = get_int(j, "steps_per_decade", 16, 100000);
  if (j.contains("jump_samples")) c.jump_samples = get_int(j, "jump_samples", 0, 10000000);
  if (j.contains("scan_points")) c.scan_points = get_int(j, "scan_points", 2, 100000000);
  if (j.contains("seed")) {
    const Json& v = j.at("seed");
    if (!v.is_number_unsigned()) throw ValidationError("config key 'seed' must be a nonnegative integer");
    c.seed = v.get<std::uint64_t>();
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

void validate(const ScenarioConfig& c) {
  if (c.kind == ScenarioKind::sweep) return;  // members are validated when they run
  if (c.curvature < -1 || c.curvature > 1) throw ValidationError("curvature must be -1, 0 or 1");
  if (c.genus < 0) throw ValidationError("genus must be nonnegative");
  if (curvature_of_genus(c.genus) != c.curvature) {
    throw ValidationError("genus " + std::to_string(c.genus) + " needs curvature " +
                          std::to_string(curvature_of_genus(c.genus)) + ", config has " +
                          std::to_string(c.curvature));
  }
  if (c.tolerance && !(*c.tolerance > 0.0)) throw ValidationError("tolerance must be positive");
  const Curvature k = curvature_from_int(c.curvature);
  const double m_min = minimum_mass(k);
  if (c.mass < m_min - 1e-15) {
    throw ValidationError("mass " + num(c.mass) + " is below the admissible minimum " + num(m_min) +
                          " for curvature " + std::to_string(c.curvature));
  }
  const auto needs_exterior = [&](double r, const char* what) {
    const RadialPotential p = make_potential(c);
    if (!(r > p.domain_start()) || !(p.phi(r) > 0.0)) {
      throw ValidationError(std::string(what) + " = " + num(r) + " is not outside the horizon r = " +
                            num(p.domain_start()));
    }
  };
  switch (c.kind) {
    case ScenarioKind::kottler:
      if (c.epsilon != 0.0) throw ValidationError("kottler scenarios take no epsilon");
      break;
    case ScenarioKind::flow:
      if (!(c.t_max > 0.0) || c.t_max > 60.0) throw ValidationError("t_max must lie in (0, 60]");
      needs_exterior(default_r0(c), "r0");
      break;
    case ScenarioKind::mass_aspect: {
      const double rs = default_r_start(c);
      const double re = default_r_end(c);
      needs_exterior(rs, "r_start");
      if (rs * rs + c.curvature <= 0.0) throw ValidationError("r_start^2 + k must be positive");
      if (re / rs < 1e3) throw ValidationError("r_end / r_start must be at least 1e3");
      if (re > 1e9) throw ValidationError("r_end must not exceed 1e9");
      break;
    }
    case ScenarioKind::penrose:
      if (c.epsilon != 0.0) throw ValidationError("penrose scenarios take no epsilon");
      break;
    case ScenarioKind::static_compare:
      if (c.curvature != -1 || c.genus < 2) {
        throw ValidationError("static-compare needs curvature -1 and genus >= 2");
      }
      if (c.mass > 0.0) {
        throw ValidationError("static-compare needs m0 <= 0 (surface gravity at most 1), got mass " +
                              num(c.mass));
      }
      if (!(c.mass > m_min)) throw ValidationError("static-compare needs a non-degenerate horizon");
      break;
    case ScenarioKind::sweep: break;
  }
}

Json to_json(const ScenarioConfig& c) {
  Json j;
  j["kind"] = to_string(c.kind);
  if (c.kind == ScenarioKind::sweep) {
    Json members = Json::array();
    for (const auto& m : c.members) members.push_back(to_json(m));
    j["members"] = members;
    return j;
  }
  j["curvature"] = c.curvature;
  j["genus"] = c.genus;
  j["mass"] = c.mass;
  if (c.kind == ScenarioKind::flow || c.kind == ScenarioKind::mass_aspect) j["epsilon"] = c.epsilon;
  j["tolerance"] = c.tolerance ? Json(*c.tolerance) : Json(nullptr);
  switch (c.kind) {
    case ScenarioKind::kottler: j["radii"] = c.radii; break;
    case ScenarioKind::flow:
      j["r0"] = c.r0 ? Json(*c.r0) : Json(nullptr);
      j["t_max"] = c.t_max;
      j["steps"] = c.steps;
      break;
    case ScenarioKind::mass_aspect:
      j["r_start"] = c.r_start ? Json(*c.r_start) : Json(nullptr);
      j["r_end"] = c.r_end ? Json(*c.r_end) : Json(nullptr);
      j["steps_per_decade"] = c.steps_per_decade;
      break;
    case ScenarioKind::penrose:
      j["jump_samples"] = c.jump_samples;
      j["seed"] = c.seed;
      j["scan_points"] = c.scan_points;
      break;
    default: break;
  }
  return j;
}

bool RunReport::all_passed() const {
  if (!error.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

Json to_json(const RunReport& report) {
  Json j;
  j["scenario"] = to_json(report.config);
  j["exit_code"] = report.exit_code;
  j["error"] = report.error;
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    Json e;
    e["name"] = c.name;
    e["status"] = !c.applicable ? "n/a" : c.passed ? "pass" : "fail";
    e["value"] = c.value;
    e["threshold"] = c.threshold;
    checks.push_back(e);
  }
  j["checks"] = checks;
  j["results"] = report.results;
  if (report.config.kind == ScenarioKind::sweep) {
    Json members = Json::array();
    for (std::size_t i = 0; i < report.members.size(); ++i) {
      const auto& m = report.members[i];
      Json e;
      e["index"] = i;
      e["kind"] = to_string(m.config.kind);
      e["exit_code"] = m.exit_code;
      e["error"] = m.error;
      Json outs = Json::array();
      char dir[32];
      std::snprintf(dir, sizeof dir, "member_%03zu", i);
      for (const auto& o : m.outputs) outs.push_back(std::string(dir) + "/" + o);
      e["outputs"] = outs;
      members.push_back(e);
    }
    j["members"] = members;
  }
  j["outputs"] = report.outputs;
  return j;
}

RunReport run(const ScenarioConfig& config, const std::filesystem::path& out_dir,
              unsigned threads) {
  return run_impl(config, out_dir, threads);
}

std::vector<RunReport> sweep(const std::vector<ScenarioConfig>& configs,
                             const std::filesystem::path& out_dir, unsigned threads) {
  std::vector<RunReport> reports(configs.size());
  if (configs.empty()) return reports;
  const auto member_dir = [&](std::size_t i) -> std::filesystem::path {
    if (out_dir.empty()) return {};
    char name[32];
    std::snprintf(name, sizeof name, "member_%03zu", i);
    return out_dir / name;
  };
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = std::min<unsigned>(workers, static_cast<unsigned>(configs.size()));
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      reports[i] = run_impl(configs[i], member_dir(i), 1);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return reports;
}

std::string sweep_summary_csv(const std::vector<RunReport>& reports) {
  std::string out = "index,kind,curvature,genus,mass,epsilon,exit_code,checks_passed,checks_applicable\n";
  char buf[512];
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    int passed = 0;
    int applicable = 0;
    for (const auto& c : r.checks) {
      if (!c.applicable) continue;
      ++applicable;
      if (c.passed) ++passed;
    }
    std::snprintf(buf, sizeof buf, "%zu,%s,%d,%d,%.17g,%.17g,%d,%d,%d\n", i,
                  std::string(to_string(r.config.kind)).c_str(), r.config.curvature, r.config.genus,
                  r.config.mass, r.config.epsilon, r.exit_code, passed, applicable);
    out += buf;
  }
  return out;
}

}  // namespace alh
