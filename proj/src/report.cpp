#include "alh/report.hpp"

#include <cstdio>
#include <fstream>

#include "alh/errors.hpp"

namespace alh {

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json to_json(std::string_view quantity, const ExpansionFit& fit) {
  Json j;
  j["quantity"] = quantity;
  j["a0"] = fit.a0;
  j["a1"] = fit.a1;
  j["a2"] = fit.a2;
  j["error_estimate"] = fit.error_estimate;
  return j;
}

Json to_json(const MassAspectResult& r) {
  Json j;
  j["mu"] = r.mu;
  j["m"] = r.m;
  j["m_bar"] = r.m_bar;
  j["error_estimate"] = r.error_estimate;
  return j;
}

Json to_json(const ComparisonReport& r) {
  Json j;
  j["genus"] = r.genus;
  j["kappa"] = r.kappa;
  j["static_residual"] = r.static_residual;
  j["sup_W_minus_W0"] = r.sup_W_minus_W0;
  j["boundary_K"] = r.boundary_K;
  j["reference_K"] = r.reference_K;
  j["mu"] = r.mu;
  j["m0"] = r.m0;
  j["frak_r"] = r.frak_r;
  j["r0"] = r.r0;
  j["cubic_residual"] = r.cubic_residual;
  Json v;
  v["W_le_W0"] = r.w_le_w0;
  v["K_ge_K0"] = r.k_ge_k0;
  v["mu_le_m0"] = r.mu_le_m0;
  v["frak_r_ge_r0"] = r.frak_r_ge_r0;
  v["cubic_residual_small"] = r.cubic_ok;
  v["r0_ge_inv_sqrt3"] = r.r0_ge_inv_sqrt3;
  v["all_equalities"] = r.all_equalities;
  j["verdicts"] = v;
  return j;
}

Json to_json(const KottlerSpace& s) {
  Json j;
  j["curvature"] = static_cast<int>(s.curvature);
  j["mass"] = s.mass;
  j["horizon_radius"] = s.horizon_radius;
  j["surface_gravity"] = s.surface_gravity;
  j["critical"] = s.critical;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("write to " + path.string() + " failed");
}

}  // namespace alh
