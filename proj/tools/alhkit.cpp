// Scenario runner: alhkit <kind> --config cfg.json --out dir [--tolerance x] [--threads n]

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "alh/scenario.hpp"

namespace {

void print_report(const alh::RunReport& rep, const std::string& indent) {
  for (const auto& c : rep.checks) {
    const char* status = !c.applicable ? "n/a " : c.passed ? "PASS" : "FAIL";
    std::printf("%s%s  %-40s value=%-12.4g threshold=%.4g\n", indent.c_str(), status, c.name.c_str(),
                c.value, c.threshold);
  }
  if (!rep.error.empty()) std::printf("%serror: %s\n", indent.c_str(), rep.error.c_str());
  for (std::size_t i = 0; i < rep.members.size(); ++i) {
    const auto& m = rep.members[i];
    std::printf("%smember %zu (%s): exit %d\n", indent.c_str(), i,
                std::string(alh::to_string(m.config.kind)).c_str(), m.exit_code);
    print_report(m, indent + "  ");
  }
}

void override_tolerance(alh::ScenarioConfig& c, double tol) {
  c.tolerance = tol;
  for (auto& m : c.members) override_tolerance(m, tol);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kottler / inverse mean curvature flow / static comparison scenario runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "alhkit-out";
  std::optional<double> tolerance;
  unsigned threads = 0;

  const char* kinds[] = {"kottler", "flow", "mass-aspect", "penrose", "static-compare", "sweep"};
  for (const char* kind : kinds) {
    auto* sub = app.add_subcommand(kind, std::string("run a ") + kind + " scenario");
    sub->add_option("--config", config_path, "JSON scenario file")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--tolerance", tolerance, "override the scenario tolerance");
    sub->add_option("--threads", threads, "sweep workers (0 = all cores)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string kind = app.get_subcommands().front()->get_name();

  alh::ScenarioConfig config;
  try {
    alh::Json j = alh::Json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      try {
        j = alh::Json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw alh::ValidationError("config " + config_path + " is not valid JSON: " + e.what());
      }
    }
    if (!j.is_object()) throw alh::ValidationError("config must be a JSON object");
    if (!j.contains("kind")) {
      j["kind"] = kind;
    } else if (j["kind"] != kind) {
      throw alh::ValidationError("config kind " + j["kind"].dump() + " does not match subcommand '" +
                                 kind + "'");
    }
    config = alh::parse_config(j);
    if (tolerance) {
      if (!(*tolerance > 0.0)) throw alh::ValidationError("--tolerance must be positive");
      override_tolerance(config, *tolerance);
    }
  } catch (const alh::Error& e) {
    std::fprintf(stderr, "alhkit: %s\n", e.what());
    return 2;
  }

  const alh::RunReport rep = alh::run(config, out_dir, threads);
  std::printf("scenario %s -> %s\n", kind.c_str(), out_dir.c_str());
  print_report(rep, "  ");
  std::printf("exit_code %d\nwall_time_s %.3f\n", rep.exit_code, rep.wall_seconds);
  if (!rep.error.empty()) std::fprintf(stderr, "alhkit: %s\n", rep.error.c_str());
  return rep.exit_code;
}
