// pcttrack: run, compare and batch path-tracking scenarios.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pcttrack/config.hpp"
#include "pcttrack/errors.hpp"
#include "pcttrack/metrics.hpp"
#include "pcttrack/simulation.hpp"
#include "pcttrack/trace.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pcttrack;

namespace {

enum ExitCode { kOk = 0, kValidation = 2, kGuardTrip = 3, kIo = 4 };

struct RunOptions {
  std::string preset_arg;  // positional form
  std::string preset;
  std::string config;
  std::string method;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> t_final;
  std::string out = "run";
};

json metrics_to_json(const MetricsSummary& m) {
  auto finite_or_null = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  return {{"t_final", m.t_final},
          {"settle_time", m.settle_time},
          {"final_p_e", m.final_p_e},
          {"max_p_e_settled", m.max_p_e_settled},
          {"rms_p_e_settled", m.rms_p_e_settled},
          {"final_abs_psi_le", m.final_abs_psi_le},
          {"max_abs_psi_le_settled", m.max_abs_psi_le_settled},
          {"final_abs_u_le", m.final_abs_u_le},
          {"max_abs_u_le_settled", m.max_abs_u_le_settled},
          {"final_abs_e_rl", m.final_abs_e_rl},
          {"max_abs_e_rl_settled", m.max_abs_e_rl_settled},
          {"t_c", finite_or_null(m.t_c)},
          {"min_h", m.min_h},
          {"surge_replacements", m.surge_replacements},
          {"cbf_activations", m.cbf_activations},
          {"guard_trips", m.guard_trips},
          {"envelope_violation_fraction", m.envelope_violation_fraction},
          {"effort_tau_u", m.effort_tau_u},
          {"effort_tau_r", m.effort_tau_r},
          {"effort_norm", m.effort_norm}};
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error(Errc::io, "write failed for " + path.string());
}

ScenarioConfig resolve_config(const RunOptions& o) {
  const std::string preset_name = !o.preset.empty() ? o.preset : o.preset_arg;
  if (!preset_name.empty() && !o.config.empty()) {
    throw Error(Errc::parse, "give either a preset or --config, not both");
  }
  ScenarioConfig cfg;
  if (!o.config.empty()) {
    cfg = load_config(o.config);
  } else if (!preset_name.empty()) {
    cfg = preset(preset_name);
  } else {
    throw Error(Errc::parse, "no scenario: give a preset name or --config");
  }
  if (!o.method.empty()) cfg.method = method_from_string(o.method);
  if (o.seed) cfg.seed = *o.seed;
  if (o.dt) cfg.dt = *o.dt;
  if (o.t_final) cfg.t_final = *o.t_final;
  return cfg;
}

// Runs one scenario into `dir`. Returns an exit code; diagnostics go to `log`.
int run_one(const ScenarioConfig& cfg, const fs::path& dir, std::ostream& log) {
  ValidationReport report;
  try {
    report = validate_config(cfg);
  } catch (const ValidationError& e) {
    log << "validation failed:\n";
    for (const auto& issue : e.issues()) log << "  - " << issue << '\n';
    return kValidation;
  }
  for (const auto& w : report.warnings) log << "warning: " << w << '\n';

  try {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(Errc::io, "cannot create " + dir.string() + ": " + ec.message());

    RunManifest manifest;
    manifest.scenario = cfg.name;
    manifest.seed = cfg.seed;
    manifest.config = cfg;
    manifest.report = report;
    manifest.trace_path = "trace.csv";
    manifest.metrics_path = "metrics.json";
    manifest.config_path = "config.json";
    write_json(dir / "manifest.json", manifest_to_json(manifest));
    write_json(dir / "config.json", config_to_json(cfg));

    SimTrace trace;
    int code = kOk;
    json status = {{"status", "ok"}};
    try {
      trace = run_scenario(cfg);
    } catch (const GuardTrip& trip) {
      log << "guard trip at step " << trip.step() << " (t = " << trip.time()
          << " s): " << trip.what() << '\n';
      if (trip.partial_trace()) trace = *trip.partial_trace();
      status = {{"status", "guard_trip"},
                {"error", to_string(trip.code())},
                {"step", trip.step()},
                {"t", trip.time()},
                {"detail", trip.what()}};
      code = kGuardTrip;
    }
    write_trace_csv((dir / "trace.csv").string(), trace);
    json mj = trace.records.empty() ? json::object() : metrics_to_json(metrics(trace, cfg.settle_time));
    mj.update(status);
    write_json(dir / "metrics.json", mj);
    return code;
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return e.code() == Errc::io ? kIo : kValidation;
  }
}

void print_comparison(const Comparison& c, const std::string& a, const std::string& b) {
  std::printf("%-12s %14s %14s\n", "signal", "rms_delta", "max_delta");
  for (const auto& s : c.signals) std::printf("%-12s %14.6g %14.6g\n", s.name.c_str(), s.rms, s.max);
  std::printf("%-12s %14.6g\n", "position", c.position_rms);
  std::printf("\neffort integral |tau| dt:   %s = %.6g   %s = %.6g\n", a.c_str(), c.effort_a,
              b.c_str(), c.effort_b);
  std::printf("effort integral |tau_u| dt: %s = %.6g   %s = %.6g\n", a.c_str(), c.effort_tau_u_a,
              b.c_str(), c.effort_tau_u_b);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polar-coordinate path tracking for underactuated vessels"};
  app.require_subcommand(1);

  RunOptions ro;
  auto* run = app.add_subcommand("run", "Run one scenario and write manifest, trace and metrics");
  run->add_option("scenario", ro.preset_arg, "Preset name (see `presets`)");
  run->add_option("--preset", ro.preset, "Preset name");
  run->add_option("--config", ro.config, "JSON config or a run manifest");
  run->add_option("--method", ro.method, "Surge positivity handling")
      ->check(CLI::IsMember({"1", "2", "none"}));
  run->add_option("--seed", ro.seed, "RNG seed");
  run->add_option("--dt", ro.dt, "Integration step [s]");
  run->add_option("--t-final", ro.t_final, "Run length [s]");
  run->add_option("--out", ro.out, "Output directory");

  RunOptions vo;
  auto* validate = app.add_subcommand("validate", "Validate a scenario and print the report");
  validate->add_option("scenario", vo.preset_arg, "Preset name");
  validate->add_option("--preset", vo.preset, "Preset name");
  validate->add_option("--config", vo.config, "JSON config or a run manifest");
  validate->add_option("--method", vo.method, "Surge positivity handling")
      ->check(CLI::IsMember({"1", "2", "none"}));

  std::string dir_a, dir_b;
  auto* cmp = app.add_subcommand("compare", "Compare the traces of two run directories");
  cmp->add_option("run_a", dir_a)->required();
  cmp->add_option("run_b", dir_b)->required();

  std::vector<std::string> batch_presets;
  std::vector<std::string> batch_methods{"1", "2"};
  std::optional<std::uint64_t> batch_seed;
  std::string batch_out = "batch";
  auto* batch = app.add_subcommand("batch", "Run presets x methods in parallel, one directory each");
  batch->add_option("--presets", batch_presets, "Presets (default: all)");
  batch->add_option("--methods", batch_methods, "Methods")->check(CLI::IsMember({"1", "2", "none"}));
  batch->add_option("--seed", batch_seed, "RNG seed");
  batch->add_option("--out", batch_out, "Output root");

  auto* presets = app.add_subcommand("presets", "List built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kValidation;
  }

  try {
    if (*run) return run_one(resolve_config(ro), ro.out, std::cerr);

    if (*validate) {
      const ScenarioConfig cfg = resolve_config(vo);
      try {
        const ValidationReport r = validate_config(cfg);
        std::cout << report_to_json(r).dump(2) << '\n';
        return kOk;
      } catch (const ValidationError& e) {
        std::cerr << "validation failed:\n";
        for (const auto& issue : e.issues()) std::cerr << "  - " << issue << '\n';
        return kValidation;
      }
    }

    if (*cmp) {
      const SimTrace a = read_trace_csv((fs::path(dir_a) / "trace.csv").string());
      const SimTrace b = read_trace_csv((fs::path(dir_b) / "trace.csv").string());
      print_comparison(compare(a, b), dir_a, dir_b);
      return kOk;
    }

    if (*presets) {
      for (const auto& name : preset_names()) std::cout << name << '\n';
      return kOk;
    }

    if (*batch) {
      if (batch_presets.empty()) batch_presets = preset_names();
      struct Job {
        fs::path dir;
        std::future<std::pair<int, std::string>> result;
      };
      std::vector<Job> jobs;
      for (const auto& p : batch_presets) {
        for (const auto& m : batch_methods) {
          ScenarioConfig cfg = preset(p);
          cfg.method = method_from_string(m);
          if (batch_seed) cfg.seed = *batch_seed;
          const fs::path dir = fs::path(batch_out) / (p + "_method-" + m);
          jobs.push_back({dir, std::async(std::launch::async, [cfg, dir] {
                            std::ostringstream log;
                            const int code = run_one(cfg, dir, log);
                            return std::make_pair(code, log.str());
                          })});
        }
      }
      int worst = kOk;
      for (auto& job : jobs) {
        const auto [code, log] = job.result.get();
        std::cout << job.dir.string() << ": exit " << code << '\n' << log;
        worst = std::max(worst, code);
      }
      return worst;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.code()) {
      case Errc::io: return kIo;
      case Errc::singular_sideslip:
      case Errc::gain_singular: return kGuardTrip;
      default: return kValidation;
    }
  }
  return kOk;
}
