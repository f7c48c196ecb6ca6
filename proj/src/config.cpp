#include "pcttrack/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "pcttrack/angles.hpp"
#include "pcttrack/errors.hpp"

namespace pcttrack {

using nlohmann::json;

namespace {

// Rejects keys outside `allowed` so that typos do not silently fall back to defaults.
void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw Error(Errc::parse, where + " must be an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!keys.count(key)) throw Error(Errc::parse, "unknown key '" + key + "' in " + where);
  }
}

void read_number(const json& obj, const char* key, double& out, const std::string& where) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number()) throw Error(Errc::parse, where + "." + key + " must be a number");
  out = v.get<double>();
}

void read_array3(const json& obj, const char* key, std::array<double, 3>& out,
                 const std::string& where) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_array() || v.size() != 3) {
    throw Error(Errc::parse, where + "." + key + " must be an array of 3 numbers");
  }
  for (std::size_t i = 0; i < 3; ++i) {
    if (!v[i].is_number()) throw Error(Errc::parse, where + "." + key + " must hold numbers");
    out[i] = v[i].get<double>();
  }
}

std::string read_string(const json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw Error(Errc::parse, where + " must be a string");
}

const char* heading_name(HeadingProfile h) {
  switch (h) {
    case HeadingProfile::hold: return "hold";
    case HeadingProfile::rate: return "rate";
    case HeadingProfile::blend: return "blend";
  }
  return "hold";
}

HeadingProfile heading_from(const std::string& s) {
  if (s == "hold") return HeadingProfile::hold;
  if (s == "rate") return HeadingProfile::rate;
  if (s == "blend") return HeadingProfile::blend;
  throw Error(Errc::parse, "unknown heading profile '" + s + "' (expected hold, rate or blend)");
}

const char* disturbance_name(DisturbanceMode m) {
  switch (m) {
    case DisturbanceMode::uniform: return "uniform";
    case DisturbanceMode::extremes: return "extremes";
    case DisturbanceMode::none: return "none";
  }
  return "uniform";
}

DisturbanceMode disturbance_from(const std::string& s) {
  if (s == "uniform") return DisturbanceMode::uniform;
  if (s == "extremes") return DisturbanceMode::extremes;
  if (s == "none") return DisturbanceMode::none;
  throw Error(Errc::parse, "unknown disturbance mode '" + s + "'");
}

void parse_vessel(const json& j, VesselParams& p) {
  const std::string w = "vessel";
  check_keys(j, w, {"m11", "m22", "m33", "chi_u", "chi_v", "chi_r", "b_u", "b_r", "eps_r",
                    "d_u_max", "d_v_max", "d_r_max"});
  read_number(j, "m11", p.m11, w);
  read_number(j, "m22", p.m22, w);
  read_number(j, "m33", p.m33, w);
  read_array3(j, "chi_u", p.chi_u, w);
  read_array3(j, "chi_v", p.chi_v, w);
  read_array3(j, "chi_r", p.chi_r, w);
  // Input gains follow the inertias unless given explicitly.
  p.b_u = 1.0 / p.m11;
  p.b_r = 1.0 / p.m33;
  read_number(j, "b_u", p.b_u, w);
  read_number(j, "b_r", p.b_r, w);
  read_number(j, "eps_r", p.eps_r, w);
  read_number(j, "d_u_max", p.d_u_max, w);
  read_number(j, "d_v_max", p.d_v_max, w);
  read_number(j, "d_r_max", p.d_r_max, w);
}

void parse_gains(const json& j, ControllerGains& g) {
  const std::string w = "gains";
  check_keys(j, w, {"k_psi", "k_u", "k_r", "gamma_psi", "gamma_u", "gamma_r", "eps_ul", "eps_rl",
                    "sigma"});
  read_number(j, "k_psi", g.k_psi, w);
  read_number(j, "k_u", g.k_u, w);
  read_number(j, "k_r", g.k_r, w);
  read_number(j, "gamma_psi", g.gamma_psi, w);
  read_number(j, "gamma_u", g.gamma_u, w);
  read_number(j, "gamma_r", g.gamma_r, w);
  read_number(j, "eps_ul", g.eps_ul, w);
  read_number(j, "eps_rl", g.eps_rl, w);
  if (j.contains("sigma") && j.at("sigma").is_string()) {
    if (j.at("sigma").get<std::string>() != "fixed_point") {
      throw Error(Errc::parse, "gains.sigma must be a number or \"fixed_point\"");
    }
    g.sigma = fixed_point_sigma();
  } else {
    read_number(j, "sigma", g.sigma, w);
  }
}

void parse_reference(const json& j, ReferenceSpec& ref) {
  const std::string w = "reference";
  check_keys(j, w, {"x0", "y0", "psi0_deg", "segments", "standard_u_ld"});
  if (j.contains("standard_u_ld")) {
    double u = 0.0;
    read_number(j, "standard_u_ld", u, w);
    ref = standard_reference(u);
  }
  read_number(j, "x0", ref.x0, w);
  read_number(j, "y0", ref.y0, w);
  if (j.contains("psi0_deg")) {
    double deg = 0.0;
    read_number(j, "psi0_deg", deg, w);
    ref.psi0 = deg2rad(deg);
  }
  if (!j.contains("segments")) return;
  const json& segs = j.at("segments");
  if (!segs.is_array()) throw Error(Errc::parse, "reference.segments must be an array");
  ref.segments.clear();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const std::string sw = "reference.segments[" + std::to_string(i) + "]";
    const json& s = segs[i];
    check_keys(s, sw, {"t_start", "t_end", "u_ld", "heading", "rate"});
    ReferenceSegment seg;
    read_number(s, "t_start", seg.t_start, sw);
    if (s.contains("t_end") && s.at("t_end").is_null()) {
      seg.t_end = std::numeric_limits<double>::infinity();
    } else {
      read_number(s, "t_end", seg.t_end, sw);
    }
    read_number(s, "u_ld", seg.u_ld, sw);
    if (s.contains("heading")) seg.heading = heading_from(read_string(s.at("heading"), sw + ".heading"));
    read_number(s, "rate", seg.rate, sw);
    ref.segments.push_back(seg);
  }
}

}  // namespace

ScenarioConfig config_from_json(const json& doc) {
  check_keys(doc, "config", {"name", "method", "seed", "vessel", "gains", "emo", "cbf", "method1",
                             "sim", "initial", "reference"});
  ScenarioConfig cfg;
  // Default floor tracks the default reference speed.
  cfg.emo.u_m = cfg.reference.min_speed();
  try {
    if (doc.contains("name")) cfg.name = read_string(doc.at("name"), "name");
    if (doc.contains("method")) cfg.method = method_from_string(read_string(doc.at("method"), "method"));
    if (doc.contains("seed")) {
      if (!doc.at("seed").is_number_unsigned() && !doc.at("seed").is_number_integer()) {
        throw Error(Errc::parse, "seed must be a non-negative integer");
      }
      if (doc.at("seed").is_number_integer() && doc.at("seed").get<long long>() < 0) {
        throw Error(Errc::parse, "seed must be a non-negative integer");
      }
      cfg.seed = doc.at("seed").get<std::uint64_t>();
    }
    if (doc.contains("vessel")) parse_vessel(doc.at("vessel"), cfg.vessel);
    if (doc.contains("gains")) parse_gains(doc.at("gains"), cfg.gains);
    if (doc.contains("reference")) {
      parse_reference(doc.at("reference"), cfg.reference);
      if (!cfg.reference.segments.empty()) cfg.emo.u_m = cfg.reference.min_speed();
    }
    if (doc.contains("emo")) {
      const json& j = doc.at("emo");
      check_keys(j, "emo", {"c_u", "c_psi", "u_m"});
      read_number(j, "c_u", cfg.emo.c_u, "emo");
      read_number(j, "c_psi", cfg.emo.c_psi, "emo");
      read_number(j, "u_m", cfg.emo.u_m, "emo");
    }
    if (doc.contains("cbf")) {
      const json& j = doc.at("cbf");
      check_keys(j, "cbf", {"delta", "alpha"});
      read_number(j, "delta", cfg.cbf.delta, "cbf");
      if (j.contains("alpha")) {
        check_keys(j.at("alpha"), "cbf.alpha", {"gain", "exponent"});
        read_number(j.at("alpha"), "gain", cfg.cbf.alpha.gain, "cbf.alpha");
        read_number(j.at("alpha"), "exponent", cfg.cbf.alpha.exponent, "cbf.alpha");
      }
    }
    if (doc.contains("method1")) {
      const json& j = doc.at("method1");
      check_keys(j, "method1", {"v_max", "a_p", "a_u"});
      read_number(j, "v_max", cfg.method1.v_max, "method1");
      read_number(j, "a_p", cfg.method1.a_p, "method1");
      read_number(j, "a_u", cfg.method1.a_u, "method1");
    }
    if (doc.contains("sim")) {
      const json& j = doc.at("sim");
      check_keys(j, "sim", {"dt", "t_final", "control_period", "disturbance", "derivative_mode",
                            "surge_noise_bound", "settle_time"});
      read_number(j, "dt", cfg.dt, "sim");
      read_number(j, "t_final", cfg.t_final, "sim");
      read_number(j, "control_period", cfg.control_period, "sim");
      read_number(j, "surge_noise_bound", cfg.surge_noise_bound, "sim");
      read_number(j, "settle_time", cfg.settle_time, "sim");
      if (j.contains("disturbance")) {
        cfg.disturbance = disturbance_from(read_string(j.at("disturbance"), "sim.disturbance"));
      }
      if (j.contains("derivative_mode")) {
        const std::string mode = read_string(j.at("derivative_mode"), "sim.derivative_mode");
        if (mode == "backward") {
          cfg.derivative_mode = DerivativeMode::backward;
        } else if (mode == "analytic") {
          cfg.derivative_mode = DerivativeMode::analytic;
        } else {
          throw Error(Errc::parse, "sim.derivative_mode must be backward or analytic");
        }
      }
    }
    if (doc.contains("initial")) {
      const json& j = doc.at("initial");
      check_keys(j, "initial", {"x", "y", "psi_deg", "u", "v", "r"});
      read_number(j, "x", cfg.initial.x, "initial");
      read_number(j, "y", cfg.initial.y, "initial");
      if (j.contains("psi_deg")) {
        double deg = 0.0;
        read_number(j, "psi_deg", deg, "initial");
        cfg.initial.psi = deg2rad(deg);
      }
      read_number(j, "u", cfg.initial.u, "initial");
      read_number(j, "v", cfg.initial.v, "initial");
      read_number(j, "r", cfg.initial.r, "initial");
    }
  } catch (const json::exception& e) {
    throw Error(Errc::parse, std::string("config: ") + e.what());
  }
  return cfg;
}

json config_to_json(const ScenarioConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  j["method"] = to_string(cfg.method);
  j["seed"] = cfg.seed;
  const VesselParams& v = cfg.vessel;
  j["vessel"] = {{"m11", v.m11},         {"m22", v.m22},         {"m33", v.m33},
                 {"chi_u", v.chi_u},     {"chi_v", v.chi_v},     {"chi_r", v.chi_r},
                 {"b_u", v.b_u},         {"b_r", v.b_r},         {"eps_r", v.eps_r},
                 {"d_u_max", v.d_u_max}, {"d_v_max", v.d_v_max}, {"d_r_max", v.d_r_max}};
  const ControllerGains& g = cfg.gains;
  j["gains"] = {{"k_psi", g.k_psi},       {"k_u", g.k_u},         {"k_r", g.k_r},
                {"gamma_psi", g.gamma_psi}, {"gamma_u", g.gamma_u}, {"gamma_r", g.gamma_r},
                {"eps_ul", g.eps_ul},     {"eps_rl", g.eps_rl},   {"sigma", g.sigma}};
  j["emo"] = {{"c_u", cfg.emo.c_u}, {"c_psi", cfg.emo.c_psi}, {"u_m", cfg.emo.u_m}};
  j["cbf"] = {{"delta", cfg.cbf.delta},
              {"alpha", {{"gain", cfg.cbf.alpha.gain}, {"exponent", cfg.cbf.alpha.exponent}}}};
  j["method1"] = {{"v_max", cfg.method1.v_max}, {"a_p", cfg.method1.a_p}, {"a_u", cfg.method1.a_u}};
  j["sim"] = {{"dt", cfg.dt},
              {"t_final", cfg.t_final},
              {"control_period", cfg.control_period},
              {"disturbance", disturbance_name(cfg.disturbance)},
              {"derivative_mode",
               cfg.derivative_mode == DerivativeMode::analytic ? "analytic" : "backward"},
              {"surge_noise_bound", cfg.surge_noise_bound},
              {"settle_time", cfg.settle_time}};
  j["initial"] = {{"x", cfg.initial.x},
                  {"y", cfg.initial.y},
                  {"psi_deg", rad2deg(cfg.initial.psi)},
                  {"u", cfg.initial.u},
                  {"v", cfg.initial.v},
                  {"r", cfg.initial.r}};
  json segs = json::array();
  for (const auto& s : cfg.reference.segments) {
    json js = {{"t_start", s.t_start},
               {"u_ld", s.u_ld},
               {"heading", heading_name(s.heading)},
               {"rate", s.rate}};
    js["t_end"] = std::isfinite(s.t_end) ? json(s.t_end) : json(nullptr);
    segs.push_back(js);
  }
  j["reference"] = {{"x0", cfg.reference.x0},
                    {"y0", cfg.reference.y0},
                    {"psi0_deg", rad2deg(cfg.reference.psi0)},
                    {"segments", segs}};
  return j;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open config " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw Error(Errc::parse, "config " + path + ": " + e.what());
  }
  // A run manifest embeds its complete config snapshot.
  if (doc.is_object() && doc.contains("config") && doc.contains("manifest_version")) {
    return config_from_json(doc.at("config"));
  }
  return config_from_json(doc);
}

ValidationReport validate_config(const ScenarioConfig& cfg) {
  std::vector<std::string> issues;
  auto append = [&issues](std::vector<std::string> more) {
    issues.insert(issues.end(), more.begin(), more.end());
  };
  append(cfg.vessel.validate());
  append(cfg.gains.validate());
  append(cfg.cbf.validate());
  append(cfg.method1.validate());
  append(cfg.reference.validate(cfg.emo.u_m));

  if (!(cfg.emo.c_u > 0.0)) issues.emplace_back("emo.c_u must be > 0");
  if (!(cfg.emo.c_psi > 0.0)) issues.emplace_back("emo.c_psi must be > 0");
  if (!(cfg.emo.u_m > 0.0)) issues.emplace_back("emo.u_m must be > 0");

  ValidationReport report;
  report.kappa = cfg.emo.kappa;
  report.gain_margin = check_gain_condition(cfg.emo);
  if (!(report.gain_margin > 0.0)) {
    issues.push_back("gain condition violated: c_psi u_m - 2 c_u kappa = " +
                     std::to_string(report.gain_margin) + " <= 0");
  }

  if (!(cfg.dt > 0.0)) issues.emplace_back("sim.dt must be > 0");
  if (!(cfg.t_final > 0.0)) issues.emplace_back("sim.t_final must be > 0");
  if (cfg.dt > 0.0 && cfg.t_final > 0.0 &&
      std::abs(cfg.t_final / cfg.dt - std::round(cfg.t_final / cfg.dt)) > 1e-6) {
    issues.emplace_back("sim.t_final must be a whole number of steps");
  }
  if (!(cfg.control_period >= 0.0)) issues.emplace_back("sim.control_period must be >= 0");
  if (cfg.control_period > 0.0 && cfg.dt > 0.0 &&
      std::abs(cfg.control_period / cfg.dt - std::round(cfg.control_period / cfg.dt)) > 1e-6) {
    issues.emplace_back("sim.control_period must be a multiple of sim.dt");
  }
  if (!(cfg.surge_noise_bound > 0.0)) issues.emplace_back("sim.surge_noise_bound must be > 0");
  if (!(cfg.settle_time >= 0.0)) issues.emplace_back("sim.settle_time must be >= 0");
  if (!cfg.reference.segments.empty() && cfg.reference.t_end() < cfg.t_final) {
    issues.emplace_back("reference ends before sim.t_final");
  }
  const VesselState& s0 = cfg.initial;
  for (double x : {s0.x, s0.y, s0.psi, s0.u, s0.v, s0.r}) {
    if (!std::isfinite(x)) {
      issues.emplace_back("initial state must be finite");
      break;
    }
  }

  if (!issues.empty()) throw ValidationError(std::move(issues));

  report.contraction_rate = contraction_rate(cfg.emo);
  report.lyapunov_rate = lyapunov_rate(report.contraction_rate, cfg.gains);
  const Method1Threshold th = method1_threshold(cfg.method1, cfg.emo, cfg.gains);
  report.method1_rhs = th.rhs;
  report.method1_satisfied = th.satisfied;
  if (cfg.method == Method::relaxed && !th.satisfied) {
    report.warnings.push_back("u_m = " + std::to_string(cfg.emo.u_m) +
                              " does not exceed the sufficient surge-floor threshold " +
                              std::to_string(th.rhs) + "; surge positivity after t_c is not guaranteed");
  }
  if (cfg.method == Method::cbf && !(cfg.initial.u > cfg.cbf.delta)) {
    report.warnings.emplace_back("initial surge speed does not exceed the barrier margin delta");
  }
  if (cfg.method != Method::relaxed && !(cfg.initial.u > 0.0)) {
    report.warnings.emplace_back("initial surge speed is not positive and no startup replacement is active");
  }
  return report;
}

std::vector<std::string> preset_names() { return {"fig2-nominal", "fig5-slow", "fig6-threshold"}; }

ScenarioConfig preset(const std::string& name) {
  double u_ld = 0.0;
  if (name == "fig2-nominal") {
    u_ld = 10.0;
  } else if (name == "fig5-slow") {
    u_ld = 1.3;
  } else if (name == "fig6-threshold") {
    u_ld = 1.8;
  } else {
    throw Error(Errc::parse, "unknown preset '" + name + "'");
  }
  ScenarioConfig cfg;
  cfg.name = name;
  cfg.reference = standard_reference(u_ld);
  cfg.emo.u_m = u_ld;
  return cfg;
}

json report_to_json(const ValidationReport& r) {
  return {{"kappa", r.kappa},
          {"gain_margin", r.gain_margin},
          {"contraction_rate", r.contraction_rate},
          {"lyapunov_rate", r.lyapunov_rate},
          {"method1_rhs", r.method1_rhs},
          {"method1_satisfied", r.method1_satisfied},
          {"warnings", r.warnings}};
}

json manifest_to_json(const RunManifest& m) {
  return {{"manifest_version", 1},
          {"scenario", m.scenario},
          {"seed", m.seed},
          {"method", to_string(m.config.method)},
          {"config", config_to_json(m.config)},
          {"validation", report_to_json(m.report)},
          {"outputs",
           {{"trace", m.trace_path}, {"metrics", m.metrics_path}, {"config", m.config_path}}}};
}

}  // namespace pcttrack
