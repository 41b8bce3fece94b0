#include "mml/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace mml {

namespace {

void check_keys(const YAML::Node& node, const std::string& where, const std::set<std::string>& allowed) {
  if (!node.IsMap()) throw ConfigParseError(where + ": expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) {
      std::string names;
      for (const auto& a : allowed) names += (names.empty() ? "" : ", ") + a;
      throw ConfigParseError("unknown key '" + (where.empty() ? key : where + "." + key) +
                             "' (allowed: " + names + ")");
    }
  }
}

template <typename T>
void read(const YAML::Node& node, const std::string& key, const std::string& where, T& out) {
  const YAML::Node v = node[key];
  if (!v) return;
  try {
    out = v.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigParseError("key '" + where + key + "' has a value of the wrong type");
  }
}

SpectralFamily family_from_string(const std::string& s) {
  if (s == "super-ohmic") return SpectralFamily::super_ohmic;
  if (s == "tabulated") return SpectralFamily::tabulated;
  throw ConfigParseError("bath.family must be 'super-ohmic' or 'tabulated', got '" + s + "'");
}

ExperimentConfig from_node(const YAML::Node& root) {
  if (!root || root.IsNull()) throw ConfigParseError("config document is empty");
  check_keys(root, "", {"scenario", "name", "seed", "long_run", "quench", "bath", "thermal"});
  ExperimentConfig cfg;
  std::string scenario;
  read(root, "scenario", "", scenario);
  if (scenario.empty()) throw ConfigParseError("config needs a 'scenario' key");
  try {
    cfg.scenario = scenario_from_string(scenario);
  } catch (const ValidationError& e) {
    throw ConfigParseError(e.what());
  }
  read(root, "name", "", cfg.name);
  read(root, "seed", "", cfg.seed);
  read(root, "long_run", "", cfg.long_run);

  if (const YAML::Node q = root["quench"]) {
    check_keys(q, "quench",
               {"L", "epsilon", "zeta", "delta_over_epsilon", "zeta_grid", "dt_delta", "window", "output_stride"});
    auto& p = cfg.quench;
    const std::string w = "quench.";
    read(q, "L", w, p.L);
    read(q, "epsilon", w, p.epsilon);
    read(q, "zeta", w, p.zeta);
    read(q, "delta_over_epsilon", w, p.delta_over_epsilon);
    read(q, "dt_delta", w, p.dt_delta);
    read(q, "output_stride", w, p.output_stride);
    if (const YAML::Node g = q["zeta_grid"]) {
      check_keys(g, "quench.zeta_grid", {"min", "max", "points"});
      read(g, "min", "quench.zeta_grid.", p.zeta_min);
      read(g, "max", "quench.zeta_grid.", p.zeta_max);
      read(g, "points", "quench.zeta_grid.", p.zeta_points);
    }
    if (const YAML::Node g = q["window"]) {
      check_keys(g, "quench.window", {"lo", "hi", "tmax_fraction"});
      read(g, "lo", "quench.window.", p.window_lo);
      read(g, "hi", "quench.window.", p.window_hi);
      read(g, "tmax_fraction", "quench.window.", p.tmax_fraction);
    }
  }

  if (const YAML::Node b = root["bath"]) {
    check_keys(b, "bath", {"family", "delta", "g2f_0", "g2f_delta", "g2f_2delta", "omega_cut", "beta", "lamb_shift"});
    auto& p = cfg.bath;
    const std::string w = "bath.";
    std::string family;
    read(b, "family", w, family);
    if (!family.empty()) p.family = family_from_string(family);
    read(b, "delta", w, p.delta);
    read(b, "g2f_0", w, p.g2f_0);
    read(b, "g2f_delta", w, p.g2f_delta);
    read(b, "g2f_2delta", w, p.g2f_2delta);
    read(b, "omega_cut", w, p.omega_cut);
    read(b, "beta", w, p.beta);
    read(b, "lamb_shift", w, p.lamb_shift);
  }

  if (const YAML::Node t = root["thermal"]) {
    check_keys(t, "thermal",
               {"L", "beta", "g2f_delta", "beta_delta", "arrhenius_L", "arrhenius_L_long", "t_max", "sample_dt", "dt",
                "t_eval", "F_thr", "diffusive_control", "global_fidelity", "theta2", "kernel"});
    auto& p = cfg.thermal;
    const std::string w = "thermal.";
    read(t, "L", w, p.L_list);
    read(t, "beta", w, p.beta_list);
    read(t, "g2f_delta", w, p.g2f_delta_list);
    read(t, "beta_delta", w, p.beta_delta_grid);
    read(t, "arrhenius_L", w, p.arrhenius_L);
    read(t, "arrhenius_L_long", w, p.arrhenius_L_long);
    read(t, "t_max", w, p.t_max);
    read(t, "sample_dt", w, p.sample_dt);
    read(t, "dt", w, p.dt);
    read(t, "t_eval", w, p.t_eval);
    read(t, "F_thr", w, p.F_thr);
    read(t, "diffusive_control", w, p.diffusive_control);
    read(t, "global_fidelity", w, p.global_fidelity);
    read(t, "theta2", w, p.theta2);
    std::string kernel;
    read(t, "kernel", w, kernel);
    if (!kernel.empty()) {
      try {
        p.kernel = kernel_from_string(kernel);
      } catch (const Error& e) {
        throw ConfigParseError(e.what());
      }
    }
  }
  return cfg;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigParseError(std::string("malformed config: ") + e.what());
  }
  return from_node(root);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParseError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_yaml(const ExperimentConfig& cfg) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "scenario" << YAML::Value << to_string(cfg.scenario);
  e << YAML::Key << "name" << YAML::Value << cfg.name;
  e << YAML::Key << "seed" << YAML::Value << cfg.seed;
  e << YAML::Key << "long_run" << YAML::Value << cfg.long_run;

  const auto& q = cfg.quench;
  e << YAML::Key << "quench" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "L" << YAML::Value << q.L;
  e << YAML::Key << "epsilon" << YAML::Value << q.epsilon;
  e << YAML::Key << "zeta" << YAML::Value << q.zeta;
  e << YAML::Key << "delta_over_epsilon" << YAML::Value << YAML::Flow << q.delta_over_epsilon;
  e << YAML::Key << "zeta_grid" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "min"
    << YAML::Value << q.zeta_min << YAML::Key << "max" << YAML::Value << q.zeta_max << YAML::Key << "points"
    << YAML::Value << q.zeta_points << YAML::EndMap;
  e << YAML::Key << "dt_delta" << YAML::Value << q.dt_delta;
  e << YAML::Key << "window" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "lo" << YAML::Value
    << q.window_lo << YAML::Key << "hi" << YAML::Value << q.window_hi << YAML::Key << "tmax_fraction"
    << YAML::Value << q.tmax_fraction << YAML::EndMap;
  e << YAML::Key << "output_stride" << YAML::Value << q.output_stride;
  e << YAML::EndMap;

  const auto& b = cfg.bath;
  e << YAML::Key << "bath" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "family" << YAML::Value << to_string(b.family);
  e << YAML::Key << "delta" << YAML::Value << b.delta;
  e << YAML::Key << "g2f_0" << YAML::Value << b.g2f_0;
  e << YAML::Key << "g2f_delta" << YAML::Value << b.g2f_delta;
  e << YAML::Key << "g2f_2delta" << YAML::Value << b.g2f_2delta;
  e << YAML::Key << "omega_cut" << YAML::Value << b.omega_cut;
  e << YAML::Key << "beta" << YAML::Value << b.beta;
  e << YAML::Key << "lamb_shift" << YAML::Value << b.lamb_shift;
  e << YAML::EndMap;

  const auto& t = cfg.thermal;
  e << YAML::Key << "thermal" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "L" << YAML::Value << YAML::Flow << t.L_list;
  e << YAML::Key << "beta" << YAML::Value << YAML::Flow << t.beta_list;
  e << YAML::Key << "g2f_delta" << YAML::Value << YAML::Flow << t.g2f_delta_list;
  e << YAML::Key << "beta_delta" << YAML::Value << YAML::Flow << t.beta_delta_grid;
  e << YAML::Key << "arrhenius_L" << YAML::Value << t.arrhenius_L;
  e << YAML::Key << "arrhenius_L_long" << YAML::Value << t.arrhenius_L_long;
  e << YAML::Key << "t_max" << YAML::Value << t.t_max;
  e << YAML::Key << "sample_dt" << YAML::Value << t.sample_dt;
  e << YAML::Key << "dt" << YAML::Value << t.dt;
  e << YAML::Key << "t_eval" << YAML::Value << t.t_eval;
  e << YAML::Key << "F_thr" << YAML::Value << t.F_thr;
  e << YAML::Key << "diffusive_control" << YAML::Value << t.diffusive_control;
  e << YAML::Key << "global_fidelity" << YAML::Value << t.global_fidelity;
  e << YAML::Key << "theta2" << YAML::Value << t.theta2;
  e << YAML::Key << "kernel" << YAML::Value << to_string(t.kernel);
  e << YAML::EndMap;

  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

}  // namespace mml
