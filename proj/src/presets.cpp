#include "mml/presets.hpp"

namespace mml {

namespace {

std::vector<Preset> make_presets() {
  std::vector<Preset> out;

  {
    Preset p{"fig2", "quench of the sweet-point chain, lambda(t) and 1 - lambda_st vs epsilon/delta", {}, {}};
    p.config.scenario = Scenario::quench;
    p.config.name = "fig2";
    p.config.quench.L = 100;
    p.config.quench.zeta = 0.5;
    p.config.quench.epsilon = 1.0;
    p.config.quench.delta_over_epsilon = {2, 4, 8, 16};
    p.provenance = {"L=100", "ζ=1/2", "Δ/ε ∈ {2,4,8,16} (legend values not given in the text)",
                    "dt=0.05/Δ"};
    out.push_back(p);
  }
  {
    Preset p{"fig3", "zeta-averaged quench", {}, {}};
    p.config.scenario = Scenario::quench_averaged;
    p.config.name = "fig3";
    p.config.quench.L = 100;
    p.config.quench.zeta_min = 0.02;
    p.config.quench.zeta_max = 1.0;
    p.config.quench.zeta_points = 50;
    p.provenance = {"L=100", "50 equispaced ζ in [0.02, 1]", "Δ/ε ∈ {2,4,8,16}"};
    out.push_back(p);
  }
  {
    Preset p{"fig5", "infinite-temperature bath: lambda, decoding and global fidelity vs t for several L", {}, {}};
    p.config.scenario = Scenario::thermal_beta0;
    p.config.name = "fig5";
    p.config.bath.family = SpectralFamily::tabulated;
    p.config.bath.delta = 1.0;
    p.config.bath.g2f_0 = 4.0;
    p.config.bath.g2f_delta = 0.3 * 4.0;
    p.config.bath.g2f_2delta = 0.09 * 4.0;
    p.config.bath.beta = 0.0;
    p.config.thermal.L_list = {4, 5, 6, 7, 8, 9};
    p.config.thermal.t_max = 2.0;
    p.provenance = {"Δ=1", "g²f(0)=4", "f(Δ)=0.3f(0)", "f(2Δ)=0.3²f(0)", "β=0",
                    "L ∈ {4..9} (L up to 11 with --long-run)"};
    out.push_back(p);
  }
  {
    Preset p{"fig5-inset", "memory time t*(L) at F_thr = 0.99, with the diffusive control", {}, {}};
    p.config.scenario = Scenario::memory_time_scaling;
    p.config.name = "fig5-inset";
    p.config.bath = out.back().config.bath;
    p.config.thermal.L_list = {4, 5, 6, 7, 8, 9};
    p.config.thermal.F_thr = 0.99;
    p.config.thermal.t_max = 20.0;
    p.config.thermal.sample_dt = 0.005;
    p.config.thermal.diffusive_control = true;
    p.provenance = {"F_opt(t*)=0.99", "g²f(0)=4", "f(Δ)=0.3f(0)", "f(2Δ)=0.3²f(0)",
                    "diffusive control: φ(±2Δ)=0"};
    out.push_back(p);
  }
  {
    Preset p{"fig6", "fidelity loss at t = 1/delta vs beta delta, super-ohmic bath", {}, {}};
    p.config.scenario = Scenario::arrhenius;
    p.config.name = "fig6";
    p.config.bath.family = SpectralFamily::super_ohmic;
    p.config.bath.delta = 1.0;
    p.config.bath.omega_cut = 5.0;
    p.config.bath.g2f_0 = 0.0;
    p.config.thermal.arrhenius_L = 6;
    p.config.thermal.arrhenius_L_long = 8;
    p.config.thermal.t_eval = 1.0;
    p.config.thermal.t_max = 1.0;
    p.config.thermal.g2f_delta_list = {0.1, 0.3, 1.0};
    p.config.thermal.beta_delta_grid = {1, 2, 3, 4, 5, 6};
    p.provenance = {"Ω=5Δ", "f(ω) ∝ ω²e^{-ω/Ω}", "f(2Δ)=4e^{-1/5}f(Δ)", "f(0)=0", "t=1/Δ",
                    "L=6 (L=8 with --long-run)"};
    out.push_back(p);
  }
  return out;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> p = make_presets();
  return p;
}

const Preset& find_preset(const std::string& name) {
  for (const auto& p : presets())
    if (p.name == name) return p;
  std::string names;
  for (const auto& p : presets()) names += (names.empty() ? "" : ", ") + p.name;
  throw ValidationError("unknown preset '" + name + "' (available: " + names + ")");
}

std::string presets_listing() {
  std::string out;
  for (const auto& p : presets()) {
    out += p.name + " [" + to_string(p.config.scenario) + "]: " + p.summary + "\n";
    for (const auto& line : p.provenance) out += p.name + ": " + line + "\n";
  }
  return out;
}

}  // namespace mml
