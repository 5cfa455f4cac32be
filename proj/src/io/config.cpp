#include "pdclab/io/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "pdclab/errors.hpp"

namespace pdclab::io {

namespace {

using P = ParamType;

ParamSpec num(std::string key, Json def, std::string help) {
  return {std::move(key), P::number, std::move(def), std::move(help)};
}
ParamSpec integer(std::string key, Json def, std::string help) {
  return {std::move(key), P::integer, std::move(def), std::move(help)};
}
ParamSpec text(std::string key, Json def, std::string help) {
  return {std::move(key), P::text, std::move(def), std::move(help)};
}
ParamSpec list(std::string key, Json def, std::string help) {
  return {std::move(key), P::number_list, std::move(def), std::move(help)};
}
ParamSpec flag(std::string key, std::string help) {
  return {std::move(key), P::boolean, false, std::move(help)};
}

std::vector<ParamSpec> state_params(double eps_par = 1.0) {
  return {
      num("f", 1.0, "magnitude of f in |HH> + f|VV>"),
      num("f_phase_deg", 0.0, "phase of f"),
      num("eps_par", eps_par, "polarizer transmission along its axis"),
      num("eps_perp", 0.0, "polarizer leakage normal to its axis"),
      num("alignment", 1.0, "spatial overlap factor on the interference term"),
  };
}

std::vector<ParamSpec> geometry_params() {
  return {
      num("separation_m", 100e-6, "slit separation"),
      num("width_m", 10e-6, "slit width"),
      num("wavelength_m", 702e-9, "photon wavelength"),
      num("incidence_a_deg", 0.0, "incidence angle on slit A"),
      num("incidence_b_deg", 0.0, "incidence angle on slit B"),
      num("det1_distance_m", 1.21, "slit-to-detector-1 distance"),
      num("det2_distance_m", 1.5, "slit-to-detector-2 distance"),
      num("aperture1_m", 2e-3, "detector-1 aperture width (0 = point)"),
      num("aperture2_m", 2e-3, "detector-2 aperture width (0 = point)"),
  };
}

std::vector<ParamSpec> source_params(bool with_kind) {
  std::vector<ParamSpec> p;
  if (with_kind) p.push_back(text("source", "coherent", "heralded | coherent | thermal"));
  const std::vector<ParamSpec> rest{
      num("mean_per_gate", 0.1, "mean photons per gate (coherent, thermal)"),
      integer("modes", 1, "thermal modes"),
      num("split_ratio", 0.5, "probability of routing to detector 1"),
      num("eta1", 1.0, "detector-1 efficiency"),
      num("eta2", 1.0, "detector-2 efficiency"),
      num("dark_per_gate_1", 0.0, "detector-1 dark counts per gate"),
      num("dark_per_gate_2", 0.0, "detector-2 dark counts per gate"),
      num("heralding_fidelity", 1.0, "probability the heralded photon is present"),
      num("background_per_gate", 0.0, "uncorrelated photons per gate"),
      num("trigger_rate_hz", 0.0, "herald trigger rate"),
      num("trigger_efficiency", 1.0, "heralds per emitted pair"),
      num("gate_width_s", 7e-9, "gate width"),
  };
  p.insert(p.end(), rest.begin(), rest.end());
  return p;
}

std::vector<ParamSpec> concat(std::vector<ParamSpec> a, const std::vector<ParamSpec> &b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<CommandSpec> build_table() {
  std::vector<CommandSpec> t;

  t.push_back({"bell", "scan", "coincidence curve and CH sum at given settings",
               concat(state_params(), {
                   num("fixed_theta_deg", 0.0, "arm-2 analyzer angle during the scan"),
                   integer("scan_steps", 181, "samples of the arm-1 angle over [0, 180]"),
                   num("theta1_deg", 67.5, "CH setting theta1"),
                   num("theta2_deg", 45.0, "CH setting theta2"),
                   num("theta1p_deg", 22.5, "CH setting theta1'"),
                   num("theta2p_deg", 0.0, "CH setting theta2'"),
               })});

  t.push_back({"bell", "optimize", "settings of maximal CH violation",
               concat(state_params(), {
                   num("grid_step_deg", 3.0, "coarse grid spacing (<= 3)"),
                   num("resolution_deg", 0.001, "final refinement step"),
               })});

  t.push_back({"loophole", "map", "CH per pair over (f, eta) with true singles",
               {
                   num("f_min", 0.02, "smallest f"),
                   num("f_max", 1.0, "largest f"),
                   integer("f_steps", 50, "f samples"),
                   num("eta_min", 0.6, "smallest efficiency"),
                   num("eta_max", 1.0, "largest efficiency"),
                   integer("eta_steps", 50, "efficiency samples"),
                   num("eps_par", 0.99, "polarizer transmission along its axis"),
                   num("eps_perp", 0.0, "polarizer leakage normal to its axis"),
                   num("background", 0.0, "background singles probability per pair"),
                   num("grid_step_deg", 3.0, "optimizer grid spacing"),
                   list("levels", Json::array({0.0, 0.05, 0.1, 0.15, 0.2}), "contour levels"),
               }});

  t.push_back({"loophole", "critical", "critical detection efficiency against f",
               {
                   list("f_values", Json::array({1.0, 0.5, 0.2, 0.1, 0.05, 0.02}), "f values"),
                   num("eps_par", 1.0, "polarizer transmission along its axis"),
                   num("eps_perp", 0.0, "polarizer leakage normal to its axis"),
                   num("background", 0.0, "background singles probability per pair"),
                   num("tolerance", 1e-5, "bisection interval width"),
               }});

  t.push_back({"loophole", "santos", "minimum detectable rate and absorption-time bound",
               {
                   num("eta", 0.51, "detection quantum efficiency"),
                   num("focal_m", 0.009, "lens focal length"),
                   num("radius_m", 0.001, "active radius of the crystal"),
                   num("distance_m", 0.75, "crystal-to-detector distance"),
                   num("coherence_s", 4.2e-13, "coherence time"),
                   num("wavelength_m", 7.11e-7, "mean detected wavelength"),
                   num("depth_m", 3e-5, "active detector depth"),
                   num("absorb_s", 1.0, "absorption time"),
                   num("singles_rate_hz", nullptr, "measured singles rate"),
               }});

  t.push_back({"loophole", "visibility", "visibility test of the local model",
               {
                   num("n0", nullptr, "counts at relative angle 0"),
                   num("n90", nullptr, "counts at relative angle 90 deg"),
                   num("n22p5", nullptr, "counts at relative angle 22.5 deg"),
                   num("n67p5", nullptr, "counts at relative angle 67.5 deg"),
                   num("eta", 0.51, "detection efficiency"),
               }});

  t.push_back({"slit", "pattern", "two-detector coincidence map",
               concat(geometry_params(), {
                   num("x1_min_m", -0.03, "detector-1 scan start"),
                   num("x1_max_m", 0.03, "detector-1 scan end"),
                   integer("x1_steps", 61, "detector-1 samples"),
                   num("x2_min_m", -0.03, "detector-2 scan start"),
                   num("x2_max_m", 0.03, "detector-2 scan end"),
                   integer("x2_steps", 61, "detector-2 samples"),
               })});

  t.push_back({"slit", "scan", "coincidence curve along x1 with x2 fixed",
               concat(geometry_params(), {
                   num("x2_m", -0.055, "fixed detector-2 offset"),
                   num("x1_min_m", -0.04, "scan start"),
                   num("x1_max_m", 0.04, "scan end"),
                   integer("x1_steps", 801, "samples"),
               })});

  t.push_back({"slit", "fit", "chi-square comparison of the pattern and a straight line",
               concat(geometry_params(), {
                   text("data_path", "", "CSV with x1_m,count[,sigma]; empty = synthetic"),
                   num("x2_m", -0.055, "fixed detector-2 offset"),
                   num("x1_min_m", -0.03, "synthetic scan start"),
                   num("x1_max_m", 0.0, "synthetic scan end"),
                   integer("points", 60, "synthetic samples"),
                   num("peak_counts", 100.0, "synthetic counts at the pattern maximum"),
                   integer("seed", 1, "synthetic noise seed"),
                   flag("free_offset", "fit a constant offset with the amplitude"),
               })});

  t.push_back({"alpha", "simulate", "gated Monte Carlo of the alpha statistic",
               concat(source_params(true), {
                   integer("gates", 1000000, "number of gates"),
                   integer("seed", 1, "random seed"),
                   integer("bootstrap", 0, "bootstrap replicates for sigma (0 = off)"),
               })});

  t.push_back({"alpha", "expected", "expected alpha of a source model", source_params(true)});

  {
    auto p = source_params(false);
    for (auto &q : p) {
      if (q.key == "eta1" || q.key == "eta2") q.default_value = 0.51;
      if (q.key == "dark_per_gate_1" || q.key == "dark_per_gate_2") q.default_value = 300.0 * 7e-9;
      if (q.key == "heralding_fidelity") q.default_value = 0.3;
      if (q.key == "trigger_efficiency") q.default_value = 0.1;
    }
    std::erase_if(p, [](const ParamSpec &q) {
      return q.key == "mean_per_gate" || q.key == "modes" || q.key == "trigger_rate_hz";
    });
    t.push_back({"alpha", "rate-scan", "heralded-source alpha against trigger rate",
                 concat(p, {
                     list("rates_hz", Json::array({2000.0, 5000.0, 10000.0, 20000.0}),
                          "trigger rates"),
                     num("acquisition_s", 500.0, "acquisition time per rate"),
                     integer("seed", 1, "random seed"),
                 })});
  }

  t.push_back({"counts", "accidentals", "accidental coincidence rate, analytic and Monte Carlo",
               {
                   num("rate1_hz", 1e5, "start-channel rate"),
                   num("rate2_hz", 1e5, "stop-channel rate"),
                   num("window_s", 7e-9, "coincidence window"),
                   num("duration_s", 1.0, "acquisition time"),
                   integer("mc_starts", 1000000, "simulated start events"),
                   integer("seed", 1, "random seed"),
               }});
  return t;
}

std::string type_name(ParamType t) {
  switch (t) {
  case P::number: return "a number";
  case P::integer: return "an integer";
  case P::text: return "a string";
  case P::number_list: return "a list of numbers";
  case P::boolean: return "a boolean";
  }
  return "?";
}

} // namespace

const ParamSpec *CommandSpec::find(const std::string &key) const {
  for (const auto &p : params)
    if (p.key == key) return &p;
  return nullptr;
}

const std::vector<CommandSpec> &command_table() {
  static const std::vector<CommandSpec> table = build_table();
  return table;
}

const CommandSpec &find_command(const std::string &full_name) {
  for (const auto &c : command_table())
    if (c.full_name() == full_name) return c;
  throw InvalidInput("unknown command '" + full_name + "'");
}

Json coerce_param(const ParamSpec &p, const Json &v) {
  auto bad = [&]() { return InvalidInput("key '" + p.key + "' must be " + type_name(p.type)); };
  switch (p.type) {
  case P::number:
    if (!v.is_number()) throw bad();
    if (!std::isfinite(v.get<double>())) throw bad();
    return v.get<double>();
  case P::integer:
    if (v.is_number_integer()) return v;
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9.0e15)
        return static_cast<std::int64_t>(d);
    }
    throw bad();
  case P::text:
    if (!v.is_string()) throw bad();
    return v;
  case P::boolean:
    if (!v.is_boolean()) throw bad();
    return v;
  case P::number_list: {
    if (!v.is_array()) throw bad();
    Json out = Json::array();
    for (const auto &e : v) {
      if (!e.is_number() || !std::isfinite(e.get<double>())) throw bad();
      out.push_back(e.get<double>());
    }
    return out;
  }
  }
  throw bad();
}

Json resolve_inputs(const CommandSpec &cmd, const Json &config_inputs, const Json &overrides) {
  Json out = Json::object();
  for (const auto &p : cmd.params) out[p.key] = p.default_value;
  for (const Json *layer : {&config_inputs, &overrides}) {
    if (layer->is_null()) continue;
    if (!layer->is_object()) throw InvalidInput("key 'inputs' must be an object");
    for (auto it = layer->begin(); it != layer->end(); ++it) {
      const ParamSpec *p = cmd.find(it.key());
      if (!p)
        throw InvalidInput("unknown key '" + it.key() + "' for command '" + cmd.full_name() + "'");
      out[it.key()] = coerce_param(*p, it.value());
    }
  }
  for (const auto &p : cmd.params)
    if (out[p.key].is_null())
      throw InvalidInput("missing required key '" + p.key + "' for command '" + cmd.full_name() +
                         "'");
  return out;
}

RunConfig parse_run_config(const Json &doc) {
  if (!doc.is_object()) throw InvalidInput("config must be a JSON object");
  static const std::set<std::string> echo_keys{"run_id", "outputs", "artifacts", "tool_version"};
  RunConfig rc;
  Json top_seed;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string &k = it.key();
    if (k == "version") {
      if (!it->is_string() || it->get<std::string>() != kConfigVersion)
        throw InvalidInput("key 'version' must be \"" + std::string(kConfigVersion) + "\"");
    } else if (k == "command") {
      if (!it->is_string()) throw InvalidInput("key 'command' must be a string");
      rc.command = it->get<std::string>();
      find_command(rc.command);
    } else if (k == "inputs") {
      if (!it->is_object()) throw InvalidInput("key 'inputs' must be an object");
      rc.inputs = *it;
    } else if (k == "seed") {
      top_seed = *it;
    } else if (!echo_keys.count(k)) {
      throw InvalidInput("unknown key '" + k + "' in config");
    }
  }
  if (!top_seed.is_null()) {
    if (!top_seed.is_number_integer()) throw InvalidInput("key 'seed' must be an integer");
    if (rc.inputs.contains("seed") && rc.inputs["seed"] != top_seed)
      throw InvalidInput("key 'seed' disagrees with inputs.seed");
    rc.inputs["seed"] = top_seed;
  }
  return rc;
}

RunConfig load_run_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error &e) {
    throw InvalidInput("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_run_config(doc);
}

const Json &Inputs::at(const std::string &key) const {
  if (!j_.contains(key)) throw InvalidInput("missing key '" + key + "'");
  return j_.at(key);
}

double Inputs::number(const std::string &key) const { return at(key).get<double>(); }

std::int64_t Inputs::integer(const std::string &key) const {
  return at(key).get<std::int64_t>();
}

std::uint64_t Inputs::seed(const std::string &key) const {
  const Json &v = at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  const auto s = v.get<std::int64_t>();
  if (s < 0) throw InvalidInput("key '" + key + "' must be non-negative");
  return static_cast<std::uint64_t>(s);
}

std::string Inputs::text(const std::string &key) const { return at(key).get<std::string>(); }

std::vector<double> Inputs::list(const std::string &key) const {
  return at(key).get<std::vector<double>>();
}

bool Inputs::flag(const std::string &key) const { return at(key).get<bool>(); }

} // namespace pdclab::io
