#include "pdclab/io/run.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "pdclab/errors.hpp"
#include "pdclab/io/commands.hpp"

namespace fs = std::filesystem;

namespace pdclab::io {

namespace {

std::string read_file(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path &p, const std::string &content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + p.string() + "'");
  out << content;
  if (!out) throw InvalidInput("failed writing '" + p.string() + "'");
}

std::string dashed(std::string key) {
  for (char &c : key)
    if (c == '_') c = '-';
  return key;
}

double parse_double(const std::string &flag, const std::string &s) {
  double v = 0.0;
  const char *b = s.data(), *e = s.data() + s.size();
  auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e)
    throw InvalidInput("option " + flag + ": '" + s + "' is not a number");
  return v;
}

/// Turns a flag's text into JSON of the parameter's type; coerce_param then
/// enforces the type exactly as it does for config files.
Json flag_value(const ParamSpec &p, const std::string &s) {
  const std::string flag = "--" + dashed(p.key);
  switch (p.type) {
  case ParamType::text: return s;
  case ParamType::boolean: return s != "false" && s != "0";
  case ParamType::number_list: {
    Json arr = Json::array();
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) arr.push_back(parse_double(flag, item));
    return arr;
  }
  case ParamType::integer: {
    std::int64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec == std::errc() && res.ptr == s.data() + s.size()) return v;
    return parse_double(flag, s);
  }
  case ParamType::number: return parse_double(flag, s);
  }
  return nullptr;
}

struct LeafOptions {
  const CommandSpec *spec = nullptr;
  CLI::App *app = nullptr;
  std::map<std::string, std::string> values;
  std::map<std::string, bool> flags;
  std::map<std::string, CLI::Option *> options;
};

} // namespace

std::string default_output_root() {
  const char *env = std::getenv(kOutDirEnv);
  return (env && *env) ? std::string(env) : std::string("runs");
}

std::string run_id_for(const std::string &command, const Json &resolved_inputs) {
  const Json canon = {{"version", kConfigVersion}, {"command", command}, {"inputs", resolved_inputs}};
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canon.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunOutcome run_command(const std::string &command, const Json &config_inputs,
                       const Json &overrides, bool plot, const std::string &out_root) {
  const CommandSpec &spec = find_command(command);
  const Json inputs = resolve_inputs(spec, config_inputs, overrides);
  const CommandResult result = execute_command(spec, Inputs(inputs), plot);

  RunOutcome o;
  o.csv = result.table.str();
  const std::string id = run_id_for(command, inputs);
  const fs::path dir = fs::path(out_root) / (spec.group + "-" + spec.name + "-" + id);
  o.run_dir = dir.string();

  Json artifacts = {{"csv", "result.csv"}, {"summary", "summary.json"}};
  if (result.svg) artifacts["svg"] = "plot.svg";
  o.summary = {{"version", kConfigVersion},
               {"tool_version", kToolVersion},
               {"command", command},
               {"run_id", id},
               {"seed", inputs.contains("seed") ? inputs["seed"] : Json(nullptr)},
               {"inputs", inputs},
               {"outputs", result.outputs},
               {"artifacts", artifacts}};

  std::error_code ec;
  const fs::path csv_path = dir / "result.csv";
  if (fs::exists(csv_path, ec)) {
    if (read_file(csv_path) != o.csv)
      throw NumericalFailure("output differs from the existing run " + o.run_dir +
                             "; results are not reproducible");
    o.reused = true;
  } else {
    fs::create_directories(dir, ec);
    if (ec) throw InvalidInput("cannot create output directory '" + dir.string() + "'");
    write_file(csv_path, o.csv);
  }
  const fs::path summary_path = dir / "summary.json";
  if (!fs::exists(summary_path, ec)) write_file(summary_path, o.summary.dump(2) + "\n");
  const fs::path svg_path = dir / "plot.svg";
  if (result.svg && !fs::exists(svg_path, ec)) write_file(svg_path, *result.svg);
  return o;
}

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Entangled-pair experiment simulator and analysis toolkit", "pdclab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string config_path, out_root;
  bool plot = false;
  auto add_common = [&](CLI::App *a) {
    a->add_option("--config", config_path, "JSON config or a previous summary.json");
    a->add_option("--out", out_root, std::string("output root (default $") + kOutDirEnv +
                                         " or ./runs)");
    a->add_flag("--plot", plot, "also write plot.svg");
  };

  std::vector<std::unique_ptr<LeafOptions>> leaves;
  std::map<std::string, CLI::App *> groups;
  for (const auto &spec : command_table()) {
    CLI::App *&group = groups[spec.group];
    if (!group) {
      group = app.add_subcommand(spec.group, spec.group + " commands");
      group->require_subcommand(1);
    }
    auto leaf = std::make_unique<LeafOptions>();
    leaf->spec = &spec;
    leaf->app = group->add_subcommand(spec.name, spec.summary);
    add_common(leaf->app);
    for (const auto &p : spec.params) {
      const std::string flag = "--" + dashed(p.key);
      std::string help = p.help;
      if (!p.default_value.is_null()) help += " [" + p.default_value.dump() + "]";
      else help += " (required)";
      if (p.type == ParamType::boolean)
        leaf->options[p.key] = leaf->app->add_flag(flag, leaf->flags[p.key], help);
      else
        leaf->options[p.key] = leaf->app->add_option(flag, leaf->values[p.key], help);
    }
    leaves.push_back(std::move(leaf));
  }
  CLI::App *run_app = app.add_subcommand("run", "execute the command named in a config file");
  add_common(run_app);
  run_app->get_option("--config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    std::string command;
    Json overrides = Json::object();
    for (const auto &leaf : leaves) {
      if (!leaf->app->parsed()) continue;
      command = leaf->spec->full_name();
      for (const auto &p : leaf->spec->params) {
        if (leaf->options[p.key]->count() == 0) continue;
        const Json raw = p.type == ParamType::boolean ? Json(leaf->flags[p.key])
                                                      : flag_value(p, leaf->values[p.key]);
        overrides[p.key] = coerce_param(p, raw);
      }
    }

    Json config_inputs = Json::object();
    if (!config_path.empty()) {
      const RunConfig rc = load_run_config(config_path);
      if (command.empty()) {
        if (rc.command.empty()) throw InvalidInput("config lacks key 'command'");
        command = rc.command;
      } else if (!rc.command.empty() && rc.command != command) {
        throw InvalidInput("key 'command' in config is '" + rc.command + "', not '" + command +
                           "'");
      }
      config_inputs = rc.inputs;
    }
    if (command.empty()) throw InvalidInput("no command given");

    const auto outcome = run_command(command, config_inputs, overrides, plot,
                                     out_root.empty() ? default_output_root() : out_root);
    out << outcome.summary.dump(2) << "\n";
    return 0;
  } catch (const InvalidInput &e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception &e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalFailure &e) {
    err << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    err << "numerical failure: " << e.what() << "\n";
    return 2;
  }
}

} // namespace pdclab::io
