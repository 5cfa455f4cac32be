#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace pdclab::io {

using Json = nlohmann::json;

inline constexpr const char *kConfigVersion = "1";
inline constexpr const char *kToolVersion = "0.1.0";

enum class ParamType { number, integer, text, number_list, boolean };

/// One input of a command. A null default makes the parameter required.
/// Keys use underscores; the matching CLI flag swaps them for dashes.
struct ParamSpec {
  std::string key;
  ParamType type = ParamType::number;
  Json default_value;
  std::string help;
};

struct CommandSpec {
  std::string group;
  std::string name;
  std::string summary;
  std::vector<ParamSpec> params;

  std::string full_name() const { return group + " " + name; }
  const ParamSpec *find(const std::string &key) const;
};

const std::vector<CommandSpec> &command_table();

/// Looks up "group name"; throws InvalidInput for an unknown command.
const CommandSpec &find_command(const std::string &full_name);

/// Checks one value against its declared type and normalizes it (integers
/// stored as integers, lists as arrays of numbers). Throws InvalidInput naming
/// the key.
Json coerce_param(const ParamSpec &p, const Json &value);

/// Defaults overlaid with the config inputs, then the explicit overrides.
/// Unknown keys and missing required ones are rejected by name.
Json resolve_inputs(const CommandSpec &cmd, const Json &config_inputs, const Json &overrides);

/// A parsed configuration document. It may be a previous run's summary: the
/// echo fields (run_id, outputs, artifacts, version strings) are accepted and
/// ignored, every other key is rejected.
struct RunConfig {
  std::string command; ///< "group name"; empty when the document omits it
  Json inputs = Json::object();
};

RunConfig parse_run_config(const Json &doc);
RunConfig load_run_config(const std::string &path);

/// Typed accessors over resolved inputs.
class Inputs {
public:
  explicit Inputs(Json j) : j_(std::move(j)) {}

  double number(const std::string &key) const;
  std::int64_t integer(const std::string &key) const;
  std::uint64_t seed(const std::string &key = "seed") const;
  std::string text(const std::string &key) const;
  std::vector<double> list(const std::string &key) const;
  bool flag(const std::string &key) const;
  bool has(const std::string &key) const { return j_.contains(key) && !j_[key].is_null(); }

  const Json &json() const { return j_; }

private:
  const Json &at(const std::string &key) const;
  Json j_;
};

} // namespace pdclab::io
