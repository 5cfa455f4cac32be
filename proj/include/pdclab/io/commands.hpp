#pragma once

#include <optional>
#include <string>

#include "pdclab/io/config.hpp"
#include "pdclab/io/table.hpp"

namespace pdclab::io {

struct CommandResult {
  CsvTable table{{}};
  Json outputs = Json::object();
  std::optional<std::string> svg; ///< only built when a plot was requested
};

/// Runs one command on resolved inputs. Throws InvalidInput or
/// NumericalFailure; never touches the filesystem except to read data_path.
CommandResult execute_command(const CommandSpec &cmd, const Inputs &in, bool want_plot);

} // namespace pdclab::io
