#ifndef SOLITON_COMMANDS_HPP
#define SOLITON_COMMANDS_HPP

#include <string>
#include <vector>

#include "soliton/io.hpp"

namespace soliton {

/**
 * Runs one command on fully resolved inputs and returns its report:
 *
 *   {"schema_version", "command", "inputs", "results", "diagnostics"}
 *
 * inputs = {"document": <problem document>, "options": {...}}. Everything
 * the command reads comes from inputs, so run_command(r["command"],
 * r["inputs"]) reproduces a report r exactly.
 *
 * Options (all optional unless the command needs them):
 *   precision  "f64" | "extended"
 *   zeta       list of decimal strings
 *   direction  list of rational strings
 *   tol        decimal string (gradient tolerance)
 *   k          integer dilation for character sums
 *   cutoff     decimal string
 *   oracle     boolean
 *   orientation "p/q" | "q/p"
 */
Json run_command(const std::string& command, const Json& inputs);

/** Every command name accepted by run_command. */
const std::vector<std::string>& command_names();

/** Precision from SOLITON_VOLUME_PRECISION, else f64. */
Precision default_precision();

}   // namespace soliton

#endif
