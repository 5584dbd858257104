#pragma once

#include <string>

#include "ruin/simulate.hpp"

namespace ruin {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  ModelSpec model;
  SimConfig sim;
};

// Strict INI-style parser for the [model] / [claims] / [sim] file schema.
// Unknown keys and malformed values are fatal; missing [sim] keys take the
// SimConfig defaults.  The parsed model is validated before returning.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);

// Inverse of parse_config: emits a file that parses back to an equal config.
std::string emit_config(const RunConfig& cfg);

// Fixed-width float formatting used by every report writer: 12 significant
// digits, locale-independent.
std::string format_double(double v);

void write_file(const std::string& path, const std::string& content);

}  // namespace ruin
