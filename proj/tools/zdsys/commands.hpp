#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "zdsys/numeric.hpp"

namespace zdsys::cli {

inline constexpr const char* kSchemaVersion = "1.0.0";

enum class Format { Json, Text };

struct RunConfig {
  std::string command;
  std::string spec_path;
  Index depth = 1;
  Index N = 2;
  std::optional<double> epsilon;
  std::optional<Index> max_steps;
  Tolerances tolerances;
  Format format = Format::Json;
  std::string out_path;
  std::optional<std::string> base;  // JSON clopen set overriding the spec file
  std::optional<unsigned long> seed;
};

/// What a command hands back: the result body and the exit code it earned.
/// Errors never reach here; they propagate as zdsys::Error.
struct Outcome {
  nlohmann::json result;
  int exit_code = 0;
};

Outcome run_command(const RunConfig& config, const nlohmann::json& spec_file);

/// Envelope shared by every report.
nlohmann::json report(const RunConfig& config, const nlohmann::json& spec_file, const Outcome& outcome);
nlohmann::json error_report(const std::string& command, const std::string& code, const std::string& message);

std::string render_text(const nlohmann::json& report);

}  // namespace zdsys::cli
