#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "model.hpp"

namespace rdde {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Textual problem description; mirrors the JSON config keys exactly.
struct Config {
  std::string m1;
  std::string m2;
  std::string m3;
  std::string delay;
  std::string history;
  double t0 = 0.0;
  double tf = 1.0;
  double step = 1e-3;
};

/// Parses a JSON object with exactly the keys m1, m2, m3, delay, history,
/// t0, tf, step. Throws ConfigError naming the offending key.
Config parse_config(std::string_view json_text);
Config load_config(const std::string& path);

std::string config_to_json(const Config& c);

/// Parses every expression; expression errors are reported as ConfigError
/// with the key name and character offset.
Problem to_problem(const Config& c, std::optional<double> step_override = std::nullopt);

}  // namespace rdde
