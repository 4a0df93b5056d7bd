#include "config.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rdde {

namespace {

constexpr std::array<const char*, 5> kTextKeys{"m1", "m2", "m3", "delay", "history"};
constexpr std::array<const char*, 3> kNumberKeys{"t0", "tf", "step"};

std::string text_field(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(std::string("missing key \"") + key + "\"");
  if (!it->is_string()) throw ConfigError(std::string("key \"") + key + "\" must be a string");
  return it->get<std::string>();
}

double number_field(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(std::string("missing key \"") + key + "\"");
  if (!it->is_number()) throw ConfigError(std::string("key \"") + key + "\" must be a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw ConfigError(std::string("key \"") + key + "\" must be finite");
  return v;
}

expr::Expression parse_field(const std::string& text, const char* key) {
  try {
    return expr::parse(text);
  } catch (const expr::ParseError& e) {
    throw ConfigError(std::string("key \"") + key + "\": " + e.what());
  }
}

}  // namespace

Config parse_config(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : kTextKeys) known = known || key == k;
    for (const char* k : kNumberKeys) known = known || key == k;
    if (!known) throw ConfigError("unknown key \"" + key + "\"");
  }

  Config c;
  c.m1 = text_field(j, "m1");
  c.m2 = text_field(j, "m2");
  c.m3 = text_field(j, "m3");
  c.delay = text_field(j, "delay");
  c.history = text_field(j, "history");
  c.t0 = number_field(j, "t0");
  c.tf = number_field(j, "tf");
  c.step = number_field(j, "step");
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const Config& c) {
  nlohmann::ordered_json j;
  j["m1"] = c.m1;
  j["m2"] = c.m2;
  j["m3"] = c.m3;
  j["delay"] = c.delay;
  j["history"] = c.history;
  j["t0"] = c.t0;
  j["tf"] = c.tf;
  j["step"] = c.step;
  return j.dump(2);
}

Problem to_problem(const Config& c, std::optional<double> step_override) {
  Problem p;
  p.m1 = parse_field(c.m1, "m1");
  p.m2 = parse_field(c.m2, "m2");
  p.m3 = parse_field(c.m3, "m3");
  p.delay = parse_field(c.delay, "delay");
  p.history = parse_field(c.history, "history");
  p.t0 = c.t0;
  p.tf = c.tf;
  p.step = step_override.value_or(c.step);
  return p;
}

}  // namespace rdde
