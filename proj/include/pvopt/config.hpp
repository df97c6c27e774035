#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pvopt/dynamics.hpp"
#include "pvopt/params.hpp"
#include "pvopt/scenarios.hpp"

namespace pvopt {

using json = nlohmann::json;

// Raised for malformed or inadmissible configuration; the message carries the
// offending key path.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ScenarioConfig {
  std::string name = "baseline";
  StorageFormula variant = StorageFormula::foc_derived;
  std::map<std::string, double> overlay_model;
  std::map<std::string, double> overlay_storage;
};

struct OutputOptions {
  std::string directory = "out";
  std::vector<std::string> formats = {"csv", "json", "svg"};
};

struct RunConfig {
  ModelParameters model;
  std::optional<StorageParameters> storage;
  IntegrationConfig simulation;
  std::optional<ScenarioConfig> scenario;
  OutputOptions output;
};

namespace detail {

inline double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError("config error: " + path + ": expected a number");
  return j.get<double>();
}

inline void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                                const std::string& prefix) {
  for (const auto& item : obj.items()) {
    if (allowed.count(item.key()) == 0) {
      throw ConfigError("config error: unknown key: " + prefix + item.key());
    }
  }
}

inline void apply_model_keys(const json& obj, ModelParameters& p, const std::string& prefix) {
  static const std::set<std::string> keys = {"r",     "c",       "eta",     "beta", "gamma",
                                             "omega", "delta_e", "delta_d", "rho"};
  if (!obj.is_object()) throw ConfigError("config error: " + prefix + " must be an object");
  reject_unknown_keys(obj, keys, prefix + ".");
  for (const auto& item : obj.items()) {
    const double v = number_at(item.value(), prefix + "." + item.key());
    if (item.key() == "r") p.r = v;
    else if (item.key() == "c") p.c = v;
    else if (item.key() == "eta") p.eta = v;
    else if (item.key() == "beta") p.beta = v;
    else if (item.key() == "gamma") p.gamma = v;
    else if (item.key() == "omega") p.omega = v;
    else if (item.key() == "delta_e") p.delta_e = v;
    else if (item.key() == "delta_d") p.delta_d = v;
    else if (item.key() == "rho") p.rho = v;
  }
}

inline void apply_storage_keys(const json& obj, StorageParameters& sp, const std::string& prefix) {
  static const std::set<std::string> keys = {"s", "c_s", "eta_s", "delta_s", "q", "sigma"};
  if (!obj.is_object()) throw ConfigError("config error: " + prefix + " must be an object");
  reject_unknown_keys(obj, keys, prefix + ".");
  for (const auto& item : obj.items()) {
    const double v = number_at(item.value(), prefix + "." + item.key());
    if (item.key() == "s") sp.s = v;
    else if (item.key() == "c_s") sp.c_s = v;
    else if (item.key() == "eta_s") sp.eta_s = v;
    else if (item.key() == "delta_s") sp.delta_s = v;
    else if (item.key() == "q") sp.q = v;
    else if (item.key() == "sigma") sp.sigma = v;
  }
}

inline void apply_simulation_keys(const json& obj, IntegrationConfig& cfg,
                                  const std::string& prefix) {
  static const std::set<std::string> keys = {"dt", "t_end", "e0", "d0", "s0"};
  if (!obj.is_object()) throw ConfigError("config error: " + prefix + " must be an object");
  reject_unknown_keys(obj, keys, prefix + ".");
  for (const auto& item : obj.items()) {
    const double v = number_at(item.value(), prefix + "." + item.key());
    if (item.key() == "dt") cfg.dt = v;
    else if (item.key() == "t_end") cfg.t_end = v;
    else if (item.key() == "e0") cfg.e0 = v;
    else if (item.key() == "d0") cfg.d0 = v;
    else if (item.key() == "s0") cfg.s0 = v;
  }
}

// Violation messages start with the offending parameter; map them back to a
// config key path for error reporting.
inline std::string violation_key_path(const std::string& violation, const std::string& model_prefix,
                                      const std::string& storage_prefix) {
  static const std::set<std::string> storage_keys = {"s", "c_s", "eta_s", "delta_s", "q", "sigma"};
  const std::string name = violation.substr(0, violation.find(' '));
  return (storage_keys.count(name) != 0 ? storage_prefix : model_prefix) + name;
}

inline void validate_or_throw(const ModelParameters& p, const StorageParameters* sp,
                              const std::string& model_prefix, const std::string& storage_prefix) {
  const ValidationResult vr = validate_parameters(p, sp);
  if (vr.ok()) return;
  std::string msg = "validation error:";
  for (const auto& v : vr.violations) {
    msg += " " + violation_key_path(v, model_prefix, storage_prefix) + ": " + v + ";";
  }
  msg.pop_back();
  throw ConfigError(msg);
}

inline std::map<std::string, double> overlay_map(const json& obj, const std::string& prefix,
                                                 const std::set<std::string>& keys) {
  if (!obj.is_object()) throw ConfigError("config error: " + prefix + " must be an object");
  reject_unknown_keys(obj, keys, prefix + ".");
  std::map<std::string, double> out;
  for (const auto& item : obj.items()) {
    out[item.key()] = number_at(item.value(), prefix + "." + item.key());
  }
  return out;
}

}  // namespace detail

inline StorageFormula parse_variant(const std::string& text, const std::string& path) {
  if (text == "foc") return StorageFormula::foc_derived;
  if (text == "published") return StorageFormula::as_published;
  throw ConfigError("config error: " + path + ": expected 'published' or 'foc', got '" + text +
                    "'");
}

inline RunConfig config_from_json(const json& root) {
  if (!root.is_object()) throw ConfigError("config error: top level must be an object");
  detail::reject_unknown_keys(root, {"model", "storage", "simulation", "scenario", "output"}, "");

  RunConfig cfg;
  if (root.contains("model")) detail::apply_model_keys(root["model"], cfg.model, "model");
  if (root.contains("storage")) {
    StorageParameters sp;
    detail::apply_storage_keys(root["storage"], sp, "storage");
    cfg.storage = sp;
  }
  if (root.contains("simulation")) {
    detail::apply_simulation_keys(root["simulation"], cfg.simulation, "simulation");
  }
  if (root.contains("output")) {
    const json& out = root["output"];
    if (!out.is_object()) throw ConfigError("config error: output must be an object");
    detail::reject_unknown_keys(out, {"directory", "formats"}, "output.");
    if (out.contains("directory")) {
      if (!out["directory"].is_string()) {
        throw ConfigError("config error: output.directory: expected a string");
      }
      cfg.output.directory = out["directory"].get<std::string>();
    }
    if (out.contains("formats")) {
      if (!out["formats"].is_array()) {
        throw ConfigError("config error: output.formats: expected an array");
      }
      cfg.output.formats.clear();
      for (const auto& f : out["formats"]) {
        if (!f.is_string()) throw ConfigError("config error: output.formats: expected strings");
        const std::string s = f.get<std::string>();
        if (s != "csv" && s != "json" && s != "svg") {
          throw ConfigError("config error: output.formats: unknown format '" + s + "'");
        }
        cfg.output.formats.push_back(s);
      }
    }
  }
  if (root.contains("scenario")) {
    const json& sc = root["scenario"];
    if (!sc.is_object()) throw ConfigError("config error: scenario must be an object");
    detail::reject_unknown_keys(sc, {"name", "variant", "overlay"}, "scenario.");
    ScenarioConfig scenario;
    if (sc.contains("name")) {
      if (!sc["name"].is_string()) throw ConfigError("config error: scenario.name: expected a string");
      scenario.name = sc["name"].get<std::string>();
      if (scenario.name != "baseline" && scenario.name != "carbon_tax" &&
          scenario.name != "storage" && scenario.name != "custom") {
        throw ConfigError("config error: scenario.name: unknown scenario '" + scenario.name + "'");
      }
    }
    if (sc.contains("variant")) {
      if (!sc["variant"].is_string()) {
        throw ConfigError("config error: scenario.variant: expected a string");
      }
      scenario.variant = parse_variant(sc["variant"].get<std::string>(), "scenario.variant");
    }
    if (sc.contains("overlay")) {
      const json& ov = sc["overlay"];
      if (!ov.is_object()) throw ConfigError("config error: scenario.overlay must be an object");
      detail::reject_unknown_keys(ov, {"model", "storage"}, "scenario.overlay.");
      static const std::set<std::string> model_keys = {"r",     "c",       "eta",     "beta", "gamma",
                                                       "omega", "delta_e", "delta_d", "rho"};
      static const std::set<std::string> storage_keys = {"s",       "c_s", "eta_s",
                                                         "delta_s", "q",   "sigma"};
      if (ov.contains("model")) {
        scenario.overlay_model =
            detail::overlay_map(ov["model"], "scenario.overlay.model", model_keys);
      }
      if (ov.contains("storage")) {
        scenario.overlay_storage =
            detail::overlay_map(ov["storage"], "scenario.overlay.storage", storage_keys);
      }
    }
    cfg.scenario = scenario;
  }

  // merged configuration must be admissible before any computation
  detail::validate_or_throw(cfg.model, cfg.storage ? &*cfg.storage : nullptr, "model.", "storage.");
  validate_config(cfg.simulation);
  return cfg;
}

inline RunConfig parse_config(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& err) {
    // nlohmann reports a byte offset; convert it to line/column.
    std::size_t line = 1, column = 1;
    std::size_t limit = err.byte > 0 ? err.byte - 1 : 0;
    if (limit > text.size()) limit = text.size();
    for (std::size_t k = 0; k < limit; ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ConfigError("parse error in " + origin + " at line " + std::to_string(line) +
                      ", column " + std::to_string(column) + ": " + err.what());
  }
  return config_from_json(root);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

// Fully materialized view of the configuration: every effective value, with
// defaults filled in. Loading the echo reproduces the same configuration.
inline json effective_config(const RunConfig& cfg) {
  json root;
  root["model"] = {{"r", cfg.model.r},
                   {"c", cfg.model.c},
                   {"eta", cfg.model.eta},
                   {"beta", cfg.model.beta},
                   {"gamma", cfg.model.gamma},
                   {"omega", cfg.model.omega},
                   {"delta_e", cfg.model.delta_e},
                   {"delta_d", cfg.model.delta_d},
                   {"rho", cfg.model.rho}};
  if (cfg.storage) {
    root["storage"] = {{"s", cfg.storage->s},         {"c_s", cfg.storage->c_s},
                       {"eta_s", cfg.storage->eta_s}, {"delta_s", cfg.storage->delta_s},
                       {"q", cfg.storage->q},         {"sigma", cfg.storage->sigma}};
  }
  root["simulation"] = {{"dt", cfg.simulation.dt},
                        {"t_end", cfg.simulation.t_end},
                        {"e0", cfg.simulation.e0},
                        {"d0", cfg.simulation.d0},
                        {"s0", cfg.simulation.s0}};
  if (cfg.scenario) {
    json sc;
    sc["name"] = cfg.scenario->name;
    sc["variant"] = to_string(cfg.scenario->variant);
    json overlay = json::object();
    if (!cfg.scenario->overlay_model.empty()) overlay["model"] = cfg.scenario->overlay_model;
    if (!cfg.scenario->overlay_storage.empty()) overlay["storage"] = cfg.scenario->overlay_storage;
    if (!overlay.empty()) sc["overlay"] = overlay;
    root["scenario"] = sc;
  }
  root["output"] = {{"directory", cfg.output.directory}, {"formats", cfg.output.formats}};
  return root;
}

// Applies preset and overlay on top of the top-level parameters and validates
// the result; violations carry the scenario.overlay key paths.
inline ScenarioSpec resolve_scenario(const RunConfig& cfg) {
  const ScenarioConfig scenario =
      cfg.scenario.value_or(ScenarioConfig{});
  ScenarioSpec spec =
      make_scenario(scenario.name, cfg.model, cfg.storage, cfg.simulation, scenario.variant);
  for (const auto& [key, value] : scenario.overlay_model) {
    ModelParameters& p = spec.model;
    if (key == "r") p.r = value;
    else if (key == "c") p.c = value;
    else if (key == "eta") p.eta = value;
    else if (key == "beta") p.beta = value;
    else if (key == "gamma") p.gamma = value;
    else if (key == "omega") p.omega = value;
    else if (key == "delta_e") p.delta_e = value;
    else if (key == "delta_d") p.delta_d = value;
    else if (key == "rho") p.rho = value;
  }
  if (!scenario.overlay_storage.empty()) {
    StorageParameters sp = spec.storage.value_or(StorageParameters::defaults());
    for (const auto& [key, value] : scenario.overlay_storage) {
      if (key == "s") sp.s = value;
      else if (key == "c_s") sp.c_s = value;
      else if (key == "eta_s") sp.eta_s = value;
      else if (key == "delta_s") sp.delta_s = value;
      else if (key == "q") sp.q = value;
      else if (key == "sigma") sp.sigma = value;
    }
    spec.storage = sp;
  }
  detail::validate_or_throw(spec.model, spec.storage ? &*spec.storage : nullptr,
                            "scenario.overlay.model.", "scenario.overlay.storage.");
  return spec;
}

}  // namespace pvopt
