#include "adia/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "adia/errors.hpp"

namespace adia {

using nlohmann::json;

std::string mode_name(RunMode m) {
  switch (m) {
    case RunMode::Simulate:
      return "simulate";
    case RunMode::Check:
      return "check";
    case RunMode::Dual:
      return "dual";
    case RunMode::Sweep:
      return "sweep";
    case RunMode::Oracle:
      return "oracle";
  }
  return "simulate";
}

RunMode mode_from_name(const std::string& s) {
  if (s == "simulate") return RunMode::Simulate;
  if (s == "check") return RunMode::Check;
  if (s == "dual") return RunMode::Dual;
  if (s == "sweep") return RunMode::Sweep;
  if (s == "oracle") return RunMode::Oracle;
  throw ConfigInvalid("mode", "unknown mode '" + s + "'");
}

namespace {

double require_number(const json& j, const std::string& field) {
  if (!j.contains(field) || !j[field].is_number())
    throw ConfigInvalid(field, "required number is missing or not numeric");
  const double v = j[field].get<double>();
  if (!std::isfinite(v)) throw ConfigInvalid(field, "must be finite");
  return v;
}

double optional_number(const json& j, const std::string& field, double fallback) {
  if (!j.contains(field)) return fallback;
  if (!j[field].is_number()) throw ConfigInvalid(field, "must be numeric");
  const double v = j[field].get<double>();
  if (!std::isfinite(v)) throw ConfigInvalid(field, "must be finite");
  return v;
}

std::string require_string(const json& j, const std::string& field) {
  if (!j.contains(field) || !j[field].is_string())
    throw ConfigInvalid(field, "required string is missing or not a string");
  return j[field].get<std::string>();
}

}  // namespace

Schedule parse_schedule(const json& j, const std::string& prefix) {
  if (!j.is_object()) throw ConfigInvalid(prefix, "schedule must be an object");
  if (!j.contains("kind") || !j["kind"].is_string())
    throw ConfigInvalid(prefix + ".kind", "missing schedule kind");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "constant") return Schedule::constant(require_number(j, "value"));
  if (kind == "linear")
    return Schedule::linear(require_number(j, "intercept"), require_number(j, "slope"));
  if (kind == "sinusoidal")
    return Schedule::sinusoidal(require_number(j, "offset"), require_number(j, "amplitude"),
                                require_number(j, "omega"), optional_number(j, "phase", 0.0));
  if (kind == "tabulated") {
    if (!j.contains("taus") || !j["taus"].is_array() || !j.contains("values") ||
        !j["values"].is_array())
      throw ConfigInvalid(prefix, "tabulated schedule needs 'taus' and 'values' arrays");
    std::vector<double> taus, values;
    for (const auto& v : j["taus"]) taus.push_back(v.get<double>());
    for (const auto& v : j["values"]) values.push_back(v.get<double>());
    if (taus.size() < 4) throw ConfigInvalid(prefix + ".taus", "needs at least 4 points");
    try {
      return Schedule::tabulated(std::move(taus), std::move(values));
    } catch (const std::invalid_argument& e) {
      throw ConfigInvalid(prefix, e.what());
    }
  }
  throw ConfigInvalid(prefix + ".kind", "unknown schedule kind '" + kind + "'");
}

std::shared_ptr<HamiltonianModel> build_model(const json& spec) {
  if (!spec.is_object()) throw ConfigInvalid("model", "must be an object");
  const std::string type = require_string(spec, "type");
  try {
    if (type == "spin_half" || type == "dual_of_spin_half") {
      SpinHalfParams p;
      p.eta = require_number(spec, "eta");
      p.horizon = require_number(spec, "horizon");
      if (!spec.contains("xi")) throw ConfigInvalid("model.xi", "missing schedule");
      p.xi = parse_schedule(spec["xi"], "model.xi");
      auto base = std::make_shared<SpinHalfModel>(std::move(p));
      if (type == "spin_half") return base;
      return std::make_shared<DualModel>(base);
    }
    if (type == "landau_zener") {
      return std::make_shared<LandauZenerModel>(require_number(spec, "sweep_rate"),
                                                require_number(spec, "coupling"),
                                                require_number(spec, "horizon"));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigInvalid("model", e.what());
  }
  throw ConfigInvalid("model.type", "unknown model type '" + type + "'");
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigInvalid("(root)", "config must be a JSON object");
  static const std::set<std::string> known{"schema_version", "mode",    "model",
                                           "grid",           "initial_level", "threshold",
                                           "outputs",        "sweep",   "rk4_cross_check"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw ConfigInvalid(key, "unknown config field");

  if (j.contains("schema_version")) {
    if (!j["schema_version"].is_number_integer() ||
        j["schema_version"].get<int>() != kSchemaVersion)
      throw ConfigInvalid("schema_version", "unsupported schema version");
  }

  ExperimentConfig cfg;
  if (j.contains("mode")) {
    cfg.mode = mode_from_name(require_string(j, "mode"));
    cfg.mode_explicit = true;
  }
  if (!j.contains("model")) throw ConfigInvalid("model", "missing");
  cfg.model_spec = j["model"];
  std::shared_ptr<HamiltonianModel> model = build_model(cfg.model_spec);  // validates

  if (!j.contains("grid") || !j["grid"].is_object()) throw ConfigInvalid("grid", "missing object");
  cfg.grid.t_max = require_number(j["grid"], "t_max");
  if (!(cfg.grid.t_max > 0.0)) throw ConfigInvalid("grid.t_max", "must be positive");
  if (!j["grid"].contains("steps") || !j["grid"]["steps"].is_number_integer())
    throw ConfigInvalid("grid.steps", "required integer is missing");
  cfg.grid.steps = j["grid"]["steps"].get<int>();
  if (cfg.grid.steps < 8) throw ConfigInvalid("grid.steps", "must be at least 8");
  if (cfg.grid.t_max > model->horizon() * (1.0 + 1e-12))
    throw ConfigInvalid("grid.t_max", "exceeds the model horizon");

  if (j.contains("initial_level")) {
    if (!j["initial_level"].is_number_integer())
      throw ConfigInvalid("initial_level", "must be an integer");
    cfg.initial_level = j["initial_level"].get<int>();
  }
  if (cfg.initial_level < 0 || cfg.initial_level >= model->dim())
    throw ConfigInvalid("initial_level", "must name a level below the model dimension");

  cfg.threshold = optional_number(j, "threshold", 10.0);
  if (!(cfg.threshold > 1.0)) throw ConfigInvalid("threshold", "must exceed 1");

  if (!j.contains("outputs") || !j["outputs"].is_object())
    throw ConfigInvalid("outputs", "missing object");
  cfg.outputs.csv_path = require_string(j["outputs"], "csv_path");
  cfg.outputs.json_path = require_string(j["outputs"], "json_path");
  if (cfg.outputs.csv_path.empty()) throw ConfigInvalid("outputs.csv_path", "must be nonempty");
  if (cfg.outputs.json_path.empty()) throw ConfigInvalid("outputs.json_path", "must be nonempty");

  if (j.contains("rk4_cross_check")) {
    if (!j["rk4_cross_check"].is_boolean())
      throw ConfigInvalid("rk4_cross_check", "must be boolean");
    cfg.rk4_cross_check = j["rk4_cross_check"].get<bool>();
  }

  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    if (!s.is_object()) throw ConfigInvalid("sweep", "must be an object");
    SweepSpec sw;
    sw.parameter = require_string(s, "parameter");
    if (sw.parameter != "eta" && sw.parameter != "xi.constant" && sw.parameter != "t_max")
      throw ConfigInvalid("sweep.parameter", "must be one of eta, xi.constant, t_max");
    sw.min = require_number(s, "min");
    sw.max = require_number(s, "max");
    if (!(sw.max > sw.min)) throw ConfigInvalid("sweep.max", "must exceed sweep.min");
    if (!s.contains("count") || !s["count"].is_number_integer())
      throw ConfigInvalid("sweep.count", "required integer is missing");
    sw.count = s["count"].get<int>();
    if (sw.count < 2) throw ConfigInvalid("sweep.count", "must be at least 2");
    if (s.contains("scale")) {
      sw.scale = require_string(s, "scale");
      if (sw.scale != "linear" && sw.scale != "log")
        throw ConfigInvalid("sweep.scale", "must be linear or log");
      if (sw.scale == "log" && !(sw.min > 0.0))
        throw ConfigInvalid("sweep.min", "log scale needs positive values");
    }
    cfg.sweep = sw;
  }
  if (cfg.mode == RunMode::Sweep && !cfg.sweep)
    throw ConfigInvalid("sweep", "sweep mode needs a sweep block");
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("(file)", "cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigInvalid("(file)", std::string("JSON parse error: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace adia
