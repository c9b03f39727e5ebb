#ifndef ADIA_CONFIG_HPP
#define ADIA_CONFIG_HPP

#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "adia/models.hpp"

namespace adia {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

enum class RunMode { Simulate, Check, Dual, Sweep, Oracle };
std::string mode_name(RunMode m);
RunMode mode_from_name(const std::string& s);

struct GridSpec {
  double t_max = 1.0;
  int steps = 256;  // >= 8
};

struct SweepSpec {
  std::string parameter;  // eta | xi.constant | t_max
  double min = 0.0;
  double max = 1.0;
  int count = 2;              // >= 2
  std::string scale = "linear";  // linear | log
};

struct OutputSpec {
  std::string csv_path;
  std::string json_path;
};

struct ExperimentConfig {
  RunMode mode = RunMode::Simulate;
  bool mode_explicit = false;  // whether the config file named the mode
  nlohmann::json model_spec;
  GridSpec grid;
  int initial_level = 0;
  double threshold = 10.0;  // R > 1
  OutputSpec outputs;
  std::optional<SweepSpec> sweep;
  bool rk4_cross_check = false;
};

// Parse + validate; throws ConfigInvalid naming the offending field.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config_file(const std::string& path);

// Build a model from the "model" sub-schema; throws ConfigInvalid.
std::shared_ptr<HamiltonianModel> build_model(const nlohmann::json& model_spec);
Schedule parse_schedule(const nlohmann::json& j, const std::string& field_prefix);

}  // namespace adia

#endif
