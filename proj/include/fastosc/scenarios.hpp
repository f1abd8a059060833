#pragma once

#include "json.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fastosc {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scenario name plus its parameter object, as read from a JSON config file:
///
///   { "scenario": "sech_figure1",
///     "output_dir": "out/sech",          // optional
///     "parameters": { "a": 28.98, ... } } // optional, per-scenario keys
struct ScenarioConfig {
  std::string scenario;
  nlohmann::json parameters = nlohmann::json::object();
  std::string output_dir;
};

struct ScenarioInfo {
  std::string name;
  std::string description;
};

const std::vector<ScenarioInfo>& scenario_catalog();

ScenarioConfig parse_config(const nlohmann::json& document);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Throws ConfigError naming the first offending field.
void validate(const ScenarioConfig& config);

/// A numeric table; every row is keyed by the parameter columns that produced it.
struct Table {
  std::string name;
  std::string description;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ResultBundle {
  nlohmann::json metadata = nlohmann::json::object();
  nlohmann::json metrics = nlohmann::json::object();
  std::vector<Table> tables;

  const Table* find(std::string_view name) const;
};

struct RunOptions {
  /// Worker threads for independent sub-cases; 0 picks the hardware concurrency.
  int threads = 0;
};

/// Runs a validated scenario. Errors carry the scenario name in their message.
ResultBundle run(const ScenarioConfig& config, const RunOptions& options = {});

/// CSV text with a header row and 17 significant digits per value.
std::string format_csv(const Table& table);

/// Writes summary.json and one <table>.csv per table; returns the written paths.
std::vector<std::filesystem::path> emit(const ResultBundle& bundle,
                                        const std::filesystem::path& directory);

inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace fastosc
