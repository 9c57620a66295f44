#pragma once

#include <string>
#include <vector>

#include "cabinrl/baselines.hpp"
#include "cabinrl/env.hpp"
#include "cabinrl/sarsa.hpp"
#include "cabinrl/tile_coder.hpp"

namespace cabinrl {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::vector<std::string>& problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

// Resolved toolkit configuration; every field defaults to the documented
// defaults and may be overridden by an INI-style config file.
struct ToolkitConfig {
  ModelParams model;
  ComfortParams comfort;
  RewardParams reward;
  EpisodeConfig episode;
  LearningParams learning;
  TileCoderConfig tiles = TileCoderConfig::cabin_default();
  FuzzyConfig fuzzy = FuzzyConfig::defaults();

  std::string scenarios_path = "scenarios.csv";
  std::string policy_path = "policy.bin";
  std::string output_dir = ".";
  uint64_t master_seed = 1;
  int jobs = 1;
};

// Parses `[section]` / `key = value` text; `#` and `;` start comments.
// Collects every problem (unknown key, bad value) before throwing.
ToolkitConfig load_config(const std::string& path);
ToolkitConfig parse_config_text(const std::string& text, const std::string& origin);

// Deterministic dump of every resolved value; its hash goes into all output
// artifacts.
std::string canonical_dump(const ToolkitConfig& config);
uint64_t config_hash(const ToolkitConfig& config);

}  // namespace cabinrl
