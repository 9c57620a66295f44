#pragma once

#include <string>
#include <vector>

#include "cabinrl/baselines.hpp"
#include "cabinrl/env.hpp"
#include "cabinrl/sarsa.hpp"

namespace cabinrl {

inline constexpr const char* kToolVersion = "1.0.0";

struct Provenance {
  uint64_t config_hash = 0;
  uint64_t seed = 0;
  std::string comment_line() const;  // "# cabinrl <ver> config=<hex> seed=<n>"
};

std::vector<CabinState> generate_test_set(uint64_t seed, int n, const EpisodeConfig& episode);

void save_scenarios(const std::string& path, const std::vector<CabinState>& scenarios,
                    const Provenance& prov);
std::vector<CabinState> load_scenarios(const std::string& path);

struct ScenarioMetrics {
  CabinState start;
  double mean_reward = 0.0;
  double comfort_fraction = 0.0;
  double mean_hvac_power_w = 0.0;  // mean |Q_h|, fan term excluded
};

struct EvalMetrics {
  double mean_reward = 0.0;
  double comfort_fraction = 0.0;
  double mean_hvac_power_w = 0.0;
  long total_steps = 0;
  std::vector<ScenarioMetrics> per_scenario;
};

// One fixed-length episode per scenario under the deterministic controller;
// metrics aggregate over all steps of all episodes.
EvalMetrics evaluate(Controller& controller, const std::vector<CabinState>& scenarios,
                     const ModelParams& model, const ComfortParams& comfort,
                     const RewardParams& reward, const EpisodeConfig& episode);

std::vector<Transition> rollout_trace(Controller& controller, const CabinState& start,
                                      const ModelParams& model, const ComfortParams& comfort,
                                      const RewardParams& reward, const EpisodeConfig& episode);
void save_trace(const std::string& path, const std::vector<Transition>& trace, double dt,
                const Provenance& prov);

struct MetricsRow {
  std::string controller;
  std::string sensor;  // empty for rl
  EvalMetrics metrics;
};
void save_metrics(const std::string& path, const std::vector<MetricsRow>& rows,
                  const Provenance& prov);

void save_curve(const std::string& path, const std::vector<CurvePoint>& curve,
                const Provenance& prov);

// Everything needed to train + evaluate one policy.
struct TrainSetup {
  ModelParams model;
  ComfortParams comfort;
  RewardParams reward;
  EpisodeConfig episode;
  LearningParams learning;
};

struct TrainResult {
  PolicyWeights weights;
  std::vector<CurvePoint> curve;
  double episodes_per_second = 0.0;
};

// Trains on the cabin MDP, evaluating the greedy policy on `test_set` at every
// eval interval.
TrainResult train_cabin_policy(const TrainSetup& setup, const TileCoder& coder,
                               const std::vector<CabinState>& test_set, bool log_progress = false);

struct SweepPoint {
  double parameter = 0.0;  // log10(w) for the energy sweep, alpha for the alpha sweep
  uint64_t seed = 0;
  EvalMetrics metrics;
  bool failed = false;
  std::string error;
};

// Trains one policy per energy-weight value and evaluates all of them on the
// shared test set. Grid defaults to log10(w) in [3, 4.5] step 0.1.
std::vector<SweepPoint> pareto_sweep(const TrainSetup& base, const TileCoder& coder,
                                     const std::vector<double>& log10_w_grid,
                                     const std::vector<CabinState>& test_set, uint64_t master_seed,
                                     bool log_progress = false);
std::vector<double> default_w_grid();

void save_w_sweep(const std::string& path, const std::vector<SweepPoint>& points,
                  const Provenance& prov);

struct AlphaSweepRow {
  double alpha = 0.0;
  int seed_index = -1;  // -1 marks the per-alpha aggregate row
  double mean_test_reward = 0.0;
  double ci95_half_width = 0.0;  // aggregate rows only
};

// For each alpha: short training runs over several seeds; reports the mean
// test-set reward over the evaluation window [window_lo, episodes].
std::vector<AlphaSweepRow> alpha_sweep(const TrainSetup& base, const TileCoder& coder,
                                       const std::vector<double>& alpha_grid, int seeds,
                                       long episodes, long window_lo, int eval_interval,
                                       const std::vector<CabinState>& test_set,
                                       uint64_t master_seed, bool log_progress = false);
std::vector<double> default_alpha_grid();

void save_alpha_sweep(const std::string& path, const std::vector<AlphaSweepRow>& rows,
                      const Provenance& prov);

double spearman_rank_correlation(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cabinrl
