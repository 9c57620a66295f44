#pragma once

#include <array>
#include <functional>
#include <vector>

#include "cabinrl/comfort.hpp"
#include "cabinrl/rng.hpp"
#include "cabinrl/thermal.hpp"

namespace cabinrl {

struct RewardParams {
  double energy_weight_divisor = 30000.0;  // w
  double fan_coefficient = 2.0;            // W per (l/s) in the energy term
};

struct EpisodeConfig {
  int max_steps = 500;
  double tm_min = 0.0, tm_max = 50.0;      // initial interior mass range
  double tamb_min = 0.0, tamb_max = 40.0;  // initial ambient range
  double tc_min = 0.0, tc_max = 50.0;      // initial cabin air range
  double max_mass_air_gap = 30.0;          // |T_m - T_c| rejection bound
  double envelope_min = -5.0;              // legality envelope on T_c and T_m
  double envelope_max = 65.0;
};

struct RewardBreakdown {
  double reward = 0.0;        // comfort term minus energy/w
  double comfort_term = 0.0;  // 0 when comfortable, -1 otherwise
  double energy_w = 0.0;      // |Q_h| + fan_coefficient * v_i
};

RewardBreakdown step_reward(double t_e, double q_h_w, const HvacAction& action,
                            const RewardParams& reward, const ComfortParams& comfort);

struct Transition {
  CabinState state;
  int action_index = 0;
  double reward = 0.0;
  CabinState next_state;
  bool absorbed = false;
  double q_h_w = 0.0;
  double t_e = 0.0;
};

// Largest |Q_h| + fan term reachable inside the legality envelope; Q_h is
// linear in T_c and T_amb so scanning envelope corners is exact.
double worst_case_energy(const EpisodeConfig& episode, const ModelParams& model,
                         const RewardParams& reward);

// Uniform draw over the initial ranges, rejecting mass/air gaps beyond bound.
CabinState sample_initial_state(Rng& rng, const EpisodeConfig& episode);

// The MDP. Owns its RNG (single-threaded); run independent instances with
// independent seeds for parallelism.
class CabinEnv {
 public:
  CabinEnv(const ModelParams& model, const ComfortParams& comfort, const RewardParams& reward,
           const EpisodeConfig& episode, uint64_t seed);

  void reset(const CabinState& start);
  void reset_random();  // draws from sample_initial_state

  const CabinState& state() const { return state_; }
  bool absorbed() const { return absorbed_; }
  double min_reward() const { return r_min_; }
  int action_count() const { return kActionCount; }
  int max_steps() const { return episode_.max_steps; }

  const ModelParams& model() const { return model_; }
  const ComfortParams& comfort() const { return comfort_; }
  const RewardParams& reward_params() const { return reward_; }
  const EpisodeConfig& episode_config() const { return episode_; }

  Transition step(int action_index);

  // State as tile-coder variables (T_a, T_m, T_o).
  std::array<double, 3> state_vars() const { return {state_.t_cabin, state_.t_mass, state_.t_ambient}; }

 private:
  ModelParams model_;
  ComfortParams comfort_;
  RewardParams reward_;
  EpisodeConfig episode_;
  Rng rng_;
  CabinState state_;
  bool absorbed_ = false;
  double r_min_ = 0.0;
};

std::vector<Transition> run_episode(CabinEnv& env,
                                    const std::function<int(const CabinState&)>& policy,
                                    const CabinState& start);

}  // namespace cabinrl
