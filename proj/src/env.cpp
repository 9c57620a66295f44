#include "cabinrl/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cabinrl {

RewardBreakdown step_reward(double t_e, double q_h_w, const HvacAction& action,
                            const RewardParams& reward, const ComfortParams& comfort) {
  if (!std::isfinite(t_e) || !std::isfinite(q_h_w)) {
    throw std::invalid_argument("step_reward: inputs must be finite");
  }
  RewardBreakdown b;
  b.comfort_term = is_comfortable(t_e, comfort) ? 0.0 : -1.0;
  b.energy_w = std::abs(q_h_w) + reward.fan_coefficient * action.vent_flow;
  b.reward = b.comfort_term - b.energy_w / reward.energy_weight_divisor;
  return b;
}

double worst_case_energy(const EpisodeConfig& episode, const ModelParams& model,
                         const RewardParams& reward) {
  const double tc_corners[2] = {episode.envelope_min, episode.envelope_max};
  const double tamb_corners[2] = {episode.tamb_min, episode.tamb_max};
  double e_max = 0.0;
  for (int a = 0; a < kActionCount; ++a) {
    const HvacAction act = decode_action(a);
    for (double tc : tc_corners) {
      for (double tamb : tamb_corners) {
        CabinState s{tc, tc, tamb};
        const PumpDemand d = heat_pump_demand(s, act, model);
        e_max = std::max(e_max, std::abs(d.q_h_w) + reward.fan_coefficient * act.vent_flow);
      }
    }
  }
  return e_max;
}

CabinState sample_initial_state(Rng& rng, const EpisodeConfig& episode) {
  for (;;) {
    CabinState s;
    s.t_mass = rng.uniform(episode.tm_min, episode.tm_max);
    s.t_ambient = rng.uniform(episode.tamb_min, episode.tamb_max);
    s.t_cabin = rng.uniform(episode.tc_min, episode.tc_max);
    if (std::abs(s.t_mass - s.t_cabin) <= episode.max_mass_air_gap) return s;
  }
}

CabinEnv::CabinEnv(const ModelParams& model, const ComfortParams& comfort,
                   const RewardParams& reward, const EpisodeConfig& episode, uint64_t seed)
    : model_(model), comfort_(comfort), reward_(reward), episode_(episode), rng_(seed) {
  model_.validate();
  const double e_max = worst_case_energy(episode_, model_, reward_);
  r_min_ = -1.0 - e_max / reward_.energy_weight_divisor;
}

void CabinEnv::reset(const CabinState& start) {
  if (!std::isfinite(start.t_cabin) || !std::isfinite(start.t_mass) ||
      !std::isfinite(start.t_ambient)) {
    throw std::invalid_argument("CabinEnv::reset: start state must be finite");
  }
  state_ = start;
  absorbed_ = false;
}

void CabinEnv::reset_random() {
  state_ = sample_initial_state(rng_, episode_);
  absorbed_ = false;
}

Transition CabinEnv::step(int action_index) {
  if (action_index < 0 || action_index >= kActionCount) {
    throw std::out_of_range("CabinEnv::step: action index out of range");
  }
  Transition tr;
  tr.state = state_;
  tr.action_index = action_index;

  if (absorbed_) {
    // Absorbing state: frozen, worst-case per-step penalty, no HVAC activity.
    tr.next_state = state_;
    tr.reward = r_min_;
    tr.absorbed = true;
    tr.q_h_w = 0.0;
    tr.t_e = equivalent_temperature(state_.t_cabin, state_.t_mass, 0.0, comfort_);
    return tr;
  }

  const HvacAction action = decode_action(action_index);
  const StepOutcome out = cabinrl::step(state_, action, model_);
  const double velocity = occupant_air_velocity(action.vent_flow, comfort_);
  tr.t_e = equivalent_temperature(out.next.t_cabin, out.next.t_mass, velocity, comfort_);
  tr.q_h_w = out.heat_pump_power_w;
  tr.next_state = out.next;

  const bool legal = out.next.t_cabin >= episode_.envelope_min &&
                     out.next.t_cabin <= episode_.envelope_max &&
                     out.next.t_mass >= episode_.envelope_min &&
                     out.next.t_mass <= episode_.envelope_max;
  if (!legal) {
    absorbed_ = true;
    tr.reward = r_min_;
  } else {
    tr.reward = step_reward(tr.t_e, tr.q_h_w, action, reward_, comfort_).reward;
  }
  tr.absorbed = absorbed_;
  state_ = out.next;
  return tr;
}

std::vector<Transition> run_episode(CabinEnv& env,
                                    const std::function<int(const CabinState&)>& policy,
                                    const CabinState& start) {
  env.reset(start);
  std::vector<Transition> transitions;
  transitions.reserve(static_cast<size_t>(env.max_steps()));
  for (int i = 0; i < env.max_steps(); ++i) {
    const int a = policy(env.state());
    transitions.push_back(env.step(a));
  }
  return transitions;
}

}  // namespace cabinrl
