#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "cabinrl/rng.hpp"
#include "cabinrl/tile_coder.hpp"

namespace cabinrl {

struct LearningParams {
  double alpha = 0.01;
  double gamma = 0.99;
  double epsilon = 0.16;
  double lambda = 0.98;
  long cutoff_episode = 190000;  // exploration is switched off from this episode on
  long episodes = 200000;
  uint64_t seed = 1;
  int eval_interval = 1000;
  double trace_floor = 1e-8;

  void validate() const {
    if (!(alpha > 0.0) || gamma < 0.0 || gamma > 1.0 || lambda < 0.0 || lambda > 1.0 ||
        epsilon < 0.0 || epsilon > 1.0 || episodes < 0 || eval_interval < 1) {
      throw std::invalid_argument("LearningParams: out-of-range meta-parameter");
    }
  }
};

// Replacing eligibility traces, stored sparsely. Decay is amortised through a
// global multiplier; entry values are value = raw * mult.
class TraceSet {
 public:
  explicit TraceSet(size_t weight_count) : pos_(weight_count, -1) {}

  void clear() {
    for (const Entry& e : entries_) pos_[static_cast<size_t>(e.index)] = -1;
    entries_.clear();
    mult_ = 1.0;
  }

  void decay(double factor) {
    mult_ *= factor;
    if (mult_ < 1e-280) renormalize();
  }

  void replace(std::span<const int> active) {
    const double raw = 1.0 / mult_;
    for (int i : active) {
      const int32_t p = pos_[static_cast<size_t>(i)];
      if (p >= 0) {
        entries_[static_cast<size_t>(p)].raw = raw;
      } else {
        pos_[static_cast<size_t>(i)] = static_cast<int32_t>(entries_.size());
        entries_.push_back({i, raw});
      }
    }
  }

  // theta[i] += scale * e_i for every live trace; prunes entries below floor.
  void apply_update(std::span<double> theta, double scale, double floor) {
    const double raw_floor = floor / mult_;
    size_t j = 0;
    while (j < entries_.size()) {
      Entry& e = entries_[j];
      if (e.raw < raw_floor) {
        erase_at(j);
        continue;
      }
      theta[static_cast<size_t>(e.index)] += scale * (e.raw * mult_);
      ++j;
    }
  }

  // Sum of trace values over the given indices (used to patch Q after an
  // in-place weight update).
  double sum_over(std::span<const int> indices) const {
    double s = 0.0;
    for (int i : indices) {
      const int32_t p = pos_[static_cast<size_t>(i)];
      if (p >= 0) s += entries_[static_cast<size_t>(p)].raw * mult_;
    }
    return s;
  }

  size_t size() const { return entries_.size(); }

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (const Entry& e : entries_) fn(e.index, e.raw * mult_);
  }

 private:
  struct Entry {
    int32_t index;
    double raw;
  };

  void erase_at(size_t j) {
    pos_[static_cast<size_t>(entries_[j].index)] = -1;
    if (j + 1 != entries_.size()) {
      entries_[j] = entries_.back();
      pos_[static_cast<size_t>(entries_[j].index)] = static_cast<int32_t>(j);
    }
    entries_.pop_back();
  }

  void renormalize() {
    for (Entry& e : entries_) e.raw *= mult_;
    mult_ = 1.0;
  }

  std::vector<int32_t> pos_;
  std::vector<Entry> entries_;
  double mult_ = 1.0;
};

// Epsilon-greedy over precomputed Q values; ties broken uniformly at random.
int select_action(std::span<const double> q, double epsilon, Rng& rng);

// Deterministic greedy with first-index tie-break (evaluation).
int greedy_action(std::span<const double> q);

// One Sarsa(lambda) update. q_next must already be zeroed by the caller when
// the successor state is absorbing. Returns the TD error.
double sarsa_update(std::span<double> theta, TraceSet& traces, std::span<const int> active_sa,
                    double reward, double q_sa, double q_next, const LearningParams& params,
                    int active_count);

struct CurvePoint {
  long episode = 0;
  double mean_test_reward = 0.0;
  double mean_comfort_pct = 0.0;
  double mean_hvac_power_w = 0.0;
};

struct TrainHook {
  // Called with the number of completed episodes: at 0, every eval_interval
  // episodes, and at the end of training.
  std::function<void(long episode)> fn;
};

// Env concept: reset_random(); state_vars() -> range of doubles;
// step(int action) -> object with .reward and .absorbed; max_steps().
template <class Env>
void train(Env& env, const TileCoder& coder, PolicyWeights& weights, const LearningParams& params,
           const TrainHook* hook = nullptr) {
  params.validate();
  check_policy(weights, coder);

  const int n_tilings = coder.num_tilings();
  const int n_actions = coder.action_count();
  Rng agent_rng(derive_seed(params.seed, "agent"));
  TraceSet traces(coder.total_weights());
  std::vector<int> bases(static_cast<size_t>(n_tilings));
  std::vector<int> active(static_cast<size_t>(n_tilings));
  std::vector<int> active_next(static_cast<size_t>(n_tilings));
  std::vector<double> q(static_cast<size_t>(n_actions));

  auto call_hook = [&](long ep) {
    if (hook && hook->fn) hook->fn(ep);
  };
  call_hook(0);

  for (long ep = 0; ep < params.episodes; ++ep) {
    const double eps = (ep < params.cutoff_episode) ? params.epsilon : 0.0;
    env.reset_random();
    traces.clear();

    const auto sv0 = env.state_vars();
    coder.state_bases(std::span<const double>(sv0.data(), sv0.size()), bases.data());
    coder.q_all(weights.theta, bases.data(), q.data());
    int a = select_action(q, eps, agent_rng);
    double q_sa = q[static_cast<size_t>(a)];
    for (int t = 0; t < n_tilings; ++t) active[static_cast<size_t>(t)] = coder.tile_at(t, bases[static_cast<size_t>(t)], a);

    for (int stepi = 0; stepi < env.max_steps(); ++stepi) {
      const auto tr = env.step(a);

      const auto sv = env.state_vars();
      coder.state_bases(std::span<const double>(sv.data(), sv.size()), bases.data());
      coder.q_all(weights.theta, bases.data(), q.data());
      const int a_next = select_action(q, eps, agent_rng);
      const double q_next_raw = q[static_cast<size_t>(a_next)];
      const double q_bootstrap = tr.absorbed ? 0.0 : q_next_raw;

      const double delta = tr.reward + params.gamma * q_bootstrap - q_sa;
      if (!std::isfinite(delta)) {
        throw std::runtime_error("Sarsa divergence: non-finite TD error at episode " +
                                 std::to_string(ep) + " step " + std::to_string(stepi));
      }
      traces.decay(params.gamma * params.lambda);
      traces.replace(active);
      const double scale = (params.alpha / n_tilings) * delta;
      traces.apply_update(weights.theta, scale, params.trace_floor);

      for (int t = 0; t < n_tilings; ++t) {
        active_next[static_cast<size_t>(t)] = coder.tile_at(t, bases[static_cast<size_t>(t)], a_next);
      }
      // Q(s', a') under the just-updated weights, without re-reading theta.
      q_sa = q_next_raw + scale * traces.sum_over(active_next);
      a = a_next;
      std::swap(active, active_next);
    }

    if ((ep + 1) % params.eval_interval == 0 || ep + 1 == params.episodes) {
      call_hook(ep + 1);
    }
  }
}

}  // namespace cabinrl
