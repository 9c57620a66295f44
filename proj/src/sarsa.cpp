#include "cabinrl/sarsa.hpp"

namespace cabinrl {

int select_action(std::span<const double> q, double epsilon, Rng& rng) {
  const int n = static_cast<int>(q.size());
  if (epsilon > 0.0 && rng.uniform() < epsilon) {
    return rng.uniform_int(n);
  }
  double best = q[0];
  int count = 1;
  int pick = 0;
  for (int a = 1; a < n; ++a) {
    if (q[static_cast<size_t>(a)] > best) {
      best = q[static_cast<size_t>(a)];
      count = 1;
      pick = a;
    } else if (q[static_cast<size_t>(a)] == best) {
      // Reservoir sample over the tied maximizers.
      ++count;
      if (rng.uniform_int(count) == 0) pick = a;
    }
  }
  return pick;
}

int greedy_action(std::span<const double> q) {
  int best = 0;
  for (int a = 1; a < static_cast<int>(q.size()); ++a) {
    if (q[static_cast<size_t>(a)] > q[static_cast<size_t>(best)]) best = a;
  }
  return best;
}

double sarsa_update(std::span<double> theta, TraceSet& traces, std::span<const int> active_sa,
                    double reward, double q_sa, double q_next, const LearningParams& params,
                    int active_count) {
  const double delta = reward + params.gamma * q_next - q_sa;
  if (!std::isfinite(delta)) {
    throw std::runtime_error("Sarsa divergence: non-finite TD error");
  }
  traces.decay(params.gamma * params.lambda);
  traces.replace(active_sa);
  traces.apply_update(theta, (params.alpha / active_count) * delta, params.trace_floor);
  return delta;
}

}  // namespace cabinrl
