// Acceptance harness: every check prints one PASS/FAIL line; the process
// exits with the number of failed checks. Checks run unconditionally so a
// single failure never hides the state of the others.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cabinrl/baselines.hpp"
#include "cabinrl/config.hpp"
#include "cabinrl/eval.hpp"

using namespace cabinrl;

namespace {

int g_failures = 0;

void report(int idx, const char* name, bool ok, const std::string& detail) {
  std::printf("[%d/9] %s — %s (%s)\n", idx, ok ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// 1. Analytic settling point of the minimum-fan rollout.

void check_fixed_point() {
  ModelParams p;
  const double expected_gap = (p.solar_load_w + p.occupant_load_w) / p.cabin_conductance;
  const auto t0 = std::chrono::steady_clock::now();
  CabinState s{20, 20, 20};
  // 50k steps = ~28 h simulated: far past the interior mass's ~80 min slow mode.
  const HvacAction a{1.0, 33.5, 1.0};
  for (int i = 0; i < 50000; ++i) s = step(s, a, p).next;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double gap = s.t_cabin - s.t_ambient;
  const bool ok = std::abs(gap - expected_gap) < 0.5 && secs < 1.0;
  report(1, "minimum-fan rollout settles at the conduction balance point", ok,
         fmt("T_c - T_amb = %.4f K, analytic %.4f K, tolerance 0.5 K, %.3f s", gap, expected_gap,
             secs));
}

// ---------------------------------------------------------------------------
// 2. Equivalent temperature against an independently coded formula.

double et_oracle(double t_air, double t_r, double v, double clo) {
  if (v <= 0.1) return 0.5 * (t_air + t_r);
  return 0.55 * t_air + 0.45 * t_r +
         ((0.24 - 0.75 * std::sqrt(v)) / (1.0 + clo)) * (36.5 - t_air);
}

void check_equivalent_temperature() {
  ComfortParams cf;
  Rng rng(101);
  double worst = 0.0;
  int low_branch = 0;
  for (int i = 0; i < 10000; ++i) {
    const double ta = rng.uniform(-10, 70);
    const double tr = rng.uniform(-10, 70);
    const double v = rng.uniform() < 0.3 ? rng.uniform(0.0, 0.12) : rng.uniform(0.1, 3.0);
    if (v <= 0.1) ++low_branch;
    worst = std::max(worst,
                     std::abs(equivalent_temperature(ta, tr, v, cf) -
                              et_oracle(ta, tr, v, cf.clothing_clo)));
  }
  report(2, "equivalent temperature matches the independent oracle on 10^4 inputs",
         worst <= 1e-9 && low_branch > 1000,
         fmt("max |diff| = %.3g (tol 1e-9), %d low-velocity cases", worst, low_branch));
}

// ---------------------------------------------------------------------------
// 3. Tile coder against a brute-force index oracle.

std::vector<int> tile_oracle(const TileCoderConfig& cfg,
                             const std::vector<std::vector<double>>& actions,
                             const std::vector<double>& state, int action) {
  std::vector<int> out;
  int block_base = 0;
  for (const auto& g : cfg.groups) {
    int block = 1;
    for (const auto& v : g.vars) block *= v.intervals;
    for (int j = 0; j < g.tilings; ++j) {
      int idx = 0;
      for (const auto& v : g.vars) {
        const double x = v.is_action ? actions[size_t(action)][size_t(v.source)]
                                     : state[size_t(v.source)];
        const double width = (v.hi - v.lo) / v.intervals;
        const double offset =
            (j % 2 == 0 ? 1.0 : -1.0) * (static_cast<double>(j) / g.tilings) * width;
        const double xc = std::min(std::max(x, v.lo), v.hi);
        int b = static_cast<int>(std::floor((xc - v.lo + offset) / width));
        if (b < 0) b = 0;
        if (b >= v.intervals) b = v.intervals - 1;
        idx = idx * v.intervals + b;
      }
      out.push_back(block_base + idx);
      block_base += block;
    }
  }
  return out;
}

void check_tile_coder() {
  const TileCoderConfig cfg = TileCoderConfig::cabin_default();
  const auto actions = cabin_action_table();
  const TileCoder coder(cfg, actions);
  Rng rng(102);
  int mismatches = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::vector<double> s{rng.uniform(-10, 70), rng.uniform(-10, 70), rng.uniform(-10, 50)};
    const int a = rng.uniform_int(60);
    if (coder.active_tiles(s, a) != tile_oracle(cfg, actions, s, a)) ++mismatches;
  }
  const bool ok = mismatches == 0 && coder.total_weights() == 358020u;
  report(3, "tile coder matches the brute-force oracle and the weight count", ok,
         fmt("%d/10000 mismatches, %zu weights (expect 358020)", mismatches,
             coder.total_weights()));
}

// ---------------------------------------------------------------------------
// 4. The learner recovers the optimum of a small known MDP.

// Three-state chain: action 1 moves right toward an absorbing goal worth +10;
// action 0 pays a deceptive +0.1 and moves left. Discounting makes "always
// right" optimal everywhere, which value iteration confirms independently.
struct ChainEnv {
  struct Tr {
    double reward = 0.0;
    bool absorbed = false;
  };
  Rng rng{303};
  int s = 0;
  bool done = false;

  void reset_random() {
    s = rng.uniform_int(2);
    done = false;
  }
  std::array<double, 1> state_vars() const { return {s + 0.5}; }
  int max_steps() const { return 20; }
  Tr step(int a) {
    if (done) return {0.0, true};
    if (a == 0) {
      s = std::max(0, s - 1);
      return {0.1, false};
    }
    ++s;
    if (s == 2) {
      done = true;
      return {10.0, true};
    }
    return {0.0, false};
  }
};

void check_small_mdp() {
  const double gamma = 0.9;
  // value iteration on the exact chain
  std::array<double, 3> v{0, 0, 0};
  std::array<std::array<double, 2>, 3> q{};
  for (int it = 0; it < 1000; ++it) {
    for (int s = 0; s < 2; ++s) {
      q[size_t(s)][0] = 0.1 + gamma * v[size_t(std::max(0, s - 1))];
      q[size_t(s)][1] = (s == 1) ? 10.0 : gamma * v[size_t(s + 1)];
    }
    for (int s = 0; s < 2; ++s) v[size_t(s)] = std::max(q[size_t(s)][0], q[size_t(s)][1]);
  }
  std::array<int, 2> optimal{};
  for (int s = 0; s < 2; ++s) optimal[size_t(s)] = q[size_t(s)][1] > q[size_t(s)][0] ? 1 : 0;

  // tabular-equivalent coder: one tiling, exact bins
  TileCoderConfig cfg;
  cfg.groups.push_back({1,
                        {TileVar{"s", false, 0, 0.0, 3.0, 3},
                         TileVar{"a", true, 0, 0.0, 2.0, 2}}});
  const std::vector<std::vector<double>> actions{{0.25}, {1.25}};
  const TileCoder coder(cfg, actions);
  PolicyWeights w = zero_policy(coder);

  LearningParams lp;
  lp.alpha = 0.2;
  lp.gamma = gamma;
  lp.lambda = 0.9;
  lp.epsilon = 0.2;
  lp.episodes = 500;
  lp.cutoff_episode = 500;
  lp.eval_interval = 100;
  lp.seed = 404;

  ChainEnv env;
  train(env, coder, w, lp);

  bool ok = true;
  std::string detail;
  for (int s = 0; s < 2; ++s) {
    const std::vector<double> sv{s + 0.5};
    const double q0 = coder.q_value(w.theta, sv, 0);
    const double q1 = coder.q_value(w.theta, sv, 1);
    const int greedy = q1 > q0 ? 1 : 0;
    ok &= (greedy == optimal[size_t(s)]);
    detail += fmt("s%d: greedy %d vs optimal %d; ", s, greedy, optimal[size_t(s)]);
  }
  report(4, "Sarsa(lambda) recovers the value-iteration optimum of a chain MDP within 500 episodes",
         ok, detail);
}

// ---------------------------------------------------------------------------
// Shared fixtures for the training-level checks.

struct BaselineRow {
  std::string label;
  EvalMetrics metrics;
};

std::vector<BaselineRow> eval_all_baselines(const ToolkitConfig& cfg,
                                            const std::vector<CabinState>& test_set) {
  std::vector<BaselineRow> rows;
  for (const char* name : {"bang-bang", "proportional", "commercial", "fuzzy"}) {
    for (SensorKind k : {SensorKind::air, SensorKind::avg, SensorKind::et}) {
      auto ctrl = make_baseline(name, k, cfg.comfort, cfg.fuzzy);
      rows.push_back({std::string(name) + "-" + sensor_name(k),
                      evaluate(*ctrl, test_set, cfg.model, cfg.comfort, cfg.reward, cfg.episode)});
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// 5. Trained policy quality at the default meta-parameters.

void check_trained_policy(const ToolkitConfig& cfg, const std::vector<CabinState>& test_set,
                          const std::vector<BaselineRow>& baselines) {
  TrainSetup setup{cfg.model, cfg.comfort, cfg.reward, cfg.episode, cfg.learning};
  setup.learning.episodes = 20000;
  setup.learning.seed = derive_seed(cfg.master_seed, "train");
  const TileCoder coder(cfg.tiles, cabin_action_table());
  const TrainResult result = train_cabin_policy(setup, coder, test_set);

  GreedyRlController rl(coder, result.weights);
  const EvalMetrics m = evaluate(rl, test_set, cfg.model, cfg.comfort, cfg.reward, cfg.episode);

  double best_baseline = -1e18;
  std::string best_label;
  for (const auto& b : baselines) {
    if (b.metrics.mean_reward > best_baseline) {
      best_baseline = b.metrics.mean_reward;
      best_label = b.label;
    }
  }
  const bool ok = m.mean_reward >= -1.8 && m.mean_reward > best_baseline &&
                  m.comfort_fraction >= 0.50 && m.mean_hvac_power_w <= 1000.0;
  report(5,
         "20k-episode policy: reward >= -1.8, beats every baseline, comfort >= 50%, power <= 1 kW",
         ok,
         fmt("reward %.4f (best baseline %s %.4f), comfort %.1f%%, power %.0f W, curve %.4f -> %.4f",
             m.mean_reward, best_label.c_str(), best_baseline, 100 * m.comfort_fraction,
             m.mean_hvac_power_w, result.curve.front().mean_test_reward,
             result.curve.back().mean_test_reward));
}

// ---------------------------------------------------------------------------
// 6. Baseline landscape: bang-bang on the averaged sensor dominates, and the
//    flow-capped controller never moves more air than the proportional one.

void check_baseline_landscape(const std::vector<BaselineRow>& baselines) {
  double best = -1e18;
  std::string best_label;
  for (const auto& b : baselines) {
    if (b.metrics.mean_reward > best) {
      best = b.metrics.mean_reward;
      best_label = b.label;
    }
  }
  bool cap_ok = true;
  ComfortParams cf;
  Rng rng(106);
  for (int i = 0; i < 2000; ++i) {
    const double t = rng.uniform(-10.0, 60.0);
    cap_ok &= commercial(t, cf).vent_flow <= proportional(t, cf).vent_flow;
  }
  const bool ok = best_label == "bang-bang-avg" && cap_ok;
  report(6, "bang-bang on the averaged sensor is the best baseline; capped flow <= proportional",
         ok, fmt("best baseline: %s (%.4f); pointwise flow cap %s", best_label.c_str(), best,
                 cap_ok ? "holds" : "violated"));
}

// ---------------------------------------------------------------------------
// 7. Energy-weight sweep trades energy for comfort monotonically.

void check_energy_weight_sweep(const ToolkitConfig& cfg, const std::vector<CabinState>& test_set) {
  TrainSetup setup{cfg.model, cfg.comfort, cfg.reward, cfg.episode, cfg.learning};
  setup.learning.episodes = 20000;
  const auto points = pareto_sweep(setup, cfg.tiles.groups.empty()
                                              ? TileCoder(TileCoderConfig::cabin_default(),
                                                          cabin_action_table())
                                              : TileCoder(cfg.tiles, cabin_action_table()),
                                   default_w_grid(), test_set, cfg.master_seed);
  std::vector<double> logw, comfort;
  bool all_ran = true;
  for (const auto& p : points) {
    all_ran &= !p.failed;
    logw.push_back(p.parameter);
    comfort.push_back(p.metrics.comfort_fraction);
  }
  const double rho = spearman_rank_correlation(logw, comfort);
  const bool ok = all_ran && points.size() == 16 && rho >= 0.6;
  report(7, "comfort rises with the energy-weight divisor across the 16-point sweep", ok,
         fmt("Spearman rho = %.3f (threshold 0.6), %zu points%s", rho, points.size(),
             all_ran ? "" : ", some points failed"));
}

// ---------------------------------------------------------------------------
// 8. Bit-identical reproducibility of training and evaluation artifacts.

void check_reproducibility(const ToolkitConfig& cfg, const std::vector<CabinState>& test_set) {
  TrainSetup setup{cfg.model, cfg.comfort, cfg.reward, cfg.episode, cfg.learning};
  setup.learning.episodes = 1000;
  setup.learning.eval_interval = 500;
  setup.learning.seed = derive_seed(cfg.master_seed, "train");
  const TileCoder coder(cfg.tiles, cabin_action_table());

  const auto dir = std::filesystem::temp_directory_path();
  std::array<std::string, 2> policy_paths, metrics_paths;
  for (int run = 0; run < 2; ++run) {
    const TrainResult r = train_cabin_policy(setup, coder, test_set);
    policy_paths[size_t(run)] = (dir / ("accept_policy_" + std::to_string(run) + ".bin")).string();
    metrics_paths[size_t(run)] = (dir / ("accept_metrics_" + std::to_string(run) + ".csv")).string();
    save_policy(policy_paths[size_t(run)], r.weights);
    GreedyRlController rl(coder, r.weights);
    const EvalMetrics m = evaluate(rl, test_set, cfg.model, cfg.comfort, cfg.reward, cfg.episode);
    save_metrics(metrics_paths[size_t(run)], {{"rl", "", m}}, {config_hash(cfg), cfg.master_seed});
  }
  const bool policies_equal = slurp(policy_paths[0]) == slurp(policy_paths[1]);
  const bool metrics_equal = slurp(metrics_paths[0]) == slurp(metrics_paths[1]);
  for (const auto& p : policy_paths) std::filesystem::remove(p);
  for (const auto& p : metrics_paths) std::filesystem::remove(p);
  report(8, "same-seed training runs produce byte-identical policy and metrics files",
         policies_equal && metrics_equal,
         fmt("policy files %s, metrics files %s", policies_equal ? "identical" : "differ",
             metrics_equal ? "identical" : "differ"));
}

// ---------------------------------------------------------------------------
// 9. Invariant suites, >= 10^4 cases each.

void check_invariants() {
  ModelParams model;
  ComfortParams cf;
  RewardParams rw;
  EpisodeConfig ep;
  Rng rng(109);
  std::string detail;
  bool ok = true;

  // (a) rewards are bounded: min_reward <= r <= 0
  {
    CabinEnv env(model, cf, rw, ep, 1);
    int bad = 0;
    for (int i = 0; i < 10000; ++i) {
      env.reset({rng.uniform(0, 50), rng.uniform(0, 50), rng.uniform(0, 40)});
      const Transition t = env.step(rng.uniform_int(kActionCount));
      if (!(t.reward <= 0.0 && t.reward >= env.min_reward())) ++bad;
    }
    ok &= bad == 0;
    detail += fmt("reward bounds %d/10000 bad; ", bad);
  }

  // (b) eligibility traces stay in [0, 1]
  {
    TraceSet traces(512);
    Rng trng(110);
    int bad = 0;
    std::vector<int> active(8);
    for (int i = 0; i < 10000; ++i) {
      traces.decay(trng.uniform(0.5, 0.9999));
      for (int& a : active) a = trng.uniform_int(512);
      traces.replace(active);
      traces.for_each([&](int, double v) {
        if (!(v >= 0.0 && v <= 1.0 + 1e-12)) ++bad;
      });
      if (trng.uniform() < 0.01) traces.clear();
    }
    ok &= bad == 0;
    detail += fmt("trace range %d bad; ", bad);
  }

  // (c) absorption is permanent and pays the floor reward
  {
    EpisodeConfig tight = ep;
    tight.envelope_max = 25.0;
    CabinEnv env(model, cf, rw, tight, 2);
    int bad = 0;
    const int hot = action_index({100, 60, 0.0});
    for (int i = 0; i < 10000; ++i) {
      env.reset({24.9, 24.9, rng.uniform(0, 40)});
      while (!env.absorbed()) env.step(hot);
      const CabinState frozen = env.state();
      const Transition t = env.step(rng.uniform_int(kActionCount));
      if (!t.absorbed || t.reward != env.min_reward() ||
          t.next_state.t_cabin != frozen.t_cabin || t.q_h_w != 0.0) {
        ++bad;
      }
    }
    ok &= bad == 0;
    detail += fmt("absorption %d/10000 bad; ", bad);
  }

  // (d) greedy argmax is invariant under a constant shift of Q
  {
    int bad = 0;
    std::vector<double> q(60);
    for (int i = 0; i < 10000; ++i) {
      for (double& x : q) x = rng.uniform(-5, 5);
      const int a = greedy_action(q);
      const double c = rng.uniform(-100, 100);
      std::vector<double> shifted = q;
      for (double& x : shifted) x += c;
      if (greedy_action(shifted) != a) ++bad;
    }
    ok &= bad == 0;
    detail += fmt("argmax shift %d bad; ", bad);
  }

  // (e) every baseline decision lies on the discrete action grid
  {
    const FuzzyConfig fc = FuzzyConfig::defaults();
    int bad = 0, cases = 0;
    for (const char* name : {"bang-bang", "proportional", "commercial", "fuzzy"}) {
      for (SensorKind k : {SensorKind::air, SensorKind::avg, SensorKind::et}) {
        auto ctrl = make_baseline(name, k, cf, fc);
        ctrl->reset();
        for (int i = 0; i < 900; ++i) {
          const CabinState s{rng.uniform(-5, 65), rng.uniform(-5, 65), rng.uniform(0, 40)};
          const int a = ctrl->act(s);
          ++cases;
          if (a < 0 || a >= kActionCount) ++bad;
        }
      }
    }
    ok &= bad == 0 && cases >= 10000;
    detail += fmt("baseline grid %d/%d bad", bad, cases);
  }

  report(9, "invariant suites (rewards, traces, absorption, argmax, action grid)", ok, detail);
}

}  // namespace

int main() {
  const ToolkitConfig cfg;  // documented defaults
  const auto test_set =
      generate_test_set(derive_seed(cfg.master_seed, "scenarios"), 200, cfg.episode);

  check_fixed_point();
  check_equivalent_temperature();
  check_tile_coder();
  check_small_mdp();

  const auto baselines = eval_all_baselines(cfg, test_set);
  check_trained_policy(cfg, test_set, baselines);
  check_baseline_landscape(baselines);
  check_energy_weight_sweep(cfg, test_set);
  check_reproducibility(cfg, test_set);
  check_invariants();

  std::printf("%s: %d/9 checks passed\n", g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
              9 - g_failures);
  return g_failures;
}
