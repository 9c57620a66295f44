#include "cabinrl/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cabinrl {

namespace {

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  return f;
}

}  // namespace

std::string Provenance::comment_line() const {
  char buf[128];
  std::snprintf(buf, sizeof buf, "# cabinrl %s config=%016llx seed=%llu", kToolVersion,
                static_cast<unsigned long long>(config_hash),
                static_cast<unsigned long long>(seed));
  return buf;
}

std::vector<CabinState> generate_test_set(uint64_t seed, int n, const EpisodeConfig& episode) {
  if (n < 1) throw std::invalid_argument("scenario count must be >= 1");
  Rng rng(seed);
  std::vector<CabinState> out;
  out.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(sample_initial_state(rng, episode));
  return out;
}

void save_scenarios(const std::string& path, const std::vector<CabinState>& scenarios,
                    const Provenance& prov) {
  auto f = open_out(path);
  f << prov.comment_line() << "\nT_c,T_m,T_amb\n";
  for (const auto& s : scenarios) {
    f << fmt(s.t_cabin, "%.9g") << ',' << fmt(s.t_mass, "%.9g") << ','
      << fmt(s.t_ambient, "%.9g") << '\n';
  }
}

std::vector<CabinState> load_scenarios(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open scenario file: " + path);
  std::vector<CabinState> out;
  std::string line;
  bool header_seen = false;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "T_c,T_m,T_amb") {
        throw std::runtime_error("scenario file missing T_c,T_m,T_amb header: " + path);
      }
      header_seen = true;
      continue;
    }
    CabinState s;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &s.t_cabin, &s.t_mass, &s.t_ambient) != 3) {
      throw std::runtime_error("malformed scenario row: " + line);
    }
    out.push_back(s);
  }
  if (out.empty()) throw std::runtime_error("scenario file has no rows: " + path);
  return out;
}

EvalMetrics evaluate(Controller& controller, const std::vector<CabinState>& scenarios,
                     const ModelParams& model, const ComfortParams& comfort,
                     const RewardParams& reward, const EpisodeConfig& episode) {
  if (scenarios.empty()) throw std::invalid_argument("evaluate: empty scenario set");
  EvalMetrics m;
  CabinEnv env(model, comfort, reward, episode, /*seed=*/0);
  double reward_sum = 0.0;
  double power_sum = 0.0;
  long comfort_steps = 0;

  for (const auto& start : scenarios) {
    env.reset(start);
    controller.reset();
    ScenarioMetrics sm;
    sm.start = start;
    double r = 0.0, p = 0.0;
    long c = 0;
    for (int i = 0; i < episode.max_steps; ++i) {
      const Transition tr = env.step(controller.act(env.state()));
      r += tr.reward;
      p += std::abs(tr.q_h_w);
      if (!tr.absorbed && is_comfortable(tr.t_e, comfort)) ++c;
    }
    sm.mean_reward = r / episode.max_steps;
    sm.comfort_fraction = static_cast<double>(c) / episode.max_steps;
    sm.mean_hvac_power_w = p / episode.max_steps;
    m.per_scenario.push_back(sm);
    reward_sum += r;
    power_sum += p;
    comfort_steps += c;
  }
  m.total_steps = static_cast<long>(scenarios.size()) * episode.max_steps;
  m.mean_reward = reward_sum / m.total_steps;
  m.comfort_fraction = static_cast<double>(comfort_steps) / m.total_steps;
  m.mean_hvac_power_w = power_sum / m.total_steps;
  return m;
}

std::vector<Transition> rollout_trace(Controller& controller, const CabinState& start,
                                      const ModelParams& model, const ComfortParams& comfort,
                                      const RewardParams& reward, const EpisodeConfig& episode) {
  CabinEnv env(model, comfort, reward, episode, /*seed=*/0);
  env.reset(start);
  controller.reset();
  std::vector<Transition> out;
  out.reserve(static_cast<size_t>(episode.max_steps));
  for (int i = 0; i < episode.max_steps; ++i) {
    out.push_back(env.step(controller.act(env.state())));
  }
  return out;
}

void save_trace(const std::string& path, const std::vector<Transition>& trace, double dt,
                const Provenance& prov) {
  auto f = open_out(path);
  f << prov.comment_line() << "\nt_s,T_c,T_m,T_amb,T_e,v_i,T_i,A_r,Q_h_w,reward\n";
  for (size_t i = 0; i < trace.size(); ++i) {
    const Transition& tr = trace[i];
    const HvacAction a = decode_action(tr.action_index);
    f << fmt((static_cast<double>(i) + 1.0) * dt) << ',' << fmt(tr.next_state.t_cabin) << ','
      << fmt(tr.next_state.t_mass) << ',' << fmt(tr.next_state.t_ambient) << ',' << fmt(tr.t_e)
      << ',' << fmt(a.vent_flow) << ',' << fmt(a.vent_temp) << ',' << fmt(a.recirc) << ','
      << fmt(tr.q_h_w) << ',' << fmt(tr.reward) << '\n';
  }
}

void save_metrics(const std::string& path, const std::vector<MetricsRow>& rows,
                  const Provenance& prov) {
  auto f = open_out(path);
  f << prov.comment_line() << "\ncontroller,sensor,mean_reward,comfort_pct,hvac_power_w\n";
  for (const auto& r : rows) {
    f << r.controller << ',' << r.sensor << ',' << fmt(r.metrics.mean_reward) << ','
      << fmt(100.0 * r.metrics.comfort_fraction) << ',' << fmt(r.metrics.mean_hvac_power_w)
      << '\n';
  }
}

void save_curve(const std::string& path, const std::vector<CurvePoint>& curve,
                const Provenance& prov) {
  auto f = open_out(path);
  f << prov.comment_line() << "\nepisode,mean_test_reward,mean_comfort_pct,mean_hvac_power_w\n";
  for (const auto& p : curve) {
    f << p.episode << ',' << fmt(p.mean_test_reward) << ',' << fmt(p.mean_comfort_pct) << ','
      << fmt(p.mean_hvac_power_w) << '\n';
  }
}

TrainResult train_cabin_policy(const TrainSetup& setup, const TileCoder& coder,
                               const std::vector<CabinState>& test_set, bool log_progress) {
  TrainResult result;
  result.weights = zero_policy(coder);
  CabinEnv env(setup.model, setup.comfort, setup.reward, setup.episode,
               derive_seed(setup.learning.seed, "env"));

  TrainHook hook;
  hook.fn = [&](long episode) {
    GreedyRlController greedy(coder, result.weights);
    const EvalMetrics m =
        evaluate(greedy, test_set, setup.model, setup.comfort, setup.reward, setup.episode);
    result.curve.push_back(
        {episode, m.mean_reward, 100.0 * m.comfort_fraction, m.mean_hvac_power_w});
    if (log_progress) {
      std::fprintf(stderr, "episode %ld: test reward %.4f, comfort %.1f%%, power %.0f W\n",
                   episode, m.mean_reward, 100.0 * m.comfort_fraction, m.mean_hvac_power_w);
    }
  };

  const auto t0 = std::chrono::steady_clock::now();
  train(env, coder, result.weights, setup.learning, &hook);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  result.episodes_per_second = secs > 0.0 ? setup.learning.episodes / secs : 0.0;
  return result;
}

std::vector<double> default_w_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 15; ++i) grid.push_back(3.0 + 0.1 * i);
  return grid;
}

std::vector<SweepPoint> pareto_sweep(const TrainSetup& base, const TileCoder& coder,
                                     const std::vector<double>& log10_w_grid,
                                     const std::vector<CabinState>& test_set, uint64_t master_seed,
                                     bool log_progress) {
  if (log10_w_grid.empty()) throw std::invalid_argument("pareto_sweep: empty grid");
  std::vector<SweepPoint> points;
  for (size_t i = 0; i < log10_w_grid.size(); ++i) {
    SweepPoint pt;
    pt.parameter = log10_w_grid[i];
    pt.seed = derive_seed(master_seed, "sweep/" + std::to_string(i));
    try {
      TrainSetup setup = base;
      setup.reward.energy_weight_divisor = std::pow(10.0, log10_w_grid[i]);
      setup.learning.seed = pt.seed;
      if (log_progress) {
        std::fprintf(stderr, "sweep point %zu/%zu: log10(w)=%.2f\n", i + 1, log10_w_grid.size(),
                     log10_w_grid[i]);
      }
      const TrainResult tr = train_cabin_policy(setup, coder, test_set, false);
      GreedyRlController greedy(coder, tr.weights);
      pt.metrics =
          evaluate(greedy, test_set, setup.model, setup.comfort, setup.reward, setup.episode);
    } catch (const std::exception& e) {
      pt.failed = true;
      pt.error = e.what();
    }
    points.push_back(std::move(pt));
  }
  return points;
}

void save_w_sweep(const std::string& path, const std::vector<SweepPoint>& points,
                  const Provenance& prov) {
  auto f = open_out(path);
  f << prov.comment_line()
    << "\nlog10_w,mean_reward,comfort_fraction,mean_hvac_power_w,status\n";
  for (const auto& p : points) {
    if (p.failed) {
      f << fmt(p.parameter) << ",,,,failed:" << p.error << '\n';
    } else {
      f << fmt(p.parameter) << ',' << fmt(p.metrics.mean_reward) << ','
        << fmt(p.metrics.comfort_fraction) << ',' << fmt(p.metrics.mean_hvac_power_w) << ",ok\n";
    }
  }
}

std::vector<double> default_alpha_grid() { return {0.0001, 0.001, 0.005, 0.01, 0.05, 0.1, 0.5}; }

std::vector<AlphaSweepRow> alpha_sweep(const TrainSetup& base, const TileCoder& coder,
                                       const std::vector<double>& alpha_grid, int seeds,
                                       long episodes, long window_lo, int eval_interval,
                                       const std::vector<CabinState>& test_set,
                                       uint64_t master_seed, bool log_progress) {
  if (alpha_grid.empty() || seeds < 1) throw std::invalid_argument("alpha_sweep: bad grid/seeds");
  std::vector<AlphaSweepRow> rows;
  for (size_t gi = 0; gi < alpha_grid.size(); ++gi) {
    std::vector<double> per_seed;
    for (int s = 0; s < seeds; ++s) {
      TrainSetup setup = base;
      setup.learning.alpha = alpha_grid[gi];
      setup.learning.episodes = episodes;
      setup.learning.eval_interval = eval_interval;
      setup.learning.seed =
          derive_seed(master_seed, "alpha/" + std::to_string(gi) + "/" + std::to_string(s));
      if (log_progress) {
        std::fprintf(stderr, "alpha sweep: alpha=%g seed %d/%d\n", alpha_grid[gi], s + 1, seeds);
      }
      const TrainResult tr = train_cabin_policy(setup, coder, test_set, false);
      double sum = 0.0;
      long n = 0;
      for (const auto& p : tr.curve) {
        if (p.episode >= window_lo && p.episode <= episodes) {
          sum += p.mean_test_reward;
          ++n;
        }
      }
      const double mean = n > 0 ? sum / n : 0.0;
      per_seed.push_back(mean);
      rows.push_back({alpha_grid[gi], s, mean, 0.0});
    }
    const double mean =
        std::accumulate(per_seed.begin(), per_seed.end(), 0.0) / per_seed.size();
    double var = 0.0;
    for (double v : per_seed) var += (v - mean) * (v - mean);
    var = per_seed.size() > 1 ? var / (per_seed.size() - 1) : 0.0;
    const double ci = 1.96 * std::sqrt(var / per_seed.size());
    rows.push_back({alpha_grid[gi], -1, mean, ci});
  }
  return rows;
}

void save_alpha_sweep(const std::string& path, const std::vector<AlphaSweepRow>& rows,
                      const Provenance& prov) {
  auto f = open_out(path);
  f << prov.comment_line() << "\nalpha,seed,mean_test_reward,ci95_half_width\n";
  for (const auto& r : rows) {
    f << fmt(r.alpha) << ',';
    if (r.seed_index < 0) {
      f << "aggregate," << fmt(r.mean_test_reward) << ',' << fmt(r.ci95_half_width) << '\n';
    } else {
      f << r.seed_index << ',' << fmt(r.mean_test_reward) << ",\n";
    }
  }
}

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
  const size_t n = v.size();
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> r(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * (i + j) + 1.0;  // average rank for ties
    for (size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman_rank_correlation(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("spearman: need two equally sized samples");
  }
  const std::vector<double> rx = ranks(x);
  const std::vector<double> ry = ranks(y);
  const size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double num = 0.0, dx = 0.0, dy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    num += (rx[i] - mx) * (ry[i] - my);
    dx += (rx[i] - mx) * (rx[i] - mx);
    dy += (ry[i] - my) * (ry[i] - my);
  }
  if (dx == 0.0 || dy == 0.0) return 0.0;
  return num / std::sqrt(dx * dy);
}

}  // namespace cabinrl
