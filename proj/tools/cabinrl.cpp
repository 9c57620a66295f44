// cabinrl: train, evaluate and sweep thermal-comfort HVAC controllers on the
// lumped cabin model.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <optional>

#include "cabinrl/config.hpp"
#include "cabinrl/eval.hpp"

using namespace cabinrl;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

ToolkitConfig resolve_config(const std::string& config_path) {
  if (config_path.empty()) return ToolkitConfig{};
  return load_config(config_path);
}

TrainSetup make_setup(const ToolkitConfig& cfg) {
  return {cfg.model, cfg.comfort, cfg.reward, cfg.episode, cfg.learning};
}

uint64_t file_hash(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open file for hashing: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return fnv1a64(ss.str());
}

std::vector<CabinState> test_set_for(const ToolkitConfig& cfg, const std::string& scenarios) {
  if (!scenarios.empty()) return load_scenarios(scenarios);
  // No scenario file given: generate the default 200-state set from a child
  // seed of the master seed so runs stay reproducible.
  return generate_test_set(derive_seed(cfg.master_seed, "scenarios"), 200, cfg.episode);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-efficient cabin comfort control: simulator, Sarsa(lambda) "
               "trainer and evaluation harness"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("cabinrl ") + kToolVersion);

  std::string config_path;
  app.add_option("--config", config_path, "INI-style configuration file")->capture_default_str();

  // gen-scenarios
  auto* gen = app.add_subcommand("gen-scenarios", "Generate a test scenario CSV");
  uint64_t gen_seed = 7;
  int gen_count = 200;
  std::string gen_out = "scenarios.csv";
  gen->add_option("--seed", gen_seed, "RNG seed for the scenario draw");
  gen->add_option("--count", gen_count, "Number of start states");
  gen->add_option("--out", gen_out, "Output CSV path");

  // train
  auto* train_cmd = app.add_subcommand("train", "Train the Sarsa(lambda) policy");
  std::optional<long> train_episodes;
  std::string train_policy = "policy.bin";
  std::string train_curve = "curve.csv";
  std::string train_scenarios;
  std::optional<uint64_t> train_seed;
  train_cmd->add_option("--episodes", train_episodes, "Override the episode budget");
  train_cmd->add_option("--out-policy", train_policy, "Policy file to write");
  train_cmd->add_option("--curve", train_curve, "Learning-curve CSV to write");
  train_cmd->add_option("--scenarios", train_scenarios, "Test scenario CSV for periodic evaluation");
  train_cmd->add_option("--seed", train_seed, "Override the master seed");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a controller on the scenario set");
  std::string eval_controller, eval_sensor, eval_policy, eval_scenarios, eval_out = "metrics.csv";
  eval_cmd->add_option("--controller", eval_controller,
                       "rl | bang-bang | proportional | commercial | fuzzy")
      ->required();
  eval_cmd->add_option("--sensor", eval_sensor, "air | avg | et (baselines only)");
  eval_cmd->add_option("--policy", eval_policy, "Policy file (rl only)");
  eval_cmd->add_option("--scenarios", eval_scenarios, "Scenario CSV")->required();
  eval_cmd->add_option("--out", eval_out, "Metrics CSV (appends a row)");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Energy-weight or learning-rate sweep");
  std::string sweep_kind, sweep_out = "sweep.csv", sweep_scenarios;
  std::optional<long> sweep_episodes;
  int sweep_seeds = 5;
  sweep_cmd->add_option("--kind", sweep_kind, "w | alpha")->required();
  sweep_cmd->add_option("--out", sweep_out, "Output CSV");
  sweep_cmd->add_option("--scenarios", sweep_scenarios, "Scenario CSV");
  sweep_cmd->add_option("--episodes", sweep_episodes, "Training episodes per point");
  sweep_cmd->add_option("--seeds", sweep_seeds, "Seeds per alpha point");

  // trace
  auto* trace_cmd = app.add_subcommand("trace", "Single-episode rollout time series");
  std::string trace_controller, trace_sensor, trace_policy, trace_start, trace_out = "trace.csv";
  trace_cmd->add_option("--controller", trace_controller,
                        "rl | bang-bang | proportional | commercial | fuzzy")
      ->required();
  trace_cmd->add_option("--sensor", trace_sensor, "air | avg | et (baselines only)");
  trace_cmd->add_option("--policy", trace_policy, "Policy file (rl only)");
  trace_cmd->add_option("--start", trace_start, "Start state Tc,Tm,Tamb")->required();
  trace_cmd->add_option("--out", trace_out, "Output CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    const ToolkitConfig cfg = resolve_config(config_path);
    const uint64_t chash = config_hash(cfg);

    if (gen->parsed()) {
      if (gen_count < 1) {
        std::fprintf(stderr, "error: --count must be >= 1\n");
        return kExitUsage;
      }
      const auto scenarios = generate_test_set(gen_seed, gen_count, cfg.episode);
      save_scenarios(gen_out, scenarios, {chash, gen_seed});
      std::printf("wrote %s (%d scenarios, hash %016llx)\n", gen_out.c_str(), gen_count,
                  static_cast<unsigned long long>(file_hash(gen_out)));
      return 0;
    }

    const TileCoder coder(cfg.tiles, cabin_action_table());

    if (train_cmd->parsed()) {
      TrainSetup setup = make_setup(cfg);
      if (train_episodes) setup.learning.episodes = *train_episodes;
      const uint64_t master = train_seed.value_or(cfg.master_seed);
      setup.learning.seed = derive_seed(master, "train");
      const auto test_set = test_set_for(cfg, train_scenarios);
      const TrainResult result = train_cabin_policy(setup, coder, test_set, true);
      save_policy(train_policy, result.weights);
      save_curve(train_curve, result.curve, {chash, master});
      std::printf("wrote %s and %s (%.1f episodes/s)\n", train_policy.c_str(),
                  train_curve.c_str(), result.episodes_per_second);
      return 0;
    }

    if (eval_cmd->parsed()) {
      const auto scenarios = load_scenarios(eval_scenarios);
      std::unique_ptr<Controller> controller;
      PolicyWeights weights;
      std::string sensor_label;
      if (eval_controller == "rl") {
        if (!eval_sensor.empty()) {
          std::fprintf(stderr,
                       "error: --sensor is not valid for the rl controller (the agent "
                       "observes raw state, never a sensor variant)\n");
          return kExitUsage;
        }
        if (eval_policy.empty()) {
          std::fprintf(stderr, "error: --policy is required for the rl controller\n");
          return kExitUsage;
        }
        weights = load_policy(eval_policy);
        check_policy(weights, coder);
        controller = std::make_unique<GreedyRlController>(coder, weights);
      } else {
        if (eval_sensor.empty()) {
          std::fprintf(stderr, "error: --sensor is required for baseline controllers\n");
          return kExitUsage;
        }
        if (!eval_policy.empty()) {
          std::fprintf(stderr, "error: --policy is only valid for the rl controller\n");
          return kExitUsage;
        }
        controller = make_baseline(eval_controller, parse_sensor(eval_sensor), cfg.comfort,
                                   cfg.fuzzy);
        sensor_label = eval_sensor;
      }
      const EvalMetrics m =
          evaluate(*controller, scenarios, cfg.model, cfg.comfort, cfg.reward, cfg.episode);

      // Append to an existing metrics table, or start one.
      std::vector<MetricsRow> rows;
      if (std::filesystem::exists(eval_out)) {
        std::ifstream f(eval_out);
        std::string line;
        while (std::getline(f, line)) {
          if (line.empty() || line[0] == '#' || line.rfind("controller,", 0) == 0) continue;
          MetricsRow r;
          char name[64], sensor[64];
          sensor[0] = '\0';
          if (std::sscanf(line.c_str(), "%63[^,],%63[^,],%lf,%lf,%lf", name, sensor,
                          &r.metrics.mean_reward, &r.metrics.comfort_fraction,
                          &r.metrics.mean_hvac_power_w) >= 4) {
            r.controller = name;
            r.sensor = std::string(sensor) == "-" ? "" : sensor;
            r.metrics.comfort_fraction /= 100.0;
            rows.push_back(r);
          }
        }
      }
      MetricsRow row{eval_controller, sensor_label.empty() ? "-" : sensor_label, m};
      rows.push_back(row);
      save_metrics(eval_out, rows, {chash, cfg.master_seed});
      std::printf("%s%s%s: reward %.6g, comfort %.6g%%, power %.6g W\n", eval_controller.c_str(),
                  sensor_label.empty() ? "" : "-", sensor_label.c_str(), m.mean_reward,
                  100.0 * m.comfort_fraction, m.mean_hvac_power_w);
      return 0;
    }

    if (sweep_cmd->parsed()) {
      const TrainSetup base = make_setup(cfg);
      const auto test_set = test_set_for(cfg, sweep_scenarios);
      if (sweep_kind == "w") {
        TrainSetup setup = base;
        if (sweep_episodes) setup.learning.episodes = *sweep_episodes;
        const auto points = pareto_sweep(setup, coder, default_w_grid(), test_set,
                                         cfg.master_seed, true);
        save_w_sweep(sweep_out, points, {chash, cfg.master_seed});
      } else if (sweep_kind == "alpha") {
        const long episodes = sweep_episodes.value_or(2000);
        const auto rows = alpha_sweep(base, coder, default_alpha_grid(), sweep_seeds, episodes,
                                      episodes / 2, 100, test_set, cfg.master_seed, true);
        save_alpha_sweep(sweep_out, rows, {chash, cfg.master_seed});
      } else {
        std::fprintf(stderr, "error: --kind must be 'w' or 'alpha'\n");
        return kExitUsage;
      }
      std::printf("wrote %s\n", sweep_out.c_str());
      return 0;
    }

    if (trace_cmd->parsed()) {
      CabinState start;
      if (std::sscanf(trace_start.c_str(), "%lf,%lf,%lf", &start.t_cabin, &start.t_mass,
                      &start.t_ambient) != 3) {
        std::fprintf(stderr, "error: --start must be Tc,Tm,Tamb\n");
        return kExitUsage;
      }
      std::unique_ptr<Controller> controller;
      PolicyWeights weights;
      if (trace_controller == "rl") {
        if (trace_policy.empty()) {
          std::fprintf(stderr, "error: --policy is required for the rl controller\n");
          return kExitUsage;
        }
        weights = load_policy(trace_policy);
        check_policy(weights, coder);
        controller = std::make_unique<GreedyRlController>(coder, weights);
      } else {
        const SensorKind sensor =
            trace_sensor.empty() ? SensorKind::avg : parse_sensor(trace_sensor);
        controller = make_baseline(trace_controller, sensor, cfg.comfort, cfg.fuzzy);
      }
      const auto trace =
          rollout_trace(*controller, start, cfg.model, cfg.comfort, cfg.reward, cfg.episode);
      save_trace(trace_out, trace, cfg.model.dt, {chash, cfg.master_seed});
      std::printf("wrote %s (%zu steps)\n", trace_out.c_str(), trace.size());
      return 0;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitUsage;
  } catch (const ModelDivergenceError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
  return 0;
}
