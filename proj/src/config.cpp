#include "cabinrl/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "cabinrl/rng.hpp"

namespace cabinrl {

namespace {

std::string join(const std::vector<std::string>& problems) {
  std::string s = "configuration errors:";
  for (const auto& p : problems) s += "\n  - " + p;
  return s;
}

std::string trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_list(const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t pos = 0;
    const double d = std::stod(trim(item), &pos);
    if (pos != trim(item).size()) throw std::invalid_argument("trailing characters");
    out.push_back(d);
  }
  return out;
}

int fuzzy_class(const std::string& s) {
  if (s == "low" || s == "cold") return 0;
  if (s == "medium" || s == "neutral") return 1;
  if (s == "high" || s == "hot") return 2;
  throw std::invalid_argument("expected low/medium/high");
}

}  // namespace

ConfigError::ConfigError(const std::vector<std::string>& problems)
    : std::runtime_error(join(problems)), problems_(problems) {}

ToolkitConfig parse_config_text(const std::string& text, const std::string& origin) {
  ToolkitConfig cfg;
  std::vector<std::string> problems;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;

  auto fail = [&](const std::string& msg) {
    problems.push_back(origin + ":" + std::to_string(lineno) + ": " + msg);
  };

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        fail("malformed section header: " + line);
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      fail("expected key = value: " + line);
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string full = section + "." + key;

    auto num = [&](double& target) {
      try {
        size_t pos = 0;
        target = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        fail("key '" + full + "': not a number: '" + value + "'");
      }
    };
    auto integer = [&](auto& target) {
      try {
        size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        target = static_cast<std::remove_reference_t<decltype(target)>>(v);
      } catch (const std::exception&) {
        fail("key '" + full + "': not an integer: '" + value + "'");
      }
    };
    auto trapezoid = [&](Trapezoid& t) {
      try {
        const auto vals = parse_list(value);
        if (vals.size() != 4) throw std::invalid_argument("need 4 values");
        t = {vals[0], vals[1], vals[2], vals[3]};
      } catch (const std::exception& e) {
        fail("key '" + full + "': expected a,b,c,d trapezoid: " + e.what());
      }
    };
    auto tile_var = [&](const std::string& name) {
      try {
        const auto vals = parse_list(value);
        if (vals.size() != 3) throw std::invalid_argument("need lo,hi,intervals");
        bool found = false;
        for (auto& g : cfg.tiles.groups) {
          for (auto& v : g.vars) {
            if (v.name == name) {
              v.lo = vals[0];
              v.hi = vals[1];
              v.intervals = static_cast<int>(vals[2]);
              found = true;
            }
          }
        }
        if (!found) throw std::invalid_argument("no such tile variable");
      } catch (const std::exception& e) {
        fail("key '" + full + "': " + e.what());
      }
    };
    auto rule = [&](int row) {
      try {
        std::stringstream ss(value);
        std::string t, fl, col;
        int j = 0;
        // value: three "temp/flow" cells (T_m = cold, neutral, hot) separated
        // by whitespace, e.g. "high/high high/medium high/medium".
        while (ss >> col) {
          const size_t slash = col.find('/');
          if (slash == std::string::npos || j >= 3) throw std::invalid_argument("bad rule row");
          cfg.fuzzy.rule_temp[row][j] = fuzzy_class(col.substr(0, slash));
          cfg.fuzzy.rule_flow[row][j] = fuzzy_class(col.substr(slash + 1));
          ++j;
        }
        if (j != 3) throw std::invalid_argument("rule row needs 3 cells");
      } catch (const std::exception& e) {
        fail("key '" + full + "': " + e.what());
      }
    };

    if (full == "model.cabin_volume") num(cfg.model.cabin_volume);
    else if (full == "model.capacitance_factor") num(cfg.model.capacitance_factor);
    else if (full == "model.solar_load_w") num(cfg.model.solar_load_w);
    else if (full == "model.occupant_load_w") num(cfg.model.occupant_load_w);
    else if (full == "model.cabin_conductance_w_per_k") num(cfg.model.cabin_conductance);
    else if (full == "model.mass_conductance_w_per_k") num(cfg.model.mass_conductance);
    else if (full == "model.mass_capacitance_j_per_k") num(cfg.model.mass_capacitance);
    else if (full == "model.air_density") num(cfg.model.air_density);
    else if (full == "model.air_specific_heat") num(cfg.model.air_specific_heat);
    else if (full == "model.dt_s") num(cfg.model.dt);
    else if (full == "model.substeps") integer(cfg.model.substeps);
    else if (full == "comfort.clothing_clo") num(cfg.comfort.clothing_clo);
    else if (full == "comfort.target_c") num(cfg.comfort.target_c);
    else if (full == "comfort.band_k") num(cfg.comfort.band_k);
    else if (full == "comfort.velocity_divisor") num(cfg.comfort.velocity_divisor);
    else if (full == "reward.energy_weight_divisor") num(cfg.reward.energy_weight_divisor);
    else if (full == "reward.fan_coefficient") num(cfg.reward.fan_coefficient);
    else if (full == "episode.max_steps") integer(cfg.episode.max_steps);
    else if (full == "episode.tm_min") num(cfg.episode.tm_min);
    else if (full == "episode.tm_max") num(cfg.episode.tm_max);
    else if (full == "episode.tamb_min") num(cfg.episode.tamb_min);
    else if (full == "episode.tamb_max") num(cfg.episode.tamb_max);
    else if (full == "episode.tc_min") num(cfg.episode.tc_min);
    else if (full == "episode.tc_max") num(cfg.episode.tc_max);
    else if (full == "episode.max_mass_air_gap") num(cfg.episode.max_mass_air_gap);
    else if (full == "episode.envelope_min") num(cfg.episode.envelope_min);
    else if (full == "episode.envelope_max") num(cfg.episode.envelope_max);
    else if (full == "learning.alpha") num(cfg.learning.alpha);
    else if (full == "learning.gamma") num(cfg.learning.gamma);
    else if (full == "learning.epsilon") num(cfg.learning.epsilon);
    else if (full == "learning.lambda") num(cfg.learning.lambda);
    else if (full == "learning.cutoff_episode") integer(cfg.learning.cutoff_episode);
    else if (full == "learning.episodes") integer(cfg.learning.episodes);
    else if (full == "learning.eval_interval") integer(cfg.learning.eval_interval);
    else if (full == "learning.trace_floor") num(cfg.learning.trace_floor);
    else if (full == "tiles.group_a_tilings") integer(cfg.tiles.groups[0].tilings);
    else if (full == "tiles.group_b_tilings") integer(cfg.tiles.groups[1].tilings);
    else if (full == "tiles.ta") tile_var("T_a");
    else if (full == "tiles.tm") tile_var("T_m");
    else if (full == "tiles.to") tile_var("T_o");
    else if (full == "tiles.ti") tile_var("T_i");
    else if (full == "tiles.vi") tile_var("v_i");
    else if (full == "tiles.ar") tile_var("A_r");
    else if (full == "fuzzy.input_cold") trapezoid(cfg.fuzzy.input[0]);
    else if (full == "fuzzy.input_neutral") trapezoid(cfg.fuzzy.input[1]);
    else if (full == "fuzzy.input_hot") trapezoid(cfg.fuzzy.input[2]);
    else if (full == "fuzzy.temp_low") trapezoid(cfg.fuzzy.temp_out[0]);
    else if (full == "fuzzy.temp_medium") trapezoid(cfg.fuzzy.temp_out[1]);
    else if (full == "fuzzy.temp_high") trapezoid(cfg.fuzzy.temp_out[2]);
    else if (full == "fuzzy.flow_low") trapezoid(cfg.fuzzy.flow_out[0]);
    else if (full == "fuzzy.flow_medium") trapezoid(cfg.fuzzy.flow_out[1]);
    else if (full == "fuzzy.flow_high") trapezoid(cfg.fuzzy.flow_out[2]);
    else if (full == "fuzzy.rules_cold") rule(0);
    else if (full == "fuzzy.rules_neutral") rule(1);
    else if (full == "fuzzy.rules_hot") rule(2);
    else if (full == "paths.scenarios") cfg.scenarios_path = value;
    else if (full == "paths.policy") cfg.policy_path = value;
    else if (full == "paths.output_dir") cfg.output_dir = value;
    else if (full == "run.seed") integer(cfg.master_seed);
    else if (full == "run.jobs") integer(cfg.jobs);
    else fail("unknown key '" + full + "'");
  }

  // Semantic checks, all collected before throwing.
  try {
    cfg.model.validate();
  } catch (const std::exception& e) {
    problems.push_back(std::string("model: ") + e.what());
  }
  try {
    cfg.learning.validate();
  } catch (const std::exception& e) {
    problems.push_back(std::string("learning: ") + e.what());
  }
  if (!(cfg.reward.energy_weight_divisor > 0.0)) {
    problems.push_back("reward.energy_weight_divisor must be > 0");
  }
  if (cfg.episode.max_steps < 1) problems.push_back("episode.max_steps must be >= 1");
  if (!(cfg.episode.envelope_min < cfg.episode.envelope_max)) {
    problems.push_back("episode envelope bounds must satisfy min < max");
  }

  if (!problems.empty()) throw ConfigError(problems);
  return cfg;
}

ToolkitConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError({"cannot open config file: " + path});
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str(), path);
}

std::string canonical_dump(const ToolkitConfig& cfg) {
  std::string s;
  char buf[256];
  auto put = [&](const char* key, double v) {
    std::snprintf(buf, sizeof buf, "%s=%.17g\n", key, v);
    s += buf;
  };
  auto puti = [&](const char* key, long long v) {
    std::snprintf(buf, sizeof buf, "%s=%lld\n", key, v);
    s += buf;
  };
  auto putt = [&](const char* key, const Trapezoid& t) {
    std::snprintf(buf, sizeof buf, "%s=%.17g,%.17g,%.17g,%.17g\n", key, t.a, t.b, t.c, t.d);
    s += buf;
  };
  s += "cabinrl-config-v1\n";
  put("model.cabin_volume", cfg.model.cabin_volume);
  put("model.capacitance_factor", cfg.model.capacitance_factor);
  put("model.solar_load_w", cfg.model.solar_load_w);
  put("model.occupant_load_w", cfg.model.occupant_load_w);
  put("model.cabin_conductance_w_per_k", cfg.model.cabin_conductance);
  put("model.mass_conductance_w_per_k", cfg.model.mass_conductance);
  put("model.mass_capacitance_j_per_k", cfg.model.mass_capacitance);
  put("model.air_density", cfg.model.air_density);
  put("model.air_specific_heat", cfg.model.air_specific_heat);
  put("model.dt_s", cfg.model.dt);
  puti("model.substeps", cfg.model.substeps);
  put("comfort.clothing_clo", cfg.comfort.clothing_clo);
  put("comfort.target_c", cfg.comfort.target_c);
  put("comfort.band_k", cfg.comfort.band_k);
  put("comfort.velocity_divisor", cfg.comfort.velocity_divisor);
  put("reward.energy_weight_divisor", cfg.reward.energy_weight_divisor);
  put("reward.fan_coefficient", cfg.reward.fan_coefficient);
  puti("episode.max_steps", cfg.episode.max_steps);
  put("episode.tm_min", cfg.episode.tm_min);
  put("episode.tm_max", cfg.episode.tm_max);
  put("episode.tamb_min", cfg.episode.tamb_min);
  put("episode.tamb_max", cfg.episode.tamb_max);
  put("episode.tc_min", cfg.episode.tc_min);
  put("episode.tc_max", cfg.episode.tc_max);
  put("episode.max_mass_air_gap", cfg.episode.max_mass_air_gap);
  put("episode.envelope_min", cfg.episode.envelope_min);
  put("episode.envelope_max", cfg.episode.envelope_max);
  put("learning.alpha", cfg.learning.alpha);
  put("learning.gamma", cfg.learning.gamma);
  put("learning.epsilon", cfg.learning.epsilon);
  put("learning.lambda", cfg.learning.lambda);
  puti("learning.cutoff_episode", cfg.learning.cutoff_episode);
  puti("learning.episodes", cfg.learning.episodes);
  puti("learning.eval_interval", cfg.learning.eval_interval);
  put("learning.trace_floor", cfg.learning.trace_floor);
  s += canonical_serialization(cfg.tiles, cabin_action_table());
  for (int i = 0; i < 3; ++i) {
    const char* names[3] = {"cold", "neutral", "hot"};
    putt(("fuzzy.input_" + std::string(names[i])).c_str(), cfg.fuzzy.input[i]);
  }
  for (int i = 0; i < 3; ++i) {
    const char* names[3] = {"low", "medium", "high"};
    putt(("fuzzy.temp_" + std::string(names[i])).c_str(), cfg.fuzzy.temp_out[i]);
    putt(("fuzzy.flow_" + std::string(names[i])).c_str(), cfg.fuzzy.flow_out[i]);
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      std::snprintf(buf, sizeof buf, "fuzzy.rule[%d][%d]=%d/%d\n", i, j, cfg.fuzzy.rule_temp[i][j],
                    cfg.fuzzy.rule_flow[i][j]);
      s += buf;
    }
  }
  puti("run.seed", static_cast<long long>(cfg.master_seed));
  return s;
}

uint64_t config_hash(const ToolkitConfig& cfg) { return fnv1a64(canonical_dump(cfg)); }

}  // namespace cabinrl
