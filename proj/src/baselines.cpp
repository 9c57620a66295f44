#include "cabinrl/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace cabinrl {

SensorKind parse_sensor(const std::string& name) {
  if (name == "air") return SensorKind::air;
  if (name == "avg") return SensorKind::avg;
  if (name == "et") return SensorKind::et;
  throw std::invalid_argument("unknown sensor kind: " + name);
}

std::string sensor_name(SensorKind kind) {
  switch (kind) {
    case SensorKind::air: return "air";
    case SensorKind::avg: return "avg";
    case SensorKind::et: return "et";
  }
  return "?";
}

double sensor_reading(const CabinState& state, double last_vent_flow, SensorKind kind,
                      const ComfortParams& comfort) {
  switch (kind) {
    case SensorKind::air:
      return state.t_cabin;
    case SensorKind::avg:
      return 0.5 * (state.t_cabin + state.t_mass);
    case SensorKind::et:
      return equivalent_temperature(state.t_cabin, state.t_mass,
                                    occupant_air_velocity(last_vent_flow, comfort), comfort);
  }
  throw std::logic_error("unreachable");
}

namespace {

double nearest_of(const auto& grid, double x) {
  double best = grid[0];
  for (double g : grid) {
    if (std::abs(g - x) < std::abs(best - x)) best = g;
  }
  return best;
}

}  // namespace

double nearest_vent_flow(double v) { return nearest_of(kVentFlows, v); }
double nearest_vent_temp(double t) { return nearest_of(kVentTemps, t); }

HvacAction bang_bang(double t_s, const ComfortParams& comfort) {
  HvacAction a;
  a.recirc = 0.5;
  const double err = t_s - comfort.target_c;
  if (std::abs(err) > comfort.band_k) {
    a.vent_flow = kVentFlows.back();
    a.vent_temp = err < 0.0 ? kVentTemps.back() : kVentTemps.front();
  } else {
    a.vent_flow = kVentFlows.front();
    a.vent_temp = nearest_vent_temp(comfort.target_c);
  }
  return a;
}

HvacAction proportional(double t_s, const ComfortParams& comfort) {
  HvacAction a;
  a.recirc = 0.5;
  const double err = t_s - comfort.target_c;
  a.vent_flow = nearest_vent_flow(100.0 - 99.0 * std::exp(-std::abs(err) / 10.0));
  if (std::abs(err) > comfort.band_k) {
    a.vent_temp = err < 0.0 ? kVentTemps.back() : kVentTemps.front();
  } else {
    a.vent_temp = nearest_vent_temp(comfort.target_c);
  }
  return a;
}

HvacAction commercial(double t_s, const ComfortParams& comfort) {
  HvacAction a = proportional(t_s, comfort);
  const double raw = 100.0 - 99.0 * std::exp(-std::abs(t_s - comfort.target_c) / 10.0);
  a.vent_flow = nearest_vent_flow(std::min(raw, 67.0));
  return a;
}

double Trapezoid::membership(double x) const {
  if (x <= a || x >= d) return (x == a && a == b) || (x == d && c == d) ? 1.0 : 0.0;
  if (x < b) return (x - a) / (b - a);
  if (x <= c) return 1.0;
  return (d - x) / (d - c);
}

FuzzyConfig FuzzyConfig::defaults() {
  FuzzyConfig f;
  // Inputs: neutral 24 +- 1 degC with 1 K ramped shoulders, cold below, hot above.
  f.input[kCold] = {-1e9, -1e9, 22.0, 23.0};
  f.input[kNeutral] = {22.0, 23.0, 25.0, 26.0};
  f.input[kHot] = {25.0, 26.0, 1e9, 1e9};
  // Vent temperature: low below 10, medium around 20, high above 30.
  f.temp_out[0] = {0.0, 0.0, 10.0, 20.0};
  f.temp_out[1] = {10.0, 20.0, 20.0, 30.0};
  f.temp_out[2] = {20.0, 30.0, 60.0, 60.0};
  // Vent flow: low below 30, medium around 50, high above 70. The low set is
  // weighted toward the bottom of the range so its centroid snaps to the
  // minimum discrete fan speed.
  f.flow_out[0] = {1.0, 1.0, 10.0, 30.0};
  f.flow_out[1] = {30.0, 50.0, 50.0, 70.0};
  f.flow_out[2] = {50.0, 70.0, 100.0, 100.0};
  // Rows: T_s class; columns: T_m class. Only (hot, cold) is fixed by the
  // published table; the rest mirror it symmetrically.
  const int rt[3][3] = {{2, 2, 2},   // cold sensor: heat
                        {1, 1, 1},   // neutral: hold
                        {0, 0, 0}};  // hot sensor: cool
  const int rf[3][3] = {{2, 1, 1},  //
                        {0, 0, 0},  //
                        {1, 1, 2}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      f.rule_temp[i][j] = rt[i][j];
      f.rule_flow[i][j] = rf[i][j];
    }
  }
  return f;
}

namespace {

// Centroid of the max-aggregated clipped output sets, by midpoint quadrature.
double defuzzify(const Trapezoid sets[3], const double strength[3], double lo, double hi,
                 double fallback) {
  constexpr int kSamples = 2000;
  const double h = (hi - lo) / kSamples;
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double x = lo + (i + 0.5) * h;
    double mu = 0.0;
    for (int k = 0; k < 3; ++k) {
      mu = std::max(mu, std::min(strength[k], sets[k].membership(x)));
    }
    num += mu * x;
    den += mu;
  }
  return den > 0.0 ? num / den : fallback;
}

}  // namespace

FuzzyCentroids fuzzy_centroids(double t_s, double t_m, const FuzzyConfig& config) {
  double temp_strength[3] = {0.0, 0.0, 0.0};
  double flow_strength[3] = {0.0, 0.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    const double mu_s = config.input[i].membership(t_s);
    if (mu_s <= 0.0) continue;
    for (int j = 0; j < 3; ++j) {
      const double w = std::min(mu_s, config.input[j].membership(t_m));
      temp_strength[config.rule_temp[i][j]] = std::max(temp_strength[config.rule_temp[i][j]], w);
      flow_strength[config.rule_flow[i][j]] = std::max(flow_strength[config.rule_flow[i][j]], w);
    }
  }
  FuzzyCentroids c;
  c.vent_temp = defuzzify(config.temp_out, temp_strength, config.temp_universe_lo,
                          config.temp_universe_hi, 0.5 * (config.temp_universe_lo + config.temp_universe_hi));
  c.vent_flow = defuzzify(config.flow_out, flow_strength, config.flow_universe_lo,
                          config.flow_universe_hi, 0.5 * (config.flow_universe_lo + config.flow_universe_hi));
  return c;
}

HvacAction fuzzy(double t_s, double t_m, const FuzzyConfig& config) {
  const FuzzyCentroids c = fuzzy_centroids(t_s, t_m, config);
  HvacAction a;
  a.vent_temp = nearest_vent_temp(c.vent_temp);
  a.vent_flow = nearest_vent_flow(c.vent_flow);
  a.recirc = 0.5;
  return a;
}

namespace {

class BaselineController : public Controller {
 public:
  enum Kind { kBangBang, kProportional, kCommercial, kFuzzy };

  BaselineController(Kind kind, SensorKind sensor, const ComfortParams& comfort,
                     const FuzzyConfig& fuzzy_config)
      : kind_(kind), sensor_(sensor), comfort_(comfort), fuzzy_(fuzzy_config) {}

  void reset() override { last_vent_flow_ = kVentFlows.front(); }

  int act(const CabinState& state) override {
    const double t_s = sensor_reading(state, last_vent_flow_, sensor_, comfort_);
    HvacAction a;
    switch (kind_) {
      case kBangBang: a = bang_bang(t_s, comfort_); break;
      case kProportional: a = proportional(t_s, comfort_); break;
      case kCommercial: a = commercial(t_s, comfort_); break;
      case kFuzzy: a = fuzzy(t_s, state.t_mass, fuzzy_); break;
    }
    last_vent_flow_ = a.vent_flow;
    return action_index(a);
  }

 private:
  Kind kind_;
  SensorKind sensor_;
  ComfortParams comfort_;
  FuzzyConfig fuzzy_;
  double last_vent_flow_ = kVentFlows.front();
};

}  // namespace

std::unique_ptr<Controller> make_baseline(const std::string& name, SensorKind sensor,
                                          const ComfortParams& comfort,
                                          const FuzzyConfig& fuzzy_config) {
  BaselineController::Kind kind;
  if (name == "bang-bang") {
    kind = BaselineController::kBangBang;
  } else if (name == "proportional") {
    kind = BaselineController::kProportional;
  } else if (name == "commercial") {
    kind = BaselineController::kCommercial;
  } else if (name == "fuzzy") {
    kind = BaselineController::kFuzzy;
  } else {
    throw std::invalid_argument("unknown controller: " + name);
  }
  return std::make_unique<BaselineController>(kind, sensor, comfort, fuzzy_config);
}

GreedyRlController::GreedyRlController(const TileCoder& coder, const PolicyWeights& weights)
    : coder_(coder), weights_(weights) {
  check_policy(weights_, coder_);
  bases_.resize(static_cast<size_t>(coder_.num_tilings()));
  q_.resize(static_cast<size_t>(coder_.action_count()));
}

int GreedyRlController::act(const CabinState& state) {
  const double sv[3] = {state.t_cabin, state.t_mass, state.t_ambient};
  coder_.state_bases(std::span<const double>(sv, 3), bases_.data());
  coder_.q_all(weights_.theta, bases_.data(), q_.data());
  return greedy_action(q_);
}

}  // namespace cabinrl
