#pragma once

#include <memory>
#include <string>

#include "cabinrl/comfort.hpp"
#include "cabinrl/env.hpp"
#include "cabinrl/sarsa.hpp"
#include "cabinrl/thermal.hpp"
#include "cabinrl/tile_coder.hpp"

namespace cabinrl {

enum class SensorKind { air, avg, et };

SensorKind parse_sensor(const std::string& name);
std::string sensor_name(SensorKind kind);

// Sensor variants: cabin air, cabin/mass average, or equivalent temperature
// computed with the controller's previously commanded vent flow.
double sensor_reading(const CabinState& state, double last_vent_flow, SensorKind kind,
                      const ComfortParams& comfort);

double nearest_vent_flow(double v);
double nearest_vent_temp(double t);

HvacAction bang_bang(double t_s, const ComfortParams& comfort);
HvacAction proportional(double t_s, const ComfortParams& comfort);
// Proportional with the fan capped at 67 l/s (approximation of the
// proprietary specification; the real transfer function is not public).
HvacAction commercial(double t_s, const ComfortParams& comfort);

// Trapezoid membership (a <= b <= c <= d); b == c gives a triangle, a == b or
// c == d a shoulder.
struct Trapezoid {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
  double membership(double x) const;
};

enum FuzzyClass { kCold = 0, kNeutral = 1, kHot = 2 };  // outputs reuse 0=low,1=medium,2=high

struct FuzzyConfig {
  Trapezoid input[3];      // COLD / NEUTRAL / HOT over temperature inputs
  Trapezoid temp_out[3];   // LOW / MEDIUM / HIGH vent temperature sets
  Trapezoid flow_out[3];   // LOW / MEDIUM / HIGH vent flow sets
  double temp_universe_lo = 0.0, temp_universe_hi = 60.0;
  double flow_universe_lo = 1.0, flow_universe_hi = 100.0;
  int rule_temp[3][3];  // [T_s class][T_m class] -> output temp class
  int rule_flow[3][3];

  static FuzzyConfig defaults();
};

// Mamdani min-max inference with centroid defuzzification, snapped to the
// discrete action grid.
HvacAction fuzzy(double t_s, double t_m, const FuzzyConfig& config);

// Raw centroids before snapping (exposed for oracle tests).
struct FuzzyCentroids {
  double vent_temp = 0.0;
  double vent_flow = 0.0;
};
FuzzyCentroids fuzzy_centroids(double t_s, double t_m, const FuzzyConfig& config);

class Controller {
 public:
  virtual ~Controller() = default;
  virtual void reset() {}
  virtual int act(const CabinState& state) = 0;
};

// name: bang-bang | proportional | commercial | fuzzy.
std::unique_ptr<Controller> make_baseline(const std::string& name, SensorKind sensor,
                                          const ComfortParams& comfort,
                                          const FuzzyConfig& fuzzy_config);

class GreedyRlController : public Controller {
 public:
  GreedyRlController(const TileCoder& coder, const PolicyWeights& weights);
  int act(const CabinState& state) override;

 private:
  const TileCoder& coder_;
  const PolicyWeights& weights_;
  std::vector<int> bases_;
  std::vector<double> q_;
};

}  // namespace cabinrl
