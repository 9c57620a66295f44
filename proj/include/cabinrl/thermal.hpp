#pragma once

#include <array>
#include <stdexcept>

namespace cabinrl {

// Lumped three-node cabin model: mixing chamber (massless), cabin air and
// interior mass, with constant solar/occupant loads and conduction to ambient.
struct ModelParams {
  double cabin_volume = 2.5;                        // m^3
  double capacitance_factor = 8.0;                  // observed/theoretical air capacitance ratio
  double solar_load_w = 150.0;                      // W
  double occupant_load_w = 120.0;                   // W
  double cabin_conductance = 5.741626794 * 4.0;     // 1/R_c, W/K
  double mass_conductance = 75.0 * 1.08;            // 1/R_m, W/K
  double mass_capacitance = 450.0 * 0.02 * 7850.0;  // C_m, J/K
  double air_density = 1.2;                         // kg/m^3
  double air_specific_heat = 1005.0;                // J/(kg K)
  double dt = 2.0;                                  // control/integration step, s
  int substeps = 1;

  double cabin_capacitance() const { return air_density * air_specific_heat * cabin_volume; }
  double effective_cabin_capacitance() const { return cabin_capacitance() * capacitance_factor; }
  void validate() const;
};

struct CabinState {
  double t_cabin = 0.0;    // cabin air temperature, degC
  double t_mass = 0.0;     // interior mass temperature, degC
  double t_ambient = 0.0;  // outside air temperature, degC (constant per episode)
};

struct HvacAction {
  double vent_flow = 1.0;   // l/s, one of {1, 34, 67, 100}
  double vent_temp = 7.0;   // degC, one of 5 values evenly spaced over [7, 60]
  double recirc = 0.0;      // flap position, one of {0, 0.5, 1}; 1 = full recirculation
};

inline constexpr int kActionCount = 60;
inline constexpr std::array<double, 4> kVentFlows = {1.0, 34.0, 67.0, 100.0};
inline constexpr std::array<double, 5> kVentTemps = {7.0, 20.25, 33.5, 46.75, 60.0};
inline constexpr std::array<double, 3> kRecircPositions = {0.0, 0.5, 1.0};

// Row-major over (vent_flow slowest, vent_temp, recirc fastest).
HvacAction decode_action(int index);
int action_index(const HvacAction& action);

// Thermal current carried by an air stream: I = mdot * c_p.
double flow_to_conductance(double vent_flow, const ModelParams& params);

struct PumpDemand {
  double q_h_w = 0.0;  // heat pump power, W (signed)
  double i_fan = 0.0;  // W/K
  double i_in = 0.0;   // fresh-air intake current, W/K
};

// Mixing-chamber balance with an ideal heat pump holding the vent set-point.
// Fresh-air fraction is 1 - recirc.
PumpDemand heat_pump_demand(const CabinState& state, const HvacAction& action,
                            const ModelParams& params);

struct CabinDerivatives {
  double d_t_cabin = 0.0;  // K/s
  double d_t_mass = 0.0;   // K/s
};

CabinDerivatives derivatives(const CabinState& state, double mixed_air_temp, double i_fan,
                             const ModelParams& params);

struct StepOutcome {
  CabinState next;
  double heat_pump_power_w = 0.0;
  double mixed_air_temp = 0.0;
};

// Advances one control interval by explicit Euler over `substeps` equal
// sub-intervals. Pump power is reported for the pre-step state and held
// constant over the interval.
StepOutcome step(const CabinState& state, const HvacAction& action, const ModelParams& params);

class ModelDivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cabinrl
