#include "cabinrl/thermal.hpp"

#include <cmath>

namespace cabinrl {

void ModelParams::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(cabin_volume) || !positive(capacitance_factor) || !positive(cabin_conductance) ||
      !positive(mass_conductance) || !positive(mass_capacitance) || !positive(air_density) ||
      !positive(air_specific_heat) || !positive(dt) || substeps < 1) {
    throw std::invalid_argument("ModelParams: capacitances, conductances, density, specific "
                                "heat, dt and substeps must be strictly positive");
  }
  if (!std::isfinite(solar_load_w) || !std::isfinite(occupant_load_w)) {
    throw std::invalid_argument("ModelParams: loads must be finite");
  }
}

HvacAction decode_action(int index) {
  if (index < 0 || index >= kActionCount) {
    throw std::out_of_range("action index out of range [0, 60)");
  }
  HvacAction a;
  a.vent_flow = kVentFlows[static_cast<size_t>(index / 15)];
  a.vent_temp = kVentTemps[static_cast<size_t>((index % 15) / 3)];
  a.recirc = kRecircPositions[static_cast<size_t>(index % 3)];
  return a;
}

int action_index(const HvacAction& action) {
  auto find = [](const auto& grid, double v) {
    for (size_t i = 0; i < grid.size(); ++i) {
      if (std::abs(grid[i] - v) < 1e-9) return static_cast<int>(i);
    }
    throw std::invalid_argument("HvacAction component not on the discrete action grid");
  };
  return find(kVentFlows, action.vent_flow) * 15 + find(kVentTemps, action.vent_temp) * 3 +
         find(kRecircPositions, action.recirc);
}

double flow_to_conductance(double vent_flow, const ModelParams& params) {
  if (!(vent_flow >= 0.0)) {
    throw std::invalid_argument("vent flow must be non-negative");
  }
  // l/s -> m^3/s, then mdot * c_p.
  return (vent_flow / 1000.0) * params.air_density * params.air_specific_heat;
}

PumpDemand heat_pump_demand(const CabinState& state, const HvacAction& action,
                            const ModelParams& params) {
  PumpDemand d;
  d.i_fan = flow_to_conductance(action.vent_flow, params);
  const double fresh_fraction = 1.0 - action.recirc;
  d.i_in = fresh_fraction * d.i_fan;
  d.q_h_w = d.i_fan * (action.vent_temp - state.t_cabin) -
            d.i_in * (state.t_ambient - state.t_cabin);
  return d;
}

CabinDerivatives derivatives(const CabinState& state, double mixed_air_temp, double i_fan,
                             const ModelParams& params) {
  CabinDerivatives d;
  const double to_cabin = i_fan * (mixed_air_temp - state.t_cabin) + params.solar_load_w +
                          params.occupant_load_w +
                          (state.t_mass - state.t_cabin) * params.mass_conductance -
                          (state.t_cabin - state.t_ambient) * params.cabin_conductance;
  d.d_t_cabin = to_cabin / params.effective_cabin_capacitance();
  d.d_t_mass = (state.t_cabin - state.t_mass) * params.mass_conductance / params.mass_capacitance;
  return d;
}

StepOutcome step(const CabinState& state, const HvacAction& action, const ModelParams& params) {
  StepOutcome out;
  const PumpDemand demand = heat_pump_demand(state, action, params);
  out.heat_pump_power_w = demand.q_h_w;
  out.mixed_air_temp = action.vent_temp;

  CabinState s = state;
  const double h = params.dt / params.substeps;
  for (int i = 0; i < params.substeps; ++i) {
    const CabinDerivatives d = derivatives(s, out.mixed_air_temp, demand.i_fan, params);
    s.t_cabin += h * d.d_t_cabin;
    s.t_mass += h * d.d_t_mass;
  }
  if (!std::isfinite(s.t_cabin) || !std::isfinite(s.t_mass)) {
    throw ModelDivergenceError("thermal step produced a non-finite temperature");
  }
  out.next = s;
  return out;
}

}  // namespace cabinrl
