#include "cabinrl/comfort.hpp"

#include <cmath>
#include <stdexcept>

namespace cabinrl {

double occupant_air_velocity(double vent_flow, const ComfortParams& params) {
  if (!(vent_flow >= 0.0)) {
    throw std::invalid_argument("vent flow must be non-negative");
  }
  return vent_flow / params.velocity_divisor;
}

double equivalent_temperature(double t_air, double t_radiant, double air_velocity,
                              const ComfortParams& params) {
  if (air_velocity <= 0.1) {
    return 0.5 * (t_air + t_radiant);
  }
  return 0.55 * t_air + 0.45 * t_radiant +
         (0.24 - 0.75 * std::sqrt(air_velocity)) / (1.0 + params.clothing_clo) *
             (36.5 - t_air);
}

bool is_comfortable(double t_e, const ComfortParams& params) {
  return std::abs(t_e - params.target_c) <= params.band_k;
}

}  // namespace cabinrl
