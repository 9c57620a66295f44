#pragma once

namespace cabinrl {

struct ComfortParams {
  double clothing_clo = 0.7;       // I_cl
  double target_c = 24.0;          // comfort band centre, degC
  double band_k = 1.0;             // half-width of the comfort band, K
  double velocity_divisor = 10.0;  // vent flow (l/s) -> occupant air velocity (m/s)
};

// Occupant-level air velocity estimated from the vent flow.
double occupant_air_velocity(double vent_flow, const ComfortParams& params);

// Sedentary equivalent temperature. Low-flow branch (velocity <= 0.1
// m/s) is the plain mean of air and radiant temperature.
double equivalent_temperature(double t_air, double t_radiant, double air_velocity,
                              const ComfortParams& params);

// Inclusive band: |T_e - target| <= band.
bool is_comfortable(double t_e, const ComfortParams& params);

}  // namespace cabinrl
