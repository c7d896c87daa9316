#pragma once

#include <cstdint>

#include "lqgcd/model.hpp"

namespace lqgcd {

enum class FormationMode { homogeneous, heterogeneous };
enum class CostMode { uniform, heterogeneous };

// Planar multi-robot formation: each agent is a unit-step double integrator
// with state [p; v] in R^4, stacked agent by agent. Sensors 0..agents-1 are
// per-agent GPS (kind "gps"); the rest are lidar readings p_j - p_i for every
// ordered pair (i, j), i != j, in row-major order (kind "lidar"). The state is
// the deviation from a regular polygon of the given radius centred in a
// 10 m x 10 m field, with agents dropped uniformly at random in the field.
[[nodiscard]] Scenario build_formation_scenario(int agents, int horizon, FormationMode mode, std::uint64_t seed,
                                                double formation_radius = 2.0);

// 3-D UAV double integrator [p; v] in R^6. Sensor 0 is GPS, sensor 1 an
// altimeter, sensors 2.. are landmark position fixes whose covariance is
// 0.1 I + G^T G with G = landmark_scale * (standard Gaussian 3x3).
[[nodiscard]] Scenario build_uav_scenario(int landmarks, int horizon, CostMode cost_mode, std::uint64_t seed,
                                          double landmark_scale = 0.5);

struct RandomScenarioOptions {
    int state_dim = 3;
    int horizon = 3;
    int sensors = 5;
    int max_measurement_dim = 2;
    int input_dim = 0;  // 0 picks max(1, state_dim / 2)
    bool unit_costs = false;
    bool time_varying = true;
    bool random_mean = false;
};

// Generic random instance: Gaussian A_t, B_t, C_{i,t}; random PD noise and
// weights; sensor costs in [0.5, 2] unless unit_costs.
[[nodiscard]] Scenario build_random_scenario(const RandomScenarioOptions& opts, std::uint64_t seed);

}  // namespace lqgcd
