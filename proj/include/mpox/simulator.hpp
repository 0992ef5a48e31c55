#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpox/model.hpp"

namespace mpox {

// Compartment order everywhere: S_h, I_h, Q_h, R_h, S_r, I_r.
struct State {
    double s_h = 0.0;
    double i_h = 0.0;
    double q_h = 0.0;
    double r_h = 0.0;
    double s_r = 0.0;
    double i_r = 0.0;

    double n_h() const { return s_h + i_h + q_h + r_h; }
    double n_r() const { return s_r + i_r; }

    double operator[](int i) const;
    double& operator[](int i);

    bool operator==(const State&) const = default;
};

extern const char* const kCompartmentNames[6];

struct SimConfig {
    double dt = 0.1;
    double horizon = 500.0;
    int n_paths = 80;
    std::uint64_t master_seed = 1;
    State initial_state{9990.0, 10.0, 0.0, 0.0, 4990.0, 10.0};
    double positivity_floor = 1e-9; // rescue value for negative Euler overshoots

    // throws std::invalid_argument naming the field and the violated constraint
    void validate() const;

    bool operator==(const SimConfig&) const = default;
};

struct PathRecord {
    int path_index = 0;
    std::vector<double> grid;  // regular dt-grid merged with all event times
    std::vector<State> states; // post-jump values at event times
    std::array<EventLog, 4> events;
    long clamp_count = 0; // positivity-floor activations along the path
};

// Thrown when a path produces a non-finite component; carries the location.
struct PathFailure : std::runtime_error {
    PathFailure(int path, double time, int component, const std::string& what);
    int path_index;
    double time;
    int component; // 0..5
};

// Drift of the continuous part. Incidence ratios use the convention that a
// zero numerator yields zero even when the corresponding population is empty;
// negative or non-finite states throw std::domain_error.
std::array<double, 6> drift(const State& x, const ModelParams& params);

// One Euler increment of the diffusion part given dw[k] ~ N(0, dt) for B_{k+1}.
// B_2 enters S_h and I_h with opposite signs and the same draw.
std::array<double, 6> diffusion(const State& x, const ModelParams& params,
                                const std::array<double, 8>& dw);

// Multiplies the channel's compartment by prod (1 + eps_j); channels are
// 1-based (1 S_h, 2 I_h, 3 Q_h, 4 R_h). Unknown channel throws std::domain_error.
void apply_jumps(State& x, int channel, const std::vector<double>& marks);

// Regular grid {0, dt, 2 dt, ...} ending exactly at horizon.
std::vector<double> regular_grid(double dt, double horizon);

// Jump-adapted Euler-Maruyama: pre-simulated event logs, grid = regular grid
// merged with event times, continuous update first, then jumps. A component
// pushed below zero is lifted to the positivity floor and the activation is
// counted; nonnegative values are never altered. Deterministic per
// (seed, index).
PathRecord simulate_path(const ModelParams& params, const SimConfig& cfg, int path_index);

struct MeanPath {
    std::vector<double> grid; // regular dt-grid
    std::vector<State> mean;
};

struct PathFailureInfo {
    int path_index = 0;
    double time = 0.0;
    int component = 0;
    std::string message;
};

struct EnsembleResult {
    std::vector<PathRecord> paths; // ordered by path index; failed paths left empty
    MeanPath mean;                 // across successful paths
    std::vector<PathFailureInfo> failures;
    long total_clamps = 0;
};

// Paths run concurrently (n_threads == 0 picks the hardware count) but the
// result is identical to sequential execution ordered by path index.
EnsembleResult simulate_ensemble(const ModelParams& params, const SimConfig& cfg,
                                 int n_threads = 0);

} // namespace mpox
