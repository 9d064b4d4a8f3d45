#pragma once

#include "rcmu/kfactor.hpp"
#include "rcmu/synth.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace rcmu {

struct SimulationConfig {
    StirringLayout layout{};
    std::size_t reps = 10'000;
    std::uint64_t seed = 1;
    BiasN bias_n = BiasN::Sp;
    PhaseMode phase_mode = PhaseMode::RandomPerGroup;
    double total_power = 1.0;

    void validate() const;
};

/// Linear-domain means over repetitions, indexed like kAllEstimators.
struct EstimatorMeans {
    std::array<double, 3> linear{};
    std::array<std::size_t, 3> degenerate_reps{};

    double mean(Estimator e) const { return linear[static_cast<std::size_t>(e)]; }
    double mean_db(Estimator e) const;  ///< NaN when the mean is not positive
};

/// Repetition r draws one single-frequency slice seeded by
/// derive_seed(config.seed, {point_id, r}) and applies all three estimators.
/// Repetitions with a degenerate estimate are excluded from that estimator's mean.
EstimatorMeans simulate_k_serial(double k_linear, const SimulationConfig& config, std::uint64_t point_id = 0);

/// OpenMP version of simulate_k_serial; results are bit-identical for any thread count.
EstimatorMeans simulate_k(double k_linear, const SimulationConfig& config, std::uint64_t point_id = 0);

struct SweepRange {
    double k_min_db = -20.0;
    double k_max_db = 0.0;
    double k_step_db = 1.0;

    void validate() const;
    std::vector<double> points_db() const;
};

struct SweepRow {
    double k_true_db = 0.0;
    EstimatorMeans means;
};

/// Runs simulate_k at every sweep point; point i uses point_id = i.
std::vector<SweepRow> simulate_sweep(const SweepRange& range, const SimulationConfig& config);

}  // namespace rcmu
