#include "rcmu/montecarlo.hpp"

#include "rcmu/error.hpp"
#include "rcmu/numeric.hpp"
#include "rcmu/rng.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace rcmu {

void SimulationConfig::validate() const {
    layout.validate();
    if (layout.sp_tt < 3) throw Error("simulation needs sp_tt >= 3");
    if (reps < 1) throw Error("reps must be >= 1");
    if (!(total_power > 0.0)) throw Error("total_power must be > 0");
}

double EstimatorMeans::mean_db(Estimator e) const { return to_db_or_nan(mean(e)); }

namespace {

using RepValues = std::array<double, 3>;

// One Monte Carlo repetition. `scratch` must hold layout.n_eff() samples.
RepValues run_repetition(const RicianSpec& spec, const SimulationConfig& config, std::uint64_t point_id,
                         std::uint64_t rep, std::span<Complex> scratch) {
    draw_rician_slice(spec, config.layout, derive_seed(config.seed, {point_id, rep}), config.phase_mode, scratch);
    const FrequencySlice slice{scratch, config.layout.n_tt, config.layout.sp_tt};
    RepValues out;
    for (std::size_t e = 0; e < kAllEstimators.size(); ++e) {
        try {
            out[e] = estimate_slice(kAllEstimators[e], slice, config.bias_n);
        } catch (const DegenerateError&) {
            out[e] = std::numeric_limits<double>::quiet_NaN();
        }
    }
    return out;
}

class MeanReducer {
public:
    void add(const RepValues& v) {
        for (std::size_t e = 0; e < v.size(); ++e) {
            if (std::isnan(v[e])) {
                ++result_.degenerate_reps[e];
                continue;
            }
            sums_[e].add(v[e]);
            ++counts_[e];
        }
    }
    EstimatorMeans finish() {
        for (std::size_t e = 0; e < sums_.size(); ++e)
            result_.linear[e] = counts_[e] ? sums_[e].value() / static_cast<double>(counts_[e])
                                           : std::numeric_limits<double>::quiet_NaN();
        return result_;
    }

private:
    std::array<CompensatedSum, 3> sums_{};
    std::array<std::size_t, 3> counts_{};
    EstimatorMeans result_{};
};

RicianSpec spec_for(double k_linear, const SimulationConfig& config) {
    RicianSpec spec{k_linear, config.total_power, config.seed};
    spec.validate();
    return spec;
}

}  // namespace

EstimatorMeans simulate_k_serial(double k_linear, const SimulationConfig& config, std::uint64_t point_id) {
    config.validate();
    const RicianSpec spec = spec_for(k_linear, config);
    std::vector<Complex> scratch(config.layout.n_eff());
    MeanReducer reducer;
    for (std::size_t r = 0; r < config.reps; ++r) reducer.add(run_repetition(spec, config, point_id, r, scratch));
    return reducer.finish();
}

EstimatorMeans simulate_k(double k_linear, const SimulationConfig& config, std::uint64_t point_id) {
    config.validate();
    const RicianSpec spec = spec_for(k_linear, config);
    const auto reps = static_cast<std::ptrdiff_t>(config.reps);
    std::vector<RepValues> values(config.reps);
#pragma omp parallel
    {
        std::vector<Complex> scratch(config.layout.n_eff());
#pragma omp for schedule(static)
        for (std::ptrdiff_t r = 0; r < reps; ++r)
            values[static_cast<std::size_t>(r)] =
                run_repetition(spec, config, point_id, static_cast<std::uint64_t>(r), scratch);
    }
    // Reduction in repetition order keeps the result independent of scheduling.
    MeanReducer reducer;
    for (const RepValues& v : values) reducer.add(v);
    return reducer.finish();
}

void SweepRange::validate() const {
    if (!std::isfinite(k_min_db) || !std::isfinite(k_max_db)) throw Error("sweep bounds must be finite");
    if (k_min_db > k_max_db) throw Error("k_min_db must be <= k_max_db");
    if (!(k_step_db > 0.0)) throw Error("k_step_db must be > 0");
}

std::vector<double> SweepRange::points_db() const {
    validate();
    const auto n = static_cast<std::size_t>(std::floor((k_max_db - k_min_db) / k_step_db + 1e-9)) + 1;
    std::vector<double> points(n);
    for (std::size_t i = 0; i < n; ++i) points[i] = k_min_db + static_cast<double>(i) * k_step_db;
    return points;
}

std::vector<SweepRow> simulate_sweep(const SweepRange& range, const SimulationConfig& config) {
    const auto points = range.points_db();
    std::vector<SweepRow> rows;
    rows.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        rows.push_back({points[i], simulate_k(from_db(points[i]), config, i)});
    return rows;
}

}  // namespace rcmu
