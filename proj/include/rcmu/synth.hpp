#pragma once

#include "rcmu/types.hpp"

#include <array>
#include <cstdint>
#include <span>

namespace rcmu {

/// Rician channel parameters. k_linear = v^2 / (2 sigma^2), total_power = v^2 + 2 sigma^2.
struct RicianSpec {
    double k_linear = 0.0;
    double total_power = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
    double los_power() const noexcept { return total_power * k_linear / (1.0 + k_linear); }
    double scattered_power() const noexcept { return total_power / (1.0 + k_linear); }
};

/// How the LOS phase evolves between turntable positions.
enum class PhaseMode {
    RandomPerGroup,  ///< one uniform draw per (frequency, turntable) group
    Common,          ///< one uniform draw per frequency, shared by every group
};

/// Fills one frequency slice (n_tt * sp_tt samples, [tt][stir] order) from a
/// stream seeded with `stream_seed`. This is the single sampling kernel every
/// generator below goes through.
void draw_rician_slice(const RicianSpec& spec, const StirringLayout& layout, std::uint64_t stream_seed,
                       PhaseMode phase_mode, std::span<Complex> out);

/// Grid of independent frequency slices; slice f uses derive_seed(spec.seed, {f}).
SampleGrid draw_rician_grid(const RicianSpec& spec, const StirringLayout& layout, const FrequencyGrid& freqs,
                            MeasurementMeta meta = {.id = "synthetic"}, PhaseMode phase_mode = PhaseMode::RandomPerGroup);
SampleGrid draw_rician_grid(const RicianSpec& spec, const StirringLayout& layout, std::size_t n_freq,
                            MeasurementMeta meta = {.id = "synthetic"}, PhaseMode phase_mode = PhaseMode::RandomPerGroup);

/// Multiplicative power gain per factor level, indexed [factor][level].
struct FactorEffects {
    std::array<std::array<double, 3>, 4> gain{{{1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}}};

    double& at(Factor f, std::size_t level) { return gain[static_cast<std::size_t>(f)].at(level); }
    double at(Factor f, std::size_t level) const { return gain[static_cast<std::size_t>(f)].at(level); }
    /// Product of the gains of the placement's levels.
    double power_scale(const MeasurementMeta& meta) const;
    void validate() const;
};

/// Full 24-placement factorial campaign. Measurement m draws with sub-seed
/// derive_seed(base.seed, {m}) and total power base.total_power * power_scale.
Campaign synth_campaign(const RicianSpec& base, const StirringLayout& layout, const FrequencyGrid& freqs,
                        const FactorEffects& effects = {});

}  // namespace rcmu
