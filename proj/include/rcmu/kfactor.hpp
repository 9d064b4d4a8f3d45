#pragma once

#include "rcmu/types.hpp"

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace rcmu {

enum class Estimator { ProposedAvUb, LiteratureTurntable, LiteratureNoTurntable };

inline constexpr std::array<Estimator, 3> kAllEstimators{Estimator::ProposedAvUb, Estimator::LiteratureTurntable,
                                                        Estimator::LiteratureNoTurntable};

std::string_view estimator_name(Estimator e) noexcept;

/// Sample count used in the per-group bias correction of the proposed estimator.
///   Sp   - the group size sp_tt (the count the per-group estimate is built from)
///   Neff - the total count n_tt * sp_tt
enum class BiasN { Sp, Neff };

BiasN parse_bias_n(std::string_view text);

/// Unstirred power |mean|^2 and stirred power Var[re] + Var[im] (unbiased) of one sample set.
struct PowerSplit {
    double unstirred = 0.0;
    double stirred = 0.0;
};

PowerSplit split_power(std::span<const Complex> samples);

/// Unbiased K estimate ((n-2)/(n-1)) * |mean|^2 / (Var[re] + Var[im]) - 1/n.
/// `bias_n` overrides n in the correction (defaults to samples.size()).
/// Requires samples.size() >= 3 unless `allow_small` is set (formula checks only).
/// Throws DegenerateError when the estimated scattered power is zero.
double unbiased_k(std::span<const Complex> samples, std::optional<std::size_t> bias_n = std::nullopt,
                  bool allow_small = false);

/// Mean over turntable groups of the per-group unbiased estimate.
double proposed_k_av_ub(const FrequencySlice& slice, BiasN bias_n = BiasN::Sp);

/// Sum of per-group unstirred powers over sum of per-group stirred powers.
double literature_turntable_k(const FrequencySlice& slice);

/// Unbiased estimate on the flattened slice, ignoring the turntable grouping.
double literature_no_turntable_k(const FrequencySlice& slice);

double estimate_slice(Estimator e, const FrequencySlice& slice, BiasN bias_n = BiasN::Sp);

/// Per-frequency and frequency-averaged result of one estimator on one grid.
/// Degenerate frequencies hold NaN and are excluded from the aggregate.
struct KFactorEstimate {
    Estimator estimator = Estimator::ProposedAvUb;
    std::vector<double> per_frequency_linear;
    std::vector<double> per_frequency_db;  ///< NaN where the linear value is <= 0 or degenerate
    std::vector<std::size_t> degenerate_frequencies;
    double freq_avg_linear = 0.0;
    std::optional<double> freq_avg_db;  ///< empty when freq_avg_linear <= 0
};

/// Runs all three estimators on every frequency. Throws DegenerateError only
/// when every frequency of the grid is degenerate.
std::array<KFactorEstimate, 3> estimate_all(const SampleGrid& grid, BiasN bias_n = BiasN::Sp);

/// Same results as estimate_all, evaluated one frequency at a time in order.
std::array<KFactorEstimate, 3> estimate_all_serial(const SampleGrid& grid, BiasN bias_n = BiasN::Sp);

}  // namespace rcmu
