#pragma once

#include "rcmu/kfactor.hpp"
#include "rcmu/types.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rcmu {

/// Power transfer function per frequency: mean of |S21|^2 over all stirring states.
std::vector<double> g_ref_per_frequency(const SampleGrid& grid);

/// Per-frequency transfer function averaged over frequency in linear units.
double g_ref_frequency_averaged(const SampleGrid& grid);

struct TransferFunctionStats {
    std::vector<double> g_ref_per_measurement;
    double g_ref_mean = 0.0;
    double sigma_linear = 0.0;  ///< sample standard deviation, T_pre - 1 denominator
    double sigma_db = 0.0;      ///< 10*log10((mean + sigma) / mean)
};

/// Spread of T_pre >= 2 positive transfer-function values.
TransferFunctionStats sigma_gref(std::span<const double> g_refs);

/// Ratio of the 97.5% Student-t quantile at t_pre - 1 dof to the normal one.
double kp_factor(std::size_t t_pre);

/// Conjunction of factor-level conditions, e.g. "Z!=ZH,O=OH". "all" or "" selects everything.
class MeasurementFilter {
public:
    struct Condition {
        Factor factor;
        std::size_t level;
        bool equal;
    };

    MeasurementFilter() = default;
    /// Throws Error on unknown factors or labels.
    static MeasurementFilter parse(std::string_view text);

    bool matches(const MeasurementMeta& meta) const;
    const std::string& label() const noexcept { return label_; }
    std::span<const Condition> conditions() const noexcept { return conditions_; }

private:
    std::vector<Condition> conditions_;
    std::string label_ = "all";
};

/// All 24; each height dropped (16); each P/R/O level alone (12); each height alone (8).
std::vector<MeasurementFilter> standard_subset_scheme();

struct UncertaintyReport {
    std::string subset_label;
    std::size_t t_pre = 0;
    TransferFunctionStats stats;
    double kp = 1.0;
    double u_linear = 0.0;
    double u_db = 0.0;
    std::optional<double> k_factor_avg_db;  ///< empty when the averaged estimate is <= 0
    double k_factor_avg_linear = 0.0;
};

/// Uncertainty of the frequency-averaged transfer function over the selected measurements.
/// Throws Error when fewer than 2 measurements match.
UncertaintyReport uncertainty_report(const Campaign& campaign, const MeasurementFilter& subset,
                                     BiasN bias_n = BiasN::Sp);

/// Same statistic evaluated separately at each frequency (sigma_db per frequency).
std::vector<double> sigma_db_per_frequency(const Campaign& campaign, const MeasurementFilter& subset);

}  // namespace rcmu
