#pragma once

#include "rcmu/types.hpp"

#include <span>
#include <string>
#include <vector>

namespace rcmu {

/// Sample Pearson correlation. Throws DegenerateError when either input is constant.
double pearson(std::span<const double> x, std::span<const double> y);

/// Magnitude of the complex correlation coefficient |<x - mean, y - mean>| / (|x - mean| |y - mean|).
double complex_correlation(std::span<const Complex> x, std::span<const Complex> y);

enum class CorrelationMode {
    Power,   ///< Pearson on |S21|^2 sequences in acquisition order
    Complex  ///< magnitude of the complex correlation of the raw S21 sequences
};

struct CorrelationReport {
    std::string id_a;
    std::string id_b;
    std::vector<double> per_frequency_rho;
    double max_abs_rho = 0.0;
    double threshold = 0.0;
    bool pass = false;  ///< max_abs_rho < threshold
};

inline constexpr double kDefaultCorrelationThreshold = 0.15;

/// One report per unordered measurement pair (i < j), in (i, j) lexicographic order.
std::vector<CorrelationReport> correlation_matrix(const Campaign& campaign,
                                                  double threshold = kDefaultCorrelationThreshold,
                                                  CorrelationMode mode = CorrelationMode::Power);

bool all_pass(std::span<const CorrelationReport> reports);

enum class AnovaModel { MainEffects, TwoWayInteractions };

/// Regression input: one response per observation plus the placement it came from.
struct AnovaData {
    std::vector<double> y;
    std::vector<std::size_t> group;     ///< index into metas, one per observation
    std::vector<MeasurementMeta> metas;
};

/// Y = frequency-averaged |S21|^2 per stirring state, n_eff observations per measurement.
AnovaData anova_observations(const Campaign& campaign);

struct AnovaTerm {
    std::string name;                 ///< "P", or "P:Z" for an interaction
    std::vector<std::string> levels;  ///< levels present in the data, reference first
    double sum_sq = 0.0;              ///< sequential (Type I) sum of squares
    std::size_t dof = 0;
    double mean_sq = 0.0;
    double f_stat = 0.0;
    double p_value = 1.0;
};

struct Coefficient {
    std::string name;  ///< "(Intercept)", "O[OD]", "P[P2]:Z[ZM]"
    double estimate = 0.0;
    double std_error = 0.0;
};

struct AnovaTable {
    std::vector<AnovaTerm> terms;
    double residual_sum_sq = 0.0;
    std::size_t residual_dof = 0;
    double total_sum_sq = 0.0;
    std::vector<Coefficient> coefficients;  ///< intercept first, then term columns in order
    double intercept = 0.0;
    std::size_t n_obs = 0;

    const AnovaTerm& term(std::string_view name) const;
    const Coefficient& coefficient(std::string_view name) const;
};

struct AnovaOptions {
    AnovaModel model = AnovaModel::MainEffects;
    std::vector<Factor> order{Factor::P, Factor::R, Factor::Z, Factor::O};
};

/// Dummy-coded OLS fit (reference level = first level present) via Householder QR.
/// Throws Error on a factor with fewer than 2 levels or a rank-deficient design.
AnovaTable anova_fit(const AnovaData& data, const AnovaOptions& options = {});
AnovaTable anova_fit(const Campaign& campaign, const AnovaOptions& options = {});

}  // namespace rcmu
