#pragma once

#include "rcmu/inference.hpp"
#include "rcmu/kfactor.hpp"
#include "rcmu/montecarlo.hpp"
#include "rcmu/uncertainty.hpp"

#include <array>
#include <ostream>
#include <span>
#include <string>

namespace rcmu {

/// Quotes a CSV field when it holds a comma, quote or newline.
std::string csv_field(const std::string& text);

/// Number with 17 significant digits; "nan" for undefined values.
std::string csv_number(double value);

// k_true_db,proposed_db,lit_tt_db,lit_no_tt_db
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

struct MeasurementKFactors {
    MeasurementMeta meta;
    std::array<KFactorEstimate, 3> estimates;
};

// id,z,r,o,p,proposed_lin,proposed_db,lit_tt_lin,lit_tt_db,lit_no_tt_lin,lit_no_tt_db,degenerate_freqs
void write_kfactor_csv(std::ostream& out, std::span<const MeasurementKFactors> rows);

// id,freq_index,freq_hz,proposed_lin,lit_tt_lin,lit_no_tt_lin
void write_kfactor_per_frequency_csv(std::ostream& out, std::span<const MeasurementKFactors> rows,
                                     const FrequencyGrid& freqs);

// subset_label,t_pre,g_ref_mean_db,sigma_db,kp,u_db,k_avg_db
void write_uncertainty_csv(std::ostream& out, std::span<const UncertaintyReport> rows);

// id_a,id_b,freq_index,rho,pass
void write_correlation_csv(std::ostream& out, std::span<const CorrelationReport> reports);

// term,sum_sq,dof,f,p,coefficient,std_error
void write_anova_csv(std::ostream& out, const AnovaTable& table);

}  // namespace rcmu
