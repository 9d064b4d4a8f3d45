#include "rcmu/reports.hpp"

#include "rcmu/campaign_io.hpp"
#include "rcmu/numeric.hpp"

#include <cmath>

namespace rcmu {

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string quoted = "\"";
    for (char c : text) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + '"';
}

std::string csv_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    return format_double(value);
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
    out << "k_true_db,proposed_db,lit_tt_db,lit_no_tt_db\n";
    for (const auto& row : rows) {
        out << csv_number(row.k_true_db);
        for (Estimator e : kAllEstimators) out << ',' << csv_number(row.means.mean_db(e));
        out << '\n';
    }
}

void write_kfactor_csv(std::ostream& out, std::span<const MeasurementKFactors> rows) {
    out << "id,z,r,o,p,proposed_lin,proposed_db,lit_tt_lin,lit_tt_db,lit_no_tt_lin,lit_no_tt_db,degenerate_freqs\n";
    for (const auto& row : rows) {
        out << csv_field(row.meta.id);
        for (Factor f : kAllFactors) out << ',' << level_name(f, row.meta.level(f));
        std::size_t degenerate = 0;
        for (const auto& est : row.estimates) {
            out << ',' << csv_number(est.freq_avg_linear) << ',' << csv_number(est.freq_avg_db.value_or(NAN));
            degenerate = std::max(degenerate, est.degenerate_frequencies.size());
        }
        out << ',' << degenerate << '\n';
    }
}

void write_kfactor_per_frequency_csv(std::ostream& out, std::span<const MeasurementKFactors> rows,
                                     const FrequencyGrid& freqs) {
    out << "id,freq_index,freq_hz,proposed_lin,lit_tt_lin,lit_no_tt_lin\n";
    for (const auto& row : rows)
        for (std::size_t f = 0; f < freqs.count; ++f) {
            out << csv_field(row.meta.id) << ',' << f << ',' << freqs.frequency_hz(f);
            for (const auto& est : row.estimates) out << ',' << csv_number(est.per_frequency_linear[f]);
            out << '\n';
        }
}

void write_uncertainty_csv(std::ostream& out, std::span<const UncertaintyReport> rows) {
    out << "subset_label,t_pre,g_ref_mean_db,sigma_db,kp,u_db,k_avg_db\n";
    for (const auto& r : rows)
        out << csv_field(r.subset_label) << ',' << r.t_pre << ',' << csv_number(to_db_or_nan(r.stats.g_ref_mean)) << ','
            << csv_number(r.stats.sigma_db) << ',' << csv_number(r.kp) << ',' << csv_number(r.u_db) << ','
            << csv_number(r.k_factor_avg_db.value_or(NAN)) << '\n';
}

void write_correlation_csv(std::ostream& out, std::span<const CorrelationReport> reports) {
    out << "id_a,id_b,freq_index,rho,pass\n";
    for (const auto& r : reports)
        for (std::size_t f = 0; f < r.per_frequency_rho.size(); ++f) {
            const double rho = r.per_frequency_rho[f];
            out << csv_field(r.id_a) << ',' << csv_field(r.id_b) << ',' << f << ',' << csv_number(rho) << ','
                << (std::fabs(rho) < r.threshold ? "true" : "false") << '\n';
        }
}

void write_anova_csv(std::ostream& out, const AnovaTable& table) {
    out << "term,sum_sq,dof,f,p,coefficient,std_error\n";
    for (const auto& t : table.terms)
        out << csv_field(t.name) << ',' << csv_number(t.sum_sq) << ',' << t.dof << ',' << csv_number(t.f_stat) << ','
            << csv_number(t.p_value) << ",,\n";
    out << "Residual," << csv_number(table.residual_sum_sq) << ',' << table.residual_dof << ",,,,\n";
    for (const auto& c : table.coefficients)
        out << csv_field(c.name) << ",,,,," << csv_number(c.estimate) << ',' << csv_number(c.std_error) << '\n';
}

}  // namespace rcmu
