#include "rcmu/uncertainty.hpp"

#include "rcmu/error.hpp"
#include "rcmu/numeric.hpp"
#include "rcmu/special.hpp"

#include <cmath>

namespace rcmu {

std::vector<double> g_ref_per_frequency(const SampleGrid& grid) {
    const std::size_t n_freq = grid.freqs().count;
    std::vector<double> out(n_freq);
    for (std::size_t f = 0; f < n_freq; ++f) {
        const auto slice = grid.slice(f);
        CompensatedSum acc;
        for (const Complex& s : slice.samples) acc.add(std::norm(s));
        out[f] = acc.value() / static_cast<double>(slice.samples.size());
    }
    return out;
}

double g_ref_frequency_averaged(const SampleGrid& grid) {
    const auto per_freq = g_ref_per_frequency(grid);
    return compensated_sum(per_freq) / static_cast<double>(per_freq.size());
}

TransferFunctionStats sigma_gref(std::span<const double> g_refs) {
    if (g_refs.size() < 2) throw Error("at least 2 transfer-function measurements are required (T_pre >= 2)");
    for (double g : g_refs)
        if (!(g > 0.0) || !std::isfinite(g)) throw Error("transfer-function values must be positive and finite");
    TransferFunctionStats stats;
    stats.g_ref_per_measurement.assign(g_refs.begin(), g_refs.end());
    const double n = static_cast<double>(g_refs.size());
    stats.g_ref_mean = compensated_sum(g_refs) / n;
    CompensatedSum ss;
    for (double g : g_refs) ss.add((g - stats.g_ref_mean) * (g - stats.g_ref_mean));
    stats.sigma_linear = std::sqrt(ss.value() / (n - 1.0));
    stats.sigma_db = 10.0 * std::log10((stats.g_ref_mean + stats.sigma_linear) / stats.g_ref_mean);
    return stats;
}

double kp_factor(std::size_t t_pre) {
    if (t_pre < 2) throw Error("kp_factor needs t_pre >= 2");
    return t_quantile(0.975, static_cast<double>(t_pre - 1)) / t_quantile(0.975, kInfiniteDof);
}

MeasurementFilter MeasurementFilter::parse(std::string_view text) {
    MeasurementFilter filter;
    auto trimmed = [](std::string_view s) {
        while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
        while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
        return s;
    };
    text = trimmed(text);
    if (text.empty() || text == "all") return filter;
    filter.label_ = std::string(text);
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        const auto term = trimmed(text.substr(start, end - start));
        const bool negated = term.find("!=") != std::string_view::npos;
        const auto op = negated ? term.find("!=") : term.find('=');
        if (op == std::string_view::npos || op == 0)
            throw Error("subset term '" + std::string(term) + "' must look like F=LEVEL or F!=LEVEL");
        const Factor factor = parse_factor(trimmed(term.substr(0, op)));
        const std::size_t level = parse_level(factor, trimmed(term.substr(op + (negated ? 2 : 1))));
        filter.conditions_.push_back({factor, level, !negated});
        start = end + 1;
    }
    return filter;
}

bool MeasurementFilter::matches(const MeasurementMeta& meta) const {
    for (const auto& c : conditions_)
        if ((meta.level(c.factor) == c.level) != c.equal) return false;
    return true;
}

std::vector<MeasurementFilter> standard_subset_scheme() {
    std::vector<MeasurementFilter> scheme{MeasurementFilter{}};
    for (const char* f : {"Z!=ZL", "Z!=ZM", "Z!=ZH", "P=P1", "P=P2", "R=Rm", "R=RM", "O=OH", "O=OD", "Z=ZL", "Z=ZM",
                          "Z=ZH"})
        scheme.push_back(MeasurementFilter::parse(f));
    return scheme;
}

namespace {

std::vector<const SampleGrid*> select(const Campaign& campaign, const MeasurementFilter& subset) {
    std::vector<const SampleGrid*> selected;
    for (const auto& g : campaign.measurements())
        if (subset.matches(g.meta())) selected.push_back(&g);
    if (selected.size() < 2)
        throw Error("subset '" + subset.label() + "' selects " + std::to_string(selected.size()) +
                    " measurement(s); at least 2 are required");
    return selected;
}

}  // namespace

UncertaintyReport uncertainty_report(const Campaign& campaign, const MeasurementFilter& subset, BiasN bias_n) {
    const auto selected = select(campaign, subset);
    const auto n = static_cast<std::ptrdiff_t>(selected.size());
    std::vector<double> g_refs(selected.size());
    std::vector<double> k_avgs(selected.size());
    std::vector<std::string> errors(selected.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        g_refs[idx] = g_ref_frequency_averaged(*selected[idx]);
        try {
            k_avgs[idx] = estimate_all(*selected[idx], bias_n)[0].freq_avg_linear;
        } catch (const Error& e) {
            errors[idx] = e.what();
        }
    }
    for (const auto& e : errors)
        if (!e.empty()) throw DegenerateError(e);

    UncertaintyReport report;
    report.subset_label = subset.label();
    report.t_pre = selected.size();
    report.stats = sigma_gref(g_refs);
    report.kp = kp_factor(report.t_pre);
    report.u_linear = report.stats.sigma_linear * report.kp;
    report.u_db = 10.0 * std::log10((report.stats.g_ref_mean + report.u_linear) / report.stats.g_ref_mean);
    report.k_factor_avg_linear = compensated_sum(k_avgs) / static_cast<double>(k_avgs.size());
    report.k_factor_avg_db = to_db(report.k_factor_avg_linear);
    return report;
}

std::vector<double> sigma_db_per_frequency(const Campaign& campaign, const MeasurementFilter& subset) {
    const auto selected = select(campaign, subset);
    std::vector<std::vector<double>> per_meas;
    per_meas.reserve(selected.size());
    for (const auto* g : selected) per_meas.push_back(g_ref_per_frequency(*g));
    const std::size_t n_freq = campaign.freqs().count;
    std::vector<double> out(n_freq);
    std::vector<double> column(selected.size());
    for (std::size_t f = 0; f < n_freq; ++f) {
        for (std::size_t m = 0; m < selected.size(); ++m) column[m] = per_meas[m][f];
        out[f] = sigma_gref(column).sigma_db;
    }
    return out;
}

}  // namespace rcmu
