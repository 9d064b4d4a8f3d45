#include "rcmu/commands.hpp"

#include "rcmu/campaign_io.hpp"
#include "rcmu/error.hpp"
#include "rcmu/numeric.hpp"
#include "rcmu/reports.hpp"

#include <charconv>
#include <fstream>
#include <iostream>

namespace rcmu::commands {

namespace fs = std::filesystem;

namespace {

// Runs `write` against stdout or a freshly opened file.
template <typename Writer>
void emit(const std::string& out, Writer&& write) {
    if (out.empty() || out == "-") {
        write(std::cout);
        std::cout.flush();
        return;
    }
    const fs::path path(out);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream file(path);
    if (!file) throw Error("cannot write '" + out + "'");
    write(file);
    if (!file) throw Error("I/O failure writing '" + out + "'");
}

std::string db_text(double linear) {
    const auto db = to_db(linear);
    return db ? csv_number(*db) + " dB" : "undefined (<=0)";
}

}  // namespace

std::vector<SweepRow> simulate_k(const SimulateKOptions& options, std::ostream& log) {
    const auto rows = simulate_sweep(options.range, options.sim);
    emit(options.out, [&](std::ostream& os) { write_sweep_csv(os, rows); });
    log << "simulate-k: " << rows.size() << " sweep points x " << options.sim.reps << " repetitions\n";
    return rows;
}

FactorEffects parse_gains(const std::vector<std::string>& assignments) {
    FactorEffects effects;
    for (const auto& a : assignments) {
        const auto eq = a.find('=');
        if (eq == std::string::npos) throw Error("gain must look like LEVEL=GAIN, got '" + a + "'");
        const std::string label = a.substr(0, eq);
        const std::string value = a.substr(eq + 1);
        double gain = 0.0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), gain);
        if (ec != std::errc{} || ptr != value.data() + value.size())
            throw Error("gain for '" + label + "' is not a number: '" + value + "'");
        if (!(gain > 0.0)) throw Error("gain for " + label + " must be positive");
        bool found = false;
        for (Factor f : kAllFactors)
            for (std::size_t l = 0; l < level_count(f); ++l)
                if (level_name(f, l) == label) {
                    effects.at(f, l) = gain;
                    found = true;
                }
        if (!found) throw Error("unknown level '" + label + "' in gain assignment");
    }
    return effects;
}

fs::path gen_data(const GenDataOptions& options, std::ostream& log) {
    const RicianSpec base{from_db(options.k_db), options.total_power, options.seed};
    const auto campaign = synth_campaign(base, options.layout, options.freqs, parse_gains(options.gains));
    const auto manifest = save_campaign(campaign, options.out_dir);
    log << "gen-data: wrote " << campaign.size() << " measurements to " << manifest.string() << '\n';
    return manifest;
}

Campaign open_campaign(const fs::path& path) {
    if (fs::is_directory(path)) return load_campaign(path / kManifestName);
    return load_campaign(path);
}

std::array<double, 3> estimate_k(const EstimateKOptions& options, std::ostream& log) {
    const Campaign campaign = open_campaign(options.campaign);
    if (campaign.empty()) throw Error("campaign must contain at least one measurement");
    std::vector<MeasurementKFactors> rows;
    rows.reserve(campaign.size());
    for (const auto& grid : campaign.measurements()) rows.push_back({grid.meta(), estimate_all(grid, options.bias_n)});

    emit(options.out, [&](std::ostream& os) { write_kfactor_csv(os, rows); });
    if (!options.per_frequency_out.empty())
        emit(options.per_frequency_out,
             [&](std::ostream& os) { write_kfactor_per_frequency_csv(os, rows, campaign.freqs()); });

    std::array<double, 3> averages{};
    for (std::size_t e = 0; e < averages.size(); ++e) {
        CompensatedSum acc;
        for (const auto& r : rows) acc.add(r.estimates[e].freq_avg_linear);
        averages[e] = acc.value() / static_cast<double>(rows.size());
        log << "estimate-k: campaign average " << estimator_name(kAllEstimators[e]) << " = " << db_text(averages[e])
            << '\n';
    }
    return averages;
}

std::vector<UncertaintyReport> uncertainty(const UncertaintyOptions& options, std::ostream& log) {
    const Campaign campaign = open_campaign(options.campaign);
    std::vector<MeasurementFilter> filters;
    if (options.subsets.empty())
        filters = standard_subset_scheme();
    else
        for (const auto& s : options.subsets) filters.push_back(MeasurementFilter::parse(s));

    std::vector<UncertaintyReport> reports;
    for (const auto& f : filters) reports.push_back(uncertainty_report(campaign, f, options.bias_n));
    emit(options.out, [&](std::ostream& os) { write_uncertainty_csv(os, reports); });
    log << "uncertainty: " << reports.size() << " subsets\n";
    return reports;
}

bool correlate(const CorrelateOptions& options, std::ostream& log) {
    const Campaign campaign = open_campaign(options.campaign);
    const auto reports = correlation_matrix(campaign, options.threshold, options.mode);
    emit(options.out, [&](std::ostream& os) { write_correlation_csv(os, reports); });
    double worst = 0.0;
    std::size_t failing = 0;
    for (const auto& r : reports) {
        worst = std::max(worst, r.max_abs_rho);
        failing += !r.pass;
    }
    const bool pass = failing == 0;
    log << "correlate: " << reports.size() << " pairs, max |rho| = " << csv_number(worst) << ", threshold "
        << csv_number(options.threshold) << ", " << failing << " failing pairs: " << (pass ? "PASS" : "FAIL") << '\n';
    return pass;
}

AnovaTable anova(const AnovaCommandOptions& options, std::ostream& log) {
    const Campaign campaign = open_campaign(options.campaign);
    AnovaOptions fit_options;
    fit_options.model = options.model;
    const AnovaTable table = anova_fit(campaign, fit_options);
    emit(options.out, [&](std::ostream& os) { write_anova_csv(os, table); });
    log << "anova: " << table.n_obs << " observations, " << table.terms.size() << " terms, residual dof "
        << table.residual_dof << '\n';
    return table;
}

}  // namespace rcmu::commands
