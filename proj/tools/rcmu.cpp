// rcmu: reverberation-chamber K-factor and measurement-uncertainty toolkit.

#include "rcmu/commands.hpp"
#include "rcmu/error.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

using namespace rcmu;

struct Common {
    std::string layout = "25x24";
    std::string bias_n = "sp";
};

void add_layout(CLI::App* cmd, Common& c) {
    cmd->add_option("--layout", c.layout, "Turntable x stirrer positions, NTTxSP")->capture_default_str();
}

void add_bias(CLI::App* cmd, Common& c) {
    cmd->add_option("--bias-n", c.bias_n, "Bias-correction sample count: sp or neff")
        ->check(CLI::IsMember({"sp", "neff"}))
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reverberation-chamber K-factor estimation and measurement-uncertainty toolkit"};
    app.require_subcommand(1);
    Common common;

    // simulate-k
    commands::SimulateKOptions sim;
    std::string phase = "random";
    auto* simulate = app.add_subcommand("simulate-k", "Monte Carlo comparison of the three K-factor estimators");
    simulate->add_option("--k-min", sim.range.k_min_db, "Lowest true K [dB]")->capture_default_str();
    simulate->add_option("--k-max", sim.range.k_max_db, "Highest true K [dB]")->capture_default_str();
    simulate->add_option("--k-step", sim.range.k_step_db, "Sweep step [dB]")->capture_default_str();
    simulate->add_option("--reps", sim.sim.reps, "Repetitions per sweep point")->capture_default_str();
    simulate->add_option("--seed", sim.sim.seed, "Root seed")->capture_default_str();
    simulate->add_option("--phase", phase, "Turntable LOS phase: random (per group) or common")
        ->check(CLI::IsMember({"random", "common"}))
        ->capture_default_str();
    simulate->add_option("--out", sim.out, "Output CSV ('-' for stdout)")->capture_default_str();
    add_layout(simulate, common);
    add_bias(simulate, common);

    // gen-data
    commands::GenDataOptions gen;
    std::string gen_out = "campaign";
    auto* gen_data = app.add_subcommand("gen-data", "Synthesize a 24-placement factorial campaign");
    gen_data->add_option("--seed", gen.seed, "Root seed")->capture_default_str();
    gen_data->add_option("--k-db", gen.k_db, "True K-factor [dB]")->capture_default_str();
    gen_data->add_option("--total-power", gen.total_power, "Mean |S21|^2 before factor gains")->capture_default_str();
    gen_data->add_option("--freq-start", gen.freqs.start_hz, "First frequency [Hz]")->capture_default_str();
    gen_data->add_option("--freq-step", gen.freqs.step_hz, "Frequency step [Hz]")->capture_default_str();
    gen_data->add_option("--freq-count", gen.freqs.count, "Number of frequency points")->capture_default_str();
    gen_data->add_option("--gain", gen.gains, "Power gain per level, e.g. --gain OD=1.122 (repeatable)");
    gen_data->add_option("--out", gen_out, "Output directory")->capture_default_str();
    add_layout(gen_data, common);

    // estimate-k
    commands::EstimateKOptions est;
    auto* estimate = app.add_subcommand("estimate-k", "Per-measurement frequency-averaged K-factor estimates");
    estimate->add_option("campaign", est.campaign, "Manifest file or campaign directory")->required();
    estimate->add_option("--out", est.out, "Output CSV ('-' for stdout)")->capture_default_str();
    estimate->add_option("--per-frequency", est.per_frequency_out, "Also write per-frequency estimates here");
    add_bias(estimate, common);

    // uncertainty
    commands::UncertaintyOptions unc;
    auto* uncertainty = app.add_subcommand("uncertainty", "Transfer-function uncertainty over measurement subsets");
    uncertainty->add_option("campaign", unc.campaign, "Manifest file or campaign directory")->required();
    uncertainty->add_option("--subset", unc.subsets,
                            "Subset filter such as 'all', 'O=OH' or 'Z!=ZH,P=P1' (repeatable; "
                            "default: the 24/16/12/8 scheme)");
    uncertainty->add_option("--out", unc.out, "Output CSV ('-' for stdout)")->capture_default_str();
    add_bias(uncertainty, common);

    // correlate
    commands::CorrelateOptions cor;
    bool complex_mode = false;
    bool strict = false;
    auto* correlate = app.add_subcommand("correlate", "Pairwise Pearson correlation gate between measurements");
    correlate->add_option("campaign", cor.campaign, "Manifest file or campaign directory")->required();
    correlate->add_option("--threshold", cor.threshold, "Pass threshold on |rho|")->capture_default_str();
    correlate->add_flag("--complex", complex_mode, "Correlate complex S21 instead of |S21|^2");
    correlate->add_flag("--strict", strict, "Exit with status 2 when the gate fails");
    correlate->add_option("--out", cor.out, "Output CSV ('-' for stdout)")->capture_default_str();

    // anova
    commands::AnovaCommandOptions anv;
    std::string model = "main";
    auto* anova = app.add_subcommand("anova", "Factorial ANOVA of the frequency-averaged transfer function");
    anova->add_option("campaign", anv.campaign, "Manifest file or campaign directory")->required();
    anova->add_option("--model", model, "main or interactions")
        ->check(CLI::IsMember({"main", "interactions"}))
        ->capture_default_str();
    anova->add_option("--out", anv.out, "Output CSV ('-' for stdout)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        const BiasN bias_n = parse_bias_n(common.bias_n);
        if (*simulate) {
            sim.sim.layout = StirringLayout::parse(common.layout);
            sim.sim.bias_n = bias_n;
            sim.sim.phase_mode = phase == "common" ? PhaseMode::Common : PhaseMode::RandomPerGroup;
            commands::simulate_k(sim, std::cerr);
        } else if (*gen_data) {
            gen.layout = StirringLayout::parse(common.layout);
            gen.out_dir = gen_out;
            commands::gen_data(gen, std::cerr);
        } else if (*estimate) {
            est.bias_n = bias_n;
            commands::estimate_k(est, std::cerr);
        } else if (*uncertainty) {
            unc.bias_n = bias_n;
            commands::uncertainty(unc, std::cerr);
        } else if (*correlate) {
            cor.mode = complex_mode ? CorrelationMode::Complex : CorrelationMode::Power;
            const bool pass = commands::correlate(cor, std::cerr);
            if (strict && !pass) return 2;
        } else if (*anova) {
            anv.model = model == "interactions" ? AnovaModel::TwoWayInteractions : AnovaModel::MainEffects;
            commands::anova(anv, std::cerr);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
