#pragma once

#include "rcmu/inference.hpp"
#include "rcmu/kfactor.hpp"
#include "rcmu/montecarlo.hpp"
#include "rcmu/synth.hpp"
#include "rcmu/uncertainty.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

// Batch entry points behind the `rcmu` subcommands. An output path of "-"
// (or empty) means stdout; human-readable summaries go to `log`.
namespace rcmu::commands {

struct SimulateKOptions {
    SweepRange range{};
    SimulationConfig sim{};
    std::string out = "-";
};
std::vector<SweepRow> simulate_k(const SimulateKOptions& options, std::ostream& log);

struct GenDataOptions {
    std::uint64_t seed = 1;
    double k_db = -10.0;
    double total_power = 1.0;
    StirringLayout layout{};
    FrequencyGrid freqs{};
    std::vector<std::string> gains;  ///< "LEVEL=GAIN", e.g. "OD=1.122"
    std::filesystem::path out_dir = "campaign";
};
/// Returns the manifest path.
std::filesystem::path gen_data(const GenDataOptions& options, std::ostream& log);

/// Parses "OD=1.122" style gain assignments; unknown labels and non-positive gains throw.
FactorEffects parse_gains(const std::vector<std::string>& assignments);

/// Accepts a manifest file or a directory containing manifest.txt.
Campaign open_campaign(const std::filesystem::path& path);

struct EstimateKOptions {
    std::filesystem::path campaign;
    BiasN bias_n = BiasN::Sp;
    std::string out = "-";
    std::string per_frequency_out;  ///< optional per-frequency table
};
/// Returns the campaign-average (linear) of each estimator's frequency average.
std::array<double, 3> estimate_k(const EstimateKOptions& options, std::ostream& log);

struct UncertaintyOptions {
    std::filesystem::path campaign;
    std::vector<std::string> subsets;  ///< empty: the standard 24/16/12/8 scheme
    BiasN bias_n = BiasN::Sp;
    std::string out = "-";
};
std::vector<UncertaintyReport> uncertainty(const UncertaintyOptions& options, std::ostream& log);

struct CorrelateOptions {
    std::filesystem::path campaign;
    double threshold = kDefaultCorrelationThreshold;
    CorrelationMode mode = CorrelationMode::Power;
    std::string out = "-";
};
/// Returns true when every pair passes at every frequency.
bool correlate(const CorrelateOptions& options, std::ostream& log);

struct AnovaCommandOptions {
    std::filesystem::path campaign;
    AnovaModel model = AnovaModel::MainEffects;
    std::string out = "-";
};
AnovaTable anova(const AnovaCommandOptions& options, std::ostream& log);

}  // namespace rcmu::commands
