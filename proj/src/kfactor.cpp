#include "rcmu/kfactor.hpp"

#include "rcmu/error.hpp"
#include "rcmu/numeric.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace rcmu {

std::string_view estimator_name(Estimator e) noexcept {
    switch (e) {
        case Estimator::ProposedAvUb: return "proposed";
        case Estimator::LiteratureTurntable: return "lit_tt";
        case Estimator::LiteratureNoTurntable: return "lit_no_tt";
    }
    return "?";
}

BiasN parse_bias_n(std::string_view text) {
    if (text == "sp") return BiasN::Sp;
    if (text == "neff") return BiasN::Neff;
    throw Error("bias-n must be 'sp' or 'neff', got '" + std::string(text) + "'");
}

PowerSplit split_power(std::span<const Complex> samples) {
    const double n = static_cast<double>(samples.size());
    CompensatedSum sum_re, sum_im;
    for (const Complex& s : samples) {
        sum_re.add(s.real());
        sum_im.add(s.imag());
    }
    const Complex mean(sum_re.value() / n, sum_im.value() / n);

    CompensatedSum ss, power;
    for (const Complex& s : samples) {
        ss.add(std::norm(s - mean));
        power.add(std::norm(s));
    }
    PowerSplit split{std::norm(mean), ss.value() / (n - 1.0)};
    // Residuals of identical samples are pure rounding noise.
    const double eps = std::numeric_limits<double>::epsilon();
    if (split.stirred <= 16.0 * eps * eps * power.value() / n) split.stirred = 0.0;
    return split;
}

double unbiased_k(std::span<const Complex> samples, std::optional<std::size_t> bias_n, bool allow_small) {
    const std::size_t count = samples.size();
    if (count < 2 || (!allow_small && count < 3))
        throw Error("unbiased_k needs at least 3 samples, got " + std::to_string(count));
    const PowerSplit split = split_power(samples);
    if (split.stirred == 0.0) throw DegenerateError("degenerate: zero scattered power");
    const double n = static_cast<double>(bias_n.value_or(count));
    const double biased = split.unstirred / split.stirred;
    return (n - 2.0) / (n - 1.0) * biased - 1.0 / n;
}

double proposed_k_av_ub(const FrequencySlice& slice, BiasN bias_n) {
    if (slice.n_tt < 1 || slice.sp_tt < 3) throw Error("proposed estimator needs sp_tt >= 3");
    const std::size_t n = bias_n == BiasN::Sp ? slice.sp_tt : slice.n_tt * slice.sp_tt;
    CompensatedSum acc;
    for (std::size_t tt = 0; tt < slice.n_tt; ++tt) {
        try {
            acc.add(unbiased_k(slice.group(tt), n));
        } catch (const DegenerateError&) {
            throw DegenerateError("degenerate: zero scattered power in turntable group " + std::to_string(tt));
        }
    }
    return acc.value() / static_cast<double>(slice.n_tt);
}

double literature_turntable_k(const FrequencySlice& slice) {
    if (slice.n_tt < 1 || slice.sp_tt < 2) throw Error("turntable estimator needs sp_tt >= 2");
    CompensatedSum unstirred, stirred;
    for (std::size_t tt = 0; tt < slice.n_tt; ++tt) {
        const PowerSplit split = split_power(slice.group(tt));
        unstirred.add(split.unstirred);
        stirred.add(split.stirred);
    }
    if (stirred.value() == 0.0) throw DegenerateError("degenerate: zero scattered power");
    return unstirred.value() / stirred.value();
}

double literature_no_turntable_k(const FrequencySlice& slice) { return unbiased_k(slice.samples); }

double estimate_slice(Estimator e, const FrequencySlice& slice, BiasN bias_n) {
    switch (e) {
        case Estimator::ProposedAvUb: return proposed_k_av_ub(slice, bias_n);
        case Estimator::LiteratureTurntable: return literature_turntable_k(slice);
        case Estimator::LiteratureNoTurntable: return literature_no_turntable_k(slice);
    }
    throw Error("unknown estimator");
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Per-frequency kernel shared by the serial and OpenMP drivers. Never throws
// DegenerateError; degenerate frequencies come back as NaN.
void estimate_frequency(const SampleGrid& grid, std::size_t f, BiasN bias_n, std::array<double, 3>& out) {
    const FrequencySlice slice = grid.slice(f);
    for (std::size_t e = 0; e < kAllEstimators.size(); ++e) {
        try {
            out[e] = estimate_slice(kAllEstimators[e], slice, bias_n);
        } catch (const DegenerateError&) {
            out[e] = kNaN;
        }
    }
}

std::array<KFactorEstimate, 3> aggregate(const SampleGrid& grid, const std::vector<std::array<double, 3>>& values) {
    std::array<KFactorEstimate, 3> result;
    for (std::size_t e = 0; e < kAllEstimators.size(); ++e) {
        KFactorEstimate& est = result[e];
        est.estimator = kAllEstimators[e];
        est.per_frequency_linear.resize(values.size());
        est.per_frequency_db.resize(values.size());
        CompensatedSum acc;
        std::size_t valid = 0;
        for (std::size_t f = 0; f < values.size(); ++f) {
            const double k = values[f][e];
            est.per_frequency_linear[f] = k;
            est.per_frequency_db[f] = to_db_or_nan(k);
            if (std::isnan(k)) {
                est.degenerate_frequencies.push_back(f);
                continue;
            }
            acc.add(k);
            ++valid;
        }
        if (valid == 0)
            throw DegenerateError("degenerate: every frequency of grid '" + grid.meta().id + "' has zero scattered power");
        est.freq_avg_linear = acc.value() / static_cast<double>(valid);
        est.freq_avg_db = to_db(est.freq_avg_linear);
    }
    return result;
}

}  // namespace

std::array<KFactorEstimate, 3> estimate_all_serial(const SampleGrid& grid, BiasN bias_n) {
    if (grid.layout().sp_tt < 3) throw Error("K-factor estimation needs sp_tt >= 3");
    const std::size_t n_freq = grid.freqs().count;
    std::vector<std::array<double, 3>> values(n_freq);
    for (std::size_t f = 0; f < n_freq; ++f) estimate_frequency(grid, f, bias_n, values[f]);
    return aggregate(grid, values);
}

std::array<KFactorEstimate, 3> estimate_all(const SampleGrid& grid, BiasN bias_n) {
    if (grid.layout().sp_tt < 3) throw Error("K-factor estimation needs sp_tt >= 3");
    const auto n_freq = static_cast<std::ptrdiff_t>(grid.freqs().count);
    std::vector<std::array<double, 3>> values(static_cast<std::size_t>(n_freq));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t f = 0; f < n_freq; ++f)
        estimate_frequency(grid, static_cast<std::size_t>(f), bias_n, values[static_cast<std::size_t>(f)]);
    return aggregate(grid, values);
}

}  // namespace rcmu
