#include "rcmu/synth.hpp"

#include "rcmu/error.hpp"
#include "rcmu/rng.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace rcmu {

void RicianSpec::validate() const {
    if (!(k_linear >= 0.0) || !std::isfinite(k_linear)) throw Error("rician spec: k_linear must be finite and >= 0");
    if (!(total_power > 0.0) || !std::isfinite(total_power)) throw Error("rician spec: total_power must be > 0");
}

void draw_rician_slice(const RicianSpec& spec, const StirringLayout& layout, std::uint64_t stream_seed,
                       PhaseMode phase_mode, std::span<Complex> out) {
    if (out.size() != layout.n_eff()) throw Error("draw_rician_slice: output span has wrong size");
    Xoshiro256 rng(stream_seed);
    const double v = std::sqrt(spec.los_power());
    // Per-quadrature standard deviation: each of re/im carries half the scattered power.
    const double sigma = std::sqrt(spec.scattered_power() / 2.0);

    double common_phase = 0.0;
    if (phase_mode == PhaseMode::Common) common_phase = 2.0 * std::numbers::pi * rng.uniform();

    for (std::size_t tt = 0; tt < layout.n_tt; ++tt) {
        const double phase =
            phase_mode == PhaseMode::Common ? common_phase : 2.0 * std::numbers::pi * rng.uniform();
        const Complex los = std::polar(v, phase);
        Complex* group = out.data() + tt * layout.sp_tt;
        for (std::size_t s = 0; s < layout.sp_tt; ++s) {
            const auto [g_re, g_im] = rng.normal_pair();
            group[s] = los + Complex(sigma * g_re, sigma * g_im);
        }
    }
}

SampleGrid draw_rician_grid(const RicianSpec& spec, const StirringLayout& layout, const FrequencyGrid& freqs,
                            MeasurementMeta meta, PhaseMode phase_mode) {
    spec.validate();
    layout.validate();
    freqs.validate();
    std::vector<Complex> samples(freqs.count * layout.n_eff());
    for (std::size_t f = 0; f < freqs.count; ++f)
        draw_rician_slice(spec, layout, derive_seed(spec.seed, {f}), phase_mode,
                          std::span<Complex>(samples).subspan(f * layout.n_eff(), layout.n_eff()));
    return SampleGrid(std::move(meta), freqs, layout, std::move(samples));
}

SampleGrid draw_rician_grid(const RicianSpec& spec, const StirringLayout& layout, std::size_t n_freq,
                            MeasurementMeta meta, PhaseMode phase_mode) {
    if (n_freq < 1) throw Error("draw_rician_grid: n_freq must be >= 1");
    FrequencyGrid freqs;
    freqs.count = n_freq;
    return draw_rician_grid(spec, layout, freqs, std::move(meta), phase_mode);
}

double FactorEffects::power_scale(const MeasurementMeta& meta) const {
    double scale = 1.0;
    for (Factor f : kAllFactors) scale *= at(f, meta.level(f));
    return scale;
}

void FactorEffects::validate() const {
    for (Factor f : kAllFactors)
        for (std::size_t l = 0; l < level_count(f); ++l)
            if (!(at(f, l) > 0.0) || !std::isfinite(at(f, l)))
                throw Error("gain for " + std::string(level_name(f, l)) + " must be positive");
}

Campaign synth_campaign(const RicianSpec& base, const StirringLayout& layout, const FrequencyGrid& freqs,
                        const FactorEffects& effects) {
    base.validate();
    layout.validate();
    freqs.validate();
    effects.validate();
    const auto design = full_factorial_design();
    std::vector<SampleGrid> grids;
    grids.reserve(design.size());
    for (std::size_t m = 0; m < design.size(); ++m) {
        RicianSpec spec = base;
        spec.total_power = base.total_power * effects.power_scale(design[m]);
        spec.seed = derive_seed(base.seed, {m});
        grids.push_back(draw_rician_grid(spec, layout, freqs, design[m]));
    }
    return Campaign(std::move(grids));
}

}  // namespace rcmu
