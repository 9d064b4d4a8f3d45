#include "rcmu/types.hpp"

#include "rcmu/error.hpp"

#include <charconv>
#include <cmath>
#include <set>

namespace rcmu {

void FrequencyGrid::validate() const {
    if (count < 1) throw Error("frequency grid: count must be >= 1");
    if (step_hz <= 0) throw Error("frequency grid: step_hz must be > 0");
}

std::int64_t FrequencyGrid::frequency_hz(std::size_t i) const {
    if (i >= count) throw Error("frequency index " + std::to_string(i) + " out of range");
    return start_hz + static_cast<std::int64_t>(i) * step_hz;
}

void StirringLayout::validate() const {
    if (n_tt < 1) throw Error("stirring layout: n_tt must be >= 1");
    if (sp_tt < 2) throw Error("stirring layout: sp_tt must be >= 2");
}

StirringLayout StirringLayout::parse(std::string_view text) {
    const auto x = text.find('x');
    if (x == std::string_view::npos) throw Error("layout must look like NTTxSP, got '" + std::string(text) + "'");
    auto number = [&](std::string_view s) {
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size())
            throw Error("layout must look like NTTxSP, got '" + std::string(text) + "'");
        return v;
    };
    StirringLayout layout{number(text.substr(0, x)), number(text.substr(x + 1))};
    layout.validate();
    return layout;
}

namespace {

constexpr std::array<std::array<std::string_view, 3>, 4> kLevelNames{{
    {"ZL", "ZM", "ZH"},
    {"Rm", "RM", ""},
    {"OH", "OD", ""},
    {"P1", "P2", ""},
}};

}  // namespace

std::string_view factor_name(Factor f) noexcept {
    switch (f) {
        case Factor::Z: return "Z";
        case Factor::R: return "R";
        case Factor::O: return "O";
        case Factor::P: return "P";
    }
    return "?";
}

Factor parse_factor(std::string_view name) {
    for (Factor f : kAllFactors)
        if (factor_name(f) == name) return f;
    throw Error("unknown factor '" + std::string(name) + "' (expected Z, R, O or P)");
}

std::size_t level_count(Factor f) noexcept { return f == Factor::Z ? 3 : 2; }

std::string_view level_name(Factor f, std::size_t level) {
    if (level >= level_count(f)) throw Error("level index out of range for factor " + std::string(factor_name(f)));
    return kLevelNames[static_cast<std::size_t>(f)][level];
}

std::size_t parse_level(Factor f, std::string_view label) {
    for (std::size_t i = 0; i < level_count(f); ++i)
        if (kLevelNames[static_cast<std::size_t>(f)][i] == label) return i;
    throw Error("unknown level '" + std::string(label) + "' for factor " + std::string(factor_name(f)));
}

std::size_t MeasurementMeta::level(Factor f) const noexcept {
    switch (f) {
        case Factor::Z: return static_cast<std::size_t>(z);
        case Factor::R: return static_cast<std::size_t>(r);
        case Factor::O: return static_cast<std::size_t>(o);
        case Factor::P: return static_cast<std::size_t>(p);
    }
    return 0;
}

void MeasurementMeta::set_level(Factor f, std::size_t level) {
    if (level >= level_count(f)) throw Error("level index out of range for factor " + std::string(factor_name(f)));
    switch (f) {
        case Factor::Z: z = static_cast<Height>(level); break;
        case Factor::R: r = static_cast<TablePosition>(level); break;
        case Factor::O: o = static_cast<Orientation>(level); break;
        case Factor::P: p = static_cast<Polarization>(level); break;
    }
}

std::string MeasurementMeta::label_id() const {
    std::string id;
    for (Factor f : kAllFactors) {
        if (!id.empty()) id += '-';
        id += level_name(f, level(f));
    }
    return id;
}

std::vector<MeasurementMeta> full_factorial_design() {
    std::vector<MeasurementMeta> design;
    for (std::size_t z = 0; z < 3; ++z)
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t o = 0; o < 2; ++o)
                for (std::size_t p = 0; p < 2; ++p) {
                    MeasurementMeta m;
                    m.set_level(Factor::Z, z);
                    m.set_level(Factor::R, r);
                    m.set_level(Factor::O, o);
                    m.set_level(Factor::P, p);
                    m.id = m.label_id();
                    design.push_back(std::move(m));
                }
    return design;
}

SampleGrid::SampleGrid(MeasurementMeta meta, FrequencyGrid freqs, StirringLayout layout, std::vector<Complex> s21)
    : meta_(std::move(meta)), freqs_(freqs), layout_(layout), s21_(std::move(s21)) {
    freqs_.validate();
    layout_.validate();
    const std::size_t expected = freqs_.count * layout_.n_eff();
    if (s21_.size() != expected)
        throw Error("grid '" + meta_.id + "': expected " + std::to_string(expected) + " samples, got " +
                    std::to_string(s21_.size()));
    for (std::size_t i = 0; i < s21_.size(); ++i) {
        if (!std::isfinite(s21_[i].real()) || !std::isfinite(s21_[i].imag())) {
            const std::size_t stir = i % layout_.sp_tt;
            const std::size_t tt = (i / layout_.sp_tt) % layout_.n_tt;
            const std::size_t f = i / layout_.n_eff();
            throw Error("grid '" + meta_.id + "': non-finite sample at (freq " + std::to_string(f) + ", tt " +
                        std::to_string(tt) + ", stir " + std::to_string(stir) + ")");
        }
    }
}

FrequencySlice SampleGrid::slice(std::size_t f) const {
    if (f >= freqs_.count) throw Error("frequency index " + std::to_string(f) + " out of range");
    return {std::span<const Complex>(s21_).subspan(f * layout_.n_eff(), layout_.n_eff()), layout_.n_tt,
            layout_.sp_tt};
}

SampleGrid SampleGrid::with_meta(MeasurementMeta meta) const {
    SampleGrid copy = *this;
    copy.meta_ = std::move(meta);
    return copy;
}

Campaign::Campaign(std::vector<SampleGrid> measurements) : measurements_(std::move(measurements)) {
    std::set<std::string> ids;
    for (const auto& g : measurements_) {
        if (g.meta().id.empty()) throw Error("measurement id must be nonempty");
        if (!ids.insert(g.meta().id).second) throw Error("duplicate measurement id '" + g.meta().id + "'");
        if (!(g.freqs() == measurements_.front().freqs()))
            throw Error("measurement '" + g.meta().id + "' has a different frequency grid");
        if (!(g.layout() == measurements_.front().layout()))
            throw Error("measurement '" + g.meta().id + "' has a different stirring layout");
    }
}

const FrequencyGrid& Campaign::freqs() const {
    if (measurements_.empty()) throw Error("campaign must contain at least one measurement");
    return measurements_.front().freqs();
}

const StirringLayout& Campaign::layout() const {
    if (measurements_.empty()) throw Error("campaign must contain at least one measurement");
    return measurements_.front().layout();
}

}  // namespace rcmu
