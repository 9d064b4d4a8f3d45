#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rcmu {

using Complex = std::complex<double>;

/// Uniform frequency sweep with integer-hertz start and step.
struct FrequencyGrid {
    std::int64_t start_hz = 24'250'000'000;
    std::int64_t step_hz = 10'000'000;
    std::size_t count = 526;

    /// Throws Error when count == 0 or step_hz <= 0.
    void validate() const;
    std::int64_t frequency_hz(std::size_t index) const;

    static FrequencyGrid fr2_lower_band() { return {}; }

    friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;
};

/// Turntable positions and linear-stirrer positions per turntable position.
struct StirringLayout {
    std::size_t n_tt = 25;
    std::size_t sp_tt = 24;

    void validate() const;
    std::size_t n_eff() const noexcept { return n_tt * sp_tt; }

    /// Parses "25x24" (turntable x stirrer).
    static StirringLayout parse(std::string_view text);

    friend bool operator==(const StirringLayout&, const StirringLayout&) = default;
};

// Positioning factors of a precharacterization placement. Level 0 of each is
// the reference level in the regression.
enum class Factor : std::uint8_t { Z, R, O, P };
enum class Height : std::uint8_t { ZL, ZM, ZH };
enum class TablePosition : std::uint8_t { Rm, RM };
enum class Orientation : std::uint8_t { OH, OD };
enum class Polarization : std::uint8_t { P1, P2 };

inline constexpr std::array<Factor, 4> kAllFactors{Factor::Z, Factor::R, Factor::O, Factor::P};

std::string_view factor_name(Factor f) noexcept;
Factor parse_factor(std::string_view name);
std::size_t level_count(Factor f) noexcept;
std::string_view level_name(Factor f, std::size_t level);
/// Case-sensitive; throws Error on a label outside the factor's levels.
std::size_t parse_level(Factor f, std::string_view label);

struct MeasurementMeta {
    std::string id;
    Height z = Height::ZL;
    TablePosition r = TablePosition::Rm;
    Orientation o = Orientation::OH;
    Polarization p = Polarization::P1;

    std::size_t level(Factor f) const noexcept;
    void set_level(Factor f, std::size_t level);

    /// Canonical id built from the labels, e.g. "ZL-Rm-OH-P1".
    std::string label_id() const;

    friend bool operator==(const MeasurementMeta&, const MeasurementMeta&) = default;
};

/// All 3x2x2x2 placements in Z, R, O, P nesting order (P fastest).
std::vector<MeasurementMeta> full_factorial_design();

/// One frequency of a grid: n_tt groups of sp_tt contiguous samples.
struct FrequencySlice {
    std::span<const Complex> samples;
    std::size_t n_tt = 0;
    std::size_t sp_tt = 0;

    std::span<const Complex> group(std::size_t tt) const { return samples.subspan(tt * sp_tt, sp_tt); }
};

/// Complex S21 samples indexed [frequency][turntable][stirrer], 0-based, row-major.
class SampleGrid {
public:
    SampleGrid(MeasurementMeta meta, FrequencyGrid freqs, StirringLayout layout, std::vector<Complex> s21);

    const MeasurementMeta& meta() const noexcept { return meta_; }
    const FrequencyGrid& freqs() const noexcept { return freqs_; }
    const StirringLayout& layout() const noexcept { return layout_; }
    std::span<const Complex> samples() const noexcept { return s21_; }

    std::size_t index(std::size_t f, std::size_t tt, std::size_t stir) const noexcept {
        return (f * layout_.n_tt + tt) * layout_.sp_tt + stir;
    }
    const Complex& at(std::size_t f, std::size_t tt, std::size_t stir) const { return s21_.at(index(f, tt, stir)); }
    FrequencySlice slice(std::size_t f) const;

    SampleGrid with_meta(MeasurementMeta meta) const;

private:
    MeasurementMeta meta_;
    FrequencyGrid freqs_;
    StirringLayout layout_;
    std::vector<Complex> s21_;
};

/// Ordered set of grids sharing one frequency grid and stirring layout.
class Campaign {
public:
    explicit Campaign(std::vector<SampleGrid> measurements);

    std::span<const SampleGrid> measurements() const noexcept { return measurements_; }
    std::size_t size() const noexcept { return measurements_.size(); }
    const SampleGrid& operator[](std::size_t i) const { return measurements_.at(i); }
    bool empty() const noexcept { return measurements_.empty(); }
    /// Throws Error on an empty campaign.
    const FrequencyGrid& freqs() const;
    const StirringLayout& layout() const;

private:
    std::vector<SampleGrid> measurements_;
};

}  // namespace rcmu
