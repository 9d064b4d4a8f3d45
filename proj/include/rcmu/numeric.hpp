#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <span>

namespace rcmu {

// Neumaier compensated accumulator. Summation order is the caller's loop order,
// so two callers feeding identical sequences get bit-identical totals.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) noexcept {
    CompensatedSum acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

/// 10*log10(x) for x > 0, empty otherwise.
inline std::optional<double> to_db(double linear) noexcept {
    if (!(linear > 0.0) || !std::isfinite(linear)) return std::nullopt;
    return 10.0 * std::log10(linear);
}

inline double from_db(double db) noexcept { return std::pow(10.0, db / 10.0); }

inline double to_db_or_nan(double linear) noexcept {
    return to_db(linear).value_or(std::numeric_limits<double>::quiet_NaN());
}

}  // namespace rcmu
