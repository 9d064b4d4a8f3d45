#include "rcmu/error.hpp"
#include "rcmu/inference.hpp"
#include "rcmu/rng.hpp"
#include "rcmu/synth.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace rcmu;

namespace {

double mean_power(std::span<const Complex> s) {
    double acc = 0;
    for (const auto& v : s) acc += std::norm(v);
    return acc / static_cast<double>(s.size());
}

}  // namespace

TEST_CASE("rician spec splits power between LOS and scattered parts") {
    const RicianSpec spec{0.1, 2.0, 0};
    CHECK(spec.los_power() == doctest::Approx(2.0 * 0.1 / 1.1));
    CHECK(spec.scattered_power() == doctest::Approx(2.0 / 1.1));
    CHECK(spec.los_power() + spec.scattered_power() == doctest::Approx(2.0));
    CHECK_THROWS_AS((RicianSpec{-0.1, 1.0, 0}).validate(), Error);
    CHECK_THROWS_AS((RicianSpec{0.1, 0.0, 0}).validate(), Error);
}

TEST_CASE("K=0 is Rayleigh with the requested mean power") {
    // 100 x 25 layout over 40 frequencies = 1e5 samples.
    const auto grid = draw_rician_grid({0.0, 1.0, 11}, StirringLayout{100, 25}, 40);
    CHECK(grid.samples().size() == 100000);
    CHECK(std::fabs(mean_power(grid.samples()) - 1.0) < 0.01);
}

TEST_CASE("moment check holds across K") {
    for (double k : {0.01, 0.1, 1.0, 10.0}) {
        const auto grid = draw_rician_grid({k, 0.5, 5}, StirringLayout{1, 100000}, 1, {.id = "m"}, PhaseMode::Common);
        CHECK(std::fabs(mean_power(grid.samples()) / 0.5 - 1.0) < 0.01);

        Complex mean = 0;
        for (const auto& s : grid.samples()) mean += s;
        mean /= 100000.0;
        const RicianSpec spec{k, 0.5, 5};
        const double se = std::sqrt(spec.scattered_power() / 100000.0);
        CHECK(std::fabs(std::abs(mean) - std::sqrt(spec.los_power())) < 3.0 * se);
    }
}

TEST_CASE("negligible scattered power leaves a constant-magnitude LOS term per group") {
    const RicianSpec spec{1e9, 1.0, 3};
    const double v = std::sqrt(spec.los_power());
    const auto grid = draw_rician_grid(spec, StirringLayout{25, 24}, 2);
    for (std::size_t f = 0; f < 2; ++f)
        for (std::size_t tt = 0; tt < 25; ++tt) {
            const double phase0 = std::arg(grid.at(f, tt, 0));
            for (std::size_t s = 0; s < 24; ++s) {
                const Complex x = grid.at(f, tt, s);
                CHECK(std::fabs(std::abs(x) - v) / v < 1e-4);
                CHECK(std::fabs(std::remainder(std::arg(x) - phase0, 2 * std::numbers::pi)) < 1e-3);
            }
        }
}

TEST_CASE("group phases are uniform across groups") {
    // Chi-square goodness of fit on 10 bins; 1% critical value for 9 dof is 21.666.
    const auto grid = draw_rician_grid({1e9, 1.0, 123}, StirringLayout{100, 3}, 50);
    std::array<double, 10> counts{};
    std::size_t n = 0;
    for (std::size_t f = 0; f < 50; ++f)
        for (std::size_t tt = 0; tt < 100; ++tt) {
            double a = std::arg(grid.at(f, tt, 0));
            if (a < 0) a += 2 * std::numbers::pi;
            counts[std::min<std::size_t>(9, static_cast<std::size_t>(a / (2 * std::numbers::pi) * 10))] += 1;
            ++n;
        }
    double chi2 = 0;
    for (double c : counts) chi2 += (c - n / 10.0) * (c - n / 10.0) / (n / 10.0);
    CHECK(chi2 < 21.666);
}

TEST_CASE("common phase mode shares one phase across turntable groups") {
    const auto grid = draw_rician_grid({1e9, 1.0, 8}, StirringLayout{25, 3}, 3, {.id = "c"}, PhaseMode::Common);
    for (std::size_t f = 0; f < 3; ++f)
        for (std::size_t tt = 1; tt < 25; ++tt)
            CHECK(std::fabs(std::remainder(std::arg(grid.at(f, tt, 0)) - std::arg(grid.at(f, 0, 0)), 2 * std::numbers::pi)) <
                  1e-3);
}

TEST_CASE("seeded determinism") {
    const auto a = draw_rician_grid({0.1, 1.0, 42}, StirringLayout{25, 24}, 3);
    const auto b = draw_rician_grid({0.1, 1.0, 42}, StirringLayout{25, 24}, 3);
    const auto c = draw_rician_grid({0.1, 1.0, 43}, StirringLayout{25, 24}, 3);
    CHECK(std::equal(a.samples().begin(), a.samples().end(), b.samples().begin()));
    CHECK_FALSE(std::equal(a.samples().begin(), a.samples().end(), c.samples().begin()));

    const FrequencyGrid freqs{0, 1, 2};
    const auto ca = synth_campaign({0.1, 1.0, 5}, StirringLayout{5, 4}, freqs);
    const auto cb = synth_campaign({0.1, 1.0, 5}, StirringLayout{5, 4}, freqs);
    for (std::size_t m = 0; m < ca.size(); ++m)
        CHECK(std::equal(ca[m].samples().begin(), ca[m].samples().end(), cb[m].samples().begin()));
}

TEST_CASE("derived substreams look independent") {
    // Power sequences of two independently seeded slices: |rho| < 1.96/sqrt(600) in >= 94% of trials.
    const StirringLayout layout{25, 24};
    const RicianSpec spec{0.1, 1.0, 0};
    std::vector<Complex> a(600), b(600);
    std::vector<double> pa(600), pb(600);
    const int trials = 10000;
    int below = 0;
    for (int t = 0; t < trials; ++t) {
        draw_rician_slice(spec, layout, derive_seed(2024, {static_cast<std::uint64_t>(t), 0}), PhaseMode::RandomPerGroup, a);
        draw_rician_slice(spec, layout, derive_seed(2024, {static_cast<std::uint64_t>(t), 1}), PhaseMode::RandomPerGroup, b);
        for (std::size_t i = 0; i < 600; ++i) {
            pa[i] = std::norm(a[i]);
            pb[i] = std::norm(b[i]);
        }
        below += std::fabs(pearson(pa, pb)) < 1.96 / std::sqrt(600.0);
    }
    CHECK(below >= 0.94 * trials);
}

TEST_CASE("synth_campaign covers the factorial design and applies level gains") {
    FactorEffects effects;
    effects.at(Factor::O, 1) = 1.122;
    const auto campaign = synth_campaign({0.1, 1.0, 77}, StirringLayout{25, 24}, FrequencyGrid{0, 1, 20}, effects);
    REQUIRE(campaign.size() == 24);
    double od = 0, oh = 0;
    for (const auto& g : campaign.measurements()) {
        CHECK(g.meta().id == g.meta().label_id());
        (g.meta().o == Orientation::OD ? od : oh) += mean_power(g.samples());
    }
    // 12 x 12000 samples per side; relative standard error ~0.3%.
    CHECK(od / oh == doctest::Approx(1.122).epsilon(0.015));
}

TEST_CASE("non-positive gains are rejected") {
    FactorEffects effects;
    effects.at(Factor::Z, 2) = 0.0;
    CHECK_THROWS_WITH_AS(synth_campaign({0.1, 1.0, 1}, StirringLayout{5, 4}, FrequencyGrid{0, 1, 1}, effects),
                         "gain for ZH must be positive", Error);
    effects.at(Factor::Z, 2) = -1.0;
    CHECK_THROWS_AS(effects.validate(), Error);
}

TEST_CASE("power scale multiplies the placement's level gains") {
    FactorEffects effects;
    effects.at(Factor::Z, 1) = 2.0;
    effects.at(Factor::P, 1) = 3.0;
    MeasurementMeta m{.id = "x", .z = Height::ZM, .p = Polarization::P2};
    CHECK(effects.power_scale(m) == 6.0);
    m.p = Polarization::P1;
    CHECK(effects.power_scale(m) == 2.0);
}
