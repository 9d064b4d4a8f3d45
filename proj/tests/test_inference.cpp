#include "oracles/oracles.hpp"
#include "rcmu/error.hpp"
#include "rcmu/inference.hpp"
#include "rcmu/synth.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace rcmu;

namespace {

Campaign od_campaign(std::uint64_t seed, double od_gain = 1.122, std::size_t n_freq = 1) {
    FactorEffects effects;
    effects.at(Factor::O, 1) = od_gain;
    return synth_campaign({0.1, 1.0, seed}, StirringLayout{25, 24}, FrequencyGrid{0, 1, n_freq}, effects);
}

// Fraction of oracle campaigns (independent exponential-like power sequences) whose
// 24 measurements all pairwise satisfy |rho| < threshold.
double oracle_gate_rate(std::size_t campaigns, double threshold, std::uint64_t seed) {
    oracle::RicianSource src(seed);
    std::size_t passed = 0;
    for (std::size_t c = 0; c < campaigns; ++c) {
        std::vector<std::vector<double>> p(24, std::vector<double>(600));
        for (auto& seq : p) {
            const auto s = src.slice(0.1, 1.0, 25, 24);
            for (std::size_t i = 0; i < 600; ++i) seq[i] = std::norm(s[i]);
        }
        bool ok = true;
        for (std::size_t a = 0; a < 24 && ok; ++a)
            for (std::size_t b = a + 1; b < 24 && ok; ++b) ok = std::fabs(oracle::naive_pearson(p[a], p[b])) < threshold;
        passed += ok;
    }
    return double(passed) / campaigns;
}

}  // namespace

TEST_CASE("pearson basics") {
    const std::vector<double> x{1, 2, 3, 4, 5};
    const std::vector<double> y{2, 4, 6, 8, 10};
    const std::vector<double> z{5, 4, 3, 2, 1};
    CHECK(pearson(x, y) == 1.0);
    CHECK(pearson(x, z) == -1.0);
    const std::vector<double> c(5, 3.0);
    CHECK_THROWS_WITH_AS(pearson(x, c), "degenerate: constant sequence", DegenerateError);
    CHECK_THROWS_AS(pearson(x, std::vector<double>{1, 2}), Error);
}

TEST_CASE("pearson is affine invariant and matches the naive formula") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n01;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(40), y(40), ax(40);
        for (std::size_t i = 0; i < 40; ++i) {
            x[i] = n01(rng);
            y[i] = 0.5 * x[i] + n01(rng);
            ax[i] = 7.5 * x[i] - 1e3;
        }
        CHECK(pearson(x, y) == doctest::Approx(oracle::naive_pearson(x, y)).epsilon(1e-12));
        CHECK(pearson(ax, y) == doctest::Approx(pearson(x, y)).epsilon(1e-10));
    }
}

TEST_CASE("null correlation of independent exponential sequences") {
    oracle::RicianSource src(61);
    std::vector<double> a(600), b(600);
    int inside = 0;
    const int trials = 4000;
    for (int t = 0; t < trials; ++t) {
        for (std::size_t i = 0; i < 600; ++i) {
            a[i] = src.exponential();
            b[i] = src.exponential();
        }
        inside += std::fabs(pearson(a, b)) < 1.96 / std::sqrt(600.0);
    }
    // Nominal 95%; binomial standard error ~0.35%.
    CHECK(double(inside) / trials == doctest::Approx(0.95).epsilon(0.015));
}

TEST_CASE("complex correlation") {
    const std::vector<Complex> x{{1, 0}, {0, 1}, {-1, 0}, {0, -2}};
    std::vector<Complex> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = Complex(0.3, -2) * x[i] + Complex(4, 4);
    CHECK(complex_correlation(x, y) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("correlation matrix") {
    const auto base = draw_rician_grid({0.1, 1.0, 9}, StirringLayout{5, 6}, 3, {.id = "a"});
    const auto other = draw_rician_grid({0.1, 1.0, 10}, StirringLayout{5, 6}, 3, {.id = "c"});
    const Campaign dup({base, base.with_meta({.id = "b"}), other});
    const auto reports = correlation_matrix(dup);
    REQUIRE(reports.size() == 3);
    CHECK(reports[0].id_a == "a");
    CHECK(reports[0].id_b == "b");
    CHECK(reports[2].id_a == "b");
    CHECK(reports[2].id_b == "c");
    CHECK(reports[0].per_frequency_rho.size() == 3);
    CHECK(reports[0].max_abs_rho == doctest::Approx(1.0));
    CHECK_FALSE(reports[0].pass);
    CHECK_FALSE(all_pass(reports));
    CHECK(correlation_matrix(dup, 0.15, CorrelationMode::Complex)[0].max_abs_rho == doctest::Approx(1.0));
    CHECK(correlation_matrix(dup, 1.01)[0].pass);
}

TEST_CASE("correlation gate pass rate matches the oracle") {
    // With 276 pairs the gate at 0.15 is not a near-certain pass; compare against
    // the independent computation instead of a fixed rate.
    const std::size_t campaigns = 200;
    std::size_t passed = 0;
    for (std::size_t c = 0; c < campaigns; ++c)
        passed += all_pass(correlation_matrix(synth_campaign({0.1, 1.0, 900 + c}, StirringLayout{25, 24}, FrequencyGrid{0, 1, 1})));
    const double ours = double(passed) / campaigns;
    const double ref = oracle_gate_rate(campaigns, 0.15, 4242);
    const double p = 0.5 * (ours + ref);
    MESSAGE("gate pass rate " << ours << " vs oracle " << ref);
    CHECK(std::fabs(ours - ref) < 4.0 * std::sqrt(2.0 * p * (1 - p) / campaigns) + 1e-9);
}

TEST_CASE("ANOVA on a constant response") {
    AnovaData data;
    data.metas = full_factorial_design();
    for (std::size_t g = 0; g < 24; ++g)
        for (int i = 0; i < 3; ++i) {
            data.y.push_back(2.0);
            data.group.push_back(g);
        }
    const auto table = anova_fit(data);
    CHECK(table.intercept == doctest::Approx(2.0));
    for (const auto& t : table.terms) {
        CHECK(t.sum_sq == 0.0);
        CHECK(t.p_value == 1.0);
    }
    CHECK(table.residual_sum_sq == 0.0);
    for (std::size_t i = 1; i < table.coefficients.size(); ++i) CHECK(table.coefficients[i].estimate == 0.0);
}

TEST_CASE("ANOVA table structure and closure") {
    const auto campaign = od_campaign(7, 1.122, 2);
    const auto table = anova_fit(campaign);
    REQUIRE(table.terms.size() == 4);
    CHECK(table.terms[0].name == "P");
    CHECK(table.terms[3].name == "O");
    CHECK(table.term("Z").dof == 2);
    CHECK(table.term("Z").levels == std::vector<std::string>{"ZL", "ZM", "ZH"});
    CHECK(table.n_obs == 24 * 600);
    CHECK(table.residual_dof == 14400 - 1 - 5);
    std::size_t dof = table.residual_dof;
    double ss = table.residual_sum_sq;
    for (const auto& t : table.terms) {
        dof += t.dof;
        ss += t.sum_sq;
        CHECK(t.mean_sq == doctest::Approx(t.sum_sq / t.dof));
        CHECK(t.f_stat == doctest::Approx(t.mean_sq / (table.residual_sum_sq / table.residual_dof)));
    }
    CHECK(dof == table.n_obs - 1);
    CHECK(std::fabs(ss - table.total_sum_sq) <= 1e-8 * table.total_sum_sq);
    CHECK(table.coefficients.front().name == "(Intercept)");
    CHECK(table.coefficient("O[OD]").std_error > 0);
    CHECK_THROWS_AS(table.term("X"), Error);
}

TEST_CASE("ANOVA sums of squares do not depend on measurement or factor order") {
    // Balanced full factorial: the dummy columns of different factors are orthogonal
    // after centring, so sequential sums of squares are order-free.
    const auto campaign = od_campaign(11);
    const auto ref = anova_fit(campaign);
    std::vector<SampleGrid> grids(campaign.measurements().begin(), campaign.measurements().end());
    std::mt19937_64 rng(5);
    std::shuffle(grids.begin(), grids.end(), rng);
    const auto shuffled = anova_fit(Campaign(grids));
    AnovaOptions reordered;
    reordered.order = {Factor::O, Factor::Z, Factor::P, Factor::R};
    const auto other_order = anova_fit(campaign, reordered);
    for (const char* name : {"P", "R", "Z", "O"}) {
        CAPTURE(name);
        CHECK(shuffled.term(name).sum_sq == doctest::Approx(ref.term(name).sum_sq).epsilon(1e-9));
        CHECK(other_order.term(name).sum_sq == doctest::Approx(ref.term(name).sum_sq).epsilon(1e-9));
    }
    CHECK(other_order.terms.front().name == "O");
}

TEST_CASE("ANOVA recovers an injected orientation effect") {
    int recovered = 0, p_null_ok = 0, r_null_ok = 0, o_largest = 0;
    const int seeds = 40;
    for (int s = 0; s < seeds; ++s) {
        const auto table = anova_fit(od_campaign(100 + s));
        const auto& od = table.coefficient("O[OD]");
        recovered += std::fabs(od.estimate - 0.122) < 3.0 * od.std_error;
        p_null_ok += table.term("P").p_value > 0.01;
        r_null_ok += table.term("R").p_value > 0.01;
        double largest = 0;
        for (std::size_t i = 1; i < table.coefficients.size(); ++i)
            largest = std::max(largest, std::fabs(table.coefficients[i].estimate));
        o_largest += std::fabs(od.estimate) == largest;
        CHECK(table.term("O").p_value < 1e-3);
    }
    CHECK(recovered >= 0.9 * seeds);
    CHECK(p_null_ok >= 0.95 * seeds);
    CHECK(r_null_ok >= 0.95 * seeds);
    CHECK(o_largest == seeds);
}

TEST_CASE("ANOVA rejects single-level factors and rank-deficient designs") {
    const auto campaign = od_campaign(3);
    std::vector<SampleGrid> only_oh;
    for (const auto& g : campaign.measurements())
        if (g.meta().o == Orientation::OH) only_oh.push_back(g);
    CHECK_THROWS_WITH_AS(anova_fit(Campaign(only_oh)), doctest::Contains("factor O"), Error);

    AnovaData aliased;
    aliased.metas = {{.id = "a", .z = Height::ZL, .o = Orientation::OH}, {.id = "b", .z = Height::ZM, .o = Orientation::OD}};
    for (std::size_t i = 0; i < 10; ++i) {
        aliased.y.push_back(1.0 + 0.1 * i);
        aliased.group.push_back(i % 2);
    }
    AnovaOptions opts;
    opts.order = {Factor::Z, Factor::O};
    CHECK_THROWS_WITH_AS(anova_fit(aliased, opts), doctest::Contains("rank"), Error);
}

TEST_CASE("ANOVA with two-way interactions") {
    const auto campaign = od_campaign(21);
    AnovaOptions opts;
    opts.model = AnovaModel::TwoWayInteractions;
    const auto table = anova_fit(campaign, opts);
    CHECK(table.terms.size() == 4 + 6);
    CHECK(table.term("P:Z").dof == 2);
    CHECK(table.term("Z:O").dof == 2);
    CHECK(table.term("P:R").dof == 1);
    std::size_t dof = table.residual_dof;
    for (const auto& t : table.terms) dof += t.dof;
    CHECK(dof == table.n_obs - 1);
    const auto main = anova_fit(campaign);
    CHECK(table.term("O").sum_sq == doctest::Approx(main.term("O").sum_sq).epsilon(1e-9));
}
