#include "rcmu/inference.hpp"

#include "rcmu/error.hpp"
#include "rcmu/numeric.hpp"
#include "rcmu/special.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace rcmu {

namespace {

double mean_of(std::span<const double> v) { return compensated_sum(v) / static_cast<double>(v.size()); }

void check_lengths(std::size_t nx, std::size_t ny) {
    if (nx != ny) throw Error("correlation inputs differ in length");
    if (nx < 3) throw Error("correlation needs at least 3 samples");
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
    check_lengths(x.size(), y.size());
    const double mx = mean_of(x);
    const double my = mean_of(y);
    CompensatedSum sxx, syy, sxy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx.add(dx * dx);
        syy.add(dy * dy);
        sxy.add(dx * dy);
    }
    if (sxx.value() <= 0.0 || syy.value() <= 0.0) throw DegenerateError("degenerate: constant sequence");
    return std::clamp(sxy.value() / std::sqrt(sxx.value() * syy.value()), -1.0, 1.0);
}

double complex_correlation(std::span<const Complex> x, std::span<const Complex> y) {
    check_lengths(x.size(), y.size());
    const double n = static_cast<double>(x.size());
    Complex mx, my;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    CompensatedSum sxx, syy, re, im;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Complex dx = x[i] - mx;
        const Complex dy = y[i] - my;
        sxx.add(std::norm(dx));
        syy.add(std::norm(dy));
        const Complex p = dx * std::conj(dy);
        re.add(p.real());
        im.add(p.imag());
    }
    if (sxx.value() <= 0.0 || syy.value() <= 0.0) throw DegenerateError("degenerate: constant sequence");
    return std::min(1.0, std::abs(Complex(re.value(), im.value())) / std::sqrt(sxx.value() * syy.value()));
}

std::vector<CorrelationReport> correlation_matrix(const Campaign& campaign, double threshold, CorrelationMode mode) {
    if (campaign.size() < 2) throw Error("correlation needs at least 2 measurements");
    if (!(threshold > 0.0)) throw Error("correlation threshold must be > 0");
    const std::size_t t_pre = campaign.size();
    const std::size_t n_freq = campaign.freqs().count;
    const std::size_t n_eff = campaign.layout().n_eff();

    // Power sequences, [measurement][frequency * n_eff + sample].
    std::vector<std::vector<double>> power(t_pre);
    if (mode == CorrelationMode::Power)
        for (std::size_t m = 0; m < t_pre; ++m) {
            const auto s = campaign[m].samples();
            power[m].resize(s.size());
            std::transform(s.begin(), s.end(), power[m].begin(), [](const Complex& c) { return std::norm(c); });
        }

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < t_pre; ++a)
        for (std::size_t b = a + 1; b < t_pre; ++b) pairs.emplace_back(a, b);

    std::vector<CorrelationReport> reports(pairs.size());
    std::vector<std::string> errors(pairs.size());
    const auto n_pairs = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < n_pairs; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        const auto [a, b] = pairs[idx];
        CorrelationReport& r = reports[idx];
        r.id_a = campaign[a].meta().id;
        r.id_b = campaign[b].meta().id;
        r.threshold = threshold;
        r.per_frequency_rho.resize(n_freq);
        try {
            for (std::size_t f = 0; f < n_freq; ++f) {
                double rho;
                if (mode == CorrelationMode::Power) {
                    rho = pearson(std::span<const double>(power[a]).subspan(f * n_eff, n_eff),
                                  std::span<const double>(power[b]).subspan(f * n_eff, n_eff));
                } else {
                    rho = complex_correlation(campaign[a].slice(f).samples, campaign[b].slice(f).samples);
                }
                r.per_frequency_rho[f] = rho;
                r.max_abs_rho = std::max(r.max_abs_rho, std::fabs(rho));
            }
        } catch (const Error& e) {
            errors[idx] = r.id_a + " vs " + r.id_b + ": " + e.what();
        }
        r.pass = r.max_abs_rho < threshold;
    }
    for (const auto& e : errors)
        if (!e.empty()) throw DegenerateError(e);
    return reports;
}

bool all_pass(std::span<const CorrelationReport> reports) {
    return std::all_of(reports.begin(), reports.end(), [](const CorrelationReport& r) { return r.pass; });
}

AnovaData anova_observations(const Campaign& campaign) {
    if (campaign.empty()) throw Error("campaign must contain at least one measurement");
    const std::size_t n_eff = campaign.layout().n_eff();
    const std::size_t n_freq = campaign.freqs().count;
    AnovaData data;
    data.y.reserve(campaign.size() * n_eff);
    data.group.reserve(campaign.size() * n_eff);
    for (std::size_t m = 0; m < campaign.size(); ++m) {
        data.metas.push_back(campaign[m].meta());
        const auto samples = campaign[m].samples();
        for (std::size_t i = 0; i < n_eff; ++i) {
            CompensatedSum acc;
            for (std::size_t f = 0; f < n_freq; ++f) acc.add(std::norm(samples[f * n_eff + i]));
            data.y.push_back(acc.value() / static_cast<double>(n_freq));
            data.group.push_back(m);
        }
    }
    return data;
}

const AnovaTerm& AnovaTable::term(std::string_view name) const {
    for (const auto& t : terms)
        if (t.name == name) return t;
    throw Error("no ANOVA term '" + std::string(name) + "'");
}

const Coefficient& AnovaTable::coefficient(std::string_view name) const {
    for (const auto& c : coefficients)
        if (c.name == name) return c;
    throw Error("no coefficient '" + std::string(name) + "'");
}

namespace {

// Dummy columns of one factor: one per non-reference level present in the data.
struct FactorCoding {
    Factor factor;
    std::vector<std::size_t> levels;  // present levels, reference first
};

struct TermColumns {
    std::string name;
    std::vector<std::string> levels;
    std::vector<std::string> column_names;
    std::vector<std::vector<double>> per_group;  // [column][group] dummy value
};

FactorCoding code_factor(Factor f, const AnovaData& data) {
    std::vector<bool> present(level_count(f), false);
    for (const auto& m : data.metas) present[m.level(f)] = true;
    FactorCoding coding{f, {}};
    for (std::size_t l = 0; l < present.size(); ++l)
        if (present[l]) coding.levels.push_back(l);
    if (coding.levels.size() < 2)
        throw Error("factor " + std::string(factor_name(f)) + " has fewer than 2 levels in the data");
    return coding;
}

TermColumns main_effect(const FactorCoding& c, const AnovaData& data) {
    TermColumns t;
    t.name = std::string(factor_name(c.factor));
    for (std::size_t l : c.levels) t.levels.emplace_back(level_name(c.factor, l));
    for (std::size_t j = 1; j < c.levels.size(); ++j) {
        t.column_names.push_back(t.name + "[" + std::string(level_name(c.factor, c.levels[j])) + "]");
        std::vector<double> col(data.metas.size());
        for (std::size_t g = 0; g < data.metas.size(); ++g) col[g] = data.metas[g].level(c.factor) == c.levels[j];
        t.per_group.push_back(std::move(col));
    }
    return t;
}

TermColumns interaction(const TermColumns& a, const TermColumns& b) {
    TermColumns t;
    t.name = a.name + ":" + b.name;
    for (std::size_t i = 0; i < a.per_group.size(); ++i)
        for (std::size_t j = 0; j < b.per_group.size(); ++j) {
            t.column_names.push_back(a.column_names[i] + ":" + b.column_names[j]);
            std::vector<double> col(a.per_group[i].size());
            for (std::size_t g = 0; g < col.size(); ++g) col[g] = a.per_group[i][g] * b.per_group[j][g];
            t.per_group.push_back(std::move(col));
        }
    return t;
}

}  // namespace

AnovaTable anova_fit(const AnovaData& data, const AnovaOptions& options) {
    const std::size_t n = data.y.size();
    if (n != data.group.size()) throw Error("anova: response and group vectors differ in length");
    for (std::size_t g : data.group)
        if (g >= data.metas.size()) throw Error("anova: group index out of range");
    if (options.order.empty()) throw Error("anova: no factors in model");

    std::vector<TermColumns> terms;
    for (Factor f : options.order) terms.push_back(main_effect(code_factor(f, data), data));
    if (options.model == AnovaModel::TwoWayInteractions) {
        const std::size_t n_main = terms.size();
        for (std::size_t i = 0; i < n_main; ++i)
            for (std::size_t j = i + 1; j < n_main; ++j) terms.push_back(interaction(terms[i], terms[j]));
    }

    std::size_t p = 1;
    for (const auto& t : terms) p += t.per_group.size();
    if (n <= p) throw Error("anova: not enough observations for the model (" + std::to_string(n) + " <= " + std::to_string(p) + ")");

    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    x.col(0).setOnes();
    std::vector<std::string> column_names{"(Intercept)"};
    Eigen::Index col = 1;
    for (const auto& t : terms)
        for (std::size_t c = 0; c < t.per_group.size(); ++c, ++col) {
            for (std::size_t i = 0; i < n; ++i) x(static_cast<Eigen::Index>(i), col) = t.per_group[c][data.group[i]];
            column_names.push_back(t.column_names[c]);
        }
    const Eigen::Map<const Eigen::VectorXd> y(data.y.data(), static_cast<Eigen::Index>(n));

    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
    const Eigen::MatrixXd r = qr.matrixQR().topLeftCorner(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p))
                                  .triangularView<Eigen::Upper>();
    const double r_max = r.diagonal().cwiseAbs().maxCoeff();
    for (Eigen::Index j = 0; j < r.rows(); ++j)
        if (std::fabs(r(j, j)) <= 1e-10 * r_max)
            throw Error("anova: rank-deficient design at column '" + column_names[static_cast<std::size_t>(j)] +
                        "' (unbalanced or confounded levels)");

    const Eigen::VectorXd effects = qr.householderQ().adjoint() * y;
    const Eigen::VectorXd beta = r.triangularView<Eigen::Upper>().solve(effects.head(static_cast<Eigen::Index>(p)));
    const Eigen::VectorXd residual = y - x * beta;

    AnovaTable table;
    table.n_obs = n;
    const double y_mean = mean_of(data.y);
    CompensatedSum tss, ysq;
    for (double v : data.y) {
        tss.add((v - y_mean) * (v - y_mean));
        ysq.add(v * v);
    }
    table.total_sum_sq = tss.value();
    table.residual_sum_sq = residual.squaredNorm();
    table.residual_dof = n - p;

    // A response with no variability beyond rounding has nothing to attribute.
    const double eps = std::numeric_limits<double>::epsilon();
    const bool constant = table.total_sum_sq <= 64.0 * eps * eps * ysq.value();
    if (constant) {
        table.total_sum_sq = 0.0;
        table.residual_sum_sq = 0.0;
    }
    const double mse = table.residual_dof ? table.residual_sum_sq / static_cast<double>(table.residual_dof) : 0.0;

    Eigen::Index offset = 1;
    for (const auto& t : terms) {
        const auto width = static_cast<Eigen::Index>(t.per_group.size());
        AnovaTerm term;
        term.name = t.name;
        term.levels = t.levels;
        term.dof = t.per_group.size();
        term.sum_sq = constant ? 0.0 : effects.segment(offset, width).squaredNorm();
        term.mean_sq = term.sum_sq / static_cast<double>(term.dof);
        if (term.sum_sq == 0.0) {
            term.f_stat = 0.0;
            term.p_value = 1.0;
        } else if (mse == 0.0) {
            term.f_stat = std::numeric_limits<double>::infinity();
            term.p_value = 0.0;
        } else {
            term.f_stat = term.mean_sq / mse;
            term.p_value = f_sf(term.f_stat, static_cast<double>(term.dof), static_cast<double>(table.residual_dof));
        }
        table.terms.push_back(std::move(term));
        offset += width;
    }

    const Eigen::MatrixXd r_inv =
        r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(r.rows(), r.cols()));
    for (std::size_t j = 0; j < p; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        Coefficient c;
        c.name = column_names[j];
        c.estimate = constant ? (j == 0 ? y_mean : 0.0) : beta(jj);
        c.std_error = std::sqrt(mse * r_inv.row(jj).squaredNorm());
        table.coefficients.push_back(std::move(c));
    }
    table.intercept = table.coefficients.front().estimate;
    return table;
}

AnovaTable anova_fit(const Campaign& campaign, const AnovaOptions& options) {
    return anova_fit(anova_observations(campaign), options);
}

}  // namespace rcmu
