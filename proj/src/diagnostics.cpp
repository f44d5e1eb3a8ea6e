#include "causal/diagnostics.hpp"

#include "causal/error.hpp"

#include <array>
#include <cmath>
#include <random>

namespace causal {

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "Pass";
        case Verdict::Fail: return "Fail";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

const AssumptionCheck& DiagnosticsReport::check(std::string_view name) const {
    for (const auto& c : checks)
        if (c.name == name) return c;
    throw Error(ErrorCode::InvalidParameter, "no check named '" + std::string(name) + "'");
}

std::optional<double> chi_square_95(std::size_t df) {
    static constexpr std::array<double, 10> table{3.841, 5.991, 7.815, 9.488, 11.070,
                                                  12.592, 14.067, 15.507, 16.919, 18.307};
    if (df < 1 || df > table.size()) return std::nullopt;
    return table[df - 1];
}

double jarque_bera(const Eigen::VectorXd& residuals) {
    const double n = static_cast<double>(residuals.size());
    Eigen::ArrayXd c = residuals.array() - residuals.mean();
    double m2 = c.square().mean();
    if (!(m2 > 0.0)) return 0.0;
    double skew = c.cube().mean() / std::pow(m2, 1.5);
    double kurt = c.square().square().mean() / (m2 * m2);
    return n / 6.0 * (skew * skew + (kurt - 3.0) * (kurt - 3.0) / 4.0);
}

double durbin_watson(const Eigen::VectorXd& residuals) {
    double den = residuals.squaredNorm();
    if (!(den > 0.0)) return 2.0;
    double num = 0.0;
    for (Eigen::Index t = 1; t < residuals.size(); ++t) {
        double d = residuals(t) - residuals(t - 1);
        num += d * d;
    }
    return num / den;
}

namespace {

Eigen::MatrixXd design(const Dataset& data, const std::vector<std::string>& names) {
    Eigen::MatrixXd x(data.rows.rows(), static_cast<Eigen::Index>(names.size()));
    for (std::size_t j = 0; j < names.size(); ++j) x.col(static_cast<Eigen::Index>(j)) = data.column(names[j]);
    return x;
}

Verdict at_most(double statistic, double threshold) { return statistic <= threshold ? Verdict::Pass : Verdict::Fail; }

}  // namespace

std::map<std::string, double> vif(const Dataset& data, const std::vector<std::string>& predictors) {
    if (predictors.size() < 2) throw Error(ErrorCode::InvalidParameter, "VIF needs at least two predictors");
    auto x = design(data, predictors);
    std::map<std::string, double> out;
    for (std::size_t j = 0; j < predictors.size(); ++j) {
        Eigen::MatrixXd others(x.rows(), x.cols() - 1);
        for (Eigen::Index c = 0, k = 0; c < x.cols(); ++c)
            if (c != static_cast<Eigen::Index>(j)) others.col(k++) = x.col(c);
        double r2 = detail::least_squares(others, x.col(static_cast<Eigen::Index>(j))).r_squared;
        if (r2 >= 1.0) throw Error(ErrorCode::RankDeficient, "predictor '" + predictors[j] + "' is a linear combination of the others");
        out[predictors[j]] = 1.0 / (1.0 - r2);
    }
    return out;
}

DiagnosticsReport check_assumptions(const Dataset& data, const RegressionFit& fit, const DiagnosticsOptions& options) {
    const std::size_t n = data.size();
    const std::size_t k = fit.predictors.size();
    if (n < k + 5) throw Error(ErrorCode::TooFewRows, "diagnostics need at least predictors + 5 rows");
    if (static_cast<std::size_t>(fit.residuals.size()) != n) {
        throw Error(ErrorCode::InvalidParameter, "fit residuals do not match the dataset");
    }

    auto x = design(data, fit.predictors);
    Eigen::VectorXd y = data.column(fit.response);
    const Eigen::VectorXd& e = fit.residuals;
    double tss = (y.array() - y.mean()).square().sum();
    double rss = e.squaredNorm();
    // An exact fit leaves only rounding noise in the residuals; its shape says
    // nothing about the model, so residual-based statistics take ideal values.
    bool exact = rss <= 1e-20 * tss || (tss == 0.0 && rss == 0.0);

    DiagnosticsReport report;
    std::vector<std::string> notes;
    if (exact) notes.push_back("residuals are numerically zero; residual-based statistics set to their ideal values");

    // (1) linearity: how much of the leftover variance the squared fitted
    // values explain.
    {
        AssumptionCheck c{"linearity", 0.0, thresholds::kLinearity, std::nullopt, Verdict::Pass};
        if (!exact) {
            Eigen::VectorXd fitted = y - e;
            Eigen::MatrixXd aug(x.rows(), x.cols() + 1);
            aug << x, fitted.array().square().matrix();
            try {
                double r2_aug = detail::least_squares(aug, y).r_squared;
                double r2 = 1.0 - rss / tss;
                c.statistic = std::max(0.0, (r2_aug - r2) / (1.0 - r2));
                c.verdict = at_most(c.statistic, c.threshold);
            } catch (const Error& err) {
                if (err.code() != ErrorCode::RankDeficient) throw;
                c.verdict = Verdict::Inconclusive;
                notes.push_back("linearity: squared fitted values are collinear with the predictors");
            }
        }
        report.checks.push_back(c);
    }

    // (2) normality of residuals.
    {
        double jb = exact ? 0.0 : jarque_bera(e);
        report.checks.push_back({"normality", jb, thresholds::kJarqueBera, std::nullopt, at_most(jb, thresholds::kJarqueBera)});
    }

    // (3) collinearity between predictors.
    {
        double worst = 1.0;
        if (k >= 2) {
            for (const auto& [name, value] : vif(data, fit.predictors)) worst = std::max(worst, value);
        }
        report.checks.push_back({"collinearity", worst, thresholds::kVif, std::nullopt, at_most(worst, thresholds::kVif)});
    }

    // (4) independence of observations, in row order.
    {
        double dw = exact ? 2.0 : durbin_watson(e);
        Verdict v = dw >= thresholds::kDurbinWatsonLow && dw <= thresholds::kDurbinWatsonHigh ? Verdict::Pass : Verdict::Fail;
        if (options.unordered) {
            v = Verdict::Inconclusive;
            notes.push_back("independence: rows flagged as unordered");
        }
        report.checks.push_back({"independence", dw, thresholds::kDurbinWatsonLow, thresholds::kDurbinWatsonHigh, v});
    }

    // (5) homoscedasticity, Breusch-Pagan n * R^2 of e^2 on the predictors.
    {
        auto limit = chi_square_95(k);
        double bp = 0.0;
        if (!exact) {
            Eigen::VectorXd e2 = e.array().square().matrix();
            bp = static_cast<double>(n) * detail::least_squares(x, e2).r_squared;
        }
        AssumptionCheck c{"homoscedasticity", bp, limit.value_or(0.0), std::nullopt, Verdict::Inconclusive};
        if (limit) {
            c.verdict = at_most(bp, *limit);
        } else {
            notes.push_back("homoscedasticity: no tabulated chi-square cutoff above 10 predictors");
        }
        report.checks.push_back(c);
    }

    for (std::size_t i = 0; i < notes.size(); ++i) report.notes += (i ? "; " : "") + notes[i];
    return report;
}

double shear_strength(double rho, double fc, double bw, double d) {
    for (double v : {rho, fc, bw, d}) {
        if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::NonPositiveInput, "shear inputs must be positive");
    }
    return 0.66 * std::cbrt(rho) * std::sqrt(fc) * bw * d;
}

Dataset shear_dataset(std::size_t n, std::uint64_t seed, double noise_sd) {
    if (n < 10) throw Error(ErrorCode::InvalidParameter, "shear dataset needs at least 10 rows");
    if (!(noise_sd >= 0.0)) throw Error(ErrorCode::InvalidParameter, "noise sd must be non-negative");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> rho(0.005, 0.03);
    std::uniform_real_distribution<double> fc(20.0, 60.0);
    std::uniform_real_distribution<double> bw(200.0, 600.0);
    std::uniform_real_distribution<double> d(300.0, 900.0);
    std::normal_distribution<double> noise(0.0, 1.0);

    Dataset data;
    data.columns = {"rho", "fc", "bw", "d", "Vc"};
    data.latent.assign(5, false);
    data.seed = seed;
    data.rows.resize(static_cast<Eigen::Index>(n), 5);
    for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(n); ++r) {
        double row[4] = {rho(rng), fc(rng), bw(rng), d(rng)};
        double eps = noise(rng);
        for (int c = 0; c < 4; ++c) data.rows(r, c) = row[c];
        data.rows(r, 4) = shear_strength(row[0], row[1], row[2], row[3]) + noise_sd * eps;
    }
    return data;
}

}  // namespace causal
