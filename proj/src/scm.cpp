#include "causal/scm.hpp"

#include "causal/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <random>
#include <set>

namespace causal {

Scm::Scm(Dag dag, const std::map<Edge, double>& coef, const std::map<std::string, double>& noise_var,
         const std::map<Moderation, double>& mod_coef)
    : dag_(std::move(dag)) {
    const std::size_t n = dag_.size();
    terms_.assign(n, {});
    interactions_.assign(n, {});
    noise_.assign(n, 1.0);

    for (const auto& [edge, value] : coef) {
        if (!dag_.has_edge(edge.from, edge.to)) {
            throw Error(ErrorCode::InvalidParameter, "coefficient given for missing edge " + edge.from + " -> " + edge.to);
        }
        if (!std::isfinite(value)) throw Error(ErrorCode::InvalidParameter, "coefficient must be finite");
    }
    for (const auto& [node, value] : noise_var) {
        auto i = dag_.index_of(node);
        if (!(value > 0.0) || !std::isfinite(value)) {
            throw Error(ErrorCode::InvalidParameter, "noise variance of '" + node + "' must be positive");
        }
        noise_[i] = value;
    }
    std::set<Moderation> known(dag_.moderations().begin(), dag_.moderations().end());
    for (const auto& [m, value] : mod_coef) {
        if (!known.count(m)) throw Error(ErrorCode::InvalidParameter, "interaction given for unknown moderation");
        if (!std::isfinite(value)) throw Error(ErrorCode::InvalidParameter, "interaction must be finite");
    }

    for (const auto& e : dag_.edges()) {
        auto it = coef.find(e);
        terms_[dag_.index_of(e.to)].push_back({dag_.index_of(e.from), it == coef.end() ? 1.0 : it->second});
    }

    // Sampling needs each moderator's value before the child it acts on.
    std::vector<std::vector<std::size_t>> succ(n);
    for (std::size_t v = 0; v < n; ++v) succ[v] = dag_.child_indices(v);
    for (const auto& m : dag_.moderations()) {
        auto it = mod_coef.find(m);
        auto child = dag_.index_of(m.target_to);
        auto moderator = dag_.index_of(m.moderator);
        interactions_[child].push_back({moderator, dag_.index_of(m.target_from), it == mod_coef.end() ? 1.0 : it->second});
        succ[moderator].push_back(child);
    }
    std::vector<std::size_t> indegree(n, 0);
    for (const auto& s : succ)
        for (auto w : s) ++indegree[w];
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t v = 0; v < n; ++v)
        if (indegree[v] == 0) ready.push(v);
    while (!ready.empty()) {
        auto v = ready.top();
        ready.pop();
        sampling_order_.push_back(v);
        for (auto w : succ[v])
            if (--indegree[w] == 0) ready.push(w);
    }
    if (sampling_order_.size() != n) {
        throw Error(ErrorCode::InvalidModeration, "a moderator depends on the child of the edge it moderates");
    }
}

Scm Scm::from_document(const DagDocument& doc) {
    return Scm(doc.dag, doc.coefficients, doc.noise, doc.moderation_coefficients);
}

double Scm::coef(const Edge& e) const {
    auto to = dag_.index_of(e.to);
    auto from = dag_.index_of(e.from);
    for (const auto& t : terms_[to])
        if (t.parent == from) return t.coef;
    throw Error(ErrorCode::UnknownNode, "no edge " + e.from + " -> " + e.to);
}

double Scm::mod_coef(const Moderation& m) const {
    auto child = dag_.index_of(m.target_to);
    for (const auto& i : interactions_[child]) {
        if (dag_.name(i.moderator) == m.moderator && dag_.name(i.source) == m.target_from) return i.coef;
    }
    throw Error(ErrorCode::InvalidParameter, "unknown moderation");
}

std::size_t CovMatrix::index(std::string_view label) const {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw Error(ErrorCode::UnknownNode, "unknown variable '" + std::string(label) + "'");
    return static_cast<std::size_t>(it - labels.begin());
}

std::size_t Dataset::column_index(std::string_view name) const {
    auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw Error(ErrorCode::UnknownNode, "unknown column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - columns.begin());
}

double RegressionFit::coefficient(std::string_view predictor) const {
    auto it = std::find(predictors.begin(), predictors.end(), predictor);
    if (it == predictors.end()) throw Error(ErrorCode::UnknownNode, "not a predictor: '" + std::string(predictor) + "'");
    return coefficients[static_cast<std::size_t>(it - predictors.begin())];
}

namespace {

void require_linear(const Scm& scm) {
    if (scm.has_moderation()) {
        throw Error(ErrorCode::ModerationPresent, "interaction terms make the model non-Gaussian; covariance is not closed-form");
    }
}

}  // namespace

CovMatrix implied_covariance(const Scm& scm) {
    require_linear(scm);
    const auto& dag = scm.dag();
    const auto n = static_cast<Eigen::Index>(dag.size());
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
    // Canonical order is topological: every parent of j precedes j.
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto& terms = scm.terms(static_cast<std::size_t>(j));
        for (Eigen::Index i = 0; i < j; ++i) {
            double c = 0.0;
            for (const auto& t : terms) c += t.coef * s(i, static_cast<Eigen::Index>(t.parent));
            s(i, j) = c;
            s(j, i) = c;
        }
        double v = scm.noise_var(static_cast<std::size_t>(j));
        for (const auto& a : terms)
            for (const auto& b : terms)
                v += a.coef * b.coef * s(static_cast<Eigen::Index>(a.parent), static_cast<Eigen::Index>(b.parent));
        s(j, j) = v;
    }
    return {dag.names(), std::move(s)};
}

namespace {

// Sum of coefficient products over every directed path from `source`, indexed
// by path end. The zero-length path contributes 1 at the source.
std::vector<double> directed_path_sums(const Scm& scm, std::size_t source) {
    const auto& dag = scm.dag();
    std::vector<double> sums(dag.size(), 0.0);
    std::function<void(std::size_t, double)> walk = [&](std::size_t v, double product) {
        sums[v] += product;
        for (auto w : dag.child_indices(v)) {
            for (const auto& t : scm.terms(w))
                if (t.parent == v) walk(w, product * t.coef);
        }
    };
    walk(source, 1.0);
    return sums;
}

}  // namespace

double path_tracing_covariance(const Scm& scm, std::string_view x, std::string_view y) {
    require_linear(scm);
    const auto& dag = scm.dag();
    auto xi = dag.index_of(x);
    auto yi = dag.index_of(y);
    double total = 0.0;
    for (std::size_t s = 0; s < dag.size(); ++s) {
        auto sums = directed_path_sums(scm, s);
        total += scm.noise_var(s) * sums[xi] * sums[yi];
    }
    return total;
}

double total_effect(const Scm& scm, std::string_view x, std::string_view y) {
    const auto& dag = scm.dag();
    auto xi = dag.index_of(x);
    auto yi = dag.index_of(y);
    return directed_path_sums(scm, xi)[yi];
}

Dataset simulate(const Scm& scm, std::size_t n, std::uint64_t seed, const Interventions& interventions) {
    if (n < 1) throw Error(ErrorCode::InvalidParameter, "simulate needs at least one row");
    const auto& dag = scm.dag();
    std::vector<std::optional<double>> fixed(dag.size());
    for (const auto& [name, value] : interventions) fixed[dag.index_of(name)] = value;

    Dataset data;
    data.columns = dag.names();
    for (const auto& node : dag.nodes()) data.latent.push_back(node.latent);
    data.seed = seed;
    data.rows.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dag.size()));

    std::vector<double> sd(dag.size());
    for (std::size_t v = 0; v < dag.size(); ++v) sd[v] = std::sqrt(scm.noise_var(v));

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> value(dag.size());
    for (std::size_t r = 0; r < n; ++r) {
        for (auto v : scm.sampling_order()) {
            if (fixed[v]) {
                value[v] = *fixed[v];
                continue;
            }
            double x = 0.0;
            for (const auto& t : scm.terms(v)) x += t.coef * value[t.parent];
            for (const auto& i : scm.interactions(v)) x += i.coef * value[i.moderator] * value[i.source];
            value[v] = x + sd[v] * normal(rng);
        }
        for (std::size_t v = 0; v < dag.size(); ++v) {
            data.rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(v)) = value[v];
        }
    }
    return data;
}

CovMatrix sample_covariance(const Dataset& data) {
    if (data.size() < 2) throw Error(ErrorCode::TooFewRows, "sample covariance needs at least two rows");
    Eigen::MatrixXd centered = data.rows.rowwise() - data.rows.colwise().mean();
    Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(data.size() - 1);
    return {data.columns, std::move(cov)};
}

namespace {

Eigen::MatrixXd block(const CovMatrix& cov, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                cov.values(static_cast<Eigen::Index>(rows[i]), static_cast<Eigen::Index>(cols[j]));
    return out;
}

constexpr double kSingularTolerance = 1e-12;

}  // namespace

double partial_correlation(const CovMatrix& cov, std::string_view x, std::string_view y,
                           const std::vector<std::string>& given) {
    std::vector<std::size_t> pair{cov.index(x), cov.index(y)};
    std::vector<std::size_t> cond;
    for (const auto& g : given) cond.push_back(cov.index(g));

    Eigen::MatrixXd residual = block(cov, pair, pair);
    if (!cond.empty()) {
        Eigen::MatrixXd szz = block(cov, cond, cond);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(szz, Eigen::EigenvaluesOnly);
        if (eig.eigenvalues().minCoeff() <= kSingularTolerance) {
            throw Error(ErrorCode::SingularMatrix, "conditioning set covariance is singular");
        }
        Eigen::MatrixXd sxz = block(cov, pair, cond);
        residual -= sxz * szz.ldlt().solve(sxz.transpose());
    }
    if (residual(0, 0) <= kSingularTolerance || residual(1, 1) <= kSingularTolerance) {
        throw Error(ErrorCode::SingularMatrix, "residual variance vanishes after conditioning");
    }
    double r = residual(0, 1) / std::sqrt(residual(0, 0) * residual(1, 1));
    return std::clamp(r, -1.0, 1.0);
}

namespace detail {

LeastSquares least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    const Eigen::Index n = x.rows();
    const Eigen::Index k = x.cols();
    LeastSquares out;
    const double y_mean = y.mean();
    out.beta = Eigen::VectorXd::Zero(k + 1);

    if (k > 0) {
        Eigen::RowVectorXd mean = x.colwise().mean();
        Eigen::MatrixXd z = x.rowwise() - mean;
        Eigen::RowVectorXd scale = (z.colwise().squaredNorm() / static_cast<double>(n)).cwiseSqrt();
        for (Eigen::Index j = 0; j < k; ++j) {
            if (!(scale(j) > 0.0)) throw Error(ErrorCode::RankDeficient, "predictor column is constant");
            z.col(j) /= scale(j);
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(z);
        qr.setThreshold(1e-10);
        if (qr.rank() < k) throw Error(ErrorCode::RankDeficient, "predictors are collinear");
        Eigen::VectorXd b = qr.solve(Eigen::VectorXd(y.array() - y_mean));
        for (Eigen::Index j = 0; j < k; ++j) out.beta(j + 1) = b(j) / scale(j);
        out.beta(0) = y_mean - mean.dot(out.beta.tail(k));
    } else {
        out.beta(0) = y_mean;
    }

    Eigen::VectorXd fitted = Eigen::VectorXd::Constant(n, out.beta(0));
    if (k > 0) fitted += x * out.beta.tail(k);
    out.residuals = y - fitted;
    double tss = (y.array() - y_mean).square().sum();
    double rss = out.residuals.squaredNorm();
    out.r_squared = tss > 0.0 ? std::clamp(1.0 - rss / tss, 0.0, 1.0) : 1.0;
    return out;
}

}  // namespace detail

RegressionFit ols(const Dataset& data, std::string_view response, const std::vector<std::string>& predictors) {
    if (predictors.empty()) throw Error(ErrorCode::InvalidParameter, "ols needs at least one predictor");
    std::set<std::string> unique(predictors.begin(), predictors.end());
    if (unique.size() != predictors.size()) throw Error(ErrorCode::InvalidParameter, "duplicate predictor");
    if (unique.count(std::string(response))) throw Error(ErrorCode::InvalidParameter, "response listed as predictor");
    if (data.size() <= predictors.size() + 1) {
        throw Error(ErrorCode::TooFewRows, "ols needs more rows than predictors + 1");
    }
    Eigen::MatrixXd x(data.rows.rows(), static_cast<Eigen::Index>(predictors.size()));
    for (std::size_t j = 0; j < predictors.size(); ++j) x.col(static_cast<Eigen::Index>(j)) = data.column(predictors[j]);
    auto ls = detail::least_squares(x, data.column(response));

    RegressionFit fit;
    fit.response = std::string(response);
    fit.predictors = predictors;
    fit.intercept = ls.beta(0);
    for (std::size_t j = 0; j < predictors.size(); ++j) fit.coefficients.push_back(ls.beta(static_cast<Eigen::Index>(j + 1)));
    fit.residuals = std::move(ls.residuals);
    fit.r_squared = ls.r_squared;
    return fit;
}

std::vector<double> covariance_regression(const CovMatrix& cov, std::string_view response,
                                          const std::vector<std::string>& predictors) {
    std::vector<std::size_t> xs;
    for (const auto& p : predictors) xs.push_back(cov.index(p));
    std::vector<std::size_t> ys{cov.index(response)};
    Eigen::MatrixXd sxx = block(cov, xs, xs);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sxx, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() <= 1e-10 * std::max(1.0, eig.eigenvalues().maxCoeff())) {
        throw Error(ErrorCode::RankDeficient, "predictor covariance is singular");
    }
    Eigen::VectorXd b = sxx.ldlt().solve(block(cov, xs, ys));
    return {b.data(), b.data() + b.size()};
}

double iv_estimate(const CovMatrix& cov, std::string_view z, std::string_view x, std::string_view y) {
    double zx = cov(z, x);
    if (std::abs(zx) <= 1e-8) {
        throw Error(ErrorCode::WeakInstrument, "instrument '" + std::string(z) + "' is uncorrelated with the exposure");
    }
    return cov(z, y) / zx;
}

double iv_estimate(const Dataset& data, std::string_view z, std::string_view x, std::string_view y) {
    return iv_estimate(sample_covariance(data), z, x, y);
}

}  // namespace causal
