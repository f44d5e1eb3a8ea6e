#pragma once

#include "causal/dsl.hpp"
#include "causal/graph.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace causal {

// Linear-Gaussian structural causal model over a Dag:
//
//   v = sum_p coef(p -> v) * p + sum_m mod_coef(m) * moderator(m) * source(m) + e_v,
//   e_v ~ N(0, noise_var(v))
//
// where the moderation sum runs over annotations whose target edge ends in v.
// Parameters left unspecified default to 1.0.
class Scm {
public:
    struct Term {
        std::size_t parent;
        double coef;
    };
    struct Interaction {
        std::size_t moderator;
        std::size_t source;
        double coef;
    };

    Scm(Dag dag,
        const std::map<Edge, double>& coef = {},
        const std::map<std::string, double>& noise_var = {},
        const std::map<Moderation, double>& mod_coef = {});

    static Scm from_document(const DagDocument& doc);

    const Dag& dag() const noexcept { return dag_; }
    double coef(const Edge& e) const;
    double noise_var(std::string_view node) const { return noise_[dag_.index_of(node)]; }
    double mod_coef(const Moderation& m) const;
    bool has_moderation() const noexcept { return !dag_.moderations().empty(); }

    const std::vector<Term>& terms(std::size_t v) const { return terms_.at(v); }
    const std::vector<Interaction>& interactions(std::size_t v) const { return interactions_.at(v); }
    double noise_var(std::size_t v) const { return noise_.at(v); }

    // Evaluation order for sampling: canonical order, with each moderator
    // additionally placed before the child of the edge it moderates.
    const std::vector<std::size_t>& sampling_order() const noexcept { return sampling_order_; }

private:
    Dag dag_;
    std::vector<std::vector<Term>> terms_;
    std::vector<std::vector<Interaction>> interactions_;
    std::vector<double> noise_;
    std::vector<std::size_t> sampling_order_;
};

struct CovMatrix {
    std::vector<std::string> labels;
    Eigen::MatrixXd values;

    std::size_t index(std::string_view label) const;
    double operator()(std::string_view a, std::string_view b) const { return values(index(a), index(b)); }
};

struct Dataset {
    std::vector<std::string> columns;
    std::vector<bool> latent;  // parallel to columns
    Eigen::MatrixXd rows;      // n x columns.size()
    std::uint64_t seed = 0;

    std::size_t size() const { return static_cast<std::size_t>(rows.rows()); }
    std::size_t column_index(std::string_view name) const;
    Eigen::VectorXd column(std::string_view name) const { return rows.col(static_cast<Eigen::Index>(column_index(name))); }
};

struct RegressionFit {
    std::string response;
    std::vector<std::string> predictors;
    double intercept = 0.0;
    std::vector<double> coefficients;
    Eigen::VectorXd residuals;
    double r_squared = 0.0;

    double coefficient(std::string_view predictor) const;
};

// Exact population covariance, accumulated node by node in topological order.
CovMatrix implied_covariance(const Scm& scm);

// Covariance by summing over treks: for every common source s,
// noise_var(s) * (sum of directed-path products s ~> x) * (sum s ~> y).
double path_tracing_covariance(const Scm& scm, std::string_view x, std::string_view y);

// Sum over directed paths x ~> y of the coefficient products.
double total_effect(const Scm& scm, std::string_view x, std::string_view y);

// Fixed values for intervened nodes (do-operator); their noise is not drawn.
using Interventions = std::map<std::string, double>;

Dataset simulate(const Scm& scm, std::size_t n, std::uint64_t seed, const Interventions& interventions = {});

CovMatrix sample_covariance(const Dataset& data);

double partial_correlation(const CovMatrix& cov, std::string_view x, std::string_view y,
                           const std::vector<std::string>& given);

RegressionFit ols(const Dataset& data, std::string_view response, const std::vector<std::string>& predictors);

// Population regression slopes of `response` on `predictors` from a covariance.
std::vector<double> covariance_regression(const CovMatrix& cov, std::string_view response,
                                          const std::vector<std::string>& predictors);

double iv_estimate(const CovMatrix& cov, std::string_view z, std::string_view x, std::string_view y);
double iv_estimate(const Dataset& data, std::string_view z, std::string_view x, std::string_view y);

// CSV with one header line. Latent columns are dropped on export.
void write_csv(std::ostream& out, const Dataset& data);
Dataset read_csv(std::istream& in);

namespace detail {

struct LeastSquares {
    Eigen::VectorXd beta;  // intercept first
    Eigen::VectorXd residuals;
    double r_squared = 0.0;
};

// Least squares with an intercept column. Throws RankDeficient when the
// standardized design has a pivot below 1e-10 of the largest.
LeastSquares least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

}  // namespace detail

}  // namespace causal
