#pragma once

#include "causal/scm.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace causal {

enum class Verdict { Pass, Fail, Inconclusive };

std::string_view to_string(Verdict v);

struct AssumptionCheck {
    std::string name;
    double statistic = 0.0;
    double threshold = 0.0;
    // Only the independence check has a band; Pass iff threshold <= stat <= upper.
    std::optional<double> threshold_upper;
    Verdict verdict = Verdict::Inconclusive;
};

struct DiagnosticsReport {
    std::vector<AssumptionCheck> checks;  // linearity, normality, collinearity, independence, homoscedasticity
    std::string notes;

    const AssumptionCheck& check(std::string_view name) const;
};

// Fixed classical cutoffs.
namespace thresholds {
inline constexpr double kLinearity = 0.05;  // share of residual variance explained by fitted^2
inline constexpr double kJarqueBera = 5.99;  // chi-square(2), 95%
inline constexpr double kVif = 10.0;
inline constexpr double kDurbinWatsonLow = 1.5;
inline constexpr double kDurbinWatsonHigh = 2.5;
}  // namespace thresholds

// 95th percentile of chi-square for 1..10 degrees of freedom; nullopt above.
std::optional<double> chi_square_95(std::size_t df);

struct DiagnosticsOptions {
    // Rows have no meaningful order; the Durbin-Watson check reports Inconclusive.
    bool unordered = false;
};

DiagnosticsReport check_assumptions(const Dataset& data, const RegressionFit& fit, const DiagnosticsOptions& options = {});

std::map<std::string, double> vif(const Dataset& data, const std::vector<std::string>& predictors);

double jarque_bera(const Eigen::VectorXd& residuals);
double durbin_watson(const Eigen::VectorXd& residuals);

// Concrete shear contribution V_c = 0.66 rho^(1/3) sqrt(fc) bw d in newtons,
// fc in MPa, bw and d in mm.
double shear_strength(double rho, double fc, double bw, double d);

// Columns rho, fc, bw, d, Vc. Inputs are uniform over conventional
// engineering ranges; Vc gets additive Gaussian noise with sd noise_sd.
Dataset shear_dataset(std::size_t n, std::uint64_t seed, double noise_sd);

}  // namespace causal
