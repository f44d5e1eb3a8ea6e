#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace causal {

struct DemoRow {
    std::string quantity;
    double expected = 0.0;
    double observed = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct DemoReport {
    std::string case_id;
    std::string summary;
    std::vector<DemoRow> rows;

    bool passed() const;
};

struct DemoOptions {
    std::size_t n = 100000;  // rows for the Monte-Carlo case (fire)
    std::uint64_t seed = 20231;
};

// Scripted bias contrasts on the bundled case studies: flood, bridges,
// quake, fire. Expected values are closed forms in the corpus file's
// coefficients; observed values come from the covariance engine (or from
// simulation for fire, where the interaction term makes it non-Gaussian).
DemoReport bias_demo(std::string_view case_id, const DemoOptions& options = {});

}  // namespace causal
