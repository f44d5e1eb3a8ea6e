#pragma once

#include "causal/demo.hpp"
#include "causal/diagnostics.hpp"
#include "causal/identify.hpp"
#include "causal/paths.hpp"
#include "causal/scm.hpp"

#include <json.hpp>

#include <string>

namespace causal {

// Structured documents share field names with the C++ types. Top-level
// documents produced by the CLI carry "format_version".
inline constexpr int kFormatVersion = 1;

nlohmann::json to_json(const CausalQuery& query);
nlohmann::json to_json(const Path& path);
nlohmann::json to_json(const RoleReport& report);
nlohmann::json to_json(const AdjustmentResult& result);
nlohmann::json to_json(const InstrumentCheck& check);
nlohmann::json to_json(const RegressionFit& fit);
nlohmann::json to_json(const DiagnosticsReport& report);
nlohmann::json to_json(const DemoReport& report);

std::string render_text(const RoleReport& report);
std::string render_text(const AdjustmentResult& result, const CausalQuery& query);
std::string render_text(const RegressionFit& fit);
std::string render_text(const DiagnosticsReport& report);
std::string render_text(const DemoReport& report);

std::string format_set(const std::vector<std::string>& names);

}  // namespace causal
