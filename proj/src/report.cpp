#include "causal/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace causal {

using nlohmann::json;

namespace {

std::string fixed(double v, int digits = 6) {
    if (std::abs(v) < 0.5 * std::pow(10.0, -digits)) v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string general(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

json collider_list(const std::vector<ColliderEntry>& entries) {
    json out = json::array();
    for (const auto& c : entries) out.push_back({{"node", c.node}, {"path", to_json(c.path)}});
    return out;
}

}  // namespace

std::string format_set(const std::vector<std::string>& names) {
    std::string out = "{";
    for (std::size_t i = 0; i < names.size(); ++i) out += (i ? ", " : "") + names[i];
    return out + "}";
}

json to_json(const CausalQuery& query) {
    return {{"exposure", query.exposure}, {"outcome", query.outcome}, {"conditioned", query.conditioned}};
}

json to_json(const Path& path) {
    json steps = json::array();
    for (const auto& s : path.steps) {
        steps.push_back({{"node", s.node}, {"traversal", s.traversal == Traversal::Forward ? "Forward" : "Backward"}});
    }
    return {{"start", path.start}, {"steps", steps}, {"text", path.to_string()}};
}

json to_json(const RoleReport& report) {
    json mods = json::array();
    for (const auto& m : report.moderations) {
        mods.push_back({{"moderator", m.moderator}, {"target_from", m.target_from}, {"target_to", m.target_to}});
    }
    return {{"query", to_json(report.query)},
            {"mediators", report.mediators},
            {"confounders", report.confounders},
            {"colliders", collider_list(report.colliders)},
            {"outcome_colliders", collider_list(report.outcome_colliders)},
            {"instruments", report.instruments},
            {"moderators", report.moderators},
            {"moderations", mods},
            {"unclassified", report.unclassified}};
}

json to_json(const AdjustmentResult& result) {
    return {{"minimal_sets", result.minimal_sets}, {"forbidden", result.forbidden}};
}

json to_json(const InstrumentCheck& check) {
    json conditions = json::array();
    for (const auto& c : check.conditions) {
        conditions.push_back({{"name", c.name}, {"passed", c.passed}, {"reason", c.reason}});
    }
    return {{"candidate", check.candidate}, {"is_instrument", check.is_instrument}, {"conditions", conditions}};
}

json to_json(const RegressionFit& fit) {
    return {{"response", fit.response},
            {"predictors", fit.predictors},
            {"intercept", fit.intercept},
            {"coefficients", fit.coefficients},
            {"r_squared", fit.r_squared},
            {"n", fit.residuals.size()}};
}

json to_json(const DiagnosticsReport& report) {
    json checks = json::array();
    for (const auto& c : report.checks) {
        json item{{"name", c.name},
                  {"statistic", c.statistic},
                  {"threshold", c.threshold},
                  {"verdict", std::string(to_string(c.verdict))}};
        if (c.threshold_upper) item["threshold_upper"] = *c.threshold_upper;
        checks.push_back(item);
    }
    return {{"checks", checks}, {"notes", report.notes}};
}

json to_json(const DemoReport& report) {
    json rows = json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"quantity", r.quantity},
                        {"expected", r.expected},
                        {"observed", r.observed},
                        {"tolerance", r.tolerance},
                        {"pass", r.pass}});
    }
    return {{"case_id", report.case_id}, {"summary", report.summary}, {"rows", rows}, {"passed", report.passed()}};
}

std::string render_text(const RoleReport& report) {
    std::ostringstream out;
    const auto& q = report.query;
    out << "causal query: effect of " << q.exposure << " on " << q.outcome << "\n";
    auto line = [&](const std::string& label, const std::vector<std::string>& names) {
        out << pad(label + ":", 14) << (names.empty() ? "-" : format_set(names)) << "\n";
    };
    line("confounders", report.confounders);
    line("mediators", report.mediators);
    if (report.colliders.empty() && report.outcome_colliders.empty()) {
        out << pad("colliders:", 14) << "-\n";
    } else {
        out << "colliders:\n";
        for (const auto& c : report.colliders) out << "  " << pad(c.node, 8) << "on " << c.path.to_string() << "\n";
        for (const auto& c : report.outcome_colliders) {
            out << "  " << pad(c.node, 8) << "on " << c.path.to_string() << "  (outcome is a common effect)\n";
        }
    }
    line("instruments", report.instruments);
    if (report.moderations.empty()) {
        out << pad("moderators:", 14) << "-\n";
    } else {
        out << "moderators:\n";
        for (const auto& m : report.moderations) {
            out << "  " << pad(m.moderator, 8) << "on " << m.target_from << " -> " << m.target_to << "\n";
        }
    }
    line("unclassified", report.unclassified);
    return out.str();
}

std::string render_text(const AdjustmentResult& result, const CausalQuery& query) {
    std::ostringstream out;
    out << "adjustment sets for the effect of " << query.exposure << " on " << query.outcome << ":\n";
    if (result.minimal_sets.empty()) {
        out << "  none (no observed set blocks every backdoor path)\n";
    }
    for (const auto& s : result.minimal_sets) out << "  " << format_set(s) << "\n";
    out << pad("forbidden:", 14) << (result.forbidden.empty() ? "-" : format_set(result.forbidden)) << "\n";
    return out.str();
}

std::string render_text(const RegressionFit& fit) {
    std::ostringstream out;
    out << "ols: " << fit.response << " ~ ";
    for (std::size_t i = 0; i < fit.predictors.size(); ++i) out << (i ? " + " : "") << fit.predictors[i];
    out << "   (n = " << fit.residuals.size() << ")\n";
    out << "  " << pad("(intercept)", 14) << general(fit.intercept) << "\n";
    for (std::size_t i = 0; i < fit.predictors.size(); ++i) {
        out << "  " << pad(fit.predictors[i], 14) << general(fit.coefficients[i]) << "\n";
    }
    out << "  " << pad("R^2", 14) << fixed(fit.r_squared) << "\n";
    return out.str();
}

std::string render_text(const DiagnosticsReport& report) {
    std::ostringstream out;
    out << "assumption checks:\n";
    out << "  " << pad("check", 18) << pad("statistic", 14) << pad("threshold", 16) << "verdict\n";
    for (const auto& c : report.checks) {
        std::string limit = c.threshold_upper ? "[" + general(c.threshold) + ", " + general(*c.threshold_upper) + "]"
                                              : "<= " + general(c.threshold);
        out << "  " << pad(c.name, 18) << pad(general(c.statistic), 14) << pad(limit, 16) << to_string(c.verdict)
            << "\n";
    }
    if (!report.notes.empty()) out << "notes: " << report.notes << "\n";
    return out.str();
}

std::string render_text(const DemoReport& report) {
    std::ostringstream out;
    out << "demo " << report.case_id << ": " << report.summary << "\n";
    out << "  " << pad("quantity", 32) << pad("expected", 12) << pad("observed", 12) << pad("tolerance", 11)
        << "status\n";
    for (const auto& r : report.rows) {
        out << "  " << pad(r.quantity, 32) << pad(fixed(r.expected), 12) << pad(fixed(r.observed), 12)
            << pad(general(r.tolerance), 11) << (r.pass ? "ok" : "FAIL") << "\n";
    }
    out << (report.passed() ? "all expectations met\n" : "expectation mismatch\n");
    return out.str();
}

}  // namespace causal
