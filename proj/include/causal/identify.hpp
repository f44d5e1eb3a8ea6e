#pragma once

#include "causal/dsl.hpp"
#include "causal/graph.hpp"
#include "causal/paths.hpp"

#include <string>
#include <vector>

namespace causal {

struct ColliderEntry {
    std::string node;
    Path path;
};

// Variable roles relative to one exposure/outcome query. Roles are
// query-relative, so a node may sit in several lists at once.
struct RoleReport {
    CausalQuery query;
    std::vector<std::string> mediators;
    std::vector<std::string> confounders;
    // Head-to-head nodes on exposure-outcome paths.
    std::vector<ColliderEntry> colliders;
    // The outcome itself as the common effect of the exposure and a parent
    // that is otherwise independent of the exposure (exposure -> outcome <- w).
    // Conditioning on the outcome, or selecting on it, links the two causes.
    std::vector<ColliderEntry> outcome_colliders;
    std::vector<std::string> instruments;
    std::vector<std::string> moderators;
    std::vector<Moderation> moderations;  // the annotations behind `moderators`
    std::vector<std::string> unclassified;
};

struct AdjustmentResult {
    std::vector<std::vector<std::string>> minimal_sets;  // by size, then lexicographic
    std::vector<std::string> forbidden;                  // latents and descendants of the exposure
};

struct InstrumentCondition {
    std::string name;
    bool passed = false;
    std::string reason;
};

struct InstrumentCheck {
    std::string candidate;
    bool is_instrument = false;
    std::vector<InstrumentCondition> conditions;  // always three
};

RoleReport classify_roles(const Dag& dag, const CausalQuery& query);

// Exposure-outcome paths whose first edge points into the exposure.
std::vector<Path> backdoor_paths(const Dag& dag, const CausalQuery& query);

// True when `set` blocks every backdoor path and holds no forbidden node.
bool satisfies_backdoor(const Dag& dag, const CausalQuery& query, const std::vector<std::string>& set);

AdjustmentResult find_adjustment_sets(const Dag& dag, const CausalQuery& query);

InstrumentCheck check_instrument(const Dag& dag, const std::string& candidate, const CausalQuery& query);

DotHighlights highlights_from(const RoleReport& report);

}  // namespace causal
