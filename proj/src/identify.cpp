#include "causal/identify.hpp"

#include "causal/error.hpp"

#include <algorithm>
#include <set>

namespace causal {

namespace {

// Directed reachability from `from` to `to` that never enters `avoid`.
bool reaches_avoiding(const Dag& dag, std::size_t from, std::size_t to, std::size_t avoid) {
    std::vector<bool> seen(dag.size(), false);
    std::vector<std::size_t> todo{from};
    while (!todo.empty()) {
        auto v = todo.back();
        todo.pop_back();
        for (auto w : dag.child_indices(v)) {
            if (w == to) return true;
            if (w == avoid || seen[w]) continue;
            seen[w] = true;
            todo.push_back(w);
        }
    }
    return false;
}

std::vector<bool> forbidden_mask(const Dag& dag, std::size_t exposure) {
    auto mask = dag.descendant_mask(exposure);
    for (std::size_t i = 0; i < dag.size(); ++i)
        if (dag.nodes()[i].latent) mask[i] = true;
    return mask;
}

std::vector<InstrumentCondition> instrument_conditions(const Dag& dag, std::size_t z, std::size_t x, std::size_t y) {
    const auto& zn = dag.name(z);
    const auto& xn = dag.name(x);
    const auto& yn = dag.name(y);
    std::vector<InstrumentCondition> out;

    bool relevant = dag.descendant_mask(z)[x];
    out.push_back({"relevance", relevant,
                   relevant ? zn + " has a directed path to " + xn : zn + " has no directed path to " + xn});

    bool excluded = !reaches_avoiding(dag, z, y, x);
    out.push_back({"exclusion", excluded,
                   excluded ? "every directed path from " + zn + " to " + yn + " passes through " + xn
                            : zn + " reaches " + yn + " without passing through " + xn});

    auto cut = dag.without_edges_out_of(xn);
    auto sep = d_separated(cut, zn, yn, {});
    std::string reason = sep.separated
                             ? zn + " and " + yn + " are d-separated once edges out of " + xn + " are removed"
                             : "open path " + sep.open_paths.front().to_string() + " once edges out of " + xn +
                                   " are removed";
    out.push_back({"independence", sep.separated, reason});
    return out;
}

}  // namespace

RoleReport classify_roles(const Dag& dag, const CausalQuery& query) {
    validate_query(dag, query);
    auto x = dag.index_of(query.exposure);
    auto y = dag.index_of(query.outcome);
    auto desc_x = dag.descendant_mask(x);
    auto anc_y = dag.ancestor_mask(y);

    RoleReport report;
    report.query = query;
    std::set<std::size_t> classified;
    for (std::size_t i = 0; i < dag.size(); ++i) {
        if (i == x || i == y) continue;
        if (desc_x[i] && anc_y[i]) {
            report.mediators.push_back(dag.name(i));
            classified.insert(i);
        }
        if (reaches_avoiding(dag, i, x, y) && reaches_avoiding(dag, i, y, x)) {
            report.confounders.push_back(dag.name(i));
            classified.insert(i);
        }
        auto iv = instrument_conditions(dag, i, x, y);
        if (std::all_of(iv.begin(), iv.end(), [](const auto& c) { return c.passed; })) {
            report.instruments.push_back(dag.name(i));
            classified.insert(i);
        }
    }

    for (auto& p : enumerate_paths(dag, query.exposure, query.outcome)) {
        for (auto& c : classify_path(p).colliders) {
            classified.insert(dag.index_of(c));
            report.colliders.push_back({c, p});
        }
    }

    if (dag.has_edge(query.exposure, query.outcome)) {
        for (auto w : dag.parent_indices(y)) {
            if (w == x) continue;
            if (d_separated(dag, query.exposure, dag.name(w), {}).separated) {
                Path p{query.exposure, {{query.outcome, Traversal::Forward}, {dag.name(w), Traversal::Backward}}};
                report.outcome_colliders.push_back({query.outcome, std::move(p)});
            }
        }
    }

    std::set<std::string> moderators;
    for (const auto& m : dag.moderations()) {
        auto a = dag.index_of(m.target_from);
        auto b = dag.index_of(m.target_to);
        bool on_causal_path = (a == x || desc_x[a]) && (b == y || anc_y[b]);
        if (!on_causal_path) continue;
        report.moderations.push_back(m);
        moderators.insert(m.moderator);
        classified.insert(dag.index_of(m.moderator));
    }
    report.moderators = canonical_sort(dag, {moderators.begin(), moderators.end()});

    for (std::size_t i = 0; i < dag.size(); ++i) {
        if (i != x && i != y && !classified.count(i)) report.unclassified.push_back(dag.name(i));
    }
    return report;
}

std::vector<Path> backdoor_paths(const Dag& dag, const CausalQuery& query) {
    validate_query(dag, query);
    std::vector<Path> out;
    for (auto& p : enumerate_paths(dag, query.exposure, query.outcome)) {
        if (p.steps.front().traversal == Traversal::Backward) out.push_back(std::move(p));
    }
    return out;
}

bool satisfies_backdoor(const Dag& dag, const CausalQuery& query, const std::vector<std::string>& set) {
    CausalQuery q{query.exposure, query.outcome, set};
    validate_query(dag, q);
    auto forbidden = forbidden_mask(dag, dag.index_of(query.exposure));
    for (const auto& s : set)
        if (forbidden[dag.index_of(s)]) return false;
    auto paths = backdoor_paths(dag, {query.exposure, query.outcome, {}});
    return std::all_of(paths.begin(), paths.end(), [&](const Path& p) { return is_blocked(dag, p, set); });
}

namespace {

struct CompiledPath {
    std::vector<std::size_t> inner;      // intermediate nodes
    std::vector<bool> collider;          // parallel to inner
    std::vector<std::vector<bool>> desc; // descendant masks for colliders
};

bool blocked(const CompiledPath& p, const std::vector<bool>& z) {
    for (std::size_t k = 0; k < p.inner.size(); ++k) {
        auto v = p.inner[k];
        if (!p.collider[k]) {
            if (z[v]) return true;
            continue;
        }
        if (z[v]) continue;
        bool opened = false;
        for (std::size_t i = 0; i < z.size() && !opened; ++i) opened = z[i] && p.desc[k][i];
        if (!opened) return true;
    }
    return false;
}

}  // namespace

AdjustmentResult find_adjustment_sets(const Dag& dag, const CausalQuery& query) {
    validate_query(dag, query);
    if (dag.size() > kMaxAnalysisNodes) {
        throw Error(ErrorCode::SizeLimit, "adjustment search is capped at " + std::to_string(kMaxAnalysisNodes) + " nodes");
    }
    auto x = dag.index_of(query.exposure);
    auto y = dag.index_of(query.outcome);
    auto forbidden = forbidden_mask(dag, x);

    AdjustmentResult result;
    for (std::size_t i = 0; i < dag.size(); ++i)
        if (forbidden[i]) result.forbidden.push_back(dag.name(i));

    std::vector<CompiledPath> paths;
    for (const auto& p : backdoor_paths(dag, query)) {
        CompiledPath c;
        for (std::size_t k = 0; k + 1 < p.steps.size(); ++k) {
            auto v = dag.index_of(p.steps[k].node);
            bool head_to_head =
                p.steps[k].traversal == Traversal::Forward && p.steps[k + 1].traversal == Traversal::Backward;
            c.inner.push_back(v);
            c.collider.push_back(head_to_head);
            c.desc.push_back(head_to_head ? dag.descendant_mask(v) : std::vector<bool>{});
        }
        paths.push_back(std::move(c));
    }

    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < dag.size(); ++i)
        if (i != x && i != y && !forbidden[i]) candidates.push_back(i);

    // Subsets in increasing size; anything containing an accepted set is not
    // minimal, everything smaller has already been tried.
    std::vector<std::vector<std::size_t>> found;
    const std::size_t m = candidates.size();
    for (std::size_t k = 0; k <= m; ++k) {
        std::vector<bool> pick(m, false);
        std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
        do {
            std::vector<std::size_t> subset;
            std::vector<bool> z(dag.size(), false);
            for (std::size_t i = 0; i < m; ++i) {
                if (pick[i]) {
                    subset.push_back(candidates[i]);
                    z[candidates[i]] = true;
                }
            }
            bool superset = std::any_of(found.begin(), found.end(), [&](const auto& f) {
                return std::all_of(f.begin(), f.end(), [&](auto v) { return z[v]; });
            });
            if (superset) continue;
            if (std::all_of(paths.begin(), paths.end(), [&](const auto& p) { return blocked(p, z); })) {
                found.push_back(subset);
            }
        } while (std::prev_permutation(pick.begin(), pick.end()));
    }

    for (const auto& f : found) {
        std::vector<std::string> names;
        for (auto v : f) names.push_back(dag.name(v));
        std::sort(names.begin(), names.end());
        result.minimal_sets.push_back(std::move(names));
    }
    std::sort(result.minimal_sets.begin(), result.minimal_sets.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return result;
}

InstrumentCheck check_instrument(const Dag& dag, const std::string& candidate, const CausalQuery& query) {
    validate_query(dag, query);
    auto z = dag.index_of(candidate);
    if (candidate == query.exposure || candidate == query.outcome) {
        throw Error(ErrorCode::SameNode, "instrument candidate '" + candidate + "' is a query endpoint");
    }
    InstrumentCheck out;
    out.candidate = candidate;
    out.conditions = instrument_conditions(dag, z, dag.index_of(query.exposure), dag.index_of(query.outcome));
    out.is_instrument = std::all_of(out.conditions.begin(), out.conditions.end(), [](const auto& c) { return c.passed; });
    return out;
}

DotHighlights highlights_from(const RoleReport& report) {
    DotHighlights h;
    h.exposure = report.query.exposure;
    h.outcome = report.query.outcome;
    h.confounders.insert(report.confounders.begin(), report.confounders.end());
    h.mediators.insert(report.mediators.begin(), report.mediators.end());
    h.instruments.insert(report.instruments.begin(), report.instruments.end());
    for (const auto& c : report.colliders) h.colliders.insert(c.node);
    return h;
}

}  // namespace causal
