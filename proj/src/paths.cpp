#include "causal/paths.hpp"

#include "causal/error.hpp"

#include <algorithm>
#include <functional>

namespace causal {

std::vector<std::string> Path::nodes() const {
    std::vector<std::string> out{start};
    for (const auto& s : steps) out.push_back(s.node);
    return out;
}

Path Path::reversed() const {
    Path out;
    out.start = end();
    // Walking the same edge the other way flips its traversal.
    for (std::size_t k = steps.size(); k-- > 0;) {
        const auto& reached = k == 0 ? start : steps[k - 1].node;
        auto flipped = steps[k].traversal == Traversal::Forward ? Traversal::Backward : Traversal::Forward;
        out.steps.push_back({reached, flipped});
    }
    return out;
}

std::string Path::to_string() const {
    std::string out = start;
    for (const auto& s : steps) {
        out += s.traversal == Traversal::Forward ? " -> " : " <- ";
        out += s.node;
    }
    return out;
}

std::string_view to_string(PathKind kind) { return kind == PathKind::Causal ? "Causal" : "NonCausal"; }

namespace {

void check_size(const Dag& dag) {
    if (dag.size() > kMaxAnalysisNodes) {
        throw Error(ErrorCode::SizeLimit, "graph has " + std::to_string(dag.size()) + " nodes; path analysis is capped at " +
                                              std::to_string(kMaxAnalysisNodes));
    }
}

std::vector<bool> conditioning_mask(const Dag& dag, const std::vector<std::string>& conditioned) {
    std::vector<bool> mask(dag.size(), false);
    for (const auto& c : conditioned) {
        auto i = dag.index_of(c);
        if (dag.nodes()[i].latent) {
            throw Error(ErrorCode::LatentConditioned, "cannot condition on latent node '" + c + "'");
        }
        mask[i] = true;
    }
    return mask;
}

void sort_paths(std::vector<Path>& paths) {
    std::sort(paths.begin(), paths.end(), [](const Path& a, const Path& b) { return a.nodes() < b.nodes(); });
}

std::vector<Path> search(const Dag& dag, std::size_t x, std::size_t y, bool directed_only) {
    std::vector<Path> out;
    std::vector<bool> on_path(dag.size(), false);
    std::vector<PathStep> steps;

    std::function<void(std::size_t)> walk = [&](std::size_t v) {
        if (v == y) {
            out.push_back({dag.name(x), steps});
            return;
        }
        on_path[v] = true;
        auto go = [&](std::size_t w, Traversal t) {
            if (on_path[w]) return;
            steps.push_back({dag.name(w), t});
            walk(w);
            steps.pop_back();
        };
        for (auto w : dag.child_indices(v)) go(w, Traversal::Forward);
        if (!directed_only)
            for (auto w : dag.parent_indices(v)) go(w, Traversal::Backward);
        on_path[v] = false;
    };
    walk(x);
    sort_paths(out);
    return out;
}

std::pair<std::size_t, std::size_t> endpoints(const Dag& dag, std::string_view x, std::string_view y) {
    auto xi = dag.index_of(x);
    auto yi = dag.index_of(y);
    if (xi == yi) throw Error(ErrorCode::SameNode, "path endpoints coincide: '" + std::string(x) + "'");
    check_size(dag);
    return {xi, yi};
}

}  // namespace

void validate_query(const Dag& dag, const CausalQuery& query) {
    auto x = dag.index_of(query.exposure);
    auto y = dag.index_of(query.outcome);
    if (x == y) throw Error(ErrorCode::SameNode, "exposure and outcome are both '" + query.exposure + "'");
    conditioning_mask(dag, query.conditioned);
    for (const auto& c : query.conditioned) {
        if (c == query.exposure || c == query.outcome) {
            throw Error(ErrorCode::InvalidQuery, "conditioning set contains query endpoint '" + c + "'");
        }
    }
}

std::vector<Path> enumerate_paths(const Dag& dag, std::string_view x, std::string_view y) {
    auto [xi, yi] = endpoints(dag, x, y);
    return search(dag, xi, yi, false);
}

std::vector<Path> directed_paths(const Dag& dag, std::string_view x, std::string_view y) {
    auto [xi, yi] = endpoints(dag, x, y);
    return search(dag, xi, yi, true);
}

PathClass classify_path(const Path& path) {
    PathClass out;
    bool all_forward = std::all_of(path.steps.begin(), path.steps.end(),
                                   [](const PathStep& s) { return s.traversal == Traversal::Forward; });
    out.kind = all_forward ? PathKind::Causal : PathKind::NonCausal;
    // Head-to-head at steps[k].node: arrive along an edge pointing at it, then
    // leave against an edge that also points at it.
    for (std::size_t k = 0; k + 1 < path.steps.size(); ++k) {
        if (path.steps[k].traversal == Traversal::Forward && path.steps[k + 1].traversal == Traversal::Backward) {
            out.colliders.push_back(path.steps[k].node);
        }
    }
    return out;
}

namespace {

bool blocked_by_mask(const Dag& dag, const Path& path, const std::vector<bool>& z) {
    for (std::size_t k = 0; k + 1 < path.steps.size(); ++k) {
        auto v = dag.index_of(path.steps[k].node);
        bool collider =
            path.steps[k].traversal == Traversal::Forward && path.steps[k + 1].traversal == Traversal::Backward;
        if (!collider) {
            if (z[v]) return true;
            continue;
        }
        if (z[v]) continue;
        auto desc = dag.descendant_mask(v);
        bool opened = false;
        for (std::size_t i = 0; i < desc.size() && !opened; ++i) opened = desc[i] && z[i];
        if (!opened) return true;
    }
    return false;
}

}  // namespace

bool is_blocked(const Dag& dag, const Path& path, const std::vector<std::string>& conditioned) {
    return blocked_by_mask(dag, path, conditioning_mask(dag, conditioned));
}

DSeparation d_separated(const Dag& dag, std::string_view x, std::string_view y,
                        const std::vector<std::string>& conditioned) {
    validate_query(dag, {std::string(x), std::string(y), conditioned});
    auto z = conditioning_mask(dag, conditioned);
    DSeparation out;
    for (auto& p : enumerate_paths(dag, x, y)) {
        if (!blocked_by_mask(dag, p, z)) out.open_paths.push_back(std::move(p));
    }
    out.separated = out.open_paths.empty();
    return out;
}

}  // namespace causal
