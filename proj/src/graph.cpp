#include "causal/graph.hpp"

#include "causal/error.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <set>

namespace causal {

bool is_valid_identifier(std::string_view name) {
    if (name.empty()) return false;
    auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (!alpha(name.front())) return false;
    return std::all_of(name.begin() + 1, name.end(), [&](char c) { return alpha(c) || digit(c); });
}

namespace {

// Depth-first search for a directed cycle. Nodes and successors are visited in
// name order so the witness is deterministic.
std::vector<std::string> find_cycle(const std::vector<std::string>& names,
                                    const std::vector<std::vector<std::size_t>>& succ) {
    enum class Mark { White, Grey, Black };
    std::vector<Mark> mark(names.size(), Mark::White);
    std::vector<std::size_t> stack;

    std::function<std::optional<std::size_t>(std::size_t)> visit = [&](std::size_t v) -> std::optional<std::size_t> {
        mark[v] = Mark::Grey;
        stack.push_back(v);
        for (std::size_t w : succ[v]) {
            if (mark[w] == Mark::Grey) return w;
            if (mark[w] == Mark::White) {
                if (auto hit = visit(w)) return hit;
            }
        }
        stack.pop_back();
        mark[v] = Mark::Black;
        return std::nullopt;
    };

    std::vector<std::size_t> order(names.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return names[a] < names[b]; });

    for (std::size_t start : order) {
        if (mark[start] != Mark::White) continue;
        if (auto hit = visit(start)) {
            auto first = std::find(stack.begin(), stack.end(), *hit);
            std::vector<std::string> witness;
            for (auto it = first; it != stack.end(); ++it) witness.push_back(names[*it]);
            witness.push_back(names[*hit]);
            return witness;
        }
    }
    return {};
}

}  // namespace

Dag Dag::build(std::vector<NodeSpec> nodes, std::vector<Edge> edges, std::vector<Moderation> moderations) {
    std::map<std::string, std::size_t> input_index;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& name = nodes[i].name;
        if (!is_valid_identifier(name)) {
            throw Error(ErrorCode::InvalidName, "invalid node name '" + name + "'");
        }
        if (!input_index.emplace(name, i).second) {
            throw Error(ErrorCode::DuplicateNode, "node '" + name + "' declared twice");
        }
    }

    auto lookup = [&](const std::string& name, std::string_view what) {
        auto it = input_index.find(name);
        if (it == input_index.end()) {
            throw Error(ErrorCode::UnknownNode, std::string(what) + " references undeclared node '" + name + "'");
        }
        return it->second;
    };

    std::vector<std::vector<std::size_t>> succ(nodes.size());
    std::set<Edge> seen;
    for (const auto& e : edges) {
        std::size_t from = lookup(e.from, "edge");
        std::size_t to = lookup(e.to, "edge");
        if (from == to) {
            throw Error(ErrorCode::SelfLoop, "self-loop on '" + e.from + "'");
        }
        if (!seen.insert(e).second) {
            throw Error(ErrorCode::DuplicateEdge, "duplicate edge " + e.from + " -> " + e.to);
        }
        succ[from].push_back(to);
    }
    for (auto& s : succ) {
        std::sort(s.begin(), s.end(), [&](auto a, auto b) { return nodes[a].name < nodes[b].name; });
    }

    for (const auto& m : moderations) {
        lookup(m.moderator, "moderation");
        lookup(m.target_from, "moderation");
        lookup(m.target_to, "moderation");
        if (!seen.count(m.target())) {
            throw Error(ErrorCode::InvalidModeration,
                        "moderation by '" + m.moderator + "' targets missing edge " + m.target_from + " -> " +
                            m.target_to);
        }
        if (m.moderator == m.target_from || m.moderator == m.target_to) {
            throw Error(ErrorCode::InvalidModeration,
                        "moderator '" + m.moderator + "' is an endpoint of the edge it moderates");
        }
    }

    // Kahn's algorithm, smallest name first.
    std::vector<std::size_t> indegree(nodes.size(), 0);
    for (const auto& s : succ)
        for (auto w : s) ++indegree[w];
    auto later = [&](std::size_t a, std::size_t b) { return nodes[a].name > nodes[b].name; };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(later)> ready(later);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (indegree[i] == 0) ready.push(i);
    std::vector<std::size_t> order;
    while (!ready.empty()) {
        auto v = ready.top();
        ready.pop();
        order.push_back(v);
        for (auto w : succ[v])
            if (--indegree[w] == 0) ready.push(w);
    }
    if (order.size() != nodes.size()) {
        std::vector<std::string> names;
        for (const auto& n : nodes) names.push_back(n.name);
        throw CycleError(find_cycle(names, succ));
    }

    Dag dag;
    std::vector<std::size_t> rank(nodes.size());
    for (std::size_t r = 0; r < order.size(); ++r) {
        rank[order[r]] = r;
        dag.nodes_.push_back(std::move(nodes[order[r]]));
    }
    dag.parents_.assign(dag.nodes_.size(), {});
    dag.children_.assign(dag.nodes_.size(), {});
    for (std::size_t v = 0; v < succ.size(); ++v) {
        for (auto w : succ[v]) {
            dag.children_[rank[v]].push_back(rank[w]);
            dag.parents_[rank[w]].push_back(rank[v]);
        }
    }
    for (auto& list : dag.parents_) std::sort(list.begin(), list.end());
    for (auto& list : dag.children_) std::sort(list.begin(), list.end());

    auto edge_key = [&](const Edge& e) {
        return std::pair{rank[input_index.at(e.from)], rank[input_index.at(e.to)]};
    };
    std::sort(edges.begin(), edges.end(), [&](const Edge& a, const Edge& b) { return edge_key(a) < edge_key(b); });
    dag.edges_ = std::move(edges);

    auto mod_key = [&](const Moderation& m) {
        return std::tuple{edge_key(m.target()), rank[input_index.at(m.moderator)]};
    };
    std::sort(moderations.begin(), moderations.end(),
              [&](const Moderation& a, const Moderation& b) { return mod_key(a) < mod_key(b); });
    auto dup = std::adjacent_find(moderations.begin(), moderations.end());
    if (dup != moderations.end()) {
        throw Error(ErrorCode::InvalidModeration, "moderation by '" + dup->moderator + "' declared twice");
    }
    dag.moderations_ = std::move(moderations);
    return dag;
}

Dag Dag::from_edges(const std::vector<Edge>& edges, const std::vector<std::string>& isolated) {
    std::set<std::string> names(isolated.begin(), isolated.end());
    for (const auto& e : edges) {
        names.insert(e.from);
        names.insert(e.to);
    }
    std::vector<NodeSpec> nodes;
    for (const auto& n : names) nodes.push_back({n, false, std::nullopt});
    return build(std::move(nodes), edges);
}

std::vector<std::string> Dag::names() const {
    std::vector<std::string> out;
    out.reserve(nodes_.size());
    for (const auto& n : nodes_) out.push_back(n.name);
    return out;
}

std::optional<std::size_t> Dag::find(std::string_view name) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (nodes_[i].name == name) return i;
    return std::nullopt;
}

bool Dag::contains(std::string_view name) const { return find(name).has_value(); }

std::size_t Dag::index_of(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw Error(ErrorCode::UnknownNode, "unknown node '" + std::string(name) + "'");
}

bool Dag::has_edge(std::string_view from, std::string_view to) const {
    auto f = find(from);
    auto t = find(to);
    if (!f || !t) return false;
    const auto& c = children_[*f];
    return std::binary_search(c.begin(), c.end(), *t);
}

namespace {

std::vector<bool> reach(const std::vector<std::vector<std::size_t>>& adj, std::size_t start) {
    std::vector<bool> seen(adj.size(), false);
    std::vector<std::size_t> todo(adj[start].begin(), adj[start].end());
    while (!todo.empty()) {
        auto v = todo.back();
        todo.pop_back();
        if (seen[v]) continue;
        seen[v] = true;
        for (auto w : adj[v]) todo.push_back(w);
    }
    return seen;
}

}  // namespace

std::vector<bool> Dag::ancestor_mask(std::size_t v) const { return reach(parents_, v); }
std::vector<bool> Dag::descendant_mask(std::size_t v) const { return reach(children_, v); }

namespace {

std::vector<std::string> collect(const Dag& dag, const std::vector<bool>& mask) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) out.push_back(dag.name(i));
    return out;
}

std::vector<std::string> collect(const Dag& dag, const std::vector<std::size_t>& indices) {
    std::vector<std::string> out;
    for (auto i : indices) out.push_back(dag.name(i));
    return out;
}

}  // namespace

std::vector<std::string> Dag::parents(std::string_view v) const { return collect(*this, parents_[index_of(v)]); }
std::vector<std::string> Dag::children(std::string_view v) const { return collect(*this, children_[index_of(v)]); }
std::vector<std::string> Dag::ancestors(std::string_view v) const { return collect(*this, ancestor_mask(index_of(v))); }
std::vector<std::string> Dag::descendants(std::string_view v) const {
    return collect(*this, descendant_mask(index_of(v)));
}

Dag Dag::without_edges_out_of(std::string_view v) const {
    index_of(v);
    std::vector<Edge> kept;
    for (const auto& e : edges_)
        if (e.from != v) kept.push_back(e);
    std::vector<Moderation> mods;
    for (const auto& m : moderations_)
        if (m.target_from != v) mods.push_back(m);
    return build(nodes_, std::move(kept), std::move(mods));
}

bool Dag::operator==(const Dag& other) const {
    return nodes_ == other.nodes_ && edges_ == other.edges_ && moderations_ == other.moderations_;
}

std::vector<std::string> canonical_sort(const Dag& dag, std::vector<std::string> names) {
    std::sort(names.begin(), names.end(),
              [&](const std::string& a, const std::string& b) { return dag.index_of(a) < dag.index_of(b); });
    return names;
}

}  // namespace causal
