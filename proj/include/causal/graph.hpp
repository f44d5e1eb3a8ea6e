#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace causal {

// Analysis routines that enumerate paths or subsets refuse graphs above this.
inline constexpr std::size_t kMaxAnalysisNodes = 20;

bool is_valid_identifier(std::string_view name);

struct Edge {
    std::string from;
    std::string to;

    auto operator<=>(const Edge&) const = default;
};

// A moderator changes the strength of the edge target_from -> target_to.
// It is an annotation, not an arrow: graph algorithms never see it.
struct Moderation {
    std::string moderator;
    std::string target_from;
    std::string target_to;

    Edge target() const { return {target_from, target_to}; }
    auto operator<=>(const Moderation&) const = default;
};

struct NodeSpec {
    std::string name;
    bool latent = false;
    std::optional<std::string> label;

    bool operator==(const NodeSpec&) const = default;
};

// Validated, immutable directed acyclic graph.
//
// Nodes are stored in canonical order: topological, ties broken by
// lexicographic name. Every list the class hands out (nodes, edges,
// parents, ancestors, ...) follows that order, so node index i is also the
// node's canonical rank.
class Dag {
public:
    Dag() = default;

    // Throws CycleError, or Error with DuplicateNode, DuplicateEdge, SelfLoop,
    // UnknownNode, InvalidName or InvalidModeration.
    static Dag build(std::vector<NodeSpec> nodes,
                     std::vector<Edge> edges,
                     std::vector<Moderation> moderations = {});

    // Convenience for tests and tools: declares every name that appears in
    // `edges` or `isolated`.
    static Dag from_edges(const std::vector<Edge>& edges,
                          const std::vector<std::string>& isolated = {});

    std::size_t size() const noexcept { return nodes_.size(); }
    const std::vector<NodeSpec>& nodes() const noexcept { return nodes_; }
    std::vector<std::string> names() const;
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<Moderation>& moderations() const noexcept { return moderations_; }

    bool contains(std::string_view name) const;
    std::optional<std::size_t> find(std::string_view name) const;
    std::size_t index_of(std::string_view name) const;  // throws UnknownNode
    const std::string& name(std::size_t index) const { return nodes_.at(index).name; }
    bool is_latent(std::string_view name) const { return nodes_[index_of(name)].latent; }
    bool has_edge(std::string_view from, std::string_view to) const;

    std::vector<std::string> parents(std::string_view v) const;
    std::vector<std::string> children(std::string_view v) const;
    std::vector<std::string> ancestors(std::string_view v) const;
    std::vector<std::string> descendants(std::string_view v) const;

    // Index-level adjacency, canonical order.
    const std::vector<std::size_t>& parent_indices(std::size_t v) const { return parents_.at(v); }
    const std::vector<std::size_t>& child_indices(std::size_t v) const { return children_.at(v); }
    std::vector<bool> ancestor_mask(std::size_t v) const;
    std::vector<bool> descendant_mask(std::size_t v) const;

    // Same nodes and moderations that still target a surviving edge.
    Dag without_edges_out_of(std::string_view v) const;

    bool operator==(const Dag& other) const;

private:
    std::vector<NodeSpec> nodes_;
    std::vector<Edge> edges_;
    std::vector<Moderation> moderations_;
    std::vector<std::vector<std::size_t>> parents_;
    std::vector<std::vector<std::size_t>> children_;
};

// Sorts names by canonical rank in `dag`. Unknown names throw.
std::vector<std::string> canonical_sort(const Dag& dag, std::vector<std::string> names);

}  // namespace causal
