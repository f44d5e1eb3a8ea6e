#pragma once

#include "causal/graph.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace causal {

// Forward: the edge was walked tail to head.
enum class Traversal { Forward, Backward };

struct PathStep {
    std::string node;
    Traversal traversal;

    bool operator==(const PathStep&) const = default;
};

// A simple route from `start` that walks edges along or against their
// direction. steps[k] is the node reached by the k-th edge.
struct Path {
    std::string start;
    std::vector<PathStep> steps;

    std::vector<std::string> nodes() const;
    const std::string& end() const { return steps.empty() ? start : steps.back().node; }
    Path reversed() const;
    // "A <- B -> D <- E"
    std::string to_string() const;

    bool operator==(const Path&) const = default;
};

enum class PathKind { Causal, NonCausal };

struct PathClass {
    PathKind kind = PathKind::NonCausal;
    std::vector<std::string> colliders;  // in path order

    bool operator==(const PathClass&) const = default;
};

struct CausalQuery {
    std::string exposure;
    std::string outcome;
    std::vector<std::string> conditioned;
};

// Throws UnknownNode, SameNode, InvalidQuery (conditioned overlaps the
// endpoints) or LatentConditioned.
void validate_query(const Dag& dag, const CausalQuery& query);

// All simple paths between x and y, sorted by node-name sequence.
std::vector<Path> enumerate_paths(const Dag& dag, std::string_view x, std::string_view y);

PathClass classify_path(const Path& path);

bool is_blocked(const Dag& dag, const Path& path, const std::vector<std::string>& conditioned);

struct DSeparation {
    bool separated = true;
    std::vector<Path> open_paths;
};

DSeparation d_separated(const Dag& dag, std::string_view x, std::string_view y,
                        const std::vector<std::string>& conditioned);

// Directed paths x -> ... -> y only.
std::vector<Path> directed_paths(const Dag& dag, std::string_view x, std::string_view y);

std::string_view to_string(PathKind kind);

}  // namespace causal
