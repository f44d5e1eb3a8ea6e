#pragma once

// Test-only helpers: random graph/document generators and brute-force
// oracles that share no code with the library's algorithms.

#include "causal/dsl.hpp"
#include "causal/graph.hpp"
#include "causal/scm.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace testing_support {

using causal::Dag;
using causal::Edge;

inline std::string node_name(std::size_t i) {
    static const char* names[] = {"A", "B", "C", "D", "E", "F", "G", "H", "I", "J", "K", "L",
                                  "M", "N", "O", "P", "Q", "R", "S", "T", "U", "V", "W", "X"};
    return names[i];
}

// Random DAG: nodes get a hidden random rank and edges only go from lower
// to higher rank, each present with probability p.
struct RandomGraph {
    std::vector<std::string> names;
    std::vector<Edge> edges;
};

inline RandomGraph random_graph(std::mt19937_64& rng, std::size_t n, double p) {
    RandomGraph g;
    for (std::size_t i = 0; i < n; ++i) g.names.push_back(node_name(i));
    std::vector<std::size_t> rank(n);
    for (std::size_t i = 0; i < n; ++i) rank[i] = i;
    std::shuffle(rank.begin(), rank.end(), rng);
    std::bernoulli_distribution coin(p);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (rank[a] < rank[b] && coin(rng)) g.edges.push_back({g.names[a], g.names[b]});
    return g;
}

inline Dag to_dag(const RandomGraph& g) { return Dag::from_edges(g.edges, g.names); }

// Reachability by Floyd-Warshall over the edge list.
struct Reach {
    std::vector<std::string> names;
    std::vector<std::vector<bool>> r;  // r[a][b]: directed path a ~> b of length >= 1

    std::size_t at(const std::string& v) const {
        return static_cast<std::size_t>(std::find(names.begin(), names.end(), v) - names.begin());
    }
    bool reaches(const std::string& a, const std::string& b) const { return r[at(a)][at(b)]; }
};

inline Reach reachability(const std::vector<std::string>& names, const std::vector<Edge>& edges) {
    Reach out{names, std::vector<std::vector<bool>>(names.size(), std::vector<bool>(names.size(), false))};
    for (const auto& e : edges) out.r[out.at(e.from)][out.at(e.to)] = true;
    const std::size_t n = names.size();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (out.r[i][k] && out.r[k][j]) out.r[i][j] = true;
    return out;
}

// Every simple undirected node sequence from x to y, found by breadth-first
// growth of partial sequences.
inline std::vector<std::vector<std::string>> brute_paths(const std::vector<std::string>& names,
                                                         const std::vector<Edge>& edges, const std::string& x,
                                                         const std::string& y) {
    std::map<std::string, std::set<std::string>> adj;
    for (const auto& e : edges) {
        adj[e.from].insert(e.to);
        adj[e.to].insert(e.from);
    }
    std::vector<std::vector<std::string>> done, frontier{{x}};
    while (!frontier.empty()) {
        std::vector<std::vector<std::string>> next;
        for (const auto& seq : frontier) {
            for (const auto& nb : adj[seq.back()]) {
                if (std::find(seq.begin(), seq.end(), nb) != seq.end()) continue;
                auto grown = seq;
                grown.push_back(nb);
                if (nb == y) {
                    done.push_back(grown);
                } else {
                    next.push_back(grown);
                }
            }
        }
        frontier = std::move(next);
    }
    (void)names;
    std::sort(done.begin(), done.end());
    return done;
}

// d-separation through the moralized ancestral graph: x and y are separated
// by s iff no undirected route joins them once s is deleted from the moral
// graph of An({x, y} u s).
inline bool moral_separated(const std::vector<std::string>& names, const std::vector<Edge>& edges,
                            const std::string& x, const std::string& y, const std::vector<std::string>& s) {
    auto reach = reachability(names, edges);
    std::set<std::string> keep{x, y};
    keep.insert(s.begin(), s.end());
    for (const auto& v : names)
        for (const auto& t : std::set<std::string>(keep))
            if (reach.reaches(v, t)) keep.insert(v);

    std::map<std::string, std::set<std::string>> adj;
    std::map<std::string, std::vector<std::string>> parents;
    for (const auto& e : edges) {
        if (!keep.count(e.from) || !keep.count(e.to)) continue;
        adj[e.from].insert(e.to);
        adj[e.to].insert(e.from);
        parents[e.to].push_back(e.from);
    }
    for (const auto& [child, ps] : parents)
        for (const auto& a : ps)
            for (const auto& b : ps)
                if (a != b) adj[a].insert(b);

    std::set<std::string> blocked(s.begin(), s.end());
    std::set<std::string> seen{x};
    std::vector<std::string> stack{x};
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        if (v == y) return false;
        for (const auto& nb : adj[v]) {
            if (blocked.count(nb) || seen.count(nb)) continue;
            seen.insert(nb);
            stack.push_back(nb);
        }
    }
    return true;
}

// Sigma = (I - B)^-1 Omega (I - B)^-T with B[to][from] = coefficient, using a
// dense inverse over the given name order.
inline Eigen::MatrixXd dense_covariance(const std::vector<std::string>& names, const std::map<Edge, double>& coef,
                                        const std::map<std::string, double>& noise) {
    const auto n = static_cast<Eigen::Index>(names.size());
    auto at = [&](const std::string& v) {
        return static_cast<Eigen::Index>(std::find(names.begin(), names.end(), v) - names.begin());
    };
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [e, c] : coef) b(at(e.to), at(e.from)) = c;
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(n, n);
    for (const auto& v : names) omega(at(v), at(v)) = noise.count(v) ? noise.at(v) : 1.0;
    Eigen::MatrixXd inv = (Eigen::MatrixXd::Identity(n, n) - b).inverse();
    return inv * omega * inv.transpose();
}

inline std::map<Edge, double> random_coefficients(std::mt19937_64& rng, const std::vector<Edge>& edges, double lo,
                                                  double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::map<Edge, double> out;
    for (const auto& e : edges) out[e] = u(rng);
    return out;
}

// All subsets of `pool` with at most k elements.
inline std::vector<std::vector<std::string>> subsets_up_to(const std::vector<std::string>& pool, std::size_t k) {
    std::vector<std::vector<std::string>> out;
    const std::size_t n = pool.size();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) > k) continue;
        std::vector<std::string> s;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) s.push_back(pool[i]);
        out.push_back(s);
    }
    return out;
}

// Random document text exercising every statement kind. Node names avoid
// reserved words; statements come in shuffled order.
inline std::string random_document_text(std::mt19937_64& rng, std::size_t max_nodes) {
    std::uniform_int_distribution<std::size_t> count(1, max_nodes);
    const std::size_t n = count(rng);
    static const char* pool[] = {"a",  "B",   "c_1", "Load", "x9",  "Temp", "_z",  "Y",    "node",  "R2",  "q",
                                 "Zz", "m_m", "K",   "beta", "w",   "Wind", "s",   "t_0",  "U",     "vv",  "h"};
    std::vector<std::string> names(std::begin(pool), std::end(pool));
    std::shuffle(names.begin(), names.end(), rng);
    names.resize(n);

    auto g = random_graph(rng, n, 0.3);
    auto rename = [&](const std::string& v) { return names[static_cast<std::size_t>(v[0] - 'A')]; };

    std::bernoulli_distribution coin(0.5);
    std::uniform_real_distribution<double> real(-5.0, 5.0);
    std::uniform_int_distribution<int> expo(-8, 8);
    auto number = [&] {
        double v = real(rng) * std::pow(10.0, expo(rng));
        std::ostringstream s;
        s.precision(17);
        s << v;
        return s.str();
    };
    static const char* labels[] = {"loading", "has \"quotes\"", "back\\slash", "line\nbreak", "", "x y z"};
    std::uniform_int_distribution<std::size_t> pick_label(0, std::size(labels) - 1);
    auto quoted = [&](const std::string& s) {
        std::string out = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\') out += '\\';
            if (c == '\n') {
                out += "\\n";
                continue;
            }
            out += c;
        }
        return out + "\"";
    };

    std::vector<std::string> stmts;
    std::set<std::string> latent;
    for (const auto& v : names) {
        std::string s = v;
        if (coin(rng)) s += " [label=" + quoted(labels[pick_label(rng)]) + "]";
        stmts.push_back(s);
        if (coin(rng) && coin(rng)) {
            stmts.push_back("latent " + v);
            latent.insert(v);
        }
        if (coin(rng)) stmts.push_back("noise " + v + " " + std::to_string(0.25 + 0.5 * static_cast<double>(stmts.size())));
    }
    std::vector<Edge> edges;
    for (const auto& e : g.edges) {
        Edge r{rename(e.from), rename(e.to)};
        edges.push_back(r);
        std::string s = r.from + " -> " + r.to;
        std::vector<std::string> attrs;
        if (coin(rng)) attrs.push_back("coef=" + number());
        if (coin(rng)) attrs.push_back("label=" + quoted(labels[pick_label(rng)]));
        if (!attrs.empty()) {
            std::shuffle(attrs.begin(), attrs.end(), rng);
            s += " [" + attrs[0] + (attrs.size() > 1 ? ", " + attrs[1] : "") + "]";
        }
        stmts.push_back(s);
    }
    std::set<std::pair<std::string, Edge>> used;
    for (const auto& e : edges) {
        for (const auto& m : names) {
            if (m == e.from || m == e.to || !coin(rng) || !coin(rng)) continue;
            std::string s = m + " ~> (" + e.from + " -> " + e.to + ")";
            if (coin(rng)) s += " [coef=" + number() + "]";
            stmts.push_back(s);
        }
    }
    std::shuffle(stmts.begin(), stmts.end(), rng);

    // Markers go last so their nodes are already declared.
    std::vector<std::string> observed;
    for (const auto& v : names)
        if (!latent.count(v)) observed.push_back(v);
    if (observed.size() >= 2 && coin(rng)) {
        std::shuffle(observed.begin(), observed.end(), rng);
        stmts.push_back("exposure " + observed[0]);
        stmts.push_back("outcome " + observed[1]);
        for (std::size_t i = 2; i < observed.size(); ++i)
            if (coin(rng)) stmts.push_back("adjusted " + observed[i]);
    }

    std::string text = "# generated\ndag doc_" + std::to_string(n) + " {\n";
    for (const auto& s : stmts) text += "  " + s + "\n";
    return text + "}\n";
}

}  // namespace testing_support
