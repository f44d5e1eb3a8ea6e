#include "causal/corpus.hpp"
#include "causal/error.hpp"
#include "causal/graph.hpp"
#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace causal;
using Names = std::vector<std::string>;

namespace {

Dag fig1() {
    return Dag::from_edges({{"A", "C"}, {"B", "A"}, {"B", "D"}, {"D", "C"}, {"E", "D"}});
}

template <class F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::InvalidParameter;
}

}  // namespace

TEST_CASE("two-node chain orders A before C") {
    auto dag = Dag::build({{"A"}, {"C"}}, {{"A", "C"}});
    CHECK(dag.names() == Names{"A", "C"});
    CHECK(dag.has_edge("A", "C"));
    CHECK_FALSE(dag.has_edge("C", "A"));
}

TEST_CASE("two-cycle reports its witness") {
    try {
        Dag::from_edges({{"A", "B"}, {"B", "A"}});
        FAIL("cycle accepted");
    } catch (const CycleError& e) {
        CHECK(e.code() == ErrorCode::CycleFound);
        CHECK(e.witness() == Names{"A", "B", "A"});
        CHECK(std::string(e.what()).find("A -> B -> A") != std::string::npos);
    }
}

TEST_CASE("longer cycle witness is a real closed walk") {
    std::vector<Edge> edges{{"A", "B"}, {"B", "C"}, {"C", "D"}, {"D", "B"}, {"X", "A"}};
    try {
        Dag::from_edges(edges);
        FAIL("cycle accepted");
    } catch (const CycleError& e) {
        const auto& w = e.witness();
        REQUIRE(w.size() >= 3);
        CHECK(w.front() == w.back());
        for (std::size_t i = 0; i + 1 < w.size(); ++i) {
            CHECK(std::find(edges.begin(), edges.end(), Edge{w[i], w[i + 1]}) != edges.end());
        }
    }
}

TEST_CASE("fig1 reconstruction builds") {
    auto dag = fig1();
    CHECK(dag.size() == 5);
    CHECK(dag.names() == Names{"B", "A", "E", "D", "C"});
    CHECK(dag.parents("D") == Names{"B", "E"});
    CHECK(dag.parents("A") == Names{"B"});
    CHECK(dag.parents("B").empty());
    CHECK(dag.children("B") == Names{"A", "D"});
    CHECK(dag.ancestors("C") == Names{"B", "A", "E", "D"});
    CHECK(dag.descendants("B") == Names{"A", "D", "C"});
    CHECK(dag.descendants("C").empty());
}

TEST_CASE("build rejects malformed input") {
    CHECK(code_of([] { Dag::build({{"A"}}, {{"A", "A"}}); }) == ErrorCode::SelfLoop);
    CHECK(code_of([] { Dag::build({{"A"}, {"B"}}, {{"A", "B"}, {"A", "B"}}); }) == ErrorCode::DuplicateEdge);
    CHECK(code_of([] { Dag::build({{"A"}, {"A"}}, {}); }) == ErrorCode::DuplicateNode);
    CHECK(code_of([] { Dag::build({{"A"}}, {{"A", "B"}}); }) == ErrorCode::UnknownNode);
    CHECK(code_of([] { Dag::build({{"1A"}}, {}); }) == ErrorCode::InvalidName);
    CHECK(code_of([] { Dag::build({{""}}, {}); }) == ErrorCode::InvalidName);
    CHECK(code_of([] { fig1().parents("Q"); }) == ErrorCode::UnknownNode);
    CHECK(code_of([] { fig1().descendants("Q"); }) == ErrorCode::UnknownNode);
}

TEST_CASE("moderation validation") {
    std::vector<NodeSpec> nodes{{"G"}, {"T"}, {"Y"}};
    CHECK_NOTHROW(Dag::build(nodes, {{"G", "Y"}}, {{"T", "G", "Y"}}));
    CHECK(code_of([&] { Dag::build(nodes, {{"G", "Y"}}, {{"T", "Y", "G"}}); }) == ErrorCode::InvalidModeration);
    CHECK(code_of([&] { Dag::build(nodes, {{"G", "Y"}}, {{"G", "G", "Y"}}); }) == ErrorCode::InvalidModeration);
    CHECK(code_of([&] { Dag::build(nodes, {{"G", "Y"}}, {{"Q", "G", "Y"}}); }) == ErrorCode::UnknownNode);
    CHECK(code_of([&] { Dag::build(nodes, {{"G", "Y"}}, {{"T", "G", "Y"}, {"T", "G", "Y"}}); }) ==
          ErrorCode::InvalidModeration);
}

TEST_CASE("identifier pattern") {
    CHECK(is_valid_identifier("_x1"));
    CHECK(is_valid_identifier("Abc"));
    CHECK_FALSE(is_valid_identifier("9a"));
    CHECK_FALSE(is_valid_identifier("a-b"));
    CHECK_FALSE(is_valid_identifier(""));
}

TEST_CASE("names are case-sensitive") {
    auto dag = Dag::from_edges({{"a", "A"}});
    CHECK(dag.size() == 2);
    CHECK(dag.has_edge("a", "A"));
}

TEST_CASE("random DAGs: order, acyclicity corollary and closure symmetry") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        std::size_t n = 1 + trial % 10;
        auto g = testing_support::random_graph(rng, n, 0.35);
        auto dag = testing_support::to_dag(g);
        auto reach = testing_support::reachability(g.names, g.edges);
        for (const auto& e : dag.edges()) CHECK(dag.index_of(e.from) < dag.index_of(e.to));
        for (const auto& u : g.names) {
            auto anc = dag.ancestors(u);
            auto desc = dag.descendants(u);
            CHECK(std::find(anc.begin(), anc.end(), u) == anc.end());
            CHECK(std::find(desc.begin(), desc.end(), u) == desc.end());
            for (const auto& v : g.names) {
                bool v_desc_of_u = std::find(desc.begin(), desc.end(), v) != desc.end();
                auto anc_v = dag.ancestors(v);
                bool u_anc_of_v = std::find(anc_v.begin(), anc_v.end(), u) != anc_v.end();
                CHECK(v_desc_of_u == u_anc_of_v);
                CHECK(v_desc_of_u == reach.reaches(u, v));
            }
        }
        // The canonical order is the lexicographically smallest topological
        // order; check against every permutation on small graphs.
        if (n <= 7) {
            auto perm = g.names;
            std::sort(perm.begin(), perm.end());
            std::optional<Names> best;
            do {
                bool ok = true;
                for (const auto& e : g.edges) {
                    auto pf = std::find(perm.begin(), perm.end(), e.from);
                    auto pt = std::find(perm.begin(), perm.end(), e.to);
                    ok &= pf < pt;
                }
                if (ok) {
                    best = perm;
                    break;
                }
            } while (std::next_permutation(perm.begin(), perm.end()));
            REQUIRE(best);
            CHECK(dag.names() == *best);
        }
    }
}

TEST_CASE("corpus graphs build, and reversing one edge into a 2-cycle fails") {
    for (const auto& entry : corpus()) {
        auto doc = load_corpus(entry.id);
        const auto& dag = doc.dag;
        for (const auto& e : dag.edges()) {
            auto edges = dag.edges();
            edges.push_back({e.to, e.from});
            std::vector<NodeSpec> nodes = dag.nodes();
            CHECK(code_of([&] { Dag::build(nodes, edges); }) == ErrorCode::CycleFound);
        }
    }
}

TEST_CASE("removing edges out of a node keeps the rest") {
    auto dag = fig1().without_edges_out_of("B");
    CHECK(dag.size() == 5);
    CHECK_FALSE(dag.has_edge("B", "A"));
    CHECK_FALSE(dag.has_edge("B", "D"));
    CHECK(dag.has_edge("E", "D"));
    CHECK(dag.edges().size() == 3);
}

TEST_CASE("canonical_sort follows the node order") {
    CHECK(canonical_sort(fig1(), {"C", "E", "A"}) == Names{"A", "E", "C"});
}
