#include <doctest.h>

#include <cmath>

#include "dagreserve/dag_model.hpp"
#include "dagreserve/json_io.hpp"
#include "testutil.hpp"

using namespace dagreserve;

TEST_CASE("example graph is valid") {
    CHECK(validate(testutil::example_dag()).empty());
}

TEST_CASE("single subjob with no edges is valid") {
    ConditionalDag dag;
    dag.nodes.push_back({1, NodeKind::subjob, 5.0, {}});
    CHECK(validate(dag).empty());
}

TEST_CASE("branch probabilities must sum to one") {
    ConditionalDag dag = testutil::example_dag();
    for (Node& n : dag.nodes) {
        if (n.id == 8) n.branches[1].probability = 0.7;  // (0.7, 0.7)
    }
    const std::vector<Violation> violations = validate(dag);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].node == 8);
    CHECK(violations[0].message.find("sum") != std::string::npos);
}

TEST_CASE("validation catches structural rule breaks") {
    SUBCASE("negative execution time") {
        ConditionalDag dag;
        dag.nodes.push_back({1, NodeKind::subjob, -2.0, {}});
        REQUIRE(validate(dag).size() == 1);
    }
    SUBCASE("zero-probability branch") {
        ConditionalDag dag;
        dag.nodes.push_back({1, NodeKind::subjob, 1.0, {}});
        dag.nodes.push_back({2, NodeKind::subjob, 1.0, {}});
        dag.nodes.push_back({3, NodeKind::condition, 0.0, {{0.0, 1}, {1.0, 2}}});
        bool found = false;
        for (const Violation& v : validate(dag)) found |= v.rule == 2;
        CHECK(found);
    }
    SUBCASE("shared branch target") {
        ConditionalDag dag;
        dag.nodes.push_back({1, NodeKind::subjob, 1.0, {}});
        dag.nodes.push_back({2, NodeKind::subjob, 1.0, {}});
        dag.nodes.push_back({3, NodeKind::subjob, 1.0, {}});
        dag.nodes.push_back({4, NodeKind::condition, 0.0, {{0.5, 1}, {0.5, 2}}});
        dag.nodes.push_back({5, NodeKind::condition, 0.0, {{0.5, 1}, {0.5, 3}}});
        bool found = false;
        for (const Violation& v : validate(dag)) found |= v.rule == 6;
        CHECK(found);
    }
    SUBCASE("cycle through regular edges") {
        ConditionalDag dag;
        dag.nodes.push_back({1, NodeKind::subjob, 1.0, {}});
        dag.nodes.push_back({2, NodeKind::subjob, 1.0, {}});
        dag.edges = {{1, 2}, {2, 1}};
        bool found = false;
        for (const Violation& v : validate(dag)) found |= v.rule == 11;
        CHECK(found);
    }
    SUBCASE("self loop and duplicate edge") {
        ConditionalDag dag;
        dag.nodes.push_back({1, NodeKind::subjob, 1.0, {}});
        dag.nodes.push_back({2, NodeKind::subjob, 1.0, {}});
        dag.edges = {{1, 1}, {1, 2}, {1, 2}};
        CHECK(validate(dag).size() == 2);
    }
}

TEST_CASE("example graph enumerates the four expected realizations") {
    const std::vector<DagRealization> rs = enumerate_realizations(testutil::example_dag());
    REQUIRE(rs.size() == 4);

    CHECK(rs[0].probability == doctest::Approx(0.42).epsilon(1e-12));
    CHECK(rs[1].probability == doctest::Approx(0.28).epsilon(1e-12));
    CHECK(rs[2].probability == doctest::Approx(0.18).epsilon(1e-12));
    CHECK(rs[3].probability == doctest::Approx(0.12).epsilon(1e-12));

    CHECK(rs[0].volume == 13.0);
    CHECK(rs[1].volume == 10.0);
    CHECK(rs[2].volume == 14.0);
    CHECK(rs[3].volume == 11.0);

    CHECK(rs[0].length == 12.0);
    CHECK(rs[1].length == 9.0);
    CHECK(rs[3].length == 11.0);

    // The heaviest chain of the 0.18 realization runs through all five
    // subjobs; the exhaustive oracle pins it at 14.
    CHECK(rs[2].length == testutil::exhaustive_longest_path(rs[2].subjobs, rs[2].edges));
    CHECK(rs[2].length == 14.0);

    SUBCASE("first realization matches the worked instance") {
        const DagRealization& r = rs[0];
        const std::vector<std::pair<NodeId, double>> subjobs = {
            {1, 3.0}, {2, 1.0}, {4, 1.0}, {6, 5.0}, {7, 3.0}};
        const std::vector<Edge> edges = {{1, 2}, {1, 4}, {2, 6}, {4, 6}, {6, 7}};
        CHECK(r.subjobs == subjobs);
        CHECK(r.edges == edges);
    }
}

TEST_CASE("single-subjob graph yields one realization") {
    ConditionalDag dag;
    dag.nodes.push_back({1, NodeKind::subjob, 5.0, {}});
    const std::vector<DagRealization> rs = enumerate_realizations(dag);
    REQUIRE(rs.size() == 1);
    CHECK(rs[0].probability == 1.0);
    CHECK(rs[0].volume == 5.0);
    CHECK(rs[0].length == 5.0);
}

TEST_CASE("enumeration rejects invalid graphs") {
    ConditionalDag dag;
    dag.nodes.push_back({1, NodeKind::subjob, -1.0, {}});
    CHECK_THROWS_AS(enumerate_realizations(dag), std::invalid_argument);
}

TEST_CASE("nested conditions resolve recursively") {
    // Condition 2 chooses between subjob 3 and condition 4, which in turn
    // chooses between subjobs 5 and 6; node 7 joins every variant.
    ConditionalDag dag;
    dag.nodes.push_back({1, NodeKind::subjob, 1.0, {}});
    dag.nodes.push_back({2, NodeKind::condition, 0.0, {{0.5, 3}, {0.5, 4}}});
    dag.nodes.push_back({3, NodeKind::subjob, 2.0, {}});
    dag.nodes.push_back({4, NodeKind::condition, 0.0, {{0.25, 5}, {0.75, 6}}});
    dag.nodes.push_back({5, NodeKind::subjob, 4.0, {}});
    dag.nodes.push_back({6, NodeKind::subjob, 8.0, {}});
    dag.nodes.push_back({7, NodeKind::subjob, 1.0, {}});
    dag.edges = {{1, 2}, {2, 7}};

    const std::vector<DagRealization> rs = enumerate_realizations(dag);
    REQUIRE(rs.size() == 3);
    CHECK(rs[0].probability == doctest::Approx(0.5).epsilon(1e-12));    // -> 3
    CHECK(rs[1].probability == doctest::Approx(0.125).epsilon(1e-12));  // -> 4 -> 5
    CHECK(rs[2].probability == doctest::Approx(0.375).epsilon(1e-12));  // -> 4 -> 6
    CHECK(rs[0].volume == 4.0);
    CHECK(rs[1].volume == 6.0);
    CHECK(rs[2].volume == 10.0);
    // The contracted edges keep the chain 1 -> chosen -> 7 intact.
    CHECK(rs[2].length == 10.0);
    double total = 0.0;
    for (const DagRealization& r : rs) total += r.probability;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a condition's successor must come after every possible landing") {
    // Condition 1 picks subjob 3 or 4 and feeds node Z; placing Z between
    // the two targets lets one choice order Z both before and after the
    // landed subjob, which validation must reject.
    ConditionalDag dag;
    dag.nodes.push_back({1, NodeKind::condition, 0.0, {{0.5, 3}, {0.5, 4}}});
    dag.nodes.push_back({2, NodeKind::subjob, 1.0, {}});  // Z
    dag.nodes.push_back({3, NodeKind::subjob, 2.0, {}});
    dag.nodes.push_back({4, NodeKind::subjob, 3.0, {}});
    dag.edges = {{1, 2}, {2, 3}};  // Z precedes target 3, but waits for the landing
    bool found = false;
    for (const Violation& v : validate(dag)) found |= v.rule == 11;
    CHECK(found);

    // With Z strictly after both targets the graph is fine and contraction
    // keeps the chain through the landed subjob.
    ConditionalDag ok;
    ok.nodes.push_back({1, NodeKind::condition, 0.0, {{0.5, 2}, {0.5, 3}}});
    ok.nodes.push_back({2, NodeKind::subjob, 2.0, {}});
    ok.nodes.push_back({3, NodeKind::subjob, 3.0, {}});
    ok.nodes.push_back({4, NodeKind::subjob, 1.0, {}});
    ok.edges = {{1, 4}};
    CHECK(validate(ok).empty());
    const std::vector<DagRealization> rs = enumerate_realizations(ok);
    REQUIRE(rs.size() == 2);
    CHECK(rs[0].edges == std::vector<Edge>{{2, 4}});
    CHECK(rs[0].length == 3.0);  // 2 then 1
    CHECK(rs[1].edges == std::vector<Edge>{{3, 4}});
    CHECK(rs[1].length == 4.0);  // 3 then 1
}

TEST_CASE("longest_path handles chains and rejects cycles") {
    CHECK(longest_path({{1, 7.0}}, {}) == 7.0);
    CHECK(longest_path({{1, 3.0}, {2, 1.0}, {3, 2.0}}, {{1, 3}, {3, 2}}) == 6.0);
    CHECK_THROWS_AS(longest_path({{1, 1.0}, {2, 1.0}}, {{1, 2}, {2, 1}}),
                    std::invalid_argument);

    // Worked instance from the example graph.
    const std::vector<std::pair<NodeId, double>> subjobs = {
        {1, 3.0}, {2, 1.0}, {4, 1.0}, {6, 5.0}, {7, 3.0}};
    const std::vector<Edge> edges = {{1, 2}, {1, 4}, {2, 6}, {4, 6}, {6, 7}};
    CHECK(longest_path(subjobs, edges) == 12.0);
}

TEST_CASE("random graphs: probabilities sum to one and metrics are consistent") {
    testutil::Rng rng(20240817);
    for (int iter = 0; iter < 200; ++iter) {
        const ConditionalDag dag = testutil::random_conditional_dag(rng);
        REQUIRE(validate(dag).empty());
        const std::vector<DagRealization> rs = enumerate_realizations(dag);
        REQUIRE(!rs.empty());

        double total = 0.0;
        for (const DagRealization& r : rs) {
            total += r.probability;
            double volume = 0.0;
            for (const auto& [id, t] : r.subjobs) volume += t;
            CHECK(r.volume == doctest::Approx(volume).epsilon(1e-12));
            CHECK(r.length <= r.volume + 1e-9);
            CHECK(r.length ==
                  doctest::Approx(testutil::exhaustive_longest_path(r.subjobs, r.edges))
                      .epsilon(1e-12));
        }
        CHECK(std::abs(total - 1.0) <= 1e-9);

        // Deterministic: a second enumeration is identical.
        const std::vector<DagRealization> again = enumerate_realizations(dag);
        REQUIRE(again.size() == rs.size());
        for (std::size_t i = 0; i < rs.size(); ++i) {
            CHECK(again[i].probability == rs[i].probability);
            CHECK(again[i].subjobs == rs[i].subjobs);
            CHECK(again[i].edges == rs[i].edges);
        }
    }
}

TEST_CASE("realization count is the product of branch counts without nesting") {
    testutil::Rng rng(7);
    int checked = 0;
    for (int iter = 0; iter < 100 && checked < 40; ++iter) {
        const ConditionalDag dag = testutil::random_conditional_dag(rng);
        bool nested = false;
        std::size_t expected = 1;
        for (const Node& n : dag.nodes) {
            if (n.kind != NodeKind::condition) continue;
            expected *= n.branches.size();
            for (const Branch& b : n.branches) {
                const Node* t = dag.find(b.target);
                nested |= t && t->kind == NodeKind::condition;
            }
        }
        if (nested) continue;
        ++checked;
        CHECK(enumerate_realizations(dag).size() == expected);
    }
    CHECK(checked > 0);
}

TEST_CASE("removing an edge never increases the longest path") {
    testutil::Rng rng(99);
    for (int iter = 0; iter < 50; ++iter) {
        const ConditionalDag dag = testutil::random_conditional_dag(rng);
        for (const DagRealization& r : enumerate_realizations(dag)) {
            for (std::size_t drop = 0; drop < r.edges.size(); ++drop) {
                std::vector<Edge> pruned = r.edges;
                pruned.erase(pruned.begin() + drop);
                CHECK(longest_path(r.subjobs, pruned) <= r.length + 1e-12);
            }
        }
    }
}
