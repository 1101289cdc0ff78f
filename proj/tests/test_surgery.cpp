#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "f1z/surgery.hpp"
#include "support/test_util.hpp"

using namespace f1z;
using testutil::load_graph;

TEST_CASE("whole-graph interpolation degree bounds") {
    REQUIRE(class_degree_bound(load_graph("path3.lg")) == 2);
    REQUIRE(class_degree_bound(load_graph("k4.lg")) == 3);
    REQUIRE(class_degree_bound(load_graph("free_edge.lg")) == 1);
    REQUIRE(class_degree_bound(load_graph("empty.lg")) == 0);
    REQUIRE(class_degree_bound(load_graph("wtwohalf.lg")) == 4);
    REQUIRE(class_degree_bound(load_graph("isolated.lg")) == 0);
}

TEST_CASE("re-attachment windows") {
    auto tri = load_graph("triangle.lg");
    REQUIRE(local_window(tri, "a", "c") == std::vector<std::string>{"a", "b", "c"});

    auto p5 = load_graph("path5.lg");
    REQUIRE(local_window(p5, "b", "c") == std::vector<std::string>{"a", "b", "c", "d"});

    auto k4 = load_graph("k4.lg");
    REQUIRE(local_window(k4, "a", "b") == std::vector<std::string>{"a", "b", "c", "d"});

    auto w = load_graph("wtwohalf.lg");
    REQUIRE(local_window(w, "a", "w") ==
            std::vector<std::string>{"a", "c", "w", "w.0", "w.1"});

    REQUIRE_THROWS_AS(local_window(p5, "a", "c"), std::invalid_argument);
}

TEST_CASE("re-attachment delta for the triangle chord") {
    auto tri = load_graph("triangle.lg");
    auto cut = resolve_edge(tri, "b", "c");
    auto r = pap_delta_detail(tri, cut, "b", "c");

    ClassPolynomial want;
    want.set(2, -2);
    want.set(1, 3);
    want.set(0, -1);
    REQUIRE(r.delta == want);
    REQUIRE(r.delta.evaluate(2) == -3);  // 7 member points vs 10 in the cut graph
    REQUIRE(r.degree_bound == 2);
    REQUIRE(r.primes_used == std::vector<std::int64_t>{2, 3, 5, 7});
    REQUIRE(r.window == std::vector<std::string>{"a", "b", "c"});

    // The resolved model must actually be the resolution of the attached one.
    REQUIRE_THROWS_AS(pap_delta_detail(tri, load_graph("path3.lg"), "b", "c"),
                      std::invalid_argument);
}

TEST_CASE("surgery on complete graphs recovers projective space") {
    auto tri = surgery_class(load_graph("triangle.lg"));
    REQUIRE(tri.final_class == projective_class(2));
    REQUIRE(tri.steps.size() == 1);
    ClassPolynomial tri_stage;  // one chord resolved: path plus two half edges
    tri_stage.set(2, 3);
    tri_stage.set(1, -2);
    tri_stage.set(0, 2);
    REQUIRE(tri.steps[0].before == tri_stage);
    REQUIRE(tri.steps[0].after == projective_class(2));
    REQUIRE(tri.steps[0].after == tri.steps[0].before + tri.steps[0].delta);

    auto k4 = surgery_class(load_graph("k4.lg"));
    REQUIRE(k4.final_class == projective_class(3));
    REQUIRE(k4.steps.size() == 3);

    auto k5 = surgery_class(load_graph("k5.lg"));
    REQUIRE(k5.final_class == projective_class(4));
    REQUIRE(k5.steps.size() == 6);
}

TEST_CASE("surgery stage classes count points of the staged models") {
    // Walk the K4 surgery: every intermediate class must match a direct
    // point count of the partially resolved graph at q = 2 and 3.
    auto g = load_graph("k4.lg");
    auto sel = spanning_loose_tree(g);
    auto trace = surgery_class(g);

    std::vector<LooseGraph> stages{g};
    for (const auto& c : sel.chords)
        stages.push_back(resolve_edge(stages.back(), c.first, c.second));
    // steps run in reverse chord order; step i re-attaches chord k-1-i,
    // turning stages[k-i] into stages[k-1-i].
    std::size_t k = sel.chords.size();
    REQUIRE(trace.steps.size() == k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto& step = trace.steps[i];
        REQUIRE(step.edge == sel.chords[k - 1 - i]);
        for (std::int64_t q : {2, 3}) {
            INFO("step " << i << " q=" << q);
            REQUIRE(step.before.evaluate(q) ==
                    count_points(build_ambient(stages[k - i]), q));
            REQUIRE(step.after.evaluate(q) ==
                    count_points(build_ambient(stages[k - 1 - i]), q));
        }
    }
    REQUIRE(trace.steps.back().after == trace.final_class);
    REQUIRE(trace.final_class.evaluate(2) == 15);
}

TEST_CASE("surgery on sparse cyclic graphs") {
    auto c4 = surgery_class(load_graph("c4.lg"));
    ClassPolynomial c4_class;
    c4_class.set(2, 4);
    c4_class.set(1, -4);
    c4_class.set(0, 4);
    REQUIRE(c4.final_class == c4_class);
    REQUIRE(c4.steps.size() == 1);
    ClassPolynomial c4_stage;
    c4_stage.set(2, 4);
    c4_stage.set(1, -3);
    c4_stage.set(0, 3);
    REQUIRE(c4.steps[0].before == c4_stage);
    ClassPolynomial c4_delta;
    c4_delta.set(1, -1);
    c4_delta.set(0, 1);
    REQUIRE(c4.steps[0].delta == c4_delta);

    auto dia = surgery_class(load_graph("diamond.lg"));
    ClassPolynomial dia_class;
    dia_class.set(3, 1);
    dia_class.set(2, 1);
    dia_class.set(0, 2);
    REQUIRE(dia.final_class == dia_class);
    REQUIRE(dia.steps.size() == 2);
}

TEST_CASE("surgery telescopes") {
    for (const char* name : {"triangle.lg", "c4.lg", "diamond.lg", "k4.lg"}) {
        auto trace = surgery_class(load_graph(name));
        INFO(name);
        ClassPolynomial acc = trace.steps.front().before;
        for (const auto& step : trace.steps) {
            REQUIRE(step.before + step.delta == step.after);
            acc += step.delta;
        }
        REQUIRE(acc == trace.final_class);
    }
}

TEST_CASE("tree inputs need no surgery steps") {
    for (const char* name : {"path4.lg", "star3.lg", "spider.lg", "wtwohalf.lg"}) {
        auto g = load_graph(name);
        auto trace = surgery_class(g);
        INFO(name);
        REQUIRE(trace.steps.empty());
        REQUIRE(trace.final_class == tree_class(g));
    }
}

TEST_CASE("the class is independent of the spanning tree") {
    REQUIRE(verify_spanning_tree_independence(load_graph("triangle.lg")));
    REQUIRE(verify_spanning_tree_independence(load_graph("c4.lg")));
    REQUIRE(verify_spanning_tree_independence(load_graph("diamond.lg")));
    REQUIRE(verify_spanning_tree_independence(load_graph("k4.lg")));
    REQUIRE(verify_spanning_tree_independence(load_graph("path4.lg")));  // vacuous

    try {
        verify_spanning_tree_independence(load_graph("k5.lg"));
        FAIL("expected a budget refusal");
    } catch (const BudgetError& e) {
        REQUIRE(e.required() > 100);
    }
    REQUIRE_THROWS_AS(verify_spanning_tree_independence(load_graph("two_components.lg")),
                      std::invalid_argument);
}

TEST_CASE("classes of disconnected and loose graphs") {
    REQUIRE(graph_class(load_graph("empty.lg")).is_zero());
    REQUIRE(graph_class(load_graph("isolated.lg")) == ClassPolynomial::constant(1));

    ClassPolynomial two;
    two.set(1, 2);
    two.set(0, 2);
    REQUIRE(graph_class(load_graph("two_components.lg")) == two);

    ClassPolynomial mixed;  // an edge with a half edge, plus a free edge
    mixed.set(2, 1);
    mixed.set(1, 1);
    REQUIRE(graph_class(load_graph("loose_mixed.lg")) == mixed);

    auto parts = graph_classes(load_graph("loose_mixed.lg"));
    REQUIRE(parts.size() == 2);
    REQUIRE(parts[1].cls == gm_class());

    REQUIRE(graph_class(load_graph("free_edge.lg")) == gm_class());
    REQUIRE(graph_class(load_graph("k4.lg")) == projective_class(3));
}

TEST_CASE("re-attachment deltas are local") {
    // Each step's delta, computed inside its window, must equal the
    // difference of full point counts of the two staged graphs.
    auto g = load_graph("diamond.lg");
    auto sel = spanning_loose_tree(g);
    auto trace = surgery_class(g);
    std::vector<LooseGraph> stages{g};
    for (const auto& c : sel.chords)
        stages.push_back(resolve_edge(stages.back(), c.first, c.second));
    std::size_t k = sel.chords.size();
    for (std::size_t i = 0; i < k; ++i) {
        for (std::int64_t q : {2, 3}) {
            auto with = count_points(build_ambient(stages[k - 1 - i]), q);
            auto without = count_points(build_ambient(stages[k - i]), q);
            INFO("step " << i << " q=" << q);
            REQUIRE(trace.steps[i].delta.evaluate(q) == with - without);
        }
    }
}

TEST_CASE("surgery runs are deterministic") {
    for (const char* name : {"k4.lg", "diamond.lg"}) {
        auto a = surgery_class(load_graph(name));
        auto b = surgery_class(load_graph(name));
        REQUIRE(a.final_class == b.final_class);
        REQUIRE(a.steps.size() == b.steps.size());
        for (std::size_t i = 0; i < a.steps.size(); ++i) {
            REQUIRE(a.steps[i].edge == b.steps[i].edge);
            REQUIRE(a.steps[i].window == b.steps[i].window);
            REQUIRE(a.steps[i].delta == b.steps[i].delta);
        }
    }
}

TEST_CASE("surgery honors enumeration budgets") {
    REQUIRE_THROWS_AS(surgery_class(load_graph("k5.lg"), {}, 5), BudgetError);
}

TEST_CASE("explicit sample primes") {
    auto tri = load_graph("triangle.lg");
    auto cut = resolve_edge(tri, "b", "c");
    auto r = pap_delta_detail(tri, cut, "b", "c", {3, 5, 7, 11});
    REQUIRE(r.primes_used == std::vector<std::int64_t>{3, 5, 7, 11});
    ClassPolynomial want;
    want.set(2, -2);
    want.set(1, 3);
    want.set(0, -1);
    REQUIRE(r.delta == want);

    REQUIRE_THROWS_AS(pap_delta_detail(tri, cut, "b", "c", {2, 3}), std::invalid_argument);
    REQUIRE_THROWS_AS(pap_delta_detail(tri, cut, "b", "c", {4, 6, 8, 9}),
                      std::invalid_argument);
}
