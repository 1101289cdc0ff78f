#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "f1z/ambient.hpp"
#include "support/ie_count.hpp"
#include "support/test_util.hpp"

using namespace f1z;
using testutil::load_graph;

TEST_CASE("ambient model construction") {
    auto path3 = build_ambient(load_graph("path3.lg"));
    REQUIRE(path3.coords == std::vector<std::string>{"a", "b", "c"});
    REQUIRE(path3.n_real == 3);
    REQUIRE(path3.dim() == 2);
    REQUIRE(support_labels(path3, "b") == std::vector<std::string>{"a", "b", "c"});
    REQUIRE(support_labels(path3, "a") == std::vector<std::string>{"a", "b"});
    REQUIRE(path3.free_pairs.empty());

    auto fe = build_ambient(load_graph("free_edge.lg"));
    REQUIRE(fe.coords == std::vector<std::string>{"~0.0", "~0.1"});
    REQUIRE(fe.n_real == 0);
    REQUIRE(fe.free_pairs.size() == 1);

    auto tri = load_graph("triangle.lg");
    auto resolved = build_ambient(resolve_edge(tri, "a", "c"));
    REQUIRE(resolved.coords == std::vector<std::string>{"a", "b", "c", "a.0", "c.0"});

    REQUIRE_THROWS_AS(support_labels(path3, "z"), std::invalid_argument);
    REQUIRE_THROWS_AS(support_labels(resolved, "a.0"), std::invalid_argument);
}

TEST_CASE("ambient models beyond 64 coordinates are refused") {
    std::string src;
    for (int i = 0; i < 33; ++i) src += "f\n";
    REQUIRE_THROWS_AS(build_ambient(parse_lg(src)), std::invalid_argument);
}

TEST_CASE("projective point normalization") {
    auto p = ProjPoint::make(3, {2, 1});
    REQUIRE(p.coords == std::vector<int>{1, 2});
    auto r = ProjPoint::make(5, {0, 3, 4});
    REQUIRE(r.coords == std::vector<int>{0, 1, 3});
    REQUIRE(ProjPoint::make(2, {0, 1, 1}) == ProjPoint::make(2, {0, 1, 1}));
    REQUIRE_THROWS_AS(ProjPoint::make(3, {0, 0}), std::invalid_argument);
}

TEST_CASE("membership predicate") {
    auto path3 = build_ambient(load_graph("path3.lg"));
    REQUIRE(member(path3, ProjPoint::make(2, {1, 1, 0})));
    REQUIRE(member(path3, ProjPoint::make(2, {0, 1, 0})));
    REQUIRE_FALSE(member(path3, ProjPoint::make(2, {1, 0, 1})));

    auto fe = build_ambient(load_graph("free_edge.lg"));
    REQUIRE(member(fe, ProjPoint::make(2, {1, 1})));
    REQUIRE_FALSE(member(fe, ProjPoint::make(2, {1, 0})));
    REQUIRE_FALSE(member(fe, ProjPoint::make(2, {0, 1})));

    REQUIRE_THROWS_AS(member(path3, ProjPoint::make(2, {1, 1})), std::invalid_argument);
}

TEST_CASE("point counts over small fields") {
    auto count = [](const char* file, std::int64_t q) {
        return count_points(build_ambient(load_graph(file)), q);
    };
    REQUIRE(count("path3.lg", 2) == 6);
    REQUIRE(count("path3.lg", 3) == 11);
    REQUIRE(count("path3.lg", 5) == 27);
    REQUIRE(count("triangle.lg", 2) == 7);
    REQUIRE(count("triangle.lg", 3) == 13);
    REQUIRE(count("free_edge.lg", 2) == 1);
    REQUIRE(count("free_edge.lg", 5) == 4);
    REQUIRE(count("k4.lg", 2) == 15);
    REQUIRE(count("k5.lg", 2) == 31);
    REQUIRE(count("c4.lg", 2) == 12);
    REQUIRE(count("c4.lg", 3) == 28);
    REQUIRE(count("diamond.lg", 2) == 14);
    REQUIRE(count("path4.lg", 2) == 9);
    REQUIRE(count("path5.lg", 2) == 12);
    REQUIRE(count("wtwohalf.lg", 2) == 18);
    REQUIRE(count("star3.lg", 2) == 11);
    REQUIRE(count("star3.lg", 3) == 30);
    REQUIRE(count("half_path.lg", 2) == 8);
    REQUIRE(count("loose_mixed.lg", 2) == 6);
    REQUIRE(count("two_components.lg", 2) == 6);
    REQUIRE(count("empty.lg", 2) == 0);
    REQUIRE(count("isolated.lg", 2) == 1);
    REQUIRE_THROWS_AS(count("path3.lg", 4), std::invalid_argument);
}

TEST_CASE("windowed counts agree with full enumeration") {
    for (const char* name : {"path3.lg", "triangle.lg", "c4.lg", "diamond.lg", "star3.lg",
                             "half_path.lg", "wtwohalf.lg", "loose_mixed.lg"}) {
        auto m = build_ambient(load_graph(name));
        for (std::int64_t q : {2, 3}) {
            INFO(name << " q=" << q);
            REQUIRE(count_in_subspace(m, m.coords, q) == count_points(m, q));
        }
    }
}

TEST_CASE("windowed counts on proper windows") {
    auto tri = build_ambient(load_graph("triangle.lg"));
    REQUIRE(count_in_subspace(tri, {"a", "b"}, 2) == 3);
    REQUIRE(count_in_subspace(tri, {"a"}, 2) == 1);
    REQUIRE(count_in_subspace(tri, {}, 2) == 0);

    auto path3 = build_ambient(load_graph("path3.lg"));
    REQUIRE(count_in_subspace(path3, {"a", "c"}, 2) == 2);
    REQUIRE(count_in_subspace(path3, {"a", "b"}, 3) == 4);

    REQUIRE_THROWS_AS(count_in_subspace(path3, {"zz"}, 2), std::invalid_argument);
}

TEST_CASE("enumeration budgets are enforced") {
    auto k5 = build_ambient(load_graph("k5.lg"));
    try {
        count_points(k5, 2, 10);
        FAIL("expected a budget refusal");
    } catch (const BudgetError& e) {
        REQUIRE(e.required() > 10);
        REQUIRE(std::string(e.what()).find("required budget") != std::string::npos);
    }
    auto w = build_ambient(load_graph("wtwohalf.lg"));
    try {
        count_in_subspace(w, w.coords, 5, 10);
        FAIL("expected a budget refusal");
    } catch (const BudgetError& e) {
        REQUIRE(e.required() > 10);
    }
    // The same calls succeed with the default budget.
    REQUIRE(count_points(k5, 2) == 31);
    REQUIRE(count_in_subspace(w, w.coords, 5) == 627);
    REQUIRE(count_points(w, 5) == 627);
}

TEST_CASE("local pieces meet exactly along edges") {
    auto path3 = build_ambient(load_graph("path3.lg"));
    REQUIRE(local_intersection_nonempty(path3, "a", "b", 2));
    REQUIRE_FALSE(local_intersection_nonempty(path3, "a", "c", 2));

    auto k4 = build_ambient(load_graph("k4.lg"));
    for (std::string u : {"a", "b", "c", "d"})
        for (std::string v : {"a", "b", "c", "d"})
            if (u < v) REQUIRE(local_intersection_nonempty(k4, u, v, 2));

    REQUIRE_THROWS_AS(local_intersection_nonempty(path3, "a", "z", 2), std::invalid_argument);
    REQUIRE_THROWS_AS(local_intersection_nonempty(path3, "a", "a", 2), std::invalid_argument);
}

TEST_CASE("each vertex piece is an affine space of its degree") {
    for (const char* name : {"path4.lg", "star3.lg", "wtwohalf.lg"}) {
        auto g = load_graph(name);
        auto m = build_ambient(g);
        for (std::int64_t q : {2, 3}) {
            for (int v = 0; v < m.n_real; ++v) {
                std::int64_t piece = 0;
                detail::for_each_point_mask(detail::mask_positions(m.vertex_support[v]), q,
                                            [&](std::uint64_t mask) {
                                                if (mask >> v & 1) ++piece;
                                            });
                std::int64_t want = 1;
                for (int i = 0; i < g.degree(m.coords[v]); ++i) want *= q;
                INFO(name << " vertex " << m.coords[v] << " q=" << q);
                REQUIRE(piece == want);
            }
        }
    }
}

TEST_CASE("clique-supported masks are always members") {
    auto d = build_ambient(load_graph("diamond.lg"));
    auto idx = [&](const std::string& s) { return d.index.at(s); };
    std::uint64_t abc = 1ull << idx("a") | 1ull << idx("b") | 1ull << idx("c");
    std::uint64_t bcd = 1ull << idx("b") | 1ull << idx("c") | 1ull << idx("d");
    REQUIRE(d.member_mask(abc));
    REQUIRE(d.member_mask(bcd));
    REQUIRE_FALSE(d.member_mask(1ull << idx("a") | 1ull << idx("d")));

    // Complete graphs: every nonzero mask is a member.
    for (const char* name : {"triangle.lg", "k4.lg"}) {
        auto m = build_ambient(load_graph(name));
        for (std::uint64_t mask = 1; mask < (1ull << m.coords.size()); ++mask)
            REQUIRE(m.member_mask(mask));
    }
}

TEST_CASE("adding edges only grows the model") {
    auto grows = [](const char* small, const char* big) {
        auto a = build_ambient(load_graph(small));
        auto b = build_ambient(load_graph(big));
        REQUIRE(a.coords == b.coords);
        for (std::uint64_t mask = 1; mask < (1ull << a.coords.size()); ++mask)
            if (a.member_mask(mask)) REQUIRE(b.member_mask(mask));
    };
    grows("path3.lg", "triangle.lg");
    grows("path4.lg", "c4.lg");
    grows("diamond.lg", "k4.lg");
}

TEST_CASE("inclusion-exclusion oracle matches direct enumeration") {
    for (const char* name : {"path3.lg", "triangle.lg", "c4.lg", "diamond.lg", "k4.lg",
                             "star3.lg", "half_path.lg", "wtwohalf.lg", "loose_mixed.lg",
                             "free_edge.lg", "isolated.lg", "two_components.lg"}) {
        auto m = build_ambient(load_graph(name));
        for (std::int64_t q : {2, 3}) {
            INFO(name << " q=" << q);
            auto ie = testsupport::ie_count(m, q);
            REQUIRE(ie == count_points(m, q));
            REQUIRE(testsupport::ie_class(m).evaluate(q) == ie);
        }
    }
}
