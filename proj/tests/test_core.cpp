#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "ttrack/path.hpp"
#include "ttrack/ttm_io.hpp"

using namespace ttrack;

TEST_CASE("path literals parse and print") {
    GraphMap f = oracles::load_map("example2.ttm");
    const MarkedGraph& g = f.graph();

    EdgePath p = parse_path(g, "E3 E2 ~E1");
    REQUIRE(p.size() == 3);
    CHECK(format_path(g, p) == "E3 E2 ~E1");
    CHECK(g.token(p.letters[2]) == "~E1");

    EdgePath empty = parse_path(g, "");
    CHECK(empty.empty());
    CHECK(initial_vertex(g, empty) == g.basepoint());

    GraphMap mv = oracles::load_map("multivertex.ttm");
    EdgePath at_base = parse_path(mv.graph(), "");
    CHECK(initial_vertex(mv.graph(), at_base) == mv.graph().vertex_id("u"));

    EdgePath untight = parse_path(g, "E1 ~E1");
    CHECK(untight.size() == 2);  // parsing does not tighten
    CHECK_FALSE(is_tight(untight));

    CHECK_THROWS_AS(parse_path(g, "E9"), error);
    try {
        parse_path(g, "E9");
    } catch (const error& e) {
        CHECK(e.code() == errc::unknown_edge);
    }
}

TEST_CASE("incidence is validated on non-rose graphs") {
    GraphMap f = oracles::load_map("multivertex.ttm");
    const MarkedGraph& g = f.graph();
    CHECK_NOTHROW(parse_path(g, "c D"));
    CHECK_NOTHROW(parse_path(g, "A c"));
    try {
        parse_path(g, "c c");
        FAIL("expected NotIncident");
    } catch (const error& e) {
        CHECK(e.code() == errc::not_incident);
    }
}

TEST_CASE("tighten performs free reduction") {
    GraphMap f = oracles::load_map("example2.ttm");
    const MarkedGraph& g = f.graph();

    EdgePath w = parse_path(g, "E3 ~E1 ~E2 E2 E1 ~E1");
    CHECK(format_path(g, tighten(w)) == "E3 ~E1");

    EdgePath t = parse_path(g, "E3 ~E1");
    CHECK(tighten(t) == t);  // idempotent on tight paths
    CHECK(tighten(tighten(w)) == tighten(w));

    EdgePath full = parse_path(g, "E1 ~E1");
    EdgePath reduced = tighten(full);
    CHECK(reduced.empty());
    CHECK(initial_vertex(g, reduced) == initial_vertex(g, full));
}

TEST_CASE("concat is raw concatenation") {
    GraphMap f = oracles::load_map("example2.ttm");
    const MarkedGraph& g = f.graph();
    EdgePath a = parse_path(g, "E2");
    EdgePath b = parse_path(g, "E1");
    CHECK(format_path(g, concat(g, a, b)) == "E2 E1");
    EdgePath ab = concat(g, parse_path(g, "E1"), parse_path(g, "~E1"));
    CHECK(ab.size() == 2);  // concat does not tighten
    EdgePath e = empty_path_at(g.basepoint());
    CHECK(concat(g, e, a) == a);

    GraphMap mv = oracles::load_map("multivertex.ttm");
    try {
        concat(mv.graph(), parse_path(mv.graph(), "c"), parse_path(mv.graph(), "c"));
        FAIL("expected NotIncident");
    } catch (const error& err) {
        CHECK(err.code() == errc::not_incident);
    }
}

TEST_CASE("sub edge-paths enumerate by start then length") {
    GraphMap f = oracles::load_map("example2.ttm");
    const MarkedGraph& g = f.graph();
    EdgePath p = parse_path(g, "E3 ~E1");
    auto subs = sub_edge_paths(p);
    REQUIRE(subs.size() == 3);
    CHECK(format_path(g, subs[0]) == "E3");
    CHECK(format_path(g, subs[1]) == "E3 ~E1");
    CHECK(format_path(g, subs[2]) == "~E1");

    auto single = sub_edge_paths(parse_path(g, "E1"));
    REQUIRE(single.size() == 1);

    auto capped = sub_edge_paths(parse_path(g, "E3 E2 ~E1"), 2);
    CHECK(capped.size() == 5);  // three singles and two pairs
    for (const EdgePath& sp : capped) CHECK(sp.size() <= 2);

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        EdgePath q = oracles::random_tight_path(g, 1 + rng() % 9, rng);
        std::size_t n = q.size();
        CHECK(sub_edge_paths(q).size() == n * (n + 1) / 2);
        for (const EdgePath& sp : sub_edge_paths(q)) CHECK(is_tight(sp));
    }
}

TEST_CASE("tighten agrees with the randomized-order reducer") {
    std::mt19937_64 rng(20240817);
    for (const char* name : {"example2.ttm", "fib.ttm", "multivertex.ttm"}) {
        GraphMap f = oracles::load_map(name);
        const MarkedGraph& g = f.graph();
        for (int trial = 0; trial < 500; ++trial) {
            EdgePath w = oracles::random_walk(g, rng() % 64, rng);
            EdgePath expect = oracles::randomized_reduce(w, rng);
            CHECK(tighten(w) == expect);
        }
    }
}

TEST_CASE("tighten algebra") {
    std::mt19937_64 rng(99);
    GraphMap f = oracles::load_map("example2.ttm");
    const MarkedGraph& g = f.graph();
    for (int trial = 0; trial < 200; ++trial) {
        EdgePath p = oracles::random_tight_path(g, rng() % 12, rng);
        // p . reverse(p) dies
        EdgePath loopback = tighten(concat(g, p, reverse_path(g, p)));
        CHECK(loopback.empty());
        // reverse and tighten commute
        EdgePath w = oracles::random_walk(g, rng() % 24, rng);
        CHECK(reverse_path(g, tighten(w)) == tighten(reverse_path(g, w)));
        // length parity is preserved
        CHECK(tighten(w).size() % 2 == w.size() % 2);
    }
}

TEST_CASE("reversal is an involution and swaps endpoints") {
    GraphMap f = oracles::load_map("multivertex.ttm");
    const MarkedGraph& g = f.graph();
    for (OrientedEdge e : g.all_oriented()) {
        CHECK(e.reversal().reversal() == e);
        CHECK(e.reversal() != e);
        CHECK(g.initial(e.reversal()) == g.terminal(e));
        CHECK(g.terminal(e.reversal()) == g.initial(e));
    }
    EdgePath p = parse_path(g, "A c D");
    EdgePath r = reverse_path(g, p);
    CHECK(initial_vertex(g, r) == terminal_vertex(g, p));
    CHECK(terminal_vertex(g, r) == initial_vertex(g, p));
}
