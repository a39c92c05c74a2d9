#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "ttrack/irtt.hpp"
#include "ttrack/power.hpp"

using namespace ttrack;

namespace {

const ClauseResult* find_clause(const IrttReport& rep, const std::string& name) {
    for (const ClauseResult& c : rep.clauses)
        if (c.name == name) return &c;
    return nullptr;
}

}  // namespace

TEST_CASE("the bundled train track maps pass the battery") {
    for (const char* name :
         {"example2.ttm", "idrose2.ttm", "linear.ttm", "linear_gep.ttm", "torus.ttm",
          "multivertex.ttm"}) {
        GraphMap f = oracles::load_map(name);
        IrttReport rep = verify_irtt(f);
        INFO(name);
        CHECK(rep.exact_pass());
        CHECK(rep.all_pass());
        CHECK_FALSE(rep.capped);
    }
}

TEST_CASE("the broken map fails with a witness naming the clause") {
    GraphMap f = oracles::load_map("broken_ne2.ttm");
    IrttReport rep = verify_irtt(f);
    CHECK_FALSE(rep.exact_pass());
    const ClauseResult* c = find_clause(rep, "parabolic-prefix-form");
    REQUIRE(c != nullptr);
    CHECK_FALSE(c->pass);
    CHECK(c->witness.find("E2") != std::string::npos);
}

TEST_CASE("the golden substitution has an honest period-two obstruction") {
    GraphMap fib = oracles::load_map("fib.ttm");
    IrttReport rep = verify_irtt(fib);
    CHECK(rep.exact_pass());  // the exact clauses hold
    const ClauseResult* c = find_clause(rep, "nielsen-period-one");
    REQUIRE(c != nullptr);
    CHECK(c->bounded);
    CHECK_FALSE(c->pass);  // f# swaps ~a ~b a b with ~b ~a b a
    CHECK(c->witness.find("period 2") != std::string::npos);
}

TEST_CASE("derivative closure and legality clauses respond to damage") {
    // x's reversal leaves the top stratum under the derivative
    GraphMap bad = load_ttm_string(
        "edge a v v\nedge b v v\nedge x v v\nedge y v v\n"
        "map a = a\nmap b = a\nmap x = x y a\nmap y = y x b\n");
    IrttReport rep = verify_irtt(bad);
    const ClauseResult* rtti = find_clause(rep, "rtt-i-stratum-derivative-closed");
    REQUIRE(rtti != nullptr);
    CHECK_FALSE(rtti->pass);
}

TEST_CASE("rank collapse in a lower component is caught structurally") {
    // a and b span a rank-two component, but b is mapped onto a, so the
    // image subgroup has rank one
    GraphMap bad = load_ttm_string(
        "edge a v v\nedge b v v\nedge x v v\nedge y v v\n"
        "map a = a\nmap b = a\nmap x = x y a\nmap y = y x b\n");
    IrttReport rep = verify_irtt(bad);
    const ClauseResult* rttii = find_clause(rep, "rtt-ii-lower-rank-preserved");
    REQUIRE(rttii != nullptr);
    CHECK(rttii->bounded);
    CHECK_FALSE(rttii->pass);
    CHECK(rttii->witness.find("rank") != std::string::npos);
}

TEST_CASE("rank preservation passes on the bundled two-vertex map") {
    GraphMap f = oracles::load_map("multivertex.ttm");
    IrttReport rep = verify_irtt(f);
    const ClauseResult* rttii = find_clause(rep, "rtt-ii-lower-rank-preserved");
    REQUIRE(rttii != nullptr);
    CHECK(rttii->pass);
}

TEST_CASE("a conjugate suffix breaks the prefix splitting and is caught") {
    GraphMap old = load_ttm_string(
        "edge A u u\nedge c u w\nedge B w w\n"
        "map A = A\nmap c = c\nmap B = B ~c A c\n");
    IrttReport rep = verify_irtt(old);
    const ClauseResult* c = find_clause(rep, "parabolic-prefix-splitting");
    REQUIRE(c != nullptr);
    CHECK(c->bounded);
    CHECK_FALSE(c->pass);
    CHECK(c->witness.find("cancels at the junction") != std::string::npos);
    // likewise a Nielsen suffix that starts and ends with inverse edges
    // cancels against its own next copy
    GraphMap deep = load_ttm_string(
        "edge a v v\nedge E v v\nedge D v v\n"
        "map a = a\nmap E = E a\nmap D = D E a ~E\n");
    IrttReport drep = verify_irtt(deep);
    const ClauseResult* dc = find_clause(drep, "parabolic-prefix-splitting");
    REQUIRE(dc != nullptr);
    CHECK_FALSE(dc->pass);
}

TEST_CASE("zero strata must sit under exponential ones") {
    GraphMap bad = load_ttm_string("edge c v v\nedge z v v\nmap c = c\nmap z = c c\n");
    IrttReport rep = verify_irtt(bad);
    const ClauseResult* zi = find_clause(rep, "zero-followed-by-exponential");
    REQUIRE(zi != nullptr);
    CHECK(zi->applicable);
    CHECK_FALSE(zi->pass);
}

TEST_CASE("power search on the bundled maps") {
    CHECK(find_power_k1(oracles::load_map("example2.ttm")).k1 == 1);
    CHECK(find_power_k1(oracles::load_map("idrose2.ttm")).k1 == 1);
    CHECK(find_power_k1(oracles::load_map("linear.ttm")).k1 == 1);
    CHECK(find_power_k1(oracles::load_map("multivertex.ttm")).k1 == 1);
    PowerReport torus = find_power_k1(oracles::load_map("torus.ttm"));
    CHECK(torus.k1 == 2);
    CHECK(torus.rejected == std::vector<int>{1});
}

TEST_CASE("an edge shorter than the Nielsen path forces a bigger power") {
    // |f(a)| = 2 while the stratum carries the length-four Nielsen path, so
    // the first power cannot satisfy the outgrowth clause
    GraphMap torus = oracles::load_map("torus.ttm");
    NielsenInventory inv = enumerate_nielsen(torus, 6);
    REQUIRE(inv.members.size() == 1);
    CHECK(inv.members[0].path.size() == 4);
    EdgePath a{{OrientedEdge::forward(torus.graph().edge_index("a"))}, 0};
    CHECK(torus.f_sharp_pow(a, 1).size() == 2);
    CHECK(torus.f_sharp_pow(a, 2).size() > 4);
    PowerReport rep = find_power_k1(torus);
    bool saw_outgrowth = false;
    for (const PowerClauseInstance& inst : rep.instances)
        if (inst.clause == "edge-outgrows-nielsen") {
            saw_outgrowth = true;
            CHECK(inst.pass);
        }
    CHECK(saw_outgrowth);
}

TEST_CASE("bracket-form Nielsen paths inside linear images push the power up") {
    GraphMap nest = oracles::load_map("nest.ttm");
    CHECK(verify_irtt(nest).all_pass());
    PowerReport rep = find_power_k1(nest);
    CHECK(rep.k1 == 3);
    CHECK(rep.rejected == std::vector<int>{1, 2});
    bool saw_bracket = false;
    for (const PowerClauseInstance& inst : rep.instances)
        if (inst.clause.rfind("bracket-", 0) == 0) {
            saw_bracket = true;
            CHECK(inst.pass);
        }
    CHECK(saw_bracket);
}

TEST_CASE("power search caps are reported as errors") {
    GraphMap torus = oracles::load_map("torus.ttm");
    Caps caps;
    caps.power_cap = 1;
    try {
        find_power_k1(torus, caps);
        FAIL("expected CapExceeded");
    } catch (const error& e) {
        CHECK(e.code() == errc::cap_exceeded);
    }
    Caps tiny;
    tiny.node_budget = 100;
    try {
        find_power_k1(torus, tiny);
        FAIL("expected MissingInventory");
    } catch (const error& e) {
        CHECK(e.code() == errc::missing_inventory);
    }
}

TEST_CASE("exceptional-path parses used by the power clauses") {
    GraphMap nest = oracles::load_map("nest.ttm");
    auto table = linear_edge_table(nest);
    EdgePath sigma = parse_path(nest.graph(), "E a ~E");
    auto ep = parse_exceptional(nest, table, sigma);
    REQUIRE(ep);
    CHECK(nest.graph().edge(ep->edge_i).name == "E");
    CHECK(nest.graph().edge(ep->edge_j).name == "E");
    CHECK(ep->reps == 1);
    CHECK_FALSE(parse_exceptional(nest, table, parse_path(nest.graph(), "E a")));
}
