#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "oracles.hpp"
#include "ttrack/beads.hpp"
#include "ttrack/refinements.hpp"

using namespace ttrack;

namespace {

BeadContext make_ctx(int J, const Caps& caps = {}) {
    BeadContext ctx;
    ctx.J = J;
    ctx.kmax = caps.kmax;
    ctx.k1_context = true;
    ctx.caps = caps;
    return ctx;
}

}  // namespace

TEST_CASE("entire nibbled futures agree with iterated sharp images") {
    GraphMap f = oracles::load_map("example2.ttm");
    const MarkedGraph& g = f.graph();
    EdgePath e3 = parse_path(g, "E3");
    auto traj = nibbled_trajectory(f, e3, 2, NibblePolicy::entire());
    REQUIRE(traj.size() == 3);
    CHECK(format_path(g, traj[2].path) == "E3 ~E1 ~E2 ~E1 ~E1 ~E2");
    for (std::size_t s = 0; s < traj.size(); ++s)
        CHECK(traj[s].path == f.f_sharp_pow(e3, static_cast<int>(s)));
    // step 0 is the path itself
    CHECK(traj[0].path == e3);
}

TEST_CASE("right-only nibbling of a growing exceptional path leaves its residue") {
    GraphMap lin = oracles::load_map("linear.ttm");
    const MarkedGraph& g = lin.graph();
    EdgePath gep = parse_path(g, "E ~a ~a ~F");
    auto traj = nibbled_trajectory(lin, gep, 1, NibblePolicy::right_only(1));
    REQUIRE(traj.size() == 2);
    CHECK(format_path(g, traj[1].path) == "E ~a ~a ~a");  // the transient residue
    auto pd = is_pep(lin, traj[1].path, true);
    CHECK(pd);
}

TEST_CASE("family forest traces never gain weight and drops land in seeds") {
    for (const char* name : {"example2.ttm", "linear_gep.ttm", "torus.ttm"}) {
        GraphMap f = oracles::load_map(name);
        const MarkedGraph& g = f.graph();
        std::mt19937_64 rng(7);
        for (int trial = 0; trial < 12; ++trial) {
            EdgePath start = oracles::random_tight_path(g, 1 + rng() % 4, rng);
            for (auto policy : {NibblePolicy::entire(), NibblePolicy::seeded(trial)}) {
                auto traj = nibbled_trajectory(f, start, 3, policy);
                for (std::size_t s = 1; s < traj.size(); ++s) {
                    for (const ForestEntry& fe : traj[s].entries) {
                        if (fe.parent_pos < 0) continue;
                        int pw = traj[s - 1].entries[fe.parent_pos].weight;
                        CHECK(fe.weight <= pw);
                        if (fe.weight < pw) {
                            // the child letter sits inside a seed of the parent stratum
                            OrientedEdge child = traj[s].path.letters[fe.pos];
                            bool in_seed = false;
                            for (const EdgePath& seed : f.seeds(pw))
                                for (OrientedEdge se : seed.letters)
                                    if (se == child || se == child.reversal()) in_seed = true;
                            CHECK(in_seed);
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("randomized tightening replays give the same paths") {
    GraphMap f = oracles::load_map("example2.ttm");
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        EdgePath start = oracles::random_tight_path(f.graph(), 1 + rng() % 4, rng);
        auto det = nibbled_trajectory(f, start, 3, NibblePolicy::entire(), false);
        auto rnd = nibbled_trajectory(f, start, 3, NibblePolicy::entire(), true);
        REQUIRE(det.size() == rnd.size());
        for (std::size_t s = 0; s < det.size(); ++s) CHECK(det[s].path == rnd[s].path);
    }
}

TEST_CASE("exhaustive futures deduplicate by path and step") {
    GraphMap f = oracles::load_map("example2.ttm");
    EdgePath e3 = parse_path(f.graph(), "E3");
    auto futures = exhaustive_futures(f, e3, 2, 4096);
    std::set<std::pair<int, EdgePath>> seen;
    for (auto& entry : futures) CHECK(seen.insert(entry).second);
    // the entire future is among the nibbled ones
    bool found = false;
    for (auto& [s, p] : futures)
        if (s == 2 && p == f.f_sharp_pow(e3, 2)) found = true;
    CHECK(found);
}

TEST_CASE("monochromatic generation: base case and closure") {
    GraphMap f = oracles::load_map("example2.ttm");
    const MarkedGraph& g = f.graph();
    Caps caps;
    caps.max_states = 100000;
    auto mono0 = monochromatic_paths(f, 1, 0, caps);
    CHECK(mono0.size() == g.oriented_count());  // depth 0: the edges only

    auto mono = monochromatic_paths(f, 1, 2, caps);
    std::set<EdgePath> seen_paths;
    for (auto& [d, p] : mono) seen_paths.insert(p);
    // closure: sub edge-paths of images of stream members reappear
    for (auto& [d, p] : mono) {
        if (d >= 2) continue;
        for (const EdgePath& sp : sub_edge_paths(f.f_sharp(p))) CHECK(seen_paths.count(sp));
    }
    // depth-1 layer contains the expected expansions
    std::set<EdgePath> level1;
    for (auto& [d, p] : mono)
        if (d <= 1) level1.insert(p);
    for (const char* lit : {"E1", "E2 E1", "E3 ~E1 ~E2", "~E1 ~E2", "E2 E1", "~E2"})
        CHECK(level1.count(tighten(parse_path(g, lit))));
}

TEST_CASE("coarser-step monochromatic paths are a subset of finer ones") {
    GraphMap f = oracles::load_map("example2.ttm");
    Caps caps;
    caps.max_states = 100000;
    auto mono2 = monochromatic_paths(f, 2, 2, caps);
    auto mono1 = monochromatic_paths(f, 1, 4, caps);
    std::set<EdgePath> fine;
    for (auto& [d, p] : mono1) fine.insert(p);
    for (auto& [d, p] : mono2) CHECK(fine.count(p));
}

TEST_CASE("bead classification order and kinds") {
    GraphMap lin = oracles::load_map("linear.ttm");
    const MarkedGraph& g = lin.graph();
    BeadContext ctx = make_ctx(1);

    auto gep = classify_bead(lin, parse_path(g, "E ~a ~a ~F"), ctx);
    REQUIRE(gep);
    CHECK(gep->kind == BeadKind::Gep);

    auto pep = classify_bead(lin, parse_path(g, "E ~a ~a"), ctx);
    REQUIRE(pep);
    CHECK(pep->kind == BeadKind::Pep);

    auto nielsen = classify_bead(lin, parse_path(g, "a"), ctx);
    REQUIRE(nielsen);
    CHECK(nielsen->kind == BeadKind::Nielsen);

    auto atom = classify_bead(lin, parse_path(g, "E"), ctx);
    REQUIRE(atom);
    CHECK(atom->kind == BeadKind::Atom);

    // a long Nielsen path is not a bead when J is too small
    BeadContext small = make_ctx(1);
    small.inherited_mono = false;
    CHECK_FALSE(classify_bead(lin, parse_path(g, "E a ~E"), small));
    BeadContext big = make_ctx(3);
    auto nb = classify_bead(lin, parse_path(g, "E a ~E"), big);
    REQUIRE(nb);
    CHECK(nb->kind == BeadKind::Nielsen);

    // atom evidence from the bounded membership search
    GraphMap sec2 = oracles::load_map("example2.ttm");
    BeadContext searched = make_ctx(1);
    searched.inherited_mono = false;
    auto e3 = classify_bead(sec2, parse_path(sec2.graph(), "E3"), searched);
    REQUIRE(e3);
    CHECK(e3->kind == BeadKind::Atom);
    CHECK(e3->evidence.find("subpath of") == 0);
}

TEST_CASE("beaded decompositions of the worked examples") {
    GraphMap sec2 = oracles::load_map("example2.ttm");
    const MarkedGraph& g2 = sec2.graph();
    BeadContext ctx = make_ctx(1);
    BeadedResult br = beaded_decomposition(sec2, parse_path(g2, "E3 ~E1 ~E2"), ctx);
    REQUIRE(br.ok);
    REQUIRE(br.beads.size() == 3);
    for (const Bead& b : br.beads) CHECK((b.kind == BeadKind::Atom || b.kind == BeadKind::Nielsen));
    CHECK(br.beads[0].kind == BeadKind::Atom);

    GraphMap lin = oracles::load_map("linear.ttm");
    BeadedResult gep = beaded_decomposition(lin, parse_path(lin.graph(), "E ~a ~a ~F"), ctx);
    REQUIRE(gep.ok);
    REQUIRE(gep.beads.size() == 1);
    CHECK(gep.beads[0].kind == BeadKind::Gep);

    BeadContext big = make_ctx(3);
    BeadedResult nielsen = beaded_decomposition(sec2, parse_path(g2, "E2 E1 ~E2"), big);
    REQUIRE(nielsen.ok);
    REQUIRE(nielsen.beads.size() == 1);
    CHECK(nielsen.beads[0].kind == BeadKind::Nielsen);
}

TEST_CASE("empirical bead parameters") {
    for (const char* name : {"example2.ttm", "idrose2.ttm", "linear.ttm", "linear_gep.ttm"}) {
        GraphMap f = oracles::load_map(name);
        BeadParams p = find_bead_params(f);
        INFO(name);
        CHECK(p.r == 1);
        CHECK(p.J == 1);
    }
    GraphMap mv = oracles::load_map("multivertex.ttm");
    BeadParams pmv = find_bead_params(mv);
    CHECK(pmv.r == 1);
    CHECK(pmv.J == 1);
    GraphMap torus = oracles::load_map("torus.ttm");
    Caps caps;
    caps.max_states = 128;
    caps.depth = 2;
    BeadParams pt = find_bead_params(torus, caps);
    CHECK(pt.r == 2);
    CHECK(pt.J >= 1);
}

TEST_CASE("beaded decomposition over generated monochromatic paths") {
    Caps caps;
    for (const char* name : {"example2.ttm", "idrose2.ttm", "linear.ttm"}) {
        GraphMap f = oracles::load_map(name);
        BeadParams params{1, 1, "pinned"};
        BdtReport rep = verify_bdt(f, params, 4, caps);
        INFO(name);
        CHECK(rep.verified);
        CHECK_FALSE(rep.capped);
        CHECK(rep.paths_checked > 0);
    }
    // the extended linear family exercises every bead kind
    GraphMap gm = oracles::load_map("linear_gep.ttm");
    BdtReport rep = verify_bdt(gm, BeadParams{1, 1, "pinned"}, 3, caps);
    CHECK(rep.verified);
    CHECK(rep.bead_counts.at("atom") > 0);
    CHECK(rep.bead_counts.at("nielsen") > 0);
    CHECK(rep.bead_counts.at("gep") > 0);
    CHECK(rep.bead_counts.at("pep") > 0);
}

TEST_CASE("a verified report replays on each regenerated path") {
    GraphMap f = oracles::load_map("linear.ttm");
    Caps caps;
    BeadParams params{1, 1, "pinned"};
    BdtReport rep = verify_bdt(f, params, 3, caps);
    REQUIRE(rep.verified);
    BeadContext ctx = make_ctx(params.J, caps);
    for (auto& [d, p] : monochromatic_paths(f, params.r, 3, caps))
        CHECK(beaded_decomposition(f, p, ctx).ok);
}

TEST_CASE("a too-small bead bound is reported with a counterexample") {
    // the nested map carries an indivisible Nielsen factor of length three in
    // its monochromatic streams, so J = 1 cannot bead it
    GraphMap nest = oracles::load_map("nest.ttm");
    BdtReport rep = verify_bdt(nest, BeadParams{1, 1, "deliberately small"}, 2, Caps{});
    CHECK_FALSE(rep.verified);
    REQUIRE(rep.counterexample);
    REQUIRE(rep.failing_factor);
    CHECK(rep.failing_factor->size() > 1);
}

TEST_CASE("nibbled-future dichotomy with the empirical bound") {
    Caps caps;
    for (const char* name : {"example2.ttm", "idrose2.ttm", "linear.ttm", "multivertex.ttm"}) {
        GraphMap f = oracles::load_map(name);
        DecompReport rep = verify_decomp_theorem(f, 3, 4, caps);
        INFO(name);
        CHECK(rep.verified);
        CHECK(rep.monotone);
        REQUIRE(rep.vhat.size() == 3);
        CHECK(rep.vhat[0] == 1);  // single-edge futures decompose into single edges
        CHECK(rep.futures_checked > 0);
    }
    GraphMap id2 = oracles::load_map("idrose2.ttm");
    CHECK(verify_decomp_theorem(id2, 3, 4, caps).vhat == std::vector<std::size_t>{1, 1, 1});
    // the nested suffix keeps its length-three Nielsen block in every future
    GraphMap nest = oracles::load_map("nest.ttm");
    DecompReport nrep = verify_decomp_theorem(nest, 3, 4, caps);
    CHECK(nrep.verified);
    CHECK(nrep.vhat == std::vector<std::size_t>{3, 3, 3});
}

TEST_CASE("iteration reaches the four-clause splitting menu") {
    GraphMap sec2 = oracles::load_map("example2.ttm");
    const MarkedGraph& g = sec2.graph();
    auto res = split_after_iteration(sec2, parse_path(g, "E3 E2 ~E1"), Caps{});
    CHECK(res.iterations == 1);
    auto factors = res.decomposition.factors();
    REQUIRE(factors.size() == 2);
    CHECK(format_path(g, factors[0]) == "E3");
    CHECK(format_path(g, factors[1]) == "~E1");

    auto nielsen = split_after_iteration(sec2, parse_path(g, "E2 E1 ~E2"), Caps{});
    CHECK(nielsen.iterations == 0);
    CHECK(nielsen.decomposition.factors().size() == 1);

    GraphMap lin = oracles::load_map("linear.ttm");
    auto gep = split_after_iteration(lin, parse_path(lin.graph(), "E ~a ~a ~F"), Caps{});
    CHECK(gep.iterations == 0);
    CHECK(gep.decomposition.factors().size() == 1);
}

TEST_CASE("entire futures of growing exceptional paths stay exceptional") {
    GraphMap lin = oracles::load_map("linear.ttm");
    EdgePath gep = parse_path(lin.graph(), "E ~a ~F");
    EdgePath cur = gep;
    for (int k = 1; k <= 6; ++k) {
        cur = lin.f_sharp(cur);
        auto gd = is_gep(lin, cur);
        REQUIRE(gd);
        CHECK(gd->k == 1 + k);
    }
}

TEST_CASE("refinement battery at desk scale") {
    Caps caps;
    for (const char* name : {"example2.ttm", "idrose2.ttm", "linear.ttm", "linear_gep.ttm"}) {
        GraphMap f = oracles::load_map(name);
        BeadParams params = find_bead_params(f, caps);
        RefinementsReport rep = verify_refinements(f, params, caps, 24);
        INFO(name);
        CHECK(rep.persistence_pass);
        CHECK(rep.pep_count_pass);
        CHECK(rep.atom_dichotomy_pass);
        CHECK(rep.nibble_preserve_pass);
        CHECK(rep.max_displayed_long_peps < 2 * static_cast<std::size_t>(f.filtration().omega()));
        CHECK(rep.trajectories_run >= 24);
    }
}
