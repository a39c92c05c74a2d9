#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "ttrack/caps.hpp"
#include "ttrack/nielsen.hpp"
#include "ttrack/traintrack.hpp"

namespace ttrack {

struct ClauseResult {
    std::string name;
    bool applicable = true;
    bool pass = true;
    bool bounded = false;  // verified only within the configured caps
    std::string witness;   // offending path / turn / vertex when failing
};

struct IrttReport {
    std::vector<ClauseResult> clauses;
    bool capped = false;

    bool exact_pass() const {
        for (const auto& c : clauses)
            if (!c.bounded && !c.pass) return false;
        return true;
    }
    bool all_pass() const {
        for (const auto& c : clauses)
            if (!c.pass) return false;
        return true;
    }
    const ClauseResult* first_failure() const {
        for (const auto& c : clauses)
            if (!c.pass) return &c;
        return nullptr;
    }
};

namespace detail {

/// Connected components of the subgraph spanned by the given edges.
struct SubgraphComponents {
    std::vector<std::vector<std::int32_t>> edge_sets;
    std::vector<std::set<VertexId>> vertex_sets;
    std::vector<bool> contractible;  // first Betti number zero
};

inline SubgraphComponents subgraph_components(const MarkedGraph& g,
                                              const std::vector<std::int32_t>& edges) {
    std::map<VertexId, VertexId> parent;
    std::function<VertexId(VertexId)> find = [&](VertexId v) -> VertexId {
        auto it = parent.find(v);
        if (it == parent.end() || it->second == v) return v;
        VertexId r = find(it->second);
        parent[v] = r;
        return r;
    };
    auto unite = [&](VertexId a, VertexId b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[a] = b;
    };
    for (std::int32_t e : edges) {
        parent.emplace(g.edge(e).from, g.edge(e).from);
        parent.emplace(g.edge(e).to, g.edge(e).to);
        unite(g.edge(e).from, g.edge(e).to);
    }
    std::map<VertexId, std::size_t> comp_of;
    SubgraphComponents out;
    for (std::int32_t e : edges) {
        VertexId r = find(g.edge(e).from);
        if (!comp_of.count(r)) {
            comp_of[r] = out.edge_sets.size();
            out.edge_sets.emplace_back();
            out.vertex_sets.emplace_back();
        }
        std::size_t c = comp_of[r];
        out.edge_sets[c].push_back(e);
        out.vertex_sets[c].insert(g.edge(e).from);
        out.vertex_sets[c].insert(g.edge(e).to);
    }
    for (std::size_t c = 0; c < out.edge_sets.size(); ++c) {
        // connected: b1 = E - V + 1
        long b1 = static_cast<long>(out.edge_sets[c].size()) -
                  static_cast<long>(out.vertex_sets[c].size()) + 1;
        out.contractible.push_back(b1 <= 0);
    }
    return out;
}

/// First Betti number of the Stallings fold of the image of a connected
/// subgraph: each edge e contributes a chain spelling the image word; edges
/// with equal labels leaving a common vertex are folded together.
inline long folded_image_rank(const GraphMap& f, const std::vector<std::int32_t>& comp_edges,
                              const std::set<VertexId>& comp_vertices) {
    const MarkedGraph& g = f.graph();
    // Nodes: image vertices get stable ids; chain nodes are fresh.
    std::map<VertexId, int> vnode;
    int next = 0;
    for (VertexId v : comp_vertices) {
        VertexId w = f.vertex_image(v);
        if (!vnode.count(w)) vnode[w] = next++;
    }
    struct Arc {
        int a, b;
        std::int32_t label;  // oriented edge code, as read from a to b
    };
    std::vector<Arc> arcs;
    for (std::int32_t e : comp_edges) {
        const EdgePath& im = f.forward_image(e);
        int cur = vnode[f.vertex_image(g.edge(e).from)];
        for (std::size_t i = 0; i < im.size(); ++i) {
            int nxt = (i + 1 == im.size()) ? vnode[f.vertex_image(g.edge(e).to)] : next++;
            arcs.push_back({cur, im.letters[i].code(), nxt});
            cur = nxt;
        }
    }
    std::vector<int> uf(next);
    std::iota(uf.begin(), uf.end(), 0);
    std::function<int(int)> find = [&](int x) -> int { return uf[x] == x ? x : uf[x] = find(uf[x]); };

    bool changed = true;
    while (changed) {
        changed = false;
        std::map<std::pair<int, std::int32_t>, int> first_target;
        for (const Arc& arc : arcs) {
            for (int dir = 0; dir < 2; ++dir) {
                int from = find(dir ? arc.b : arc.a);
                int to = find(dir ? arc.a : arc.b);
                std::int32_t lab = dir ? (arc.label ^ 1) : arc.label;
                auto key = std::make_pair(from, lab);
                auto it = first_target.find(key);
                if (it == first_target.end()) {
                    first_target.emplace(key, to);
                } else if (find(it->second) != to) {
                    uf[find(it->second)] = to;
                    changed = true;
                }
            }
        }
    }
    std::set<int> nodes;
    std::set<std::tuple<int, std::int32_t, int>> edges_folded;
    for (const Arc& arc : arcs) {
        int a = find(arc.a), b = find(arc.b);
        nodes.insert(a);
        nodes.insert(b);
        std::int32_t lab = arc.label;
        if (lab & 1) {
            edges_folded.insert({b, lab ^ 1, a});
        } else {
            edges_folded.insert({a, lab, b});
        }
    }
    if (nodes.empty()) return 0;
    // The image of a connected complex is connected.
    return static_cast<long>(edges_folded.size()) - static_cast<long>(nodes.size()) + 1;
}

}  // namespace detail

/// The property battery for improved relative train track maps.  Exact
/// clauses are decided outright; the Nielsen-search clauses are verified
/// within caps and flagged as bounded.
inline IrttReport verify_irtt(const GraphMap& f, const Caps& caps = {}) {
    const MarkedGraph& g = f.graph();
    const Filtration& filt = f.filtration();
    IrttReport rep;
    auto clause = [&](std::string name) -> ClauseResult& {
        ClauseResult c;
        c.name = std::move(name);
        rep.clauses.push_back(std::move(c));
        return rep.clauses.back();
    };

    {
        ClauseResult& c = clause("vertex-images-fixed");
        for (std::size_t v = 0; v < g.vertex_count() && c.pass; ++v) {
            VertexId w = f.vertex_image(static_cast<VertexId>(v));
            if (f.vertex_image(w) != w) {
                c.pass = false;
                c.witness = "vertex " + g.vertex_name(static_cast<VertexId>(v));
            }
        }
    }

    {
        ClauseResult& c = clause("rtt-i-stratum-derivative-closed");
        c.applicable = false;
        for (const Stratum& s : filt.strata) {
            if (s.kind != StratumKind::Exponential) continue;
            c.applicable = true;
            for (std::int32_t e : s.edges) {
                for (OrientedEdge oe : {OrientedEdge::forward(e), OrientedEdge::backward(e)}) {
                    if (filt.stratum_of(f.derivative(oe)) != s.index) {
                        c.pass = false;
                        c.witness = "edge " + g.token(oe);
                    }
                }
            }
        }
    }

    {
        ClauseResult& c = clause("rtt-ii-lower-rank-preserved");
        c.bounded = true;  // structural check via folding and Hopficity
        c.applicable = false;
        for (const Stratum& s : filt.strata) {
            if (s.kind != StratumKind::Exponential || s.index == 1) continue;
            std::vector<std::int32_t> lower;
            for (std::size_t e = 0; e < g.edge_count(); ++e)
                if (filt.stratum_of_edge[e] < s.index) lower.push_back(static_cast<std::int32_t>(e));
            if (lower.empty()) continue;
            auto comps = detail::subgraph_components(g, lower);
            for (std::size_t ci = 0; ci < comps.edge_sets.size(); ++ci) {
                if (comps.contractible[ci]) continue;
                c.applicable = true;
                long rank = static_cast<long>(comps.edge_sets[ci].size()) -
                            static_cast<long>(comps.vertex_sets[ci].size()) + 1;
                long image_rank = detail::folded_image_rank(f, comps.edge_sets[ci], comps.vertex_sets[ci]);
                if (image_rank != rank) {
                    c.pass = false;
                    c.witness = "stratum " + std::to_string(s.index) + " component rank " +
                                std::to_string(rank) + " image rank " + std::to_string(image_rank);
                }
            }
        }
    }

    {
        ClauseResult& c = clause("rtt-iii-legal-paths-stay-legal");
        c.applicable = false;
        for (const Stratum& s : filt.strata) {
            if (s.kind != StratumKind::Exponential) continue;
            c.applicable = true;
            for (std::int32_t e : s.edges) {
                for (OrientedEdge oe : {OrientedEdge::forward(e), OrientedEdge::backward(e)}) {
                    if (!f.is_r_legal(f.image(oe), s.index)) {
                        c.pass = false;
                        c.witness = "image of " + g.token(oe) + " has an illegal turn in its stratum";
                    }
                }
            }
            for (Turn t : f.all_turns()) {
                if (filt.stratum_of(t.a) != s.index || filt.stratum_of(t.b) != s.index) continue;
                if (f.turn_legal_cached(t) && !f.turn_legal_cached(f.turn_map(t))) {
                    c.pass = false;
                    c.witness = "legal turn {" + g.token(t.a) + "," + g.token(t.b) + "} maps to illegal";
                }
            }
        }
    }

    {
        ClauseResult& c = clause("parabolic-single-edge");
        c.applicable = false;
        for (const Stratum& s : filt.strata) {
            if (s.kind != StratumKind::Parabolic) continue;
            c.applicable = true;
            if (s.edges.size() != 1) {
                c.pass = false;
                c.witness = "stratum " + std::to_string(s.index) + " has " +
                            std::to_string(s.edges.size()) + " edges";
            }
        }
    }

    {
        ClauseResult& c = clause("parabolic-prefix-form");
        c.applicable = false;
        for (const Stratum& s : filt.strata) {
            if (s.kind != StratumKind::Parabolic || s.edges.size() != 1) continue;
            c.applicable = true;
            const std::string& name = g.edge(s.edges[0]).name;
            if (!s.prefix_form) {
                c.pass = false;
                c.witness = "f(" + name + ") = " + format_path(g, f.forward_image(s.edges[0])) +
                            " does not begin with " + name;
                continue;
            }
            if (!s.suffix.empty()) {
                if (initial_vertex(g, s.suffix) != terminal_vertex(g, s.suffix)) {
                    c.pass = false;
                    c.witness = "suffix of " + name + " is not a closed path";
                } else if (filt.weight(s.suffix) >= s.index) {
                    c.pass = false;
                    c.witness = "suffix of " + name + " is not of lower weight";
                } else if (f.vertex_image(initial_vertex(g, s.suffix)) != initial_vertex(g, s.suffix)) {
                    c.pass = false;
                    c.witness = "suffix basepoint of " + name + " is not fixed";
                }
            }
        }
    }

    {
        // ne-(ii) asserts a genuine splitting, not just the prefix shape: no
        // iterate may cancel across the junction between E and its suffix.
        ClauseResult& c = clause("parabolic-prefix-splitting");
        c.bounded = true;
        c.applicable = false;
        for (const Stratum& s : filt.strata) {
            if (s.kind != StratumKind::Parabolic || !s.prefix_form || s.suffix.empty()) continue;
            c.applicable = true;
            const EdgePath& im = f.forward_image(s.prefix_edge);
            for (int k = 1; k <= caps.kmax && c.pass; ++k) {
                if (!is_k_splitting(f, im, 1, k)) {
                    c.pass = false;
                    c.witness = "f(" + g.edge(s.prefix_edge).name + ") = " +
                                g.edge(s.prefix_edge).name + " . " + format_path(g, s.suffix) +
                                " cancels at the junction for k = " + std::to_string(k);
                }
            }
        }
    }

    {
        ClauseResult& c = clause("parabolic-endpoints-fixed");
        c.applicable = false;
        for (const Stratum& s : filt.strata) {
            if (s.kind != StratumKind::Parabolic) continue;
            for (std::int32_t e : s.edges) {
                c.applicable = true;
                for (VertexId v : {g.edge(e).from, g.edge(e).to}) {
                    if (f.vertex_image(v) != v) {
                        c.pass = false;
                        c.witness = "vertex " + g.vertex_name(v) + " of edge " + g.edge(e).name;
                    }
                }
            }
        }
    }

    {
        ClauseResult& c = clause("exponential-endpoints-fixed-in-noncontractible-lower");
        c.applicable = false;
        for (const Stratum& s : filt.strata) {
            if (s.kind != StratumKind::Exponential || s.index == 1) continue;
            std::vector<std::int32_t> lower;
            for (std::size_t e = 0; e < g.edge_count(); ++e)
                if (filt.stratum_of_edge[e] < s.index) lower.push_back(static_cast<std::int32_t>(e));
            auto comps = detail::subgraph_components(g, lower);
            for (std::int32_t e : s.edges) {
                for (VertexId v : {g.edge(e).from, g.edge(e).to}) {
                    for (std::size_t ci = 0; ci < comps.vertex_sets.size(); ++ci) {
                        if (comps.contractible[ci] || !comps.vertex_sets[ci].count(v)) continue;
                        c.applicable = true;
                        if (f.vertex_image(v) != v) {
                            c.pass = false;
                            c.witness = "vertex " + g.vertex_name(v);
                        }
                    }
                }
            }
        }
    }

    {
        ClauseResult& c = clause("zero-iff-contractible-components");
        c.applicable = true;
        for (const Stratum& s : filt.strata) {
            std::vector<std::int32_t> upto;
            for (std::size_t e = 0; e < g.edge_count(); ++e)
                if (filt.stratum_of_edge[e] <= s.index) upto.push_back(static_cast<std::int32_t>(e));
            auto comps = detail::subgraph_components(g, upto);
            std::set<std::int32_t> contractible_edges;
            for (std::size_t ci = 0; ci < comps.edge_sets.size(); ++ci)
                if (comps.contractible[ci])
                    contractible_edges.insert(comps.edge_sets[ci].begin(), comps.edge_sets[ci].end());
            std::set<std::int32_t> stratum_edges(s.edges.begin(), s.edges.end());
            bool equal = contractible_edges == stratum_edges;
            if (s.kind == StratumKind::Zero && !equal) {
                c.pass = false;
                c.witness = "zero stratum " + std::to_string(s.index) +
                            " is not the union of contractible components";
            }
            if (s.kind != StratumKind::Zero && !contractible_edges.empty() &&
                contractible_edges == stratum_edges) {
                c.pass = false;
                c.witness = "stratum " + std::to_string(s.index) +
                            " consists of contractible components but is not zero";
            }
        }
    }

    {
        ClauseResult& c = clause("zero-followed-by-exponential");
        c.applicable = false;
        for (const Stratum& s : filt.strata) {
            if (s.kind != StratumKind::Zero) continue;
            c.applicable = true;
            if (s.index >= filt.omega() ||
                filt.strata[s.index].kind != StratumKind::Exponential) {
                c.pass = false;
                c.witness = "zero stratum " + std::to_string(s.index);
            }
        }
    }

    {
        ClauseResult& c = clause("zero-restriction-immersion");
        c.applicable = false;
        for (const Stratum& s : filt.strata) {
            if (s.kind != StratumKind::Zero) continue;
            c.applicable = true;
            for (Turn t : f.all_turns()) {
                if (t.degenerate()) continue;
                if (filt.stratum_of(t.a) != s.index || filt.stratum_of(t.b) != s.index) continue;
                if (f.turn_map(t).degenerate()) {
                    c.pass = false;
                    c.witness = "turn {" + g.token(t.a) + "," + g.token(t.b) + "}";
                }
            }
        }
    }

    {
        ClauseResult& c = clause("eg-aperiodic");
        c.applicable = false;
        for (const Stratum& s : filt.strata) {
            if (s.kind != StratumKind::Exponential) continue;
            c.applicable = true;
            if (!s.aperiodic) {
                c.pass = false;
                c.witness = "stratum " + std::to_string(s.index);
            }
        }
    }

    // Bounded clauses: periodic Nielsen paths have period one, and each
    // exponential stratum meets at most one indivisible Nielsen path.
    {
        ClauseResult& c = clause("nielsen-period-one");
        c.bounded = true;
        std::size_t max_len = std::min<std::size_t>(caps.nielsen_max_len, 6);
        std::size_t nodes = 0;
        std::vector<OrientedEdge> letters;
        std::function<void()> dfs = [&]() {
            if (!c.pass) return;
            if (++nodes > caps.node_budget) {
                rep.capped = true;
                return;
            }
            if (!letters.empty()) {
                EdgePath p{letters, g.initial(letters.front())};
                EdgePath cur = p;
                for (int t = 1; t <= caps.horizon; ++t) {
                    cur = f.f_sharp(cur);
                    if (cur == p) {
                        if (t != 1) {
                            c.pass = false;
                            c.witness = "period " + std::to_string(t) + ": " + format_path(g, p);
                        }
                        break;
                    }
                    if (cur.size() > 4 * max_len * f.max_image_length()) break;
                }
            }
            if (letters.size() >= max_len) return;
            for (OrientedEdge nxt : g.all_oriented()) {
                if (!letters.empty() &&
                    (g.initial(nxt) != g.terminal(letters.back()) || nxt == letters.back().reversal()))
                    continue;
                letters.push_back(nxt);
                dfs();
                letters.pop_back();
            }
        };
        dfs();
    }

    {
        ClauseResult& c = clause("eg-at-most-one-inp");
        c.bounded = true;
        c.applicable = false;
        NielsenInventory inv = enumerate_nielsen(f, caps.nielsen_max_len, caps);
        if (inv.capped) rep.capped = true;
        for (const Stratum& s : filt.strata) {
            if (s.kind != StratumKind::Exponential) continue;
            c.applicable = true;
            std::vector<const NielsenPath*> inps;
            for (const NielsenPath& np : inv.members)
                if (np.kind == NielsenKind::ExponentialPr && np.indivisible && np.stratum == s.index)
                    inps.push_back(&np);
            if (inps.size() > 1) {
                c.pass = false;
                c.witness = "stratum " + std::to_string(s.index) + " has " +
                            std::to_string(inps.size()) + " indivisible Nielsen paths";
            } else if (inps.size() == 1) {
                const EdgePath& p = inps[0]->path;
                OrientedEdge a = p.letters.front();
                OrientedEdge b = reverse_path(g, p).letters.front();
                if (a == b || filt.stratum_of(a) != s.index || filt.stratum_of(b) != s.index) {
                    c.pass = false;
                    c.witness = "Nielsen path ends do not give distinct stratum edges: " +
                                format_path(g, p);
                }
            }
        }
    }

    return rep;
}

}  // namespace ttrack
