#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ttrack/caps.hpp"
#include "ttrack/graph.hpp"
#include "ttrack/path.hpp"

namespace ttrack {

enum class StratumKind { Zero, Parabolic, Exponential };

inline const char* stratum_kind_name(StratumKind k) {
    switch (k) {
        case StratumKind::Zero: return "zero";
        case StratumKind::Parabolic: return "parabolic";
        case StratumKind::Exponential: return "exponential";
    }
    return "?";
}

/// One layer of the invariant filtration.  The transition matrix counts, for
/// each edge of the stratum, how often the image of another stratum edge
/// crosses it in either direction.
struct Stratum {
    int index = 0;                              // 1-based level
    std::vector<std::int32_t> edges;            // edge indices, declaration order
    std::vector<std::vector<std::int64_t>> matrix;
    StratumKind kind = StratumKind::Zero;
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    bool aperiodic = false;

    // Parabolic single-edge normal form f(E) = E u, when the image has it.
    bool prefix_form = false;
    std::int32_t prefix_edge = -1;
    EdgePath suffix;  // u, possibly empty
};

struct Filtration {
    std::vector<Stratum> strata;               // strata[r-1] has index r
    std::vector<int> stratum_of_edge;          // edge index -> 1-based stratum

    int omega() const { return static_cast<int>(strata.size()); }

    int stratum_of(OrientedEdge e) const { return stratum_of_edge[e.edge_index()]; }

    /// Least filtration level containing the path.
    int weight(const EdgePath& p) const {
        if (p.empty()) throw error(errc::empty_path, "weight of empty path");
        int w = 0;
        for (OrientedEdge e : p.letters) w = std::max(w, stratum_of(e));
        return w;
    }
};

/// An unordered pair of oriented edges sharing an initial vertex.
struct Turn {
    OrientedEdge a, b;

    Turn() = default;
    Turn(OrientedEdge x, OrientedEdge y) {
        if (y < x) std::swap(x, y);
        a = x;
        b = y;
    }
    bool degenerate() const { return a == b; }

    friend bool operator==(Turn s, Turn t) { return s.a == t.a && s.b == t.b; }
    friend bool operator<(Turn s, Turn t) { return s.a != t.a ? s.a < t.a : s.b < t.b; }
};

struct TurnHash {
    std::size_t operator()(const Turn& t) const {
        return static_cast<std::size_t>(t.a.code()) * 1000003u + static_cast<std::size_t>(t.b.code());
    }
};

/// A topological representative: vertices to vertices, edges to nonempty
/// tight edge paths, with the reversal-equivariant images derived.  All
/// caches (filtration, turn legality) are built eagerly; instances are
/// immutable afterwards and safe to share between threads.
class GraphMap {
  public:
    GraphMap(MarkedGraph graph, std::vector<VertexId> vertex_map, std::vector<EdgePath> images,
             std::size_t word_cap = 1'000'000, int power = 1)
        : graph_(std::move(graph)),
          vertex_map_(std::move(vertex_map)),
          images_(std::move(images)),
          word_cap_(word_cap),
          power_(power) {
        validate();
        build_filtration();
        build_turn_table();
    }

    const MarkedGraph& graph() const { return graph_; }
    const Filtration& filtration() const { return filtration_; }
    std::size_t word_cap() const { return word_cap_; }
    int power() const { return power_; }

    VertexId vertex_image(VertexId v) const { return vertex_map_.at(v); }

    /// Image of an oriented edge; reversal-equivariant by construction.
    EdgePath image(OrientedEdge e) const {
        return e.is_reversed() ? reverse_path(graph_, images_[e.edge_index()]) : images_[e.edge_index()];
    }

    const EdgePath& forward_image(std::int32_t edge_index) const { return images_[edge_index]; }

    void append_image(OrientedEdge e, std::vector<OrientedEdge>& out) const {
        const EdgePath& im = images_[e.edge_index()];
        if (!e.is_reversed()) {
            out.insert(out.end(), im.letters.begin(), im.letters.end());
        } else {
            for (auto it = im.letters.rbegin(); it != im.letters.rend(); ++it)
                out.push_back(it->reversal());
        }
    }

    /// Maximum image length over oriented edges.
    std::size_t max_image_length() const { return L_; }

    /// Df: first oriented edge of the image.
    OrientedEdge derivative(OrientedEdge e) const {
        const EdgePath& im = images_[e.edge_index()];
        return e.is_reversed() ? im.letters.back().reversal() : im.letters.front();
    }

    Turn turn_map(Turn t) const { return Turn(derivative(t.a), derivative(t.b)); }

    /// Legality of a turn, decided by iterating the turn map until the orbit
    /// repeats; the (finite) orbit is the witness.
    bool is_legal_turn(Turn t, std::vector<Turn>* orbit_out = nullptr) const {
        std::vector<Turn> orbit;
        std::set<Turn> seen;
        Turn cur = t;
        bool legal = true;
        while (seen.insert(cur).second) {
            orbit.push_back(cur);
            if (cur.degenerate()) {
                legal = false;
                break;
            }
            cur = turn_map(cur);
        }
        if (orbit_out) *orbit_out = std::move(orbit);
        return legal;
    }

    bool turn_legal_cached(Turn t) const {
        auto it = turn_legal_.find(t);
        if (it != turn_legal_.end()) return it->second;
        return is_legal_turn(t);
    }

    /// Turns actually taken by a path, one per interior vertex.
    static Turn taken_turn(const EdgePath& p, std::size_t junction) {
        return Turn(p.letters[junction].reversal(), p.letters[junction + 1]);
    }

    /// True iff every turn of the path with both half-edges in stratum r is legal.
    bool is_r_legal(const EdgePath& p, int r) const {
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
            Turn t = taken_turn(p, i);
            if (filtration_.stratum_of(t.a) == r && filtration_.stratum_of(t.b) == r &&
                !turn_legal_cached(t))
                return false;
        }
        return true;
    }

    /// Raw image: concatenation of edge images, untightened.
    EdgePath image_raw(const EdgePath& p) const {
        std::vector<OrientedEdge> out;
        std::size_t total = 0;
        for (OrientedEdge e : p.letters) total += images_[e.edge_index()].size();
        if (total > word_cap_) throw error(errc::cap_exceeded, "image_raw: word cap exceeded");
        out.reserve(total);
        for (OrientedEdge e : p.letters) append_image(e, out);
        VertexId base = vertex_map_.at(initial_vertex(graph_, p));
        return EdgePath{std::move(out), base};
    }

    /// f#: image then tighten.
    EdgePath f_sharp(const EdgePath& p) const { return tighten(image_raw(p)); }

    EdgePath f_sharp_pow(const EdgePath& p, int k) const {
        EdgePath cur = p;
        for (int i = 0; i < k; ++i) cur = f_sharp(cur);
        return cur;
    }

    /// Raw k-fold substitution without any tightening.
    EdgePath raw_pow(const EdgePath& p, int k) const {
        EdgePath cur = p;
        for (int i = 0; i < k; ++i) cur = image_raw(cur);
        return cur;
    }

    /// The map sending each edge to f#^k(E), with vertex map composed k times.
    GraphMap iterate(int k) const {
        if (k < 1) throw error(errc::invalid_map, "iterate: k must be >= 1");
        std::vector<EdgePath> images;
        images.reserve(images_.size());
        for (std::size_t i = 0; i < images_.size(); ++i) {
            EdgePath im = f_sharp_pow(EdgePath{{OrientedEdge::forward(static_cast<std::int32_t>(i))},
                                               graph_.edge(static_cast<std::int32_t>(i)).from},
                                      k);
            if (im.size() > word_cap_) throw error(errc::cap_exceeded, "iterate: image cap exceeded");
            if (im.empty())
                throw error(errc::invalid_map, "iterate: edge image collapsed: " + graph_.edge(i).name);
            images.push_back(std::move(im));
        }
        std::vector<VertexId> vmap(vertex_map_.size());
        for (std::size_t v = 0; v < vmap.size(); ++v) {
            VertexId cur = static_cast<VertexId>(v);
            for (int i = 0; i < k; ++i) cur = vertex_map_[cur];
            vmap[v] = cur;
        }
        return GraphMap(graph_, std::move(vmap), std::move(images), word_cap_, power_ * k);
    }

    /// Maximal subpaths of stratum-r edge images that lie in G_{r-1}.
    std::vector<EdgePath> seeds(int r) const {
        std::set<EdgePath> out;
        for (std::int32_t e : filtration_.strata[r - 1].edges) {
            const EdgePath& im = images_[e];
            std::size_t i = 0;
            while (i < im.size()) {
                if (filtration_.stratum_of(im.letters[i]) < r) {
                    std::size_t j = i;
                    while (j < im.size() && filtration_.stratum_of(im.letters[j]) < r) ++j;
                    out.insert(subpath(im, i, j));
                    i = j;
                } else {
                    ++i;
                }
            }
        }
        return std::vector<EdgePath>(out.begin(), out.end());
    }

    /// Smallest set of oriented edges containing `start` and closed under
    /// passing to image letters; a finite fixpoint.
    std::set<std::int32_t> letter_closure(const std::vector<OrientedEdge>& start) const {
        std::set<std::int32_t> seen;
        std::vector<OrientedEdge> work(start.begin(), start.end());
        while (!work.empty()) {
            OrientedEdge e = work.back();
            work.pop_back();
            if (!seen.insert(e.code()).second) continue;
            EdgePath im = image(e);
            for (OrientedEdge x : im.letters)
                if (!seen.count(x.code())) work.push_back(x);
        }
        return seen;
    }

    std::vector<Turn> all_turns() const {
        std::vector<Turn> out;
        for (std::size_t v = 0; v < graph_.vertex_count(); ++v) {
            auto st = graph_.star(static_cast<VertexId>(v));
            for (std::size_t i = 0; i < st.size(); ++i)
                for (std::size_t j = i; j < st.size(); ++j) out.emplace_back(st[i], st[j]);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

  private:
    void validate() {
        if (vertex_map_.size() != graph_.vertex_count())
            throw error(errc::invalid_map, "vertex map size mismatch");
        if (images_.size() != graph_.edge_count())
            throw error(errc::invalid_map, "edge image count mismatch");
        L_ = 0;
        for (std::size_t i = 0; i < images_.size(); ++i) {
            const EdgePath& im = images_[i];
            const EdgeRecord& rec = graph_.edge(static_cast<std::int32_t>(i));
            if (im.empty())
                throw error(errc::invalid_map, "edge image is empty (collapsed edge): " + rec.name);
            if (!is_tight(im))
                throw error(errc::invalid_map, "edge image is not tight: " + rec.name);
            if (!is_incidence_valid(graph_, im.letters))
                throw error(errc::invalid_map, "edge image is not a path: " + rec.name);
            if (initial_vertex(graph_, im) != vertex_map_.at(rec.from) ||
                terminal_vertex(graph_, im) != vertex_map_.at(rec.to))
                throw error(errc::invalid_map, "edge image endpoints disagree with vertex map: " + rec.name);
        }
        for (const EdgePath& im : images_) L_ = std::max(L_, im.size());
    }

    // Strata are the strongly connected components of the edge-crossing
    // digraph, ordered by a topological order of the condensation with ties
    // broken by declaration order.
    void build_filtration() {
        const std::size_t n = graph_.edge_count();
        std::vector<std::set<std::int32_t>> crosses(n);
        for (std::size_t e = 0; e < n; ++e)
            for (OrientedEdge x : images_[e].letters) crosses[e].insert(x.edge_index());

        // Tarjan SCC, iterative.
        std::vector<int> comp(n, -1), low(n), num(n, -1);
        std::vector<std::int32_t> stack;
        std::vector<char> on_stack(n, 0);
        int counter = 0, ncomp = 0;
        struct Frame {
            std::int32_t v;
            std::set<std::int32_t>::const_iterator it;
        };
        for (std::size_t root = 0; root < n; ++root) {
            if (num[root] != -1) continue;
            std::vector<Frame> frames;
            frames.push_back({static_cast<std::int32_t>(root), crosses[root].begin()});
            num[root] = low[root] = counter++;
            stack.push_back(root);
            on_stack[root] = 1;
            while (!frames.empty()) {
                Frame& f = frames.back();
                if (f.it != crosses[f.v].end()) {
                    std::int32_t w = *f.it++;
                    if (num[w] == -1) {
                        num[w] = low[w] = counter++;
                        stack.push_back(w);
                        on_stack[w] = 1;
                        frames.push_back({w, crosses[w].begin()});
                    } else if (on_stack[w]) {
                        low[f.v] = std::min(low[f.v], num[w]);
                    }
                } else {
                    std::int32_t v = f.v;
                    frames.pop_back();
                    if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
                    if (low[v] == num[v]) {
                        while (true) {
                            std::int32_t w = stack.back();
                            stack.pop_back();
                            on_stack[w] = 0;
                            comp[w] = ncomp;
                            if (w == v) break;
                        }
                        ++ncomp;
                    }
                }
            }
        }

        // Condensation; order sinks-first so each level's images stay within it.
        std::vector<std::set<int>> out_edges(ncomp);
        for (std::size_t e = 0; e < n; ++e)
            for (std::int32_t w : crosses[e])
                if (comp[e] != comp[w]) out_edges[comp[e]].insert(comp[w]);
        std::vector<std::int32_t> comp_min_edge(ncomp, INT32_MAX);
        for (std::size_t e = 0; e < n; ++e)
            comp_min_edge[comp[e]] = std::min<std::int32_t>(comp_min_edge[comp[e]], e);

        std::vector<int> remaining_out(ncomp);
        for (int c = 0; c < ncomp; ++c) remaining_out[c] = static_cast<int>(out_edges[c].size());
        std::vector<std::set<int>> in_edges(ncomp);
        for (int c = 0; c < ncomp; ++c)
            for (int d : out_edges[c]) in_edges[d].insert(c);

        std::vector<int> order;  // component ids, level 1 first
        std::set<std::pair<std::int32_t, int>> ready;  // (declaration tiebreak, comp)
        for (int c = 0; c < ncomp; ++c)
            if (remaining_out[c] == 0) ready.insert({comp_min_edge[c], c});
        while (!ready.empty()) {
            auto [mn, c] = *ready.begin();
            ready.erase(ready.begin());
            order.push_back(c);
            for (int d : in_edges[c]) {
                if (--remaining_out[d] == 0) ready.insert({comp_min_edge[d], d});
            }
        }

        filtration_.stratum_of_edge.assign(n, 0);
        filtration_.strata.clear();
        std::vector<int> level_of_comp(ncomp, 0);
        for (std::size_t i = 0; i < order.size(); ++i) level_of_comp[order[i]] = static_cast<int>(i) + 1;
        for (std::size_t e = 0; e < n; ++e)
            filtration_.stratum_of_edge[e] = level_of_comp[comp[e]];

        for (std::size_t i = 0; i < order.size(); ++i) {
            Stratum s;
            s.index = static_cast<int>(i) + 1;
            for (std::size_t e = 0; e < n; ++e)
                if (comp[e] == order[i]) s.edges.push_back(static_cast<std::int32_t>(e));
            std::sort(s.edges.begin(), s.edges.end());
            classify_stratum(s);
            filtration_.strata.push_back(std::move(s));
        }
    }

    void classify_stratum(Stratum& s) {
        const std::size_t m = s.edges.size();
        std::unordered_map<std::int32_t, std::size_t> pos;
        for (std::size_t i = 0; i < m; ++i) pos[s.edges[i]] = i;
        s.matrix.assign(m, std::vector<std::int64_t>(m, 0));
        for (std::size_t j = 0; j < m; ++j)
            for (OrientedEdge x : images_[s.edges[j]].letters) {
                auto it = pos.find(x.edge_index());
                if (it != pos.end()) s.matrix[it->second][j] += 1;
            }

        bool zero = true;
        for (auto& row : s.matrix)
            for (auto v : row)
                if (v) zero = false;
        if (zero) {
            s.kind = StratumKind::Zero;
            s.lambda_lo = s.lambda_hi = 0.0;
            s.aperiodic = false;
            return;
        }

        bool permutation = true;
        for (std::size_t i = 0; i < m && permutation; ++i) {
            std::int64_t row = 0, col = 0;
            for (std::size_t j = 0; j < m; ++j) {
                if (s.matrix[i][j] > 1 || s.matrix[j][i] > 1) permutation = false;
                row += s.matrix[i][j];
                col += s.matrix[j][i];
            }
            if (row != 1 || col != 1) permutation = false;
        }
        // An irreducible nonnegative integer matrix has PF eigenvalue 1 iff
        // it is a permutation matrix, so the kind test is exact.
        s.kind = permutation ? StratumKind::Parabolic : StratumKind::Exponential;

        if (permutation) {
            s.lambda_lo = s.lambda_hi = 1.0;
        } else {
            // Row-sum bounds on the PF eigenvalue of M^k, then k-th roots.
            std::vector<std::vector<std::int64_t>> a = s.matrix;
            int k = 1;
            auto max_rowsum = [&](const std::vector<std::vector<std::int64_t>>& mm) {
                std::int64_t best = 0;
                for (auto& row : mm) best = std::max(best, std::accumulate(row.begin(), row.end(), std::int64_t{0}));
                return best;
            };
            while (k < 40 && max_rowsum(a) < (std::int64_t{1} << 40)) {
                std::vector<std::vector<std::int64_t>> b(m, std::vector<std::int64_t>(m, 0));
                for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t l = 0; l < m; ++l)
                        if (a[i][l])
                            for (std::size_t j = 0; j < m; ++j) b[i][j] += a[i][l] * s.matrix[l][j];
                a = std::move(b);
                ++k;
            }
            std::int64_t lo = INT64_MAX, hi = 0;
            for (auto& row : a) {
                std::int64_t rs = std::accumulate(row.begin(), row.end(), std::int64_t{0});
                lo = std::min(lo, rs);
                hi = std::max(hi, rs);
            }
            s.lambda_lo = std::pow(static_cast<double>(std::max<std::int64_t>(lo, 1)), 1.0 / k);
            s.lambda_hi = std::pow(static_cast<double>(hi), 1.0 / k);
        }

        // Aperiodicity: gcd of cycle lengths in the stratum digraph is 1.
        {
            std::vector<std::vector<std::size_t>> adj(m);
            for (std::size_t j = 0; j < m; ++j)
                for (std::size_t i = 0; i < m; ++i)
                    if (s.matrix[i][j]) adj[j].push_back(i);  // j -> i: image of j crosses i
            std::vector<int> level(m, -1);
            std::vector<std::size_t> queue{0};
            level[0] = 0;
            std::size_t qi = 0;
            std::int64_t g = 0;
            while (qi < queue.size()) {
                std::size_t u = queue[qi++];
                for (std::size_t v : adj[u]) {
                    if (level[v] == -1) {
                        level[v] = level[u] + 1;
                        queue.push_back(v);
                    } else {
                        g = std::gcd(g, static_cast<std::int64_t>(level[u] + 1 - level[v]));
                    }
                }
            }
            s.aperiodic = (g == 1);
        }

        // Parabolic single-edge prefix form f(E) = E u.
        if (m == 1) {
            std::int32_t e = s.edges[0];
            const EdgePath& im = images_[e];
            if (!im.empty() && im.letters.front() == OrientedEdge::forward(e)) {
                s.prefix_form = true;
                s.prefix_edge = e;
                s.suffix = subpath(im, 1, im.size());
                s.suffix.basepoint = graph_.terminal(im.letters.front());
            }
        }
    }

    void build_turn_table() {
        for (Turn t : all_turns()) turn_legal_.emplace(t, is_legal_turn(t));
    }

    MarkedGraph graph_;
    std::vector<VertexId> vertex_map_;
    std::vector<EdgePath> images_;
    std::size_t word_cap_;
    int power_;
    std::size_t L_ = 0;
    Filtration filtration_;
    std::unordered_map<Turn, bool, TurnHash> turn_legal_;
};

inline int weight_of(const GraphMap& f, const EdgePath& p) { return f.filtration().weight(p); }

}  // namespace ttrack
