#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ttrack/graph.hpp"

namespace ttrack {

/// An edge path: a sequence of oriented edges in which consecutive edges are
/// incident.  The empty path carries an explicit basepoint so endpoint
/// queries stay total.  Paths are plain values; nothing here mutates after
/// construction except through whole-value assignment.
struct EdgePath {
    std::vector<OrientedEdge> letters;
    VertexId basepoint = 0;  // initial vertex when empty

    bool empty() const { return letters.empty(); }
    std::size_t size() const { return letters.size(); }
    OrientedEdge operator[](std::size_t i) const { return letters[i]; }

    friend bool operator==(const EdgePath& a, const EdgePath& b) {
        if (a.letters.size() != b.letters.size()) return false;
        if (a.letters.empty()) return a.basepoint == b.basepoint;
        return a.letters == b.letters;
    }
    friend bool operator!=(const EdgePath& a, const EdgePath& b) { return !(a == b); }
    friend bool operator<(const EdgePath& a, const EdgePath& b) {
        if (a.letters.size() != b.letters.size()) return a.letters.size() < b.letters.size();
        if (a.letters.empty()) return a.basepoint < b.basepoint;
        return std::lexicographical_compare(a.letters.begin(), a.letters.end(),
                                            b.letters.begin(), b.letters.end());
    }
};

inline VertexId initial_vertex(const MarkedGraph& g, const EdgePath& p) {
    return p.empty() ? p.basepoint : g.initial(p.letters.front());
}

inline VertexId terminal_vertex(const MarkedGraph& g, const EdgePath& p) {
    return p.empty() ? p.basepoint : g.terminal(p.letters.back());
}

inline bool is_incidence_valid(const MarkedGraph& g, const std::vector<OrientedEdge>& letters) {
    for (std::size_t i = 0; i + 1 < letters.size(); ++i)
        if (g.terminal(letters[i]) != g.initial(letters[i + 1])) return false;
    return true;
}

inline EdgePath make_path(const MarkedGraph& g, std::vector<OrientedEdge> letters) {
    for (std::size_t i = 0; i + 1 < letters.size(); ++i) {
        if (g.terminal(letters[i]) != g.initial(letters[i + 1]))
            throw error(errc::not_incident,
                        "edges not incident: " + g.token(letters[i]) + " then " + g.token(letters[i + 1]));
    }
    VertexId base = letters.empty() ? g.basepoint() : g.initial(letters.front());
    return EdgePath{std::move(letters), base};
}

inline EdgePath empty_path_at(VertexId v) { return EdgePath{{}, v}; }

/// Parses a whitespace-separated path literal; `~NAME` is the reversed edge.
/// Does not tighten.  The empty literal is the empty path at the basepoint.
inline EdgePath parse_path(const MarkedGraph& g, std::string_view text) {
    std::vector<OrientedEdge> letters;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) letters.push_back(g.parse_token(tok));
    return make_path(g, std::move(letters));
}

inline std::string format_path(const MarkedGraph& g, const EdgePath& p) {
    std::string out;
    for (std::size_t i = 0; i < p.letters.size(); ++i) {
        if (i) out += ' ';
        out += g.token(p.letters[i]);
    }
    return out;
}

inline bool is_tight(const EdgePath& p) {
    for (std::size_t i = 0; i + 1 < p.letters.size(); ++i)
        if (p.letters[i + 1] == p.letters[i].reversal()) return false;
    return true;
}

/// Free reduction by a single left-to-right pass with a pushdown of
/// surviving letters.  Endpoints are preserved; idempotent.
inline EdgePath tighten(const EdgePath& p) {
    std::vector<OrientedEdge> stack;
    stack.reserve(p.letters.size());
    for (OrientedEdge e : p.letters) {
        if (!stack.empty() && stack.back() == e.reversal())
            stack.pop_back();
        else
            stack.push_back(e);
    }
    return EdgePath{std::move(stack), p.basepoint};
}

/// Tightens and also reports, for each surviving letter, the index of the
/// originating letter in the input word.
inline EdgePath tighten_with_parents(const EdgePath& p, std::vector<std::size_t>& parents) {
    std::vector<OrientedEdge> stack;
    std::vector<std::size_t> origin;
    for (std::size_t i = 0; i < p.letters.size(); ++i) {
        OrientedEdge e = p.letters[i];
        if (!stack.empty() && stack.back() == e.reversal()) {
            stack.pop_back();
            origin.pop_back();
        } else {
            stack.push_back(e);
            origin.push_back(i);
        }
    }
    parents = std::move(origin);
    return EdgePath{std::move(stack), p.basepoint};
}

inline EdgePath reverse_path(const MarkedGraph& g, const EdgePath& p) {
    std::vector<OrientedEdge> out;
    out.reserve(p.letters.size());
    for (auto it = p.letters.rbegin(); it != p.letters.rend(); ++it) out.push_back(it->reversal());
    VertexId base = p.empty() ? p.basepoint : g.terminal(p.letters.back());
    return EdgePath{std::move(out), base};
}

/// Raw concatenation, untightened.
inline EdgePath concat(const MarkedGraph& g, const EdgePath& a, const EdgePath& b) {
    if (terminal_vertex(g, a) != initial_vertex(g, b))
        throw error(errc::not_incident, "concat: paths not incident");
    if (a.empty()) return b;
    EdgePath out = a;
    out.letters.insert(out.letters.end(), b.letters.begin(), b.letters.end());
    return out;
}

inline EdgePath subpath(const EdgePath& p, std::size_t lo, std::size_t hi) {
    EdgePath out;
    out.letters.assign(p.letters.begin() + lo, p.letters.begin() + hi);
    out.basepoint = p.basepoint;
    return out;
}

/// All contiguous nonempty sub edge-paths, ordered by start index then
/// length.  Sub edge-paths of a tight path are tight by construction.
inline std::vector<EdgePath> sub_edge_paths(const EdgePath& p, std::size_t max_len = 0) {
    std::vector<EdgePath> out;
    std::size_t n = p.size();
    std::size_t cap = max_len == 0 ? n : std::min(max_len, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t len = 1; len <= cap && i + len <= n; ++len)
            out.push_back(subpath(p, i, i + len));
    return out;
}

/// Does `needle` occur as a contiguous subword of `hay`?
inline bool contains_subpath(const EdgePath& hay, const EdgePath& needle) {
    if (needle.empty()) return true;
    if (needle.size() > hay.size()) return false;
    auto it = std::search(hay.letters.begin(), hay.letters.end(),
                          needle.letters.begin(), needle.letters.end());
    return it != hay.letters.end();
}

struct PathHash {
    std::size_t operator()(const EdgePath& p) const {
        std::size_t h = 1469598103934665603ull;
        auto mix = [&h](std::size_t v) {
            h ^= v;
            h *= 1099511628211ull;
        };
        mix(p.letters.empty() ? static_cast<std::size_t>(p.basepoint) + 0x9e37 : 0);
        for (OrientedEdge e : p.letters) mix(static_cast<std::size_t>(e.code()) + 1);
        return h;
    }
};

}  // namespace ttrack
