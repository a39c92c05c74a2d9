#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ttrack/graph.hpp"
#include "ttrack/path.hpp"
#include "ttrack/traintrack.hpp"

namespace ttrack {

/// Line-oriented map description:
///   # comment
///   edge NAME V_FROM V_TO
///   map NAME = TOKENS            (path literal; ~NAME reverses)
///   vertexmap V W                (optional; defaults to identity on vertices)
///   fix V                        (asserts f(V) = V; verified)
///   order NAME NAME ...          (asserted stratum order; verified)
///   basepoint V                  (basepoint for empty paths)
inline GraphMap load_ttm(std::istream& in, std::size_t word_cap = 1'000'000) {
    MarkedGraph g;
    std::vector<std::pair<std::string, std::string>> images;  // edge name -> literal
    std::vector<std::pair<std::string, std::string>> vmaps;
    std::vector<std::string> fixed;
    std::vector<std::string> order;
    std::optional<std::string> basepoint;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        auto fail = [&](const std::string& msg) -> void {
            throw error(errc::parse_error, "line " + std::to_string(lineno) + ": " + msg);
        };
        if (kw == "edge") {
            std::string name, from, to, extra;
            if (!(ls >> name >> from >> to)) fail("expected: edge NAME V_FROM V_TO");
            if (ls >> extra) fail("trailing tokens after edge declaration");
            g.add_edge(name, from, to);
        } else if (kw == "map") {
            std::string name, eq;
            if (!(ls >> name >> eq) || eq != "=") fail("expected: map NAME = TOKENS");
            std::string rest;
            std::getline(ls, rest);
            images.emplace_back(name, rest);
        } else if (kw == "vertexmap") {
            std::string v, w;
            if (!(ls >> v >> w)) fail("expected: vertexmap V W");
            vmaps.emplace_back(v, w);
        } else if (kw == "fix") {
            std::string v;
            if (!(ls >> v)) fail("expected: fix V");
            fixed.push_back(v);
        } else if (kw == "order") {
            std::string name;
            order.clear();
            while (ls >> name) order.push_back(name);
            if (order.empty()) fail("expected: order NAME ...");
        } else if (kw == "basepoint") {
            std::string v;
            if (!(ls >> v)) fail("expected: basepoint V");
            basepoint = v;
        } else {
            fail("unknown directive: " + kw);
        }
    }

    if (g.edge_count() == 0) throw error(errc::parse_error, "no edges declared");
    if (basepoint) g.set_basepoint(g.vertex_id(*basepoint));

    std::vector<EdgePath> edge_images(g.edge_count());
    std::vector<bool> have(g.edge_count(), false);
    for (auto& [name, literal] : images) {
        std::int32_t idx = g.edge_index(name);
        if (have[idx]) throw error(errc::parse_error, "duplicate map for edge: " + name);
        edge_images[idx] = tighten(parse_path(g, literal));
        have[idx] = true;
    }
    for (std::size_t i = 0; i < have.size(); ++i)
        if (!have[i]) throw error(errc::parse_error, "no map for edge: " + g.edge(i).name);

    // Vertex map: explicit entries override; everything else is forced by the
    // edge images (a vertex goes where the images of its incident edges say).
    std::vector<VertexId> vmap(g.vertex_count(), -1);
    for (auto& [v, w] : vmaps) vmap[g.vertex_id(v)] = g.vertex_id(w);
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        const EdgeRecord& rec = g.edge(static_cast<std::int32_t>(e));
        VertexId a = initial_vertex(g, edge_images[e]);
        VertexId b = terminal_vertex(g, edge_images[e]);
        if (vmap[rec.from] == -1) vmap[rec.from] = a;
        if (vmap[rec.to] == -1) vmap[rec.to] = b;
    }
    for (std::size_t v = 0; v < vmap.size(); ++v)
        if (vmap[v] == -1) vmap[v] = static_cast<VertexId>(v);

    GraphMap fmap(std::move(g), std::move(vmap), std::move(edge_images), word_cap);

    for (const std::string& v : fixed) {
        VertexId id = fmap.graph().vertex_id(v);
        if (fmap.vertex_image(id) != id)
            throw error(errc::invalid_map, "fix " + v + " asserted but f(" + v + ") = " +
                                               fmap.graph().vertex_name(fmap.vertex_image(id)));
    }
    if (!order.empty()) {
        int prev = 0;
        for (const std::string& name : order) {
            int s = fmap.filtration().stratum_of_edge[fmap.graph().edge_index(name)];
            if (s < prev)
                throw error(errc::invalid_map, "asserted stratum order violated at edge " + name);
            prev = s;
        }
    }
    return fmap;
}

inline GraphMap load_ttm_file(const std::string& path, std::size_t word_cap = 1'000'000) {
    std::ifstream in(path);
    if (!in) throw error(errc::io_error, "cannot open " + path);
    return load_ttm(in, word_cap);
}

inline GraphMap load_ttm_string(const std::string& text, std::size_t word_cap = 1'000'000) {
    std::istringstream in(text);
    return load_ttm(in, word_cap);
}

}  // namespace ttrack
