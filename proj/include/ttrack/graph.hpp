#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ttrack {

enum class errc {
    unknown_edge,
    unknown_vertex,
    not_incident,
    parse_error,
    invalid_map,
    cap_exceeded,
    empty_path,
    not_iterated,
    missing_inventory,
    io_error,
};

class error : public std::runtime_error {
  public:
    error(errc code, std::string what) : std::runtime_error(std::move(what)), code_(code) {}
    errc code() const noexcept { return code_; }

  private:
    errc code_;
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::unknown_edge: return "UnknownEdge";
        case errc::unknown_vertex: return "UnknownVertex";
        case errc::not_incident: return "NotIncident";
        case errc::parse_error: return "ParseError";
        case errc::invalid_map: return "InvalidMap";
        case errc::cap_exceeded: return "CapExceeded";
        case errc::empty_path: return "EmptyPath";
        case errc::not_iterated: return "NotIterated";
        case errc::missing_inventory: return "MissingInventory";
        case errc::io_error: return "IoError";
    }
    return "Error";
}

using VertexId = std::int32_t;

/// An edge of the graph together with a direction of traversal.
/// Edge i travelled forwards has code 2i, backwards 2i+1, so reversal is a
/// fixed-point-free involution that just flips the low bit.
class OrientedEdge {
  public:
    OrientedEdge() : code_(-1) {}
    static OrientedEdge forward(std::int32_t edge_index) { return OrientedEdge(2 * edge_index); }
    static OrientedEdge backward(std::int32_t edge_index) { return OrientedEdge(2 * edge_index + 1); }
    static OrientedEdge from_code(std::int32_t code) { return OrientedEdge(code); }

    std::int32_t code() const { return code_; }
    std::int32_t edge_index() const { return code_ >> 1; }
    bool is_reversed() const { return (code_ & 1) != 0; }
    OrientedEdge reversal() const { return OrientedEdge(code_ ^ 1); }
    bool valid() const { return code_ >= 0; }

    friend bool operator==(OrientedEdge a, OrientedEdge b) { return a.code_ == b.code_; }
    friend bool operator!=(OrientedEdge a, OrientedEdge b) { return a.code_ != b.code_; }
    friend bool operator<(OrientedEdge a, OrientedEdge b) { return a.code_ < b.code_; }

  private:
    explicit OrientedEdge(std::int32_t code) : code_(code) {}
    std::int32_t code_;
};

struct EdgeRecord {
    std::string name;
    VertexId from = -1;
    VertexId to = -1;
};

/// A finite graph with named vertices and named, oriented edges.
/// Immutable once built (all mutators are for construction only).
class MarkedGraph {
  public:
    VertexId add_vertex(const std::string& name) {
        auto it = vertex_ids_.find(name);
        if (it != vertex_ids_.end()) return it->second;
        VertexId id = static_cast<VertexId>(vertex_names_.size());
        vertex_names_.push_back(name);
        vertex_ids_.emplace(name, id);
        return id;
    }

    std::int32_t add_edge(const std::string& name, const std::string& from, const std::string& to) {
        if (edge_ids_.count(name))
            throw error(errc::parse_error, "duplicate edge name: " + name);
        EdgeRecord rec{name, add_vertex(from), add_vertex(to)};
        std::int32_t idx = static_cast<std::int32_t>(edges_.size());
        edges_.push_back(std::move(rec));
        edge_ids_.emplace(name, idx);
        return idx;
    }

    void set_basepoint(VertexId v) { basepoint_ = v; }

    std::size_t vertex_count() const { return vertex_names_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    std::size_t oriented_count() const { return 2 * edges_.size(); }

    const EdgeRecord& edge(std::int32_t index) const { return edges_.at(index); }
    const std::string& vertex_name(VertexId v) const { return vertex_names_.at(v); }

    VertexId vertex_id(std::string_view name) const {
        auto it = vertex_ids_.find(std::string(name));
        if (it == vertex_ids_.end())
            throw error(errc::unknown_vertex, "unknown vertex: " + std::string(name));
        return it->second;
    }

    bool has_edge(std::string_view name) const { return edge_ids_.count(std::string(name)) != 0; }

    std::int32_t edge_index(std::string_view name) const {
        auto it = edge_ids_.find(std::string(name));
        if (it == edge_ids_.end())
            throw error(errc::unknown_edge, "unknown edge: " + std::string(name));
        return it->second;
    }

    VertexId initial(OrientedEdge e) const {
        const EdgeRecord& r = edges_[e.edge_index()];
        return e.is_reversed() ? r.to : r.from;
    }
    VertexId terminal(OrientedEdge e) const {
        const EdgeRecord& r = edges_[e.edge_index()];
        return e.is_reversed() ? r.from : r.to;
    }

    /// Basepoint used by empty paths; defaults to the first edge's origin.
    VertexId basepoint() const {
        if (basepoint_ >= 0) return basepoint_;
        if (!edges_.empty()) return edges_[0].from;
        return 0;
    }

    std::vector<OrientedEdge> all_oriented() const {
        std::vector<OrientedEdge> out;
        out.reserve(oriented_count());
        for (std::int32_t i = 0; i < static_cast<std::int32_t>(edges_.size()); ++i) {
            out.push_back(OrientedEdge::forward(i));
            out.push_back(OrientedEdge::backward(i));
        }
        return out;
    }

    /// Oriented edges whose initial vertex is v.
    std::vector<OrientedEdge> star(VertexId v) const {
        std::vector<OrientedEdge> out;
        for (OrientedEdge e : all_oriented())
            if (initial(e) == v) out.push_back(e);
        return out;
    }

    std::string token(OrientedEdge e) const {
        const std::string& n = edges_[e.edge_index()].name;
        return e.is_reversed() ? "~" + n : n;
    }

    OrientedEdge parse_token(std::string_view tok) const {
        bool rev = !tok.empty() && tok.front() == '~';
        std::string_view name = rev ? tok.substr(1) : tok;
        std::int32_t idx = edge_index(name);
        return rev ? OrientedEdge::backward(idx) : OrientedEdge::forward(idx);
    }

  private:
    std::vector<std::string> vertex_names_;
    std::unordered_map<std::string, VertexId> vertex_ids_;
    std::vector<EdgeRecord> edges_;
    std::unordered_map<std::string, std::int32_t> edge_ids_;
    VertexId basepoint_ = -1;
};

}  // namespace ttrack
