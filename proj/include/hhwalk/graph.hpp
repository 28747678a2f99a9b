#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hhwalk {

using NodeId = std::uint32_t;
using EdgeIndex = std::uint32_t;

/// An undirected edge stored with `u < v`.
struct Edge {
    NodeId u;
    NodeId v;
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable simple undirected graph in CSR form.
///
/// Neighbor lists are sorted. Directed edge (u, neighbors(u)[i]) has index
/// `offset(u) + i`, so the directed-edge state space is the range
/// [0, directed_edge_count()).
class Graph {
public:
    Graph() = default;

    /// Builds from an undirected edge list. Rejects self-loops, duplicate
    /// edges and out-of-range endpoints.
    Graph(std::size_t node_count, std::span<const Edge> edges);

    std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const { return targets_.size() / 2; }
    std::size_t directed_edge_count() const { return targets_.size(); }

    std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
    std::span<const NodeId> neighbors(NodeId v) const
    {
        return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
    }
    EdgeIndex offset(NodeId v) const { return offsets_[v]; }

    bool has_edge(NodeId u, NodeId v) const;

    /// Index of directed edge (u, v), or throws if the edge does not exist.
    EdgeIndex edge_index(NodeId u, NodeId v) const;
    NodeId edge_source(EdgeIndex e) const { return sources_[e]; }
    NodeId edge_target(EdgeIndex e) const { return targets_[e]; }

    /// Sorted-list intersection of the neighborhoods of u and v.
    std::vector<NodeId> common_neighbors(NodeId u, NodeId v) const;

    /// Undirected edges with u < v, in lexicographic order.
    std::vector<Edge> edges() const;

    bool is_connected() const;
    bool has_triangle() const;

    friend bool operator==(const Graph& a, const Graph& b)
    {
        return a.offsets_ == b.offsets_ && a.targets_ == b.targets_;
    }

private:
    std::vector<EdgeIndex> offsets_;
    std::vector<NodeId> targets_;
    std::vector<NodeId> sources_;
};

/// Writes one `u v` line per undirected edge (u < v, sorted).
void write_edge_list(std::ostream& out, const Graph& g);
void write_edge_list(const std::string& path, const Graph& g);

/// Reads the format produced by `write_edge_list`. Blank lines and lines
/// starting with '#' are skipped. The node count is one more than the
/// largest id unless `node_count` is given.
Graph read_edge_list(std::istream& in, std::size_t node_count = 0);
Graph read_edge_list(const std::string& path, std::size_t node_count = 0);

} // namespace hhwalk
