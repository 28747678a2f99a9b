#include "hhwalk/graph.hpp"

#include "hhwalk/error.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace hhwalk {

Graph::Graph(std::size_t node_count, std::span<const Edge> edges)
{
    std::vector<EdgeIndex> degree(node_count, 0);
    for (const Edge& e : edges) {
        require(e.u < node_count && e.v < node_count, "edge endpoint out of range");
        require(e.u != e.v, "self-loop at node " + std::to_string(e.u));
        ++degree[e.u];
        ++degree[e.v];
    }
    offsets_.assign(node_count + 1, 0);
    for (std::size_t v = 0; v < node_count; ++v)
        offsets_[v + 1] = offsets_[v] + degree[v];
    targets_.resize(offsets_.back());
    std::vector<EdgeIndex> fill(offsets_.begin(), offsets_.end() - 1);
    for (const Edge& e : edges) {
        targets_[fill[e.u]++] = e.v;
        targets_[fill[e.v]++] = e.u;
    }
    sources_.resize(targets_.size());
    for (std::size_t v = 0; v < node_count; ++v) {
        auto first = targets_.begin() + offsets_[v];
        auto last = targets_.begin() + offsets_[v + 1];
        std::sort(first, last);
        require(std::adjacent_find(first, last) == last, "duplicate edge at node " + std::to_string(v));
        std::fill(sources_.begin() + offsets_[v], sources_.begin() + offsets_[v + 1], static_cast<NodeId>(v));
    }
}

bool Graph::has_edge(NodeId u, NodeId v) const
{
    if (u >= node_count() || v >= node_count())
        return false;
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

EdgeIndex Graph::edge_index(NodeId u, NodeId v) const
{
    require(u < node_count() && v < node_count(), "node out of range");
    auto nb = neighbors(u);
    auto it = std::lower_bound(nb.begin(), nb.end(), v);
    require(it != nb.end() && *it == v,
            "no edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    return offsets_[u] + static_cast<EdgeIndex>(it - nb.begin());
}

std::vector<NodeId> Graph::common_neighbors(NodeId u, NodeId v) const
{
    std::vector<NodeId> out;
    auto a = neighbors(u);
    auto b = neighbors(v);
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<Edge> Graph::edges() const
{
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < node_count(); ++u)
        for (NodeId v : neighbors(u))
            if (u < v)
                out.push_back({u, v});
    return out;
}

bool Graph::is_connected() const
{
    const std::size_t n = node_count();
    if (n == 0)
        return false;
    std::vector<char> seen(n, 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        for (NodeId w : neighbors(v)) {
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    return reached == n;
}

bool Graph::has_triangle() const
{
    for (NodeId u = 0; u < node_count(); ++u) {
        for (NodeId v : neighbors(u)) {
            if (v <= u)
                continue;
            auto a = neighbors(u);
            auto b = neighbors(v);
            auto i = a.begin();
            auto j = b.begin();
            while (i != a.end() && j != b.end()) {
                if (*i < *j)
                    ++i;
                else if (*j < *i)
                    ++j;
                else
                    return true;
            }
        }
    }
    return false;
}

void write_edge_list(std::ostream& out, const Graph& g)
{
    for (const Edge& e : g.edges())
        out << e.u << ' ' << e.v << '\n';
}

void write_edge_list(const std::string& path, const Graph& g)
{
    std::ofstream out(path);
    if (!out)
        fail(ErrorCode::io, "cannot open " + path + " for writing");
    write_edge_list(out, g);
}

Graph read_edge_list(std::istream& in, std::size_t node_count)
{
    std::vector<Edge> edges;
    std::string line;
    std::size_t max_id = 0;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream ls(line);
        long long u = -1;
        long long v = -1;
        if (!(ls >> u >> v) || u < 0 || v < 0)
            fail(ErrorCode::io, "malformed edge on line " + std::to_string(lineno));
        const auto a = static_cast<NodeId>(std::min(u, v));
        const auto b = static_cast<NodeId>(std::max(u, v));
        edges.push_back({a, b});
        max_id = std::max<std::size_t>(max_id, b);
    }
    const std::size_t n = node_count != 0 ? node_count : (edges.empty() ? 0 : max_id + 1);
    return Graph(n, edges);
}

Graph read_edge_list(const std::string& path, std::size_t node_count)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorCode::io, "cannot open " + path);
    return read_edge_list(in, node_count);
}

} // namespace hhwalk
