#include "hhwalk/household.hpp"

#include "hhwalk/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace hhwalk {

namespace {

std::vector<Edge> normalized(std::vector<Edge> edges)
{
    for (Edge& e : edges)
        if (e.u > e.v)
            std::swap(e.u, e.v);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

std::vector<Edge> clique_edges(std::size_t k)
{
    std::vector<Edge> out;
    for (NodeId u = 0; u < k; ++u)
        for (NodeId v = u + 1; v < k; ++v)
            out.push_back({u, v});
    return out;
}

std::vector<Edge> ring_edges(std::size_t k)
{
    std::vector<Edge> out;
    for (NodeId i = 0; i < k; ++i) {
        out.push_back({i, static_cast<NodeId>((i + 1) % k)});
        out.push_back({i, static_cast<NodeId>((i + 2) % k)});
    }
    return normalized(std::move(out));
}

// Relabels the subgraph induced on [first, first+k) to 0..k-1.
std::vector<Edge> induced_edges(const Graph& g, NodeId first, std::size_t k)
{
    std::vector<Edge> out;
    for (NodeId v = first; v < first + k; ++v)
        for (NodeId w : g.neighbors(v))
            if (w > v && w < first + k)
                out.push_back({v - first, w - first});
    return out;
}

} // namespace

CommunityTemplate CommunityTemplate::clique(std::size_t k)
{
    require(k >= 1, "community size must be positive");
    return CommunityTemplate(TemplateKind::clique, k, clique_edges(k));
}

CommunityTemplate CommunityTemplate::ring(std::size_t k)
{
    if (k <= 5)
        return clique(k);
    return CommunityTemplate(TemplateKind::ring, k, ring_edges(k));
}

CommunityTemplate CommunityTemplate::custom(std::size_t k, std::vector<Edge> edges)
{
    require(k >= 1, "community size must be positive");
    require(k <= max_custom_template_size,
            "custom templates above " + std::to_string(max_custom_template_size) +
                " nodes cannot be verified as automorphic");
    for (const Edge& e : edges)
        require(e.u < k && e.v < k && e.u != e.v, "custom template edge out of range or self-loop");
    auto norm = normalized(std::move(edges));
    if (!is_automorphic_community(k, norm))
        fail(ErrorCode::not_automorphic, "custom template of size " + std::to_string(k) + " is not an automorphic community");
    return CommunityTemplate(TemplateKind::custom, k, std::move(norm));
}

std::string CommunityTemplate::name() const
{
    switch (kind_) {
    case TemplateKind::clique:
        return "C" + std::to_string(size_);
    case TemplateKind::ring:
        return "R" + std::to_string(size_);
    case TemplateKind::custom:
        break;
    }
    std::ostringstream os;
    os << 'X' << size_ << ':';
    for (std::size_t i = 0; i < edges_.size(); ++i)
        os << (i ? "," : "") << edges_[i].u << '-' << edges_[i].v;
    return os.str();
}

bool is_automorphic_community(std::size_t k, std::span<const Edge> edges)
{
    if (k == 0 || k > max_custom_template_size)
        return false;
    std::vector<Edge> list(edges.begin(), edges.end());
    const Graph g(k, list);
    if (!g.is_connected())
        return false;

    std::array<std::array<bool, max_custom_template_size>, max_custom_template_size> adj{};
    for (const Edge& e : edges)
        adj[e.u][e.v] = adj[e.v][e.u] = true;

    std::vector<NodeId> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<char> reached(k, 0);
    std::size_t reached_count = 0;
    do {
        if (reached[perm[0]])
            continue;
        bool automorphism = true;
        for (std::size_t i = 0; i < k && automorphism; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                if (adj[i][j] != adj[perm[i]][perm[j]]) {
                    automorphism = false;
                    break;
                }
        if (automorphism) {
            reached[perm[0]] = 1;
            if (++reached_count == k)
                return true;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

TemplatePolicy clique_policy()
{
    return [](std::size_t d) { return CommunityTemplate::clique(d); };
}

TemplatePolicy ring_policy()
{
    return [](std::size_t d) { return CommunityTemplate::ring(d); };
}

std::uint64_t DegreeSequence::sum() const
{
    return std::accumulate(values.begin(), values.end(), std::uint64_t{0});
}

std::uint32_t sample_poisson(double lambda, Pcg32& rng)
{
    require(lambda > 0 && std::isfinite(lambda), "Poisson mean must be positive and finite");
    constexpr double chunk = 30.0;
    std::uint32_t total = 0;
    double remaining = lambda;
    while (remaining > 0) {
        const double mean = std::min(remaining, chunk);
        remaining -= mean;
        double p = std::exp(-mean);
        double cdf = p;
        const double u = rng.uniform01();
        std::uint32_t x = 0;
        // The cdf can stall just below 1 in floating point; the cap sits far
        // in the tail of a mean-30 Poisson.
        while (u > cdf && x < 1000) {
            ++x;
            p *= mean / x;
            cdf += p;
        }
        total += x;
    }
    return total;
}

DegreeSequence sample_poisson_degrees(std::size_t n, double lambda, Pcg32& rng, std::size_t max_retries)
{
    require(n >= 2, "need at least two degrees");
    require(lambda > 0, "Poisson mean must be positive");

    auto draw_positive = [&] {
        for (std::size_t attempt = 0; attempt < max_retries; ++attempt)
            if (auto d = sample_poisson(lambda, rng); d >= 1)
                return d;
        fail(ErrorCode::retries_exhausted,
             "no positive Poisson draw within " + std::to_string(max_retries) + " attempts; lambda is too small");
    };

    DegreeSequence seq;
    seq.values.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        seq.values.push_back(draw_positive());

    const std::uint64_t head = seq.sum() - seq.values.back();
    for (std::size_t attempt = 0; (head + seq.values.back()) % 2 != 0; ++attempt) {
        if (attempt == max_retries)
            fail(ErrorCode::retries_exhausted, "could not repair degree-sum parity");
        seq.values.back() = draw_positive();
    }
    return seq;
}

Graph sample_configuration_model(const DegreeSequence& degrees, Pcg32& rng, std::size_t max_retries)
{
    const std::size_t n = degrees.values.size();
    require(n >= 1, "empty degree sequence");
    require(std::all_of(degrees.values.begin(), degrees.values.end(), [](auto d) { return d >= 1; }),
            "degrees must be positive");
    require(degrees.sum() % 2 == 0, "degree sum must be even");

    std::vector<NodeId> stubs;
    stubs.reserve(degrees.sum());
    for (NodeId v = 0; v < n; ++v)
        stubs.insert(stubs.end(), degrees.values[v], v);

    std::vector<Edge> edges(stubs.size() / 2);
    for (std::size_t attempt = 0; attempt < max_retries; ++attempt) {
        for (std::size_t i = stubs.size(); i > 1; --i)
            std::swap(stubs[i - 1], stubs[rng.bounded(static_cast<std::uint32_t>(i))]);

        bool simple = true;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            NodeId a = stubs[2 * i];
            NodeId b = stubs[2 * i + 1];
            if (a == b) {
                simple = false;
                break;
            }
            edges[i] = {std::min(a, b), std::max(a, b)};
        }
        if (!simple)
            continue;
        auto sorted = edges;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            continue;
        Graph g(n, sorted);
        if (g.is_connected())
            return g;
    }
    fail(ErrorCode::retries_exhausted,
         "no simple connected pairing within " + std::to_string(max_retries) +
             " attempts; the degree sequence is unlikely to admit one");
}

std::vector<std::string> universe_violations(const Graph& universe)
{
    std::vector<std::string> out;
    if (universe.node_count() < 2)
        out.emplace_back("universe graph needs at least two nodes");
    else if (!universe.is_connected())
        out.emplace_back("universe graph is not connected");
    bool has_branch = false;
    for (NodeId v = 0; v < universe.node_count(); ++v)
        has_branch = has_branch || universe.degree(v) >= 3;
    if (!has_branch)
        out.emplace_back("universe graph has no node of degree >= 3");
    return out;
}

HouseholdGraph::HouseholdGraph(Graph graph, Graph universe, std::vector<std::uint32_t> community_of,
                               std::vector<Community> communities)
    : graph_(std::move(graph)),
      universe_(std::move(universe)),
      community_of_(std::move(community_of)),
      communities_(std::move(communities)),
      arm_of_(graph_.node_count(), no_arm)
{
    require(community_of_.size() == graph_.node_count(), "community map does not cover every node");
    for (NodeId v = 0; v < graph_.node_count(); ++v) {
        require(community_of_[v] < communities_.size(), "community id out of range");
        std::size_t external = 0;
        for (NodeId w : graph_.neighbors(v)) {
            if (community_of_[w] != community_of_[v]) {
                ++external;
                arm_of_[v] = w;
            }
        }
        if (external != 1)
            arm_of_[v] = no_arm;
    }
}

HouseholdGraph HouseholdGraph::expand(const Graph& universe, const TemplatePolicy& policy)
{
    require(universe.node_count() >= 2 && universe.is_connected(), "universe graph must be connected with at least two nodes");

    const std::size_t n = universe.node_count();
    std::vector<Community> communities;
    communities.reserve(n);
    NodeId next = 0;
    for (NodeId c = 0; c < n; ++c) {
        const std::size_t d = universe.degree(c);
        CommunityTemplate shape = policy(d);
        if (shape.size() != d)
            fail(ErrorCode::template_size_mismatch, "template " + shape.name() + " chosen for universe node " +
                                                        std::to_string(c) + " of degree " + std::to_string(d));
        communities.push_back({std::move(shape), next, c});
        next += static_cast<NodeId>(d);
    }

    std::vector<std::uint32_t> community_of(next);
    std::vector<Edge> edges;
    for (const Community& com : communities) {
        std::fill_n(community_of.begin() + com.first, com.size(), com.universe_node);
        for (const Edge& e : com.shape.edges())
            edges.push_back({com.first + e.u, com.first + e.v});
    }
    for (NodeId a = 0; a < n; ++a) {
        auto nb = universe.neighbors(a);
        for (std::size_t j = 0; j < nb.size(); ++j) {
            const NodeId b = nb[j];
            if (b < a)
                continue;
            auto back = universe.neighbors(b);
            const auto i = static_cast<NodeId>(std::lower_bound(back.begin(), back.end(), a) - back.begin());
            edges.push_back({communities[a].first + static_cast<NodeId>(j), communities[b].first + i});
        }
    }
    std::sort(edges.begin(), edges.end());
    return HouseholdGraph(Graph(next, edges), universe, std::move(community_of), std::move(communities));
}

HouseholdGraph HouseholdGraph::from_membership(const Graph& graph, std::span<const std::uint32_t> community_of)
{
    const std::size_t n = graph.node_count();
    require(community_of.size() == n, "community map size differs from node count");
    require(n > 0, "empty graph");

    std::vector<Community> communities;
    NodeId first = 0;
    for (NodeId v = 1; v <= n; ++v) {
        if (v < n && community_of[v] == community_of[first])
            continue;
        require(community_of[first] == communities.size(),
                "communities must occupy contiguous node blocks numbered in order");
        const std::size_t k = v - first;
        auto edges = normalized(induced_edges(graph, first, k));
        CommunityTemplate shape = CommunityTemplate::clique(k);
        if (edges != shape.edges()) {
            shape = CommunityTemplate::ring(k);
            if (edges != shape.edges())
                shape = CommunityTemplate::custom(k, std::move(edges));
        }
        communities.push_back({std::move(shape), first, static_cast<NodeId>(communities.size())});
        first = v;
    }

    std::vector<std::uint32_t> map(community_of.begin(), community_of.end());
    HouseholdGraph partial(graph, Graph(), map, communities);
    Graph universe = partial.contract();
    return HouseholdGraph(graph, std::move(universe), std::move(map), std::move(communities));
}

Graph HouseholdGraph::contract() const
{
    std::vector<Edge> edges;
    for (NodeId v = 0; v < graph_.node_count(); ++v)
        for (NodeId w : graph_.neighbors(v)) {
            const NodeId a = community_of_[v];
            const NodeId b = community_of_[w];
            if (a < b)
                edges.push_back({a, b});
        }
    edges = normalized(std::move(edges));
    return Graph(communities_.size(), edges);
}

std::vector<std::string> HouseholdGraph::violations() const
{
    std::vector<std::string> out;
    auto report = [&](std::string msg) { out.push_back(std::move(msg)); };

    if (universe_.node_count() != communities_.size())
        report("community count " + std::to_string(communities_.size()) + " differs from universe size " +
               std::to_string(universe_.node_count()));

    for (std::uint32_t c = 0; c < communities_.size(); ++c) {
        const Community& com = communities_[c];
        const std::string tag = "community " + std::to_string(c) + ": ";
        if (com.first + com.size() > graph_.node_count()) {
            report(tag + "member block exceeds node range");
            continue;
        }
        for (NodeId v = com.first; v < com.first + com.size(); ++v)
            if (community_of_[v] != c)
                report(tag + "node " + std::to_string(v) + " is mapped to community " + std::to_string(community_of_[v]));

        if (com.universe_node < universe_.node_count() && universe_.degree(com.universe_node) != com.size())
            report(tag + "size " + std::to_string(com.size()) + " differs from universe degree " +
                   std::to_string(universe_.degree(com.universe_node)));

        if (normalized(induced_edges(graph_, com.first, com.size())) != com.shape.edges())
            report(tag + "internal edges do not match template " + com.shape.name());

        std::vector<NodeId> arm_targets;
        for (NodeId v = com.first; v < com.first + com.size(); ++v) {
            std::size_t external = 0;
            for (NodeId w : graph_.neighbors(v))
                if (community_of_[w] != c) {
                    ++external;
                    arm_targets.push_back(community_of_[w]);
                }
            if (external != 1)
                report(tag + "node " + std::to_string(v) + " has " + std::to_string(external) +
                       " arm edges, expected exactly 1");
        }
        std::sort(arm_targets.begin(), arm_targets.end());
        if (std::adjacent_find(arm_targets.begin(), arm_targets.end()) != arm_targets.end())
            report(tag + "several arms lead to the same neighboring community");
        if (com.universe_node < universe_.node_count()) {
            auto expected = universe_.neighbors(com.universe_node);
            std::vector<NodeId> unique_targets(arm_targets.begin(), arm_targets.end());
            unique_targets.erase(std::unique(unique_targets.begin(), unique_targets.end()), unique_targets.end());
            if (!std::equal(unique_targets.begin(), unique_targets.end(), expected.begin(), expected.end()))
                report(tag + "arm targets do not match the universe neighbors");
        }
    }

    if (!graph_.is_connected())
        report("household graph is not connected");
    if (!graph_.has_triangle())
        report("household graph contains no triangle (the walk chain may be periodic)");
    return out;
}

std::vector<NodeId> common_neighbors(const HouseholdGraph& g, NodeId u, NodeId v)
{
    require(u != v, "common_neighbors needs two distinct nodes");
    return g.graph().common_neighbors(u, v);
}

void write_community_map(const std::string& path, const HouseholdGraph& g)
{
    std::ofstream out(path);
    if (!out)
        fail(ErrorCode::io, "cannot open " + path + " for writing");
    for (NodeId v = 0; v < g.node_count(); ++v)
        out << v << ' ' << g.community_of(v) << '\n';
}

std::vector<std::uint32_t> read_community_map(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorCode::io, "cannot open " + path);
    std::vector<std::uint32_t> map;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream ls(line);
        long long node = -1;
        long long com = -1;
        if (!(ls >> node >> com) || node < 0 || com < 0)
            fail(ErrorCode::io, "malformed community line: " + line);
        if (static_cast<std::size_t>(node) >= map.size())
            map.resize(node + 1, static_cast<std::uint32_t>(-1));
        map[node] = static_cast<std::uint32_t>(com);
    }
    for (std::size_t v = 0; v < map.size(); ++v)
        if (map[v] == static_cast<std::uint32_t>(-1))
            fail(ErrorCode::io, "community map misses node " + std::to_string(v));
    return map;
}

} // namespace hhwalk
