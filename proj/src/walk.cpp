#include "hhwalk/walk.hpp"

#include "hhwalk/error.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace hhwalk {

TransitionRow transition_weights(const Graph& g, const Node2vecParams& p, WalkState s)
{
    require(g.has_edge(s.prev, s.cur), "walk state is not an edge of the graph");
    TransitionRow row;
    auto prev_nb = g.neighbors(s.prev);
    for (NodeId w : g.neighbors(s.cur)) {
        double weight = p.gamma;
        if (w == s.prev)
            weight = p.alpha;
        else if (std::binary_search(prev_nb.begin(), prev_nb.end(), w))
            weight = p.beta;
        row.targets.push_back(w);
        row.weights.push_back(weight);
        row.total += weight;
    }
    if (!(row.total > 0))
        fail(ErrorCode::dead_end, "all transition weights vanish at state (" + std::to_string(s.prev) + "," +
                                      std::to_string(s.cur) + ")");
    return row;
}

Walker::Walker(const Graph& g, Node2vecParams p, Pcg32 rng) : g_(&g), p_(p), rng_(rng)
{
    p_.validate();
    require(g.directed_edge_count() > 0, "cannot walk on a graph without edges");
}

EdgeIndex Walker::step(EdgeIndex e)
{
    const NodeId prev = g_->edge_source(e);
    const NodeId cur = g_->edge_target(e);
    auto nb = g_->neighbors(cur);
    auto prev_nb = g_->neighbors(prev);

    cumulative_.resize(nb.size());
    double total = 0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < nb.size(); ++i) {
        const NodeId w = nb[i];
        double weight;
        if (w == prev) {
            weight = p_.alpha;
        } else {
            while (j < prev_nb.size() && prev_nb[j] < w)
                ++j;
            weight = (j < prev_nb.size() && prev_nb[j] == w) ? p_.beta : p_.gamma;
        }
        total += weight;
        cumulative_[i] = total;
    }
    if (!(total > 0))
        fail(ErrorCode::dead_end, "all transition weights vanish at state (" + std::to_string(prev) + "," +
                                      std::to_string(cur) + ")");

    const double u = rng_.uniform01() * total;
    std::size_t pick = 0;
    while (pick + 1 < nb.size() && cumulative_[pick] <= u)
        ++pick;
    // Rounding can land u on the final boundary; never pick a zero-weight tail.
    while (pick > 0 && cumulative_[pick] == cumulative_[pick - 1])
        --pick;
    return g_->offset(cur) + static_cast<EdgeIndex>(pick);
}

WalkState Walker::step(WalkState s)
{
    const EdgeIndex next = step(g_->edge_index(s.prev, s.cur));
    return {g_->edge_source(next), g_->edge_target(next)};
}

EdgeIndex Walker::random_start()
{
    return static_cast<EdgeIndex>(rng_.bounded(static_cast<std::uint32_t>(g_->directed_edge_count())));
}

WalkState step(const Graph& g, const Node2vecParams& p, WalkState s, Pcg32& rng)
{
    Walker w(g, p, rng);
    const WalkState next = w.step(s);
    rng = w.rng();
    return next;
}

OccupancyCounts& OccupancyCounts::operator+=(const OccupancyCounts& other)
{
    auto add = [](std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
        if (a.empty())
            a.assign(b.size(), 0);
        require(a.size() == b.size(), "occupancy counts from different graphs");
        for (std::size_t i = 0; i < b.size(); ++i)
            a[i] += b[i];
    };
    steps_total += other.steps_total;
    add(node_visits, other.node_visits);
    add(edge_visits, other.edge_visits);
    add(community_visits, other.community_visits);
    return *this;
}

namespace {

EdgeIndex start_edge(Walker& w, const std::optional<WalkState>& start)
{
    return start ? w.graph().edge_index(start->prev, start->cur) : w.random_start();
}

} // namespace

OccupancyCounts run_walk(const Graph& g, const Node2vecParams& p, std::optional<WalkState> start, std::uint64_t steps,
                         Pcg32& rng)
{
    require(steps >= 1, "walk length must be at least 1");
    Walker w(g, p, rng);
    EdgeIndex e = start_edge(w, start);
    OccupancyCounts c;
    c.steps_total = steps;
    c.node_visits.assign(g.node_count(), 0);
    c.edge_visits.assign(g.directed_edge_count(), 0);
    for (std::uint64_t t = 0; t < steps; ++t) {
        e = w.step(e);
        ++c.edge_visits[e];
    }
    for (EdgeIndex f = 0; f < c.edge_visits.size(); ++f)
        c.node_visits[g.edge_target(f)] += c.edge_visits[f];
    rng = w.rng();
    return c;
}

OccupancyCounts run_walk(const HouseholdGraph& g, const Node2vecParams& p, std::optional<WalkState> start,
                         std::uint64_t steps, Pcg32& rng)
{
    OccupancyCounts c = run_walk(g.graph(), p, start, steps, rng);
    c.community_visits.assign(g.community_count(), 0);
    for (NodeId v = 0; v < g.node_count(); ++v)
        c.community_visits[g.community_of(v)] += c.node_visits[v];
    return c;
}

OccupancyCounts run_walks_parallel(const HouseholdGraph& g, const Node2vecParams& p, std::uint64_t steps_per_walker,
                                   std::uint64_t seed, std::size_t walkers)
{
    require(walkers >= 1, "need at least one walker");
    std::vector<OccupancyCounts> parts(walkers);
    {
        std::vector<std::jthread> threads;
        for (std::size_t i = 0; i < walkers; ++i)
            threads.emplace_back([&, i] {
                Pcg32 rng(seed, i);
                parts[i] = run_walk(g, p, std::nullopt, steps_per_walker, rng);
            });
    }
    OccupancyCounts total;
    for (const auto& part : parts)
        total += part;
    return total;
}

std::vector<WalkState> record_trajectory(const Graph& g, const Node2vecParams& p, std::optional<WalkState> start,
                                         std::uint64_t steps, Pcg32& rng)
{
    Walker w(g, p, rng);
    EdgeIndex e = start_edge(w, start);
    std::vector<WalkState> out;
    out.reserve(steps);
    for (std::uint64_t t = 0; t < steps; ++t) {
        e = w.step(e);
        out.push_back({g.edge_source(e), g.edge_target(e)});
    }
    rng = w.rng();
    return out;
}

StationaryDistribution empirical_node_distribution(const OccupancyCounts& c)
{
    require(c.steps_total >= 1, "no steps recorded");
    StationaryDistribution d;
    d.probabilities.reserve(c.node_visits.size());
    const double t = static_cast<double>(c.steps_total);
    for (auto n : c.node_visits)
        d.probabilities.push_back(static_cast<double>(n) / t);
    return d;
}

std::vector<std::uint32_t> extract_universe_trace(std::span<const NodeId> nodes, const HouseholdGraph& g)
{
    std::vector<std::uint32_t> out;
    out.reserve(nodes.size());
    for (NodeId v : nodes)
        out.push_back(g.community_of(v));
    return out;
}

std::vector<std::uint32_t> collapse_to_ystar(std::span<const std::uint32_t> trace)
{
    std::vector<std::uint32_t> out;
    std::unique_copy(trace.begin(), trace.end(), std::back_inserter(out));
    return out;
}

YStarCounts run_ystar(const HouseholdGraph& g, const Node2vecParams& p, std::optional<WalkState> start,
                      std::uint64_t transitions, Pcg32& rng)
{
    const Graph& graph = g.graph();
    const Graph& universe = g.universe();
    Walker w(graph, p, rng);
    EdgeIndex e = start_edge(w, start);

    YStarCounts c;
    c.node_visits.assign(universe.node_count(), 0);
    c.edge_visits.assign(universe.directed_edge_count(), 0);
    std::uint32_t here = g.community_of(graph.edge_target(e));
    while (c.transitions < transitions) {
        e = w.step(e);
        const std::uint32_t next = g.community_of(graph.edge_target(e));
        if (next == here)
            continue;
        ++c.transitions;
        ++c.node_visits[next];
        ++c.edge_visits[universe.edge_index(here, next)];
        here = next;
    }
    rng = w.rng();
    return c;
}

Graph sojourn_gadget(const CommunityTemplate& shape)
{
    const auto k = static_cast<NodeId>(shape.size());
    std::vector<Edge> edges = shape.edges();
    for (NodeId j = 0; j < k; ++j)
        edges.push_back({j, k + j});
    return Graph(2 * k, edges);
}

double SojournSample::mean() const
{
    require(!taus.empty(), "empty sojourn sample");
    double s = 0;
    for (auto t : taus)
        s += t;
    return s / static_cast<double>(taus.size());
}

double SojournSample::standard_error() const
{
    require(taus.size() >= 2, "standard error needs two samples");
    const double m = mean();
    double ss = 0;
    for (auto t : taus)
        ss += (t - m) * (t - m);
    const double n = static_cast<double>(taus.size());
    return std::sqrt(ss / (n - 1) / n);
}

SojournSample sample_sojourn(const CommunityTemplate& shape, const Node2vecParams& p, std::size_t n_samples, Pcg32& rng)
{
    p.validate(true);
    const Graph gadget = sojourn_gadget(shape);
    const auto k = static_cast<NodeId>(shape.size());
    const EdgeIndex entry = gadget.edge_index(k, 0);

    Walker w(gadget, p, rng);
    SojournSample out{shape.name(), {}};
    out.taus.reserve(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        std::uint32_t tau = 1;
        for (EdgeIndex e = w.step(entry); gadget.edge_target(e) < k; e = w.step(e))
            ++tau;
        out.taus.push_back(tau);
    }
    rng = w.rng();
    return out;
}

} // namespace hhwalk
