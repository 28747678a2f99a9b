#pragma once

#include "hhwalk/distribution.hpp"
#include "hhwalk/graph.hpp"
#include "hhwalk/household.hpp"
#include "hhwalk/params.hpp"
#include "hhwalk/rng.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace hhwalk {

/// Ordered pair (previous node, current node); the walk's Markov state.
struct WalkState {
    NodeId prev;
    NodeId cur;
    friend bool operator==(const WalkState&, const WalkState&) = default;
};

/// Unnormalized node2vec weights over the neighbors of `cur`.
struct TransitionRow {
    std::vector<NodeId> targets;
    std::vector<double> weights;
    double total = 0;
};

/// Throws `dead_end` when every weight is zero.
TransitionRow transition_weights(const Graph& g, const Node2vecParams& p, WalkState s);
inline TransitionRow transition_weights(const HouseholdGraph& g, const Node2vecParams& p, WalkState s)
{
    return transition_weights(g.graph(), p, s);
}

/// Second-order walker over a shared immutable graph. Internally works on
/// directed-edge indices; one step is a linear scan of the current node's
/// neighbor list merged against the previous node's.
class Walker {
public:
    Walker(const Graph& g, Node2vecParams p, Pcg32 rng);

    /// Advances directed edge `e` = (prev, cur) to (cur, next).
    EdgeIndex step(EdgeIndex e);
    WalkState step(WalkState s);

    /// Uniform draw over all directed edges.
    EdgeIndex random_start();

    const Graph& graph() const { return *g_; }
    Pcg32& rng() { return rng_; }

private:
    const Graph* g_;
    Node2vecParams p_;
    Pcg32 rng_;
    std::vector<double> cumulative_;
};

WalkState step(const Graph& g, const Node2vecParams& p, WalkState s, Pcg32& rng);

struct OccupancyCounts {
    std::uint64_t steps_total = 0;
    std::vector<std::uint64_t> node_visits;
    std::vector<std::uint64_t> edge_visits;
    /// Empty unless the walk ran on a household model.
    std::vector<std::uint64_t> community_visits;

    /// Adds another walker's counts (same graph).
    OccupancyCounts& operator+=(const OccupancyCounts& other);
};

/// T steps from `start` (uniform over directed edges when empty). Each step
/// counts the state it lands in; the start state itself is not counted.
OccupancyCounts run_walk(const Graph& g, const Node2vecParams& p, std::optional<WalkState> start, std::uint64_t steps,
                         Pcg32& rng);
OccupancyCounts run_walk(const HouseholdGraph& g, const Node2vecParams& p, std::optional<WalkState> start,
                         std::uint64_t steps, Pcg32& rng);

/// Independent walkers on (seed, stream = walker index) run on separate
/// threads; counts are merged by addition.
OccupancyCounts run_walks_parallel(const HouseholdGraph& g, const Node2vecParams& p, std::uint64_t steps_per_walker,
                                   std::uint64_t seed, std::size_t walkers);

/// States visited after each of `steps` steps (the start is not included).
std::vector<WalkState> record_trajectory(const Graph& g, const Node2vecParams& p, std::optional<WalkState> start,
                                         std::uint64_t steps, Pcg32& rng);

StationaryDistribution empirical_node_distribution(const OccupancyCounts& c);

/// Maps a node trajectory to community ids.
std::vector<std::uint32_t> extract_universe_trace(std::span<const NodeId> nodes, const HouseholdGraph& g);
/// Removes consecutive duplicates.
std::vector<std::uint32_t> collapse_to_ystar(std::span<const std::uint32_t> trace);

struct YStarCounts {
    std::uint64_t transitions = 0;
    /// Visits per universe node, counted on arrival.
    std::vector<std::uint64_t> node_visits;
    /// Transitions per directed universe edge (universe edge indexing).
    std::vector<std::uint64_t> edge_visits;
};

/// Streams the household walk until the collapsed community walk has made
/// `transitions` moves.
YStarCounts run_ystar(const HouseholdGraph& g, const Node2vecParams& p, std::optional<WalkState> start,
                      std::uint64_t transitions, Pcg32& rng);

/// Community template plus one pendant arm per member: members are
/// 0..k-1 and the arm of member j is node k+j.
Graph sojourn_gadget(const CommunityTemplate& shape);

struct SojournSample {
    std::string template_name;
    std::vector<std::uint32_t> taus;

    double mean() const;
    double standard_error() const;
};

/// Jumps spent inside the community, counting the entering jump and not the
/// exiting one. Every sample enters member 0 from its arm.
SojournSample sample_sojourn(const CommunityTemplate& shape, const Node2vecParams& p, std::size_t n_samples,
                             Pcg32& rng);

} // namespace hhwalk
