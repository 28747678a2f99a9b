#pragma once

#include "hhwalk/graph.hpp"
#include "hhwalk/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace hhwalk {

inline constexpr std::size_t default_max_retries = 100000;
inline constexpr std::size_t max_custom_template_size = 8;

enum class TemplateKind { clique, ring, custom };

/// Shape of an automorphic community on nodes 0..size()-1.
///
/// Rings connect each node to the two nearest nodes on either side; a ring
/// with at most five nodes is a clique and is stored as one.
class CommunityTemplate {
public:
    static CommunityTemplate clique(std::size_t k);
    static CommunityTemplate ring(std::size_t k);

    /// Throws `not_automorphic` unless the graph is connected and
    /// vertex-transitive. Templates larger than `max_custom_template_size`
    /// are refused.
    static CommunityTemplate custom(std::size_t k, std::vector<Edge> edges);

    TemplateKind kind() const { return kind_; }
    std::size_t size() const { return size_; }
    const std::vector<Edge>& edges() const { return edges_; }

    /// "C<k>", "R<k>" or "X<k>:<edges>" for custom shapes.
    std::string name() const;

    friend bool operator==(const CommunityTemplate& a, const CommunityTemplate& b)
    {
        return a.kind_ == b.kind_ && a.size_ == b.size_ && a.edges_ == b.edges_;
    }

private:
    CommunityTemplate(TemplateKind kind, std::size_t size, std::vector<Edge> edges)
        : kind_(kind), size_(size), edges_(std::move(edges))
    {
    }

    TemplateKind kind_ = TemplateKind::clique;
    std::size_t size_ = 0;
    std::vector<Edge> edges_;
};

/// Brute-force check over all k! relabelings that every node can be mapped
/// onto node 0 by an automorphism, plus connectivity.
bool is_automorphic_community(std::size_t k, std::span<const Edge> edges);

/// Template chosen for a universe node of the given degree.
using TemplatePolicy = std::function<CommunityTemplate(std::size_t degree)>;

TemplatePolicy clique_policy();
/// Rings for every degree; degrees up to five therefore get cliques.
TemplatePolicy ring_policy();

struct DegreeSequence {
    std::vector<std::uint32_t> values;

    std::uint64_t sum() const;
};

/// One Poisson(lambda) draw by sequential inversion. Large means are split
/// into independent pieces so the search never underflows.
std::uint32_t sample_poisson(double lambda, Pcg32& rng);

/// i.i.d. Poisson(lambda) degrees conditioned on >= 1, with the last entry
/// redrawn until the sum is even.
DegreeSequence sample_poisson_degrees(std::size_t n, double lambda, Pcg32& rng,
                                      std::size_t max_retries = default_max_retries);

/// Uniform stub matching, redrawn from scratch until the result is simple
/// and connected.
Graph sample_configuration_model(const DegreeSequence& degrees, Pcg32& rng,
                                 std::size_t max_retries = default_max_retries);

/// Violated universe-graph invariants (empty when valid).
std::vector<std::string> universe_violations(const Graph& universe);

struct Community {
    CommunityTemplate shape;
    NodeId first;
    NodeId universe_node;

    std::size_t size() const { return shape.size(); }
};

inline constexpr NodeId no_arm = static_cast<NodeId>(-1);

/// Household model: each universe node replaced by an automorphic community
/// whose members each carry exactly one arm edge to a neighboring community.
///
/// Communities occupy contiguous node-id blocks in universe-node order, so
/// the community id of a node equals its universe node id.
class HouseholdGraph {
public:
    /// Member j of a community is attached to the j-th universe neighbor (in
    /// sorted order).
    static HouseholdGraph expand(const Graph& universe, const TemplatePolicy& policy);

    /// Reassembles a household model from a plain graph plus a community map,
    /// inferring each community's template from its induced subgraph.
    static HouseholdGraph from_membership(const Graph& graph, std::span<const std::uint32_t> community_of);

    /// Unchecked assembly; `violations()` reports what is wrong with it.
    HouseholdGraph(Graph graph, Graph universe, std::vector<std::uint32_t> community_of,
                   std::vector<Community> communities);

    const Graph& graph() const { return graph_; }
    const Graph& universe() const { return universe_; }
    std::size_t node_count() const { return graph_.node_count(); }
    std::size_t community_count() const { return communities_.size(); }

    std::uint32_t community_of(NodeId v) const { return community_of_[v]; }
    std::span<const std::uint32_t> community_map() const { return community_of_; }
    const Community& community(std::uint32_t c) const { return communities_[c]; }
    std::span<const Community> communities() const { return communities_; }

    /// Unique external neighbor of v, or `no_arm` when v has zero or several.
    NodeId arm_of(NodeId v) const { return arm_of_[v]; }

    /// Universe graph recovered by contracting every community.
    Graph contract() const;

    std::vector<std::string> violations() const;

private:
    Graph graph_;
    Graph universe_;
    std::vector<std::uint32_t> community_of_;
    std::vector<Community> communities_;
    std::vector<NodeId> arm_of_;
};

/// Requires u != v.
std::vector<NodeId> common_neighbors(const HouseholdGraph& g, NodeId u, NodeId v);

/// One `node community` line per node.
void write_community_map(const std::string& path, const HouseholdGraph& g);
std::vector<std::uint32_t> read_community_map(const std::string& path);

} // namespace hhwalk
