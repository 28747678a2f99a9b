#pragma once

#include "hhwalk/distribution.hpp"
#include "hhwalk/graph.hpp"
#include "hhwalk/params.hpp"

#include <cstddef>
#include <cstdint>

namespace hhwalk {

/// Transition matrix of the node2vec walk on directed edges.
///
/// Row e = (u, v) only reaches edges (v, w); those are the contiguous block
/// [g.offset(v), g.offset(v) + deg(v)), so a row stores probabilities only.
class EdgeChain {
public:
    /// Throws `dead_end` if any row has zero total weight.
    EdgeChain(const Graph& g, const Node2vecParams& p);

    std::size_t size() const { return graph_->directed_edge_count(); }
    const Graph& graph() const { return *graph_; }

    /// First target edge of row e; targets are consecutive.
    EdgeIndex row_target_begin(EdgeIndex e) const { return graph_->offset(graph_->edge_target(e)); }
    std::span<const double> row(EdgeIndex e) const
    {
        return {probs_.data() + row_start_[e], probs_.data() + row_start_[e + 1]};
    }

    /// x P.
    std::vector<double> left_multiply(std::span<const double> x) const;

    /// || pi P - pi ||_1.
    double balance_residual(std::span<const double> pi) const;

private:
    const Graph* graph_;
    std::vector<std::size_t> row_start_;
    std::vector<double> probs_;
};

enum class SolveMethod { power_iteration, direct };

struct SolveOptions {
    SolveMethod method = SolveMethod::direct;
    double tol = 1e-12;
    std::size_t max_iterations = 1000000;
    /// Below this many directed edges the direct solver factors densely.
    std::size_t dense_limit = 500;
};

struct EdgeSolution {
    StationaryDistribution edges;
    double residual = 0;
    std::size_t iterations = 0;
    bool damped = false;
};

/// Stationary law of the edge chain. Power iteration starts from uniform and
/// switches to the lazy chain (I + P) / 2 if the residual stalls; the direct
/// route replaces the last balance equation with the normalization row.
EdgeSolution solve_stationary(const EdgeChain& chain, const SolveOptions& opts = {});

/// pi(v) = sum of edge probabilities over edges pointing into v.
StationaryDistribution project_edges_to_nodes(const StationaryDistribution& edges, const Graph& g);

/// Triangle u=0, v=1, w=2 with n, p, m pendant nodes hung on u, v, w (in
/// that id order after the triangle).
Graph build_asym_triangle_graph(std::size_t n, std::size_t p, std::size_t m);

/// Closed-form edge stationary law on `build_asym_triangle_graph(n, p, m)`,
/// indexed by that graph's directed edges.
StationaryDistribution asym_triangle_closed_form(std::size_t n, std::size_t p, std::size_t m,
                                                 const Node2vecParams& params);

} // namespace hhwalk
