#include "hhwalk/oracle.hpp"

#include "hhwalk/error.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hhwalk {

EdgeChain::EdgeChain(const Graph& g, const Node2vecParams& p) : graph_(&g)
{
    p.validate();
    row_start_.reserve(g.directed_edge_count() + 1);
    row_start_.push_back(0);
    for (EdgeIndex e = 0; e < g.directed_edge_count(); ++e)
        row_start_.push_back(row_start_.back() + g.degree(g.edge_target(e)));
    probs_.resize(row_start_.back());

    for (EdgeIndex e = 0; e < g.directed_edge_count(); ++e) {
        const NodeId prev = g.edge_source(e);
        const NodeId cur = g.edge_target(e);
        auto nb = g.neighbors(cur);
        auto prev_nb = g.neighbors(prev);
        double* out = probs_.data() + row_start_[e];
        double total = 0;
        for (std::size_t i = 0; i < nb.size(); ++i) {
            const NodeId w = nb[i];
            if (w == prev)
                out[i] = p.alpha;
            else if (std::binary_search(prev_nb.begin(), prev_nb.end(), w))
                out[i] = p.beta;
            else
                out[i] = p.gamma;
            total += out[i];
        }
        if (!(total > 0))
            fail(ErrorCode::dead_end, "edge chain row (" + std::to_string(prev) + "," + std::to_string(cur) +
                                          ") has zero total weight");
        for (std::size_t i = 0; i < nb.size(); ++i)
            out[i] /= total;
    }
}

std::vector<double> EdgeChain::left_multiply(std::span<const double> x) const
{
    require(x.size() == size(), "vector size differs from chain size");
    std::vector<double> y(size(), 0.0);
    for (EdgeIndex e = 0; e < size(); ++e) {
        const double mass = x[e];
        if (mass == 0)
            continue;
        auto r = row(e);
        double* dst = y.data() + row_target_begin(e);
        for (std::size_t i = 0; i < r.size(); ++i)
            dst[i] += mass * r[i];
    }
    return y;
}

double EdgeChain::balance_residual(std::span<const double> pi) const
{
    const auto next = left_multiply(pi);
    double r = 0;
    for (std::size_t i = 0; i < next.size(); ++i)
        r += std::abs(next[i] - pi[i]);
    return r;
}

namespace {

void normalize(std::vector<double>& v)
{
    const double s = std::accumulate(v.begin(), v.end(), 0.0);
    for (double& x : v)
        x /= s;
}

EdgeSolution power_iteration(const EdgeChain& chain, const SolveOptions& opts)
{
    const std::size_t n = chain.size();
    std::vector<double> pi(n, 1.0 / static_cast<double>(n));
    EdgeSolution out;
    constexpr std::size_t window = 64;
    double window_start_residual = std::numeric_limits<double>::infinity();
    for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
        std::vector<double> next = chain.left_multiply(pi);
        double residual = 0;
        for (std::size_t i = 0; i < n; ++i)
            residual += std::abs(next[i] - pi[i]);
        if (residual <= opts.tol) {
            out.iterations = it;
            out.residual = residual;
            out.edges.probabilities = std::move(pi);
            return out;
        }
        if (out.damped)
            for (std::size_t i = 0; i < n; ++i)
                next[i] = 0.5 * (next[i] + pi[i]);
        pi = std::move(next);
        normalize(pi);

        // A residual that does not shrink over a whole window signals an
        // oscillating (near-periodic) chain.
        if (it % window == 0) {
            if (!out.damped && residual > 0.5 * window_start_residual)
                out.damped = true;
            window_start_residual = residual;
        }
    }
    fail(ErrorCode::not_converged, "power iteration did not reach tolerance within " +
                                       std::to_string(opts.max_iterations) + " iterations");
}

EdgeSolution direct_solve(const EdgeChain& chain, const SolveOptions& opts)
{
    const auto n = static_cast<Eigen::Index>(chain.size());
    // Balance equations (P^T - I) pi = 0 with the last one swapped for sum = 1.
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(n - 1) = 1.0;
    Eigen::VectorXd x;

    if (chain.size() < opts.dense_limit) {
        Eigen::MatrixXd a = -Eigen::MatrixXd::Identity(n, n);
        for (EdgeIndex e = 0; e < chain.size(); ++e) {
            auto r = chain.row(e);
            const EdgeIndex first = chain.row_target_begin(e);
            for (std::size_t i = 0; i < r.size(); ++i)
                a(first + i, e) += r[i];
        }
        a.row(n - 1).setOnes();
        Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
        if (!lu.isInvertible())
            fail(ErrorCode::singular_system, "balance system is singular (chain not irreducible)");
        x = lu.solve(rhs);
    } else {
        std::vector<Eigen::Triplet<double>> triplets;
        for (EdgeIndex e = 0; e < chain.size(); ++e) {
            auto r = chain.row(e);
            const EdgeIndex first = chain.row_target_begin(e);
            for (std::size_t i = 0; i < r.size(); ++i)
                if (static_cast<Eigen::Index>(first + i) != n - 1)
                    triplets.emplace_back(first + i, e, r[i]);
        }
        for (Eigen::Index i = 0; i + 1 < n; ++i)
            triplets.emplace_back(i, i, -1.0);
        for (Eigen::Index j = 0; j < n; ++j)
            triplets.emplace_back(n - 1, j, 1.0);
        Eigen::SparseMatrix<double> a(n, n);
        a.setFromTriplets(triplets.begin(), triplets.end());
        a.makeCompressed();
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(a);
        if (lu.info() != Eigen::Success)
            fail(ErrorCode::singular_system, "balance system is singular (chain not irreducible)");
        x = lu.solve(rhs);
        if (lu.info() != Eigen::Success || !x.allFinite())
            fail(ErrorCode::singular_system, "sparse balance solve failed");
    }

    EdgeSolution out;
    out.edges.probabilities.assign(x.data(), x.data() + n);
    for (double& v : out.edges.probabilities)
        if (v < 0 && v > -1e-15)
            v = 0;
    out.residual = chain.balance_residual(out.edges.probabilities);
    out.iterations = 1;
    if (!(out.residual <= std::max(opts.tol, 1e-9)))
        fail(ErrorCode::singular_system, "balance solve is numerically unreliable (residual " +
                                             std::to_string(out.residual) + ")");
    return out;
}

} // namespace

EdgeSolution solve_stationary(const EdgeChain& chain, const SolveOptions& opts)
{
    require(chain.size() > 0, "empty chain");
    require(opts.tol > 0, "tolerance must be positive");
    return opts.method == SolveMethod::direct ? direct_solve(chain, opts) : power_iteration(chain, opts);
}

StationaryDistribution project_edges_to_nodes(const StationaryDistribution& edges, const Graph& g)
{
    require(edges.size() == g.directed_edge_count(), "edge distribution size differs from the graph");
    StationaryDistribution d;
    d.probabilities.assign(g.node_count(), 0.0);
    for (EdgeIndex e = 0; e < edges.size(); ++e)
        d.probabilities[g.edge_target(e)] += edges[e];
    return d;
}

Graph build_asym_triangle_graph(std::size_t n, std::size_t p, std::size_t m)
{
    std::vector<Edge> edges{{0, 1}, {0, 2}, {1, 2}};
    NodeId next = 3;
    for (auto [hub, count] : {std::pair<NodeId, std::size_t>{0, n}, {1, p}, {2, m}})
        for (std::size_t i = 0; i < count; ++i)
            edges.push_back({hub, next++});
    return Graph(next, edges);
}

StationaryDistribution asym_triangle_closed_form(std::size_t n, std::size_t p, std::size_t m,
                                                 const Node2vecParams& params)
{
    params.validate();
    const double a = params.alpha;
    const double b = params.beta;
    const double c = params.gamma;
    const double dn = static_cast<double>(n);
    const double dp = static_cast<double>(p);
    const double dm = static_cast<double>(m);

    const double tri_u = a + b + dn * c;
    const double tri_v = a + b + dp * c;
    const double tri_w = a + b + dm * c;
    const double arm_u = a + (dn + 1) * c;
    const double arm_v = a + (dp + 1) * c;
    const double arm_w = a + (dm + 1) * c;

    const double inside = tri_u * tri_v * tri_w;
    const double at_u = arm_u * tri_v * tri_w;
    const double at_v = tri_u * arm_v * tri_w;
    const double at_w = tri_u * tri_v * arm_w;

    const Graph g = build_asym_triangle_graph(n, p, m);
    StationaryDistribution d;
    d.probabilities.resize(g.directed_edge_count());
    for (EdgeIndex e = 0; e < g.directed_edge_count(); ++e) {
        const NodeId s = g.edge_source(e);
        const NodeId t = g.edge_target(e);
        if (s < 3 && t < 3) {
            d.probabilities[e] = inside;
            continue;
        }
        switch (std::min(s, t)) {
        case 0:
            d.probabilities[e] = at_u;
            break;
        case 1:
            d.probabilities[e] = at_v;
            break;
        default:
            d.probabilities[e] = at_w;
            break;
        }
    }
    const double z = d.sum();
    if (!(z > 0) || !std::isfinite(z))
        fail(ErrorCode::degenerate_params, "asymmetric triangle normalization vanishes (" + params.to_string() + ")");
    for (double& x : d.probabilities)
        x /= z;
    return d;
}

} // namespace hhwalk
