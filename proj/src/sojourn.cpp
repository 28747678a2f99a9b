#include "hhwalk/sojourn.hpp"

#include "hhwalk/error.hpp"
#include "hhwalk/walk.hpp"


#include <cmath>
#include <map>
#include <string>

namespace hhwalk {

namespace {

double checked_ratio(double num, double den, const char* what)
{
    if (!(den > 0))
        fail(ErrorCode::degenerate_params, std::string("vanishing denominator in ") + what);
    return num / den;
}

} // namespace

double expected_sojourn_clique(std::size_t k, const Node2vecParams& p)
{
    require(k >= 1, "clique size must be positive");
    p.validate();
    const double km1 = static_cast<double>(k) - 1;
    const double km2 = static_cast<double>(k) - 2;
    if (k == 1)
        return checked_ratio(p.alpha, p.alpha, "clique sojourn");
    return checked_ratio(p.alpha + km1 * (p.alpha + km2 * p.beta + 2 * p.gamma), p.alpha + km1 * p.gamma,
                         "clique sojourn");
}

double sojourn_pmf_clique(std::size_t k, const Node2vecParams& p, std::uint64_t l)
{
    require(k >= 1, "clique size must be positive");
    require(l >= 1, "sojourn length starts at 1");
    p.validate();
    const double km1 = static_cast<double>(k) - 1;
    const double entry_den = p.alpha + km1 * p.gamma;
    if (l == 1)
        return checked_ratio(p.alpha, entry_den, "clique sojourn pmf");
    if (k == 1)
        return 0.0;
    const double inner_den = p.alpha + (km1 - 1) * p.beta + p.gamma;
    const double stay = checked_ratio(p.alpha + (km1 - 1) * p.beta, inner_den, "clique sojourn pmf");
    return checked_ratio(km1 * p.gamma, entry_den, "clique sojourn pmf") * std::pow(stay, static_cast<double>(l - 2)) *
           (p.gamma / inner_den);
}

double expected_sojourn_ring6(const Node2vecParams& p)
{
    p.validate();
    return checked_ratio(5 * p.alpha + 8 * p.beta + 12 * p.gamma, p.alpha + 4 * p.gamma, "R6 sojourn");
}

RingKernel ring_kernel(const Node2vecParams& p)
{
    p.validate();
    const double after_short = p.alpha + 2 * p.beta + 2 * p.gamma;
    const double after_long = p.alpha + p.beta + 3 * p.gamma;
    const double entry = p.alpha + 4 * p.gamma;
    if (!(after_short > 0 && after_long > 0 && entry > 0))
        fail(ErrorCode::degenerate_params, "ring kernel needs positive normalizers (" + p.to_string() + ")");
    RingKernel r{};
    r.q_ss = (p.alpha + p.beta) / after_short;
    r.q_sl = (p.beta + p.gamma) / after_short;
    r.p_s = p.gamma / after_short;
    r.q_ls = (p.beta + p.gamma) / after_long;
    r.q_ll = (p.alpha + p.gamma) / after_long;
    r.p_l = p.gamma / after_long;
    r.entry_short = 2 * p.gamma / entry;
    r.entry_long = 2 * p.gamma / entry;
    r.entry_exit = p.alpha / entry;
    return r;
}

double expected_sojourn_ring(std::size_t k, const Node2vecParams& p)
{
    require(k >= 7, "the short/long ring kernel applies to rings of size >= 7");
    const RingKernel r = ring_kernel(p);
    // (I - Q) m = Q 1, with m the expected further internal steps after a
    // short (index 0) or long (index 1) step.
    const double a = 1 - r.q_ss;
    const double b = -r.q_sl;
    const double c = -r.q_ls;
    const double d = 1 - r.q_ll;
    const double det = a * d - b * c;
    if (!(std::abs(det) > 1e-300))
        fail(ErrorCode::singular_system, "ring kernel has no exit (" + p.to_string() + ")");
    const double rhs_s = r.q_ss + r.q_sl;
    const double rhs_l = r.q_ls + r.q_ll;
    const double m_s = (d * rhs_s - b * rhs_l) / det;
    const double m_l = (a * rhs_l - c * rhs_s) / det;
    return 1 + r.entry_short * (1 + m_s) + r.entry_long * (1 + m_l);
}

double sojourn_pmf_ring(std::size_t k, const Node2vecParams& p, std::uint64_t m)
{
    require(k >= 7, "the short/long ring kernel applies to rings of size >= 7");
    require(m >= 1, "sojourn length starts at 1");
    const RingKernel r = ring_kernel(p);
    if (m == 1)
        return r.entry_exit;
    // Row vector of being in (short, long) after the first internal step.
    double s = r.entry_short;
    double l = r.entry_long;
    for (std::uint64_t i = 2; i < m; ++i) {
        const double ns = s * r.q_ss + l * r.q_ls;
        const double nl = s * r.q_sl + l * r.q_ll;
        s = ns;
        l = nl;
    }
    return s * r.p_s + l * r.p_l;
}

double expected_sojourn_generic(const CommunityTemplate& shape, const Node2vecParams& p)
{
    p.validate(true);
    const Graph gadget = sojourn_gadget(shape);
    const auto k = static_cast<NodeId>(shape.size());

    // Transient states: the entry edge (arm of 0 -> 0) and every
    // member -> member edge. Member -> arm edges absorb.
    std::vector<int> state_of(gadget.directed_edge_count(), -1);
    const EdgeIndex entry = gadget.edge_index(k, 0);
    int states = 0;
    state_of[entry] = states++;
    for (EdgeIndex e = 0; e < gadget.directed_edge_count(); ++e)
        if (gadget.edge_source(e) < k && gadget.edge_target(e) < k)
            state_of[e] = states++;

    // Weight form total_r m_r - sum_c w_rc m_c = sum_c w_rc with explicit
    // exit weights, eliminated GTH-style (no subtractions).
    const auto n = static_cast<std::size_t>(states);
    std::vector<double> w(n * n, 0.0), exit(n, 0.0), rhs(n, 0.0);
    for (EdgeIndex e = 0; e < gadget.directed_edge_count(); ++e) {
        const int row = state_of[e];
        if (row < 0)
            continue;
        const TransitionRow tr = transition_weights(gadget, p, {gadget.edge_source(e), gadget.edge_target(e)});
        const NodeId cur = gadget.edge_target(e);
        for (std::size_t i = 0; i < tr.targets.size(); ++i) {
            if (tr.targets[i] >= k) {
                exit[row] += tr.weights[i];
                continue;
            }
            w[row * n + state_of[gadget.edge_index(cur, tr.targets[i])]] += tr.weights[i];
            rhs[row] += tr.weights[i];
        }
    }
    auto outflow = [&](std::size_t r, std::size_t from) {
        double d = exit[r];
        for (std::size_t c = from; c < n; ++c)
            if (c != r)
                d += w[r * n + c];
        return d;
    };
    std::vector<double> diag(n);
    for (std::size_t j = 0; j < n; ++j) {
        diag[j] = outflow(j, j);
        if (!(diag[j] > 0))
            fail(ErrorCode::singular_system, "sojourn chain of " + shape.name() + " has no reachable exit");
        for (std::size_t i = j + 1; i < n; ++i) {
            const double wij = w[i * n + j];
            if (wij == 0)
                continue;
            const double f = wij / diag[j];
            for (std::size_t c = j + 1; c < n; ++c)
                w[i * n + c] += f * w[j * n + c];
            exit[i] += f * exit[j];
            rhs[i] += f * rhs[j];
            w[i * n + j] = 0;
        }
    }
    std::vector<double> steps(n);
    for (std::size_t j = n; j-- > 0;) {
        double acc = rhs[j];
        for (std::size_t c = j + 1; c < n; ++c)
            acc += w[j * n + c] * steps[c];
        steps[j] = acc / diag[j];
    }
    return 1 + steps[state_of[entry]];
}

double expected_sojourn(const CommunityTemplate& shape, const Node2vecParams& p)
{
    switch (shape.kind()) {
    case TemplateKind::clique:
        return expected_sojourn_clique(shape.size(), p);
    case TemplateKind::ring:
        return shape.size() == 6 ? expected_sojourn_ring6(p) : expected_sojourn_ring(shape.size(), p);
    case TemplateKind::custom:
        break;
    }
    return expected_sojourn_generic(shape, p);
}

StationaryDistribution stationary_household(const HouseholdGraph& g, const Node2vecParams& p)
{
    p.validate(true);
    std::map<std::string, double> by_template;
    std::vector<double> per_community(g.community_count());
    double norm = 0;
    for (std::uint32_t c = 0; c < g.community_count(); ++c) {
        const CommunityTemplate& shape = g.community(c).shape;
        auto [it, fresh] = by_template.try_emplace(shape.name(), 0.0);
        if (fresh)
            it->second = expected_sojourn(shape, p);
        per_community[c] = it->second;
        norm += static_cast<double>(shape.size()) * it->second;
    }
    StationaryDistribution d;
    d.probabilities.reserve(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v)
        d.probabilities.push_back(per_community[g.community_of(v)] / norm);
    return d;
}

StationaryDistribution stationary_srw(const Graph& g)
{
    require(g.edge_count() > 0, "graph has no edges");
    StationaryDistribution d;
    const double total = static_cast<double>(g.directed_edge_count());
    for (NodeId v = 0; v < g.node_count(); ++v)
        d.probabilities.push_back(static_cast<double>(g.degree(v)) / total);
    return d;
}

double poisson_limit_distribution(PoissonLimit which, double lambda, std::size_t n, std::size_t l, double beta)
{
    require(lambda > 0 && n >= 1 && l >= 1, "poisson limit needs lambda > 0, n >= 1, l >= 1");
    const double nn = static_cast<double>(n);
    const double ll = static_cast<double>(l);
    switch (which) {
    case PoissonLimit::alpha_inf:
        return ll / (nn * (lambda * lambda + lambda));
    case PoissonLimit::gamma_inf:
        return 1 / (nn * lambda);
    case PoissonLimit::alpha0_gamma1:
        require(beta >= 0, "beta must be non-negative");
        return ((ll - 2) * beta + 2) / (lambda * nn * (beta * (lambda - 1) + 2));
    }
    fail(ErrorCode::invalid_argument, "unknown limit case");
}

} // namespace hhwalk
