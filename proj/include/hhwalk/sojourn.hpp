#pragma once

#include "hhwalk/distribution.hpp"
#include "hhwalk/household.hpp"
#include "hhwalk/params.hpp"

#include <array>
#include <cstddef>
#include <cstdint>

namespace hhwalk {

// Expected sojourn times E[tau] count the jump into the community and every
// jump inside it, but not the jump out.

/// (alpha + (k-1)(alpha + (k-2) beta + 2 gamma)) / (alpha + (k-1) gamma).
double expected_sojourn_clique(std::size_t k, const Node2vecParams& p);

/// P(tau = l) for a k-clique: immediate backtrack for l = 1, geometric in
/// the internal stay probability afterwards.
double sojourn_pmf_clique(std::size_t k, const Node2vecParams& p, std::uint64_t l);

double expected_sojourn_ring6(const Node2vecParams& p);

/// Step kernel inside a ring of size >= 7. A short step moves to an
/// adjacent ring node, a long step skips one. `q` is indexed
/// [previous kind][next kind] with 0 = short, 1 = long.
struct RingKernel {
    double q_ss, q_sl, q_ls, q_ll;
    double p_s, p_l;
    double entry_short, entry_long, entry_exit;

    std::array<std::array<double, 2>, 2> q() const { return {{{q_ss, q_sl}, {q_ls, q_ll}}}; }
};

RingKernel ring_kernel(const Node2vecParams& p);

/// Exact expectation for rings of size >= 7 via the two-state absorbing
/// chain on the last step kind. Does not depend on k.
double expected_sojourn_ring(std::size_t k, const Node2vecParams& p);

/// P(tau = m) for rings of size >= 7, evaluated as entry · Q^{m-2} · exit.
double sojourn_pmf_ring(std::size_t k, const Node2vecParams& p, std::uint64_t m);

/// Exact E[tau] for any template: absorbing chain on the directed edges of
/// the template-plus-arms gadget, solved as (I - Q) t = 1.
double expected_sojourn_generic(const CommunityTemplate& shape, const Node2vecParams& p);

/// Closed form where one exists (cliques, R6, rings >= 7), generic solve
/// otherwise.
double expected_sojourn(const CommunityTemplate& shape, const Node2vecParams& p);

/// Node stationary distribution of the node2vec walk on a household model:
/// pi(v) = E[tau(type of v)] / sum over communities of |H| E[tau(H)].
StationaryDistribution stationary_household(const HouseholdGraph& g, const Node2vecParams& p);

/// d_v / 2|E|.
StationaryDistribution stationary_srw(const Graph& g);

enum class PoissonLimit { alpha_inf, gamma_inf, alpha0_gamma1 };

/// Large-n stationary probability of a node in an l-clique when clique sizes
/// are Poisson(lambda) over n cliques. `beta` is used only by
/// `alpha0_gamma1`.
double poisson_limit_distribution(PoissonLimit which, double lambda, std::size_t n, std::size_t l, double beta = 1.0);

} // namespace hhwalk
