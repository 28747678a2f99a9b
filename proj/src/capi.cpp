#include "hhwalk/hhwalk.h"

#include "hhwalk/error.hpp"
#include "hhwalk/household.hpp"
#include "hhwalk/oracle.hpp"
#include "hhwalk/sojourn.hpp"
#include "hhwalk/walk.hpp"

#include <cstring>
#include <exception>
#include <map>
#include <new>
#include <optional>
#include <string>

struct hh_graph {
    hhwalk::Graph g;
};

struct hh_household {
    hhwalk::HouseholdGraph h;
    hh_graph graph;
    hh_graph universe;
};

struct hh_template_map {
    hh_template_kind fallback;
    std::map<std::size_t, hhwalk::CommunityTemplate> entries;
};

namespace {

thread_local std::string last_error;

hh_status to_status(hhwalk::ErrorCode code)
{
    using hhwalk::ErrorCode;
    switch (code) {
    case ErrorCode::invalid_argument:
        return HH_ERR_INVALID_ARGUMENT;
    case ErrorCode::retries_exhausted:
        return HH_ERR_RETRIES_EXHAUSTED;
    case ErrorCode::template_size_mismatch:
        return HH_ERR_TEMPLATE_SIZE_MISMATCH;
    case ErrorCode::not_automorphic:
        return HH_ERR_NOT_AUTOMORPHIC;
    case ErrorCode::dead_end:
        return HH_ERR_DEAD_END;
    case ErrorCode::degenerate_params:
        return HH_ERR_DEGENERATE_PARAMS;
    case ErrorCode::singular_system:
        return HH_ERR_SINGULAR_SYSTEM;
    case ErrorCode::not_converged:
        return HH_ERR_NOT_CONVERGED;
    case ErrorCode::io:
        return HH_ERR_IO;
    }
    return HH_ERR_INTERNAL;
}

struct status_error {
    hh_status status;
    std::string what;
};

template <class F>
hh_status try_(F&& f)
{
    try {
        f();
    } catch (const status_error& e) {
        last_error = e.what;
        return e.status;
    } catch (const hhwalk::Error& e) {
        last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return HH_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return HH_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown error";
        return HH_ERR_INTERNAL;
    }
    return HH_OK;
}

template <class T>
T& deref(T* p)
{
    if (p == nullptr)
        throw status_error{HH_ERR_NULL_POINTER, "null pointer argument"};
    return *p;
}

void check_capacity(std::size_t needed, std::size_t capacity)
{
    if (capacity < needed)
        throw status_error{HH_ERR_BUFFER_TOO_SMALL,
                           "buffer holds " + std::to_string(capacity) + " entries, need " + std::to_string(needed)};
}

hhwalk::Node2vecParams params(hh_params p) { return {p.alpha, p.beta, p.gamma}; }

std::optional<hhwalk::WalkState> start_state(uint32_t prev, uint32_t cur)
{
    if (prev == HH_RANDOM_START || cur == HH_RANDOM_START)
        return std::nullopt;
    return hhwalk::WalkState{prev, cur};
}

hhwalk::CommunityTemplate make_template(hh_template_kind kind, std::size_t k)
{
    switch (kind) {
    case HH_TEMPLATE_CLIQUE:
        return hhwalk::CommunityTemplate::clique(k);
    case HH_TEMPLATE_RING:
        return hhwalk::CommunityTemplate::ring(k);
    case HH_TEMPLATE_CUSTOM:
        break;
    }
    throw status_error{HH_ERR_INVALID_ARGUMENT, "custom templates need explicit edges"};
}

std::vector<hhwalk::Edge> edge_list(const uint32_t* u, const uint32_t* v, std::size_t count)
{
    std::vector<hhwalk::Edge> edges;
    edges.reserve(count);
    if (count > 0) {
        deref(u);
        deref(v);
    }
    for (std::size_t i = 0; i < count; ++i)
        edges.push_back({std::min(u[i], v[i]), std::max(u[i], v[i])});
    return edges;
}

hh_household* wrap(hhwalk::HouseholdGraph h)
{
    auto* out = new hh_household{std::move(h), {}, {}};
    out->graph.g = out->h.graph();
    out->universe.g = out->h.universe();
    return out;
}

} // namespace

extern "C" {

const char* hh_last_error(void) { return last_error.c_str(); }

const char* hh_status_name(hh_status status)
{
    switch (status) {
    case HH_OK: return "ok";
    case HH_ERR_INVALID_ARGUMENT: return "invalid argument";
    case HH_ERR_RETRIES_EXHAUSTED: return "retries exhausted";
    case HH_ERR_TEMPLATE_SIZE_MISMATCH: return "template size mismatch";
    case HH_ERR_NOT_AUTOMORPHIC: return "not automorphic";
    case HH_ERR_DEAD_END: return "dead end";
    case HH_ERR_DEGENERATE_PARAMS: return "degenerate parameters";
    case HH_ERR_SINGULAR_SYSTEM: return "singular system";
    case HH_ERR_NOT_CONVERGED: return "not converged";
    case HH_ERR_IO: return "i/o error";
    case HH_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case HH_ERR_NULL_POINTER: return "null pointer";
    case HH_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* hh_version(void) { return "1.0.0"; }

const char* hh_rng_algorithm(void) { return hhwalk::Pcg32::algorithm_name; }

hh_status hh_graph_create(size_t node_count, const uint32_t* edge_u, const uint32_t* edge_v, size_t edge_count,
                          hh_graph** out)
{
    return try_([&] {
        auto edges = edge_list(edge_u, edge_v, edge_count);
        deref(out) = new hh_graph{hhwalk::Graph(node_count, edges)};
    });
}

hh_status hh_graph_load(const char* path, hh_graph** out)
{
    return try_([&] { deref(out) = new hh_graph{hhwalk::read_edge_list(std::string(&deref(path)))}; });
}

hh_status hh_graph_save(const hh_graph* g, const char* path)
{
    return try_([&] { hhwalk::write_edge_list(std::string(&deref(path)), deref(g).g); });
}

void hh_graph_destroy(hh_graph* g) { delete g; }

hh_status hh_graph_node_count(const hh_graph* g, size_t* out)
{
    return try_([&] { deref(out) = deref(g).g.node_count(); });
}

hh_status hh_graph_edge_count(const hh_graph* g, size_t* out)
{
    return try_([&] { deref(out) = deref(g).g.edge_count(); });
}

hh_status hh_graph_degree(const hh_graph* g, uint32_t node, size_t* out)
{
    return try_([&] {
        const auto& graph = deref(g).g;
        hhwalk::require(node < graph.node_count(), "node out of range");
        deref(out) = graph.degree(node);
    });
}

hh_status hh_graph_neighbors(const hh_graph* g, uint32_t node, uint32_t* out, size_t capacity, size_t* written)
{
    return try_([&] {
        const auto& graph = deref(g).g;
        hhwalk::require(node < graph.node_count(), "node out of range");
        auto nb = graph.neighbors(node);
        deref(written) = nb.size();
        check_capacity(nb.size(), capacity);
        std::copy(nb.begin(), nb.end(), &deref(out));
    });
}

hh_status hh_graph_directed_edges(const hh_graph* g, uint32_t* sources, uint32_t* targets, size_t capacity)
{
    return try_([&] {
        const auto& graph = deref(g).g;
        check_capacity(graph.directed_edge_count(), capacity);
        for (hhwalk::EdgeIndex e = 0; e < graph.directed_edge_count(); ++e) {
            (&deref(sources))[e] = graph.edge_source(e);
            (&deref(targets))[e] = graph.edge_target(e);
        }
    });
}

hh_status hh_graph_is_connected(const hh_graph* g, int* out)
{
    return try_([&] { deref(out) = deref(g).g.is_connected() ? 1 : 0; });
}

hh_status hh_graph_has_triangle(const hh_graph* g, int* out)
{
    return try_([&] { deref(out) = deref(g).g.has_triangle() ? 1 : 0; });
}

hh_status hh_sample_poisson_degrees(size_t n, double lambda, uint64_t seed, uint64_t stream, uint32_t* out)
{
    return try_([&] {
        hhwalk::Pcg32 rng(seed, stream);
        auto seq = hhwalk::sample_poisson_degrees(n, lambda, rng);
        std::copy(seq.values.begin(), seq.values.end(), &deref(out));
    });
}

hh_status hh_configuration_model(const uint32_t* degrees, size_t n, uint64_t seed, uint64_t stream,
                                 size_t max_retries, hh_graph** out)
{
    return try_([&] {
        hhwalk::DegreeSequence seq{{&deref(degrees), &deref(degrees) + n}};
        hhwalk::Pcg32 rng(seed, stream);
        deref(out) = new hh_graph{hhwalk::sample_configuration_model(
            seq, rng, max_retries == 0 ? hhwalk::default_max_retries : max_retries)};
    });
}

hh_status hh_asym_triangle_graph(size_t n, size_t p, size_t m, hh_graph** out)
{
    return try_([&] { deref(out) = new hh_graph{hhwalk::build_asym_triangle_graph(n, p, m)}; });
}

hh_status hh_template_map_create(hh_template_kind fallback, hh_template_map** out)
{
    return try_([&] {
        hhwalk::require(fallback == HH_TEMPLATE_CLIQUE || fallback == HH_TEMPLATE_RING,
                        "fallback template must be clique or ring");
        deref(out) = new hh_template_map{fallback, {}};
    });
}

hh_status hh_template_map_set(hh_template_map* map, size_t degree, hh_template_kind kind)
{
    return try_([&] { deref(map).entries.insert_or_assign(degree, make_template(kind, degree)); });
}

hh_status hh_template_map_set_custom(hh_template_map* map, size_t degree, const uint32_t* edge_u,
                                     const uint32_t* edge_v, size_t edge_count)
{
    return try_([&] {
        deref(map).entries.insert_or_assign(
            degree, hhwalk::CommunityTemplate::custom(degree, edge_list(edge_u, edge_v, edge_count)));
    });
}

void hh_template_map_destroy(hh_template_map* map) { delete map; }

hh_status hh_household_expand(const hh_graph* universe, const hh_template_map* templates, hh_household** out)
{
    return try_([&] {
        const hh_template_map& map = deref(templates);
        auto policy = [&map](std::size_t d) {
            if (auto it = map.entries.find(d); it != map.entries.end())
                return it->second;
            return make_template(map.fallback, d);
        };
        deref(out) = wrap(hhwalk::HouseholdGraph::expand(deref(universe).g, policy));
    });
}

hh_status hh_household_load(const char* edge_path, const char* community_path, hh_household** out)
{
    return try_([&] {
        auto community_of = hhwalk::read_community_map(&deref(community_path));
        auto graph = hhwalk::read_edge_list(std::string(&deref(edge_path)), community_of.size());
        deref(out) = wrap(hhwalk::HouseholdGraph::from_membership(graph, community_of));
    });
}

hh_status hh_household_save(const hh_household* h, const char* edge_path, const char* community_path)
{
    return try_([&] {
        hhwalk::write_edge_list(std::string(&deref(edge_path)), deref(h).h.graph());
        hhwalk::write_community_map(&deref(community_path), h->h);
    });
}

void hh_household_destroy(hh_household* h) { delete h; }

hh_status hh_household_graph(const hh_household* h, const hh_graph** out)
{
    return try_([&] { deref(out) = &deref(h).graph; });
}

hh_status hh_household_universe(const hh_household* h, const hh_graph** out)
{
    return try_([&] { deref(out) = &deref(h).universe; });
}

hh_status hh_household_community_count(const hh_household* h, size_t* out)
{
    return try_([&] { deref(out) = deref(h).h.community_count(); });
}

hh_status hh_household_community_of(const hh_household* h, uint32_t* out, size_t capacity)
{
    return try_([&] {
        auto map = deref(h).h.community_map();
        check_capacity(map.size(), capacity);
        std::copy(map.begin(), map.end(), &deref(out));
    });
}

hh_status hh_household_community_template(const hh_household* h, uint32_t community, char* out, size_t capacity)
{
    return try_([&] {
        const auto& hh = deref(h).h;
        hhwalk::require(community < hh.community_count(), "community out of range");
        const std::string name = hh.community(community).shape.name();
        check_capacity(name.size() + 1, capacity);
        std::memcpy(&deref(out), name.c_str(), name.size() + 1);
    });
}

hh_status hh_household_arm_of(const hh_household* h, uint32_t node, uint32_t* out)
{
    return try_([&] {
        const auto& hh = deref(h).h;
        hhwalk::require(node < hh.node_count(), "node out of range");
        deref(out) = hh.arm_of(node);
    });
}

hh_status hh_household_validate(const hh_household* h, size_t* count, char* out, size_t capacity)
{
    return try_([&] {
        const auto violations = deref(h).h.violations();
        deref(count) = violations.size();
        std::string joined;
        for (const auto& v : violations)
            joined += (joined.empty() ? "" : "\n") + v;
        if (out == nullptr)
            return;
        check_capacity(joined.size() + 1, capacity);
        std::memcpy(out, joined.c_str(), joined.size() + 1);
    });
}

hh_status hh_common_neighbors(const hh_household* h, uint32_t u, uint32_t v, uint32_t* out, size_t capacity,
                              size_t* written)
{
    return try_([&] {
        const auto& hh = deref(h).h;
        hhwalk::require(u < hh.node_count() && v < hh.node_count(), "node out of range");
        const auto common = hhwalk::common_neighbors(hh, u, v);
        deref(written) = common.size();
        check_capacity(common.size(), capacity);
        if (!common.empty())
            std::copy(common.begin(), common.end(), &deref(out));
    });
}

hh_status hh_transition_weights(const hh_graph* g, hh_params p, uint32_t prev, uint32_t cur, double* weights,
                                size_t capacity, size_t* written)
{
    return try_([&] {
        params(p).validate();
        const auto row = hhwalk::transition_weights(deref(g).g, params(p), {prev, cur});
        deref(written) = row.weights.size();
        check_capacity(row.weights.size(), capacity);
        std::copy(row.weights.begin(), row.weights.end(), &deref(weights));
    });
}

hh_status hh_walk_run(const hh_household* h, hh_params p, uint64_t steps, uint64_t seed, uint64_t stream,
                      uint32_t start_prev, uint32_t start_cur, uint64_t* node_visits, uint64_t* community_visits)
{
    return try_([&] {
        hhwalk::Pcg32 rng(seed, stream);
        const auto counts = hhwalk::run_walk(deref(h).h, params(p), start_state(start_prev, start_cur), steps, rng);
        std::copy(counts.node_visits.begin(), counts.node_visits.end(), &deref(node_visits));
        if (community_visits != nullptr)
            std::copy(counts.community_visits.begin(), counts.community_visits.end(), community_visits);
    });
}

hh_status hh_walk_trajectory(const hh_graph* g, hh_params p, uint64_t steps, uint64_t seed, uint64_t stream,
                             uint32_t start_prev, uint32_t start_cur, uint32_t* prev_out, uint32_t* cur_out)
{
    return try_([&] {
        hhwalk::Pcg32 rng(seed, stream);
        const auto traj = hhwalk::record_trajectory(deref(g).g, params(p), start_state(start_prev, start_cur), steps, rng);
        for (std::size_t i = 0; i < traj.size(); ++i) {
            (&deref(prev_out))[i] = traj[i].prev;
            (&deref(cur_out))[i] = traj[i].cur;
        }
    });
}

hh_status hh_walk_ystar(const hh_household* h, hh_params p, uint64_t transitions, uint64_t seed, uint64_t stream,
                        uint64_t* universe_visits)
{
    return try_([&] {
        hhwalk::Pcg32 rng(seed, stream);
        const auto counts = hhwalk::run_ystar(deref(h).h, params(p), std::nullopt, transitions, rng);
        std::copy(counts.node_visits.begin(), counts.node_visits.end(), &deref(universe_visits));
    });
}

hh_status hh_sojourn_sample(hh_template_kind kind, size_t k, hh_params p, size_t n_samples, uint64_t seed,
                            uint64_t stream, double* mean, double* stderr_out)
{
    return try_([&] {
        hhwalk::Pcg32 rng(seed, stream);
        const auto sample = hhwalk::sample_sojourn(make_template(kind, k), params(p), n_samples, rng);
        deref(mean) = sample.mean();
        if (stderr_out != nullptr)
            *stderr_out = n_samples >= 2 ? sample.standard_error() : 0.0;
    });
}

hh_status hh_expected_sojourn_clique(size_t k, hh_params p, double* out)
{
    return try_([&] { deref(out) = hhwalk::expected_sojourn_clique(k, params(p)); });
}

hh_status hh_sojourn_pmf_clique(size_t k, hh_params p, uint64_t l, double* out)
{
    return try_([&] { deref(out) = hhwalk::sojourn_pmf_clique(k, params(p), l); });
}

hh_status hh_expected_sojourn_ring6(hh_params p, double* out)
{
    return try_([&] { deref(out) = hhwalk::expected_sojourn_ring6(params(p)); });
}

hh_status hh_ring_kernel(hh_params p, hh_ring_kernel_values* out)
{
    return try_([&] {
        const auto r = hhwalk::ring_kernel(params(p));
        deref(out) = {r.q_ss, r.q_sl, r.q_ls, r.q_ll, r.p_s, r.p_l, r.entry_short, r.entry_long, r.entry_exit};
    });
}

hh_status hh_expected_sojourn_ring(size_t k, hh_params p, double* out)
{
    return try_([&] { deref(out) = hhwalk::expected_sojourn_ring(k, params(p)); });
}

hh_status hh_sojourn_pmf_ring(size_t k, hh_params p, uint64_t m, double* out)
{
    return try_([&] { deref(out) = hhwalk::sojourn_pmf_ring(k, params(p), m); });
}

hh_status hh_expected_sojourn_generic(hh_template_kind kind, size_t k, hh_params p, double* out)
{
    return try_([&] { deref(out) = hhwalk::expected_sojourn_generic(make_template(kind, k), params(p)); });
}

hh_status hh_stationary_household(const hh_household* h, hh_params p, double* out)
{
    return try_([&] {
        const auto pi = hhwalk::stationary_household(deref(h).h, params(p));
        std::copy(pi.probabilities.begin(), pi.probabilities.end(), &deref(out));
    });
}

hh_status hh_stationary_srw(const hh_graph* g, double* out)
{
    return try_([&] {
        const auto pi = hhwalk::stationary_srw(deref(g).g);
        std::copy(pi.probabilities.begin(), pi.probabilities.end(), &deref(out));
    });
}

hh_status hh_poisson_limit(hh_limit_case which, double lambda, size_t n, size_t l, double beta, double* out)
{
    return try_([&] {
        hhwalk::PoissonLimit c;
        switch (which) {
        case HH_LIMIT_ALPHA_INF: c = hhwalk::PoissonLimit::alpha_inf; break;
        case HH_LIMIT_GAMMA_INF: c = hhwalk::PoissonLimit::gamma_inf; break;
        case HH_LIMIT_ALPHA0_GAMMA1: c = hhwalk::PoissonLimit::alpha0_gamma1; break;
        default: throw status_error{HH_ERR_INVALID_ARGUMENT, "unknown limit case"};
        }
        deref(out) = hhwalk::poisson_limit_distribution(c, lambda, n, l, beta);
    });
}

hh_status hh_oracle_solve(const hh_graph* g, hh_params p, hh_solve_method method, double tol, double* edge_pi,
                          double* node_pi, double* residual)
{
    return try_([&] {
        const auto& graph = deref(g).g;
        const hhwalk::EdgeChain chain(graph, params(p));
        hhwalk::SolveOptions opts;
        opts.method = method == HH_SOLVE_POWER ? hhwalk::SolveMethod::power_iteration : hhwalk::SolveMethod::direct;
        opts.tol = tol;
        const auto sol = hhwalk::solve_stationary(chain, opts);
        if (edge_pi != nullptr)
            std::copy(sol.edges.probabilities.begin(), sol.edges.probabilities.end(), edge_pi);
        if (node_pi != nullptr) {
            const auto nodes = hhwalk::project_edges_to_nodes(sol.edges, graph);
            std::copy(nodes.probabilities.begin(), nodes.probabilities.end(), node_pi);
        }
        if (residual != nullptr)
            *residual = sol.residual;
    });
}

hh_status hh_asym_triangle_closed_form(size_t n, size_t p, size_t m, hh_params params_in, double* edge_pi)
{
    return try_([&] {
        const auto pi = hhwalk::asym_triangle_closed_form(n, p, m, params(params_in));
        std::copy(pi.probabilities.begin(), pi.probabilities.end(), &deref(edge_pi));
    });
}

hh_status hh_balance_residual(const hh_graph* g, hh_params p, const double* edge_pi, double* out)
{
    return try_([&] {
        const auto& graph = deref(g).g;
        const hhwalk::EdgeChain chain(graph, params(p));
        deref(out) = chain.balance_residual({&deref(edge_pi), graph.directed_edge_count()});
    });
}

} // extern "C"
