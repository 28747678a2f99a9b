/* C interface to the hhwalk library.
 *
 * Objects are opaque handles created by hh_*_create / hh_*_load functions and
 * released with the matching hh_*_destroy. Every function returns an
 * hh_status; on failure hh_last_error() describes the problem (per thread).
 * Output arrays are caller-allocated; the required length is always
 * queryable first (node count, directed edge count, ...).
 */
#ifndef HHWALK_H
#define HHWALK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(HHWALK_BUILDING)
#    define HH_API __declspec(dllexport)
#  else
#    define HH_API __declspec(dllimport)
#  endif
#else
#  define HH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hh_status {
    HH_OK = 0,
    HH_ERR_INVALID_ARGUMENT = 1,
    HH_ERR_RETRIES_EXHAUSTED = 2,
    HH_ERR_TEMPLATE_SIZE_MISMATCH = 3,
    HH_ERR_NOT_AUTOMORPHIC = 4,
    HH_ERR_DEAD_END = 5,
    HH_ERR_DEGENERATE_PARAMS = 6,
    HH_ERR_SINGULAR_SYSTEM = 7,
    HH_ERR_NOT_CONVERGED = 8,
    HH_ERR_IO = 9,
    HH_ERR_BUFFER_TOO_SMALL = 10,
    HH_ERR_NULL_POINTER = 11,
    HH_ERR_INTERNAL = 12
} hh_status;

typedef struct hh_graph hh_graph;          /* plain simple undirected graph */
typedef struct hh_household hh_household;  /* household model */
typedef struct hh_template_map hh_template_map;

typedef struct hh_params {
    double alpha;
    double beta;
    double gamma;
} hh_params;

typedef enum hh_template_kind { HH_TEMPLATE_CLIQUE = 0, HH_TEMPLATE_RING = 1, HH_TEMPLATE_CUSTOM = 2 } hh_template_kind;

typedef enum hh_solve_method { HH_SOLVE_DIRECT = 0, HH_SOLVE_POWER = 1 } hh_solve_method;

typedef enum hh_limit_case { HH_LIMIT_ALPHA_INF = 0, HH_LIMIT_GAMMA_INF = 1, HH_LIMIT_ALPHA0_GAMMA1 = 2 } hh_limit_case;

typedef struct hh_ring_kernel {
    double q_ss, q_sl, q_ls, q_ll;
    double p_s, p_l;
    double entry_short, entry_long, entry_exit;
} hh_ring_kernel_values;

/* Pass as start_prev/start_cur to start from a uniformly drawn directed edge. */
#define HH_RANDOM_START UINT32_MAX

HH_API const char* hh_last_error(void);
HH_API const char* hh_status_name(hh_status status);
HH_API const char* hh_version(void);
HH_API const char* hh_rng_algorithm(void);

/* ---- graphs ---------------------------------------------------------- */

HH_API hh_status hh_graph_create(size_t node_count, const uint32_t* edge_u, const uint32_t* edge_v, size_t edge_count,
                                 hh_graph** out);
HH_API hh_status hh_graph_load(const char* path, hh_graph** out);
HH_API hh_status hh_graph_save(const hh_graph* g, const char* path);
HH_API void hh_graph_destroy(hh_graph* g);

HH_API hh_status hh_graph_node_count(const hh_graph* g, size_t* out);
HH_API hh_status hh_graph_edge_count(const hh_graph* g, size_t* out);
HH_API hh_status hh_graph_degree(const hh_graph* g, uint32_t node, size_t* out);
/* Sorted neighbors of `node`; *written receives the degree. */
HH_API hh_status hh_graph_neighbors(const hh_graph* g, uint32_t node, uint32_t* out, size_t capacity, size_t* written);
/* Directed edges in index order, as (source, target) arrays of length 2|E|. */
HH_API hh_status hh_graph_directed_edges(const hh_graph* g, uint32_t* sources, uint32_t* targets, size_t capacity);
HH_API hh_status hh_graph_is_connected(const hh_graph* g, int* out);
HH_API hh_status hh_graph_has_triangle(const hh_graph* g, int* out);

/* Poisson(lambda) degrees conditioned on >= 1 with even sum. */
HH_API hh_status hh_sample_poisson_degrees(size_t n, double lambda, uint64_t seed, uint64_t stream, uint32_t* out);
/* Simple connected configuration-model graph; max_retries = 0 picks the default. */
HH_API hh_status hh_configuration_model(const uint32_t* degrees, size_t n, uint64_t seed, uint64_t stream,
                                        size_t max_retries, hh_graph** out);

/* Triangle 0-1-2 with n, p, m pendant nodes on 0, 1, 2. */
HH_API hh_status hh_asym_triangle_graph(size_t n, size_t p, size_t m, hh_graph** out);

/* ---- household models ------------------------------------------------ */

/* Degree -> template mapping. Degrees without an entry use `fallback`. */
HH_API hh_status hh_template_map_create(hh_template_kind fallback, hh_template_map** out);
HH_API hh_status hh_template_map_set(hh_template_map* map, size_t degree, hh_template_kind kind);
HH_API hh_status hh_template_map_set_custom(hh_template_map* map, size_t degree, const uint32_t* edge_u,
                                            const uint32_t* edge_v, size_t edge_count);
HH_API void hh_template_map_destroy(hh_template_map* map);

HH_API hh_status hh_household_expand(const hh_graph* universe, const hh_template_map* templates, hh_household** out);
HH_API hh_status hh_household_load(const char* edge_path, const char* community_path, hh_household** out);
HH_API hh_status hh_household_save(const hh_household* h, const char* edge_path, const char* community_path);
HH_API void hh_household_destroy(hh_household* h);

/* Borrowed views; valid while the household lives. */
HH_API hh_status hh_household_graph(const hh_household* h, const hh_graph** out);
HH_API hh_status hh_household_universe(const hh_household* h, const hh_graph** out);
HH_API hh_status hh_household_community_count(const hh_household* h, size_t* out);
HH_API hh_status hh_household_community_of(const hh_household* h, uint32_t* out, size_t capacity);
/* Template name ("C4", "R7", ...) of a community, NUL-terminated. */
HH_API hh_status hh_household_community_template(const hh_household* h, uint32_t community, char* out,
                                                 size_t capacity);
HH_API hh_status hh_household_arm_of(const hh_household* h, uint32_t node, uint32_t* out);
/* Violations joined by '\n'; *count receives the number of violations. */
HH_API hh_status hh_household_validate(const hh_household* h, size_t* count, char* out, size_t capacity);
HH_API hh_status hh_common_neighbors(const hh_household* h, uint32_t u, uint32_t v, uint32_t* out, size_t capacity,
                                     size_t* written);

/* ---- walks ----------------------------------------------------------- */

/* Unnormalized weights over the sorted neighbors of cur. */
HH_API hh_status hh_transition_weights(const hh_graph* g, hh_params p, uint32_t prev, uint32_t cur, double* weights,
                                       size_t capacity, size_t* written);

/* T-step walk. node_visits: node_count entries; community_visits may be
 * NULL, otherwise community_count entries. */
HH_API hh_status hh_walk_run(const hh_household* h, hh_params p, uint64_t steps, uint64_t seed, uint64_t stream,
                             uint32_t start_prev, uint32_t start_cur, uint64_t* node_visits,
                             uint64_t* community_visits);
/* Trajectory of `steps` states after the start. */
HH_API hh_status hh_walk_trajectory(const hh_graph* g, hh_params p, uint64_t steps, uint64_t seed, uint64_t stream,
                                    uint32_t start_prev, uint32_t start_cur, uint32_t* prev_out, uint32_t* cur_out);
/* Collapsed community walk: visits per universe node over `transitions`
 * community changes. */
HH_API hh_status hh_walk_ystar(const hh_household* h, hh_params p, uint64_t transitions, uint64_t seed,
                               uint64_t stream, uint64_t* universe_visits);
/* Sojourn samples on the template-plus-arms gadget. */
HH_API hh_status hh_sojourn_sample(hh_template_kind kind, size_t k, hh_params p, size_t n_samples, uint64_t seed,
                                   uint64_t stream, double* mean, double* stderr_out);

/* ---- analytics ------------------------------------------------------- */

HH_API hh_status hh_expected_sojourn_clique(size_t k, hh_params p, double* out);
HH_API hh_status hh_sojourn_pmf_clique(size_t k, hh_params p, uint64_t l, double* out);
HH_API hh_status hh_expected_sojourn_ring6(hh_params p, double* out);
HH_API hh_status hh_ring_kernel(hh_params p, hh_ring_kernel_values* out);
HH_API hh_status hh_expected_sojourn_ring(size_t k, hh_params p, double* out);
HH_API hh_status hh_sojourn_pmf_ring(size_t k, hh_params p, uint64_t m, double* out);
/* Exact absorbing-chain solve on the gadget (clique or ring templates). */
HH_API hh_status hh_expected_sojourn_generic(hh_template_kind kind, size_t k, hh_params p, double* out);
HH_API hh_status hh_stationary_household(const hh_household* h, hh_params p, double* out);
HH_API hh_status hh_stationary_srw(const hh_graph* g, double* out);
HH_API hh_status hh_poisson_limit(hh_limit_case which, double lambda, size_t n, size_t l, double beta, double* out);

/* ---- exact edge-chain oracle ----------------------------------------- */

/* Edge distribution (2|E| entries, graph's directed edge order) and/or node
 * projection (node_count entries); either output may be NULL. */
HH_API hh_status hh_oracle_solve(const hh_graph* g, hh_params p, hh_solve_method method, double tol,
                                 double* edge_pi, double* node_pi, double* residual);
HH_API hh_status hh_asym_triangle_closed_form(size_t n, size_t p, size_t m, hh_params params, double* edge_pi);
/* || pi P - pi ||_1 for an edge distribution on g. */
HH_API hh_status hh_balance_residual(const hh_graph* g, hh_params p, const double* edge_pi, double* out);

#ifdef __cplusplus
}
#endif

#endif /* HHWALK_H */
